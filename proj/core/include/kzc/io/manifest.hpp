#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace kzc::io {

/// The reproducibility record of one run directory. A manifest is written
/// (with complete = false) before any data file, then rewritten once at the
/// end with the wall clock and the output index. config_hash is the SHA-256
/// of the canonical config stored next to it as config.json, so the manifest
/// plus that file pin the run bit-for-bit: data files carry no timestamps,
/// and the wall clock lives only here.
struct RunManifest {
    int schema_version = 1;
    std::string toolkit_version;
    std::string engine;
    std::string config_hash; ///< "sha256:<hex>" over the config.json bytes
    std::vector<std::uint64_t> seeds;
    bool complete = false;
    double wall_clock_seconds = 0.0;
    std::vector<std::string> outputs; ///< run-dir-relative paths, sorted
};

/// Serializes the manifest to <dir>/manifest.json (overwriting).
void write_manifest(const std::filesystem::path& dir, const RunManifest& manifest);

/// Reads and structurally validates <dir>/manifest.json; throws
/// std::runtime_error on missing or malformed files.
RunManifest read_manifest(const std::filesystem::path& dir);

} // namespace kzc::io
