#include "kzc/io/manifest.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "kzc/version.hpp"

namespace kzc::io {

namespace {
using nlohmann::json;
}

void write_manifest(const std::filesystem::path& dir, const RunManifest& manifest) {
    const json j{{"schema_version", manifest.schema_version},
                 {"toolkit_version", manifest.toolkit_version},
                 {"engine", manifest.engine},
                 {"config_hash", manifest.config_hash},
                 {"seeds", manifest.seeds},
                 {"complete", manifest.complete},
                 {"wall_clock_seconds", manifest.wall_clock_seconds},
                 {"outputs", manifest.outputs}};
    const auto path = dir / "manifest.json";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_manifest: cannot open " + path.string());
    out << j.dump(2) << '\n';
    if (!out) throw std::runtime_error("write_manifest: write failed for " + path.string());
}

RunManifest read_manifest(const std::filesystem::path& dir) {
    const auto path = dir / "manifest.json";
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_manifest: cannot open " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::runtime_error("read_manifest: " + path.string() + ": " + e.what());
    }
    try {
        RunManifest manifest;
        manifest.schema_version = j.at("schema_version").get<int>();
        if (manifest.schema_version != kSchemaVersion)
            throw std::runtime_error("unsupported schema_version " +
                                     std::to_string(manifest.schema_version));
        manifest.toolkit_version = j.at("toolkit_version").get<std::string>();
        manifest.engine = j.at("engine").get<std::string>();
        manifest.config_hash = j.at("config_hash").get<std::string>();
        manifest.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
        manifest.complete = j.at("complete").get<bool>();
        manifest.wall_clock_seconds = j.at("wall_clock_seconds").get<double>();
        manifest.outputs = j.at("outputs").get<std::vector<std::string>>();
        if (manifest.config_hash.rfind("sha256:", 0) != 0)
            throw std::runtime_error("config_hash must start with 'sha256:'");
        return manifest;
    } catch (const json::exception& e) {
        throw std::runtime_error("read_manifest: " + path.string() + ": " + e.what());
    }
}

} // namespace kzc::io
