#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kzc/io/config.hpp"

namespace kzc::io {

/// A validated config failed during execution. Maps to exit code 3 at the
/// CLI; the message names the failing stage.
class EngineError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct RunOutcome {
    std::filesystem::path out_dir;
    nlohmann::json summary;           ///< parsed contents of summary.json
    std::vector<std::string> outputs; ///< run-dir-relative paths, sorted
};

/// Executes a validated config end to end: creates the output directory,
/// stores the canonical config and an incomplete manifest, dispatches the
/// engine (which writes its data files), writes summary.json, and finalizes
/// the manifest with the wall clock and the output index.
///
/// Identical config + seeds produce byte-identical data files; the manifest
/// is the only file whose bytes may differ between reruns (wall clock).
/// `log`, when non-null, receives progress lines.
RunOutcome run(const RunConfig& config, std::ostream* log = nullptr);

} // namespace kzc::io
