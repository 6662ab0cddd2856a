#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace kzc::io {

/// All validation failures of one config file, each prefixed with the JSON
/// field path ("params.geometry.rows: must be >= 1"). what() joins them.
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(std::vector<std::string> errors);

    const std::vector<std::string>& errors() const { return errors_; }

  private:
    std::vector<std::string> errors_;
};

/// Command-line overrides applied during validation, before cross-field
/// checks run. A single --seed replaces the whole seed list.
struct ConfigOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::filesystem::path> out_dir;
    std::optional<int> threads;
};

/// A fully validated, normalized run declaration. `params` is the
/// engine-specific block with every documented default materialized, so two
/// configs describing the same run serialize identically. Engines trust it
/// without re-validation.
struct RunConfig {
    int schema_version = 1;
    std::string engine; ///< scaling | tfim1d | ising2d | rydberg | estimate | collapse
    std::vector<std::uint64_t> seeds{1};
    std::filesystem::path out_dir; ///< resolved output directory
    int threads = 1;
    nlohmann::json params;

    /// Canonical serialization stored alongside the outputs and hashed into
    /// the manifest. Contains exactly the fields that determine the data
    /// bytes: schema_version, engine, seeds, params — not out_dir or
    /// threads, which relocate or parallelize the same run.
    std::string canonical() const;
};

/// Default root for relative/unset output directories: $KZC_OUT_ROOT when
/// set, else ./kzc-runs.
std::filesystem::path default_out_root();

/// Parses and validates a config file. Every problem found is reported at
/// once in the thrown ConfigError; on success the returned config has all
/// defaults filled and all referenced files checked for existence. Relative
/// paths inside the config resolve against the config file's directory.
RunConfig validate_config(const std::filesystem::path& path, const ConfigOverrides& overrides = {});

/// Same, for an already-parsed JSON document. Relative paths resolve
/// against base_dir (the current directory when empty).
RunConfig validate_config_json(const nlohmann::json& j, const ConfigOverrides& overrides = {},
                               const std::filesystem::path& base_dir = {});

} // namespace kzc::io
