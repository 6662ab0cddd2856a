#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace kzc {

/// SHA-256 digest of a byte string, returned as lowercase hex. Used to stamp
/// the exact resolved run configuration into manifests so a run directory can
/// be matched back to the config that produced it.
std::string sha256_hex(std::string_view data);

} // namespace kzc
