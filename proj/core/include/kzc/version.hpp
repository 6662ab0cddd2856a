#pragma once

namespace kzc {

/// Toolkit version recorded in run manifests and summary artifacts.
inline constexpr const char* kVersion = "0.1.0";

/// Schema version stamped into every JSON artifact this toolkit writes.
inline constexpr int kSchemaVersion = 1;

} // namespace kzc
