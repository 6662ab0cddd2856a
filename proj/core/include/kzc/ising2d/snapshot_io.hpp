#pragma once

#include "kzc/ising2d/dynamics.hpp"

#include <filesystem>

namespace kzc::ising2d {

/// Packed snapshot file ("KZIS"): little-endian header (magic, version, lx,
/// ly, time, temperature, energy per site, magnetization) followed by the
/// spin field as a row-major bitmap, one bit per site (1 = spin up),
/// least-significant bit first. A 512 x 512 snapshot is 32 KiB + header.
void write_snapshot(const std::filesystem::path& path, const LatticeSnapshot& snapshot);

/// Reads a snapshot written by write_snapshot; throws std::runtime_error on
/// malformed files (wrong magic, truncation, impossible header values).
LatticeSnapshot read_snapshot(const std::filesystem::path& path);

} // namespace kzc::ising2d
