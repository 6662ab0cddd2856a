#pragma once

#include <filesystem>

#include "kzc/rydberg/hamiltonian.hpp"

namespace kzc::rydberg {

/// Writes a state-vector checkpoint in the binary KZRY format (version 1,
/// little-endian): magic "KZRY", u32 version, u32 n_sites, f64 time, then
/// 2^n_sites amplitude pairs (re, im) as f64. The format is self-describing
/// enough for a reader to validate the payload length exactly.
void write_state(const std::filesystem::path& path, const StateVector& psi);

/// Reads a KZRY checkpoint back. Throws std::runtime_error on missing files,
/// bad magic, unsupported versions, or payload-size mismatches.
StateVector read_state(const std::filesystem::path& path);

} // namespace kzc::rydberg
