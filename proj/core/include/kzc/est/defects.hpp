#pragma once

#include "kzc/est/correlation.hpp"

#include <cstdint>
#include <span>

namespace kzc::est {

/// Characteristic length from the defect density: the inverse density of
/// broken order (domain walls in 2D, kinks in 1D). Cheap, real-space
/// cross-check of the second-moment correlation length.
struct DefectResult {
    bool infinite = false;  ///< no defects at all (perfectly ordered)
    double density = 0.0;   ///< defects per bond (2D) or per link (1D)
    double length = 0.0;    ///< 1/density; unspecified when infinite
};

/// 2D domain-wall length on a periodic lattice of +-1 spins (row-major).
/// In the ferromagnetic channel a wall crosses every bond with s_i s_j < 0;
/// in the staggered channel every bond with s_i s_j > 0.
DefectResult defect_length_2d(std::span<const std::int8_t> spins, int nx, int ny,
                              Channel channel);

/// 1D kink length on a periodic chain of +-1 values (ferromagnetic order).
DefectResult defect_length_1d(std::span<const std::int8_t> spins);

} // namespace kzc::est
