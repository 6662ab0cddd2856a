#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace kzc::rydberg {

/// Rectangular atom array with unit-square geometry; site index runs
/// row-major (site = row * cols + col). The exact-diagonalization backend
/// caps the array at 24 sites — beyond that the state vector alone outgrows
/// desk-scale memory.
struct ArrayGeometry {
    int rows = 1;
    int cols = 1;
    double spacing = 1.0;

    int n_sites() const { return rows * cols; }
    std::pair<double, double> position(int site) const;
    /// Throws std::invalid_argument if empty, more than 24 sites, or
    /// nonpositive spacing.
    void validate() const;
};

/// Region of flipped sublattice registration used to prepare ordered domains:
/// flip[site] != 0 marks sites whose occupation pattern is inverted relative
/// to the background checkerboard.
struct DetuningMask {
    int rows = 0;
    int cols = 0;
    std::vector<std::uint8_t> flip;

    void validate(const ArrayGeometry& geometry) const;
    /// Mask with a flipped rectangle [c0, c0+w) x [r0, r0+h).
    static DetuningMask rectangle(const ArrayGeometry& geometry, int r0, int c0, int h, int w);
};

/// Van der Waals couplings between chosen site pairs.
struct PairCoupling {
    int i = 0;
    int j = 0;
    double v = 0.0;
};

/// Drive and interaction parameters. The interaction strength is set by the
/// blockade radius: R_b = (V0 / Omega)^(1/6), so V0 = Omega (R_b/a)^6 a^6 and
/// the nearest-neighbor coupling is Omega (R_b/a)^6.
struct RydbergParams {
    double omega = 1.0;     ///< Rabi frequency; the energy unit
    double delta = 0.0;     ///< uniform detuning
    double rb_over_a = 1.1; ///< blockade radius in units of the spacing
    int shells = 2;         ///< keep couplings up to the k-th neighbor distance; 0 = all

    void validate() const;
};

/// Couplings V(r) = V0 / r^6 for all pairs within the shell cutoff, ordered
/// by (i, j). With shells = 2 this keeps nearest and diagonal neighbors —
/// beyond that V has dropped by 27x per shell step and is negligible at
/// R_b/a near 1.
std::vector<PairCoupling> interaction_pairs(const ArrayGeometry& geometry,
                                            const RydbergParams& params);

} // namespace kzc::rydberg
