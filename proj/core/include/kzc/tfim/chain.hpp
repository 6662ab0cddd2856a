#pragma once

namespace kzc::tfim {

/// A transverse-field chain ramp in momentum space. The transverse field is
/// parametrized as h = 1 - g so that g is the signed distance from the
/// transition: g < 0 is the disordered (large-field) side, g > 0 the ordered
/// side, and the drive g(t) = sign(t) |t/tau|^p crosses g = 0 at t = 0.
///
/// With periodic chains and an even number of sites, the dynamics splits
/// into independent two-level problems at momenta k = (2m+1) pi / L; each
/// mode starts in its ground state at g_start and is integrated through the
/// crossing to g_end, where the excitation probability p_k is read off
/// against the instantaneous eigenbasis.
struct ChainSpec {
    int L = 256;             ///< sites; even, >= 8
    double tau = 100.0;      ///< ramp scale (inverse rate at the crossing)
    double p = 1.0;          ///< ramp power
    double g_start = -1.0;   ///< must be < 0 (disordered side)
    double g_end = 1.0;      ///< in (0, 1]; g_end = 1 is zero transverse field
    double rel_tol = 1e-8;   ///< integrator relative tolerance

    /// Structural checks; throws std::invalid_argument. Depth of g_start
    /// relative to the freeze-out scale is checked by ramp_simulate, which
    /// knows tau.
    void validate() const;
};

} // namespace kzc::tfim
