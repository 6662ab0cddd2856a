#pragma once

#include <span>
#include <vector>

namespace kzc::est {

/// One finite-drive-rate curve entering a scaling collapse: a series y(t)
/// measured at drive scale tau. t and y are paired and must be positive.
struct CollapseCurve {
    double tau = 0.0;
    std::vector<double> t;
    std::vector<double> y;

    void validate() const;
};

/// Collapse quality of the rescaling u = ln t - alpha_t ln tau,
/// v = ln y - alpha_l ln tau: all curves are pooled in (u, v), one penalized
/// cubic spline is fit through the pool, and the residual is the pooled
/// misfit *in excess of* what the same spline recipe leaves on each curve
/// alone. Identical curves therefore score exactly zero, and the score
/// measures genuine inter-curve disagreement rather than curve roughness.
/// Throws std::invalid_argument when the scaled curve ranges do not overlap.
double collapse_residual(std::span<const CollapseCurve> curves, double alpha_l, double alpha_t);

struct CollapseOptions {
    double alpha_min = 0.0;
    double alpha_max = 1.2;
    double grid_step = 0.05;  ///< coarse scan resolution
    double refine_tol = 1e-4; ///< pattern-search termination step
};

struct CollapseResult {
    double alpha_l = 0.0; ///< length-rescaling exponent
    double alpha_t = 0.0; ///< time-rescaling exponent
    double alpha_l_err = 0.0;
    double alpha_t_err = 0.0;
    double residual = 0.0;
    bool degenerate = false; ///< tau values carry no leverage; exponents unset
};

/// Minimizes the collapse residual over (alpha_l, alpha_t) by a coarse grid
/// scan plus deterministic pattern-search refinement. Errors are jackknife
/// spreads over leave-one-curve-out refits. Requires >= 3 curves; when the
/// tau values span less than a factor of 4 the result is flagged degenerate
/// (equal-tau inputs rescale rigidly, so the residual cannot prefer any
/// exponent) and the exponents are not meaningful.
CollapseResult optimize_collapse(std::span<const CollapseCurve> curves,
                                 const CollapseOptions& options = {});

} // namespace kzc::est
