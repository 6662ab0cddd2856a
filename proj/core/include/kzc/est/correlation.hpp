#pragma once

#include <memory>
#include <vector>

namespace kzc::est {

/// Real scalar field on a periodic rectangular lattice, row-major
/// (v[y * nx + x]). Spin configurations enter as +-1 values.
struct Field2D {
    int nx = 0;
    int ny = 0;
    std::vector<double> v;

    void validate() const; ///< throws unless nx, ny >= 1 and v.size() == nx*ny
};

/// Structure factor S(q) = |sum_r v(r) e^{-iq r}|^2 / N on the full discrete
/// wavevector grid (FFT index order), plus the axis-averaged real-space
/// correlation function C(r) = (1/N) sum_r' v(r') v(r' + r e_x) (averaged
/// over the two axes). `samples` counts the configurations averaged in.
struct CorrelationData {
    int nx = 0;
    int ny = 0;
    long samples = 0;
    std::vector<double> s_q;    // s_q[qy * nx + qx]
    std::vector<double> c_axis; // r = 0 .. min(nx,ny)/2

    double s_at(int qx, int qy) const; ///< wraps indices mod the grid
};

/// Accumulates the ensemble-averaged structure factor over configurations of
/// one lattice shape. Averaging S(q) over replicas *before* taking ratios is
/// what keeps the correlation-length estimator well behaved; per-replica
/// ratios are biased and can lose the peak entirely.
class StructureFactorAccum {
  public:
    StructureFactorAccum(int nx, int ny);
    ~StructureFactorAccum();

    StructureFactorAccum(StructureFactorAccum&&) noexcept;
    StructureFactorAccum& operator=(StructureFactorAccum&&) noexcept;

    void add(const Field2D& field);
    long samples() const;

    /// Ensemble mean; throws std::logic_error when no samples were added.
    CorrelationData mean() const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Single-configuration structure factor (an ensemble of one).
CorrelationData structure_factor(const Field2D& field);

/// Which ordering peak the correlation length is measured around.
enum class Channel { ferromagnetic, staggered };

/// Second-moment correlation length from the ensemble-averaged structure
/// factor: xi = (1/q1) sqrt(S(q_op)/S(q_op + q1) - 1) with q_op the ordering
/// wavevector (0 or (pi,pi)) and q1 the smallest nonzero wavevector; the
/// off-peak value is averaged over the four nearest wavevectors.
struct XiResult {
    enum class Status {
        ok,
        no_peak,   ///< S(q_op) <= S(q_op+q1): no ordering peak resolved
        saturated, ///< xi beyond min(nx,ny)/4: finite-size dominated
    };
    Status status = Status::ok;
    double xi = 0.0; ///< meaningful for ok and saturated
};

/// Preconditions: nx == ny >= 8, and even dimensions for the staggered
/// channel. Throws std::invalid_argument otherwise.
XiResult second_moment_xi(const CorrelationData& mean_s, Channel channel);

} // namespace kzc::est
