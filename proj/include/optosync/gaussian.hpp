#ifndef OPTOSYNC_GAUSSIAN_HPP
#define OPTOSYNC_GAUSSIAN_HPP

#include "optosync/linalg.hpp"
#include "optosync/meanfield.hpp"
#include "optosync/model.hpp"
#include "optosync/params.hpp"

#include <optional>
#include <string>
#include <vector>

namespace optosync {

// sigma_ij = <{U_i,U_j}>/2 - <U_i><U_j> over (x, y, q1, p1, q2, p2).
// Vacuum: identity/2.
Mat vacuum_covariance(int n_modes = 3);

// Cavity at vacuum, mirrors thermally occupied: diag (2n+1)/2 on the mirror
// quadratures. n = 0 reproduces the vacuum.
Mat thermal_start_covariance(double n_m1, double n_m2);

struct CovTrajectory {
    std::vector<double> t;
    std::vector<Mat> sigma;
};

struct PropagateOptions {
    double rtol = 1e-8;
    double atol = 1e-10;
    bool check_physical = true; // throw UnphysicalState below 1/2 - physical_slack
    // Default per the solver contract. The momentum-only damping of this
    // model is not completely positive and genuinely dips a few 1e-4 below
    // the vacuum bound early in a transient from vacuum, so long scenario
    // runs widen this to 1e-3.
    double physical_slack = 1e-6;
};

// Integrates d(sigma)/dt = A(t) sigma + sigma A(t)^T + D on a uniform output
// grid; every emitted matrix is symmetrized.
CovTrajectory propagate_covariance(const Mat& sigma0, double t0, double t1, double sample_dt,
                                   const SystemParams& p, double coupling_g_eff,
                                   const PropagateOptions& opt = {});

// Runs until sigma repeats itself from one modulation period to the next
// (entrywise tolerance), or until t_cap; returns one final period.
struct PeriodicCovariance {
    CovTrajectory window;
    double t_start = 0.0;
    bool converged = false;
    double residual = 0.0;
};
PeriodicCovariance settle_covariance(const Mat& sigma0, const SystemParams& p,
                                     double coupling_g_eff, double sample_dt,
                                     double abs_tol = 1e-5, double t_cap = 0.0);

// Variance of quadrature `index` over the zero-point level; < 1 means squeezed.
double quadrature_variance_ratio(const Mat& sigma, int index);

// S = 1 / <q_-^2 + p_-^2>, difference coordinates of the two mirrors. The
// first-moment contribution enters through `means`; in [0, 1].
double synchronization_measure(const Mat& sigma, const MeanFieldState& means);

// Rows/columns (q1, p1, q2, p2) of the full covariance matrix.
Mat reduced_mirror_block(const Mat& sigma);

// Moduli of the pairwise eigenvalues of i*Omega*sigma, ascending; >= 1/2 for
// a physical state. Throws NumericalDegeneracy if pairs fail to match.
std::vector<double> symplectic_eigenvalues(const Mat& sigma);

// Entanglement of a two-mode covariance matrix: momentum sign flip on the
// second mode, then max(0, -log2(2 nu_min)) of the flipped matrix.
double logarithmic_negativity(const Mat& sigma2);

// Von Neumann entropy of a Gaussian state, in bits.
double gaussian_entropy(const Mat& sigma);

// I = S(A) + S(B) - S(AB) for a two-mode covariance matrix.
double mutual_information(const Mat& sigma2);

// One row of derived observables; the CSV schema shared by both solvers.
struct GaussianObservables {
    double var_q1 = 0.0, var_p1 = 0.0, var_q2 = 0.0, var_p2 = 0.0; // raw variances
    double var_q1_ratio = 0.0, var_q2_ratio = 0.0;                 // over zero point
    double sync = 0.0;
    double log_neg = 0.0;
    double mutual_info = 0.0;
};
GaussianObservables observables_from(const Mat& sigma, const MeanFieldState& means);

// Smallest symplectic eigenvalue (physicality witness).
double min_symplectic_eigenvalue(const Mat& sigma);

// Per-mode uncertainty products var(q) var(p) - cov(q,p)^2; >= 1/4 physically.
std::vector<double> uncertainty_products(const Mat& sigma);

// Monodromy-based stability of the time-periodic fluctuation dynamics.
struct StabilityReport {
    std::vector<double> moduli; // eigenvalue moduli of the one-period propagator
    double period = 0.0;
    bool stable = false; // all moduli < 1
};
StabilityReport floquet_stability(const SystemParams& p, double coupling_g_eff);

// Algebraic stationary covariance of the unmodulated dynamics,
// A sigma + sigma A^T + D = 0 with A evaluated at t = 0 and eps = 0.
Mat steady_covariance_unmodulated(const SystemParams& p, double coupling_g_eff);

// Whitespace-delimited text snapshot (one matrix row per line) and its
// inverse. Throws IoError on malformed input.
void write_covariance_snapshot(const Mat& sigma, const std::string& path);
Mat read_covariance_snapshot(const std::string& path);

} // namespace optosync

#endif
