#ifndef OPTOSYNC_LINDBLAD_HPP
#define OPTOSYNC_LINDBLAD_HPP

#include "optosync/gaussian.hpp"
#include "optosync/params.hpp"
#include "optosync/spmm.hpp"

#include <array>
#include <optional>
#include <vector>

namespace optosync {

// Truncation sizes of the three-mode product Fock space (cavity, mirror 1,
// mirror 2). The total dimension is capped so superoperator-free products
// stay tractable.
struct FockConfig {
    int n_cav = 8;
    int n_m1 = 6;
    int n_m2 = 6;
    int budget = 20000;

    int dim() const { return n_cav * n_m1 * n_m2; }
    std::array<int, 3> dims() const { return {n_cav, n_m1, n_m2}; }
    void validate() const; // throws ConfigError
};

// Mode ladder and quadrature operators embedded into the product space.
struct OperatorSet {
    SparseOp a, b1, b2;          // annihilation
    SparseOp q1, p1, q2, p2;     // mirror quadratures
    SparseOp num_cav, num_m1, num_m2;
};

// Truncated single-mode annihilation operator, a|n> = sqrt(n)|n-1>.
SparseOp destroy_op(int n);

OperatorSet build_operators(const FockConfig& cfg);

// Full Hamiltonian at time t (Hermitian).
SparseOp build_hamiltonian(const SystemParams& p, const FockConfig& cfg, double t);

// Sampled density operators plus bookkeeping from one integration.
struct MasterTrajectory {
    std::vector<double> t;
    std::vector<CMatrix> rho;
    // earliest sample where some mode's top Fock level held >= leak_threshold
    std::optional<double> leak_time;
    double max_top_population = 0.0;
};

struct MasterOptions {
    double rtol = 1e-8;
    double atol = 1e-10;
    double leak_threshold = 1e-3;
    bool throw_on_leak = false; // results past leak_time are untrusted either way
};

// Precomputes the operator algebra once; one instance drives one run.
class LindbladSystem {
public:
    LindbladSystem(const SystemParams& p, const FockConfig& cfg);

    int dim() const { return cfg_.dim(); }
    const FockConfig& config() const { return cfg_; }
    const OperatorSet& ops() const { return ops_; }
    const SystemParams& params() const { return params_; }

    // drho/dt = -i[H(t), rho] + kappa D[a] + gamma_1 D[b1] + gamma_2 D[b2]
    // with D[L] = 2 L rho L^dag - L^dag L rho - rho L^dag L.
    void rhs(double t, const CMatrix& rho, CMatrix& out) const;

    MasterTrajectory integrate(const CMatrix& rho0, double t0, double t1, double sample_dt,
                               const MasterOptions& opt = {}) const;

    // Top-of-truncation population per mode (diagonal sums).
    std::array<double, 3> top_level_populations(const CMatrix& rho) const;

    GaussianObservables observables(const CMatrix& rho) const;

private:
    SystemParams params_;
    FockConfig cfg_;
    OperatorSet ops_;
    SparseOp h_static_;       // everything except the modulated spring term
    SparseOp h_mod_;          // (omega_m/2) q1^2, scaled by eps sin^2(Omega t)
    SparseOp a_dag_, b1_dag_, b2_dag_;
    SparseOp q1_sq_, q2_sq_, p1_sq_, p2_sq_, sync_op_;
    std::vector<double> num_cav_diag_, num_m1_diag_, num_m2_diag_;
    mutable CMatrix w_static_, w_mod_, w_jump_, w_pair_;
};

cplx expectation(const CMatrix& rho, const SparseOp& op);

// Reduced density operator over the modes flagged in `keep` (original order).
CMatrix partial_trace(const CMatrix& rho, std::span<const int> dims, std::span<const bool> keep);

// log2 of the trace norm of the partial transpose over the first factor of a
// two-mode state with dimensions (dim_a, dim_b).
double log_negativity_dm(const CMatrix& rho2, int dim_a, int dim_b);

double von_neumann_entropy_dm(const CMatrix& rho);
double mutual_information_dm(const CMatrix& rho2, int dim_a, int dim_b);

// Normalized truncated coherent state |alpha> of a single mode.
std::vector<cplx> coherent_vector(int n, cplx alpha);

// Pure product state from per-mode vectors.
CMatrix product_state(std::span<const std::vector<cplx>> mode_vectors);

// Text dump of a density operator, one row per line, entries as
// "re im" pairs; and its inverse.
void write_density_snapshot(const CMatrix& rho, const std::string& path);
CMatrix read_density_snapshot(const std::string& path);

} // namespace optosync

#endif
