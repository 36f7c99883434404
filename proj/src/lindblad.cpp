#include "optosync/lindblad.hpp"

#include "optosync/errors.hpp"
#include "optosync/model.hpp"
#include "optosync/ode.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace optosync {

void FockConfig::validate() const {
    if (n_cav < 2 || n_m1 < 2 || n_m2 < 2)
        throw ConfigError("every Fock truncation must be at least 2");
    if (budget < 8) throw ConfigError("Fock budget too small");
    if (dim() > budget)
        throw ConfigError("total Fock dimension " + std::to_string(dim()) +
                          " exceeds the budget " + std::to_string(budget));
}

SparseOp destroy_op(int n) {
    std::vector<SparseOp::Triplet> t;
    t.reserve(n - 1);
    for (int k = 1; k < n; ++k) t.emplace_back(k - 1, k, std::sqrt(static_cast<double>(k)));
    return SparseOp::from_triplets(n, n, std::move(t));
}

OperatorSet build_operators(const FockConfig& cfg) {
    cfg.validate();
    const SparseOp ic = SparseOp::identity(cfg.n_cav);
    const SparseOp i1 = SparseOp::identity(cfg.n_m1);
    const SparseOp i2 = SparseOp::identity(cfg.n_m2);
    const SparseOp ac = destroy_op(cfg.n_cav);
    const SparseOp b1 = destroy_op(cfg.n_m1);
    const SparseOp b2 = destroy_op(cfg.n_m2);

    const double rt2 = std::numbers::sqrt2;
    const cplx i_unit(0.0, 1.0);
    auto q_of = [&](const SparseOp& b) { return cplx(1.0 / rt2) * (b + b.dagger()); };
    auto p_of = [&](const SparseOp& b) { return (cplx(1.0) / (i_unit * rt2)) * (b - b.dagger()); };

    OperatorSet s;
    s.a = kron(kron(ac, i1), i2);
    s.b1 = kron(kron(ic, b1), i2);
    s.b2 = kron(kron(ic, i1), b2);
    s.q1 = kron(kron(ic, q_of(b1)), i2);
    s.p1 = kron(kron(ic, p_of(b1)), i2);
    s.q2 = kron(kron(ic, i1), q_of(b2));
    s.p2 = kron(kron(ic, i1), p_of(b2));
    s.num_cav = kron(kron(ac.dagger() * ac, i1), i2);
    s.num_m1 = kron(kron(ic, b1.dagger() * b1), i2);
    s.num_m2 = kron(kron(ic, i1), b2.dagger() * b2);
    return s;
}

namespace {

// Time-independent part of H plus the modulated spring term, built from an
// operator set so LindbladSystem can reuse the pieces.
std::pair<SparseOp, SparseOp> hamiltonian_parts(const SystemParams& p, const OperatorSet& s) {
    const cplx i_unit(0.0, 1.0);
    const SparseOp q1_sq = s.q1 * s.q1;
    const SparseOp p1_sq = s.p1 * s.p1;
    const SparseOp q2_sq = s.q2 * s.q2;
    const SparseOp p2_sq = s.p2 * s.p2;

    SparseOp h_static = cplx(p.delta) * s.num_cav;
    h_static = h_static + cplx(0.5 * p.omega_m) * (p1_sq + q1_sq);
    h_static = h_static + cplx(0.5 * p.omega_m2()) * (p2_sq + q2_sq);
    h_static = h_static - cplx(p.g) * (s.num_cav * (s.q1 + s.q2));
    h_static = h_static + (i_unit * cplx(p.drive_e)) * (s.a.dagger() - s.a);

    SparseOp h_mod = cplx(0.5 * p.omega_m) * q1_sq;
    return {h_static, h_mod};
}

std::vector<double> diagonal_of(const SparseOp& m) {
    const auto& ptr = m.row_ptr();
    const auto& col = m.col_idx();
    const auto& val = m.values();
    std::vector<double> d(m.rows(), 0.0);
    for (int i = 0; i < m.rows(); ++i)
        for (int k = ptr[i]; k < ptr[i + 1]; ++k)
            if (col[k] == i) d[i] += val[k].real();
    return d;
}

} // namespace

SparseOp build_hamiltonian(const SystemParams& p, const FockConfig& cfg, double t) {
    const OperatorSet s = build_operators(cfg);
    auto [h_static, h_mod] = hamiltonian_parts(p, s);
    const double mod = p.mod_eps * std::pow(std::sin(p.mod_omega * t), 2);
    return h_static + cplx(mod) * h_mod;
}

LindbladSystem::LindbladSystem(const SystemParams& p, const FockConfig& cfg)
    : params_(p), cfg_(cfg), ops_(build_operators(cfg)) {
    auto [h_static, h_mod] = hamiltonian_parts(p, ops_);
    h_static_ = std::move(h_static);
    h_mod_ = std::move(h_mod);
    a_dag_ = ops_.a.dagger();
    b1_dag_ = ops_.b1.dagger();
    b2_dag_ = ops_.b2.dagger();
    q1_sq_ = ops_.q1 * ops_.q1;
    q2_sq_ = ops_.q2 * ops_.q2;
    p1_sq_ = ops_.p1 * ops_.p1;
    p2_sq_ = ops_.p2 * ops_.p2;
    // ((q1-q2)^2 + (p1-p2)^2)/2, the inverse of the synchronization measure
    const SparseOp dq = ops_.q1 - ops_.q2;
    const SparseOp dp = ops_.p1 - ops_.p2;
    sync_op_ = cplx(0.5) * (dq * dq + dp * dp);
    num_cav_diag_ = diagonal_of(ops_.num_cav);
    num_m1_diag_ = diagonal_of(ops_.num_m1);
    num_m2_diag_ = diagonal_of(ops_.num_m2);
    const int d = cfg_.dim();
    w_static_ = CMatrix(d, d);
    w_mod_ = CMatrix(d, d);
    w_jump_ = CMatrix(d, d);
    w_pair_ = CMatrix(d, d);
}

void LindbladSystem::rhs(double t, const CMatrix& rho, CMatrix& out) const {
    const int d = cfg_.dim();
    if (rho.rows() != d || rho.cols() != d || out.rows() != d || out.cols() != d)
        throw DimensionMismatch("density operator has the wrong dimension");

    const cplx minus_i(0.0, -1.0);
    const double mod = params_.mod_eps * std::pow(std::sin(params_.mod_omega * t), 2);

    // K = H(t) rho; the commutator is K - K^dag since both H and rho are
    // Hermitian (enforced at output samples).
    apply_left(h_static_, rho, w_static_);
    apply_left(h_mod_, rho, w_mod_);
    axpy(cplx(mod), w_mod_, w_static_);
    const CMatrix& k = w_static_;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) out(i, j) = minus_i * (k(i, j) - std::conj(k(j, i)));

    // Dissipators: rate * (2 L rho L^dag - N rho - rho N) with N = L^dag L
    // diagonal for ladder operators.
    struct Jump {
        const SparseOp* op;
        const SparseOp* op_dag;
        const std::vector<double>* number_diag;
        double rate;
    };
    const std::array<Jump, 3> jumps = {
        Jump{&ops_.a, &a_dag_, &num_cav_diag_, params_.kappa},
        Jump{&ops_.b1, &b1_dag_, &num_m1_diag_, params_.gamma_m1},
        Jump{&ops_.b2, &b2_dag_, &num_m2_diag_, params_.gamma_m2}};
    for (const Jump& jmp : jumps) {
        if (jmp.rate == 0.0) continue;
        apply_left(*jmp.op, rho, w_jump_);
        apply_right(w_jump_, *jmp.op_dag, w_pair_);
        axpy(cplx(2.0 * jmp.rate), w_pair_, out);
        const std::vector<double>& nd = *jmp.number_diag;
        for (int i = 0; i < d; ++i) {
            const double ni = nd[i];
            for (int j = 0; j < d; ++j) out(i, j) -= jmp.rate * (ni + nd[j]) * rho(i, j);
        }
    }
}

MasterTrajectory LindbladSystem::integrate(const CMatrix& rho0, double t0, double t1,
                                           double sample_dt, const MasterOptions& opt) const {
    const int d = cfg_.dim();
    if (rho0.rows() != d || rho0.cols() != d)
        throw DimensionMismatch("initial density operator has the wrong dimension");

    MasterTrajectory traj;
    CMatrix rho_buf(d, d), drho_buf(d, d);

    OdeRhs rhs_fn = [&](double t, std::span<const double> y, std::span<double> dy) {
        std::copy(y.begin(), y.end(), reinterpret_cast<double*>(rho_buf.data()));
        this->rhs(t, rho_buf, drho_buf);
        const double* src = reinterpret_cast<const double*>(drho_buf.data());
        std::copy(src, src + dy.size(), dy.begin());
    };

    std::vector<double> y(reinterpret_cast<const double*>(rho0.data()),
                          reinterpret_cast<const double*>(rho0.data()) + 2 * rho0.size());

    OdeOptions oopt;
    oopt.rtol = opt.rtol;
    oopt.atol = opt.atol;

    integrate_adaptive(
        rhs_fn, y, t0, t1, sample_dt,
        [&](double t, std::span<const double> yy) {
            CMatrix rho(d, d);
            std::copy(yy.begin(), yy.end(), reinterpret_cast<double*>(rho.data()));
            rho.hermitize();
            const double tr = rho.trace().real();
            if (std::abs(tr - 1.0) > 1e-6)
                throw UnphysicalState("density operator trace drifted to " + std::to_string(tr));
            rho *= cplx(1.0 / tr);
            const auto tops = top_level_populations(rho);
            const double worst = *std::max_element(tops.begin(), tops.end());
            traj.max_top_population = std::max(traj.max_top_population, worst);
            if (worst >= opt.leak_threshold && !traj.leak_time) {
                traj.leak_time = t;
                if (opt.throw_on_leak)
                    throw TruncationLeak("top Fock level population " + std::to_string(worst) +
                                         " at t=" + std::to_string(t));
            }
            traj.t.push_back(t);
            traj.rho.push_back(std::move(rho));
        },
        oopt);
    return traj;
}

std::array<double, 3> LindbladSystem::top_level_populations(const CMatrix& rho) const {
    std::array<double, 3> tops = {0.0, 0.0, 0.0};
    const auto [nc, n1, n2] = cfg_.dims();
    for (int ic = 0; ic < nc; ++ic)
        for (int i1 = 0; i1 < n1; ++i1)
            for (int i2 = 0; i2 < n2; ++i2) {
                const int idx = (ic * n1 + i1) * n2 + i2;
                const double pop = rho(idx, idx).real();
                if (ic == nc - 1) tops[0] += pop;
                if (i1 == n1 - 1) tops[1] += pop;
                if (i2 == n2 - 1) tops[2] += pop;
            }
    return tops;
}

GaussianObservables LindbladSystem::observables(const CMatrix& rho) const {
    GaussianObservables o;
    const double q1 = expectation(rho, ops_.q1).real();
    const double p1 = expectation(rho, ops_.p1).real();
    const double q2 = expectation(rho, ops_.q2).real();
    const double p2 = expectation(rho, ops_.p2).real();
    o.var_q1 = expectation(rho, q1_sq_).real() - q1 * q1;
    o.var_p1 = expectation(rho, p1_sq_).real() - p1 * p1;
    o.var_q2 = expectation(rho, q2_sq_).real() - q2 * q2;
    o.var_p2 = expectation(rho, p2_sq_).real() - p2 * p2;
    o.var_q1_ratio = o.var_q1 / kZeroPointVariance;
    o.var_q2_ratio = o.var_q2 / kZeroPointVariance;
    o.sync = 1.0 / expectation(rho, sync_op_).real();

    const std::array<int, 3> dims = cfg_.dims();
    const std::array<bool, 3> keep = {false, true, true};
    const CMatrix mirrors = partial_trace(rho, dims, keep);
    o.log_neg = std::max(0.0, log_negativity_dm(mirrors, cfg_.n_m1, cfg_.n_m2));
    o.mutual_info = mutual_information_dm(mirrors, cfg_.n_m1, cfg_.n_m2);
    return o;
}

cplx expectation(const CMatrix& rho, const SparseOp& op) {
    if (rho.rows() != op.cols() || rho.cols() != op.rows())
        throw DimensionMismatch("expectation shape mismatch");
    // tr(rho op) = sum_{ij} op(j,i) rho(i,j)
    const auto& ptr = op.row_ptr();
    const auto& col = op.col_idx();
    const auto& val = op.values();
    cplx s = 0.0;
    for (int j = 0; j < op.rows(); ++j)
        for (int k = ptr[j]; k < ptr[j + 1]; ++k) s += val[k] * rho(col[k], j);
    return s;
}

CMatrix partial_trace(const CMatrix& rho, std::span<const int> dims, std::span<const bool> keep) {
    const int n_modes = static_cast<int>(dims.size());
    if (static_cast<int>(keep.size()) != n_modes)
        throw DimensionMismatch("keep mask must match the mode count");
    int full = 1, kept = 1, traced = 1;
    for (int m = 0; m < n_modes; ++m) {
        full *= dims[m];
        (keep[m] ? kept : traced) *= dims[m];
    }
    if (rho.rows() != full || rho.cols() != full)
        throw DimensionMismatch("density operator does not match the mode dimensions");
    if (kept == 1 || kept == full)
        throw DimensionMismatch("keep mask must select a nonempty proper subset");

    // strides of each mode in the flat index
    std::vector<int> stride(n_modes, 1);
    for (int m = n_modes - 2; m >= 0; --m) stride[m] = stride[m + 1] * dims[m + 1];

    auto flat_index = [&](std::span<const int> kept_idx, std::span<const int> traced_idx) {
        int idx = 0, kk = 0, tt = 0;
        for (int m = 0; m < n_modes; ++m) idx += (keep[m] ? kept_idx[kk++] : traced_idx[tt++]) * stride[m];
        return idx;
    };

    std::vector<int> kept_dims, traced_dims;
    for (int m = 0; m < n_modes; ++m) (keep[m] ? kept_dims : traced_dims).push_back(dims[m]);

    auto unflatten = [](int idx, const std::vector<int>& ds) {
        std::vector<int> out(ds.size(), 0);
        for (int m = static_cast<int>(ds.size()) - 1; m >= 0; --m) {
            out[m] = idx % ds[m];
            idx /= ds[m];
        }
        return out;
    };

    CMatrix red(kept, kept);
    for (int r = 0; r < kept; ++r) {
        const std::vector<int> ri = unflatten(r, kept_dims);
        for (int c = 0; c < kept; ++c) {
            const std::vector<int> ci = unflatten(c, kept_dims);
            cplx s = 0.0;
            for (int tr = 0; tr < traced; ++tr) {
                const std::vector<int> ti = unflatten(tr, traced_dims);
                s += rho(flat_index(ri, ti), flat_index(ci, ti));
            }
            red(r, c) = s;
        }
    }
    return red;
}

double log_negativity_dm(const CMatrix& rho2, int dim_a, int dim_b) {
    if (rho2.rows() != dim_a * dim_b || rho2.cols() != dim_a * dim_b)
        throw DimensionMismatch("two-mode state dimension mismatch");
    CMatrix pt(rho2.rows(), rho2.cols());
    for (int ia = 0; ia < dim_a; ++ia)
        for (int ib = 0; ib < dim_b; ++ib)
            for (int ja = 0; ja < dim_a; ++ja)
                for (int jb = 0; jb < dim_b; ++jb)
                    pt(ia * dim_b + ib, ja * dim_b + jb) = rho2(ja * dim_b + ib, ia * dim_b + jb);
    // partial transpose of a Hermitian matrix is Hermitian: trace norm from
    // its eigenvalues
    double trace_norm = 0.0;
    for (const double lam : herm_eigvals(pt)) trace_norm += std::abs(lam);
    return std::log2(trace_norm);
}

double von_neumann_entropy_dm(const CMatrix& rho) {
    double s = 0.0;
    for (const double lam : herm_eigvals(rho))
        if (lam > 1e-15) s -= lam * std::log2(lam);
    return s;
}

double mutual_information_dm(const CMatrix& rho2, int dim_a, int dim_b) {
    const std::array<int, 2> dims = {dim_a, dim_b};
    const std::array<bool, 2> keep_a = {true, false};
    const std::array<bool, 2> keep_b = {false, true};
    const CMatrix ra = partial_trace(rho2, dims, keep_a);
    const CMatrix rb = partial_trace(rho2, dims, keep_b);
    return von_neumann_entropy_dm(ra) + von_neumann_entropy_dm(rb) - von_neumann_entropy_dm(rho2);
}

std::vector<cplx> coherent_vector(int n, cplx alpha) {
    std::vector<cplx> v(n);
    cplx amp = 1.0;
    v[0] = amp;
    for (int k = 1; k < n; ++k) {
        amp *= alpha / std::sqrt(static_cast<double>(k));
        v[k] = amp;
    }
    double norm = 0.0;
    for (const cplx& c : v) norm += std::norm(c);
    norm = std::sqrt(norm);
    for (cplx& c : v) c /= norm;
    return v;
}

CMatrix product_state(std::span<const std::vector<cplx>> mode_vectors) {
    std::vector<cplx> full = {cplx(1.0)};
    for (const auto& mv : mode_vectors) {
        std::vector<cplx> next;
        next.reserve(full.size() * mv.size());
        for (const cplx& f : full)
            for (const cplx& m : mv) next.push_back(f * m);
        full = std::move(next);
    }
    const int d = static_cast<int>(full.size());
    CMatrix rho(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) rho(i, j) = full[i] * std::conj(full[j]);
    return rho;
}

} // namespace optosync

namespace optosync {

void write_density_snapshot(const CMatrix& rho, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    f.precision(17);
    for (int i = 0; i < rho.rows(); ++i) {
        for (int j = 0; j < rho.cols(); ++j)
            f << (j ? " " : "") << rho(i, j).real() << ' ' << rho(i, j).imag();
        f << "\n";
    }
    if (!f) throw IoError("write failed for '" + path + "'");
}

CMatrix read_density_snapshot(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open '" + path + "'");
    std::vector<std::vector<cplx>> rows;
    std::string line;
    while (std::getline(f, line)) {
        std::istringstream ss(line);
        std::vector<cplx> row;
        double re, im;
        while (ss >> re >> im) row.emplace_back(re, im);
        if (!row.empty()) rows.push_back(std::move(row));
    }
    if (rows.empty()) throw IoError("empty density snapshot in '" + path + "'");
    const int n = static_cast<int>(rows.size());
    CMatrix m(n, static_cast<int>(rows[0].size()));
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(rows[i].size()) != m.cols())
            throw IoError("ragged density snapshot in '" + path + "'");
        for (int j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
    }
    return m;
}

} // namespace optosync
