#include "optosync/gaussian.hpp"

#include "optosync/errors.hpp"
#include "optosync/ode.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace optosync {

namespace {

OdeRhs covariance_rhs(const SystemParams& p, double g_eff) {
    return [p, g_eff](double t, std::span<const double> y, std::span<double> dy) {
        const Mat a = build_drift_matrix(p, g_eff, t);
        const Mat d = build_diffusion_matrix(p);
        // dy = A sigma + sigma A^T + D, written out on the flat 6x6 layout
        for (int i = 0; i < kPhaseDim; ++i) {
            for (int j = 0; j < kPhaseDim; ++j) {
                double s = d(i, j);
                for (int k = 0; k < kPhaseDim; ++k) {
                    s += a(i, k) * y[static_cast<size_t>(k) * kPhaseDim + j];
                    s += y[static_cast<size_t>(i) * kPhaseDim + k] * a(j, k);
                }
                dy[static_cast<size_t>(i) * kPhaseDim + j] = s;
            }
        }
    };
}

Mat mat_from_flat(std::span<const double> y) {
    Mat m(kPhaseDim, kPhaseDim);
    for (int i = 0; i < kPhaseDim; ++i)
        for (int j = 0; j < kPhaseDim; ++j) m(i, j) = y[static_cast<size_t>(i) * kPhaseDim + j];
    m.symmetrize();
    return m;
}

std::vector<double> flatten(const Mat& m) {
    std::vector<double> y(static_cast<size_t>(kPhaseDim) * kPhaseDim);
    for (int i = 0; i < kPhaseDim; ++i)
        for (int j = 0; j < kPhaseDim; ++j) y[static_cast<size_t>(i) * kPhaseDim + j] = m(i, j);
    return y;
}

} // namespace

Mat vacuum_covariance(int n_modes) {
    return Mat::identity(2 * n_modes) * kZeroPointVariance;
}

Mat thermal_start_covariance(double n_m1, double n_m2) {
    Mat s = vacuum_covariance();
    s(kIdxQ1, kIdxQ1) = s(kIdxP1, kIdxP1) = (2.0 * n_m1 + 1.0) * kZeroPointVariance;
    s(kIdxQ2, kIdxQ2) = s(kIdxP2, kIdxP2) = (2.0 * n_m2 + 1.0) * kZeroPointVariance;
    return s;
}

CovTrajectory propagate_covariance(const Mat& sigma0, double t0, double t1, double sample_dt,
                                   const SystemParams& p, double coupling_g_eff,
                                   const PropagateOptions& opt) {
    if (sigma0.rows() != kPhaseDim || sigma0.cols() != kPhaseDim)
        throw DimensionMismatch("covariance matrix must be 6x6");
    CovTrajectory traj;
    std::vector<double> y = flatten(sigma0);
    OdeOptions oopt;
    oopt.rtol = opt.rtol;
    oopt.atol = opt.atol;
    integrate_adaptive(
        covariance_rhs(p, coupling_g_eff), y, t0, t1, sample_dt,
        [&](double t, std::span<const double> yy) {
            Mat s = mat_from_flat(yy);
            if (opt.check_physical) {
                const double nu = min_symplectic_eigenvalue(s);
                if (nu < 0.5 - opt.physical_slack)
                    throw UnphysicalState("symplectic eigenvalue " + std::to_string(nu) +
                                          " below 1/2 at t=" + std::to_string(t));
            }
            traj.t.push_back(t);
            traj.sigma.push_back(std::move(s));
        },
        oopt);
    return traj;
}

PeriodicCovariance settle_covariance(const Mat& sigma0, const SystemParams& p,
                                     double coupling_g_eff, double sample_dt, double abs_tol,
                                     double t_cap) {
    const double period = (p.mod_omega > 0.0) ? std::numbers::pi / p.mod_omega
                                              : 2.0 * std::numbers::pi / p.omega_m;
    if (t_cap <= 0.0) t_cap = 50.0 / std::min(p.gamma_m1, p.gamma_m2);

    const int n_sub = std::max(8, static_cast<int>(std::ceil(period / sample_dt)));
    const double dt = period / n_sub;

    std::vector<double> y = flatten(sigma0);
    OdeOptions oopt;
    oopt.rtol = 1e-8;
    oopt.atol = 1e-10;
    const OdeRhs rhs = covariance_rhs(p, coupling_g_eff);

    PeriodicCovariance out;
    std::vector<Mat> prev, cur;
    double t = 0.0;
    while (t < t_cap) {
        cur.clear();
        integrate_adaptive(
            rhs, y, t, t + period, dt,
            [&](double, std::span<const double> yy) { cur.push_back(mat_from_flat(yy)); }, oopt);
        t += period;
        if (!prev.empty() && prev.size() == cur.size()) {
            double resid = 0.0;
            for (size_t k = 0; k < cur.size(); ++k)
                resid = std::max(resid, max_abs_diff(cur[k], prev[k]));
            out.residual = resid;
            if (resid < abs_tol) {
                out.converged = true;
                break;
            }
        }
        prev = cur;
    }

    out.t_start = t - period;
    for (size_t k = 0; k < cur.size(); ++k) {
        out.window.t.push_back(out.t_start + static_cast<double>(k) * dt);
        out.window.sigma.push_back(cur[k]);
    }
    return out;
}

double quadrature_variance_ratio(const Mat& sigma, int index) {
    if (index < 0 || index >= sigma.rows()) throw DimensionMismatch("bad quadrature index");
    return sigma(index, index) / kZeroPointVariance;
}

double synchronization_measure(const Mat& sigma, const MeanFieldState& means) {
    const double var_qm =
        0.5 * (sigma(kIdxQ1, kIdxQ1) + sigma(kIdxQ2, kIdxQ2) - 2.0 * sigma(kIdxQ1, kIdxQ2));
    const double var_pm =
        0.5 * (sigma(kIdxP1, kIdxP1) + sigma(kIdxP2, kIdxP2) - 2.0 * sigma(kIdxP1, kIdxP2));
    const double mean_qm = (means.q1 - means.q2) / std::numbers::sqrt2;
    const double mean_pm = (means.p1 - means.p2) / std::numbers::sqrt2;
    const double total = var_qm + mean_qm * mean_qm + var_pm + mean_pm * mean_pm;
    return 1.0 / total;
}

Mat reduced_mirror_block(const Mat& sigma) {
    if (sigma.rows() != kPhaseDim || sigma.cols() != kPhaseDim)
        throw DimensionMismatch("expected the full 6x6 covariance matrix");
    Mat r(4, 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) r(i, j) = sigma(kIdxQ1 + i, kIdxQ1 + j);
    return r;
}

std::vector<double> symplectic_eigenvalues(const Mat& sigma) {
    if (sigma.rows() != sigma.cols() || sigma.rows() % 2 != 0)
        throw DimensionMismatch("covariance matrix must be 2n x 2n");
    const int n_modes = sigma.rows() / 2;
    // nu_k are the positive square roots of the eigenvalues of C^T C with
    // C = sigma^{1/2} Omega sigma^{1/2}; each appears twice.
    const Mat root = sym_sqrt(sigma);
    const Mat c = root * symplectic_form(n_modes) * root;
    const Mat gram = c.transposed() * c;
    std::vector<double> eig = sym_eigvals(gram);
    std::vector<double> nus;
    nus.reserve(n_modes);
    for (int k = 0; k < n_modes; ++k) {
        const double lo = std::sqrt(std::max(eig[2 * k], 0.0));
        const double hi = std::sqrt(std::max(eig[2 * k + 1], 0.0));
        if (std::abs(hi - lo) > 1e-8 * std::max(1.0, hi))
            throw NumericalDegeneracy("symplectic eigenvalues failed to pair");
        nus.push_back(0.5 * (lo + hi));
    }
    return nus;
}

double min_symplectic_eigenvalue(const Mat& sigma) {
    return symplectic_eigenvalues(sigma).front();
}

double logarithmic_negativity(const Mat& sigma2) {
    if (sigma2.rows() != 4 || sigma2.cols() != 4)
        throw DimensionMismatch("logarithmic negativity needs a two-mode covariance matrix");
    Mat flipped = sigma2;
    for (int i = 0; i < 4; ++i) {
        flipped(i, 3) = -flipped(i, 3);
        flipped(3, i) = -flipped(3, i);
    }
    const double nu_min = symplectic_eigenvalues(flipped).front();
    return std::max(0.0, -std::log2(2.0 * nu_min));
}

double gaussian_entropy(const Mat& sigma) {
    double s = 0.0;
    for (const double nu : symplectic_eigenvalues(sigma)) {
        const double up = nu + 0.5;
        const double dn = nu - 0.5;
        s += up * std::log2(up);
        if (dn > 1e-15) s -= dn * std::log2(dn);
    }
    return s;
}

double mutual_information(const Mat& sigma2) {
    if (sigma2.rows() != 4 || sigma2.cols() != 4)
        throw DimensionMismatch("mutual information needs a two-mode covariance matrix");
    Mat blk_a(2, 2), blk_b(2, 2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            blk_a(i, j) = sigma2(i, j);
            blk_b(i, j) = sigma2(2 + i, 2 + j);
        }
    return gaussian_entropy(blk_a) + gaussian_entropy(blk_b) - gaussian_entropy(sigma2);
}

GaussianObservables observables_from(const Mat& sigma, const MeanFieldState& means) {
    GaussianObservables o;
    o.var_q1 = sigma(kIdxQ1, kIdxQ1);
    o.var_p1 = sigma(kIdxP1, kIdxP1);
    o.var_q2 = sigma(kIdxQ2, kIdxQ2);
    o.var_p2 = sigma(kIdxP2, kIdxP2);
    o.var_q1_ratio = o.var_q1 / kZeroPointVariance;
    o.var_q2_ratio = o.var_q2 / kZeroPointVariance;
    o.sync = synchronization_measure(sigma, means);
    const Mat mirrors = reduced_mirror_block(sigma);
    o.log_neg = logarithmic_negativity(mirrors);
    o.mutual_info = mutual_information(mirrors);
    return o;
}

std::vector<double> uncertainty_products(const Mat& sigma) {
    std::vector<double> out;
    for (int m = 0; m < sigma.rows() / 2; ++m) {
        const double vq = sigma(2 * m, 2 * m);
        const double vp = sigma(2 * m + 1, 2 * m + 1);
        const double cqp = sigma(2 * m, 2 * m + 1);
        out.push_back(vq * vp - cqp * cqp);
    }
    return out;
}

StabilityReport floquet_stability(const SystemParams& p, double coupling_g_eff) {
    StabilityReport rep;
    rep.period = (p.mod_omega > 0.0) ? std::numbers::pi / p.mod_omega
                                     : 2.0 * std::numbers::pi / p.omega_m;

    // Propagate all six basis columns of dU/dt = A(t) U at once.
    const size_t nn = static_cast<size_t>(kPhaseDim) * kPhaseDim;
    std::vector<double> u(nn, 0.0);
    for (int i = 0; i < kPhaseDim; ++i) u[static_cast<size_t>(i) * kPhaseDim + i] = 1.0;

    OdeRhs rhs = [&p, coupling_g_eff](double t, std::span<const double> y, std::span<double> dy) {
        const Mat a = build_drift_matrix(p, coupling_g_eff, t);
        for (int i = 0; i < kPhaseDim; ++i)
            for (int j = 0; j < kPhaseDim; ++j) {
                double s = 0.0;
                for (int k = 0; k < kPhaseDim; ++k)
                    s += a(i, k) * y[static_cast<size_t>(k) * kPhaseDim + j];
                dy[static_cast<size_t>(i) * kPhaseDim + j] = s;
            }
    };
    OdeOptions oopt;
    oopt.rtol = 1e-10;
    oopt.atol = 1e-12;
    integrate_adaptive(rhs, u, 0.0, rep.period, rep.period, nullptr, oopt);

    Mat monodromy(kPhaseDim, kPhaseDim);
    for (int i = 0; i < kPhaseDim; ++i)
        for (int j = 0; j < kPhaseDim; ++j)
            monodromy(i, j) = u[static_cast<size_t>(i) * kPhaseDim + j];
    for (const cplx& lam : eigenvalues(monodromy)) rep.moduli.push_back(std::abs(lam));
    std::sort(rep.moduli.begin(), rep.moduli.end());
    rep.stable = rep.moduli.back() < 1.0;
    return rep;
}

Mat steady_covariance_unmodulated(const SystemParams& p, double coupling_g_eff) {
    SystemParams frozen = p;
    frozen.mod_eps = 0.0;
    const Mat a = build_drift_matrix(frozen, coupling_g_eff, 0.0);
    return solve_lyapunov(a, build_diffusion_matrix(frozen));
}

} // namespace optosync

namespace optosync {

void write_covariance_snapshot(const Mat& sigma, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    f.precision(17);
    for (int i = 0; i < sigma.rows(); ++i) {
        for (int j = 0; j < sigma.cols(); ++j) f << (j ? " " : "") << sigma(i, j);
        f << "\n";
    }
    if (!f) throw IoError("write failed for '" + path + "'");
}

Mat read_covariance_snapshot(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open '" + path + "'");
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(f, line)) {
        std::istringstream ss(line);
        std::vector<double> row;
        double v;
        while (ss >> v) row.push_back(v);
        if (!row.empty()) rows.push_back(std::move(row));
    }
    if (rows.empty()) throw IoError("empty covariance snapshot in '" + path + "'");
    const int n = static_cast<int>(rows.size());
    Mat m(n, static_cast<int>(rows[0].size()));
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(rows[i].size()) != m.cols())
            throw IoError("ragged covariance snapshot in '" + path + "'");
        for (int j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
    }
    return m;
}

} // namespace optosync
