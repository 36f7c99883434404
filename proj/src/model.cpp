#include "optosync/model.hpp"

#include <cmath>

namespace optosync {

double modulation_factor(const SystemParams& p, double t) {
    const double s = std::sin(p.mod_omega * t);
    return 1.0 + p.mod_eps * s * s;
}

// Encodes the linearized fluctuation equations
//   dx  =  delta y - kappa x
//   dy  = -delta x - kappa y + G (q1 + q2)
//   dq1 =  w1 p1
//   dp1 = -w1 (1 + eps sin^2(Omega t)) q1 + G x - gamma_m1 p1
//   dq2 =  w2 p2
//   dp2 = -w2 q2 + G x - gamma_m2 p2
// Note the sign of the (y, x) entry: it is fixed by the equations of motion
// (the cavity block must be a damped rotation, not a saddle).
Mat build_drift_matrix(const SystemParams& p, double coupling_g_eff, double t) {
    const double G = coupling_g_eff;
    const double w1 = p.omega_m;
    const double w2 = p.omega_m2();
    Mat a(kPhaseDim, kPhaseDim);

    a(kIdxX, kIdxX) = -p.kappa;
    a(kIdxX, kIdxY) = p.delta;

    a(kIdxY, kIdxX) = -p.delta;
    a(kIdxY, kIdxY) = -p.kappa;
    a(kIdxY, kIdxQ1) = G;
    a(kIdxY, kIdxQ2) = G;

    a(kIdxQ1, kIdxP1) = w1;

    a(kIdxP1, kIdxX) = G;
    a(kIdxP1, kIdxQ1) = -w1 * modulation_factor(p, t);
    a(kIdxP1, kIdxP1) = -p.gamma_m1;

    a(kIdxQ2, kIdxP2) = w2;

    a(kIdxP2, kIdxX) = G;
    a(kIdxP2, kIdxQ2) = -w2;
    a(kIdxP2, kIdxP2) = -p.gamma_m2;

    return a;
}

Mat build_diffusion_matrix(const SystemParams& p) {
    Mat d(kPhaseDim, kPhaseDim);
    d(kIdxX, kIdxX) = p.kappa * (2.0 * p.n_ph + 1.0);
    d(kIdxY, kIdxY) = p.kappa * (2.0 * p.n_ph + 1.0);
    d(kIdxP1, kIdxP1) = p.gamma_m1 * (2.0 * p.n_m1 + 1.0);
    d(kIdxP2, kIdxP2) = p.gamma_m2 * (2.0 * p.n_m2 + 1.0);
    return d;
}

Mat symplectic_form(int n_modes) {
    Mat o(2 * n_modes, 2 * n_modes);
    for (int m = 0; m < n_modes; ++m) {
        o(2 * m, 2 * m + 1) = 1.0;
        o(2 * m + 1, 2 * m) = -1.0;
    }
    return o;
}

} // namespace optosync
