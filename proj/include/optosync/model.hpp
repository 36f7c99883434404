#ifndef OPTOSYNC_MODEL_HPP
#define OPTOSYNC_MODEL_HPP

#include "optosync/linalg.hpp"
#include "optosync/params.hpp"

namespace optosync {

// Quadrature ordering used everywhere: (x, y, q1, p1, q2, p2).
inline constexpr int kPhaseDim = 6;
inline constexpr int kIdxX = 0, kIdxY = 1, kIdxQ1 = 2, kIdxP1 = 3, kIdxQ2 = 4, kIdxP2 = 5;

// Vacuum variance of a single quadrature in this convention.
inline constexpr double kZeroPointVariance = 0.5;

// Time-dependent spring scaling of mirror 1: 1 + eps * sin^2(Omega t).
double modulation_factor(const SystemParams& p, double t);

// Generator of the linearized fluctuation dynamics at time t, for a given
// effective coupling. Only the (p1, q1) entry moves with t.
Mat build_drift_matrix(const SystemParams& p, double coupling_g_eff, double t);

// Constant diagonal noise-injection matrix.
Mat build_diffusion_matrix(const SystemParams& p);

// Block-diagonal symplectic form for n modes, [[0,1],[-1,0]] per mode.
Mat symplectic_form(int n_modes);

} // namespace optosync

#endif
