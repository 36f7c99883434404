#ifndef OPTOSYNC_ODE_HPP
#define OPTOSYNC_ODE_HPP

#include <functional>
#include <span>
#include <vector>

namespace optosync {

// dy/dt = f(t, y); f writes the derivative into its third argument.
using OdeRhs = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;

// Called at every output sample (including the initial point).
using OdeObserver = std::function<void(double t, std::span<const double> y)>;

struct OdeOptions {
    double rtol = 1e-8;
    double atol = 1e-10;
    double max_step = 0.0;       // 0 means unrestricted
    long max_steps = 50'000'000; // safety net, throws StepFailure when hit
};

// Adaptive Dormand-Prince 5(4) integration of y from t0 to t1, with output
// on the uniform grid t0, t0+dt, ... (t1 always included). The state vector
// is advanced in place. Throws StepFailure on step-size underflow.
void integrate_adaptive(const OdeRhs& rhs, std::vector<double>& y, double t0, double t1,
                        double sample_dt, const OdeObserver& observe, const OdeOptions& opt = {});

} // namespace optosync

#endif
