#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "spinsqueeze/errors.hpp"

namespace sqz {

struct OdeOptions {
    double rtol = 1e-8;
    double atol = 1e-10;
    // Steps are never allowed below h_floor_factor * (t_end - t_begin);
    // hitting the floor raises IntegrationError with the last good time.
    double h_floor_factor = 1e-14;
};

using OdeRhs = std::function<void(double, const Eigen::VectorXcd&, Eigen::VectorXcd&)>;
using OdeObserver = std::function<void(std::size_t, double, const Eigen::VectorXcd&)>;

// Embedded Dormand-Prince 5(4) with adaptive step control. Integrates y
// through the strictly increasing time grid `times` (times[0] is the initial
// time for y0) and invokes `observe(i, times[i], y)` at every grid point,
// including i = 0. Output times are hit exactly by clamping the step.
void integrate_adaptive(const OdeRhs& rhs,
                        const Eigen::VectorXcd& y0,
                        const std::vector<double>& times,
                        const OdeOptions& options,
                        const OdeObserver& observe);

} // namespace sqz
