#include "spinsqueeze/ode.hpp"

#include <algorithm>
#include <cmath>

namespace sqz {

namespace {

// Dormand-Prince RK5(4)7M tableau. FSAL: the seventh stage equals the first
// stage of the next step, and its weights b7 row doubles as the dense b.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;

constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                 a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
// Fifth-order solution weights (also the a7j row).
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
// Embedded fourth-order weights.
constexpr double e1 = 5179.0 / 57600.0, e3 = 7571.0 / 16695.0, e4 = 393.0 / 640.0,
                 e5 = -92097.0 / 339200.0, e6 = 187.0 / 2100.0, e7 = 1.0 / 40.0;

double error_norm(const Eigen::VectorXcd& y0, const Eigen::VectorXcd& y1,
                  const Eigen::VectorXcd& err, double rtol, double atol) {
    const auto n = y0.size();
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double scale = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
        const double q = std::abs(err[i]) / scale;
        acc += q * q;
    }
    return std::sqrt(acc / static_cast<double>(n));
}

} // namespace

void integrate_adaptive(const OdeRhs& rhs,
                        const Eigen::VectorXcd& y0,
                        const std::vector<double>& times,
                        const OdeOptions& options,
                        const OdeObserver& observe) {
    if (times.empty()) return;
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw std::invalid_argument("integrate_adaptive: times must be strictly increasing");
    if (!(options.rtol > 0.0) || !(options.atol >= 0.0))
        throw std::invalid_argument("integrate_adaptive: tolerances must be positive");

    Eigen::VectorXcd y = y0;
    double t = times.front();
    observe(0, t, y);
    if (times.size() == 1) return;

    const double span = times.back() - times.front();
    const double h_floor = options.h_floor_factor * span;

    const auto n = y.size();
    Eigen::VectorXcd k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n), err(n);

    rhs(t, y, k1);
    double h = span * 1e-4;
    bool k1_fresh = true;

    std::size_t next = 1;
    while (next < times.size()) {
        const double t_target = times[next];
        bool clipped = false;
        double h_try = h;
        if (t + h_try >= t_target) {
            h_try = t_target - t;
            clipped = true;
        }

        if (!k1_fresh) {
            rhs(t, y, k1);
            k1_fresh = true;
        }

        ytmp = y + h_try * (a21 * k1);
        rhs(t + c2 * h_try, ytmp, k2);
        ytmp = y + h_try * (a31 * k1 + a32 * k2);
        rhs(t + c3 * h_try, ytmp, k3);
        ytmp = y + h_try * (a41 * k1 + a42 * k2 + a43 * k3);
        rhs(t + c4 * h_try, ytmp, k4);
        ytmp = y + h_try * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
        rhs(t + c5 * h_try, ytmp, k5);
        ytmp = y + h_try * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
        rhs(t + h_try, ytmp, k6);
        ynew = y + h_try * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        rhs(t + h_try, ynew, k7);

        err = ynew - (y + h_try * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7));
        double enorm = error_norm(y, ynew, err, options.rtol, options.atol);

        if (std::isfinite(enorm) && enorm <= 1.0) {
            t = t + h_try;
            y.swap(ynew);
            k1.swap(k7); // FSAL
            k1_fresh = true;
            const double grow =
                (enorm == 0.0) ? 5.0 : std::clamp(0.9 * std::pow(enorm, -0.2), 0.2, 5.0);
            const double candidate = std::max(h_try * grow, h_floor);
            if (clipped) {
                observe(next, t, y);
                ++next;
                // A clipped step may only enlarge the controller's memory;
                // shrinking it here would let dense output grids starve h.
                h = std::max(h, candidate);
            } else {
                h = candidate;
            }
        } else {
            const double shrink = std::isfinite(enorm)
                                      ? std::clamp(0.9 * std::pow(enorm, -0.2), 0.1, 0.9)
                                      : 0.1;
            h = h_try * shrink;
            k1_fresh = true; // k1 still matches (t, y)
            if (h < h_floor)
                throw IntegrationError("adaptive step size underflow at t = " + std::to_string(t),
                                       t);
        }
    }
}

} // namespace sqz
