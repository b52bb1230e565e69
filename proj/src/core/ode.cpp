#include "core/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace recirc {

OdeMethod ode_method_from_string(const std::string& name) {
    if (name == "euler") return OdeMethod::euler;
    if (name == "rk4") return OdeMethod::rk4;
    throw std::invalid_argument("unknown integration method '" + name + "' (expected euler or rk4)");
}

std::string to_string(OdeMethod m) { return m == OdeMethod::euler ? "euler" : "rk4"; }

namespace {

void check_spec(const OdeSpec& spec, std::span<const double> x) {
    if (spec.state_dim == 0 || !spec.derivative) throw std::invalid_argument("OdeSpec incomplete");
    if (!(spec.dt > 0.0)) throw std::invalid_argument("OdeSpec: dt must be positive");
    if (spec.substeps < 1) throw std::invalid_argument("OdeSpec: substeps must be >= 1");
    if (x.size() != spec.state_dim) throw std::invalid_argument("state dimension mismatch");
    for (std::size_t i = 0; i < x.size(); ++i)
        if (!std::isfinite(x[i])) throw std::invalid_argument("non-finite initial state");
}

void throw_if_diverged(std::span<const double> x, int substep) {
    for (std::size_t i = 0; i < x.size(); ++i)
        if (!std::isfinite(x[i])) throw IntegrationDivergence(substep, i);
}

}  // namespace

std::vector<double> integrate_step(const OdeSpec& spec, std::span<const double> x,
                                   std::span<const double> u, double t) {
    check_spec(spec, x);
    const std::size_t n = spec.state_dim;
    const double h = spec.dt / spec.substeps;

    std::vector<double> y(x.begin(), x.end());
    std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);

    for (int s = 0; s < spec.substeps; ++s) {
        const double ts = t + s * h;
        if (spec.method == OdeMethod::euler) {
            spec.derivative(y, u, ts, k1);
            for (std::size_t i = 0; i < n; ++i) y[i] += h * k1[i];
        } else {
            spec.derivative(y, u, ts, k1);
            for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
            spec.derivative(tmp, u, ts + 0.5 * h, k2);
            for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
            spec.derivative(tmp, u, ts + 0.5 * h, k3);
            for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * k3[i];
            spec.derivative(tmp, u, ts + h, k4);
            for (std::size_t i = 0; i < n; ++i)
                y[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        throw_if_diverged(y, s);
    }
    return y;
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
// Difference between the 5th- and 4th-order weights (error estimator).
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;

}  // namespace

std::vector<double> integrate_adaptive(const Derivative& f, std::size_t state_dim,
                                       std::span<const double> x, std::span<const double> u,
                                       double t0, double t1, double rel_tol, double abs_tol) {
    if (!(rel_tol > 0.0) || !(abs_tol >= 0.0)) throw std::invalid_argument("bad tolerances");
    if (x.size() != state_dim) throw std::invalid_argument("state dimension mismatch");
    const std::size_t n = state_dim;

    std::vector<double> y(x.begin(), x.end());
    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), ynew(n);

    double t = t0;
    const double span = t1 - t0;
    if (!(span > 0.0)) return y;

    double h = span / 64.0;
    const double h_min = span * 1e-14;
    int rejected_in_a_row = 0;

    while (t < t1) {
        h = std::min(h, t1 - t);

        f(y, u, t, k1);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * a21 * k1[i];
        f(tmp, u, t + c2 * h, k2);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        f(tmp, u, t + c3 * h, k3);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        f(tmp, u, t + c4 * h, k4);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        f(tmp, u, t + c5 * h, k5);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        f(tmp, u, t + h, k6);
        for (std::size_t i = 0; i < n; ++i)
            ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        f(ynew, u, t + h, k7);

        double err_sq = 0.0;
        bool finite = true;
        for (std::size_t i = 0; i < n; ++i) {
            if (!std::isfinite(ynew[i])) {
                finite = false;
                break;
            }
            const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                  e6 * k6[i] + e7 * k7[i]);
            const double sc = abs_tol + rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            const double r = e / sc;
            err_sq += r * r;
        }
        const double err = finite ? std::sqrt(err_sq / static_cast<double>(n))
                                  : std::numeric_limits<double>::infinity();

        if (err <= 1.0) {
            t += h;
            y.swap(ynew);
            rejected_in_a_row = 0;
        } else if (++rejected_in_a_row > 60) {
            throw std::runtime_error("reference integrator failed: step rejected 60 times");
        }

        const double grow = finite ? 0.9 * std::pow(std::max(err, 1e-300), -0.2) : 0.1;
        h *= std::clamp(grow, 0.2, 5.0);
        if (h < h_min) throw std::runtime_error("reference integrator failed: step size underflow");
    }
    return y;
}

VerifyReport verify_step_size(const OdeSpec& spec, std::span<const double> x0,
                              const ActionSchedule& schedule, double horizon, double rel_tol) {
    if (!(horizon > 0.0)) throw std::invalid_argument("verify_step_size: horizon must be positive");
    if (!(rel_tol > 0.0)) throw std::invalid_argument("verify_step_size: rel_tol must be positive");
    check_spec(spec, x0);

    VerifyReport report;
    report.rel_tol = rel_tol;
    report.per_state.resize(spec.state_dim);

    const auto n_steps = static_cast<std::size_t>(std::ceil(horizon / spec.dt - 1e-9));
    report.steps = n_steps;

    std::vector<double> fixed(x0.begin(), x0.end());
    std::vector<double> ref(x0.begin(), x0.end());
    std::vector<std::vector<double>> fixed_traj{fixed}, ref_traj{ref};

    try {
        for (std::size_t k = 0; k < n_steps; ++k) {
            const double t = static_cast<double>(k) * spec.dt;
            const std::vector<double> u = schedule(t);
            fixed = integrate_step(spec, fixed, u, t);
            ref = integrate_adaptive(spec.derivative, spec.state_dim, ref, u, t, t + spec.dt,
                                     1e-9, 1e-12);
            fixed_traj.push_back(fixed);
            ref_traj.push_back(ref);
        }
    } catch (const IntegrationDivergence&) {
        throw;  // the configured integrator itself blew up; report to the caller as-is
    } catch (const std::exception& e) {
        report.reference_failed = true;
        report.reference_error = e.what();
        return report;
    }

    for (std::size_t i = 0; i < spec.state_dim; ++i) {
        double scale = 0.0;
        for (const auto& y : ref_traj) scale = std::max(scale, std::abs(y[i]));
        auto& dev = report.per_state[i];
        dev.scale = scale;
        const double denom = std::max(scale, 1e-300);
        for (std::size_t k = 0; k < ref_traj.size(); ++k) {
            const double rel = std::abs(fixed_traj[k][i] - ref_traj[k][i]) / denom;
            if (rel > dev.max_rel) {
                dev.max_rel = rel;
                dev.at_time = static_cast<double>(k) * spec.dt;
            }
        }
        report.max_rel_deviation = std::max(report.max_rel_deviation, dev.max_rel);
    }
    report.pass = report.max_rel_deviation <= rel_tol;
    return report;
}

}  // namespace recirc
