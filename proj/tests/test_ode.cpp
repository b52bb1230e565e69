#include <doctest.h>

#include <cmath>
#include <limits>

#include "core/ode.hpp"

using namespace recirc;

namespace {

OdeSpec double_integrator(double accel, double dt, OdeMethod method, int substeps = 1) {
    OdeSpec spec;
    spec.state_dim = 2;
    spec.dt = dt;
    spec.substeps = substeps;
    spec.method = method;
    spec.derivative = [accel](std::span<const double> x, std::span<const double>, double,
                              std::span<double> dxdt) {
        dxdt[0] = x[1];
        dxdt[1] = accel;
    };
    return spec;
}

const std::vector<double> kNoAction;

}  // namespace

TEST_CASE("zero vector field leaves the state unchanged") {
    OdeSpec spec;
    spec.state_dim = 3;
    spec.dt = 7.0;
    spec.substeps = 3;
    spec.derivative = [](std::span<const double>, std::span<const double>, double,
                         std::span<double> dxdt) {
        for (auto& v : dxdt) v = 0.0;
    };
    for (const auto method : {OdeMethod::euler, OdeMethod::rk4}) {
        spec.method = method;
        const std::vector<double> x0{1.5, -2.0, 0.25};
        CHECK(integrate_step(spec, x0, kNoAction, 0.0) == x0);
    }
}

TEST_CASE("rk4 reproduces the constant-acceleration closed form in one step") {
    const auto spec = double_integrator(1.0, 0.1, OdeMethod::rk4);
    const auto x = integrate_step(spec, std::vector<double>{0.0, 0.0}, kNoAction, 0.0);
    CHECK(x[0] == doctest::Approx(0.005).epsilon(1e-15));
    CHECK(x[1] == doctest::Approx(0.1).epsilon(1e-15));
}

TEST_CASE("one euler step of dx/dt = -x") {
    OdeSpec spec;
    spec.state_dim = 1;
    spec.dt = 0.1;
    spec.substeps = 1;
    spec.method = OdeMethod::euler;
    spec.derivative = [](std::span<const double> x, std::span<const double>, double,
                         std::span<double> dxdt) { dxdt[0] = -x[0]; };
    const auto x = integrate_step(spec, std::vector<double>{1.0}, kNoAction, 0.0);
    CHECK(x[0] == doctest::Approx(0.9).epsilon(1e-15));
}

TEST_CASE("divergence reports the offending substep") {
    OdeSpec spec;
    spec.state_dim = 1;
    spec.dt = 10.0;
    spec.substeps = 4;
    spec.method = OdeMethod::euler;
    spec.derivative = [](std::span<const double>, std::span<const double>, double,
                         std::span<double> dxdt) { dxdt[0] = 1e308; };
    try {
        integrate_step(spec, std::vector<double>{0.0}, kNoAction, 0.0);
        FAIL("expected IntegrationDivergence");
    } catch (const IntegrationDivergence& e) {
        CHECK(e.substep() == 0);
        CHECK(e.component() == 0);
    }
}

TEST_CASE("verify_step_size: double integrator with constant forcing") {
    auto schedule = [](double) { return std::vector<double>{}; };

    SUBCASE("rk4 at dt = 0.01 passes a 1e-6 relative tolerance") {
        const auto spec = double_integrator(2.0, 0.01, OdeMethod::rk4);
        const auto report =
            verify_step_size(spec, std::vector<double>{0.0, 0.0}, schedule, 10.0, 1e-6);
        REQUIRE_FALSE(report.reference_failed);
        CHECK(report.pass);
        CHECK(report.max_rel_deviation < 1e-9);
    }

    SUBCASE("coarse euler fails and reports the deviation") {
        const auto spec = double_integrator(2.0, 5.0, OdeMethod::euler);
        const auto report =
            verify_step_size(spec, std::vector<double>{0.0, 0.0}, schedule, 10.0, 1e-6);
        REQUIRE_FALSE(report.reference_failed);
        CHECK_FALSE(report.pass);
        // Euler drops the 0.5*a*h^2 position term: 50% off over two steps.
        CHECK(report.per_state[0].max_rel == doctest::Approx(0.5).epsilon(1e-6));
    }

    SUBCASE("zero field passes at any step size") {
        OdeSpec spec;
        spec.state_dim = 2;
        spec.dt = 123.0;
        spec.substeps = 1;
        spec.method = OdeMethod::euler;
        spec.derivative = [](std::span<const double>, std::span<const double>, double,
                             std::span<double> dxdt) {
            dxdt[0] = 0.0;
            dxdt[1] = 0.0;
        };
        const auto report =
            verify_step_size(spec, std::vector<double>{4.0, -7.0}, schedule, 1000.0, 1e-12);
        CHECK(report.pass);
        CHECK(report.max_rel_deviation == 0.0);
    }
}

TEST_CASE("verify_step_size distinguishes reference-integrator failure") {
    // Pathological field: finite exactly on the fixed-step evaluation grid,
    // non-finite everywhere else, so only the adaptive reference trips.
    OdeSpec spec;
    spec.state_dim = 1;
    spec.dt = 1.0;
    spec.substeps = 1;
    spec.method = OdeMethod::euler;
    spec.derivative = [](std::span<const double>, std::span<const double>, double t,
                         std::span<double> dxdt) {
        const double frac = t - std::floor(t + 0.5);
        dxdt[0] = std::abs(frac) < 1e-9 ? 1.0 : std::numeric_limits<double>::quiet_NaN();
    };
    const auto report = verify_step_size(spec, std::vector<double>{0.0},
                                         [](double) { return std::vector<double>{}; }, 3.0, 1e-6);
    CHECK(report.reference_failed);
    CHECK_FALSE(report.pass);
    CHECK_FALSE(report.reference_error.empty());
}

TEST_CASE("rk4 convergence order is at least 3.5 on the forced double integrator") {
    // Sinusoidal forcing makes the solution non-polynomial; a constant force
    // is integrated exactly by rk4 and shows no order at all.
    auto forced = [](double dt) {
        OdeSpec spec;
        spec.state_dim = 2;
        spec.dt = dt;
        spec.substeps = 1;
        spec.method = OdeMethod::rk4;
        spec.derivative = [](std::span<const double> x, std::span<const double>, double t,
                             std::span<double> dxdt) {
            dxdt[0] = x[1];
            dxdt[1] = std::sin(3.0 * t);
        };
        return spec;
    };
    auto endpoint_error = [&](double dt) {
        std::vector<double> x{0.0, 0.0};
        const auto spec = forced(dt);
        const int steps = static_cast<int>(std::lround(10.0 / dt));
        for (int k = 0; k < steps; ++k) x = integrate_step(spec, x, kNoAction, k * dt);
        const double t = 10.0;
        const double exact_v = (1.0 - std::cos(3.0 * t)) / 3.0;
        const double exact_x = t / 3.0 - std::sin(3.0 * t) / 9.0;
        return std::max(std::abs(x[0] - exact_x), std::abs(x[1] - exact_v));
    };
    const double e1 = endpoint_error(0.2);
    const double e2 = endpoint_error(0.1);
    const double e3 = endpoint_error(0.05);
    const double order12 = std::log2(e1 / e2);
    const double order23 = std::log2(e2 / e3);
    CHECK(order12 >= 3.5);
    CHECK(order23 >= 3.5);
}

TEST_CASE("adaptive reference matches a closed form tightly") {
    Derivative f = [](std::span<const double> x, std::span<const double>, double,
                      std::span<double> dxdt) { dxdt[0] = -2.0 * x[0]; };
    const auto y = integrate_adaptive(f, 1, std::vector<double>{1.0}, kNoAction, 0.0, 3.0, 1e-9,
                                      1e-12);
    CHECK(y[0] == doctest::Approx(std::exp(-6.0)).epsilon(1e-8));
}
