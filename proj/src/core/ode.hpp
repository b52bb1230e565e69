#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace recirc {

enum class OdeMethod { euler, rk4 };

OdeMethod ode_method_from_string(const std::string& name);
std::string to_string(OdeMethod m);

// Right-hand side of dx/dt = f(x, u, t). Time enters explicitly so that
// time-varying forcing integrates at the correct stage times.
using Derivative =
    std::function<void(std::span<const double> x, std::span<const double> u, double t,
                       std::span<double> dxdt)>;

struct OdeSpec {
    std::size_t state_dim = 0;
    Derivative derivative;
    double dt = 0.0;   // time advanced per control step
    int substeps = 1;  // equal integration substeps per control step
    OdeMethod method = OdeMethod::rk4;
};

// A state component left the representable range mid-step.
class IntegrationDivergence : public std::runtime_error {
public:
    IntegrationDivergence(int substep, std::size_t component)
        : std::runtime_error("integration diverged at substep " + std::to_string(substep) +
                             ", state component " + std::to_string(component)),
          substep_(substep),
          component_(component) {}

    int substep() const { return substep_; }
    std::size_t component() const { return component_; }

private:
    int substep_;
    std::size_t component_;
};

// Advance x across one control step of spec.dt with the action held constant
// (zero-order hold). Throws IntegrationDivergence on non-finite state.
std::vector<double> integrate_step(const OdeSpec& spec, std::span<const double> x,
                                   std::span<const double> u, double t);

// Adaptive Dormand-Prince 5(4) over [t0, t1] with the action held constant.
// Used as the in-repo reference against which fixed-step schedules are judged.
std::vector<double> integrate_adaptive(const Derivative& f, std::size_t state_dim,
                                       std::span<const double> x, std::span<const double> u,
                                       double t0, double t1, double rel_tol, double abs_tol);

using ActionSchedule = std::function<std::vector<double>(double t)>;

struct StateDeviation {
    double max_rel = 0.0;  // max |fixed - reference| / max(sup |reference|, tiny)
    double at_time = 0.0;
    double scale = 0.0;  // sup |reference| for this state over the horizon
};

struct VerifyReport {
    bool pass = false;
    bool reference_failed = false;
    std::string reference_error;
    double rel_tol = 0.0;
    double max_rel_deviation = 0.0;
    std::size_t steps = 0;
    std::vector<StateDeviation> per_state;
};

// Runs the schedule twice, with the fixed-step spec and with the adaptive
// reference at tight tolerance, applying the same per-control-step action to
// both, and reports per-state maximum relative deviation at step boundaries.
// Deviations are normalised by each state's sup magnitude along the
// reference trajectory so that states of very different scales are
// comparable.
VerifyReport verify_step_size(const OdeSpec& spec, std::span<const double> x0,
                              const ActionSchedule& schedule, double horizon, double rel_tol);

}  // namespace recirc
