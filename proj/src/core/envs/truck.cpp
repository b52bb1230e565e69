#include "core/envs/truck.hpp"

#include <stdexcept>

namespace recirc {

void TruckParams::validate() const {
    if (!(total_mass() > 0.0)) throw std::invalid_argument("truck: total mass must be positive");
    if (!(max_force > 0.0)) throw std::invalid_argument("truck: max_force must be positive");
    if (!(dt > 0.0) || substeps < 1 || horizon < 1)
        throw std::invalid_argument("truck: dt, substeps and horizon must be positive");
    if (!(x0_min <= x0_max) || !(v0_min <= v0_max))
        throw std::invalid_argument("truck: empty initial-state range");
}

std::array<double, 2> truck_derivative(std::span<const double> x, double force,
                                       const TruckParams& p) {
    return {x[1], force / p.total_mass()};
}

double truck_reward(std::span<const double> x, double force, const TruckParams& p) {
    const double gap = p.incinerator_position - x[0];
    return -(gap * gap + 0.1 * x[1] * x[1] + 0.001 * force * force);
}

TruckEnv::TruckEnv(TruckParams params, std::uint64_t base_seed)
    : Env(base_seed), params_(params) {
    params_.validate();
    // Route-scale bounds; runaway exploration saturates here instead of
    // polluting the observation statistics with unbounded positions.
    obs_space_ = BoxSpace::make({-1e4, -1e3}, {1e4, 1e3});
    act_space_ = BoxSpace::make({-params_.max_force}, {params_.max_force});
    ode_.state_dim = 2;
    ode_.dt = params_.dt;
    ode_.substeps = params_.substeps;
    ode_.method = params_.method;
    ode_.derivative = [p = params_](std::span<const double> x, std::span<const double> u,
                                    double /*t*/, std::span<double> dxdt) {
        const auto d = truck_derivative(x, u[0], p);
        dxdt[0] = d[0];
        dxdt[1] = d[1];
    };
}

std::vector<double> TruckEnv::initial_state(Rng& rng) const {
    const double x0 = rng.uniform(params_.x0_min, params_.x0_max);
    const double v0 = rng.uniform(params_.v0_min, params_.v0_max);
    return {x0, v0};
}

double TruckEnv::reward(std::span<const double> state, std::span<const double> action) const {
    return truck_reward(state, action[0], params_);
}

std::vector<double> TruckEnv::advance(const std::vector<double>& state,
                                      std::span<const double> action, double t, bool& terminated,
                                      StepInfo& /*info*/) {
    terminated = false;
    return integrate_step(ode_, state, action, t);
}

}  // namespace recirc
