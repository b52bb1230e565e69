#pragma once

#include <array>

#include "core/env.hpp"

namespace recirc {

// Point-mass truck hauling unsorted waste to the incinerator. State is
// [position, speed]; the action is the traction force. Reward penalises
// squared distance to the incinerator, speed, and control effort, so the
// maximum return of 0 means parked at the drop-off point.
struct TruckParams {
    double truck_mass = 10000.0;   // kg, empty vehicle
    double payload_mass = 2000.0;  // kg of unsorted waste on board
    double incinerator_position = 1000.0;  // m
    double max_force = 5e4;                // N
    double dt = 0.5;                       // s
    int substeps = 1;
    OdeMethod method = OdeMethod::rk4;
    int horizon = 400;
    double x0_min = -10.0, x0_max = 10.0;  // initial position range, m
    double v0_min = 0.0, v0_max = 0.0;     // initial speed range, m/s

    double total_mass() const { return truck_mass + payload_mass; }
    void validate() const;
};

std::array<double, 2> truck_derivative(std::span<const double> x, double force,
                                       const TruckParams& p);

// r = -[(x_inc - x1)^2 + 0.1 x2^2 + 0.001 F^2]
double truck_reward(std::span<const double> x, double force, const TruckParams& p);

class TruckEnv final : public Env {
public:
    explicit TruckEnv(TruckParams params = {}, std::uint64_t base_seed = 0);

    const BoxSpace& observation_space() const override { return obs_space_; }
    const BoxSpace& action_space() const override { return act_space_; }
    int max_episode_steps() const override { return params_.horizon; }
    double step_dt() const override { return params_.dt; }
    std::vector<std::string> state_names() const override { return {"x1", "x2"}; }
    OdeSpec verification_spec() const override { return ode_; }
    const TruckParams& params() const { return params_; }

protected:
    std::vector<double> initial_state(Rng& rng) const override;
    double reward(std::span<const double> state, std::span<const double> action) const override;
    std::vector<double> advance(const std::vector<double>& state, std::span<const double> action,
                                double t, bool& terminated, StepInfo& info) override;

private:
    TruckParams params_;
    BoxSpace obs_space_;
    BoxSpace act_space_;
    OdeSpec ode_;
};

}  // namespace recirc
