#pragma once

#include <array>

#include "core/env.hpp"

namespace recirc {

// Microalgae photobioreactor (chemostat) environments. The action is the
// incident light intensity; the reward is the CO2 mass removed during the
// step, so an episode return is the total CO2 removed. Two growth models:
//
//   monod  - two states [substrate, biomass]; growth saturates in substrate
//            and light multiplicatively.
//   droop  - three states [substrate, quota, biomass]; nutrient uptake and
//            growth are decoupled through an internal cell quota with a
//            subsistence floor.
//
// Time unit is days; exported CO2 flows are converted to kg/s.
struct AlgaeParams {
    double max_growth_rate = 2.0;      // 1/day (monod mu_max, droop theoretical max)
    double substrate_half_sat = 0.1;   // g/L
    double light_half_sat = 100.0;     // umol m^-2 s^-1
    double max_uptake_rate = 0.073;    // g/(g day), droop
    double subsistence_quota = 0.018;  // g/g, droop
    double yield = 0.5;                // g biomass per g substrate, monod
    double dilution_rate = 0.5;        // 1/day
    double inflow_substrate = 0.5;     // g/L
    double co2_fraction = 0.5;         // fraction of uptake that is CO2, in (0,1)
    double max_light = 1000.0;         // umol m^-2 s^-1, action bound
    double volume_l = 1000.0;          // culture volume, L
    double light_cost = 0.0;           // optional reward penalty per light unit per day

    double dt = 0.01;  // days
    int substeps = 5;
    OdeMethod method = OdeMethod::rk4;
    int horizon = 1000;
    double init_substrate = 0.2;  // g/L
    double init_biomass = 0.05;   // g/L
    double init_quota = 0.03;     // g/g, droop only

    void validate() const;
};

// Saturating light factor I/(K_I + I).
double light_factor(double light, const AlgaeParams& p);

std::array<double, 2> monod_derivative(std::span<const double> x, double light,
                                       const AlgaeParams& p);
std::array<double, 3> droop_derivative(std::span<const double> x, double light,
                                       const AlgaeParams& p);

struct AlgaeUptake {
    double total_uptake_g_per_day = 0.0;  // culture-wide nutrient uptake
    double co2_uptake_g_per_day = 0.0;    // co2_fraction of the above
    double co2_flow_kg_per_s = 0.0;       // same quantity as a continuous flow
};

AlgaeUptake monod_uptake(std::span<const double> x, double light, const AlgaeParams& p);
AlgaeUptake droop_uptake(std::span<const double> x, const AlgaeParams& p);

enum class AlgaeModel { monod, droop };

class AlgaeEnv final : public Env {
public:
    explicit AlgaeEnv(AlgaeModel model, AlgaeParams params = {}, std::uint64_t base_seed = 0);

    const BoxSpace& observation_space() const override { return obs_space_; }
    const BoxSpace& action_space() const override { return act_space_; }
    int max_episode_steps() const override { return params_.horizon; }
    double step_dt() const override { return params_.dt; }
    std::vector<std::string> state_names() const override;
    OdeSpec verification_spec() const override;
    const AlgaeParams& params() const { return params_; }
    AlgaeModel model() const { return model_; }

    // CO2 uptake at a given raw state and light, exported for flow ledgers.
    AlgaeUptake uptake(std::span<const double> state, double light) const;

protected:
    std::vector<double> initial_state(Rng& rng) const override;
    double reward(std::span<const double> state, std::span<const double> action) const override;
    std::vector<double> advance(const std::vector<double>& state, std::span<const double> action,
                                double t, bool& terminated, StepInfo& info) override;

private:
    AlgaeModel model_;
    AlgaeParams params_;
    BoxSpace obs_space_;
    BoxSpace act_space_;
    OdeSpec ode_;
};

}  // namespace recirc
