#pragma once

#include <array>

#include "core/env.hpp"

namespace recirc {

// Grate incinerator reduced to its wastebed and freeboard. State:
//   x1 waste mass in the wastebed      [kg]
//   x2 char mass in the wastebed       [kg]
//   x3 wastebed temperature            [K]
//   x4 gas mass in the wastebed        [kg]
//   x5 gas mass in the freeboard       [kg]
//   x6 freeboard gas temperature       [K]
// The action is the heat extracted from the freeboard, used to regulate x6
// to the setpoint.
struct IncineratorParams {
    double waste_inflow = 5.0;  // kg/s of waste fed onto the grate

    // specific heats, J/(kg K)
    double cp_waste = 1500.0;
    double cp_gas = 1100.0;
    double cp_char = 1000.0;
    double cp_metal = 500.0;

    double grate_mass = 10000.0;     // kg
    double freeboard_mass = 5000.0;  // kg

    double primary_air_flow = 8.0;     // kg/s into the wastebed
    double primary_air_temp = 400.0;   // K
    double secondary_air_flow = 4.0;   // kg/s into the freeboard
    double secondary_air_temp = 300.0; // K

    double setpoint_temp = 1273.0;      // K, freeboard target
    double max_heat_extraction = 5e7;   // W, one-sided action bound

    // First-order constitutive coefficients. The published model behind this
    // reduction does not travel with its closure laws, so all conversion and
    // discharge rates here are mass-proportional with user-set constants.
    double waste_rate = 0.004;            // 1/s, waste conversion
    double char_yield = 0.15;             // fraction of converted waste to char
    double char_rate = 0.002;             // 1/s, char combustion
    double gas_yield = 0.7;               // fraction of converted waste to gas
    double ash_rate = 0.001;              // 1/s, ash discharge
    double char_out_rate = 0.001;         // 1/s, char discharge
    double wastebed_gas_out_rate = 0.05;  // 1/s, wastebed -> freeboard
    double freeboard_gas_out_rate = 0.05; // 1/s, freeboard -> stack
    double waste_heat = 3e6;              // J/kg released by waste conversion
    double gas_heat = 2e6;                // J/kg released by freeboard combustion

    double dt = 1.0;  // s
    int substeps = 10;
    OdeMethod method = OdeMethod::rk4;
    int horizon = 600;
    std::array<double, 6> initial_state{2000.0, 100.0, 900.0, 50.0, 100.0, 1100.0};

    void validate() const;
};

// Intermediate rates entering the state equations.
struct IncineratorRates {
    double waste_consumption = 0.0;       // R_w
    double char_production = 0.0;         // P_char
    double char_consumption = 0.0;        // R_char
    double gas_production = 0.0;          // R_g
    double ash_outflow = 0.0;             // F_out
    double char_outflow = 0.0;            // F_char,out
    double wastebed_gas_outflow = 0.0;    // F_g,w,out
    double freeboard_gas_outflow = 0.0;   // F_g,out
    double conversion_heat = 0.0;         // Q
    double freeboard_heat = 0.0;          // Q_g
};

IncineratorRates incinerator_rates(std::span<const double> x, const IncineratorParams& p);

// Thermal-mass denominator dropped below the guard threshold.
class ThermalMassUnderflow : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::array<double, 6> incinerator_derivative(std::span<const double> x, double heat_extraction,
                                             const IncineratorParams& p);

// r = -(setpoint - x6)^2
double incinerator_reward(std::span<const double> x, const IncineratorParams& p);

class IncineratorEnv final : public Env {
public:
    explicit IncineratorEnv(IncineratorParams params = {}, std::uint64_t base_seed = 0);

    const BoxSpace& observation_space() const override { return obs_space_; }
    const BoxSpace& action_space() const override { return act_space_; }
    int max_episode_steps() const override { return params_.horizon; }
    double step_dt() const override { return params_.dt; }
    std::vector<std::string> state_names() const override {
        return {"x1", "x2", "x3", "x4", "x5", "x6"};
    }
    OdeSpec verification_spec() const override { return ode_; }
    const IncineratorParams& params() const { return params_; }

protected:
    std::vector<double> initial_state(Rng& rng) const override;
    double reward(std::span<const double> state, std::span<const double> action) const override;
    std::vector<double> advance(const std::vector<double>& state, std::span<const double> action,
                                double t, bool& terminated, StepInfo& info) override;

private:
    IncineratorParams params_;
    BoxSpace obs_space_;
    BoxSpace act_space_;
    OdeSpec ode_;
};

}  // namespace recirc
