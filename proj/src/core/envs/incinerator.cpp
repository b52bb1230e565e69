#include "core/envs/incinerator.hpp"

#include <stdexcept>

namespace recirc {

namespace {
constexpr double kDenominatorGuard = 1e-6;  // W-equivalent thermal-mass floor
}

void IncineratorParams::validate() const {
    auto nonneg = [](double v) { return v >= 0.0; };
    for (const double v :
         {waste_inflow, cp_waste, cp_gas, cp_char, cp_metal, grate_mass, freeboard_mass,
          primary_air_flow, primary_air_temp, secondary_air_flow, secondary_air_temp,
          setpoint_temp, max_heat_extraction, waste_rate, char_rate, ash_rate, char_out_rate,
          wastebed_gas_out_rate, freeboard_gas_out_rate, waste_heat, gas_heat})
        if (!nonneg(v)) throw std::invalid_argument("incinerator: parameters must be >= 0");
    if (!(char_yield >= 0.0 && char_yield <= 1.0) || !(gas_yield >= 0.0 && gas_yield <= 1.0) ||
        char_yield + gas_yield > 1.0)
        throw std::invalid_argument(
            "incinerator: yields must be fractions with char_yield + gas_yield <= 1");
    if (!(dt > 0.0) || substeps < 1 || horizon < 1)
        throw std::invalid_argument("incinerator: dt, substeps and horizon must be positive");
}

IncineratorRates incinerator_rates(std::span<const double> x, const IncineratorParams& p) {
    IncineratorRates r;
    r.waste_consumption = p.waste_rate * x[0];
    r.char_production = p.char_yield * r.waste_consumption;
    r.char_consumption = p.char_rate * x[1];
    r.gas_production = p.gas_yield * r.waste_consumption + r.char_consumption;
    r.ash_outflow = p.ash_rate * x[0];
    r.char_outflow = p.char_out_rate * x[1];
    r.wastebed_gas_outflow = p.wastebed_gas_out_rate * x[3];
    r.freeboard_gas_outflow = p.freeboard_gas_out_rate * x[4];
    r.conversion_heat = p.waste_heat * r.waste_consumption;
    r.freeboard_heat = p.gas_heat * r.gas_production;
    return r;
}

std::array<double, 6> incinerator_derivative(std::span<const double> x, double heat_extraction,
                                             const IncineratorParams& p) {
    const auto r = incinerator_rates(x, p);

    const double bed_thermal_mass = p.cp_waste * x[0] + p.cp_char * x[1] + p.cp_metal * p.grate_mass;
    const double freeboard_thermal_mass = p.cp_gas * x[4] + p.cp_metal * p.freeboard_mass;
    if (bed_thermal_mass < kDenominatorGuard)
        throw ThermalMassUnderflow("wastebed thermal mass below guard threshold");
    if (freeboard_thermal_mass < kDenominatorGuard)
        throw ThermalMassUnderflow("freeboard thermal mass below guard threshold");

    std::array<double, 6> dxdt{};
    dxdt[0] = p.waste_inflow - r.ash_outflow - r.waste_consumption;
    dxdt[1] = -r.char_outflow + r.char_production - r.char_consumption;
    dxdt[2] = (p.waste_inflow * p.cp_waste * x[2] +
               p.primary_air_flow * p.cp_gas * (p.primary_air_temp - x[2]) + r.conversion_heat) /
              bed_thermal_mass;
    dxdt[3] = p.primary_air_flow - r.wastebed_gas_outflow + r.gas_production;
    dxdt[4] = r.wastebed_gas_outflow - r.freeboard_gas_outflow + p.secondary_air_flow;
    dxdt[5] = (r.wastebed_gas_outflow * p.cp_gas * (x[2] - x[5]) +
               p.secondary_air_flow * p.cp_gas * (p.secondary_air_temp - x[5]) +
               r.freeboard_heat - heat_extraction) /
              freeboard_thermal_mass;
    return dxdt;
}

double incinerator_reward(std::span<const double> x, const IncineratorParams& p) {
    const double err = p.setpoint_temp - x[5];
    return -err * err;
}

IncineratorEnv::IncineratorEnv(IncineratorParams params, std::uint64_t base_seed)
    : Env(base_seed), params_(params) {
    params_.validate();
    obs_space_ = BoxSpace::make({0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
                                {1e5, 1e5, 2e4, 1e5, 1e5, 2e4});
    act_space_ = BoxSpace::make({0.0}, {params_.max_heat_extraction});
    ode_.state_dim = 6;
    ode_.dt = params_.dt;
    ode_.substeps = params_.substeps;
    ode_.method = params_.method;
    ode_.derivative = [p = params_](std::span<const double> x, std::span<const double> u,
                                    double /*t*/, std::span<double> dxdt) {
        const auto d = incinerator_derivative(x, u[0], p);
        for (std::size_t i = 0; i < 6; ++i) dxdt[i] = d[i];
    };
}

std::vector<double> IncineratorEnv::initial_state(Rng& /*rng*/) const {
    return {params_.initial_state.begin(), params_.initial_state.end()};
}

double IncineratorEnv::reward(std::span<const double> state,
                              std::span<const double> /*action*/) const {
    return incinerator_reward(state, params_);
}

std::vector<double> IncineratorEnv::advance(const std::vector<double>& state,
                                            std::span<const double> action, double t,
                                            bool& terminated, StepInfo& info) {
    terminated = false;
    try {
        return integrate_step(ode_, state, action, t);
    } catch (const ThermalMassUnderflow&) {
        terminated = true;
        info.extras["thermal_mass_guard"] = 1.0;
        return state;  // keep the last valid state
    }
}

}  // namespace recirc
