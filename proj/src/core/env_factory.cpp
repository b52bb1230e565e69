#include "core/env_factory.hpp"

#include <sstream>

#include "core/config.hpp"
#include "core/envs/algae.hpp"
#include "core/envs/incinerator.hpp"
#include "core/envs/truck.hpp"

namespace recirc {

const std::vector<EnvInfo>& env_catalog() {
    static const std::vector<EnvInfo> catalog = {
        {"transport-truck", 2, 1, "c^6_{2,3} of the solid cycle", "transport arc"},
        {"incinerator", 6, 1, "c^3_{3,3} of the solid cycle", "incinerator node"},
        {"co2-microalgae-monod", 2, 1, "c^3_{3,3} of the net-zero cycle", "CO2 remover node"},
        {"co2-microalgae-droop", 3, 1, "c^3_{3,3} of the net-zero cycle", "CO2 remover node"},
    };
    return catalog;
}

namespace {

OdeMethod method_param(const nlohmann::json& obj, const std::string& context) {
    return ode_method_from_string(json_string(obj, "method", "rk4", context));
}

TruckParams truck_params(const nlohmann::json& obj) {
    const std::string ctx = "transport-truck params";
    require_keys_subset(obj,
                        {"m_truck", "m_u", "x_inc", "f_max", "dt", "substeps", "method", "horizon",
                         "x0_min", "x0_max", "v0_min", "v0_max"},
                        ctx);
    TruckParams p;
    p.truck_mass = json_number(obj, "m_truck", p.truck_mass, ctx);
    p.payload_mass = json_number(obj, "m_u", p.payload_mass, ctx);
    p.incinerator_position = json_number(obj, "x_inc", p.incinerator_position, ctx);
    p.max_force = json_number(obj, "f_max", p.max_force, ctx);
    p.dt = json_number(obj, "dt", p.dt, ctx);
    p.substeps = json_int(obj, "substeps", p.substeps, ctx);
    p.method = method_param(obj, ctx);
    p.horizon = json_int(obj, "horizon", p.horizon, ctx);
    p.x0_min = json_number(obj, "x0_min", p.x0_min, ctx);
    p.x0_max = json_number(obj, "x0_max", p.x0_max, ctx);
    p.v0_min = json_number(obj, "v0_min", p.v0_min, ctx);
    p.v0_max = json_number(obj, "v0_max", p.v0_max, ctx);
    return p;
}

IncineratorParams incinerator_params(const nlohmann::json& obj) {
    const std::string ctx = "incinerator params";
    require_keys_subset(
        obj, {"waste_inflow",   "cp_waste",          "cp_gas",
              "cp_char",        "cp_metal",          "grate_mass",
              "freeboard_mass", "primary_air_flow",  "primary_air_temp",
              "secondary_air_flow", "secondary_air_temp", "setpoint_temp",
              "max_heat_extraction", "waste_rate",   "char_yield",
              "char_rate",      "gas_yield",         "ash_rate",
              "char_out_rate",  "wastebed_gas_out_rate", "freeboard_gas_out_rate",
              "waste_heat",     "gas_heat",          "dt",
              "substeps",       "method",            "horizon",
              "initial_state"},
        ctx);
    IncineratorParams p;
    p.waste_inflow = json_number(obj, "waste_inflow", p.waste_inflow, ctx);
    p.cp_waste = json_number(obj, "cp_waste", p.cp_waste, ctx);
    p.cp_gas = json_number(obj, "cp_gas", p.cp_gas, ctx);
    p.cp_char = json_number(obj, "cp_char", p.cp_char, ctx);
    p.cp_metal = json_number(obj, "cp_metal", p.cp_metal, ctx);
    p.grate_mass = json_number(obj, "grate_mass", p.grate_mass, ctx);
    p.freeboard_mass = json_number(obj, "freeboard_mass", p.freeboard_mass, ctx);
    p.primary_air_flow = json_number(obj, "primary_air_flow", p.primary_air_flow, ctx);
    p.primary_air_temp = json_number(obj, "primary_air_temp", p.primary_air_temp, ctx);
    p.secondary_air_flow = json_number(obj, "secondary_air_flow", p.secondary_air_flow, ctx);
    p.secondary_air_temp = json_number(obj, "secondary_air_temp", p.secondary_air_temp, ctx);
    p.setpoint_temp = json_number(obj, "setpoint_temp", p.setpoint_temp, ctx);
    p.max_heat_extraction = json_number(obj, "max_heat_extraction", p.max_heat_extraction, ctx);
    p.waste_rate = json_number(obj, "waste_rate", p.waste_rate, ctx);
    p.char_yield = json_number(obj, "char_yield", p.char_yield, ctx);
    p.char_rate = json_number(obj, "char_rate", p.char_rate, ctx);
    p.gas_yield = json_number(obj, "gas_yield", p.gas_yield, ctx);
    p.ash_rate = json_number(obj, "ash_rate", p.ash_rate, ctx);
    p.char_out_rate = json_number(obj, "char_out_rate", p.char_out_rate, ctx);
    p.wastebed_gas_out_rate =
        json_number(obj, "wastebed_gas_out_rate", p.wastebed_gas_out_rate, ctx);
    p.freeboard_gas_out_rate =
        json_number(obj, "freeboard_gas_out_rate", p.freeboard_gas_out_rate, ctx);
    p.waste_heat = json_number(obj, "waste_heat", p.waste_heat, ctx);
    p.gas_heat = json_number(obj, "gas_heat", p.gas_heat, ctx);
    p.dt = json_number(obj, "dt", p.dt, ctx);
    p.substeps = json_int(obj, "substeps", p.substeps, ctx);
    p.method = method_param(obj, ctx);
    p.horizon = json_int(obj, "horizon", p.horizon, ctx);
    if (obj.contains("initial_state")) {
        const auto& v = obj.at("initial_state");
        if (!v.is_array() || v.size() != 6)
            throw std::invalid_argument(ctx + ": 'initial_state' must be an array of 6 numbers");
        for (std::size_t i = 0; i < 6; ++i) p.initial_state[i] = v.at(i).get<double>();
    }
    return p;
}

AlgaeParams algae_params(const nlohmann::json& obj, const std::string& ctx) {
    require_keys_subset(obj,
                        {"mu_max", "k_s", "k_i", "rho_max", "k_q", "yield", "dilution_rate",
                         "s_in", "k_co2", "i_max", "volume_l", "light_cost", "dt", "substeps",
                         "method", "horizon", "init_substrate", "init_biomass", "init_quota"},
                        ctx);
    AlgaeParams p;
    p.max_growth_rate = json_number(obj, "mu_max", p.max_growth_rate, ctx);
    p.substrate_half_sat = json_number(obj, "k_s", p.substrate_half_sat, ctx);
    p.light_half_sat = json_number(obj, "k_i", p.light_half_sat, ctx);
    p.max_uptake_rate = json_number(obj, "rho_max", p.max_uptake_rate, ctx);
    p.subsistence_quota = json_number(obj, "k_q", p.subsistence_quota, ctx);
    p.yield = json_number(obj, "yield", p.yield, ctx);
    p.dilution_rate = json_number(obj, "dilution_rate", p.dilution_rate, ctx);
    p.inflow_substrate = json_number(obj, "s_in", p.inflow_substrate, ctx);
    p.co2_fraction = json_number(obj, "k_co2", p.co2_fraction, ctx);
    p.max_light = json_number(obj, "i_max", p.max_light, ctx);
    p.volume_l = json_number(obj, "volume_l", p.volume_l, ctx);
    p.light_cost = json_number(obj, "light_cost", p.light_cost, ctx);
    p.dt = json_number(obj, "dt", p.dt, ctx);
    p.substeps = json_int(obj, "substeps", p.substeps, ctx);
    p.method = method_param(obj, ctx);
    p.horizon = json_int(obj, "horizon", p.horizon, ctx);
    p.init_substrate = json_number(obj, "init_substrate", p.init_substrate, ctx);
    p.init_biomass = json_number(obj, "init_biomass", p.init_biomass, ctx);
    p.init_quota = json_number(obj, "init_quota", p.init_quota, ctx);
    return p;
}

}  // namespace

std::unique_ptr<Env> make_env(const std::string& name, const nlohmann::json& params,
                              std::uint64_t base_seed) {
    if (name == "transport-truck")
        return std::make_unique<TruckEnv>(truck_params(params), base_seed);
    if (name == "incinerator")
        return std::make_unique<IncineratorEnv>(incinerator_params(params), base_seed);
    if (name == "co2-microalgae-monod")
        return std::make_unique<AlgaeEnv>(AlgaeModel::monod,
                                          algae_params(params, "co2-microalgae-monod params"),
                                          base_seed);
    if (name == "co2-microalgae-droop")
        return std::make_unique<AlgaeEnv>(AlgaeModel::droop,
                                          algae_params(params, "co2-microalgae-droop params"),
                                          base_seed);

    std::ostringstream msg;
    msg << "unknown environment '" << name << "'; valid names:";
    for (const auto& info : env_catalog()) msg << " " << info.name;
    throw std::invalid_argument(msg.str());
}

}  // namespace recirc
