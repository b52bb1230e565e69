#include "core/envs/algae.hpp"

#include <cmath>
#include <stdexcept>

namespace recirc {

namespace {
constexpr double kSecondsPerDay = 86400.0;
constexpr double kKgPerGram = 1e-3;
// Post-step projection floor for the droop quota, slightly above the
// subsistence value so the growth term cannot turn singularly negative from
// numerical undershoot.
constexpr double kQuotaFloorMargin = 1e-12;
}  // namespace

void AlgaeParams::validate() const {
    if (!(co2_fraction > 0.0 && co2_fraction < 1.0))
        throw std::invalid_argument("algae: co2_fraction must be inside (0, 1)");
    for (const double v : {max_growth_rate, substrate_half_sat, light_half_sat, max_uptake_rate,
                           subsistence_quota, yield, dilution_rate, inflow_substrate, max_light,
                           volume_l})
        if (!(v > 0.0)) throw std::invalid_argument("algae: parameters must be positive");
    if (light_cost < 0.0) throw std::invalid_argument("algae: light_cost must be >= 0");
    if (!(dt > 0.0) || substeps < 1 || horizon < 1)
        throw std::invalid_argument("algae: dt, substeps and horizon must be positive");
    if (!(init_substrate >= 0.0) || !(init_biomass >= 0.0))
        throw std::invalid_argument("algae: initial concentrations must be >= 0");
    if (!(init_quota >= subsistence_quota))
        throw std::invalid_argument("algae: init_quota must be >= subsistence_quota");
}

double light_factor(double light, const AlgaeParams& p) {
    return light / (p.light_half_sat + light);
}

std::array<double, 2> monod_derivative(std::span<const double> x, double light,
                                       const AlgaeParams& p) {
    const double substrate = x[0];
    const double biomass = x[1];
    const double growth = p.max_growth_rate * substrate / (p.substrate_half_sat + substrate) *
                          light_factor(light, p);
    const double uptake = growth * biomass / p.yield;  // g/(L day), volumetric
    return {p.dilution_rate * (p.inflow_substrate - substrate) - uptake,
            (growth - p.dilution_rate) * biomass};
}

std::array<double, 3> droop_derivative(std::span<const double> x, double light,
                                       const AlgaeParams& p) {
    const double substrate = x[0];
    const double quota = x[1];
    const double biomass = x[2];
    const double uptake = p.max_uptake_rate * substrate / (p.substrate_half_sat + substrate);
    const double growth =
        p.max_growth_rate * (1.0 - p.subsistence_quota / quota) * light_factor(light, p);
    return {p.dilution_rate * (p.inflow_substrate - substrate) - uptake * biomass,
            uptake - growth * quota, (growth - p.dilution_rate) * biomass};
}

namespace {

AlgaeUptake package_uptake(double total_g_per_day, const AlgaeParams& p) {
    AlgaeUptake u;
    u.total_uptake_g_per_day = total_g_per_day;
    u.co2_uptake_g_per_day = p.co2_fraction * total_g_per_day;
    u.co2_flow_kg_per_s = u.co2_uptake_g_per_day * kKgPerGram / kSecondsPerDay;
    return u;
}

}  // namespace

AlgaeUptake monod_uptake(std::span<const double> x, double light, const AlgaeParams& p) {
    const double growth = p.max_growth_rate * x[0] / (p.substrate_half_sat + x[0]) *
                          light_factor(light, p);
    const double volumetric = growth * x[1] / p.yield;  // g/(L day)
    return package_uptake(volumetric * p.volume_l, p);
}

AlgaeUptake droop_uptake(std::span<const double> x, const AlgaeParams& p) {
    const double per_biomass = p.max_uptake_rate * x[0] / (p.substrate_half_sat + x[0]);
    return package_uptake(per_biomass * x[2] * p.volume_l, p);
}

AlgaeEnv::AlgaeEnv(AlgaeModel model, AlgaeParams params, std::uint64_t base_seed)
    : Env(base_seed), model_(model), params_(params) {
    params_.validate();
    const std::size_t dim = model_ == AlgaeModel::monod ? 2 : 3;
    obs_space_ = BoxSpace::make(std::vector<double>(dim, 0.0), std::vector<double>(dim, 1e3));
    act_space_ = BoxSpace::make({0.0}, {params_.max_light});
    ode_.state_dim = dim;
    ode_.dt = params_.dt;
    ode_.substeps = 1;  // substeps handled here so the quota projection can run per substep
    ode_.method = params_.method;
    if (model_ == AlgaeModel::monod) {
        ode_.derivative = [p = params_](std::span<const double> x, std::span<const double> u,
                                        double /*t*/, std::span<double> dxdt) {
            const auto d = monod_derivative(x, u[0], p);
            dxdt[0] = d[0];
            dxdt[1] = d[1];
        };
    } else {
        ode_.derivative = [p = params_](std::span<const double> x, std::span<const double> u,
                                        double /*t*/, std::span<double> dxdt) {
            const auto d = droop_derivative(x, u[0], p);
            dxdt[0] = d[0];
            dxdt[1] = d[1];
            dxdt[2] = d[2];
        };
    }
}

std::vector<std::string> AlgaeEnv::state_names() const {
    if (model_ == AlgaeModel::monod) return {"s_n", "x_b"};
    return {"s_n", "q", "x_b"};
}

OdeSpec AlgaeEnv::verification_spec() const {
    // The ODE exactly as stepped; the quota projection is a safety net and
    // stays out of the verified dynamics.
    OdeSpec spec = ode_;
    spec.substeps = params_.substeps;
    return spec;
}

AlgaeUptake AlgaeEnv::uptake(std::span<const double> state, double light) const {
    return model_ == AlgaeModel::monod ? monod_uptake(state, light, params_)
                                       : droop_uptake(state, params_);
}

std::vector<double> AlgaeEnv::initial_state(Rng& /*rng*/) const {
    if (model_ == AlgaeModel::monod) return {params_.init_substrate, params_.init_biomass};
    return {params_.init_substrate, params_.init_quota, params_.init_biomass};
}

double AlgaeEnv::reward(std::span<const double> state, std::span<const double> action) const {
    const AlgaeUptake u = uptake(state, action[0]);
    return u.co2_uptake_g_per_day * params_.dt - params_.light_cost * action[0] * params_.dt;
}

std::vector<double> AlgaeEnv::advance(const std::vector<double>& state,
                                      std::span<const double> action, double t, bool& terminated,
                                      StepInfo& info) {
    terminated = false;
    // Exported alongside the trajectory so the flow can feed circularity
    // ledgers directly.
    info.extras["m_dot_23"] = uptake(state, action[0]).co2_flow_kg_per_s;
    OdeSpec sub = ode_;
    sub.dt = params_.dt / params_.substeps;
    std::vector<double> y = state;
    int clamped = 0;
    for (int s = 0; s < params_.substeps; ++s) {
        y = integrate_step(sub, y, action, t + s * sub.dt);
        if (model_ == AlgaeModel::droop) {
            const double floor = params_.subsistence_quota * (1.0 + kQuotaFloorMargin);
            if (y[1] < floor) {
                y[1] = floor;
                ++clamped;
            }
        }
    }
    if (clamped > 0) info.extras["quota_clamped"] = static_cast<double>(clamped);
    return y;
}

}  // namespace recirc
