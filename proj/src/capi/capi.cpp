#include "recirc/recirc.h"

#include <cstring>
#include <new>
#include <string>

#include <json.hpp>

#include "core/circularity.hpp"
#include "core/config.hpp"
#include "core/env.hpp"
#include "core/env_factory.hpp"
#include "core/network.hpp"
#include "core/policy.hpp"
#include "core/trainers.hpp"

using nlohmann::json;

namespace {

thread_local std::string g_last_error;

int fail(int code, const std::string& message) {
    g_last_error = message;
    return code;
}

// Maps C++ failures onto the C error codes.
template <typename Fn>
int guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const recirc::IntegrationDivergence& e) {
        return fail(RECIRC_ERR_NUMERIC, e.what());
    } catch (const recirc::NetworkParseError& e) {
        return fail(RECIRC_ERR_PARSE, e.what());
    } catch (const json::parse_error& e) {
        return fail(RECIRC_ERR_PARSE, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(RECIRC_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::logic_error& e) {
        return fail(RECIRC_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::bad_alloc&) {
        return fail(RECIRC_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(RECIRC_ERR_IO, e.what());
    } catch (...) {
        return fail(RECIRC_ERR_INTERNAL, "unknown error");
    }
}

char* copy_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

int require(bool ok, const char* what) {
    if (!ok) return fail(RECIRC_ERR_INVALID_ARGUMENT, what);
    return RECIRC_OK;
}

json parse_params(const char* params_json) {
    if (params_json == nullptr || params_json[0] == '\0') return json::object();
    return json::parse(params_json);
}

recirc::EnvFactory make_factory(const std::string& name, const json& params,
                                std::uint64_t base_seed) {
    return [name, params, base_seed]() { return recirc::make_env(name, params, base_seed); };
}

int copy_space(const recirc::BoxSpace& space, double* low, double* high) {
    if (int rc = require(low && high, "low/high is null")) return rc;
    for (std::size_t i = 0; i < space.dim(); ++i) {
        low[i] = space.low[i];
        high[i] = space.high[i];
    }
    return RECIRC_OK;
}

recirc::SolidScenario to_scenario(const recirc_solid_scenario* s) {
    recirc::SolidScenario sc;
    sc.total_mass = s->total_mass;
    sc.sorting_success_pct = s->sorting_success_pct;
    sc.sorting_duration = s->sorting_duration;
    sc.extraction_exit_time = s->extraction_exit_time;
    sc.first_use_duration = s->first_use_duration;
    sc.transport_unsorted_duration = s->transport_unsorted_duration;
    sc.second_life_duration = s->second_life_duration;
    return sc;
}
recirc::TrainRun run_trainer(const std::string& env_name, const json& env_params,
                             const json& trainer, int n_workers) {
    const std::string ctx = "trainer config";
    const std::string algorithm = recirc::json_string(trainer, "algorithm", "ars", ctx);
    const int eval_episodes = recirc::json_int(trainer, "eval_episodes", 100, ctx);
    const auto factory = make_factory(env_name, env_params, 0);
    if (algorithm == "ars") {
        recirc::require_keys_subset(trainer,
                                    {"algorithm", "step_size", "n_directions", "top_directions",
                                     "noise_std", "iterations", "eval_every", "seed",
                                     "eval_episodes"},
                                    ctx);
        recirc::ArsConfig cfg;
        cfg.step_size = recirc::json_number(trainer, "step_size", cfg.step_size, ctx);
        cfg.n_directions = recirc::json_int(trainer, "n_directions", cfg.n_directions, ctx);
        cfg.top_directions = recirc::json_int(trainer, "top_directions", cfg.top_directions, ctx);
        cfg.noise_std = recirc::json_number(trainer, "noise_std", cfg.noise_std, ctx);
        cfg.iterations = recirc::json_int(trainer, "iterations", cfg.iterations, ctx);
        cfg.eval_every = recirc::json_int(trainer, "eval_every", cfg.eval_every, ctx);
        cfg.seed = recirc::json_u64(trainer, "seed", cfg.seed, ctx);
        return recirc::ars_train(factory, cfg, eval_episodes, n_workers);
    }
    if (algorithm == "cem") {
        recirc::require_keys_subset(trainer,
                                    {"algorithm", "population", "elite_frac", "init_std",
                                     "iterations", "eval_every", "seed", "eval_episodes"},
                                    ctx);
        recirc::CemConfig cfg;
        cfg.population = recirc::json_int(trainer, "population", cfg.population, ctx);
        cfg.elite_frac = recirc::json_number(trainer, "elite_frac", cfg.elite_frac, ctx);
        cfg.init_std = recirc::json_number(trainer, "init_std", cfg.init_std, ctx);
        cfg.iterations = recirc::json_int(trainer, "iterations", cfg.iterations, ctx);
        cfg.eval_every = recirc::json_int(trainer, "eval_every", cfg.eval_every, ctx);
        cfg.seed = recirc::json_u64(trainer, "seed", cfg.seed, ctx);
        return recirc::cem_train(factory, cfg, eval_episodes, n_workers);
    }
    throw std::invalid_argument("unknown trainer algorithm '" + algorithm +
                                "' (expected ars or cem)");
}

}  // namespace

struct recirc_env {
    std::unique_ptr<recirc::Env> env;
    recirc::StepInfo last_info;
};

struct recirc_policy {
    recirc::LinearPolicy policy;
};

struct recirc_train_result {
    recirc::TrainRun run;
};

struct recirc_network {
    recirc::Tmn tmn;
};

struct recirc_flow_set {
    std::vector<recirc::ContinuousFlow> flows;
};

extern "C" {

const char* recirc_last_error(void) { return g_last_error.c_str(); }

const char* recirc_version(void) { return "0.1.0"; }

void recirc_string_free(char* s) { delete[] s; }

/* ---------------- environments ---------------- */

int recirc_env_catalog_json(char** out_json) {
    if (int rc = require(out_json, "out_json is null")) return rc;
    return guarded([&] {
        json catalog = json::array();
        for (const auto& info : recirc::env_catalog())
            catalog.push_back({{"name", info.name},
                               {"state_dim", info.state_dim},
                               {"action_dim", info.action_dim},
                               {"compartment", info.compartment},
                               {"role", info.role}});
        *out_json = copy_string(catalog.dump());
        return RECIRC_OK;
    });
}

int recirc_env_create(const char* name, const char* params_json, uint64_t base_seed,
                      recirc_env** out_env) {
    if (int rc = require(name && out_env, "name/out_env is null")) return rc;
    return guarded([&] {
        auto env = recirc::make_env(name, parse_params(params_json), base_seed);
        *out_env = new recirc_env{std::move(env), {}};
        return RECIRC_OK;
    });
}

void recirc_env_destroy(recirc_env* env) { delete env; }

int recirc_env_obs_dim(const recirc_env* env, size_t* out_dim) {
    if (int rc = require(env && out_dim, "env/out_dim is null")) return rc;
    *out_dim = env->env->observation_space().dim();
    return RECIRC_OK;
}

int recirc_env_action_dim(const recirc_env* env, size_t* out_dim) {
    if (int rc = require(env && out_dim, "env/out_dim is null")) return rc;
    *out_dim = env->env->action_space().dim();
    return RECIRC_OK;
}

int recirc_env_max_episode_steps(const recirc_env* env, int* out_steps) {
    if (int rc = require(env && out_steps, "env/out_steps is null")) return rc;
    *out_steps = env->env->max_episode_steps();
    return RECIRC_OK;
}

int recirc_env_step_dt(const recirc_env* env, double* out_dt) {
    if (int rc = require(env && out_dt, "env/out_dt is null")) return rc;
    *out_dt = env->env->step_dt();
    return RECIRC_OK;
}

int recirc_env_observation_space(const recirc_env* env, double* low, double* high) {
    if (int rc = require(env, "env is null")) return rc;
    return copy_space(env->env->observation_space(), low, high);
}

int recirc_env_action_space(const recirc_env* env, double* low, double* high) {
    if (int rc = require(env, "env is null")) return rc;
    return copy_space(env->env->action_space(), low, high);
}

int recirc_env_state_names(const recirc_env* env, char** out_csv) {
    if (int rc = require(env && out_csv, "env/out_csv is null")) return rc;
    return guarded([&] {
        std::string names;
        for (const auto& n : env->env->state_names()) {
            if (!names.empty()) names += ",";
            names += n;
        }
        *out_csv = copy_string(names);
        return RECIRC_OK;
    });
}

int recirc_env_reset(recirc_env* env, const uint64_t* seed, double* obs_out) {
    if (int rc = require(env && obs_out, "env/obs_out is null")) return rc;
    return guarded([&] {
        const auto obs = seed ? env->env->reset(*seed) : env->env->reset();
        env->last_info = recirc::StepInfo{};
        env->last_info.state = env->env->state();
        for (std::size_t i = 0; i < obs.size(); ++i) obs_out[i] = obs[i];
        return RECIRC_OK;
    });
}

int recirc_env_step(recirc_env* env, const double* action, size_t action_len, double* obs_out,
                    recirc_step_info* out_info) {
    if (int rc = require(env && action && obs_out && out_info, "null argument")) return rc;
    return guarded([&] {
        const auto result = env->env->step(std::span<const double>(action, action_len));
        env->last_info = result.info;
        for (std::size_t i = 0; i < result.observation.size(); ++i)
            obs_out[i] = result.observation[i];
        out_info->reward = result.reward;
        out_info->terminated = result.terminated ? 1 : 0;
        out_info->truncated = result.truncated ? 1 : 0;
        out_info->action_clipped = result.info.action_clipped ? 1 : 0;
        return RECIRC_OK;
    });
}

int recirc_env_state(const recirc_env* env, double* state_out) {
    if (int rc = require(env && state_out, "env/state_out is null")) return rc;
    const auto& state = env->env->state();
    for (std::size_t i = 0; i < state.size(); ++i) state_out[i] = state[i];
    return RECIRC_OK;
}

int recirc_env_last_info_json(const recirc_env* env, char** out_json) {
    if (int rc = require(env && out_json, "env/out_json is null")) return rc;
    return guarded([&] {
        json info;
        info["state"] = env->last_info.state;
        info["action_clipped"] = env->last_info.action_clipped;
        for (const auto& [key, value] : env->last_info.extras) info[key] = value;
        *out_json = copy_string(info.dump());
        return RECIRC_OK;
    });
}

/* ---------------- policies ---------------- */

int recirc_policy_zero(size_t action_dim, size_t obs_dim, recirc_policy** out) {
    if (int rc = require(out && action_dim > 0 && obs_dim > 0, "bad dims or null out")) return rc;
    return guarded([&] {
        *out = new recirc_policy{recirc::LinearPolicy::zeros(action_dim, obs_dim)};
        return RECIRC_OK;
    });
}

int recirc_policy_load(const char* text, recirc_policy** out) {
    if (int rc = require(text && out, "text/out is null")) return rc;
    return guarded([&] {
        auto policy = recirc::load_policy(text);
        *out = new recirc_policy{std::move(policy)};
        return RECIRC_OK;
    });
}

int recirc_policy_load_file(const char* path, recirc_policy** out) {
    if (int rc = require(path && out, "path/out is null")) return rc;
    return guarded([&] {
        auto policy = recirc::load_policy_file(path);
        *out = new recirc_policy{std::move(policy)};
        return RECIRC_OK;
    });
}

int recirc_policy_save(const recirc_policy* policy, char** out_text) {
    if (int rc = require(policy && out_text, "policy/out_text is null")) return rc;
    return guarded([&] {
        *out_text = copy_string(recirc::save_policy(policy->policy));
        return RECIRC_OK;
    });
}

int recirc_policy_save_file(const recirc_policy* policy, const char* path) {
    if (int rc = require(policy && path, "policy/path is null")) return rc;
    return guarded([&] {
        recirc::save_policy_file(policy->policy, path);
        return RECIRC_OK;
    });
}

int recirc_policy_dims(const recirc_policy* policy, size_t* action_dim, size_t* obs_dim) {
    if (int rc = require(policy && action_dim && obs_dim, "null argument")) return rc;
    *action_dim = policy->policy.act_dim;
    *obs_dim = policy->policy.obs_dim;
    return RECIRC_OK;
}

int recirc_policy_act(const recirc_policy* policy, const double* obs, size_t obs_len,
                      double* action_out, size_t action_len) {
    if (int rc = require(policy && obs && action_out, "null argument")) return rc;
    return guarded([&] {
        policy->policy.act(std::span<const double>(obs, obs_len),
                           std::span<double>(action_out, action_len));
        return RECIRC_OK;
    });
}

void recirc_policy_destroy(recirc_policy* policy) { delete policy; }

/* ---------------- training ---------------- */

int recirc_train(const char* env_name, const char* env_params_json, const char* trainer_json,
                 int n_workers, recirc_train_result** out) {
    if (int rc = require(env_name && trainer_json && out, "null argument")) return rc;
    if (int rc = require(n_workers >= 1, "n_workers must be >= 1")) return rc;
    return guarded([&] {
        auto run = run_trainer(env_name, parse_params(env_params_json),
                               json::parse(trainer_json), n_workers);
        *out = new recirc_train_result{std::move(run)};
        return RECIRC_OK;
    });
}

int recirc_train_result_history_size(const recirc_train_result* result, size_t* out) {
    if (int rc = require(result && out, "null argument")) return rc;
    *out = result->run.history.size();
    return RECIRC_OK;
}

int recirc_train_result_history_row(const recirc_train_result* result, size_t index,
                                    int* iteration, double* mean_return, double* eval_return,
                                    int* has_eval) {
    if (int rc = require(result && iteration && mean_return && eval_return && has_eval,
                         "null argument"))
        return rc;
    if (index >= result->run.history.size())
        return fail(RECIRC_ERR_INVALID_ARGUMENT, "history index out of range");
    const auto& row = result->run.history[index];
    *iteration = row.iteration;
    *mean_return = row.mean_return;
    *has_eval = row.eval_return.has_value() ? 1 : 0;
    *eval_return = row.eval_return.value_or(0.0);
    return RECIRC_OK;
}

int recirc_train_result_report(const recirc_train_result* result, recirc_eval_report* out) {
    if (int rc = require(result && out, "null argument")) return rc;
    const auto& r = result->run.report;
    out->start_return = r.start_return;
    out->end_return = r.end_return;
    out->zeta = r.zeta;
    out->n_eval_episodes = r.n_eval_episodes;
    out->wall_time_seconds = r.wall_time_seconds;
    return RECIRC_OK;
}

int recirc_train_result_policy(const recirc_train_result* result, recirc_policy** out) {
    if (int rc = require(result && out, "null argument")) return rc;
    return guarded([&] {
        *out = new recirc_policy{result->run.policy};
        return RECIRC_OK;
    });
}

int recirc_train_result_diverged(const recirc_train_result* result, int* diverged,
                                 int* at_iteration) {
    if (int rc = require(result && diverged && at_iteration, "null argument")) return rc;
    *diverged = result->run.diverged ? 1 : 0;
    *at_iteration = result->run.diverged_iteration;
    return RECIRC_OK;
}

void recirc_train_result_destroy(recirc_train_result* result) { delete result; }

int recirc_evaluate(const char* env_name, const char* env_params_json,
                    const recirc_policy* policy, size_t n_episodes, uint64_t seed,
                    double* out_mean_return) {
    if (int rc = require(env_name && policy && out_mean_return, "null argument")) return rc;
    return guarded([&] {
        const auto factory = make_factory(env_name, parse_params(env_params_json), 0);
        *out_mean_return =
            recirc::evaluate(factory, policy->policy, static_cast<int>(n_episodes), seed);
        return RECIRC_OK;
    });
}

int recirc_zeta(double start_return, double end_return, double* out) {
    if (int rc = require(out, "out is null")) return rc;
    *out = recirc::zeta(start_return, end_return);
    return RECIRC_OK;
}

/* ---------------- networks and circularity ---------------- */

int recirc_network_parse(const char* text, recirc_network** out) {
    if (int rc = require(text && out, "text/out is null")) return rc;
    return guarded([&] {
        *out = new recirc_network{recirc::parse_network(text)};
        return RECIRC_OK;
    });
}

int recirc_network_load_file(const char* path, recirc_network** out) {
    if (int rc = require(path && out, "path/out is null")) return rc;
    return guarded([&] {
        *out = new recirc_network{recirc::load_network_file(path)};
        return RECIRC_OK;
    });
}

int recirc_network_builtin(const char* which, recirc_network** out) {
    if (int rc = require(which && out, "which/out is null")) return rc;
    return guarded([&] {
        const std::string name = which;
        if (name == "solid-cycle")
            *out = new recirc_network{recirc::solid_cycle_network()};
        else if (name == "netzero")
            *out = new recirc_network{recirc::netzero_network()};
        else
            throw std::invalid_argument("unknown builtin network '" + name +
                                        "' (expected solid-cycle or netzero)");
        return RECIRC_OK;
    });
}

int recirc_network_counts(const recirc_network* net, size_t* nodes, size_t* arcs, size_t* total) {
    if (int rc = require(net && nodes && arcs && total, "null argument")) return rc;
    *nodes = net->tmn.node_count();
    *arcs = net->tmn.arc_count();
    *total = net->tmn.total_count();
    return RECIRC_OK;
}

int recirc_network_validate(const recirc_network* net, int* ok, char** out_report) {
    if (int rc = require(net && ok && out_report, "null argument")) return rc;
    return guarded([&] {
        const auto report = recirc::validate_tmn(net->tmn);
        *ok = report.ok() ? 1 : 0;
        *out_report = copy_string(report.to_text());
        return RECIRC_OK;
    });
}

int recirc_network_digraph_json(const recirc_network* net, char** out_json) {
    if (int rc = require(net && out_json, "null argument")) return rc;
    return guarded([&] {
        const auto digraph = recirc::compartmental_digraph(net->tmn);
        json j;
        j["nodes"] = digraph.nodes;
        j["edges"] = json::array();
        for (const auto& e : digraph.edges)
            j["edges"].push_back({{"from", e.from}, {"to", e.to}, {"key", e.key}});
        *out_json = copy_string(j.dump());
        return RECIRC_OK;
    });
}

int recirc_network_serialize(const recirc_network* net, char** out_text) {
    if (int rc = require(net && out_text, "null argument")) return rc;
    return guarded([&] {
        *out_text = copy_string(recirc::serialize_network(net->tmn));
        return RECIRC_OK;
    });
}

void recirc_network_destroy(recirc_network* net) { delete net; }

int recirc_mass_split(double mass, double success_pct, double* recycled, double* unsorted) {
    if (int rc = require(recycled && unsorted, "recycled/unsorted is null")) return rc;
    return guarded([&] {
        const auto split = recirc::mass_split(mass, success_pct);
        *recycled = split.recycled;
        *unsorted = split.unsorted;
        return RECIRC_OK;
    });
}

int recirc_lambda_solid(const recirc_solid_scenario* scenario, const double* times,
                        size_t n_times, double* lambda_out) {
    if (int rc = require(scenario && times && lambda_out, "null argument")) return rc;
    return guarded([&] {
        const auto sc = to_scenario(scenario);
        for (size_t i = 0; i < n_times; ++i)
            lambda_out[i] = recirc::lambda_solid_scenario(sc, times[i]);
        return RECIRC_OK;
    });
}

int recirc_solid_event_times(const recirc_solid_scenario* scenario, double* sorter_exit,
                             double* unsorted_arrival, double* recycled_arrival) {
    if (int rc = require(scenario && sorter_exit && unsorted_arrival && recycled_arrival,
                         "null argument"))
        return rc;
    return guarded([&] {
        const auto sc = to_scenario(scenario);
        sc.validate();
        *sorter_exit = sc.sorter_exit_time();
        *unsorted_arrival = sc.unsorted_arrival_time();
        *recycled_arrival = sc.recycled_arrival_time();
        return RECIRC_OK;
    });
}

int recirc_solid_scenario_events(const recirc_solid_scenario* scenario, char** out_event_log) {
    if (int rc = require(scenario && out_event_log, "null argument")) return rc;
    return guarded([&] {
        const auto events = recirc::solid_scenario_events(to_scenario(scenario));
        *out_event_log = copy_string(recirc::serialize_event_log(events));
        return RECIRC_OK;
    });
}

int recirc_lambda_ledger(const recirc_network* net, const char* events_text,
                         const char* flows_text, double delta, const double* times,
                         size_t n_times, double* lambda_out) {
    if (int rc = require(net && events_text && times && lambda_out, "null argument")) return rc;
    return guarded([&] {
        const auto events = recirc::parse_event_log(events_text);
        const auto flows = flows_text ? recirc::parse_flow_file(flows_text)
                                      : std::vector<recirc::ContinuousFlow>{};
        recirc::CircularityConfig cfg{delta};
        for (size_t i = 0; i < n_times; ++i)
            lambda_out[i] = recirc::lambda_from_ledger(net->tmn, events, flows, times[i], cfg);
        return RECIRC_OK;
    });
}

int recirc_flows_parse(const char* text, recirc_flow_set** out) {
    if (int rc = require(text && out, "text/out is null")) return rc;
    return guarded([&] {
        *out = new recirc_flow_set{recirc::parse_flow_file(text)};
        return RECIRC_OK;
    });
}

int recirc_flow_set_size(const recirc_flow_set* flows, size_t* out) {
    if (int rc = require(flows && out, "flows/out is null")) return rc;
    *out = flows->flows.size();
    return RECIRC_OK;
}

int recirc_flow_endpoints(const recirc_flow_set* flows, size_t index, int* from_k, int* to_k) {
    if (int rc = require(flows && from_k && to_k, "null argument")) return rc;
    if (index >= flows->flows.size())
        return fail(RECIRC_ERR_INVALID_ARGUMENT, "flow index out of range");
    *from_k = flows->flows[index].from_k;
    *to_k = flows->flows[index].to_k;
    return RECIRC_OK;
}

int recirc_flow_samples_size(const recirc_flow_set* flows, size_t index, size_t* out) {
    if (int rc = require(flows && out, "flows/out is null")) return rc;
    if (index >= flows->flows.size())
        return fail(RECIRC_ERR_INVALID_ARGUMENT, "flow index out of range");
    *out = flows->flows[index].times.size();
    return RECIRC_OK;
}

int recirc_flow_samples(const recirc_flow_set* flows, size_t index, double* times,
                        double* rates) {
    if (int rc = require(flows && times && rates, "null argument")) return rc;
    if (index >= flows->flows.size())
        return fail(RECIRC_ERR_INVALID_ARGUMENT, "flow index out of range");
    const auto& f = flows->flows[index];
    for (std::size_t i = 0; i < f.times.size(); ++i) {
        times[i] = f.times[i];
        rates[i] = f.rates[i];
    }
    return RECIRC_OK;
}

void recirc_flow_set_destroy(recirc_flow_set* flows) { delete flows; }

int recirc_lambda_netzero(const double* emitter_times, const double* emitter_rates,
                          size_t emitter_n, const double* remover_times,
                          const double* remover_rates, size_t remover_n, double delta,
                          const double* times, size_t n_times, double* lambda_out) {
    if (int rc = require(emitter_times && emitter_rates && remover_times && remover_rates &&
                             times && lambda_out,
                         "null argument"))
        return rc;
    return guarded([&] {
        recirc::ContinuousFlow emitter{1, 2,
                                       std::vector<double>(emitter_times, emitter_times + emitter_n),
                                       std::vector<double>(emitter_rates, emitter_rates + emitter_n)};
        recirc::ContinuousFlow remover{2, 3,
                                       std::vector<double>(remover_times, remover_times + remover_n),
                                       std::vector<double>(remover_rates, remover_rates + remover_n)};
        recirc::CircularityConfig cfg{delta};
        for (size_t i = 0; i < n_times; ++i)
            lambda_out[i] = recirc::lambda_netzero(emitter, remover, times[i], cfg);
        return RECIRC_OK;
    });
}

/* ---------------- integrator verification ---------------- */

int recirc_verify_env(const char* env_name, const char* env_params_json,
                      const double* constant_action, size_t action_len, double horizon,
                      double rel_tol, uint64_t seed, char** out_report_json) {
    if (int rc = require(env_name && constant_action && out_report_json, "null argument"))
        return rc;
    return guarded([&] {
        auto env = recirc::make_env(env_name, parse_params(env_params_json), seed);
        if (action_len != env->action_space().dim())
            throw std::invalid_argument("constant_action has the wrong dimension");
        env->reset(seed);
        const std::vector<double> x0 = env->state();
        std::vector<double> action(constant_action, constant_action + action_len);
        env->action_space().clip(action);

        const auto spec = env->verification_spec();
        const auto report = recirc::verify_step_size(
            spec, x0, [&action](double) { return action; }, horizon, rel_tol);

        json j;
        j["pass"] = report.pass;
        j["reference_failed"] = report.reference_failed;
        if (report.reference_failed) j["reference_error"] = report.reference_error;
        j["rel_tol"] = report.rel_tol;
        j["max_rel_deviation"] = report.max_rel_deviation;
        j["steps"] = report.steps;
        j["dt"] = spec.dt;
        j["substeps"] = spec.substeps;
        j["method"] = recirc::to_string(spec.method);
        j["per_state"] = json::array();
        const auto names = env->state_names();
        for (std::size_t i = 0; i < report.per_state.size(); ++i) {
            const auto& d = report.per_state[i];
            j["per_state"].push_back({{"name", i < names.size() ? names[i] : std::to_string(i)},
                                      {"max_rel", d.max_rel},
                                      {"at_time", d.at_time},
                                      {"scale", d.scale}});
        }
        *out_report_json = copy_string(j.dump());
        return RECIRC_OK;
    });
}

} /* extern "C" */
