// recirc command-line tool. Drives the shared library through its C API:
// environment simulation, derivative-free training, circularity reports and
// integrator verification, with CSV/JSON outputs ready for plotting.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "recirc/recirc.h"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;    // usage, config or I/O problem
constexpr int kExitNumeric = 2;  // divergence or failed verification

struct CliError {
    int exit_code;
    std::string message;
};

void check(int rc) {
    if (rc == RECIRC_OK) return;
    const int code = rc == RECIRC_ERR_NUMERIC ? kExitNumeric : kExitUsage;
    throw CliError{code, recirc_last_error()};
}

struct StringDeleter {
    void operator()(char* s) const { recirc_string_free(s); }
};
using ApiString = std::unique_ptr<char, StringDeleter>;

std::string take_string(char* s) {
    ApiString owned(s);
    return std::string(owned.get());
}

struct EnvDeleter {
    void operator()(recirc_env* e) const { recirc_env_destroy(e); }
};
using EnvHandle = std::unique_ptr<recirc_env, EnvDeleter>;

struct PolicyDeleter {
    void operator()(recirc_policy* p) const { recirc_policy_destroy(p); }
};
using PolicyHandle = std::unique_ptr<recirc_policy, PolicyDeleter>;

struct NetworkDeleter {
    void operator()(recirc_network* n) const { recirc_network_destroy(n); }
};
using NetworkHandle = std::unique_ptr<recirc_network, NetworkDeleter>;

struct TrainResultDeleter {
    void operator()(recirc_train_result* r) const { recirc_train_result_destroy(r); }
};
using TrainResultHandle = std::unique_ptr<recirc_train_result, TrainResultDeleter>;

struct FlowSetDeleter {
    void operator()(recirc_flow_set* f) const { recirc_flow_set_destroy(f); }
};
using FlowSetHandle = std::unique_ptr<recirc_flow_set, FlowSetDeleter>;

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CliError{kExitUsage, "cannot open file '" + path + "'"};
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

// Effective run settings shared by every command.
struct Settings {
    json config = json::object();
    std::uint64_t seed = 0;
    std::string out_dir = ".";
    int workers = 1;
};

json load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CliError{kExitUsage, "cannot open config file '" + path + "'"};
    try {
        return json::parse(in);  // parse errors carry line/column positions
    } catch (const json::parse_error& e) {
        throw CliError{kExitUsage, std::string("config '") + path + "': " + e.what()};
    }
}

void require_object_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const std::string& context) {
    if (obj.is_null()) return;
    if (!obj.is_object()) throw CliError{kExitUsage, context + ": expected an object"};
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (const char* a : allowed)
            if (key == a) {
                known = true;
                break;
            }
        if (!known) throw CliError{kExitUsage, context + ": unknown key '" + key + "'"};
    }
}

Settings make_settings(const std::string& config_path, std::optional<std::uint64_t> seed_flag,
                       const std::string& out_flag, int workers) {
    Settings s;
    if (!config_path.empty()) s.config = load_config_file(config_path);
    require_object_keys(s.config,
                        {"seed", "out", "env", "trainer", "simulate", "evaluate", "circularity",
                         "verify"},
                        "config");
    if (s.config.contains("seed")) {
        if (!s.config["seed"].is_number_integer())
            throw CliError{kExitUsage, "config: 'seed' must be an integer"};
        s.seed = s.config["seed"].get<std::uint64_t>();
    }
    if (seed_flag) {
        s.seed = *seed_flag;
        s.config["seed"] = *seed_flag;  // echo reflects the effective seed
    }
    if (s.config.contains("out")) s.out_dir = s.config["out"].get<std::string>();
    if (!out_flag.empty()) s.out_dir = out_flag;
    s.workers = workers;
    std::filesystem::create_directories(s.out_dir);
    return s;
}

std::string out_path(const Settings& s, const std::string& name) {
    return (std::filesystem::path(s.out_dir) / name).string();
}

std::ofstream open_output(const Settings& s, const std::string& name) {
    const std::string path = out_path(s, name);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CliError{kExitUsage, "cannot open '" + path + "' for writing"};
    return out;
}

// Every emitted file carries the effective seed and config for provenance.
void write_provenance_comment(std::ofstream& out, const Settings& s) {
    out << "# seed=" << s.seed << "\n";
    out << "# config=" << s.config.dump() << "\n";
}

void write_json_report(const Settings& s, const std::string& name, json j) {
    j["seed"] = s.seed;
    j["config"] = s.config;
    auto out = open_output(s, name);
    out << j.dump(2) << "\n";
    std::cout << "wrote " << out_path(s, name) << "\n";
}

struct EnvBlock {
    std::string name;
    json params = json::object();
};

EnvBlock env_block(const Settings& s) {
    if (!s.config.contains("env"))
        throw CliError{kExitUsage, "config: missing 'env' block ({\"name\":..., \"params\":{...}})"};
    const json& block = s.config["env"];
    require_object_keys(block, {"name", "params"}, "config.env");
    if (!block.contains("name") || !block["name"].is_string())
        throw CliError{kExitUsage, "config.env: missing string 'name'"};
    EnvBlock env;
    env.name = block["name"].get<std::string>();
    if (block.contains("params")) env.params = block["params"];
    return env;
}

EnvHandle open_env(const EnvBlock& block, std::uint64_t seed) {
    recirc_env* raw = nullptr;
    check(recirc_env_create(block.name.c_str(), block.params.dump().c_str(), seed, &raw));
    return EnvHandle(raw);
}

std::string action_column(const std::string& env_name) {
    if (env_name == "transport-truck") return "F";
    if (env_name == "incinerator") return "Q_ext";
    return "I";  // microalgae models: light intensity
}

/* ---------------- list-envs ---------------- */

int cmd_list_envs() {
    char* raw = nullptr;
    check(recirc_env_catalog_json(&raw));
    const json catalog = json::parse(take_string(raw));
    std::ostringstream out;
    out << std::left << std::setw(22) << "NAME" << std::setw(7) << "STATE" << std::setw(8)
        << "ACTION" << std::setw(33) << "COMPARTMENT" << "ROLE" << "\n";
    for (const auto& row : catalog) {
        out << std::left << std::setw(22) << row["name"].get<std::string>() << std::setw(7)
            << row["state_dim"].get<int>() << std::setw(8) << row["action_dim"].get<int>()
            << std::setw(33) << row["compartment"].get<std::string>()
            << row["role"].get<std::string>() << "\n";
    }
    std::cout << out.str();
    return kExitOk;
}

/* ---------------- simulate ---------------- */

int cmd_simulate(const Settings& s) {
    const EnvBlock block = env_block(s);
    const json& sim = s.config.contains("simulate") ? s.config["simulate"] : json::object();
    require_object_keys(sim, {"steps", "policy", "constant_action"}, "config.simulate");
    if (sim.contains("policy") && sim.contains("constant_action"))
        throw CliError{kExitUsage, "config.simulate: give either 'policy' or 'constant_action'"};

    EnvHandle env = open_env(block, s.seed);
    size_t obs_dim = 0, act_dim = 0;
    int max_steps = 0;
    double dt = 0.0;
    check(recirc_env_obs_dim(env.get(), &obs_dim));
    check(recirc_env_action_dim(env.get(), &act_dim));
    check(recirc_env_max_episode_steps(env.get(), &max_steps));
    check(recirc_env_step_dt(env.get(), &dt));

    int steps = max_steps;
    if (sim.contains("steps")) {
        steps = sim["steps"].get<int>();
        if (steps < 1) throw CliError{kExitUsage, "config.simulate: 'steps' must be >= 1"};
    }

    PolicyHandle policy;
    std::vector<double> constant_action;
    if (sim.contains("policy")) {
        recirc_policy* raw = nullptr;
        check(recirc_policy_load_file(sim["policy"].get<std::string>().c_str(), &raw));
        policy.reset(raw);
        size_t pa = 0, po = 0;
        check(recirc_policy_dims(policy.get(), &pa, &po));
        if (pa != act_dim || po != obs_dim)
            throw CliError{kExitUsage, "policy dimensions do not match the environment"};
    } else if (sim.contains("constant_action")) {
        constant_action = sim["constant_action"].get<std::vector<double>>();
        if (constant_action.size() != act_dim)
            throw CliError{kExitUsage, "config.simulate: constant_action has wrong dimension"};
    } else {
        recirc_policy* raw = nullptr;
        check(recirc_policy_zero(act_dim, obs_dim, &raw));
        policy.reset(raw);
    }

    std::vector<double> act_low(act_dim), act_high(act_dim);
    check(recirc_env_action_space(env.get(), act_low.data(), act_high.data()));

    std::vector<double> obs(obs_dim), state(obs_dim), action(act_dim);
    const std::uint64_t seed = s.seed;
    check(recirc_env_reset(env.get(), &seed, obs.data()));

    std::string names_csv = "x";
    {
        char* raw = nullptr;
        check(recirc_env_state_names(env.get(), &raw));
        names_csv = take_string(raw);
    }
    const bool algae = block.name.rfind("co2-microalgae", 0) == 0;

    auto csv = open_output(s, "trajectory.csv");
    write_provenance_comment(csv, s);
    csv << "t," << names_csv << "," << action_column(block.name) << ",r";
    if (algae) csv << ",m_dot_23";
    csv << "\n";

    double episode_return = 0.0;
    bool terminated = false, truncated = false;
    int taken = 0;
    for (int k = 0; k < steps; ++k) {
        if (policy)
            check(recirc_policy_act(policy.get(), obs.data(), obs_dim, action.data(), act_dim));
        else
            action = constant_action;
        for (size_t a = 0; a < act_dim; ++a)
            action[a] = std::clamp(action[a], act_low[a], act_high[a]);

        check(recirc_env_state(env.get(), state.data()));
        recirc_step_info info{};
        check(recirc_env_step(env.get(), action.data(), act_dim, obs.data(), &info));
        episode_return += info.reward;
        ++taken;

        csv << g17(k * dt);
        for (size_t i = 0; i < obs_dim; ++i) csv << "," << g17(state[i]);
        for (size_t a = 0; a < act_dim; ++a) csv << "," << g17(action[a]);
        csv << "," << g17(info.reward);
        if (algae) {
            char* raw = nullptr;
            check(recirc_env_last_info_json(env.get(), &raw));
            const json extras = json::parse(take_string(raw));
            csv << "," << g17(extras.value("m_dot_23", 0.0));
        }
        csv << "\n";

        if (info.terminated || info.truncated) {
            terminated = info.terminated != 0;
            truncated = info.truncated != 0;
            break;
        }
    }
    std::cout << "wrote " << out_path(s, "trajectory.csv") << "\n";

    json summary;
    summary["env"] = block.name;
    summary["steps"] = taken;
    summary["episode_return"] = episode_return;
    summary["terminated"] = terminated;
    summary["truncated"] = truncated;
    write_json_report(s, "summary.json", summary);
    return kExitOk;
}

/* ---------------- train / evaluate ---------------- */

int cmd_train(const Settings& s) {
    const EnvBlock block = env_block(s);
    if (!s.config.contains("trainer"))
        throw CliError{kExitUsage, "config: missing 'trainer' block"};
    json trainer = s.config["trainer"];
    if (trainer.contains("seed"))
        throw CliError{kExitUsage,
                       "config.trainer: set the top-level 'seed' (or --seed) instead of a "
                       "trainer-level seed"};
    trainer["seed"] = s.seed;

    recirc_train_result* raw = nullptr;
    check(recirc_train(block.name.c_str(), block.params.dump().c_str(), trainer.dump().c_str(),
                       s.workers, &raw));
    TrainResultHandle result(raw);

    // History CSV holds only run-reproducible columns; timing lives in the
    // JSON report.
    auto csv = open_output(s, "history.csv");
    write_provenance_comment(csv, s);
    csv << "iteration,mean_return,eval_return\n";
    size_t rows = 0;
    check(recirc_train_result_history_size(result.get(), &rows));
    for (size_t i = 0; i < rows; ++i) {
        int iteration = 0, has_eval = 0;
        double mean_return = 0.0, eval_return = 0.0;
        check(recirc_train_result_history_row(result.get(), i, &iteration, &mean_return,
                                              &eval_return, &has_eval));
        csv << iteration << "," << g17(mean_return) << ",";
        if (has_eval) csv << g17(eval_return);
        csv << "\n";
    }
    std::cout << "wrote " << out_path(s, "history.csv") << "\n";

    recirc_policy* policy_raw = nullptr;
    check(recirc_train_result_policy(result.get(), &policy_raw));
    PolicyHandle policy(policy_raw);
    check(recirc_policy_save_file(policy.get(), out_path(s, "policy.txt").c_str()));
    std::cout << "wrote " << out_path(s, "policy.txt") << "\n";

    recirc_eval_report report{};
    check(recirc_train_result_report(result.get(), &report));
    int diverged = 0, diverged_iteration = -1;
    check(recirc_train_result_diverged(result.get(), &diverged, &diverged_iteration));

    json j;
    j["env"] = block.name;
    j["r_s"] = report.start_return;
    j["r_e"] = report.end_return;
    j["zeta"] = report.zeta;
    j["n_eval_episodes"] = report.n_eval_episodes;
    j["wall_time_seconds"] = report.wall_time_seconds;
    j["diverged"] = diverged != 0;
    if (diverged) j["diverged_iteration"] = diverged_iteration;
    write_json_report(s, "report.json", j);

    std::cout << "r_s=" << report.start_return << " r_e=" << report.end_return
              << " zeta=" << report.zeta << "\n";
    return diverged ? kExitNumeric : kExitOk;
}

int cmd_evaluate(const Settings& s) {
    const EnvBlock block = env_block(s);
    const json& ev = s.config.contains("evaluate") ? s.config["evaluate"] : json::object();
    require_object_keys(ev, {"policy", "episodes"}, "config.evaluate");
    if (!ev.contains("policy"))
        throw CliError{kExitUsage, "config.evaluate: missing 'policy' path"};
    const std::string policy_path = ev["policy"].get<std::string>();
    const int episodes = ev.value("episodes", 100);
    if (episodes < 1) throw CliError{kExitUsage, "config.evaluate: 'episodes' must be >= 1"};

    recirc_policy* raw = nullptr;
    check(recirc_policy_load_file(policy_path.c_str(), &raw));
    PolicyHandle policy(raw);

    double mean_return = 0.0;
    check(recirc_evaluate(block.name.c_str(), block.params.dump().c_str(), policy.get(),
                          static_cast<size_t>(episodes), s.seed, &mean_return));

    json j;
    j["env"] = block.name;
    j["policy"] = policy_path;
    j["episodes"] = episodes;
    j["mean_return"] = mean_return;
    write_json_report(s, "eval.json", j);
    std::cout << "mean_return=" << mean_return << "\n";
    return kExitOk;
}

/* ---------------- circularity ---------------- */

struct Grid {
    double t_start = 0.0;
    double t_end = 0.0;
    int samples = 1001;

    std::vector<double> times() const {
        if (samples < 2 || !(t_end > t_start))
            throw CliError{kExitUsage, "circularity: need t_end > t_start and samples >= 2"};
        std::vector<double> ts(samples);
        for (int i = 0; i < samples; ++i)
            ts[i] = t_start + (t_end - t_start) * i / (samples - 1);
        return ts;
    }
};

Grid grid_from(const json& block, double default_start, double default_end) {
    Grid g;
    g.t_start = block.value("t_start", default_start);
    g.t_end = block.value("t_end", default_end);
    g.samples = block.value("samples", 1001);
    return g;
}

void write_lambda_csv(const Settings& s, const std::vector<double>& times,
                      const std::vector<double>& lambda,
                      const std::vector<std::string>& extra_comments) {
    auto csv = open_output(s, "lambda.csv");
    write_provenance_comment(csv, s);
    for (const auto& c : extra_comments) csv << "# " << c << "\n";
    csv << "t,lambda\n";
    for (size_t i = 0; i < times.size(); ++i)
        csv << g17(times[i]) << "," << g17(lambda[i]) << "\n";
    std::cout << "wrote " << out_path(s, "lambda.csv") << "\n";
}

NetworkHandle open_network(const std::string& spec) {
    recirc_network* raw = nullptr;
    if (spec == "solid-cycle" || spec == "netzero")
        check(recirc_network_builtin(spec.c_str(), &raw));
    else
        check(recirc_network_load_file(spec.c_str(), &raw));
    return NetworkHandle(raw);
}

int cmd_circularity_ledger(const Settings& s, const json& block) {
    require_object_keys(block,
                        {"mode", "network", "events", "flows", "delta", "t_start", "t_end",
                         "samples"},
                        "config.circularity");
    if (!block.contains("network") || !block.contains("events"))
        throw CliError{kExitUsage, "config.circularity: ledger needs 'network' and 'events'"};

    NetworkHandle net = open_network(block["network"].get<std::string>());
    int ok = 0;
    char* report_raw = nullptr;
    check(recirc_network_validate(net.get(), &ok, &report_raw));
    const std::string report = take_string(report_raw);
    if (!ok) throw CliError{kExitUsage, "network is invalid:\n" + report};

    const std::string events_text = read_file(block["events"].get<std::string>());
    std::string flows_text;
    if (block.contains("flows")) flows_text = read_file(block["flows"].get<std::string>());

    const Grid grid = grid_from(block, 0.0, 0.0);
    const auto times = grid.times();
    std::vector<double> lambda(times.size());
    check(recirc_lambda_ledger(net.get(), events_text.c_str(),
                               flows_text.empty() ? nullptr : flows_text.c_str(),
                               block.value("delta", 1.0), times.data(), times.size(),
                               lambda.data()));
    write_lambda_csv(s, times, lambda, {});
    return kExitOk;
}

recirc_solid_scenario scenario_from(const json& block) {
    recirc_solid_scenario sc{};
    sc.total_mass = block.value("total_mass", 0.0);
    sc.sorting_success_pct = block.value("sorting_success_pct", 0.0);
    sc.sorting_duration = block.value("sorting_duration", 0.0);
    sc.extraction_exit_time = block.value("extraction_exit_time", 0.0);
    sc.first_use_duration = block.value("first_use_duration", 0.0);
    sc.transport_unsorted_duration = block.value("transport_unsorted_duration", 0.0);
    sc.second_life_duration = block.value("second_life_duration", 0.0);
    return sc;
}

int cmd_circularity_solid(const Settings& s, const json& block) {
    require_object_keys(block,
                        {"mode", "total_mass", "sorting_success_pct", "sorting_duration",
                         "extraction_exit_time", "first_use_duration",
                         "transport_unsorted_duration", "second_life_duration", "t_start",
                         "t_end", "samples"},
                        "config.circularity");
    const recirc_solid_scenario sc = scenario_from(block);

    double sorter_exit = 0.0, unsorted_arrival = 0.0, recycled_arrival = 0.0;
    check(recirc_solid_event_times(&sc, &sorter_exit, &unsorted_arrival, &recycled_arrival));

    const Grid grid = grid_from(block, 0.0, 1.5 * recycled_arrival);
    const auto times = grid.times();
    std::vector<double> lambda(times.size());
    check(recirc_lambda_solid(&sc, times.data(), times.size(), lambda.data()));

    write_lambda_csv(s, times, lambda,
                     {"t_sorter_exit=" + g17(sorter_exit),
                      "t_unsorted_arrival=" + g17(unsorted_arrival),
                      "t_recycled_arrival=" + g17(recycled_arrival)});
    std::cout << "t_sorter_exit=" << sorter_exit << " t_unsorted_arrival=" << unsorted_arrival
              << " t_recycled_arrival=" << recycled_arrival << "\n";
    return kExitOk;
}

// A rate series loaded from a flow file or from an exported trajectory CSV
// (t + m_dot_23 columns).
struct Series {
    std::vector<double> times;
    std::vector<double> rates;
};

Series load_series(const std::string& path) {
    const std::string text = read_file(path);
    std::istringstream in(text);
    std::string line;
    std::string first;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        first = line;
        break;
    }
    if (first.rfind("flow", 0) == 0) {
        recirc_flow_set* raw = nullptr;
        check(recirc_flows_parse(text.c_str(), &raw));
        FlowSetHandle flows(raw);
        size_t count = 0;
        check(recirc_flow_set_size(flows.get(), &count));
        if (count != 1)
            throw CliError{kExitUsage,
                           "'" + path + "': expected exactly one flow, found " +
                               std::to_string(count)};
        size_t n = 0;
        check(recirc_flow_samples_size(flows.get(), 0, &n));
        Series series;
        series.times.resize(n);
        series.rates.resize(n);
        check(recirc_flow_samples(flows.get(), 0, series.times.data(), series.rates.data()));
        return series;
    }

    // Trajectory CSV: locate the t and m_dot_23 columns.
    std::vector<std::string> header;
    {
        std::istringstream head(first);
        std::string col;
        while (std::getline(head, col, ',')) header.push_back(col);
    }
    const auto t_it = std::find(header.begin(), header.end(), "t");
    const auto m_it = std::find(header.begin(), header.end(), "m_dot_23");
    if (t_it == header.end() || m_it == header.end())
        throw CliError{kExitUsage,
                       "'" + path + "': not a flow file and no t/m_dot_23 CSV columns"};
    const size_t t_idx = t_it - header.begin();
    const size_t m_idx = m_it - header.begin();

    Series series;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream row(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(row, cell, ',')) cells.push_back(cell);
        if (cells.size() <= std::max(t_idx, m_idx))
            throw CliError{kExitUsage, "'" + path + "': short CSV row"};
        series.times.push_back(std::stod(cells[t_idx]));
        series.rates.push_back(std::stod(cells[m_idx]));
    }
    if (series.times.empty()) throw CliError{kExitUsage, "'" + path + "': no samples"};
    return series;
}

int cmd_circularity_netzero(const Settings& s, const json& block) {
    require_object_keys(block, {"mode", "emitter", "remover", "delta", "t_start", "t_end",
                                "samples"},
                        "config.circularity");
    if (!block.contains("emitter") || !block.contains("remover"))
        throw CliError{kExitUsage, "config.circularity: netzero needs 'emitter' and 'remover'"};

    const Series emitter = load_series(block["emitter"].get<std::string>());
    const Series remover = load_series(block["remover"].get<std::string>());

    const double lo = std::min(emitter.times.front(), remover.times.front());
    const double hi = std::max(emitter.times.back(), remover.times.back());
    const Grid grid = grid_from(block, lo, hi);
    const auto times = grid.times();

    std::vector<double> lambda(times.size());
    check(recirc_lambda_netzero(emitter.times.data(), emitter.rates.data(), emitter.times.size(),
                                remover.times.data(), remover.rates.data(), remover.times.size(),
                                block.value("delta", 1.0), times.data(), times.size(),
                                lambda.data()));
    write_lambda_csv(s, times, lambda, {});
    return kExitOk;
}

int cmd_circularity(const Settings& s, const std::string& mode) {
    const json& block = s.config.contains("circularity") ? s.config["circularity"] : json();
    if (block.is_null())
        throw CliError{kExitUsage, "config: missing 'circularity' block"};
    if (mode == "ledger") return cmd_circularity_ledger(s, block);
    if (mode == "solid-scenario") return cmd_circularity_solid(s, block);
    return cmd_circularity_netzero(s, block);
}

/* ---------------- verify-integrator ---------------- */

int cmd_verify(const Settings& s) {
    const EnvBlock block = env_block(s);
    const json& v = s.config.contains("verify") ? s.config["verify"] : json::object();
    require_object_keys(v, {"horizon", "rel_tol", "constant_action"}, "config.verify");

    EnvHandle env = open_env(block, s.seed);
    size_t act_dim = 0;
    int max_steps = 0;
    double dt = 0.0;
    check(recirc_env_action_dim(env.get(), &act_dim));
    check(recirc_env_max_episode_steps(env.get(), &max_steps));
    check(recirc_env_step_dt(env.get(), &dt));

    const double horizon = v.value("horizon", max_steps * dt);
    const double rel_tol = v.value("rel_tol", 1e-6);
    std::vector<double> action(act_dim, 0.0);
    if (v.contains("constant_action")) {
        action = v["constant_action"].get<std::vector<double>>();
        if (action.size() != act_dim)
            throw CliError{kExitUsage, "config.verify: constant_action has wrong dimension"};
    }

    char* raw = nullptr;
    check(recirc_verify_env(block.name.c_str(), block.params.dump().c_str(), action.data(),
                            act_dim, horizon, rel_tol, s.seed, &raw));
    json report = json::parse(take_string(raw));
    report["env"] = block.name;
    write_json_report(s, "verify.json", report);

    for (const auto& st : report["per_state"])
        std::cout << "  state " << st["name"].get<std::string>()
                  << " max_rel=" << st["max_rel"].get<double>() << "\n";
    const bool reference_failed = report["reference_failed"].get<bool>();
    const bool pass = report["pass"].get<bool>();
    if (reference_failed) {
        std::cout << "REFERENCE FAILED: " << report.value("reference_error", "") << "\n";
        return kExitNumeric;
    }
    std::cout << (pass ? "PASS" : "FAIL") << " (max_rel_deviation="
              << report["max_rel_deviation"].get<double>() << ", rel_tol=" << rel_tol << ")\n";
    return pass ? kExitOk : kExitNumeric;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"recirc: material-circularity environments, derivative-free training and "
                 "circularity reports"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    int workers = 1;
    app.add_option("--config", config_path, "JSON run configuration")->expected(1);
    app.add_option("--seed", seed, "master seed (overrides the config)");
    app.add_option("--out", out_dir, "output directory (overrides the config)");
    app.add_option("--workers", workers, "rollout worker threads (results do not depend on it)")
        ->check(CLI::PositiveNumber);

    auto* list_cmd = app.add_subcommand("list-envs", "list available environments");
    auto* sim_cmd = app.add_subcommand("simulate", "roll out one episode, write trajectory CSV");
    auto* train_cmd = app.add_subcommand("train", "train a policy, write history/policy/report");
    auto* eval_cmd = app.add_subcommand("evaluate", "evaluate a saved policy");
    auto* circ_cmd = app.add_subcommand("circularity", "compute lambda reports");
    circ_cmd->require_subcommand(1);
    circ_cmd->fallthrough();
    auto* ledger_cmd = circ_cmd->add_subcommand("ledger", "lambda from an event log and flows");
    auto* solid_cmd =
        circ_cmd->add_subcommand("solid-scenario", "closed-form lambda of the solid batch cycle");
    auto* netzero_cmd =
        circ_cmd->add_subcommand("netzero", "lambda from emitter and remover flow series");
    auto* verify_cmd =
        app.add_subcommand("verify-integrator", "compare fixed-step against adaptive reference");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (list_cmd->parsed()) return cmd_list_envs();
        const Settings settings = make_settings(config_path, seed, out_dir, workers);
        if (sim_cmd->parsed()) return cmd_simulate(settings);
        if (train_cmd->parsed()) return cmd_train(settings);
        if (eval_cmd->parsed()) return cmd_evaluate(settings);
        if (circ_cmd->parsed()) {
            if (ledger_cmd->parsed()) return cmd_circularity(settings, "ledger");
            if (solid_cmd->parsed()) return cmd_circularity(settings, "solid-scenario");
            if (netzero_cmd->parsed()) return cmd_circularity(settings, "netzero");
        }
        if (verify_cmd->parsed()) return cmd_verify(settings);
        std::cerr << "error: no command\n";
        return kExitUsage;
    } catch (const CliError& e) {
        std::cerr << "error: " << e.message << "\n";
        return e.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
