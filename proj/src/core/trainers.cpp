#include "core/trainers.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "core/rng.hpp"

namespace recirc {

namespace {

// Keys of the deterministic seed tree.
constexpr std::uint64_t kEvalKey = 1;
constexpr std::uint64_t kIterKey = 2;
constexpr std::uint64_t kDirKey = 3;
constexpr std::uint64_t kResetKey = 4;

void parallel_for(int n_tasks, int n_workers, const std::function<void(int)>& task) {
    if (n_workers <= 1 || n_tasks <= 1) {
        for (int i = 0; i < n_tasks; ++i) task(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&]() {
        while (true) {
            const int i = next.fetch_add(1);
            if (i >= n_tasks) return;
            try {
                task(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> threads;
    const int count = std::min(n_workers, n_tasks);
    threads.reserve(count);
    for (int w = 0; w < count; ++w) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

struct RolloutResult {
    double episode_return = 0.0;
    RunningStat visited;  // observations seen, for the normalizer merge
};

RolloutResult rollout(Env& env, const LinearPolicy& policy, std::uint64_t reset_seed,
                      bool collect_stats) {
    RolloutResult result;
    if (collect_stats) result.visited = RunningStat(policy.obs_dim);
    std::vector<double> obs = env.reset(reset_seed);
    if (collect_stats) result.visited.observe(obs);
    while (true) {
        const std::vector<double> action = policy.act(obs);
        const StepResult step = env.step(action);
        result.episode_return += step.reward;
        obs = step.observation;
        if (collect_stats) result.visited.observe(obs);
        if (step.terminated || step.truncated) break;
    }
    return result;
}

double population_std(const std::vector<double>& values) {
    if (values.empty()) return 0.0;
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) /
                        static_cast<double>(values.size());
    double ss = 0.0;
    for (const double v : values) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / static_cast<double>(values.size()));
}

std::vector<double> gaussian_matrix(std::uint64_t seed, std::size_t count) {
    Rng rng(seed);
    std::vector<double> m(count);
    for (auto& v : m) v = rng.normal();
    return m;
}

}  // namespace

void ArsConfig::validate() const {
    if (!(step_size > 0.0)) throw std::invalid_argument("ars: step_size must be > 0");
    if (n_directions < 1) throw std::invalid_argument("ars: n_directions must be >= 1");
    if (top_directions < 1 || top_directions > n_directions)
        throw std::invalid_argument("ars: top_directions must be in [1, n_directions]");
    if (!(noise_std > 0.0)) throw std::invalid_argument("ars: noise_std must be > 0");
    if (iterations < 0) throw std::invalid_argument("ars: iterations must be >= 0");
    if (eval_every < 1) throw std::invalid_argument("ars: eval_every must be >= 1");
}

void CemConfig::validate() const {
    if (population < 1) throw std::invalid_argument("cem: population must be >= 1");
    if (!(elite_frac > 0.0 && elite_frac <= 1.0))
        throw std::invalid_argument("cem: elite_frac must be in (0, 1]");
    if (init_std < 0.0) throw std::invalid_argument("cem: init_std must be >= 0");
    if (iterations < 0) throw std::invalid_argument("cem: iterations must be >= 0");
    if (eval_every < 1) throw std::invalid_argument("cem: eval_every must be >= 1");
}

double evaluate(const EnvFactory& factory, const LinearPolicy& policy, int n_episodes,
                std::uint64_t seed) {
    if (n_episodes < 1) throw std::invalid_argument("evaluate: n_episodes must be >= 1");
    auto env = factory();
    double total = 0.0;
    for (int ep = 0; ep < n_episodes; ++ep)
        total += rollout(*env, policy, derive_seed(seed, ep), false).episode_return;
    return total / n_episodes;
}

std::vector<double> ars_weight_update(const std::vector<double>& returns_plus,
                                      const std::vector<double>& returns_minus,
                                      const std::vector<std::vector<double>>& directions,
                                      std::size_t weight_count, double step_size,
                                      int top_directions) {
    const std::size_t n = returns_plus.size();
    if (returns_minus.size() != n || directions.size() != n)
        throw std::invalid_argument("ars_weight_update: mismatched inputs");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::max(returns_plus[a], returns_minus[a]) >
               std::max(returns_plus[b], returns_minus[b]);
    });
    const std::size_t b = std::min<std::size_t>(top_directions, n);

    std::vector<double> selected;
    selected.reserve(2 * b);
    for (std::size_t r = 0; r < b; ++r) {
        selected.push_back(returns_plus[order[r]]);
        selected.push_back(returns_minus[order[r]]);
    }
    double sigma = population_std(selected);
    if (sigma < 1e-8) sigma = 1.0;  // flat-reward regime: keep the zero-update property

    std::vector<double> update(weight_count, 0.0);
    const double scale = step_size / (static_cast<double>(b) * sigma);
    for (std::size_t r = 0; r < b; ++r) {
        const std::size_t d = order[r];
        const double gain = returns_plus[d] - returns_minus[d];
        for (std::size_t w = 0; w < weight_count; ++w) update[w] += scale * gain * directions[d][w];
    }
    return update;
}

TrainRun ars_train(const EnvFactory& factory, const ArsConfig& cfg, int n_eval_episodes,
                   int n_workers) {
    cfg.validate();
    if (n_eval_episodes < 1) throw std::invalid_argument("ars: n_eval_episodes must be >= 1");
    const auto start_time = std::chrono::steady_clock::now();

    const auto probe = factory();
    const std::size_t obs_dim = probe->observation_space().dim();
    const std::size_t act_dim = probe->action_space().dim();
    const std::size_t weight_count = obs_dim * act_dim;

    TrainRun run;
    run.seed = cfg.seed;
    run.policy = LinearPolicy::zeros(act_dim, obs_dim);

    const std::uint64_t eval_seed = derive_seed(cfg.seed, kEvalKey);
    run.report.n_eval_episodes = n_eval_episodes;
    run.report.start_return = evaluate(factory, run.policy, n_eval_episodes, eval_seed);

    const int n_tasks = 2 * cfg.n_directions;
    for (int it = 0; it < cfg.iterations; ++it) {
        const std::uint64_t iter_seed = derive_seed(derive_seed(cfg.seed, kIterKey), it);

        std::vector<std::vector<double>> directions(cfg.n_directions);
        std::vector<std::uint64_t> reset_seeds(cfg.n_directions);
        for (int d = 0; d < cfg.n_directions; ++d) {
            directions[d] =
                gaussian_matrix(derive_seed(derive_seed(iter_seed, kDirKey), d), weight_count);
            reset_seeds[d] = derive_seed(derive_seed(iter_seed, kResetKey), d);
        }

        const RunningStat frozen = run.policy.stats;
        std::vector<RolloutResult> results(n_tasks);
        parallel_for(n_tasks, n_workers, [&](int task) {
            const int d = task / 2;
            const double sign = (task % 2 == 0) ? 1.0 : -1.0;
            LinearPolicy candidate = run.policy;
            candidate.stats = frozen;
            for (std::size_t w = 0; w < weight_count; ++w)
                candidate.weights[w] += sign * cfg.noise_std * directions[d][w];
            auto env = factory();
            results[task] = rollout(*env, candidate, reset_seeds[d], true);
        });

        // Merge visited-observation statistics in task order.
        for (const auto& r : results) run.policy.stats.merge(r.visited);

        std::vector<double> returns_plus(cfg.n_directions), returns_minus(cfg.n_directions);
        double sum = 0.0;
        bool finite = true;
        for (int d = 0; d < cfg.n_directions; ++d) {
            returns_plus[d] = results[2 * d].episode_return;
            returns_minus[d] = results[2 * d + 1].episode_return;
            sum += returns_plus[d] + returns_minus[d];
            finite = finite && std::isfinite(returns_plus[d]) && std::isfinite(returns_minus[d]);
        }

        HistoryRow row;
        row.iteration = it;
        row.mean_return = sum / n_tasks;

        if (!finite) {
            run.history.push_back(row);
            run.diverged = true;
            run.diverged_iteration = it;
            break;
        }

        const auto update = ars_weight_update(returns_plus, returns_minus, directions,
                                              weight_count, cfg.step_size, cfg.top_directions);
        for (std::size_t w = 0; w < weight_count; ++w) run.policy.weights[w] += update[w];

        if (!run.policy.finite()) {
            run.history.push_back(row);
            run.diverged = true;
            run.diverged_iteration = it;
            break;
        }

        if ((it + 1) % cfg.eval_every == 0)
            row.eval_return = evaluate(factory, run.policy, n_eval_episodes, eval_seed);
        run.history.push_back(row);
    }

    run.report.end_return = evaluate(factory, run.policy, n_eval_episodes, eval_seed);
    run.report.zeta = zeta(run.report.start_return, run.report.end_return);
    run.report.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time).count();
    return run;
}

TrainRun cem_train(const EnvFactory& factory, const CemConfig& cfg, int n_eval_episodes,
                   int n_workers) {
    cfg.validate();
    if (n_eval_episodes < 1) throw std::invalid_argument("cem: n_eval_episodes must be >= 1");
    const auto start_time = std::chrono::steady_clock::now();

    const auto probe = factory();
    const std::size_t obs_dim = probe->observation_space().dim();
    const std::size_t act_dim = probe->action_space().dim();
    const std::size_t weight_count = obs_dim * act_dim;

    TrainRun run;
    run.seed = cfg.seed;
    run.policy = LinearPolicy::zeros(act_dim, obs_dim);

    const std::uint64_t eval_seed = derive_seed(cfg.seed, kEvalKey);
    run.report.n_eval_episodes = n_eval_episodes;
    run.report.start_return = evaluate(factory, run.policy, n_eval_episodes, eval_seed);

    std::vector<double> center(weight_count, 0.0);
    std::vector<double> spread(weight_count, cfg.init_std);
    RunningStat stats(obs_dim);

    double best_return = run.report.start_return;
    LinearPolicy best = run.policy;

    const int elites = std::max(1, static_cast<int>(std::floor(
                                       cfg.population * cfg.elite_frac + 1e-9)));

    for (int it = 0; it < cfg.iterations; ++it) {
        const std::uint64_t iter_seed = derive_seed(derive_seed(cfg.seed, kIterKey), it);
        const RunningStat frozen = stats;

        std::vector<std::vector<double>> candidates(cfg.population);
        std::vector<std::uint64_t> reset_seeds(cfg.population);
        for (int c = 0; c < cfg.population; ++c) {
            candidates[c] =
                gaussian_matrix(derive_seed(derive_seed(iter_seed, kDirKey), c), weight_count);
            for (std::size_t w = 0; w < weight_count; ++w)
                candidates[c][w] = center[w] + spread[w] * candidates[c][w];
            reset_seeds[c] = derive_seed(derive_seed(iter_seed, kResetKey), c);
        }

        std::vector<RolloutResult> results(cfg.population);
        parallel_for(cfg.population, n_workers, [&](int c) {
            LinearPolicy candidate;
            candidate.act_dim = act_dim;
            candidate.obs_dim = obs_dim;
            candidate.weights = candidates[c];
            candidate.stats = frozen;
            auto env = factory();
            results[c] = rollout(*env, candidate, reset_seeds[c], true);
        });
        for (const auto& r : results) stats.merge(r.visited);

        double sum = 0.0;
        bool finite = true;
        for (const auto& r : results) {
            sum += r.episode_return;
            finite = finite && std::isfinite(r.episode_return);
        }
        HistoryRow row;
        row.iteration = it;
        row.mean_return = sum / cfg.population;

        if (!finite) {
            run.history.push_back(row);
            run.diverged = true;
            run.diverged_iteration = it;
            break;
        }

        std::vector<std::size_t> order(cfg.population);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return results[a].episode_return > results[b].episode_return;
        });

        if (results[order[0]].episode_return > best_return) {
            best_return = results[order[0]].episode_return;
            best.weights = candidates[order[0]];
            best.stats = frozen;
        }

        for (std::size_t w = 0; w < weight_count; ++w) {
            double mean = 0.0;
            for (int e = 0; e < elites; ++e) mean += candidates[order[e]][w];
            mean /= elites;
            double var = 0.0;
            for (int e = 0; e < elites; ++e) {
                const double d = candidates[order[e]][w] - mean;
                var += d * d;
            }
            center[w] = mean;
            spread[w] = std::sqrt(var / elites);
        }

        if ((it + 1) % cfg.eval_every == 0) {
            LinearPolicy mean_policy;
            mean_policy.act_dim = act_dim;
            mean_policy.obs_dim = obs_dim;
            mean_policy.weights = center;
            mean_policy.stats = stats;
            row.eval_return = evaluate(factory, mean_policy, n_eval_episodes, eval_seed);
        }
        run.history.push_back(row);
    }

    run.policy = best;
    run.report.end_return = evaluate(factory, run.policy, n_eval_episodes, eval_seed);
    run.report.zeta = zeta(run.report.start_return, run.report.end_return);
    run.report.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time).count();
    return run;
}

}  // namespace recirc
