#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "core/env.hpp"
#include "core/policy.hpp"

namespace recirc {

// Thread-safe builder of fresh environment instances; each rollout owns one.
using EnvFactory = std::function<std::unique_ptr<Env>()>;

// Training-improvement metric: end-minus-start mean return.
inline double zeta(double start_return, double end_return) { return end_return - start_return; }

struct EvalReport {
    double start_return = 0.0;  // mean return before training
    double end_return = 0.0;    // mean return of the returned policy
    double zeta = 0.0;          // end_return - start_return
    int n_eval_episodes = 0;
    double wall_time_seconds = 0.0;
};

struct HistoryRow {
    int iteration = 0;
    double mean_return = 0.0;  // mean over all training rollouts this iteration
    std::optional<double> eval_return;
};

struct TrainRun {
    std::vector<HistoryRow> history;
    LinearPolicy policy;
    EvalReport report;
    std::uint64_t seed = 0;
    bool diverged = false;
    int diverged_iteration = -1;
};

// Augmented random search over a linear policy: antithetic gaussian
// directions, online observation whitening, top-b selection, and updates
// scaled by the standard deviation of the selected returns. Rollout
// statistics are frozen at each iteration start and merged back in a fixed
// order, so histories are bitwise identical for any worker count.
struct ArsConfig {
    double step_size = 0.02;   // update scale
    int n_directions = 8;      // sampled directions per iteration
    int top_directions = 4;    // directions kept for the update
    double noise_std = 0.03;   // perturbation magnitude
    int iterations = 100;
    int eval_every = 10;       // frozen-normalizer evaluation cadence
    std::uint64_t seed = 0;

    void validate() const;
};

// Cross-entropy baseline: diagonal-gaussian search over flattened weights,
// refit to the elite fraction each iteration, best-seen policy returned.
struct CemConfig {
    int population = 32;
    double elite_frac = 0.25;
    double init_std = 1.0;
    int iterations = 100;
    int eval_every = 10;
    std::uint64_t seed = 0;

    void validate() const;
};

// Mean return over n_episodes deterministic episodes. The normalizer is
// frozen; neither the policy nor its statistics are mutated. Episode seeds
// derive from seed, so repeated calls reproduce exactly.
double evaluate(const EnvFactory& factory, const LinearPolicy& policy, int n_episodes,
                std::uint64_t seed);

TrainRun ars_train(const EnvFactory& factory, const ArsConfig& cfg, int n_eval_episodes = 100,
                   int n_workers = 1);
TrainRun cem_train(const EnvFactory& factory, const CemConfig& cfg, int n_eval_episodes = 100,
                   int n_workers = 1);

// Exposed for property tests: the ARS weight increment given the selected
// returns and directions. Depends on return differences and the spread of
// the selected returns only.
std::vector<double> ars_weight_update(const std::vector<double>& returns_plus,
                                      const std::vector<double>& returns_minus,
                                      const std::vector<std::vector<double>>& directions,
                                      std::size_t weight_count, double step_size,
                                      int top_directions);

}  // namespace recirc
