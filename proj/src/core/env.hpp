#pragma once

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "core/ode.hpp"
#include "core/rng.hpp"
#include "core/space.hpp"

namespace recirc {

struct StepInfo {
    std::vector<double> state;  // raw state vector before observation clipping
    bool action_clipped = false;
    std::map<std::string, double> extras;
};

struct StepResult {
    std::vector<double> observation;
    double reward = 0.0;
    bool terminated = false;  // environment-level end (guard tripped)
    bool truncated = false;   // horizon reached
    StepInfo info;
};

// Episodic continuous-control environment over a fixed-step ODE core.
// Evolution is deterministic given (seed, action sequence). Instances are
// single-threaded while an episode is in flight but may move between threads
// between episodes.
class Env {
public:
    virtual ~Env() = default;

    // Starts a new episode. Without a seed the environment continues its own
    // deterministic reset stream, so repeated unseeded resets still replay
    // identically run-to-run.
    std::vector<double> reset(std::optional<std::uint64_t> seed = std::nullopt);

    // Applies one control step. The action is clipped into action_space()
    // first (recorded in info). Reward is computed from the pre-step state
    // and the applied action. Throws std::logic_error if the previous episode
    // already ended.
    StepResult step(std::span<const double> action);

    virtual const BoxSpace& observation_space() const = 0;
    virtual const BoxSpace& action_space() const = 0;
    virtual int max_episode_steps() const = 0;
    virtual double step_dt() const = 0;  // control period, in this env's time unit
    virtual std::vector<std::string> state_names() const = 0;

    // The ODE core this environment integrates per control step, for
    // step-size verification against the adaptive reference.
    virtual OdeSpec verification_spec() const = 0;

    const std::vector<double>& state() const { return state_; }
    int steps_taken() const { return steps_; }
    double time() const { return steps_ * step_dt(); }

protected:
    explicit Env(std::uint64_t base_seed = 0) : base_seed_(base_seed) {}

    virtual std::vector<double> initial_state(Rng& rng) const = 0;
    virtual double reward(std::span<const double> state, std::span<const double> action) const = 0;
    // Advances the raw state by one control step; may flag termination or
    // write extra info counters.
    virtual std::vector<double> advance(const std::vector<double>& state,
                                        std::span<const double> action, double t,
                                        bool& terminated, StepInfo& info) = 0;

private:
    std::vector<double> observe() const;

    std::vector<double> state_;
    std::uint64_t base_seed_ = 0;
    std::uint64_t episode_counter_ = 0;
    int steps_ = 0;
    bool has_reset_ = false;
    bool done_ = false;
};

}  // namespace recirc
