#include "core/env.hpp"

#include <stdexcept>

namespace recirc {

std::vector<double> Env::reset(std::optional<std::uint64_t> seed) {
    const std::uint64_t episode_seed =
        seed ? *seed : derive_seed(base_seed_, 0x5EEDu + episode_counter_);
    ++episode_counter_;
    Rng rng(episode_seed);
    state_ = initial_state(rng);
    steps_ = 0;
    has_reset_ = true;
    done_ = false;
    return observe();
}

StepResult Env::step(std::span<const double> action) {
    if (!has_reset_) throw std::logic_error("step() called before reset()");
    if (done_) throw std::logic_error("step() called on a finished episode; call reset()");
    if (action.size() != action_space().dim())
        throw std::invalid_argument("action dimension mismatch");

    std::vector<double> applied(action.begin(), action.end());
    const bool clipped = action_space().clip(applied);

    StepResult result;
    result.reward = reward(state_, applied);
    result.info.action_clipped = clipped;

    bool terminated = false;
    state_ = advance(state_, applied, time(), terminated, result.info);
    ++steps_;

    result.terminated = terminated;
    result.truncated = !terminated && steps_ >= max_episode_steps();
    done_ = result.terminated || result.truncated;
    result.info.state = state_;
    result.observation = observe();
    return result;
}

std::vector<double> Env::observe() const {
    std::vector<double> obs = state_;
    observation_space().clip(obs);
    return obs;
}

}  // namespace recirc
