#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "core/envs/truck.hpp"
#include "core/rng.hpp"
#include "core/trainers.hpp"

using namespace recirc;

namespace {

TruckParams small_truck(double x0 = 0.0) {
    TruckParams p;
    p.x0_min = p.x0_max = x0;
    p.horizon = 50;
    return p;
}

EnvFactory truck_factory(const TruckParams& p) {
    return [p]() { return std::make_unique<TruckEnv>(p); };
}

}  // namespace

TEST_CASE("zeta reproduces the reported improvement rows") {
    const double z1 = zeta(-50.25, -12.67);
    CHECK(z1 == doctest::Approx(37.58).epsilon(1e-12));
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", z1);
    CHECK(std::string(buf) == "37.58");

    const double z2 = zeta(-63.4, -16.6);
    CHECK(z2 == doctest::Approx(46.8).epsilon(1e-12));
    std::snprintf(buf, sizeof buf, "%.2f", z2);
    CHECK(std::string(buf) == "46.80");

    CHECK(zeta(123.456, 123.456) == 0.0);
}

TEST_CASE("evaluating the zero policy on a pinned start matches the closed form") {
    TruckParams p = small_truck(25.0);
    p.horizon = 400;
    const auto factory = truck_factory(p);
    const double mean = evaluate(factory, LinearPolicy::zeros(1, 2), 5, 99);
    // zero force, zero initial speed: the state never moves
    const double gap = p.incinerator_position - 25.0;
    CHECK(mean == doctest::Approx(-400.0 * gap * gap).epsilon(1e-12));
}

TEST_CASE("evaluate is deterministic and leaves the policy untouched") {
    TruckParams p;  // random starts in [-10, 10]
    const auto factory = truck_factory(p);
    auto policy = LinearPolicy::zeros(1, 2);
    policy.weights = {100.0, -500.0};
    policy.stats.observe(std::vector<double>{1.0, 0.5});
    const LinearPolicy before = policy;

    const double a = evaluate(factory, policy, 10, 42);
    const double b = evaluate(factory, policy, 10, 42);
    CHECK(a == b);
    CHECK(policy == before);
    const double other = evaluate(factory, policy, 10, 43);
    CHECK(a != other);

    const double one = evaluate(factory, policy, 1, 42);
    CHECK(std::isfinite(one));
}

TEST_CASE("ars update: all-equal returns produce exactly zero movement") {
    const std::vector<double> rp{5.0, 5.0, 5.0};
    const std::vector<double> rm{5.0, 5.0, 5.0};
    const std::vector<std::vector<double>> dirs{{1.0, -2.0}, {0.5, 0.25}, {-3.0, 7.0}};
    const auto update = ars_weight_update(rp, rm, dirs, 2, 0.1, 2);
    CHECK(update[0] == 0.0);
    CHECK(update[1] == 0.0);
}

TEST_CASE("ars update: single direction moves along it with the scaled gain") {
    const std::vector<double> rp{3.0};
    const std::vector<double> rm{1.0};
    const std::vector<std::vector<double>> dirs{{2.0, -1.0}};
    const double alpha = 0.5;
    // population std of {3, 1} is 1, so the step is alpha * (3 - 1) * delta
    const auto update = ars_weight_update(rp, rm, dirs, 2, alpha, 1);
    CHECK(update[0] == doctest::Approx(alpha * 2.0 * 2.0));
    CHECK(update[1] == doctest::Approx(alpha * 2.0 * -1.0));
}

TEST_CASE("ars update is invariant to a constant shift of all returns") {
    Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 6;
        std::vector<double> rp(n), rm(n), rp_shift(n), rm_shift(n);
        std::vector<std::vector<double>> dirs(n, std::vector<double>(4));
        const double shift = rng.uniform(-1e6, 1e6);
        for (int d = 0; d < n; ++d) {
            rp[d] = rng.uniform(-100.0, 100.0);
            rm[d] = rng.uniform(-100.0, 100.0);
            rp_shift[d] = rp[d] + shift;
            rm_shift[d] = rm[d] + shift;
            for (auto& v : dirs[d]) v = rng.normal();
        }
        const auto u1 = ars_weight_update(rp, rm, dirs, 4, 0.05, 3);
        const auto u2 = ars_weight_update(rp_shift, rm_shift, dirs, 4, 0.05, 3);
        for (int w = 0; w < 4; ++w)
            CHECK(u1[w] == doctest::Approx(u2[w]).epsilon(1e-9));
    }
}

TEST_CASE("ars update: flat selected spread falls back to unit scale") {
    // returns differ within a pair but the selected set has zero spread
    const std::vector<double> rp{2.0};
    const std::vector<double> rm{2.0};
    const std::vector<std::vector<double>> dirs{{1.0}};
    const auto update = ars_weight_update(rp, rm, dirs, 1, 1.0, 1);
    CHECK(update[0] == 0.0);  // gain (r+ - r-) is zero anyway
}

TEST_CASE("ars training is bitwise reproducible for any worker count") {
    ArsConfig cfg;
    cfg.iterations = 4;
    cfg.n_directions = 4;
    cfg.top_directions = 2;
    cfg.step_size = 10.0;
    cfg.noise_std = 50.0;
    cfg.eval_every = 2;
    cfg.seed = 2718;
    const auto factory = truck_factory(small_truck());

    const TrainRun a = ars_train(factory, cfg, 3, 1);
    const TrainRun b = ars_train(factory, cfg, 3, 1);
    const TrainRun c = ars_train(factory, cfg, 3, 4);

    REQUIRE(a.history.size() == b.history.size());
    REQUIRE(a.history.size() == c.history.size());
    for (std::size_t i = 0; i < a.history.size(); ++i) {
        CHECK(a.history[i].mean_return == b.history[i].mean_return);
        CHECK(a.history[i].mean_return == c.history[i].mean_return);
        CHECK(a.history[i].eval_return == c.history[i].eval_return);
    }
    CHECK(a.policy == b.policy);
    CHECK(a.policy == c.policy);
    CHECK(a.report.start_return == c.report.start_return);
    CHECK(a.report.end_return == c.report.end_return);
}

TEST_CASE("ars evaluation cadence and report arithmetic") {
    ArsConfig cfg;
    cfg.iterations = 6;
    cfg.n_directions = 2;
    cfg.top_directions = 1;
    cfg.eval_every = 3;
    cfg.seed = 5;
    const TrainRun run = ars_train(truck_factory(small_truck()), cfg, 2, 1);
    REQUIRE(run.history.size() == 6);
    CHECK_FALSE(run.history[0].eval_return.has_value());
    CHECK(run.history[2].eval_return.has_value());
    CHECK(run.history[5].eval_return.has_value());
    CHECK(run.report.zeta == run.report.end_return - run.report.start_return);
    CHECK(run.report.n_eval_episodes == 2);
    CHECK(run.seed == 5);
}

TEST_CASE("ars flags divergence and preserves the partial history") {
    ArsConfig cfg;
    cfg.iterations = 10;
    cfg.n_directions = 2;
    cfg.top_directions = 2;
    cfg.step_size = 1e308;  // guaranteed overflow in the weight update
    cfg.noise_std = 1.0;
    cfg.seed = 1;
    const TrainRun run = ars_train(truck_factory(small_truck(5.0)), cfg, 2, 1);
    CHECK(run.diverged);
    CHECK(run.diverged_iteration == 0);
    CHECK(run.history.size() == 1);
}

TEST_CASE("zero iterations leave the policy at the start") {
    ArsConfig cfg;
    cfg.iterations = 0;
    cfg.seed = 9;
    const TrainRun run = ars_train(truck_factory(small_truck()), cfg, 2, 1);
    CHECK(run.history.empty());
    CHECK(run.report.start_return == run.report.end_return);
    CHECK(run.report.zeta == 0.0);
}

TEST_CASE("cem with zero spread keeps a flat history") {
    CemConfig cfg;
    cfg.population = 6;
    cfg.elite_frac = 0.5;
    cfg.init_std = 0.0;
    cfg.iterations = 4;
    cfg.seed = 3;
    const TrainRun run = cem_train(truck_factory(small_truck(5.0)), cfg, 2, 1);
    REQUIRE(run.history.size() == 4);
    for (const auto& row : run.history)
        CHECK(row.mean_return == run.history[0].mean_return);
    CHECK(run.report.zeta == 0.0);
}

TEST_CASE("cem is reproducible across worker counts") {
    CemConfig cfg;
    cfg.population = 8;
    cfg.elite_frac = 0.25;
    cfg.init_std = 200.0;
    cfg.iterations = 3;
    cfg.seed = 11;
    const auto factory = truck_factory(small_truck());
    const TrainRun a = cem_train(factory, cfg, 2, 1);
    const TrainRun b = cem_train(factory, cfg, 2, 4);
    REQUIRE(a.history.size() == b.history.size());
    for (std::size_t i = 0; i < a.history.size(); ++i)
        CHECK(a.history[i].mean_return == b.history[i].mean_return);
    CHECK(a.policy == b.policy);
}

TEST_CASE("config validation rejects bad hyperparameters") {
    ArsConfig ars;
    ars.top_directions = ars.n_directions + 1;
    CHECK_THROWS_AS(ars.validate(), std::invalid_argument);
    ars = ArsConfig{};
    ars.step_size = 0.0;
    CHECK_THROWS_AS(ars.validate(), std::invalid_argument);

    CemConfig cem;
    cem.elite_frac = 0.0;
    CHECK_THROWS_AS(cem.validate(), std::invalid_argument);
    cem = CemConfig{};
    cem.elite_frac = 1.5;
    CHECK_THROWS_AS(cem.validate(), std::invalid_argument);
}
