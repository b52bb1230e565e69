#include <doctest.h>

#include <cmath>
#include <vector>

#include "core/policy.hpp"
#include "core/rng.hpp"

using namespace recirc;

namespace {

// Two-pass reference for the streaming moments.
void two_pass(const std::vector<std::vector<double>>& data, std::vector<double>& mean,
              std::vector<double>& var) {
    const std::size_t dim = data.front().size();
    mean.assign(dim, 0.0);
    var.assign(dim, 0.0);
    for (const auto& x : data)
        for (std::size_t i = 0; i < dim; ++i) mean[i] += x[i];
    for (auto& m : mean) m /= static_cast<double>(data.size());
    for (const auto& x : data)
        for (std::size_t i = 0; i < dim; ++i) var[i] += (x[i] - mean[i]) * (x[i] - mean[i]);
    for (auto& v : var) v /= static_cast<double>(data.size());
}

std::vector<std::vector<double>> random_data(Rng& rng, std::size_t n, std::size_t dim,
                                             double scale) {
    std::vector<std::vector<double>> data(n, std::vector<double>(dim));
    for (auto& row : data)
        for (auto& v : row) v = scale * rng.normal() + rng.uniform(-1.0, 1.0);
    return data;
}

}  // namespace

TEST_CASE("streaming moments match a two-pass computation") {
    Rng rng(101);
    for (const double scale : {1.0, 1e3, 1e-3}) {
        const auto data = random_data(rng, 500, 3, scale);
        RunningStat stat(3);
        for (const auto& x : data) stat.observe(x);
        std::vector<double> mean, var;
        two_pass(data, mean, var);
        REQUIRE(stat.count() == 500);
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(stat.mean(i) == doctest::Approx(mean[i]).epsilon(1e-12));
            CHECK(stat.variance(i) == doctest::Approx(var[i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("merging partial statistics equals observing sequentially") {
    Rng rng(103);
    const auto data = random_data(rng, 300, 2, 10.0);
    RunningStat sequential(2);
    for (const auto& x : data) sequential.observe(x);

    for (const std::size_t cut : {0u, 1u, 150u, 299u, 300u}) {
        RunningStat a(2), b(2);
        for (std::size_t i = 0; i < data.size(); ++i) (i < cut ? a : b).observe(data[i]);
        RunningStat merged = a;
        merged.merge(b);
        REQUIRE(merged.count() == sequential.count());
        for (std::size_t i = 0; i < 2; ++i) {
            CHECK(merged.mean(i) == doctest::Approx(sequential.mean(i)).epsilon(1e-12));
            CHECK(merged.variance(i) == doctest::Approx(sequential.variance(i)).epsilon(1e-12));
        }
    }
}

TEST_CASE("policy with no recorded observations uses raw inputs") {
    auto policy = LinearPolicy::zeros(1, 2);
    policy.weights = {2.0, -1.0};
    const auto action = policy.act(std::vector<double>{3.0, 4.0});
    CHECK(action[0] == doctest::Approx(2.0 * 3.0 - 4.0));
}

TEST_CASE("policy whitens observations with its running statistics") {
    auto policy = LinearPolicy::zeros(1, 2);
    policy.weights = {1.0, 1.0};
    policy.stats.observe(std::vector<double>{0.0, 10.0});
    policy.stats.observe(std::vector<double>{2.0, 30.0});
    // means (1, 20), population sd (1, 10)
    const auto action = policy.act(std::vector<double>{2.0, 10.0});
    CHECK(action[0] == doctest::Approx((2.0 - 1.0) / 1.0 + (10.0 - 20.0) / 10.0));
}

TEST_CASE("policy records round-trip exactly") {
    Rng rng(107);
    auto policy = LinearPolicy::zeros(2, 3);
    for (auto& w : policy.weights) w = rng.normal() * 1e4;
    for (int i = 0; i < 57; ++i)
        policy.stats.observe(std::vector<double>{rng.normal(), rng.normal() * 3.0,
                                                 rng.uniform(-7.0, 7.0)});

    const std::string text = save_policy(policy);
    const LinearPolicy loaded = load_policy(text);
    CHECK(loaded == policy);
    CHECK(save_policy(loaded) == text);  // byte-identical second save
}

TEST_CASE("malformed policy records are rejected") {
    auto policy = LinearPolicy::zeros(1, 2);
    const std::string good = save_policy(policy);

    CHECK_THROWS_AS(load_policy("not-a-policy 1\n"), std::runtime_error);
    CHECK_THROWS_AS(load_policy(good + "trailing"), std::runtime_error);

    std::string nan_text = good;
    const auto pos = nan_text.find("weights 0");
    REQUIRE(pos != std::string::npos);
    nan_text.replace(pos, 9, "weights nan");
    CHECK_THROWS_AS(load_policy(nan_text), std::runtime_error);

    CHECK_THROWS_AS(load_policy("recirc-policy 1\ndims 1 2\nweights 0 0\ncount 0\nmean 0 0\n"),
                    std::runtime_error);  // truncated record
}
