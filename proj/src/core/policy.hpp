#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace recirc {

// Streaming per-dimension mean/variance (Welford). Partial accumulators can
// be merged, which is how parallel rollouts feed one shared normalizer
// without making the result depend on worker count.
class RunningStat {
public:
    RunningStat() = default;
    explicit RunningStat(std::size_t dim) : mean_(dim, 0.0), m2_(dim, 0.0) {}

    void observe(std::span<const double> x);
    void merge(const RunningStat& other);  // Chan's pairwise combination

    std::size_t dim() const { return mean_.size(); }
    std::uint64_t count() const { return count_; }
    double mean(std::size_t i) const { return mean_[i]; }
    // Population variance m2/count; zero until two samples arrive.
    double variance(std::size_t i) const { return count_ > 0 ? m2_[i] / count_ : 0.0; }

    const std::vector<double>& mean_vector() const { return mean_; }
    const std::vector<double>& m2_vector() const { return m2_; }
    void restore(std::uint64_t count, std::vector<double> mean, std::vector<double> m2);

    bool operator==(const RunningStat&) const = default;

private:
    std::uint64_t count_ = 0;
    std::vector<double> mean_;
    std::vector<double> m2_;
};

// Deterministic linear controller: action = W * normalize(obs), where
// normalize whitens per dimension with the running statistics (identity until
// any observation has been recorded). Clipping to the action box is the
// environment's job.
struct LinearPolicy {
    std::size_t act_dim = 0;
    std::size_t obs_dim = 0;
    std::vector<double> weights;  // act_dim x obs_dim, row-major
    RunningStat stats;

    static LinearPolicy zeros(std::size_t act_dim, std::size_t obs_dim);

    double weight(std::size_t a, std::size_t o) const { return weights[a * obs_dim + o]; }
    void normalize(std::span<const double> obs, std::span<double> out) const;
    void act(std::span<const double> obs, std::span<double> action) const;
    std::vector<double> act(std::span<const double> obs) const;
    bool finite() const;

    bool operator==(const LinearPolicy&) const = default;
};

// Portable text record; round-trips weights and normalizer statistics
// exactly (17 significant digits). Loading rejects malformed records and
// non-finite values.
std::string save_policy(const LinearPolicy& policy);
LinearPolicy load_policy(const std::string& text);
void save_policy_file(const LinearPolicy& policy, const std::string& path);
LinearPolicy load_policy_file(const std::string& path);

}  // namespace recirc
