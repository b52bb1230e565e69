#include "core/policy.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace recirc {

void RunningStat::observe(std::span<const double> x) {
    if (x.size() != dim()) throw std::invalid_argument("RunningStat: dimension mismatch");
    ++count_;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double delta = x[i] - mean_[i];
        mean_[i] += delta / static_cast<double>(count_);
        m2_[i] += delta * (x[i] - mean_[i]);
    }
}

void RunningStat::merge(const RunningStat& other) {
    if (other.count_ == 0) return;
    if (count_ == 0) {
        *this = other;
        return;
    }
    if (other.dim() != dim()) throw std::invalid_argument("RunningStat: dimension mismatch");
    const double na = static_cast<double>(count_);
    const double nb = static_cast<double>(other.count_);
    const double n = na + nb;
    for (std::size_t i = 0; i < dim(); ++i) {
        const double delta = other.mean_[i] - mean_[i];
        mean_[i] += delta * (nb / n);
        m2_[i] += other.m2_[i] + delta * delta * (na * nb / n);
    }
    count_ += other.count_;
}

void RunningStat::restore(std::uint64_t count, std::vector<double> mean, std::vector<double> m2) {
    if (mean.size() != m2.size()) throw std::invalid_argument("RunningStat: vector size mismatch");
    count_ = count;
    mean_ = std::move(mean);
    m2_ = std::move(m2);
}

LinearPolicy LinearPolicy::zeros(std::size_t act_dim, std::size_t obs_dim) {
    LinearPolicy p;
    p.act_dim = act_dim;
    p.obs_dim = obs_dim;
    p.weights.assign(act_dim * obs_dim, 0.0);
    p.stats = RunningStat(obs_dim);
    return p;
}

void LinearPolicy::normalize(std::span<const double> obs, std::span<double> out) const {
    if (obs.size() != obs_dim || out.size() != obs_dim)
        throw std::invalid_argument("LinearPolicy: observation dimension mismatch");
    if (stats.count() == 0) {
        for (std::size_t i = 0; i < obs_dim; ++i) out[i] = obs[i];
        return;
    }
    for (std::size_t i = 0; i < obs_dim; ++i) {
        const double sd = std::max(std::sqrt(stats.variance(i)), 1e-8);
        out[i] = (obs[i] - stats.mean(i)) / sd;
    }
}

void LinearPolicy::act(std::span<const double> obs, std::span<double> action) const {
    if (action.size() != act_dim) throw std::invalid_argument("LinearPolicy: action size mismatch");
    std::vector<double> z(obs_dim);
    normalize(obs, z);
    for (std::size_t a = 0; a < act_dim; ++a) {
        double sum = 0.0;
        for (std::size_t o = 0; o < obs_dim; ++o) sum += weight(a, o) * z[o];
        action[a] = sum;
    }
}

std::vector<double> LinearPolicy::act(std::span<const double> obs) const {
    std::vector<double> action(act_dim);
    act(obs, action);
    return action;
}

bool LinearPolicy::finite() const {
    for (const double w : weights)
        if (!std::isfinite(w)) return false;
    return true;
}

namespace {

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_vector(std::ostringstream& out, const char* tag, const std::vector<double>& v) {
    out << tag;
    for (const double x : v) out << " " << g17(x);
    out << "\n";
}

std::vector<double> read_vector(std::istringstream& in, const char* tag, std::size_t n) {
    std::string head;
    if (!(in >> head) || head != tag)
        throw std::runtime_error(std::string("policy record: expected '") + tag + "'");
    std::vector<double> v(n);
    for (auto& x : v) {
        if (!(in >> x)) throw std::runtime_error("policy record: truncated values");
        if (!std::isfinite(x))
            throw std::runtime_error("policy record: non-finite value rejected");
    }
    return v;
}

}  // namespace

std::string save_policy(const LinearPolicy& policy) {
    std::ostringstream out;
    out << "recirc-policy 1\n";
    out << "dims " << policy.act_dim << " " << policy.obs_dim << "\n";
    write_vector(out, "weights", policy.weights);
    out << "count " << policy.stats.count() << "\n";
    write_vector(out, "mean", policy.stats.mean_vector());
    write_vector(out, "m2", policy.stats.m2_vector());
    return out.str();
}

LinearPolicy load_policy(const std::string& text) {
    std::istringstream in(text);
    std::string magic;
    int version = 0;
    if (!(in >> magic >> version) || magic != "recirc-policy" || version != 1)
        throw std::runtime_error("policy record: bad header");
    std::string tag;
    std::size_t act_dim = 0, obs_dim = 0;
    if (!(in >> tag >> act_dim >> obs_dim) || tag != "dims" || act_dim == 0 || obs_dim == 0)
        throw std::runtime_error("policy record: bad dims");

    LinearPolicy p;
    p.act_dim = act_dim;
    p.obs_dim = obs_dim;
    p.weights = read_vector(in, "weights", act_dim * obs_dim);
    std::uint64_t count = 0;
    if (!(in >> tag >> count) || tag != "count")
        throw std::runtime_error("policy record: bad count");
    auto mean = read_vector(in, "mean", obs_dim);
    auto m2 = read_vector(in, "m2", obs_dim);
    for (const double v : m2)
        if (v < 0.0) throw std::runtime_error("policy record: negative variance accumulator");
    p.stats.restore(count, std::move(mean), std::move(m2));
    std::string tail;
    if (in >> tail) throw std::runtime_error("policy record: trailing content");
    return p;
}

void save_policy_file(const LinearPolicy& policy, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << save_policy(policy);
    if (!out) throw std::runtime_error("failed writing policy to '" + path + "'");
}

LinearPolicy load_policy_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open policy file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return load_policy(buffer.str());
}

}  // namespace recirc
