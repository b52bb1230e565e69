#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace recirc {

// Axis-aligned box of valid vectors: one [low, high] interval per dimension.
struct BoxSpace {
    std::vector<double> low;
    std::vector<double> high;

    std::size_t dim() const { return low.size(); }

    static BoxSpace make(std::vector<double> lo, std::vector<double> hi) {
        if (lo.size() != hi.size() || lo.empty())
            throw std::invalid_argument("BoxSpace: bound vectors must be nonempty and equal length");
        for (std::size_t i = 0; i < lo.size(); ++i)
            if (!(lo[i] <= hi[i]))
                throw std::invalid_argument("BoxSpace: low[i] must not exceed high[i]");
        return BoxSpace{std::move(lo), std::move(hi)};
    }

    bool contains(std::span<const double> x) const {
        if (x.size() != dim()) return false;
        for (std::size_t i = 0; i < x.size(); ++i)
            if (x[i] < low[i] || x[i] > high[i]) return false;
        return true;
    }

    // Clip x into the box in place; returns true if any component moved.
    bool clip(std::span<double> x) const {
        if (x.size() != dim())
            throw std::invalid_argument("BoxSpace::clip: dimension mismatch");
        bool moved = false;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double c = std::clamp(x[i], low[i], high[i]);
            if (c != x[i]) moved = true;
            x[i] = c;
        }
        return moved;
    }
};

}  // namespace recirc
