#pragma once

#include <span>
#include <vector>

namespace chaosnet {

/// Per-column min-max scaling of network inputs to [0, 1].
struct InputScaling {
    std::vector<double> min;
    std::vector<double> max;

    [[nodiscard]] bool empty() const noexcept { return min.empty(); }

    /// Constant columns map to 0.
    [[nodiscard]] double scale(std::size_t column, double value) const {
        const double range = max[column] - min[column];
        return range > 0.0 ? (value - min[column]) / range : 0.0;
    }

    [[nodiscard]] std::vector<double> apply(std::span<const double> raw) const {
        std::vector<double> out(raw.begin(), raw.end());
        if (empty()) return out;
        for (std::size_t c = 0; c < out.size(); ++c) out[c] = scale(c, raw[c]);
        return out;
    }

    friend bool operator==(const InputScaling&, const InputScaling&) = default;
};

}  // namespace chaosnet
