#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "chaosnet/dynamics.hpp"

namespace chaosnet {

/// d = d_e + d_s between two points, with d_s summed over a finite horizon.
struct DistanceValue {
    unsigned config_part = 0;    // d_e, in [0, n]
    double strategy_part = 0.0;  // d_s, in [0, (n-1)/(2n)]
    double total = 0.0;
    std::size_t horizon = 0;     // strategy terms compared
    double tail_bound = 0.0;     // worst-case contribution of the terms beyond the horizon
};

/// Hamming distance d_e.
[[nodiscard]] unsigned config_distance(const BoolConfig& x, const BoolConfig& y);

/// Largest possible d_s contribution of terms t >= horizon:
/// (n-1)/(2n) * 10^-horizon.
[[nodiscard]] double strategy_tail_bound(unsigned n, std::size_t horizon);

/// d_s = 9/(2n) * sum_{t < horizon} |S^t - T^t| / 10^(t+1).
/// Terms beyond the end of either word contribute nothing.
[[nodiscard]] double strategy_distance(const Strategy& s, const Strategy& t, std::size_t horizon);

[[nodiscard]] DistanceValue point_distance(const SystemPoint& p, const SystemPoint& q,
                                           std::size_t horizon);
/// Compares the strategies over the longer of the two words.
[[nodiscard]] DistanceValue point_distance(const SystemPoint& p, const SystemPoint& q);

/// Minimum over `trials` random pairs (x != y, shared random strategy word of
/// `horizon` terms) of max_{1 <= t <= horizon} d_e(x^t, y^t).
/// std::nullopt when trials == 0.
[[nodiscard]] std::optional<unsigned> expansivity_probe(const BooleanMap& f, std::size_t trials,
                                                        std::size_t horizon, std::uint64_t seed);

/// Same quantity minimised over every pair x != y and every strategy word of
/// length `horizon`. Cost grows as 4^n * n^horizon.
[[nodiscard]] unsigned expansivity_exhaustive(const BooleanMap& f, std::size_t horizon);

/// d_t(p, q) = max_{0 <= i < t} d(G_f^i(p), G_f^i(q)), strategies compared in full.
[[nodiscard]] double bowen_distance(const BooleanMap& f, const SystemPoint& p,
                                    const SystemPoint& q, std::size_t t);

/// `count` random points; point i draws its configuration then its strategy
/// from its own stream, so longer words extend shorter ones.
[[nodiscard]] std::vector<SystemPoint> sample_points(unsigned n, std::size_t count,
                                                     std::size_t word_length, std::uint64_t seed);

struct SeparatedSetReport {
    std::size_t t = 0;
    double epsilon = 0.0;
    std::size_t sample_size = 0;
    std::size_t h_lower = 0;
};

/// Greedy (t, epsilon)-separated subsets of `sample` for t = 1..t_max.
///
/// The set for t seeds the search at t + 1 (a set separated under d_t stays
/// separated under d_{t+1}), so h_lower never decreases along the curve.
[[nodiscard]] std::vector<SeparatedSetReport> separated_set_curve(
    const BooleanMap& f, std::span<const SystemPoint> sample, std::size_t t_max, double epsilon);

[[nodiscard]] SeparatedSetReport separated_set_estimate(const BooleanMap& f,
                                                        std::span<const SystemPoint> sample,
                                                        std::size_t t, double epsilon);

/// Default strategy word length of the seeded sample.
inline constexpr std::size_t kSampleWordLength = 24;

/// Seeded variant: the sample depends on (n, sample_size, word_length, seed)
/// only, so calls with increasing t see the same points.
[[nodiscard]] SeparatedSetReport separated_set_estimate(const BooleanMap& f, std::size_t t,
                                                        double epsilon, std::size_t sample_size,
                                                        std::uint64_t seed,
                                                        std::size_t word_length = kSampleWordLength);

}  // namespace chaosnet
