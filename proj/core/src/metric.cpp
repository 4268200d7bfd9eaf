#include "chaosnet/metric.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "chaosnet/seeding.hpp"

namespace chaosnet {

unsigned config_distance(const BoolConfig& x, const BoolConfig& y) {
    if (x.size() != y.size()) {
        throw std::invalid_argument("config_distance: dimension mismatch");
    }
    return static_cast<unsigned>(std::popcount(x.value() ^ y.value()));
}

double strategy_tail_bound(unsigned n, std::size_t horizon) {
    check_component_count(n);
    return (static_cast<double>(n) - 1.0) / (2.0 * n) * std::pow(10.0, -static_cast<double>(horizon));
}

double strategy_distance(const Strategy& s, const Strategy& t, std::size_t horizon) {
    if (s.components() != t.components()) {
        throw std::invalid_argument("strategy_distance: strategies over different component counts");
    }
    const unsigned n = s.components();
    if (n == 0) return 0.0;  // both default-constructed empty words
    const std::size_t common = std::min({horizon, s.length(), t.length()});
    double sum = 0.0;
    double scale = 0.1;
    for (std::size_t k = 0; k < common; ++k) {
        const auto a = static_cast<int>(s[k]);
        const auto b = static_cast<int>(t[k]);
        sum += std::abs(a - b) * scale;
        scale *= 0.1;
    }
    return 9.0 / (2.0 * n) * sum;
}

DistanceValue point_distance(const SystemPoint& p, const SystemPoint& q, std::size_t horizon) {
    DistanceValue d;
    d.config_part = config_distance(p.config, q.config);
    d.strategy_part = strategy_distance(p.strategy, q.strategy, horizon);
    d.total = d.config_part + d.strategy_part;
    d.horizon = horizon;
    d.tail_bound = strategy_tail_bound(p.config.size(), horizon);
    return d;
}

DistanceValue point_distance(const SystemPoint& p, const SystemPoint& q) {
    return point_distance(p, q, std::max(p.strategy.length(), q.strategy.length()));
}

namespace {

// max_{1 <= t <= word length} d_e of the two orbits under a shared word.
unsigned orbit_separation(const BooleanMap& f, std::uint32_t x, std::uint32_t y,
                          std::span<const unsigned> word) {
    unsigned best = 0;
    for (unsigned s : word) {
        x = f.step_value(s, x);
        y = f.step_value(s, y);
        best = std::max(best, static_cast<unsigned>(std::popcount(x ^ y)));
    }
    return best;
}

}  // namespace

std::optional<unsigned> expansivity_probe(const BooleanMap& f, std::size_t trials,
                                          std::size_t horizon, std::uint64_t seed) {
    if (trials == 0) return std::nullopt;
    if (horizon == 0) throw std::invalid_argument("expansivity_probe: horizon must be >= 1");
    const unsigned n = f.size();
    if (f.state_count() < 2) throw std::invalid_argument("expansivity_probe: needs n >= 1");

    Rng rng(seed);
    std::uniform_int_distribution<std::uint32_t> config_dist(0, f.state_count() - 1);
    std::uniform_int_distribution<unsigned> term_dist(1, n);
    std::vector<unsigned> word(horizon);

    unsigned minimum = std::numeric_limits<unsigned>::max();
    for (std::size_t trial = 0; trial < trials; ++trial) {
        const std::uint32_t x = config_dist(rng);
        std::uint32_t y = x;
        while (y == x) y = config_dist(rng);
        for (auto& s : word) s = term_dist(rng);
        minimum = std::min(minimum, orbit_separation(f, x, y, word));
    }
    return minimum;
}

unsigned expansivity_exhaustive(const BooleanMap& f, std::size_t horizon) {
    if (horizon == 0) throw std::invalid_argument("expansivity_exhaustive: horizon must be >= 1");
    const unsigned n = f.size();
    std::vector<unsigned> word(horizon, 1);
    unsigned minimum = std::numeric_limits<unsigned>::max();
    for (;;) {
        for (std::uint32_t x = 0; x < f.state_count(); ++x) {
            for (std::uint32_t y = x + 1; y < f.state_count(); ++y) {
                minimum = std::min(minimum, orbit_separation(f, x, y, word));
            }
        }
        // Odometer over [1, n]^horizon.
        std::size_t k = horizon;
        while (k > 0 && word[k - 1] == n) word[--k] = 1;
        if (k == 0) break;
        ++word[k - 1];
    }
    return minimum;
}

double bowen_distance(const BooleanMap& f, const SystemPoint& p, const SystemPoint& q,
                      std::size_t t) {
    if (t == 0) throw std::invalid_argument("bowen_distance: t must be >= 1");
    SystemPoint a = p;
    SystemPoint b = q;
    double best = point_distance(a, b).total;
    for (std::size_t i = 1; i < t; ++i) {
        a = gf_step(f, a);
        b = gf_step(f, b);
        best = std::max(best, point_distance(a, b).total);
    }
    return best;
}

std::vector<SystemPoint> sample_points(unsigned n, std::size_t count, std::size_t word_length,
                                       std::uint64_t seed) {
    check_component_count(n);
    std::vector<SystemPoint> points;
    points.reserve(count);
    std::uniform_int_distribution<std::uint32_t> config_dist(0, (std::uint32_t{1} << n) - 1);
    std::uniform_int_distribution<unsigned> term_dist(1, n);
    for (std::size_t i = 0; i < count; ++i) {
        Rng rng(derive_seed(seed, i));
        const BoolConfig x(n, config_dist(rng));
        std::vector<unsigned> word(word_length);
        for (auto& s : word) s = term_dist(rng);
        points.push_back({Strategy(std::move(word), n), x});
    }
    return points;
}

std::vector<SeparatedSetReport> separated_set_curve(const BooleanMap& f,
                                                    std::span<const SystemPoint> sample,
                                                    std::size_t t_max, double epsilon) {
    if (t_max == 0) throw std::invalid_argument("separated_set_curve: t must be >= 1");
    if (!(epsilon > 0.0)) throw std::invalid_argument("separated_set_curve: epsilon must be > 0");
    for (const auto& p : sample) {
        if (p.strategy.length() + 1 < t_max) {
            throw std::invalid_argument("separated_set_curve: sample strategies shorter than t - 1");
        }
    }

    // orbits[i][k] = G_f^k(sample[i]).
    std::vector<std::vector<SystemPoint>> orbits(sample.size());
    for (std::size_t i = 0; i < sample.size(); ++i) {
        orbits[i].reserve(t_max);
        orbits[i].push_back(sample[i]);
        for (std::size_t k = 1; k < t_max; ++k) orbits[i].push_back(gf_step(f, orbits[i].back()));
    }
    auto separated = [&](std::size_t i, std::size_t j, std::size_t t) {
        for (std::size_t k = 0; k < t; ++k) {
            if (point_distance(orbits[i][k], orbits[j][k]).total >= epsilon) return true;
        }
        return false;
    };

    std::vector<SeparatedSetReport> curve;
    std::vector<std::size_t> chosen;
    std::vector<bool> in_set(sample.size(), false);
    for (std::size_t t = 1; t <= t_max; ++t) {
        for (std::size_t i = 0; i < sample.size(); ++i) {
            if (in_set[i]) continue;
            const bool fits = std::all_of(chosen.begin(), chosen.end(),
                                          [&](std::size_t j) { return separated(i, j, t); });
            if (fits) {
                chosen.push_back(i);
                in_set[i] = true;
            }
        }
        curve.push_back({t, epsilon, sample.size(), chosen.size()});
    }
    return curve;
}

SeparatedSetReport separated_set_estimate(const BooleanMap& f, std::span<const SystemPoint> sample,
                                          std::size_t t, double epsilon) {
    return separated_set_curve(f, sample, t, epsilon).back();
}

SeparatedSetReport separated_set_estimate(const BooleanMap& f, std::size_t t, double epsilon,
                                          std::size_t sample_size, std::uint64_t seed,
                                          std::size_t word_length) {
    if (t > word_length + 1) {
        throw std::invalid_argument("separated_set_estimate: t exceeds the sample word length");
    }
    const auto sample = sample_points(f.size(), sample_size, word_length, seed);
    return separated_set_estimate(f, sample, t, epsilon);
}

}  // namespace chaosnet
