#include <doctest.h>

#include <cmath>
#include <algorithm>
#include <random>
#include <stdexcept>

#include "chaosnet/metric.hpp"

using namespace chaosnet;

namespace {
BoolConfig bits(const char* s) { return BoolConfig::from_bits(s); }

Strategy random_word(std::mt19937_64& rng, unsigned n, std::size_t length) {
    std::uniform_int_distribution<unsigned> term(1, n);
    std::vector<unsigned> w(length);
    for (auto& t : w) t = term(rng);
    return Strategy(w, n);
}

SystemPoint random_point(std::mt19937_64& rng, unsigned n, std::size_t length) {
    std::uniform_int_distribution<std::uint32_t> cfg(0, (1u << n) - 1);
    return {random_word(rng, n, length), BoolConfig(n, cfg(rng))};
}
}  // namespace

TEST_CASE("config_distance") {
    CHECK(config_distance(bits("0000"), bits("1111")) == 4);
    CHECK(config_distance(bits("0110"), bits("0110")) == 0);
    CHECK(config_distance(bits("10000"), bits("01111")) == 5);
    CHECK_THROWS_AS((void)config_distance(bits("000"), bits("0000")), std::invalid_argument);
}

TEST_CASE("strategy_distance") {
    CHECK(strategy_distance(Strategy({1, 1}, 4), Strategy({2, 1}, 4), 2) ==
          doctest::Approx(0.1125).epsilon(1e-12));
    CHECK(strategy_distance(Strategy({1}, 4), Strategy({4}, 4), 1) ==
          doctest::Approx(0.3375).epsilon(1e-12));
    CHECK(strategy_distance(Strategy({3, 2, 4}, 4), Strategy({3, 2, 4}, 4), 3) == 0.0);
    // Terms beyond either word contribute nothing.
    CHECK(strategy_distance(Strategy({1}, 4), Strategy({1, 4, 4}, 4), 3) == 0.0);
    CHECK(strategy_tail_bound(4, 2) == doctest::Approx(3.0 / 8.0 * 1e-2));
}

TEST_CASE("point_distance") {
    const SystemPoint p{Strategy({1, 2}, 4), bits("0000")};
    const auto same = point_distance(p, p, 2);
    CHECK(same.total == 0.0);
    const SystemPoint q{Strategy({1, 2}, 4), bits("0101")};
    const auto d = point_distance(p, q, 2);
    CHECK(d.config_part == 2);
    CHECK(d.strategy_part == 0.0);
    CHECK(d.total == 2.0);
    CHECK(d.horizon == 2);
    CHECK(point_distance(p, SystemPoint{Strategy({1, 2, 3}, 4), bits("0000")}).horizon == 3);
    CHECK_THROWS_AS((void)point_distance(p, SystemPoint{Strategy({1}, 3), bits("000")}, 1),
                    std::invalid_argument);
}

TEST_CASE("metric properties on seeded triples") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 1000; ++trial) {
        const unsigned n = 2 + trial % 7;
        const std::size_t h = 1 + trial % 9;
        const auto a = random_point(rng, n, h);
        const auto b = random_point(rng, n, h);
        const auto c = random_point(rng, n, h);
        const auto ab = point_distance(a, b, h);
        const auto ba = point_distance(b, a, h);
        const auto bc = point_distance(b, c, h);
        const auto ac = point_distance(a, c, h);

        CHECK(ab.total >= 0.0);
        CHECK(ab.total == ba.total);
        CHECK(ac.total <= ab.total + bc.total + 1e-12);
        CHECK((ab.total == 0.0) == (a.config == b.config && a.strategy == b.strategy));
        CHECK(point_distance(a, a, h).total == 0.0);

        // d_s bound and floor/fraction split.
        const double bound = double(n - 1) / (2.0 * n);
        CHECK(ab.strategy_part <= bound + 1e-15);
        CHECK(std::floor(ab.total) == double(ab.config_part));
        CHECK(ab.total - std::floor(ab.total) == doctest::Approx(ab.strategy_part));
        CHECK(ab.tail_bound == doctest::Approx(bound * std::pow(10.0, -double(h))));

        // Truncation honesty: one more term moves d_s by at most the tail bound.
        const auto extend = [n](const SystemPoint& p, unsigned term) {
            std::vector<unsigned> w(p.strategy.terms().begin(), p.strategy.terms().end());
            w.push_back(term);
            return SystemPoint{Strategy(w, n), p.config};
        };
        const auto longer_a = extend(a, 1);
        const auto longer_b = extend(b, n);
        const auto next = point_distance(longer_a, longer_b, h + 1);
        CHECK(std::abs(next.strategy_part - ab.strategy_part) <= ab.tail_bound + 1e-15);
    }
}

TEST_CASE("expansivity probes") {
    CHECK(expansivity_exhaustive(maps::negation(4), 3) >= 1);
    const auto probe = expansivity_probe(maps::negation(6), 500, 8, 3);
    REQUIRE(probe);
    CHECK(*probe >= 1);
    CHECK_FALSE(expansivity_probe(maps::negation(4), 0, 8, 3));

    // 0100 and 0101 share f_4 = 1, so updating component 4 merges them.
    CHECK(expansivity_exhaustive(maps::example_f(), 2) == 0);
}

TEST_CASE("separated sets") {
    const auto f0 = maps::negation(4);
    std::vector<SystemPoint> all_configs;
    for (std::uint32_t v = 0; v < 16; ++v) all_configs.push_back({Strategy({1, 2, 3}, 4), BoolConfig(4, v)});
    const auto full = separated_set_estimate(f0, all_configs, 1, 0.5);
    CHECK(full.h_lower == 16);
    CHECK(full.sample_size == 16);
    CHECK(separated_set_estimate(f0, all_configs, 1, 5.5).h_lower == 1);

    const auto t2 = separated_set_estimate(f0, 2, 0.05, 200, 17);
    const auto t4 = separated_set_estimate(f0, 4, 0.05, 200, 17);
    CHECK(t4.h_lower >= t2.h_lower);
    CHECK(t4.h_lower <= t4.sample_size);

    const auto sample = sample_points(4, 150, 12, 9);
    for (const auto& f : {f0, maps::example_f(), maps::example_g()}) {
        const auto curve = separated_set_curve(f, sample, 10, 0.05);
        REQUIRE(curve.size() == 10);
        for (std::size_t i = 1; i < curve.size(); ++i) {
            CHECK(curve[i].t == i + 1);
            CHECK(curve[i].h_lower >= curve[i - 1].h_lower);
        }
        CHECK(curve.back().h_lower <= sample.size());
    }

    CHECK_THROWS_AS((void)separated_set_estimate(f0, 0, 0.5, 10, 1), std::invalid_argument);
    CHECK_THROWS_AS((void)separated_set_estimate(f0, 2, 0.0, 10, 1), std::invalid_argument);
}

TEST_CASE("sample_points is prefix stable") {
    const auto short_words = sample_points(5, 30, 4, 77);
    const auto long_words = sample_points(5, 30, 10, 77);
    for (std::size_t i = 0; i < short_words.size(); ++i) {
        CHECK(short_words[i].config == long_words[i].config);
        for (std::size_t t = 0; t < 4; ++t) {
            CHECK(short_words[i].strategy[t] == long_words[i].strategy[t]);
        }
    }
}

TEST_CASE("bowen distance dominates the plain distance") {
    std::mt19937_64 rng(4);
    const auto g = maps::example_g();
    for (int trial = 0; trial < 200; ++trial) {
        const auto p = random_point(rng, 4, 8);
        const auto q = random_point(rng, 4, 8);
        const double d1 = bowen_distance(g, p, q, 1);
        CHECK(d1 == doctest::Approx(point_distance(p, q).total));
        CHECK(bowen_distance(g, p, q, 5) >= d1);
    }
}
