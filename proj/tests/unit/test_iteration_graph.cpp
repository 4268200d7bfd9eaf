#include <doctest.h>

#include <bit>
#include <algorithm>
#include <random>
#include <stdexcept>

#include "chaosnet/iteration_graph.hpp"
#include "oracles.hpp"

using namespace chaosnet;

namespace {
BoolConfig bits(const char* s) { return BoolConfig::from_bits(s); }

bool replays_to(const BooleanMap& f, const BoolConfig& x, const Strategy& word,
                const BoolConfig& y) {
    if (word.empty()) return x == y;
    return iterate_async(f, x, word, word.length()).back() == y;
}
}  // namespace

TEST_CASE("build_graph arcs") {
    const auto f0 = maps::negation(4);
    const IterationGraph g0(f0);
    CHECK(g0.vertex_count() == 16);
    for (std::uint32_t v = 0; v < 16; ++v) {
        CHECK(g0.arcs(v).size() == 4);
        for (unsigned i = 1; i <= 4; ++i) {
            CHECK(std::popcount(g0.target(v, i) ^ v) == 1);
            CHECK((g0.target(v, i) ^ v) == component_mask(4, i));
        }
    }

    const IterationGraph gf(maps::example_f());
    for (unsigned i = 1; i <= 4; ++i) CHECK(gf.target(15, i) == 15);

    const IterationGraph g1(maps::shift_negation(4));
    CHECK(g1.target(0, 1) == bits("1000").value());
    for (unsigned i = 2; i <= 4; ++i) CHECK(g1.target(0, i) == 0);
}

TEST_CASE("certify_chaos on the reference maps") {
    for (unsigned n = 1; n <= 10; ++n) {
        CAPTURE(n);
        CHECK(certify_chaos(maps::negation(n)).chaotic);
        CHECK(certify_chaos(maps::shift_negation(n)).chaotic);
    }
    const auto g = certify_chaos(maps::example_g());
    CHECK(g.chaotic);
    CHECK(g.scc_count == 1);
    CHECK_FALSE(g.witness.has_value());

    const auto f = certify_chaos(maps::example_f());
    CHECK_FALSE(f.chaotic);
    CHECK(f.scc_count > 1);
    REQUIRE(f.witness.has_value());
    CHECK(std::find(f.fixed_points.begin(), f.fixed_points.end(), bits("1111")) !=
          f.fixed_points.end());
    CHECK_FALSE(steer(IterationGraph(maps::example_f()), f.witness->from, f.witness->to));
}

TEST_CASE("a frozen map has one component per vertex") {
    std::vector<std::uint32_t> identity(16);
    for (std::uint32_t v = 0; v < 16; ++v) identity[v] = v;
    const auto cert = certify_chaos(BooleanMap(4, identity));
    CHECK_FALSE(cert.chaotic);
    CHECK(cert.scc_count == 16);
    CHECK(cert.fixed_points.size() == 16);
}

TEST_CASE("certificate rendering") {
    const auto cert = certify_chaos(maps::example_f());
    const auto text = format_certificate(cert);
    CHECK(text.find("not chaotic") != std::string::npos);
    CHECK(text.find("1111") != std::string::npos);
    const auto json = certificate_json(cert);
    CHECK(json.find("\"verdict\":false") != std::string::npos);
    CHECK(json.find("\"witness\":{") != std::string::npos);
    CHECK(certificate_json(certify_chaos(maps::example_g())).find("\"witness\":null") !=
          std::string::npos);
}

TEST_CASE("SCC verdict matches the transitive-closure oracle") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        const unsigned n = 1 + trial % 4;
        auto table = oracle::random_table(n, rng);
        // Bias half the maps towards negation so both verdicts occur.
        if (trial % 2 == 0) {
            for (std::uint32_t v = 0; v < table.size(); ++v) {
                table[v] = (rng() % 4 == 0) ? table[v] : static_cast<std::uint32_t>(table.size() - 1 - v);
            }
        }
        const BooleanMap f(n, table);
        CAPTURE(trial);
        CHECK(certify_chaos(f).chaotic == oracle::strongly_connected_by_closure(table, n));
    }
}

TEST_CASE("steer") {
    const auto f0 = maps::negation(4);
    const IterationGraph g0(f0);
    const auto word = steer(g0, bits("1111"), bits("0000"));
    REQUIRE(word);
    CHECK(word->to_string() == "1,2,3,4");
    CHECK(replays_to(f0, bits("1111"), *word, bits("0000")));

    const auto empty = steer(g0, bits("0101"), bits("0101"));
    REQUIRE(empty);
    CHECK(empty->empty());

    CHECK_FALSE(steer(IterationGraph(maps::example_f()), bits("1111"), bits("0000")));
    CHECK_THROWS_AS((void)steer(g0, bits("111"), bits("0000")), std::invalid_argument);
}

TEST_CASE("steer returns the smallest shortest word") {
    // Brute force: enumerate words by length, lexicographically.
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 40; ++trial) {
        const unsigned n = 3;
        const BooleanMap f(n, oracle::random_table(n, rng));
        const IterationGraph graph(f);
        for (std::uint32_t x = 0; x < 8; ++x) {
            for (std::uint32_t y = 0; y < 8; ++y) {
                std::optional<std::string> expected;
                for (std::size_t len = 0; len <= 8 && !expected; ++len) {
                    std::vector<unsigned> w(len, 1);
                    for (;;) {
                        std::uint32_t v = x;
                        for (unsigned s : w) v = f.step_value(s, v);
                        if (v == y) {
                            expected = Strategy(w, n).to_string();
                            break;
                        }
                        std::size_t k = len;
                        while (k > 0 && w[k - 1] == n) w[--k] = 1;
                        if (k == 0) break;
                        ++w[k - 1];
                    }
                }
                const auto got = steer(graph, BoolConfig(n, x), BoolConfig(n, y));
                REQUIRE(got.has_value() == expected.has_value());
                if (got) CHECK(got->to_string() == *expected);
            }
        }
    }
}

TEST_CASE("certificate soundness: steer succeeds on chaotic maps, fails on witnesses") {
    std::mt19937_64 rng(99);
    int chaotic_seen = 0;
    int broken_seen = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const unsigned n = 4;
        auto table = oracle::random_table(n, rng);
        for (std::uint32_t v = 0; v < 16; ++v) {
            if (rng() % 3) table[v] = 15 - v;
        }
        const BooleanMap f(n, table);
        const IterationGraph graph(f);
        const auto cert = certify_chaos(f);
        if (cert.chaotic) {
            ++chaotic_seen;
            std::uniform_int_distribution<std::uint32_t> cfg(0, 15);
            for (int pair = 0; pair < 100; ++pair) {
                const BoolConfig x(n, cfg(rng));
                const BoolConfig y(n, cfg(rng));
                const auto word = steer(graph, x, y);
                REQUIRE(word);
                CHECK(replays_to(f, x, *word, y));
            }
        } else {
            ++broken_seen;
            REQUIRE(cert.witness);
            CHECK_FALSE(steer(graph, cert.witness->from, cert.witness->to));
        }
    }
    CHECK(chaotic_seen > 0);
    CHECK(broken_seen > 0);
}

TEST_CASE("exact-length steering and mixing onset") {
    const auto f1 = maps::shift_negation(4);
    const IterationGraph g1(f1);
    const auto x = bits("0000");
    const auto y = bits("1011");
    const auto onset = mixing_onset(g1, x, y, 40);
    REQUIRE(onset);
    for (std::size_t len = *onset; len <= 40; ++len) {
        const auto word = steer_exact(g1, x, y, len);
        REQUIRE(word);
        CHECK(word->length() == len);
        CHECK(replays_to(f1, x, *word, y));
    }
    if (*onset > 0) CHECK_FALSE(steer_exact(g1, x, y, *onset - 1));

    // Negation flips exactly one bit per step: the weight parity alternates,
    // so odd-length walks between configurations at even distance never exist.
    const IterationGraph g0(maps::negation(4));
    CHECK_FALSE(mixing_onset(g0, bits("0000"), bits("0011"), 20));
    CHECK_FALSE(steer_exact(g0, bits("0000"), bits("0011"), 5));
    CHECK(steer_exact(g0, bits("0000"), bits("0011"), 6));
}
