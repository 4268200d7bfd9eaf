#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chaosnet/dynamics.hpp"
#include "chaosnet/scaling.hpp"

namespace chaosnet {

/// How (x, S, m) -> (x^m, sigma^m(S)) pairs are laid out for a network.
enum class Scheme {
    Boolean,    ///< one input/output per component, plus strategy number and m
    Gray,       ///< configuration as a Gray-coded natural number
    GraySplit,  ///< Gray layout, one network per output
};

[[nodiscard]] Scheme parse_scheme(std::string_view text);  // "1", "2", "2-split"
[[nodiscard]] std::string_view scheme_name(Scheme scheme);

// Codes

/// Reflected binary Gray code of v < 2^n.
[[nodiscard]] std::uint32_t gray_encode(std::uint32_t v, unsigned n);
[[nodiscard]] std::uint32_t gray_decode(std::uint32_t g, unsigned n);

/// Base-(n+1) number of a strategy word, S^0 as the most significant digit.
/// Digit 0 never occurs, so the length can be recovered from the code.
[[nodiscard]] std::uint64_t strategy_encode(const Strategy& s);
[[nodiscard]] Strategy strategy_decode(std::uint64_t code, std::size_t length, unsigned n);
[[nodiscard]] Strategy strategy_decode(std::uint64_t code, unsigned n);

struct PairCount {
    std::uint64_t omega = 0;  ///< (m, S) pairs per configuration
    std::uint64_t total = 0;  ///< 2^n * omega
};

/// omega = sum_{l=2}^{k} (l-1) n^l. Requires n, k >= 2.
[[nodiscard]] PairCount count_pairs(unsigned n, unsigned k);
/// omega from ((k-1) n^{k+1} (n-1) - (n^{k+1} - n^2)) / (n-1)^2.
[[nodiscard]] std::uint64_t count_pairs_closed_form(unsigned n, unsigned k);

// Samples

struct Provenance {
    BoolConfig x;
    Strategy strategy;
    std::size_t m = 0;

    friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct Sample {
    std::vector<double> inputs;
    std::vector<double> outputs;
    Provenance provenance;
};

enum class OutputKind { Bit, ConfigCode, StrategyCode };

/// Describes one output column and its valid integer range.
struct OutputSpec {
    std::string name;
    OutputKind kind = OutputKind::Bit;
    double lo = 0.0;
    double hi = 1.0;
};

struct Dataset {
    Scheme scheme = Scheme::Boolean;
    unsigned n = 0;
    unsigned k = 0;
    std::vector<Sample> samples;
    InputScaling scaling;  ///< whole-dataset statistics

    [[nodiscard]] std::size_t input_count() const;
    [[nodiscard]] std::size_t output_count() const;
    [[nodiscard]] std::vector<OutputSpec> output_specs() const;
};

/// Scheme layouts for a single (x, S, m).
[[nodiscard]] Sample encode_sample(const BooleanMap& f, const Provenance& p, Scheme scheme);

/// Every x in B^n, l in [2, k], S in [1, n]^l (lexicographic), m in [1, l-1],
/// in that nesting order.
[[nodiscard]] Dataset enumerate_dataset(const BooleanMap& f, unsigned k, Scheme scheme);

[[nodiscard]] InputScaling column_scaling(std::span<const Sample> samples);

struct Split {
    std::vector<std::size_t> train;
    std::vector<std::size_t> validation;
    std::vector<std::size_t> test;
};

/// Seeded shuffle into 65/10/25 %: validation and test sizes are rounded to
/// nearest, training takes the rest.
[[nodiscard]] Split split_dataset(std::size_t sample_count, std::uint64_t seed);
[[nodiscard]] Split split_dataset(const Dataset& ds, std::uint64_t seed);

/// Header in_1..in_p,out_1..out_q,x,S,m; strategies are quoted "1,2".
void write_dataset_csv(std::ostream& out, const Dataset& ds);
/// Scheme is inferred from the column layout unless given.
[[nodiscard]] Dataset read_dataset_csv(std::istream& in,
                                       std::optional<Scheme> scheme = std::nullopt);

}  // namespace chaosnet
