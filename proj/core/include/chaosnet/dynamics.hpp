#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace chaosnet {

/// Largest supported component count. The full truth table and the
/// iteration graph hold 2^n entries.
inline constexpr unsigned kMaxComponents = 16;

/// Throws std::invalid_argument unless 1 <= n <= kMaxComponents.
void check_component_count(unsigned n);

/// A configuration x in B^n.
///
/// Components are 1-based. x_1 is the most significant bit of the integer
/// encoding, so "0011" has value 3.
class BoolConfig {
  public:
    BoolConfig() = default;
    BoolConfig(unsigned n, std::uint32_t value);

    /// Parses a bit string such as "0011" (x_1 first).
    static BoolConfig from_bits(std::string_view bits);

    [[nodiscard]] unsigned size() const noexcept { return n_; }
    [[nodiscard]] std::uint32_t value() const noexcept { return value_; }

    /// Component i in [1, n].
    [[nodiscard]] bool bit(unsigned i) const;
    [[nodiscard]] BoolConfig with_bit(unsigned i, bool b) const;
    [[nodiscard]] BoolConfig flipped(unsigned i) const;

    [[nodiscard]] std::string to_string() const;

    friend bool operator==(const BoolConfig&, const BoolConfig&) = default;

  private:
    unsigned n_ = 0;
    std::uint32_t value_ = 0;
};

/// Mask selecting component i of an n-component value.
[[nodiscard]] constexpr std::uint32_t component_mask(unsigned n, unsigned i) noexcept {
    return std::uint32_t{1} << (n - i);
}

/// A total map f: B^n -> B^n stored as a truth table indexed by v(x).
class BooleanMap {
  public:
    BooleanMap(unsigned n, std::vector<std::uint32_t> table);

    [[nodiscard]] unsigned size() const noexcept { return n_; }
    [[nodiscard]] std::uint32_t state_count() const noexcept {
        return static_cast<std::uint32_t>(table_.size());
    }
    [[nodiscard]] std::span<const std::uint32_t> table() const noexcept { return table_; }

    [[nodiscard]] BoolConfig apply(const BoolConfig& x) const;
    /// f_i(x).
    [[nodiscard]] bool component(unsigned i, const BoolConfig& x) const;

    /// Unchecked F_f(s, x) on raw values.
    [[nodiscard]] std::uint32_t step_value(unsigned s, std::uint32_t v) const noexcept {
        const std::uint32_t mask = component_mask(n_, s);
        return (v & ~mask) | (table_[v] & mask);
    }

    friend bool operator==(const BooleanMap&, const BooleanMap&) = default;

  private:
    unsigned n_;
    std::vector<std::uint32_t> table_;
};

/// A finite prefix (S^0, ..., S^{l-1}) of a strategy; terms in [1, n].
class Strategy {
  public:
    Strategy() = default;
    Strategy(std::vector<unsigned> terms, unsigned n);

    /// Parses "1,2,3". An empty string is the empty word.
    static Strategy parse(std::string_view text, unsigned n);

    [[nodiscard]] std::span<const unsigned> terms() const noexcept { return terms_; }
    [[nodiscard]] std::size_t length() const noexcept { return terms_.size(); }
    [[nodiscard]] bool empty() const noexcept { return terms_.empty(); }
    [[nodiscard]] unsigned components() const noexcept { return n_; }
    [[nodiscard]] unsigned operator[](std::size_t t) const { return terms_.at(t); }

    /// sigma: drops the first term. Throws on an empty word.
    [[nodiscard]] Strategy shift() const;
    /// sigma applied m times.
    [[nodiscard]] Strategy shift(std::size_t m) const;

    [[nodiscard]] std::string to_string() const;

    friend bool operator==(const Strategy&, const Strategy&) = default;

  private:
    std::vector<unsigned> terms_;
    unsigned n_ = 0;
};

/// A point ((S^t), x) of the phase space, with a finite strategy prefix.
struct SystemPoint {
    Strategy strategy;
    BoolConfig config;

    friend bool operator==(const SystemPoint&, const SystemPoint&) = default;
};

[[nodiscard]] BoolConfig apply_map(const BooleanMap& f, const BoolConfig& x);

/// F_f(s, x): only component s takes its value from f(x).
[[nodiscard]] BoolConfig f_step(const BooleanMap& f, unsigned s, const BoolConfig& x);

/// Returns (x^1, ..., x^m) of the asynchronous iterations driven by S.
[[nodiscard]] std::vector<BoolConfig> iterate_async(const BooleanMap& f, const BoolConfig& x0,
                                                    const Strategy& strategy, std::size_t m);

/// G_f(S, x) = (sigma(S), F_f(S^0, x)).
[[nodiscard]] SystemPoint gf_step(const BooleanMap& f, const SystemPoint& p);

namespace maps {

/// Vectorial negation.
[[nodiscard]] BooleanMap negation(unsigned n);
/// (not x_1, x_1, x_2, ..., x_{n-1}).
[[nodiscard]] BooleanMap shift_negation(unsigned n);
/// Non strongly connected 4-component example: 1111 is a fixed point.
[[nodiscard]] BooleanMap example_f();
/// Strongly connected 4-component example obtained by pruning negation arcs.
[[nodiscard]] BooleanMap example_g();

}  // namespace maps

/// Resolves "f0", "f0:N", "f1", "f1:N", "paper_f", "paper_g".
/// f0/f1 without a size use `default_n`.
[[nodiscard]] BooleanMap builtin_map(std::string_view name, unsigned default_n = 4);
[[nodiscard]] bool is_builtin_map_name(std::string_view name);

}  // namespace chaosnet
