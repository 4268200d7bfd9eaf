#include "chaosnet/dynamics.hpp"

#include <charconv>
#include <stdexcept>

namespace chaosnet {

void check_component_count(unsigned n) {
    if (n < 1 || n > kMaxComponents) {
        throw std::invalid_argument("component count must be in [1, " +
                                    std::to_string(kMaxComponents) + "], got " +
                                    std::to_string(n));
    }
}

namespace {

void check_component_index(unsigned i, unsigned n) {
    if (i < 1 || i > n) {
        throw std::invalid_argument("component index " + std::to_string(i) +
                                    " outside [1, " + std::to_string(n) + "]");
    }
}

void check_same_size(unsigned a, unsigned b) {
    if (a != b) {
        throw std::invalid_argument("dimension mismatch: " + std::to_string(a) + " vs " +
                                    std::to_string(b) + " components");
    }
}

}  // namespace

// BoolConfig

BoolConfig::BoolConfig(unsigned n, std::uint32_t value) : n_(n), value_(value) {
    check_component_count(n);
    if (value >= (std::uint64_t{1} << n)) {
        throw std::invalid_argument("configuration value " + std::to_string(value) +
                                    " does not fit in " + std::to_string(n) + " bits");
    }
}

BoolConfig BoolConfig::from_bits(std::string_view bits) {
    check_component_count(static_cast<unsigned>(bits.size()));
    std::uint32_t v = 0;
    for (char c : bits) {
        if (c != '0' && c != '1') {
            throw std::invalid_argument("bit string may only contain 0 and 1: '" +
                                        std::string(bits) + "'");
        }
        v = (v << 1) | static_cast<std::uint32_t>(c - '0');
    }
    return BoolConfig(static_cast<unsigned>(bits.size()), v);
}

bool BoolConfig::bit(unsigned i) const {
    check_component_index(i, n_);
    return (value_ & component_mask(n_, i)) != 0;
}

BoolConfig BoolConfig::with_bit(unsigned i, bool b) const {
    check_component_index(i, n_);
    const std::uint32_t mask = component_mask(n_, i);
    BoolConfig out = *this;
    out.value_ = b ? (value_ | mask) : (value_ & ~mask);
    return out;
}

BoolConfig BoolConfig::flipped(unsigned i) const { return with_bit(i, !bit(i)); }

std::string BoolConfig::to_string() const {
    std::string s(n_, '0');
    for (unsigned i = 1; i <= n_; ++i) {
        if (value_ & component_mask(n_, i)) s[i - 1] = '1';
    }
    return s;
}

// BooleanMap

BooleanMap::BooleanMap(unsigned n, std::vector<std::uint32_t> table)
    : n_(n), table_(std::move(table)) {
    check_component_count(n);
    const std::uint64_t states = std::uint64_t{1} << n;
    if (table_.size() != states) {
        throw std::invalid_argument("truth table for n=" + std::to_string(n) + " needs " +
                                    std::to_string(states) + " entries, got " +
                                    std::to_string(table_.size()));
    }
    for (std::size_t v = 0; v < table_.size(); ++v) {
        if (table_[v] >= states) {
            throw std::invalid_argument("truth table entry " + std::to_string(v) + " = " +
                                        std::to_string(table_[v]) + " out of range");
        }
    }
}

BoolConfig BooleanMap::apply(const BoolConfig& x) const {
    check_same_size(x.size(), n_);
    return BoolConfig(n_, table_[x.value()]);
}

bool BooleanMap::component(unsigned i, const BoolConfig& x) const { return apply(x).bit(i); }

// Strategy

Strategy::Strategy(std::vector<unsigned> terms, unsigned n) : terms_(std::move(terms)), n_(n) {
    check_component_count(n);
    for (unsigned s : terms_) check_component_index(s, n);
}

Strategy Strategy::parse(std::string_view text, unsigned n) {
    std::vector<unsigned> terms;
    while (!text.empty()) {
        const auto comma = text.find(',');
        const std::string_view item = text.substr(0, comma);
        unsigned value = 0;
        const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
        if (ec != std::errc{} || ptr != item.data() + item.size() || item.empty()) {
            throw std::invalid_argument("bad strategy term '" + std::string(item) + "'");
        }
        terms.push_back(value);
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    return Strategy(std::move(terms), n);
}

Strategy Strategy::shift() const {
    if (terms_.empty()) throw std::invalid_argument("cannot shift an empty strategy");
    Strategy out;
    out.n_ = n_;
    out.terms_.assign(terms_.begin() + 1, terms_.end());
    return out;
}

Strategy Strategy::shift(std::size_t m) const {
    if (m > terms_.size()) {
        throw std::invalid_argument("cannot shift " + std::to_string(m) +
                                    " terms from a strategy of length " +
                                    std::to_string(terms_.size()));
    }
    Strategy out;
    out.n_ = n_;
    out.terms_.assign(terms_.begin() + static_cast<std::ptrdiff_t>(m), terms_.end());
    return out;
}

std::string Strategy::to_string() const {
    std::string s;
    for (std::size_t t = 0; t < terms_.size(); ++t) {
        if (t) s += ',';
        s += std::to_string(terms_[t]);
    }
    return s;
}

// Iterations

BoolConfig apply_map(const BooleanMap& f, const BoolConfig& x) { return f.apply(x); }

BoolConfig f_step(const BooleanMap& f, unsigned s, const BoolConfig& x) {
    check_same_size(x.size(), f.size());
    check_component_index(s, f.size());
    return BoolConfig(f.size(), f.step_value(s, x.value()));
}

std::vector<BoolConfig> iterate_async(const BooleanMap& f, const BoolConfig& x0,
                                      const Strategy& strategy, std::size_t m) {
    check_same_size(x0.size(), f.size());
    if (m > strategy.length()) {
        throw std::invalid_argument("requested " + std::to_string(m) +
                                    " iterations but the strategy has only " +
                                    std::to_string(strategy.length()) + " terms");
    }
    std::vector<BoolConfig> orbit;
    orbit.reserve(m);
    BoolConfig x = x0;
    for (std::size_t t = 0; t < m; ++t) {
        x = f_step(f, strategy[t], x);
        orbit.push_back(x);
    }
    return orbit;
}

SystemPoint gf_step(const BooleanMap& f, const SystemPoint& p) {
    if (p.strategy.empty()) throw std::invalid_argument("G_f step needs a nonempty strategy");
    return SystemPoint{p.strategy.shift(), f_step(f, p.strategy[0], p.config)};
}

// Builtin maps

namespace maps {

BooleanMap negation(unsigned n) {
    check_component_count(n);
    const std::uint32_t states = std::uint32_t{1} << n;
    std::vector<std::uint32_t> table(states);
    for (std::uint32_t v = 0; v < states; ++v) table[v] = states - 1 - v;
    return BooleanMap(n, std::move(table));
}

BooleanMap shift_negation(unsigned n) {
    check_component_count(n);
    const std::uint32_t states = std::uint32_t{1} << n;
    const std::uint32_t top = component_mask(n, 1);
    std::vector<std::uint32_t> table(states);
    for (std::uint32_t v = 0; v < states; ++v) {
        // Components move one place towards the least significant end; x_n drops out.
        const std::uint32_t shifted = v >> 1;
        table[v] = (v & top) ? shifted : (shifted | top);
    }
    return BooleanMap(n, std::move(table));
}

BooleanMap example_f() {
    return BooleanMap(4, {0, 0, 2, 3, 13, 13, 6, 3, 8, 9, 10, 11, 8, 13, 14, 15});
}

BooleanMap example_g() {
    return BooleanMap(4, {11, 14, 13, 14, 11, 10, 1, 8, 7, 6, 5, 4, 3, 2, 1, 0});
}

}  // namespace maps

namespace {

bool parse_sized(std::string_view name, std::string_view prefix, unsigned default_n,
                 unsigned& n) {
    if (name == prefix) {
        n = default_n;
        return true;
    }
    if (name.size() > prefix.size() + 1 && name.substr(0, prefix.size()) == prefix &&
        name[prefix.size()] == ':') {
        const std::string_view digits = name.substr(prefix.size() + 1);
        const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
        if (ec != std::errc{} || ptr != digits.data() + digits.size()) {
            throw std::invalid_argument("bad component count in map name '" +
                                        std::string(name) + "'");
        }
        return true;
    }
    return false;
}

}  // namespace

BooleanMap builtin_map(std::string_view name, unsigned default_n) {
    unsigned n = 0;
    if (parse_sized(name, "f0", default_n, n)) return maps::negation(n);
    if (parse_sized(name, "f1", default_n, n)) return maps::shift_negation(n);
    if (name == "paper_f") return maps::example_f();
    if (name == "paper_g") return maps::example_g();
    throw std::invalid_argument("unknown builtin map '" + std::string(name) + "'");
}

bool is_builtin_map_name(std::string_view name) {
    if (name == "paper_f" || name == "paper_g" || name == "f0" || name == "f1") return true;
    return name.starts_with("f0:") || name.starts_with("f1:");
}

}  // namespace chaosnet
