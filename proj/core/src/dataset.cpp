#include "chaosnet/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "chaosnet/seeding.hpp"

namespace chaosnet {

Scheme parse_scheme(std::string_view text) {
    if (text == "1" || text == "boolean") return Scheme::Boolean;
    if (text == "2" || text == "gray") return Scheme::Gray;
    if (text == "2-split" || text == "gray-split") return Scheme::GraySplit;
    throw std::invalid_argument("unknown coding scheme '" + std::string(text) + "'");
}

std::string_view scheme_name(Scheme scheme) {
    switch (scheme) {
        case Scheme::Boolean: return "1";
        case Scheme::Gray: return "2";
        case Scheme::GraySplit: return "2-split";
    }
    return "?";
}

std::uint32_t gray_encode(std::uint32_t v, unsigned n) {
    check_component_count(n);
    if (v >= (std::uint32_t{1} << n)) {
        throw std::invalid_argument("gray_encode: " + std::to_string(v) + " needs more than " +
                                    std::to_string(n) + " bits");
    }
    return v ^ (v >> 1);
}

std::uint32_t gray_decode(std::uint32_t g, unsigned n) {
    check_component_count(n);
    if (g >= (std::uint32_t{1} << n)) {
        throw std::invalid_argument("gray_decode: " + std::to_string(g) + " needs more than " +
                                    std::to_string(n) + " bits");
    }
    std::uint32_t v = g;
    for (std::uint32_t shift = g >> 1; shift != 0; shift >>= 1) v ^= shift;
    return v;
}

std::uint64_t strategy_encode(const Strategy& s) {
    const std::uint64_t radix = s.components() + 1;
    std::uint64_t code = 0;
    for (unsigned term : s.terms()) {
        if (code > (std::numeric_limits<std::uint64_t>::max() - term) / radix) {
            throw std::overflow_error("strategy_encode: code does not fit in 64 bits");
        }
        code = code * radix + term;
    }
    return code;
}

Strategy strategy_decode(std::uint64_t code, std::size_t length, unsigned n) {
    check_component_count(n);
    const std::uint64_t radix = n + 1;
    std::vector<unsigned> terms(length);
    for (std::size_t t = length; t > 0; --t) {
        const auto digit = static_cast<unsigned>(code % radix);
        if (digit == 0) {
            throw std::invalid_argument("strategy_decode: digit 0 is not a valid strategy term");
        }
        terms[t - 1] = digit;
        code /= radix;
    }
    if (code != 0) {
        throw std::invalid_argument("strategy_decode: code has more than " +
                                    std::to_string(length) + " digits");
    }
    return Strategy(std::move(terms), n);
}

Strategy strategy_decode(std::uint64_t code, unsigned n) {
    std::size_t length = 0;
    for (std::uint64_t c = code; c != 0; c /= (n + 1)) ++length;
    return strategy_decode(code, length, n);
}

namespace {

std::uint64_t ipow(std::uint64_t base, unsigned exp) {
    std::uint64_t r = 1;
    while (exp--) r *= base;
    return r;
}

void check_pair_params(unsigned n, unsigned k) {
    if (n < 2 || k < 2) throw std::invalid_argument("count_pairs: needs n >= 2 and k >= 2");
    check_component_count(n);
}

}  // namespace

PairCount count_pairs(unsigned n, unsigned k) {
    check_pair_params(n, k);
    PairCount c;
    for (unsigned l = 2; l <= k; ++l) c.omega += (l - 1) * ipow(n, l);
    c.total = (std::uint64_t{1} << n) * c.omega;
    return c;
}

std::uint64_t count_pairs_closed_form(unsigned n, unsigned k) {
    check_pair_params(n, k);
    __extension__ using Wide = unsigned __int128;
    const Wide nk1 = ipow(n, k + 1);
    const Wide numerator = Wide{k - 1} * nk1 * (n - 1) - (nk1 - Wide{n} * n);
    const Wide denominator = Wide{n - 1} * (n - 1);
    if (numerator % denominator != 0) {
        throw std::logic_error("count_pairs_closed_form: inexact division");
    }
    return static_cast<std::uint64_t>(numerator / denominator);
}

// Dataset layout

std::size_t Dataset::input_count() const { return scheme == Scheme::Boolean ? n + 2 : 3; }

std::size_t Dataset::output_count() const { return scheme == Scheme::Boolean ? n + 1 : 2; }

std::vector<OutputSpec> Dataset::output_specs() const {
    // Remaining words have 1..k-1 terms; the largest code is (n+1)^(k-1) - 1.
    const double strategy_hi = static_cast<double>(ipow(n + 1, k - 1) - 1);
    std::vector<OutputSpec> specs;
    if (scheme == Scheme::Boolean) {
        for (unsigned i = 1; i <= n; ++i) {
            specs.push_back({"output_" + std::to_string(i), OutputKind::Bit, 0.0, 1.0});
        }
    } else {
        specs.push_back({"config", OutputKind::ConfigCode, 0.0,
                         static_cast<double>((std::uint32_t{1} << n) - 1)});
    }
    specs.push_back({"strategy", OutputKind::StrategyCode, 1.0, strategy_hi});
    return specs;
}

Sample encode_sample(const BooleanMap& f, const Provenance& p, Scheme scheme) {
    const unsigned n = f.size();
    if (p.m == 0 || p.m >= p.strategy.length()) {
        throw std::invalid_argument("encode_sample: m must be in [1, l-1]");
    }
    const auto orbit = iterate_async(f, p.x, p.strategy, p.m);
    const BoolConfig& xm = orbit.back();
    const Strategy rest = p.strategy.shift(p.m);

    Sample s;
    s.provenance = p;
    if (scheme == Scheme::Boolean) {
        for (unsigned i = 1; i <= n; ++i) s.inputs.push_back(p.x.bit(i) ? 1.0 : 0.0);
        s.inputs.push_back(static_cast<double>(strategy_encode(p.strategy)));
        s.inputs.push_back(static_cast<double>(p.m));
        for (unsigned i = 1; i <= n; ++i) s.outputs.push_back(xm.bit(i) ? 1.0 : 0.0);
        s.outputs.push_back(static_cast<double>(strategy_encode(rest)));
    } else {
        s.inputs = {static_cast<double>(gray_encode(p.x.value(), n)),
                    static_cast<double>(strategy_encode(p.strategy)),
                    static_cast<double>(p.m)};
        s.outputs = {static_cast<double>(gray_encode(xm.value(), n)),
                     static_cast<double>(strategy_encode(rest))};
    }
    return s;
}

InputScaling column_scaling(std::span<const Sample> samples) {
    InputScaling scaling;
    if (samples.empty()) return scaling;
    const std::size_t p = samples.front().inputs.size();
    scaling.min.assign(p, std::numeric_limits<double>::infinity());
    scaling.max.assign(p, -std::numeric_limits<double>::infinity());
    for (const auto& s : samples) {
        for (std::size_t c = 0; c < p; ++c) {
            scaling.min[c] = std::min(scaling.min[c], s.inputs[c]);
            scaling.max[c] = std::max(scaling.max[c], s.inputs[c]);
        }
    }
    return scaling;
}

Dataset enumerate_dataset(const BooleanMap& f, unsigned k, Scheme scheme) {
    const unsigned n = f.size();
    if (k < 2) throw std::invalid_argument("enumerate_dataset: k must be >= 2");
    if (k > 6) throw std::invalid_argument("enumerate_dataset: k > 6 is not supported");

    Dataset ds;
    ds.scheme = scheme;
    ds.n = n;
    ds.k = k;
    if (n >= 2) ds.samples.reserve(count_pairs(n, k).total);

    for (std::uint32_t v = 0; v < f.state_count(); ++v) {
        const BoolConfig x(n, v);
        for (unsigned l = 2; l <= k; ++l) {
            std::vector<unsigned> word(l, 1);
            for (;;) {
                const Strategy s(word, n);
                for (std::size_t m = 1; m < l; ++m) {
                    ds.samples.push_back(encode_sample(f, Provenance{x, s, m}, scheme));
                }
                std::size_t pos = l;
                while (pos > 0 && word[pos - 1] == n) word[--pos] = 1;
                if (pos == 0) break;
                ++word[pos - 1];
            }
        }
    }
    ds.scaling = column_scaling(ds.samples);
    return ds;
}

Split split_dataset(std::size_t sample_count, std::uint64_t seed) {
    if (sample_count == 0) throw std::invalid_argument("split_dataset: empty dataset");
    std::vector<std::size_t> order(sample_count);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    std::shuffle(order.begin(), order.end(), rng);

    const auto n = static_cast<double>(sample_count);
    const auto validation = static_cast<std::size_t>(std::llround(0.10 * n));
    const auto test = static_cast<std::size_t>(std::llround(0.25 * n));
    const std::size_t train = sample_count - validation - test;

    Split split;
    const auto begin = order.begin();
    split.train.assign(begin, begin + static_cast<std::ptrdiff_t>(train));
    split.validation.assign(begin + static_cast<std::ptrdiff_t>(train),
                            begin + static_cast<std::ptrdiff_t>(train + validation));
    split.test.assign(begin + static_cast<std::ptrdiff_t>(train + validation), order.end());
    return split;
}

Split split_dataset(const Dataset& ds, std::uint64_t seed) {
    return split_dataset(ds.samples.size(), seed);
}

// CSV

namespace {

void write_number(std::ostream& out, double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    out.write(buf, res.ptr - buf);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (char c : line) {
        if (c == '"') {
            quoted = !quoted;
        } else if (c == ',' && !quoted) {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c != '\r') {
            field += c;
        }
    }
    fields.push_back(std::move(field));
    return fields;
}

double parse_double(const std::string& s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw std::invalid_argument("dataset csv: bad number '" + s + "'");
    }
    return v;
}

}  // namespace

void write_dataset_csv(std::ostream& out, const Dataset& ds) {
    const std::size_t p = ds.input_count();
    const std::size_t q = ds.output_count();
    for (std::size_t c = 1; c <= p; ++c) out << "in_" << c << ',';
    for (std::size_t c = 1; c <= q; ++c) out << "out_" << c << ',';
    out << "x,S,m\n";
    for (const auto& s : ds.samples) {
        for (double v : s.inputs) {
            write_number(out, v);
            out << ',';
        }
        for (double v : s.outputs) {
            write_number(out, v);
            out << ',';
        }
        out << s.provenance.x.to_string() << ",\"" << s.provenance.strategy.to_string() << "\","
            << s.provenance.m << '\n';
    }
}

Dataset read_dataset_csv(std::istream& in, std::optional<Scheme> scheme) {
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("dataset csv: missing header");
    const auto header = split_csv_line(line);
    std::size_t p = 0;
    std::size_t q = 0;
    for (const auto& h : header) {
        if (h.starts_with("in_")) ++p;
        if (h.starts_with("out_")) ++q;
    }
    if (header.size() != p + q + 3 || header[p + q] != "x" || header[p + q + 1] != "S" ||
        header[p + q + 2] != "m") {
        throw std::invalid_argument("dataset csv: unexpected header '" + line + "'");
    }

    Dataset ds;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size()) {
            throw std::invalid_argument("dataset csv: row has " + std::to_string(fields.size()) +
                                        " fields, expected " + std::to_string(header.size()));
        }
        Sample s;
        for (std::size_t c = 0; c < p; ++c) s.inputs.push_back(parse_double(fields[c]));
        for (std::size_t c = 0; c < q; ++c) s.outputs.push_back(parse_double(fields[p + c]));
        const BoolConfig x = BoolConfig::from_bits(fields[p + q]);
        if (ds.n == 0) ds.n = x.size();
        if (x.size() != ds.n) throw std::invalid_argument("dataset csv: mixed component counts");
        s.provenance.x = x;
        s.provenance.strategy = Strategy::parse(fields[p + q + 1], ds.n);
        s.provenance.m = static_cast<std::size_t>(parse_double(fields[p + q + 2]));
        ds.k = std::max(ds.k, static_cast<unsigned>(s.provenance.strategy.length()));
        ds.samples.push_back(std::move(s));
    }
    if (ds.samples.empty()) throw std::invalid_argument("dataset csv: no samples");

    if (scheme) {
        ds.scheme = *scheme;
    } else if (p == ds.n + 2 && q == ds.n + 1) {
        ds.scheme = Scheme::Boolean;
    } else if (p == 3 && q == 2) {
        ds.scheme = Scheme::Gray;
    } else {
        throw std::invalid_argument("dataset csv: cannot infer coding scheme from layout");
    }
    if (p != ds.input_count() || q != ds.output_count()) {
        throw std::invalid_argument("dataset csv: column layout does not match scheme " +
                                    std::string(scheme_name(ds.scheme)));
    }
    ds.scaling = column_scaling(ds.samples);
    return ds;
}

}  // namespace chaosnet
