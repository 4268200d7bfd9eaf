#include <doctest.h>

#include <numeric>
#include <stdexcept>

#include "chaosnet/evaluation.hpp"

using namespace chaosnet;

namespace {

std::vector<std::size_t> all_rows(const Dataset& ds) {
    std::vector<std::size_t> rows(ds.samples.size());
    std::iota(rows.begin(), rows.end(), 0);
    return rows;
}

Predictor lookup(const Dataset& ds) {
    return [&ds](std::span<const double> in) {
        for (const auto& s : ds.samples) {
            if (std::equal(in.begin(), in.end(), s.inputs.begin(), s.inputs.end())) return s.outputs;
        }
        throw std::logic_error("unknown input");
    };
}

}  // namespace

TEST_CASE("output_correct") {
    const OutputSpec bit{"output_1", OutputKind::Bit, 0, 1};
    CHECK(output_correct(bit, 0.49, 0.0));
    CHECK_FALSE(output_correct(bit, 0.51, 0.0));
    CHECK(output_correct(bit, 0.51, 1.0));
    CHECK(output_correct(bit, -3.0, 0.0));
    CHECK(output_correct(bit, 7.0, 1.0));

    const OutputSpec code{"strategy", OutputKind::StrategyCode, 1, 24};
    CHECK(output_correct(code, 6.6, 7.0));
    CHECK_FALSE(output_correct(code, 7.6, 7.0));
    CHECK(output_correct(code, -5.0, 1.0));   // clamped to lo
    CHECK(output_correct(code, 99.0, 24.0));  // clamped to hi
}

TEST_CASE("perfect predictor scores 100") {
    for (Scheme scheme : {Scheme::Boolean, Scheme::Gray}) {
        const auto ds = enumerate_dataset(maps::example_g(), 2, scheme);
        const auto report = evaluate_success(lookup(ds), ds, all_rows(ds));
        CHECK(report.samples == ds.samples.size());
        for (const auto& r : report.outputs) CHECK(r.rate == 100.0);
        CHECK(report.config_rate == 100.0);
    }
}

TEST_CASE("constant-zero predictor matches the zero-target fraction") {
    const auto ds = enumerate_dataset(maps::example_f(), 3, Scheme::Boolean);
    const auto rows = all_rows(ds);
    const Predictor zero = [](std::span<const double>) { return std::vector<double>(5, 0.0); };
    const auto report = evaluate_success(zero, ds, rows);
    REQUIRE(report.outputs.size() == 5);
    std::size_t all_zero = 0;
    for (std::size_t j = 0; j < 4; ++j) {
        std::size_t zeros = 0;
        for (const auto& s : ds.samples) zeros += s.outputs[j] == 0.0;
        CHECK(report.outputs[j].rate == doctest::Approx(100.0 * double(zeros) / double(ds.samples.size())));
    }
    for (const auto& s : ds.samples) {
        all_zero += s.outputs[0] == 0 && s.outputs[1] == 0 && s.outputs[2] == 0 && s.outputs[3] == 0;
    }
    CHECK(report.config_rate == doctest::Approx(100.0 * double(all_zero) / double(ds.samples.size())));
    // Strategy codes start at 1, so 0 is clamped up and hits exactly the code-1 targets.
    std::size_t ones = 0;
    for (const auto& s : ds.samples) ones += s.outputs[4] == 1.0;
    CHECK(report.outputs[4].rate == doctest::Approx(100.0 * double(ones) / double(ds.samples.size())));
}

TEST_CASE("joint rate never exceeds a per-bit rate") {
    const auto ds = enumerate_dataset(maps::example_g(), 3, Scheme::Boolean);
    const auto rows = all_rows(ds);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto model = init_model(MlpDims{6, 5, 5}, seed);
        auto scaled = model;
        scaled.scaling = ds.scaling;
        const auto report = evaluate_success(scaled, ds, rows);
        for (std::size_t j = 0; j < 4; ++j) CHECK(report.config_rate <= report.outputs[j].rate);
        for (const auto& r : report.outputs) {
            CHECK(r.rate >= 0.0);
            CHECK(r.rate <= 100.0);
        }
    }
}

TEST_CASE("make_training_set scales inputs") {
    const auto ds = enumerate_dataset(maps::example_g(), 3, Scheme::Gray);
    const std::vector<std::size_t> rows{0, 5, 100};
    const auto set = make_training_set(ds, rows);
    CHECK(set.rows == 3);
    CHECK(set.inputs == 3);
    CHECK(set.outputs == 2);
    CHECK(set.target_row(1)[0] == ds.samples[5].outputs[0]);
    const auto scaled = ds.scaling.apply(ds.samples[100].inputs);
    CHECK(std::equal(scaled.begin(), scaled.end(), set.input_row(2).begin()));

    const auto single = make_training_set(ds, rows, 1);
    CHECK(single.outputs == 1);
    CHECK(single.target_row(2)[0] == ds.samples[100].outputs[1]);
    CHECK_THROWS_AS((void)make_training_set(ds, rows, 2), std::invalid_argument);
}

TEST_CASE("aggregate uses the sample standard deviation") {
    SuccessReport a{{{"config", 50.0}, {"strategy", 10.0}}, 50.0, 4};
    SuccessReport b{{{"config", 70.0}, {"strategy", 10.0}}, 70.0, 4};
    SuccessReport c{{{"config", 60.0}, {"strategy", 10.0}}, 60.0, 4};
    const std::vector runs{a, b, c};
    const auto agg = aggregate(runs);
    CHECK(agg.repetitions == 3);
    REQUIRE(agg.outputs.size() == 2);
    CHECK(agg.outputs[0].name == "config");
    CHECK(agg.outputs[0].mean == doctest::Approx(60.0));
    CHECK(agg.outputs[0].stddev == doctest::Approx(10.0));
    CHECK(agg.outputs[1].stddev == 0.0);
    CHECK(agg.config.mean == doctest::Approx(60.0));

    const std::vector single{a};
    CHECK(aggregate(single).outputs[0].stddev == 0.0);
    CHECK_THROWS_AS((void)evaluate_success([](std::span<const double>) { return std::vector<double>{}; },
                                           enumerate_dataset(maps::example_g(), 2, Scheme::Gray),
                                           std::vector<std::size_t>{}),
                    std::invalid_argument);
}
