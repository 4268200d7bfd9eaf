#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "chaosnet/mlp.hpp"
#include "oracles.hpp"

using namespace chaosnet;

namespace {

TrainingSet random_batch(std::mt19937_64& rng, std::size_t rows, std::size_t p, std::size_t q) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    TrainingSet set{.rows = 0, .inputs = p, .outputs = q, .x = {}, .y = {}};
    std::vector<double> in(p);
    std::vector<double> out(q);
    for (std::size_t r = 0; r < rows; ++r) {
        for (auto& v : in) v = gauss(rng);
        for (auto& v : out) v = 2.0 * gauss(rng);
        set.append(in, out);
    }
    return set;
}

TrainingSet xor_set() {
    TrainingSet set{.rows = 0, .inputs = 2, .outputs = 1, .x = {}, .y = {}};
    for (int a = 0; a <= 1; ++a) {
        for (int b = 0; b <= 1; ++b) {
            const std::vector<double> in{double(a), double(b)};
            const std::vector<double> out{double(a ^ b)};
            set.append(in, out);
        }
    }
    return set;
}

}  // namespace

TEST_CASE("init_model") {
    const MlpDims dims{3, 10, 2};
    CHECK(dims.parameter_count() == 62);
    const auto a = init_model(dims, 5);
    const auto b = init_model(dims, 5);
    const auto c = init_model(dims, 6);
    CHECK(a.parameters.size() == 62);
    CHECK(a.parameters == b.parameters);
    CHECK(a.parameters != c.parameters);
    // Hidden weights within 1/sqrt(3), biases zero.
    for (std::size_t i = 0; i < 30; ++i) CHECK(std::abs(a.parameters[i]) <= 1.0 / std::sqrt(3.0));
    for (std::size_t i = 30; i < 40; ++i) CHECK(a.parameters[i] == 0.0);
    for (std::size_t i = 40; i < 60; ++i) CHECK(std::abs(a.parameters[i]) <= 1.0 / std::sqrt(10.0));
    CHECK(a.parameters[60] == 0.0);
    CHECK(a.parameters[61] == 0.0);
    CHECK_THROWS_AS((void)init_model(MlpDims{0, 3, 1}, 1), std::invalid_argument);
}

TEST_CASE("forward") {
    auto model = init_model(MlpDims{3, 4, 2}, 1);
    std::fill(model.parameters.begin(), model.parameters.end(), 0.0);
    const std::vector<double> in{0.3, -1.0, 2.0};
    CHECK(forward(model, in) == std::vector<double>{0.0, 0.0});

    // Hidden layer silent: every unit outputs sigmoid(0) = 0.5.
    const std::size_t w2 = 3 * 4 + 4;
    for (std::size_t i = 0; i < 8; ++i) model.parameters[w2 + i] = double(i + 1);
    model.parameters[w2 + 8] = 0.25;
    model.parameters[w2 + 9] = -1.0;
    const auto out = forward(model, in);
    CHECK(out[0] == doctest::Approx(0.5 * (1 + 2 + 3 + 4) + 0.25));
    CHECK(out[1] == doctest::Approx(0.5 * (5 + 6 + 7 + 8) - 1.0));

    CHECK_THROWS_AS((void)forward(model, std::vector<double>{1.0}), std::invalid_argument);

    const auto random = init_model(MlpDims{6, 25, 5}, 9);
    for (double v : forward(random, std::vector<double>(6, 1e3))) CHECK(std::isfinite(v));
}

TEST_CASE("analytic gradient matches central differences") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 20; ++trial) {
        const MlpDims dims{1 + std::size_t(trial % 6), 2 + std::size_t(trial % 7), 1 + std::size_t(trial % 5)};
        auto model = init_model(dims, 100 + trial);
        std::normal_distribution<double> gauss(0.0, 0.5);
        for (auto& v : model.parameters) v += gauss(rng);
        const auto batch = random_batch(rng, 5 + trial, dims.inputs, dims.outputs);

        const auto [value, analytic] = loss_and_gradient(model, batch);
        CHECK(value == doctest::Approx(loss(dims, model.parameters, batch)));
        const auto numeric = oracle::central_differences(
            [&](std::span<const double> p) { return loss(dims, p, batch); }, model.parameters);
        double worst = 0.0;
        for (std::size_t i = 0; i < analytic.size(); ++i) {
            const double scale = std::max({std::abs(analytic[i]), std::abs(numeric[i]), 1e-3});
            worst = std::max(worst, std::abs(analytic[i] - numeric[i]) / scale);
        }
        CAPTURE(trial);
        CHECK(worst < 1e-5);
    }
}

TEST_CASE("loss") {
    std::mt19937_64 rng(2);
    const MlpDims dims{3, 5, 2};
    const auto model = init_model(dims, 4);
    auto batch = random_batch(rng, 10, 3, 2);

    // Targets equal to the model's own outputs: zero loss and gradient.
    TrainingSet own = batch;
    for (std::size_t r = 0; r < own.rows; ++r) {
        const auto out = forward(model, own.input_row(r));
        std::copy(out.begin(), out.end(), own.y.begin() + std::ptrdiff_t(r * 2));
    }
    const auto [zero, grad] = loss_and_gradient(model, own);
    CHECK(zero == doctest::Approx(0.0).epsilon(1e-15));
    for (double g : grad) CHECK(std::abs(g) < 1e-14);

    // Doubling every residual quadruples the loss.
    TrainingSet doubled = own;
    for (std::size_t i = 0; i < doubled.y.size(); ++i) {
        doubled.y[i] = own.y[i] + 2.0 * (batch.y[i] - own.y[i]);
    }
    CHECK(loss(dims, model.parameters, doubled) ==
          doctest::Approx(4.0 * loss(dims, model.parameters, batch)));

    CHECK_THROWS_AS((void)loss(MlpDims{3, 5, 1}, model.parameters, batch), std::invalid_argument);
}

TEST_CASE("XOR training") {
    const auto set = xor_set();
    int solved = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto model = lbfgs_train(init_model(MlpDims{2, 4, 1}, seed), set, set,
                                       TrainConfig{.max_epochs = 500, .hidden = 4});
        REQUIRE_FALSE(model.history.empty());
        CHECK(model.history.size() <= 500);
        const double final_loss = loss(model.dims, model.parameters, set);
        CHECK(final_loss <= model.history.front().train_loss);
        for (std::size_t i = 1; i < model.history.size(); ++i) {
            CHECK(model.history[i].train_loss <= model.history[i - 1].train_loss);
            CHECK(model.history[i].epoch == i + 1);
        }
        if (final_loss < 1e-3) ++solved;
    }
    CHECK(solved >= 8);
}

TEST_CASE("training is reproducible and validation is passive") {
    std::mt19937_64 rng(21);
    const auto train = random_batch(rng, 40, 3, 2);
    const auto val_a = random_batch(rng, 10, 3, 2);
    const auto val_b = random_batch(rng, 10, 3, 2);
    const TrainConfig cfg{.max_epochs = 30, .hidden = 6};
    const auto a = lbfgs_train(init_model(MlpDims{3, 6, 2}, 7), train, val_a, cfg);
    const auto b = lbfgs_train(init_model(MlpDims{3, 6, 2}, 7), train, val_a, cfg);
    const auto c = lbfgs_train(init_model(MlpDims{3, 6, 2}, 7), train, val_b, cfg);
    CHECK(a.parameters == b.parameters);
    CHECK(a.parameters == c.parameters);
    REQUIRE(a.history.size() == c.history.size());
    CHECK(a.history.back().validation_loss != c.history.back().validation_loss);

    CHECK_THROWS_AS((void)lbfgs_train(init_model(MlpDims{3, 6, 2}, 7), train, val_a,
                                      TrainConfig{.max_epochs = 0}),
                    std::invalid_argument);
}

TEST_CASE("model file round trip") {
    auto model = init_model(MlpDims{6, 25, 5}, 3);
    model.scaling.min = {0, 0, 0, 0, 6, 1};
    model.scaling.max = {1, 1, 1, 1, 124, 2};
    std::stringstream buf;
    write_model(buf, model);
    CHECK(buf.str().rfind("chaosnet-mlp 1\ndims 6 25 5\nseed 3\n", 0) == 0);
    const auto back = read_model(buf);
    CHECK(back.dims == model.dims);
    CHECK(back.seed == 3);
    CHECK(back.parameters == model.parameters);
    CHECK(back.scaling.min == model.scaling.min);
    const std::vector<double> raw{1, 0, 1, 1, 7, 1};
    CHECK(back.predict(raw) == model.predict(raw));

    std::istringstream wrong_magic("other 1\n");
    CHECK_THROWS_AS((void)read_model(wrong_magic), std::invalid_argument);
    std::istringstream wrong_count("chaosnet-mlp 1\ndims 1 1 1\nseed 0\nscaling_min 0\nscaling_max 0\nparameters 2 0 0\n");
    CHECK_THROWS_AS((void)read_model(wrong_count), std::invalid_argument);
}

TEST_CASE("training log") {
    const auto set = xor_set();
    const auto model = lbfgs_train(init_model(MlpDims{2, 4, 1}, 1), set, set,
                                   TrainConfig{.max_epochs = 5, .hidden = 4});
    std::ostringstream out;
    write_training_log(out, model);
    std::istringstream lines(out.str());
    std::string line;
    std::getline(lines, line);
    CHECK(line == "epoch,train_loss,val_loss,step_kind");
    std::size_t rows = 0;
    while (std::getline(lines, line)) {
        ++rows;
        CHECK(line.rfind(std::to_string(rows) + ",", 0) == 0);
        CHECK((line.ends_with(",wolfe") || line.ends_with(",fallback")));
    }
    CHECK(rows == model.history.size());
}
