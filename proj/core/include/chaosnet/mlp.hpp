#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "chaosnet/lbfgs.hpp"
#include "chaosnet/scaling.hpp"

namespace chaosnet {

struct MlpDims {
    std::size_t inputs = 0;
    std::size_t hidden = 0;
    std::size_t outputs = 0;

    /// h*p + h + q*h + q.
    [[nodiscard]] std::size_t parameter_count() const noexcept {
        return hidden * inputs + hidden + outputs * hidden + outputs;
    }

    friend bool operator==(const MlpDims&, const MlpDims&) = default;
};

/// Dense row-major batch: `rows` samples of `inputs` features and `outputs` targets.
struct TrainingSet {
    std::size_t rows = 0;
    std::size_t inputs = 0;
    std::size_t outputs = 0;
    std::vector<double> x;
    std::vector<double> y;

    [[nodiscard]] std::span<const double> input_row(std::size_t r) const {
        return {x.data() + r * inputs, inputs};
    }
    [[nodiscard]] std::span<const double> target_row(std::size_t r) const {
        return {y.data() + r * outputs, outputs};
    }
    void append(std::span<const double> in, std::span<const double> out);
};

struct EpochRecord {
    std::size_t epoch = 0;
    double train_loss = 0.0;
    double validation_loss = 0.0;
    StepKind step_kind = StepKind::Wolfe;
};

/// One hidden layer of sigmoid units feeding linear outputs.
///
/// Parameters are stored flat: hidden weights (h x p, row-major), hidden
/// biases (h), output weights (q x h, row-major), output biases (q).
struct MlpModel {
    MlpDims dims;
    std::vector<double> parameters;
    std::uint64_t seed = 0;
    /// Applied by predict(); forward() takes already-scaled inputs.
    InputScaling scaling;
    std::vector<EpochRecord> history;

    /// Network output for a raw (unscaled) input vector.
    [[nodiscard]] std::vector<double> predict(std::span<const double> raw) const;
};

/// Weights uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)], biases zero.
[[nodiscard]] MlpModel init_model(const MlpDims& dims, std::uint64_t seed);

/// W2 * sigmoid(W1 * in + b1) + b2.
[[nodiscard]] std::vector<double> forward(const MlpModel& model, std::span<const double> input);

/// Mean squared error (1/2N) sum ||forward(x) - y||^2 and its gradient with
/// respect to the flat parameter vector.
double loss_and_gradient(const MlpDims& dims, std::span<const double> parameters,
                         const TrainingSet& batch, std::span<double> gradient);
[[nodiscard]] std::pair<double, std::vector<double>> loss_and_gradient(const MlpModel& model,
                                                                       const TrainingSet& batch);
[[nodiscard]] double loss(const MlpDims& dims, std::span<const double> parameters,
                          const TrainingSet& batch);

struct TrainConfig {
    std::size_t max_epochs = 500;
    std::size_t hidden = 25;
    std::size_t memory = 10;
    double c1 = 1e-4;
    double c2 = 0.9;
    double gradient_tolerance = 1e-8;
    std::uint64_t seed = 0;
};

/// Full-batch L-BFGS on the training set. The validation loss is recorded
/// in the history each epoch and never influences the parameters.
[[nodiscard]] MlpModel lbfgs_train(MlpModel model, const TrainingSet& train,
                                   const TrainingSet& validation, const TrainConfig& cfg);

/// Text model file, versioned ("chaosnet-mlp 1").
void write_model(std::ostream& out, const MlpModel& model);
[[nodiscard]] MlpModel read_model(std::istream& in);
void save_model(const std::filesystem::path& path, const MlpModel& model);
[[nodiscard]] MlpModel load_model(const std::filesystem::path& path);

/// CSV: epoch,train_loss,val_loss,step_kind.
void write_training_log(std::ostream& out, const MlpModel& model);

}  // namespace chaosnet
