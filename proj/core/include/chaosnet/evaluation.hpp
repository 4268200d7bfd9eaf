#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chaosnet/dataset.hpp"
#include "chaosnet/mlp.hpp"

namespace chaosnet {

/// Maps raw (unscaled) dataset inputs to one prediction per output column.
using Predictor = std::function<std::vector<double>(std::span<const double>)>;

/// Bits are correct when the prediction lands on the target's side of 0.5;
/// codes when the prediction rounded and clamped to [lo, hi] equals the target.
[[nodiscard]] bool output_correct(const OutputSpec& spec, double prediction, double target);

struct OutputRate {
    std::string name;
    double rate = 0.0;  // percent
};

struct SuccessReport {
    std::vector<OutputRate> outputs;
    /// Percentage of samples whose configuration outputs are all correct.
    double config_rate = 0.0;
    std::size_t samples = 0;
};

[[nodiscard]] SuccessReport evaluate_success(const Predictor& predict, const Dataset& ds,
                                             std::span<const std::size_t> rows);
[[nodiscard]] SuccessReport evaluate_success(const MlpModel& model, const Dataset& ds,
                                             std::span<const std::size_t> rows);

/// Rows of `ds` with inputs scaled by ds.scaling. With `output_column` set,
/// only that target column is kept (one network per output).
[[nodiscard]] TrainingSet make_training_set(const Dataset& ds, std::span<const std::size_t> rows,
                                            std::optional<std::size_t> output_column = std::nullopt);

struct RateSummary {
    std::string name;
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation, 0 for a single run
};

struct AggregateReport {
    std::vector<RateSummary> outputs;
    RateSummary config;
    std::size_t repetitions = 0;
};

[[nodiscard]] AggregateReport aggregate(std::span<const SuccessReport> runs);

}  // namespace chaosnet
