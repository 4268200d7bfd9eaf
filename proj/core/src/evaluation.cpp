#include "chaosnet/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace chaosnet {

bool output_correct(const OutputSpec& spec, double prediction, double target) {
    if (spec.kind == OutputKind::Bit) return (prediction >= 0.5) == (target >= 0.5);
    if (!std::isfinite(prediction)) return false;
    const double value = std::clamp(std::round(prediction), spec.lo, spec.hi);
    return value == target;
}

SuccessReport evaluate_success(const Predictor& predict, const Dataset& ds,
                               std::span<const std::size_t> rows) {
    if (rows.empty()) throw std::invalid_argument("evaluate_success: empty test set");
    const auto specs = ds.output_specs();
    std::vector<std::size_t> correct(specs.size(), 0);
    std::size_t config_correct = 0;

    for (std::size_t r : rows) {
        const Sample& s = ds.samples.at(r);
        const auto out = predict(s.inputs);
        if (out.size() != specs.size()) {
            throw std::invalid_argument("evaluate_success: predictor returned " +
                                        std::to_string(out.size()) + " outputs, expected " +
                                        std::to_string(specs.size()));
        }
        bool config_ok = true;
        for (std::size_t c = 0; c < specs.size(); ++c) {
            const bool ok = output_correct(specs[c], out[c], s.outputs[c]);
            if (ok) ++correct[c];
            if (specs[c].kind != OutputKind::StrategyCode) config_ok = config_ok && ok;
        }
        if (config_ok) ++config_correct;
    }

    const auto total = static_cast<double>(rows.size());
    SuccessReport report;
    report.samples = rows.size();
    for (std::size_t c = 0; c < specs.size(); ++c) {
        report.outputs.push_back({specs[c].name, 100.0 * static_cast<double>(correct[c]) / total});
    }
    report.config_rate = 100.0 * static_cast<double>(config_correct) / total;
    return report;
}

SuccessReport evaluate_success(const MlpModel& model, const Dataset& ds,
                               std::span<const std::size_t> rows) {
    return evaluate_success([&](std::span<const double> raw) { return model.predict(raw); }, ds,
                            rows);
}

TrainingSet make_training_set(const Dataset& ds, std::span<const std::size_t> rows,
                              std::optional<std::size_t> output_column) {
    TrainingSet set;
    set.inputs = ds.input_count();
    set.outputs = output_column ? 1 : ds.output_count();
    if (output_column && *output_column >= ds.output_count()) {
        throw std::invalid_argument("make_training_set: output column out of range");
    }
    set.x.reserve(rows.size() * set.inputs);
    set.y.reserve(rows.size() * set.outputs);
    for (std::size_t r : rows) {
        const Sample& s = ds.samples.at(r);
        const auto scaled = ds.scaling.apply(s.inputs);
        if (output_column) {
            const double target = s.outputs[*output_column];
            set.append(scaled, std::span<const double>(&target, 1));
        } else {
            set.append(scaled, s.outputs);
        }
    }
    return set;
}

namespace {

RateSummary summarize(std::string name, const std::vector<double>& values) {
    RateSummary s;
    s.name = std::move(name);
    if (values.empty()) return s;
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double sq = 0.0;
        for (double v : values) sq += (v - s.mean) * (v - s.mean);
        s.stddev = std::sqrt(sq / static_cast<double>(values.size() - 1));
    }
    return s;
}

}  // namespace

AggregateReport aggregate(std::span<const SuccessReport> runs) {
    AggregateReport report;
    report.repetitions = runs.size();
    if (runs.empty()) return report;
    const std::size_t outputs = runs.front().outputs.size();
    for (std::size_t c = 0; c < outputs; ++c) {
        std::vector<double> values;
        for (const auto& run : runs) values.push_back(run.outputs.at(c).rate);
        report.outputs.push_back(summarize(runs.front().outputs[c].name, values));
    }
    std::vector<double> config;
    for (const auto& run : runs) config.push_back(run.config_rate);
    report.config = summarize("config", config);
    return report;
}

}  // namespace chaosnet
