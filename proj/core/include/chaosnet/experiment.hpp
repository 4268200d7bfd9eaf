#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "chaosnet/dataset.hpp"
#include "chaosnet/evaluation.hpp"

namespace chaosnet {

struct ExperimentConfig {
    /// Builtin map names or map file paths.
    std::vector<std::string> maps{"paper_f", "paper_g"};
    /// Size used for f0/f1 names without an explicit ":N".
    unsigned n = 4;
    unsigned k = 3;
    std::vector<Scheme> schemes{Scheme::Boolean, Scheme::Gray};
    std::vector<std::size_t> hidden{25};
    std::vector<std::size_t> epochs{500};
    std::size_t repetitions = 10;
    std::uint64_t seed = 1;
    std::filesystem::path output_dir = "results";
    /// Worker threads; 0 picks the hardware concurrency.
    std::size_t threads = 0;
    /// Write prediction series for the first repetition of every cell.
    bool series = false;
};

/// Flat key=value lines; '#' starts a comment. Lists are comma separated.
/// Keys: maps, n, k, schemes, hidden, epochs, repetitions, seed,
/// output_dir, threads, series.
[[nodiscard]] ExperimentConfig parse_experiment_config(std::istream& in);
[[nodiscard]] ExperimentConfig read_experiment_config(const std::filesystem::path& path);

/// One (map, scheme, hidden, epochs) combination.
struct CellSpec {
    std::string map_name;
    Scheme scheme = Scheme::Boolean;
    std::size_t hidden = 25;
    std::size_t epochs = 500;
};

/// Seed of repetition r of a cell.
[[nodiscard]] std::uint64_t repetition_seed(std::uint64_t master, const CellSpec& cell,
                                            std::size_t repetition);

/// Trained predictor of one repetition plus the rows it was tested on.
struct RepetitionResult {
    std::optional<SuccessReport> report;  ///< empty when training failed
    std::string error;
    Predictor predictor;
    /// One model per output group: a single network, or one per column for GraySplit.
    std::vector<std::shared_ptr<const MlpModel>> models;
    std::vector<std::size_t> test_rows;
};

/// Splits, trains and evaluates one repetition. GraySplit trains one
/// single-output network per output column on a shared split.
[[nodiscard]] RepetitionResult run_repetition(const Dataset& ds, const CellSpec& cell,
                                              std::uint64_t seed);

struct CellOutcome {
    CellSpec cell;
    AggregateReport report;   ///< over successful repetitions only
    std::size_t failures = 0;
    std::vector<RepetitionResult> runs;
};

/// Runs `repetitions` independent repetitions of a cell on up to `threads` workers.
[[nodiscard]] CellOutcome run_cell(const Dataset& ds, const CellSpec& cell,
                                   std::size_t repetitions, std::uint64_t master_seed,
                                   std::size_t threads = 0);

struct ResultRow {
    std::string function;
    bool chaotic = false;
    Scheme scheme = Scheme::Boolean;
    std::size_t hidden = 0;
    std::size_t epochs = 0;
    std::string output;
    double mean_rate = 0.0;
    double std_dev = 0.0;
    std::size_t repetitions = 0;
    std::size_t failures = 0;
};

/// Rows in table order: per-output rates, the joint configuration rate,
/// then the strategy rate.
[[nodiscard]] std::vector<ResultRow> result_rows(const CellOutcome& outcome, bool chaotic);

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows);

/// CSV index,expected,predicted of the configuration output on `rows`;
/// optionally an SVG scatter of both series next to it (same stem, .svg).
void emit_prediction_series(const Predictor& predict, const Dataset& ds,
                            std::span<const std::size_t> rows, const std::filesystem::path& path,
                            bool svg = false);

/// Full matrix: certifies every map, builds datasets, trains, evaluates and
/// writes <output_dir>/results.csv (plus series files when enabled).
/// Returns the rows written. Progress and warnings go to `log` when given.
std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg, std::ostream* log = nullptr);

}  // namespace chaosnet
