#include "chaosnet/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "chaosnet/iteration_graph.hpp"
#include "chaosnet/map_io.hpp"
#include "chaosnet/seeding.hpp"

namespace chaosnet {

// Config file

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(std::string_view s) {
    std::vector<std::string> items;
    while (true) {
        const auto comma = s.find(',');
        std::string item = trim(s.substr(0, comma));
        if (!item.empty()) items.push_back(std::move(item));
        if (comma == std::string_view::npos) break;
        s.remove_prefix(comma + 1);
    }
    return items;
}

template <typename T>
T parse_unsigned(const std::string& key, const std::string& value) {
    T out{};
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw std::invalid_argument("config: key '" + key + "' expects a non-negative integer, got '" +
                                    value + "'");
    }
    return out;
}

template <typename T>
std::vector<T> parse_unsigned_list(const std::string& key, const std::string& value) {
    std::vector<T> out;
    for (const auto& item : split_list(value)) out.push_back(parse_unsigned<T>(key, item));
    if (out.empty()) throw std::invalid_argument("config: key '" + key + "' needs at least one value");
    return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw std::invalid_argument("config: key '" + key + "' expects true/false");
}

}  // namespace

ExperimentConfig parse_experiment_config(std::istream& in) {
    ExperimentConfig cfg;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string text = trim(line);
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": expected key=value");
        }
        const std::string key = trim(std::string_view(text).substr(0, eq));
        const std::string value = trim(std::string_view(text).substr(eq + 1));

        if (key == "maps") {
            cfg.maps = split_list(value);
        } else if (key == "n") {
            cfg.n = parse_unsigned<unsigned>(key, value);
        } else if (key == "k") {
            cfg.k = parse_unsigned<unsigned>(key, value);
        } else if (key == "schemes") {
            cfg.schemes.clear();
            for (const auto& item : split_list(value)) cfg.schemes.push_back(parse_scheme(item));
        } else if (key == "hidden") {
            cfg.hidden = parse_unsigned_list<std::size_t>(key, value);
        } else if (key == "epochs") {
            cfg.epochs = parse_unsigned_list<std::size_t>(key, value);
        } else if (key == "repetitions") {
            cfg.repetitions = parse_unsigned<std::size_t>(key, value);
        } else if (key == "seed") {
            cfg.seed = parse_unsigned<std::uint64_t>(key, value);
        } else if (key == "output_dir") {
            cfg.output_dir = value;
        } else if (key == "threads") {
            cfg.threads = parse_unsigned<std::size_t>(key, value);
        } else if (key == "series") {
            cfg.series = parse_bool(key, value);
        } else {
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": unknown key '" + key + "'");
        }
    }
    if (cfg.maps.empty()) throw std::invalid_argument("config: no maps given");
    if (cfg.schemes.empty()) throw std::invalid_argument("config: no schemes given");
    if (cfg.repetitions < 1) throw std::invalid_argument("config: repetitions must be >= 1");
    for (auto e : cfg.epochs) {
        if (e < 1) throw std::invalid_argument("config: epochs must be >= 1");
    }
    for (auto h : cfg.hidden) {
        if (h < 1) throw std::invalid_argument("config: hidden sizes must be >= 1");
    }
    return cfg;
}

ExperimentConfig read_experiment_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path.string());
    return parse_experiment_config(in);
}

// Training matrix

namespace {

/// Runs fn(0..count-1) on up to `threads` workers.
template <typename Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn&& fn) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, count);
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace

std::uint64_t repetition_seed(std::uint64_t master, const CellSpec& cell, std::size_t repetition) {
    return derive_seed(master, hash_string(cell.map_name), hash_string(scheme_name(cell.scheme)),
                       cell.hidden, cell.epochs, repetition);
}

RepetitionResult run_repetition(const Dataset& ds, const CellSpec& cell, std::uint64_t seed) {
    RepetitionResult result;
    try {
        const Split split = split_dataset(ds, derive_seed(seed, 0));
        result.test_rows = split.test;

        TrainConfig cfg;
        cfg.hidden = cell.hidden;
        cfg.max_epochs = cell.epochs;

        auto& models = result.models;
        auto train_one = [&](std::optional<std::size_t> column, std::uint64_t init_seed) {
            const TrainingSet train = make_training_set(ds, split.train, column);
            const TrainingSet validation = make_training_set(ds, split.validation, column);
            cfg.seed = init_seed;
            MlpModel model = init_model({ds.input_count(), cell.hidden, train.outputs}, init_seed);
            model.scaling = ds.scaling;
            models.push_back(std::make_shared<const MlpModel>(
                lbfgs_train(std::move(model), train, validation, cfg)));
        };

        if (cell.scheme == Scheme::GraySplit) {
            for (std::size_t c = 0; c < ds.output_count(); ++c) train_one(c, derive_seed(seed, 1 + c));
        } else {
            train_one(std::nullopt, derive_seed(seed, 1));
        }

        result.predictor = [models = result.models](std::span<const double> raw) {
            std::vector<double> out;
            for (const auto& m : models) {
                const auto part = m->predict(raw);
                out.insert(out.end(), part.begin(), part.end());
            }
            return out;
        };
        result.report = evaluate_success(result.predictor, ds, split.test);
    } catch (const std::exception& e) {
        result.report.reset();
        result.models.clear();
        result.error = e.what();
    }
    return result;
}

namespace {

CellOutcome collect(const CellSpec& cell, std::vector<RepetitionResult> runs) {
    CellOutcome outcome;
    outcome.cell = cell;
    std::vector<SuccessReport> ok;
    for (const auto& r : runs) {
        if (r.report) {
            ok.push_back(*r.report);
        } else {
            ++outcome.failures;
        }
    }
    outcome.report = aggregate(ok);
    outcome.runs = std::move(runs);
    return outcome;
}

}  // namespace

CellOutcome run_cell(const Dataset& ds, const CellSpec& cell, std::size_t repetitions,
                     std::uint64_t master_seed, std::size_t threads) {
    std::vector<RepetitionResult> runs(repetitions);
    parallel_for(repetitions, threads, [&](std::size_t r) {
        runs[r] = run_repetition(ds, cell, repetition_seed(master_seed, cell, r));
    });
    return collect(cell, std::move(runs));
}

std::vector<ResultRow> result_rows(const CellOutcome& outcome, bool chaotic) {
    std::vector<ResultRow> rows;
    auto add = [&](const RateSummary& s, const std::string& name) {
        ResultRow row;
        row.function = outcome.cell.map_name;
        row.chaotic = chaotic;
        row.scheme = outcome.cell.scheme;
        row.hidden = outcome.cell.hidden;
        row.epochs = outcome.cell.epochs;
        row.output = name;
        row.mean_rate = s.mean;
        row.std_dev = s.stddev;
        row.repetitions = outcome.report.repetitions;
        row.failures = outcome.failures;
        rows.push_back(std::move(row));
    };
    const auto& outputs = outcome.report.outputs;
    for (const auto& o : outputs) {
        if (o.name == "strategy" || o.name == "config") continue;
        add(o, o.name);
    }
    add(outcome.report.config, "config");
    for (const auto& o : outputs) {
        if (o.name == "strategy") add(o, o.name);
    }
    return rows;
}

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
    out << "function,verdict,scheme,hidden,epochs,output,mean_rate,std_dev,repetitions,failures\n";
    std::ostringstream fmt;
    fmt << std::fixed << std::setprecision(4);
    for (const auto& r : rows) {
        fmt.str("");
        fmt << r.function << ',' << (r.chaotic ? "chaotic" : "not_chaotic") << ','
            << scheme_name(r.scheme) << ',' << r.hidden << ',' << r.epochs << ',' << r.output
            << ',' << r.mean_rate << ',' << r.std_dev << ',' << r.repetitions << ','
            << r.failures << '\n';
        out << fmt.str();
    }
}

void emit_prediction_series(const Predictor& predict, const Dataset& ds,
                            std::span<const std::size_t> rows, const std::filesystem::path& path,
                            bool svg) {
    if (rows.empty()) throw std::invalid_argument("emit_prediction_series: empty test set");
    std::vector<double> expected;
    std::vector<double> predicted;
    for (std::size_t r : rows) {
        const Sample& s = ds.samples.at(r);
        const auto out = predict(s.inputs);
        if (ds.scheme == Scheme::Boolean) {
            // Configuration value v(x) of the target bits and of the thresholded prediction.
            double e = 0.0;
            double p = 0.0;
            for (unsigned i = 0; i < ds.n; ++i) {
                e = 2.0 * e + (s.outputs[i] >= 0.5 ? 1.0 : 0.0);
                p = 2.0 * p + (out.at(i) >= 0.5 ? 1.0 : 0.0);
            }
            expected.push_back(e);
            predicted.push_back(p);
        } else {
            expected.push_back(s.outputs[0]);
            predicted.push_back(out.at(0));
        }
    }

    std::ofstream csv(path);
    if (!csv) throw std::runtime_error("cannot write prediction series " + path.string());
    csv << "index,expected,predicted\n";
    char buf[64];
    for (std::size_t i = 0; i < expected.size(); ++i) {
        csv << i << ',';
        auto res = std::to_chars(buf, buf + sizeof buf, expected[i]);
        csv.write(buf, res.ptr - buf);
        csv << ',';
        res = std::to_chars(buf, buf + sizeof buf, predicted[i]);
        csv.write(buf, res.ptr - buf);
        csv << '\n';
    }
    if (!csv) throw std::runtime_error("failed writing " + path.string());

    if (!svg) return;
    auto svg_path = path;
    svg_path.replace_extension(".svg");
    std::ofstream out(svg_path);
    if (!out) throw std::runtime_error("cannot write " + svg_path.string());
    const double width = 800.0;
    const double height = 400.0;
    const double margin = 30.0;
    double lo = std::min(*std::min_element(expected.begin(), expected.end()),
                         *std::min_element(predicted.begin(), predicted.end()));
    double hi = std::max(*std::max_element(expected.begin(), expected.end()),
                         *std::max_element(predicted.begin(), predicted.end()));
    if (!std::isfinite(lo) || !std::isfinite(hi)) lo = 0.0, hi = 1.0;
    if (hi <= lo) hi = lo + 1.0;
    const auto count = static_cast<double>(std::max<std::size_t>(expected.size() - 1, 1));
    auto px = [&](std::size_t i) { return margin + (width - 2 * margin) * double(i) / count; };
    auto py = [&](double v) { return height - margin - (height - 2 * margin) * (v - lo) / (hi - lo); };
    out << std::fixed << std::setprecision(2);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (std::size_t i = 0; i < expected.size(); ++i) {
        out << "<circle cx=\"" << px(i) << "\" cy=\"" << py(expected[i])
            << "\" r=\"2\" fill=\"steelblue\"/>\n";
        if (std::isfinite(predicted[i])) {
            out << "<circle cx=\"" << px(i) << "\" cy=\"" << py(predicted[i])
                << "\" r=\"2\" fill=\"firebrick\"/>\n";
        }
    }
    out << "<text x=\"" << margin << "\" y=\"20\" font-size=\"12\">expected (blue) / predicted (red)</text>\n";
    out << "</svg>\n";
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg, std::ostream* log) {
    if (cfg.repetitions < 1) throw std::invalid_argument("experiment: repetitions must be >= 1");

    // Validate every map before any training starts.
    std::map<std::string, BooleanMap> maps;
    std::map<std::string, bool> verdicts;
    for (const auto& name : cfg.maps) {
        BooleanMap f = load_map(name, cfg.n);
        verdicts.emplace(name, certify_chaos(f).chaotic);
        maps.emplace(name, std::move(f));
    }

    std::filesystem::create_directories(cfg.output_dir);
    const auto results_path = cfg.output_dir / "results.csv";
    std::ofstream results(results_path);
    if (!results) throw std::runtime_error("cannot write " + results_path.string());

    // Datasets per (map, scheme); GraySplit shares the Gray layout.
    std::map<std::pair<std::string, Scheme>, Dataset> datasets;
    for (const auto& [name, f] : maps) {
        for (Scheme s : cfg.schemes) datasets.emplace(std::pair{name, s}, enumerate_dataset(f, cfg.k, s));
    }

    std::vector<CellSpec> cells;
    for (const auto& [name, f] : maps) {
        for (Scheme s : cfg.schemes) {
            for (auto h : cfg.hidden) {
                for (auto e : cfg.epochs) cells.push_back({name, s, h, e});
            }
        }
    }
    std::sort(cells.begin(), cells.end(), [](const CellSpec& a, const CellSpec& b) {
        return std::tie(a.map_name, a.scheme, a.hidden, a.epochs) <
               std::tie(b.map_name, b.scheme, b.hidden, b.epochs);
    });

    const std::size_t reps = cfg.repetitions;
    std::vector<RepetitionResult> runs(cells.size() * reps);
    std::mutex log_mutex;
    std::atomic<std::size_t> done{0};
    parallel_for(runs.size(), cfg.threads, [&](std::size_t job) {
        const CellSpec& cell = cells[job / reps];
        const Dataset& ds = datasets.at({cell.map_name, cell.scheme});
        runs[job] = run_repetition(ds, cell, repetition_seed(cfg.seed, cell, job % reps));
        const std::size_t finished = ++done;
        if (log) {
            std::lock_guard lock(log_mutex);
            *log << "[" << finished << "/" << runs.size() << "] " << cell.map_name << " scheme "
                 << scheme_name(cell.scheme) << " hidden " << cell.hidden << " epochs "
                 << cell.epochs << " rep " << job % reps
                 << (runs[job].report ? "" : " FAILED: " + runs[job].error) << '\n';
        }
    });

    std::vector<ResultRow> rows;
    for (std::size_t c = 0; c < cells.size(); ++c) {
        const CellSpec& cell = cells[c];
        std::vector<RepetitionResult> cell_runs(std::make_move_iterator(runs.begin() + c * reps),
                                                std::make_move_iterator(runs.begin() + (c + 1) * reps));
        CellOutcome outcome = collect(cell, std::move(cell_runs));
        if (outcome.failures > 0 && log) {
            *log << "warning: " << outcome.failures << " of " << reps << " repetitions failed for "
                 << cell.map_name << " scheme " << scheme_name(cell.scheme) << " hidden "
                 << cell.hidden << " epochs " << cell.epochs << '\n';
        }
        if (cfg.series && outcome.runs.front().report) {
            const auto& first = outcome.runs.front();
            std::ostringstream stem;
            stem << "series_" << cell.map_name << "_s" << scheme_name(cell.scheme) << "_h"
                 << cell.hidden << "_e" << cell.epochs << ".csv";
            std::string file = stem.str();
            std::replace_if(file.begin(), file.end(),
                            [](char ch) { return ch == '/' || ch == ':' || ch == '\\'; }, '_');
            emit_prediction_series(first.predictor, datasets.at({cell.map_name, cell.scheme}),
                                   first.test_rows, cfg.output_dir / file, true);
        }
        auto cell_rows = result_rows(outcome, verdicts.at(cell.map_name));
        rows.insert(rows.end(), cell_rows.begin(), cell_rows.end());
    }

    write_results_csv(results, rows);
    if (!results) throw std::runtime_error("failed writing " + results_path.string());
    return rows;
}

}  // namespace chaosnet
