#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "chaosnet/dataset.hpp"
#include "chaosnet/evaluation.hpp"
#include "chaosnet/experiment.hpp"
#include "chaosnet/iteration_graph.hpp"
#include "chaosnet/map_io.hpp"
#include "chaosnet/metric.hpp"
#include "chaosnet/mlp.hpp"
#include "chaosnet/network_bridge.hpp"

namespace fs = std::filesystem;
using namespace chaosnet;

namespace {

struct MapArgs {
    std::string map = "paper_f";
    unsigned n = 4;

    void add(CLI::App* cmd) {
        cmd->add_option("--map", map, "Builtin map (f0, f0:N, f1, f1:N, paper_f, paper_g) or map file")
            ->capture_default_str();
        cmd->add_option("--n", n, "Component count for f0/f1 without an explicit :N")
            ->capture_default_str();
    }
    [[nodiscard]] BooleanMap load() const { return load_map(map, n); }
};

std::ofstream open_output(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

void print_rate_table(std::ostream& out, const CellOutcome& outcome) {
    out << "output,mean_rate,std_dev,repetitions,failures\n";
    out << std::fixed << std::setprecision(4);
    auto row = [&](const RateSummary& s) {
        out << s.name << ',' << s.mean << ',' << s.stddev << ',' << outcome.report.repetitions << ','
            << outcome.failures << '\n';
    };
    for (const auto& o : outcome.report.outputs) {
        if (o.name != "strategy" && o.name != "config") row(o);
    }
    RateSummary config = outcome.report.config;
    config.name = "config";
    row(config);
    for (const auto& o : outcome.report.outputs) {
        if (o.name == "strategy") row(o);
    }
}

void print_equivalence(std::ostream& out, const EquivalenceReport& report) {
    out << "equivalence: " << report.mismatches << " of " << report.trials
        << " recurrent runs differ from the asynchronous iterations\n";
    if (report.first_mismatch) {
        const auto& m = *report.first_mismatch;
        out << "first mismatch: x0=" << m.x0.to_string() << " S=" << m.strategy.to_string()
            << " step=" << m.step << '\n';
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Chaos certification of Boolean asynchronous iterations and neural networks"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    // certify
    MapArgs certify_map;
    bool certify_json = false;
    auto* certify = app.add_subcommand("certify", "Decide strong connectivity of the iteration graph");
    certify_map.add(certify);
    certify->add_flag("--json", certify_json, "Print the certificate as JSON");

    // dataset
    MapArgs dataset_map;
    unsigned dataset_k = 3;
    std::string dataset_scheme = "1";
    fs::path dataset_out;
    auto* dataset = app.add_subcommand("dataset", "Enumerate the learning dataset as CSV");
    dataset_map.add(dataset);
    dataset->add_option("--k", dataset_k, "Longest strategy length")->capture_default_str();
    dataset->add_option("--scheme", dataset_scheme, "1 (Boolean), 2 (Gray) or 2-split")
        ->capture_default_str();
    dataset->add_option("--out", dataset_out, "Output CSV file")->required();

    // steer
    MapArgs steer_map;
    std::string steer_from;
    std::string steer_to;
    std::optional<std::size_t> steer_length;
    auto* steer_cmd = app.add_subcommand("steer", "Find a strategy word driving one configuration to another");
    steer_map.add(steer_cmd);
    steer_cmd->add_option("--from", steer_from, "Start configuration, x_1 first")->required();
    steer_cmd->add_option("--to", steer_to, "Target configuration")->required();
    steer_cmd->add_option("--length", steer_length, "Require a word of exactly this length");

    // probe
    MapArgs probe_map;
    std::string probe_mode = "separated";
    std::size_t probe_t = 8;
    double probe_epsilon = 0.05;
    std::size_t probe_sample = 200;
    std::size_t probe_horizon = kSampleWordLength;
    std::uint64_t probe_seed = 1;
    std::string probe_from;
    std::string probe_to;
    auto* probe = app.add_subcommand("probe", "Finite-scale topology probes");
    probe_map.add(probe);
    probe->add_option("--mode", probe_mode, "separated, expansivity or mixing")
        ->check(CLI::IsMember({"separated", "expansivity", "mixing"}))
        ->capture_default_str();
    probe->add_option("--t", probe_t, "Largest iterate horizon of the separated-set curve")
        ->capture_default_str();
    probe->add_option("--epsilon", probe_epsilon, "Separation threshold")->capture_default_str();
    probe->add_option("--sample", probe_sample, "Sampled points or expansivity trials")
        ->capture_default_str();
    probe->add_option("--horizon", probe_horizon,
                      "Strategy word length (separated, expansivity) or longest walk (mixing)")
        ->capture_default_str();
    probe->add_option("--seed", probe_seed, "Sampling seed")->capture_default_str();
    probe->add_option("--from", probe_from, "Mixing: start configuration");
    probe->add_option("--to", probe_to, "Mixing: target configuration");

    // train
    fs::path train_dataset;
    std::size_t train_hidden = 25;
    std::size_t train_epochs = 500;
    std::size_t train_reps = 10;
    std::uint64_t train_seed = 1;
    std::size_t train_threads = 0;
    std::optional<std::string> train_scheme;
    std::optional<fs::path> train_model_out;
    std::optional<fs::path> train_log;
    auto* train = app.add_subcommand("train", "Train and evaluate MLPs on a dataset CSV");
    train->add_option("--dataset", train_dataset, "Dataset CSV written by 'dataset'")->required();
    train->add_option("--hidden", train_hidden, "Hidden units")->capture_default_str();
    train->add_option("--epochs", train_epochs, "L-BFGS epochs")->capture_default_str();
    train->add_option("--reps", train_reps, "Repetitions (fresh split and init each)")
        ->capture_default_str();
    train->add_option("--seed", train_seed, "Master seed")->capture_default_str();
    train->add_option("--threads", train_threads, "Worker threads, 0 = all cores")
        ->capture_default_str();
    train->add_option("--scheme", train_scheme, "Override the inferred scheme (e.g. 2-split)");
    train->add_option("--model-out", train_model_out, "Save the first repetition's model");
    train->add_option("--log", train_log, "Training log CSV of the first repetition");

    // experiment
    fs::path experiment_config;
    bool experiment_quiet = false;
    auto* experiment = app.add_subcommand("experiment", "Run the full training matrix from a key=value config");
    experiment->add_option("--config", experiment_config, "Config file")->required();
    experiment->add_flag("--quiet", experiment_quiet, "No progress output");

    // network-train
    MapArgs net_map;
    TrainConfig net_cfg;
    net_cfg.hidden = 16;
    net_cfg.max_epochs = 1000;
    fs::path net_out;
    auto* net_train = app.add_subcommand("network-train", "Train an MLP realizing F_f and certify it");
    net_map.add(net_train);
    net_train->add_option("--hidden", net_cfg.hidden, "Hidden units")->capture_default_str();
    net_train->add_option("--epochs", net_cfg.max_epochs, "L-BFGS epochs")->capture_default_str();
    net_train->add_option("--seed", net_cfg.seed, "Initialization seed")->capture_default_str();
    net_train->add_option("--out", net_out, "Model file")->required();

    // network-check
    fs::path check_model;
    std::optional<std::string> check_against;
    unsigned check_n = 4;
    std::size_t check_trials = 1000;
    std::size_t check_horizon = 16;
    std::uint64_t check_seed = 1;
    bool check_json = false;
    auto* net_check = app.add_subcommand("network-check", "Certify a saved network and compare it with a map");
    net_check->add_option("--model", check_model, "Model file")->required();
    net_check->add_option("--n", check_n, "Component count of the network")->capture_default_str();
    net_check->add_option("--against", check_against,
                          "Map to compare recurrent runs with (default: the extracted map)");
    net_check->add_option("--trials", check_trials, "Random recurrent runs")->capture_default_str();
    net_check->add_option("--horizon", check_horizon, "Strategy length per run")->capture_default_str();
    net_check->add_option("--seed", check_seed, "Seed")->capture_default_str();
    net_check->add_flag("--json", check_json, "Print the certificate as JSON");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*certify) {
            const auto cert = certify_chaos(certify_map.load());
            std::cout << (certify_json ? certificate_json(cert) + "\n" : format_certificate(cert));
        } else if (*dataset) {
            const auto f = dataset_map.load();
            const auto ds = enumerate_dataset(f, dataset_k, parse_scheme(dataset_scheme));
            auto out = open_output(dataset_out);
            write_dataset_csv(out, ds);
            const auto count = count_pairs(f.size(), dataset_k);
            std::cerr << ds.samples.size() << " samples (omega = " << count.omega << ") written to "
                      << dataset_out.string() << '\n';
        } else if (*steer_cmd) {
            const auto f = steer_map.load();
            const IterationGraph graph(f);
            const auto x = BoolConfig::from_bits(steer_from);
            const auto y = BoolConfig::from_bits(steer_to);
            const auto word = steer_length ? steer_exact(graph, x, y, *steer_length) : steer(graph, x, y);
            if (!word) {
                std::cout << "unreachable\n";
                return 1;
            }
            std::cout << word->to_string() << '\n';
        } else if (*probe) {
            const auto f = probe_map.load();
            if (probe_mode == "separated") {
                const auto sample = sample_points(f.size(), probe_sample, probe_horizon, probe_seed);
                std::cout << "t,epsilon,h_lower\n";
                for (const auto& r : separated_set_curve(f, sample, probe_t, probe_epsilon)) {
                    std::cout << r.t << ',' << r.epsilon << ',' << r.h_lower << '\n';
                }
            } else if (probe_mode == "expansivity") {
                const auto sep = expansivity_probe(f, probe_sample, probe_horizon, probe_seed);
                std::cout << "trials,horizon,min_separation\n" << probe_sample << ',' << probe_horizon
                          << ',' << (sep ? std::to_string(*sep) : "none") << '\n';
            } else {
                if (probe_from.empty() || probe_to.empty()) {
                    throw std::invalid_argument("probe --mode mixing needs --from and --to");
                }
                const auto onset = mixing_onset(IterationGraph(f), BoolConfig::from_bits(probe_from),
                                                BoolConfig::from_bits(probe_to), probe_horizon);
                std::cout << "from,to,max_length,onset\n" << probe_from << ',' << probe_to << ','
                          << probe_horizon << ',' << (onset ? std::to_string(*onset) : "none") << '\n';
            }
        } else if (*train) {
            std::ifstream in(train_dataset);
            if (!in) throw std::runtime_error("cannot open dataset " + train_dataset.string());
            const std::optional<Scheme> scheme =
                train_scheme ? std::optional(parse_scheme(*train_scheme)) : std::nullopt;
            const auto ds = read_dataset_csv(in, scheme);
            const CellSpec cell{train_dataset.stem().string(), ds.scheme, train_hidden, train_epochs};
            const auto outcome = run_cell(ds, cell, train_reps, train_seed, train_threads);
            for (std::size_t r = 0; r < outcome.runs.size(); ++r) {
                if (!outcome.runs[r].report) {
                    std::cerr << "warning: repetition " << r << " failed: " << outcome.runs[r].error << '\n';
                }
            }
            print_rate_table(std::cout, outcome);
            const auto& first = outcome.runs.front();
            if ((train_model_out || train_log) && first.models.empty()) {
                throw std::runtime_error("first repetition failed; no model to save");
            }
            if (train_model_out) {
                if (first.models.size() > 1) {
                    for (std::size_t c = 0; c < first.models.size(); ++c) {
                        fs::path path = *train_model_out;
                        path.replace_filename(path.stem().string() + "_out" + std::to_string(c + 1) +
                                              path.extension().string());
                        auto out = open_output(path);
                        write_model(out, *first.models[c]);
                    }
                } else {
                    auto out = open_output(*train_model_out);
                    write_model(out, *first.models.front());
                }
            }
            if (train_log) {
                auto out = open_output(*train_log);
                write_training_log(out, *first.models.front());
            }
        } else if (*experiment) {
            const auto cfg = read_experiment_config(experiment_config);
            const auto rows = run_experiment(cfg, experiment_quiet ? nullptr : &std::cerr);
            std::cout << rows.size() << " rows written to " << (cfg.output_dir / "results.csv").string()
                      << '\n';
        } else if (*net_train) {
            const auto f = net_map.load();
            const auto model = train_transition_network(f, net_cfg);
            auto out = open_output(net_out);
            write_model(out, model);
            const auto oracle = mlp_oracle(model, f.size());
            const auto extracted = extract_map(oracle);
            std::cout << "extracted map " << (extracted == f ? "matches" : "differs from") << " the target\n";
            std::cout << format_certificate(certify_network(oracle));
            print_equivalence(std::cout, equivalence_check(oracle, f, 1000, 16, net_cfg.seed));
        } else if (*net_check) {
            const auto oracle = mlp_oracle(load_model(check_model), check_n);
            const auto extracted = extract_map(oracle);
            const auto cert = certify_network(oracle);
            std::cout << (check_json ? certificate_json(cert) + "\n" : format_certificate(cert));
            const auto reference = check_against ? load_map(*check_against, check_n) : extracted;
            print_equivalence(std::cout,
                              equivalence_check(oracle, reference, check_trials, check_horizon, check_seed));
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
