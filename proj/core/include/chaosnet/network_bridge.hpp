#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "chaosnet/dynamics.hpp"
#include "chaosnet/iteration_graph.hpp"
#include "chaosnet/mlp.hpp"

namespace chaosnet {

/// A network seen as F: [1, n] x B^n -> B^n, its response to the input
/// layer (s, x_1..x_n). `query` must be deterministic and safe to call
/// concurrently.
struct NetworkOracle {
    unsigned n = 0;
    std::function<BoolConfig(unsigned s, const BoolConfig& x)> query;
};

/// Oracle answering F_f(s, x) exactly.
[[nodiscard]] NetworkOracle exact_oracle(BooleanMap f);

/// Oracle backed by a trained MLP with inputs (s, x_1..x_n) and n outputs,
/// each output binarized at 0.5.
[[nodiscard]] NetworkOracle mlp_oracle(MlpModel model, unsigned n);

/// f with f_j(x) = bit j of query(j, x); n * 2^n queries.
[[nodiscard]] BooleanMap extract_map(const NetworkOracle& oracle);

struct RecurrentRun {
    BoolConfig x0;
    Strategy strategy;
    /// Published outputs x^1..x^l; each full response is fed back as the next input.
    std::vector<BoolConfig> orbit;
};

[[nodiscard]] RecurrentRun recurrent_run(const NetworkOracle& oracle, const BoolConfig& x0,
                                         const Strategy& strategy);

[[nodiscard]] ChaosCertificate certify_network(const NetworkOracle& oracle);

struct EquivalenceReport {
    std::size_t trials = 0;
    /// Trials whose recurrent orbit differs somewhere from the asynchronous iterations.
    std::size_t mismatches = 0;
    struct Mismatch {
        BoolConfig x0;
        Strategy strategy;
        std::size_t step = 0;  // 1-based index into the orbit
    };
    std::optional<Mismatch> first_mismatch;
};

[[nodiscard]] EquivalenceReport equivalence_check(const NetworkOracle& oracle, const BooleanMap& f,
                                                  std::size_t trials, std::size_t horizon,
                                                  std::uint64_t seed);

/// The n * 2^n transitions of F_f as a training set with inputs
/// (s, x_1..x_n) min-max scaled and targets F_f(s, x) as 0/1.
struct TransitionData {
    TrainingSet set;
    InputScaling scaling;
};
[[nodiscard]] TransitionData transition_data(const BooleanMap& f);

/// Trains an MLP to realize F_f; the returned model carries its input scaling.
[[nodiscard]] MlpModel train_transition_network(const BooleanMap& f, const TrainConfig& cfg);

}  // namespace chaosnet
