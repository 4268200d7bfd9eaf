#include "chaosnet/network_bridge.hpp"

#include <random>
#include <stdexcept>

#include "chaosnet/seeding.hpp"

namespace chaosnet {

NetworkOracle exact_oracle(BooleanMap f) {
    const unsigned n = f.size();
    return {n, [f = std::move(f)](unsigned s, const BoolConfig& x) { return f_step(f, s, x); }};
}

NetworkOracle mlp_oracle(MlpModel model, unsigned n) {
    check_component_count(n);
    if (model.dims.inputs != n + 1 || model.dims.outputs != n) {
        throw std::invalid_argument("mlp_oracle: network must have n+1 inputs and n outputs");
    }
    return {n, [model = std::move(model), n](unsigned s, const BoolConfig& x) {
                std::vector<double> input{static_cast<double>(s)};
                for (unsigned i = 1; i <= n; ++i) input.push_back(x.bit(i) ? 1.0 : 0.0);
                const auto out = model.predict(input);
                std::uint32_t v = 0;
                for (double y : out) v = (v << 1) | (y >= 0.5 ? 1u : 0u);
                return BoolConfig(n, v);
            }};
}

namespace {

BoolConfig checked_query(const NetworkOracle& oracle, unsigned s, const BoolConfig& x) {
    BoolConfig y = oracle.query(s, x);
    if (y.size() != oracle.n) {
        throw std::invalid_argument("network oracle returned " + std::to_string(y.size()) +
                                    " components, expected " + std::to_string(oracle.n));
    }
    return y;
}

}  // namespace

BooleanMap extract_map(const NetworkOracle& oracle) {
    check_component_count(oracle.n);
    if (!oracle.query) throw std::invalid_argument("extract_map: oracle has no query function");
    const unsigned n = oracle.n;
    const std::uint32_t states = std::uint32_t{1} << n;
    std::vector<std::uint32_t> table(states, 0);
    for (std::uint32_t v = 0; v < states; ++v) {
        const BoolConfig x(n, v);
        for (unsigned j = 1; j <= n; ++j) {
            if (checked_query(oracle, j, x).bit(j)) table[v] |= component_mask(n, j);
        }
    }
    return BooleanMap(n, std::move(table));
}

RecurrentRun recurrent_run(const NetworkOracle& oracle, const BoolConfig& x0,
                           const Strategy& strategy) {
    if (strategy.empty()) throw std::invalid_argument("recurrent_run: empty strategy");
    if (x0.size() != oracle.n) throw std::invalid_argument("recurrent_run: dimension mismatch");
    RecurrentRun run{x0, strategy, {}};
    run.orbit.reserve(strategy.length());
    BoolConfig x = x0;
    for (unsigned s : strategy.terms()) {
        x = checked_query(oracle, s, x);
        run.orbit.push_back(x);
    }
    return run;
}

ChaosCertificate certify_network(const NetworkOracle& oracle) {
    return certify_chaos(extract_map(oracle));
}

EquivalenceReport equivalence_check(const NetworkOracle& oracle, const BooleanMap& f,
                                    std::size_t trials, std::size_t horizon, std::uint64_t seed) {
    if (oracle.n != f.size()) throw std::invalid_argument("equivalence_check: dimension mismatch");
    EquivalenceReport report;
    if (trials == 0) return report;
    if (horizon == 0) throw std::invalid_argument("equivalence_check: horizon must be >= 1");

    const unsigned n = f.size();
    Rng rng(seed);
    std::uniform_int_distribution<std::uint32_t> config_dist(0, f.state_count() - 1);
    std::uniform_int_distribution<unsigned> term_dist(1, n);
    for (std::size_t trial = 0; trial < trials; ++trial) {
        const BoolConfig x0(n, config_dist(rng));
        std::vector<unsigned> word(horizon);
        for (auto& s : word) s = term_dist(rng);
        const Strategy strategy(std::move(word), n);

        const auto network = recurrent_run(oracle, x0, strategy).orbit;
        const auto reference = iterate_async(f, x0, strategy, horizon);
        ++report.trials;
        for (std::size_t t = 0; t < horizon; ++t) {
            if (network[t] != reference[t]) {
                ++report.mismatches;
                if (!report.first_mismatch) {
                    report.first_mismatch = EquivalenceReport::Mismatch{x0, strategy, t + 1};
                }
                break;
            }
        }
    }
    return report;
}

TransitionData transition_data(const BooleanMap& f) {
    const unsigned n = f.size();
    TransitionData data;
    data.set.inputs = n + 1;
    data.set.outputs = n;
    data.scaling.min.assign(n + 1, 0.0);
    data.scaling.max.assign(n + 1, 1.0);
    data.scaling.min[0] = 1.0;
    data.scaling.max[0] = static_cast<double>(n);

    std::vector<double> in(n + 1);
    std::vector<double> out(n);
    for (unsigned s = 1; s <= n; ++s) {
        for (std::uint32_t v = 0; v < f.state_count(); ++v) {
            const BoolConfig x(n, v);
            const BoolConfig y = f_step(f, s, x);
            in[0] = s;
            for (unsigned i = 1; i <= n; ++i) {
                in[i] = x.bit(i) ? 1.0 : 0.0;
                out[i - 1] = y.bit(i) ? 1.0 : 0.0;
            }
            data.set.append(data.scaling.apply(in), out);
        }
    }
    return data;
}

MlpModel train_transition_network(const BooleanMap& f, const TrainConfig& cfg) {
    const TransitionData data = transition_data(f);
    MlpModel model = init_model({f.size() + 1, cfg.hidden, f.size()}, cfg.seed);
    model.scaling = data.scaling;
    // The full truth table is the target; there is nothing to hold out.
    return lbfgs_train(std::move(model), data.set, data.set, cfg);
}

}  // namespace chaosnet
