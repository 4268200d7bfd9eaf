#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chaosnet/dynamics.hpp"

namespace chaosnet {

/// Labeled digraph Gamma(f) on the 2^n configurations.
///
/// Every vertex carries exactly n arcs, one per label i in [1, n], pointing
/// at F_f(i, x). An arc is a self-loop when f_i(x) = x_i.
class IterationGraph {
  public:
    explicit IterationGraph(const BooleanMap& f);

    [[nodiscard]] unsigned components() const noexcept { return n_; }
    [[nodiscard]] std::uint32_t vertex_count() const noexcept { return vertices_; }

    /// Target of the arc labeled `label` leaving `vertex`.
    [[nodiscard]] std::uint32_t target(std::uint32_t vertex, unsigned label) const {
        return targets_[static_cast<std::size_t>(vertex) * n_ + (label - 1)];
    }
    [[nodiscard]] std::span<const std::uint32_t> arcs(std::uint32_t vertex) const {
        return {targets_.data() + static_cast<std::size_t>(vertex) * n_, n_};
    }

  private:
    unsigned n_;
    std::uint32_t vertices_;
    std::vector<std::uint32_t> targets_;
};

[[nodiscard]] IterationGraph build_graph(const BooleanMap& f);

/// Strongly connected components of a graph; self-loops are ignored.
struct SccDecomposition {
    /// Component id per vertex. Ids follow Tarjan completion order, so
    /// component 0 has no arc leaving it.
    std::vector<std::uint32_t> component_of;
    std::uint32_t count = 0;
};

[[nodiscard]] SccDecomposition strongly_connected_components(const IterationGraph& graph);

struct WitnessPair {
    BoolConfig from;
    BoolConfig to;
};

/// Outcome of the strong connectivity test on Gamma(f).
struct ChaosCertificate {
    bool chaotic = false;
    std::uint32_t scc_count = 0;
    /// Present iff !chaotic: `to` is unreachable from `from`.
    std::optional<WitnessPair> witness;
    /// SCC id per vertex.
    std::vector<std::uint32_t> partition;
    std::vector<BoolConfig> fixed_points;
};

[[nodiscard]] ChaosCertificate certify_chaos(const BooleanMap& f);

/// Human-readable report.
[[nodiscard]] std::string format_certificate(const ChaosCertificate& cert);
/// Single-line JSON record: verdict, scc_count, fixed points, witness pair.
[[nodiscard]] std::string certificate_json(const ChaosCertificate& cert);

/// Shortest label word driving x to y, lexicographically smallest among the
/// shortest ones. std::nullopt when y is unreachable.
[[nodiscard]] std::optional<Strategy> steer(const IterationGraph& graph, const BoolConfig& x,
                                            const BoolConfig& y);

/// A label word of exactly `length` steps from x to y, if one exists
/// (lexicographically smallest).
[[nodiscard]] std::optional<Strategy> steer_exact(const IterationGraph& graph, const BoolConfig& x,
                                                  const BoolConfig& y, std::size_t length);

/// Smallest n0 < max_length such that x reaches y in exactly L steps for
/// every L in [n0, max_length]. The window must hold at least two lengths,
/// so a parity obstruction yields std::nullopt.
[[nodiscard]] std::optional<std::size_t> mixing_onset(const IterationGraph& graph,
                                                      const BoolConfig& x, const BoolConfig& y,
                                                      std::size_t max_length);

}  // namespace chaosnet
