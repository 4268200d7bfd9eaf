#include "chaosnet/iteration_graph.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace chaosnet {

IterationGraph::IterationGraph(const BooleanMap& f)
    : n_(f.size()), vertices_(f.state_count()) {
    targets_.resize(static_cast<std::size_t>(vertices_) * n_);
    for (std::uint32_t v = 0; v < vertices_; ++v) {
        for (unsigned i = 1; i <= n_; ++i) {
            targets_[static_cast<std::size_t>(v) * n_ + (i - 1)] = f.step_value(i, v);
        }
    }
}

IterationGraph build_graph(const BooleanMap& f) { return IterationGraph(f); }

SccDecomposition strongly_connected_components(const IterationGraph& graph) {
    constexpr std::uint32_t kUnvisited = std::numeric_limits<std::uint32_t>::max();
    const std::uint32_t count = graph.vertex_count();
    const unsigned degree = graph.components();

    SccDecomposition out;
    out.component_of.assign(count, kUnvisited);

    std::vector<std::uint32_t> index(count, kUnvisited);
    std::vector<std::uint32_t> lowlink(count, 0);
    std::vector<bool> on_stack(count, false);
    std::vector<std::uint32_t> stack;

    // Iterative Tarjan: each frame is (vertex, next label offset).
    struct Frame {
        std::uint32_t vertex;
        unsigned next;
    };
    std::vector<Frame> call;
    std::uint32_t next_index = 0;

    for (std::uint32_t root = 0; root < count; ++root) {
        if (index[root] != kUnvisited) continue;
        call.push_back({root, 0});
        index[root] = lowlink[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = true;

        while (!call.empty()) {
            Frame& frame = call.back();
            const std::uint32_t v = frame.vertex;
            if (frame.next < degree) {
                const std::uint32_t w = graph.arcs(v)[frame.next++];
                if (w == v) continue;
                if (index[w] == kUnvisited) {
                    index[w] = lowlink[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    lowlink[v] = std::min(lowlink[v], index[w]);
                }
                continue;
            }
            if (lowlink[v] == index[v]) {
                std::uint32_t w = 0;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    out.component_of[w] = out.count;
                } while (w != v);
                ++out.count;
            }
            call.pop_back();
            if (!call.empty()) {
                const std::uint32_t parent = call.back().vertex;
                lowlink[parent] = std::min(lowlink[parent], lowlink[v]);
            }
        }
    }
    return out;
}

ChaosCertificate certify_chaos(const BooleanMap& f) {
    const IterationGraph graph(f);
    SccDecomposition scc = strongly_connected_components(graph);

    ChaosCertificate cert;
    cert.scc_count = scc.count;
    cert.chaotic = scc.count == 1;
    const unsigned n = f.size();
    const auto table = f.table();
    for (std::uint32_t v = 0; v < graph.vertex_count(); ++v) {
        if (table[v] == v) cert.fixed_points.emplace_back(n, v);
    }
    if (!cert.chaotic) {
        // Component 0 is a sink: nothing outside it is reachable from inside.
        const auto& comp = scc.component_of;
        const auto from = static_cast<std::uint32_t>(std::find(comp.begin(), comp.end(), 0u) -
                                                     comp.begin());
        const auto to = static_cast<std::uint32_t>(
            std::find_if(comp.begin(), comp.end(), [](std::uint32_t c) { return c != 0; }) -
            comp.begin());
        cert.witness = WitnessPair{BoolConfig(n, from), BoolConfig(n, to)};
    }
    cert.partition = std::move(scc.component_of);
    return cert;
}

std::string format_certificate(const ChaosCertificate& cert) {
    std::ostringstream out;
    out << "verdict: " << (cert.chaotic ? "chaotic" : "not chaotic") << '\n';
    out << "strongly connected components: " << cert.scc_count << '\n';
    if (cert.chaotic) {
        out << "evidence: iteration graph is strongly connected\n";
    } else if (cert.witness) {
        out << "evidence: no path from " << cert.witness->from.to_string() << " to "
            << cert.witness->to.to_string() << '\n';
    }
    out << "fixed points:";
    if (cert.fixed_points.empty()) out << " none";
    for (const auto& x : cert.fixed_points) out << ' ' << x.to_string();
    out << '\n';
    return out.str();
}

std::string certificate_json(const ChaosCertificate& cert) {
    nlohmann::json j;
    j["verdict"] = cert.chaotic;
    j["scc_count"] = cert.scc_count;
    j["fixed_points"] = nlohmann::json::array();
    for (const auto& x : cert.fixed_points) j["fixed_points"].push_back(x.to_string());
    if (cert.witness) {
        j["witness"] = {{"from", cert.witness->from.to_string()},
                        {"to", cert.witness->to.to_string()}};
    } else {
        j["witness"] = nullptr;
    }
    return j.dump();
}

namespace {

void check_endpoints(const IterationGraph& graph, const BoolConfig& x, const BoolConfig& y) {
    if (x.size() != graph.components() || y.size() != graph.components()) {
        throw std::invalid_argument("steer: configuration size does not match the graph");
    }
}

}  // namespace

std::optional<Strategy> steer(const IterationGraph& graph, const BoolConfig& x,
                              const BoolConfig& y) {
    check_endpoints(graph, x, y);
    const unsigned n = graph.components();
    if (x == y) return Strategy({}, n);

    constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();
    std::vector<std::uint32_t> parent(graph.vertex_count(), kNone);
    std::vector<unsigned> via(graph.vertex_count(), 0);
    std::vector<std::uint32_t> queue{x.value()};
    parent[x.value()] = x.value();

    // Level order plus ascending labels yields the lexicographically smallest
    // shortest word: queue entries of equal depth are sorted by their words.
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const std::uint32_t v = queue[head];
        for (unsigned i = 1; i <= n; ++i) {
            const std::uint32_t w = graph.target(v, i);
            if (parent[w] != kNone) continue;
            parent[w] = v;
            via[w] = i;
            if (w == y.value()) {
                std::vector<unsigned> word;
                for (std::uint32_t u = w; u != x.value(); u = parent[u]) word.push_back(via[u]);
                std::reverse(word.begin(), word.end());
                return Strategy(std::move(word), n);
            }
            queue.push_back(w);
        }
    }
    return std::nullopt;
}

std::optional<Strategy> steer_exact(const IterationGraph& graph, const BoolConfig& x,
                                    const BoolConfig& y, std::size_t length) {
    check_endpoints(graph, x, y);
    const unsigned n = graph.components();
    const std::uint32_t count = graph.vertex_count();

    // reaches[r][v]: v reaches y in exactly r steps.
    std::vector<std::vector<bool>> reaches(length + 1, std::vector<bool>(count, false));
    reaches[0][y.value()] = true;
    for (std::size_t r = 1; r <= length; ++r) {
        for (std::uint32_t v = 0; v < count; ++v) {
            for (std::uint32_t w : graph.arcs(v)) {
                if (reaches[r - 1][w]) {
                    reaches[r][v] = true;
                    break;
                }
            }
        }
    }
    if (!reaches[length][x.value()]) return std::nullopt;

    std::vector<unsigned> word;
    word.reserve(length);
    std::uint32_t v = x.value();
    for (std::size_t r = length; r > 0; --r) {
        for (unsigned i = 1; i <= n; ++i) {
            const std::uint32_t w = graph.target(v, i);
            if (reaches[r - 1][w]) {
                word.push_back(i);
                v = w;
                break;
            }
        }
    }
    return Strategy(std::move(word), n);
}

std::optional<std::size_t> mixing_onset(const IterationGraph& graph, const BoolConfig& x,
                                        const BoolConfig& y, std::size_t max_length) {
    check_endpoints(graph, x, y);
    const std::uint32_t count = graph.vertex_count();
    std::vector<bool> current(count, false);
    std::vector<bool> next(count, false);
    current[x.value()] = true;

    std::optional<std::size_t> onset;
    for (std::size_t length = 0;; ++length) {
        if (current[y.value()]) {
            if (!onset) onset = length;
        } else {
            onset.reset();
        }
        if (length == max_length) break;
        std::fill(next.begin(), next.end(), false);
        for (std::uint32_t v = 0; v < count; ++v) {
            if (!current[v]) continue;
            for (std::uint32_t w : graph.arcs(v)) next[w] = true;
        }
        current.swap(next);
    }
    if (onset && *onset == max_length) return std::nullopt;
    return onset;
}

}  // namespace chaosnet
