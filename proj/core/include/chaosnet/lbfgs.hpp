#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string_view>

namespace chaosnet {

/// Objective: returns f(x) and writes the gradient into `grad`.
using Objective = std::function<double(std::span<const double> x, std::span<double> grad)>;

struct LbfgsOptions {
    /// Correction pairs kept for the two-loop recursion.
    std::size_t memory = 10;
    /// Sufficient decrease constant.
    double c1 = 1e-4;
    /// Curvature constant.
    double c2 = 0.9;
    /// Stop once ||grad||_2 falls below this.
    double gradient_tolerance = 1e-8;
    std::size_t max_epochs = 100;
    /// Function evaluations allowed per line search.
    std::size_t max_line_search_evals = 40;
};

enum class StepKind {
    Wolfe,     ///< strong Wolfe line search along the quasi-Newton direction
    Fallback,  ///< backtracking steepest descent after a line-search failure
};

[[nodiscard]] std::string_view step_kind_name(StepKind kind);

struct EpochInfo {
    std::size_t epoch = 0;  ///< 1-based
    double loss = 0.0;
    double gradient_norm = 0.0;
    double step = 0.0;
    StepKind kind = StepKind::Wolfe;
};

using EpochCallback = std::function<void(const EpochInfo&, std::span<const double> x)>;

enum class StopReason { Converged, MaxEpochs, Stalled };

struct LbfgsResult {
    std::size_t epochs = 0;
    double loss = 0.0;
    double gradient_norm = 0.0;
    std::size_t fallback_steps = 0;
    StopReason reason = StopReason::MaxEpochs;
};

/// Minimises `objective` in place starting from `x`.
///
/// One epoch is one accepted parameter update. When the strong Wolfe search
/// fails, that epoch takes a backtracking steepest-descent step instead and
/// the curvature memory is cleared; if no decrease is found at all the run
/// stops with StopReason::Stalled.
LbfgsResult lbfgs_minimize(const Objective& objective, std::span<double> x,
                           const LbfgsOptions& options, const EpochCallback& on_epoch = {});

}  // namespace chaosnet
