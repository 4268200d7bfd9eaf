#include "chaosnet/lbfgs.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

namespace chaosnet {

std::string_view step_kind_name(StepKind kind) {
    return kind == StepKind::Wolfe ? "wolfe" : "fallback";
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

/// phi(alpha) = f(x + alpha d) with its directional derivative.
class LineFunction {
  public:
    LineFunction(const Objective& objective, std::span<const double> x, std::span<const double> d)
        : objective_(objective), x_(x), d_(d), trial_(x.size()), grad_(x.size()) {}

    struct Point {
        double alpha;
        double value;
        double slope;
    };

    Point eval(double alpha) {
        for (std::size_t i = 0; i < x_.size(); ++i) trial_[i] = x_[i] + alpha * d_[i];
        const double value = objective_(trial_, grad_);
        ++evals_;
        return {alpha, value, dot(grad_, d_)};
    }

    [[nodiscard]] std::span<const double> trial() const { return trial_; }
    [[nodiscard]] std::span<const double> grad() const { return grad_; }
    [[nodiscard]] std::size_t evals() const { return evals_; }

  private:
    const Objective& objective_;
    std::span<const double> x_;
    std::span<const double> d_;
    std::vector<double> trial_;
    std::vector<double> grad_;
    std::size_t evals_ = 0;
};

/// Minimiser of the cubic interpolating (a, fa, ga) and (b, fb, gb),
/// safeguarded into the inner 80% of the bracket.
double interpolate(const LineFunction::Point& a, const LineFunction::Point& b) {
    const double lo = std::min(a.alpha, b.alpha);
    const double hi = std::max(a.alpha, b.alpha);
    const double margin = 0.1 * (hi - lo);
    const double d1 = a.slope + b.slope - 3.0 * (a.value - b.value) / (a.alpha - b.alpha);
    const double disc = d1 * d1 - a.slope * b.slope;
    double alpha = 0.5 * (a.alpha + b.alpha);
    if (disc >= 0.0) {
        const double d2 = std::copysign(std::sqrt(disc), b.alpha - a.alpha);
        const double denom = b.slope - a.slope + 2.0 * d2;
        if (denom != 0.0) {
            const double candidate = b.alpha - (b.alpha - a.alpha) * (b.slope + d2 - d1) / denom;
            if (std::isfinite(candidate)) alpha = candidate;
        }
    }
    return std::clamp(alpha, lo + margin, hi - margin);
}

/// Strong Wolfe search. The accepted point is always the last one evaluated,
/// so `line` still holds its position and gradient.
std::optional<LineFunction::Point> strong_wolfe(LineFunction& line, double value0, double slope0,
                                                double alpha_init, const LbfgsOptions& opt) {
    const LineFunction::Point origin{0.0, value0, slope0};
    constexpr double kAlphaMax = 1e10;

    auto zoom = [&](LineFunction::Point lo, LineFunction::Point hi)
        -> std::optional<LineFunction::Point> {
        while (line.evals() < opt.max_line_search_evals) {
            if (std::abs(hi.alpha - lo.alpha) <= 1e-16 * std::max(1.0, std::abs(lo.alpha))) break;
            const auto p = line.eval(interpolate(lo, hi));
            if (!std::isfinite(p.value) || p.value > value0 + opt.c1 * p.alpha * slope0 ||
                p.value >= lo.value) {
                hi = p;
                continue;
            }
            if (std::abs(p.slope) <= -opt.c2 * slope0) return p;
            if (p.slope * (hi.alpha - lo.alpha) >= 0.0) hi = lo;
            lo = p;
        }
        return std::nullopt;
    };

    LineFunction::Point prev = origin;
    double alpha = alpha_init;
    for (std::size_t i = 0; line.evals() < opt.max_line_search_evals; ++i) {
        const auto p = line.eval(alpha);
        if (!std::isfinite(p.value)) {
            // Overshoot into a non-finite region: bracket with the last finite point.
            return zoom(prev, LineFunction::Point{alpha, std::numeric_limits<double>::max(), 0.0});
        }
        if (p.value > value0 + opt.c1 * alpha * slope0 || (i > 0 && p.value >= prev.value)) {
            return zoom(prev, p);
        }
        if (std::abs(p.slope) <= -opt.c2 * slope0) return p;
        if (p.slope >= 0.0) {
            return zoom(p, prev);
        }
        prev = p;
        alpha = std::min(2.0 * alpha, kAlphaMax);
    }
    return std::nullopt;
}

}  // namespace

LbfgsResult lbfgs_minimize(const Objective& objective, std::span<double> x,
                           const LbfgsOptions& opt, const EpochCallback& on_epoch) {
    if (!(0.0 < opt.c1 && opt.c1 < opt.c2 && opt.c2 < 1.0)) {
        throw std::invalid_argument("lbfgs: Wolfe constants must satisfy 0 < c1 < c2 < 1");
    }
    if (opt.memory == 0) throw std::invalid_argument("lbfgs: memory must be >= 1");

    const std::size_t dim = x.size();
    std::vector<double> grad(dim);
    double value = objective(x, grad);
    if (!std::isfinite(value)) throw std::runtime_error("lbfgs: non-finite initial objective");

    struct Pair {
        std::vector<double> s, y;
        double rho;
    };
    std::deque<Pair> history;
    std::vector<double> direction(dim);
    std::vector<double> alphas(opt.memory);

    LbfgsResult result;
    result.loss = value;
    result.gradient_norm = norm(grad);

    for (std::size_t epoch = 1; epoch <= opt.max_epochs; ++epoch) {
        const double gnorm = norm(grad);
        if (gnorm < opt.gradient_tolerance) {
            result.reason = StopReason::Converged;
            return result;
        }

        // Two-loop recursion: direction = -H grad.
        std::copy(grad.begin(), grad.end(), direction.begin());
        for (std::size_t j = history.size(); j-- > 0;) {
            const auto& h = history[j];
            alphas[j] = h.rho * dot(h.s, direction);
            for (std::size_t i = 0; i < dim; ++i) direction[i] -= alphas[j] * h.y[i];
        }
        if (!history.empty()) {
            const auto& last = history.back();
            const double gamma = dot(last.s, last.y) / dot(last.y, last.y);
            for (auto& v : direction) v *= gamma;
        }
        for (std::size_t j = 0; j < history.size(); ++j) {
            const auto& h = history[j];
            const double beta = h.rho * dot(h.y, direction);
            for (std::size_t i = 0; i < dim; ++i) direction[i] += (alphas[j] - beta) * h.s[i];
        }
        for (auto& v : direction) v = -v;

        double slope = dot(grad, direction);
        if (!(slope < 0.0)) {
            history.clear();
            for (std::size_t i = 0; i < dim; ++i) direction[i] = -grad[i];
            slope = -gnorm * gnorm;
        }
        const double alpha_init = history.empty() ? std::min(1.0, 1.0 / gnorm) : 1.0;

        LineFunction line(objective, x, direction);
        auto accepted = strong_wolfe(line, value, slope, alpha_init, opt);

        std::vector<double> new_x;
        std::vector<double> new_grad;
        double new_value = value;
        double step = 0.0;
        StepKind kind = StepKind::Wolfe;

        if (accepted && accepted->value < value) {
            new_x.assign(line.trial().begin(), line.trial().end());
            new_grad.assign(line.grad().begin(), line.grad().end());
            new_value = accepted->value;
            step = accepted->alpha;
        } else {
            // Backtracking steepest descent with the Armijo condition.
            kind = StepKind::Fallback;
            history.clear();
            for (std::size_t i = 0; i < dim; ++i) direction[i] = -grad[i];
            LineFunction descent(objective, x, direction);
            double alpha = 1.0 / std::max(gnorm, 1e-300);
            bool found = false;
            for (int tries = 0; tries < 80; ++tries, alpha *= 0.5) {
                const auto p = descent.eval(alpha);
                if (std::isfinite(p.value) && p.value < value &&
                    p.value <= value - opt.c1 * alpha * gnorm * gnorm) {
                    found = true;
                    break;
                }
            }
            if (!found) {
                result.reason = StopReason::Stalled;
                return result;
            }
            new_x.assign(descent.trial().begin(), descent.trial().end());
            new_grad.assign(descent.grad().begin(), descent.grad().end());
            new_value = objective(new_x, new_grad);
            step = alpha;
            ++result.fallback_steps;
        }

        Pair pair{std::vector<double>(dim), std::vector<double>(dim), 0.0};
        for (std::size_t i = 0; i < dim; ++i) {
            pair.s[i] = new_x[i] - x[i];
            pair.y[i] = new_grad[i] - grad[i];
        }
        const double sy = dot(pair.s, pair.y);
        if (sy > 1e-12 * norm(pair.s) * norm(pair.y) && sy > 0.0) {
            pair.rho = 1.0 / sy;
            if (history.size() == opt.memory) history.pop_front();
            history.push_back(std::move(pair));
        }

        std::copy(new_x.begin(), new_x.end(), x.begin());
        grad = std::move(new_grad);
        value = new_value;

        result.epochs = epoch;
        result.loss = value;
        result.gradient_norm = norm(grad);
        if (on_epoch) on_epoch(EpochInfo{epoch, value, result.gradient_norm, step, kind}, x);
    }
    result.reason = result.gradient_norm < opt.gradient_tolerance ? StopReason::Converged
                                                                  : StopReason::MaxEpochs;
    return result;
}

}  // namespace chaosnet
