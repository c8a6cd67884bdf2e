#include "swarmsqp/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace swarmsqp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

void ProblemDefinition::validate() const {
    if (dimension < 1) {
        throw std::invalid_argument(name + ": dimension must be at least 1");
    }
    if (lower.size() != dimension || upper.size() != dimension) {
        throw std::invalid_argument(name + ": bound vectors must have length n");
    }
    for (std::size_t d = 0; d < dimension; ++d) {
        if (!std::isfinite(lower[d]) || !std::isfinite(upper[d]) || !(lower[d] < upper[d])) {
            throw std::invalid_argument(name + ": bounds must be finite with lower < upper (dimension " +
                                        std::to_string(d) + ")");
        }
    }
    if (!evaluator) {
        throw std::invalid_argument(name + ": missing evaluator");
    }
}

ProblemDefinition ProblemDefinition::from_functions(
    std::string name, Vector lower, Vector upper,
    std::function<double(std::span<const double>)> objective,
    std::vector<std::function<double(std::span<const double>)>> inequalities,
    std::vector<std::function<double(std::span<const double>)>> equalities,
    std::optional<double> f_star) {
    ProblemDefinition p;
    p.name = std::move(name);
    p.dimension = lower.size();
    p.lower = std::move(lower);
    p.upper = std::move(upper);
    p.num_inequalities = inequalities.size();
    p.num_equalities = equalities.size();
    p.f_star = f_star;
    p.evaluator = [objective = std::move(objective), inequalities = std::move(inequalities),
                   equalities = std::move(equalities)](std::span<const double> x, std::span<double> g,
                                                       std::span<double> h) {
        for (std::size_t j = 0; j < inequalities.size(); ++j) g[j] = inequalities[j](x);
        for (std::size_t j = 0; j < equalities.size(); ++j) h[j] = equalities[j](x);
        return objective(x);
    };
    p.validate();
    return p;
}

ConstraintReport ConstraintReport::with_epsilon(double epsilon) const {
    ConstraintReport r;
    r.g_values = g_values;
    r.h_values = h_values;
    r.abs_h_values = abs_h_values;
    r.epsilon_used = epsilon;
    r.relaxed_h_values.resize(abs_h_values.size());
    double worst = 0.0;
    for (double g : g_values) worst = std::max(worst, g);
    for (std::size_t j = 0; j < abs_h_values.size(); ++j) {
        r.relaxed_h_values[j] = abs_h_values[j] - epsilon;
        worst = std::max(worst, r.relaxed_h_values[j]);
    }
    r.max_violation = std::isinf(max_violation) ? kInf : worst;
    return r;
}

Solution Solution::from(Vector x, PointEvaluation e) {
    return Solution{std::move(x), e.f, std::move(e.report), e.non_finite};
}

void EvaluationLedger::charge(Phase phase, std::size_t count) noexcept {
    if (phase == Phase::pso) {
        pso_fes_ += count;
    } else {
        sqp_fes_ += count;
    }
}

EvaluationLedger& EvaluationLedger::operator+=(const EvaluationLedger& other) noexcept {
    pso_fes_ += other.pso_fes_;
    sqp_fes_ += other.sqp_fes_;
    return *this;
}

ConstraintReport make_report(std::span<const double> g, std::span<const double> h, double epsilon) {
    ConstraintReport r;
    r.epsilon_used = epsilon;
    r.g_values.assign(g.begin(), g.end());
    r.h_values.assign(h.begin(), h.end());
    r.abs_h_values.resize(h.size());
    r.relaxed_h_values.resize(h.size());
    bool finite = true;
    double worst = 0.0;
    for (double v : g) {
        finite = finite && std::isfinite(v);
        worst = std::max(worst, v);
    }
    for (std::size_t j = 0; j < h.size(); ++j) {
        finite = finite && std::isfinite(h[j]);
        r.abs_h_values[j] = std::abs(h[j]);
        r.relaxed_h_values[j] = r.abs_h_values[j] - epsilon;
        worst = std::max(worst, r.relaxed_h_values[j]);
    }
    r.max_violation = finite ? worst : kInf;
    return r;
}

ConstraintReport worst_report(const ProblemDefinition& problem, double epsilon) {
    ConstraintReport r;
    r.epsilon_used = epsilon;
    r.g_values.assign(problem.num_inequalities, kInf);
    r.h_values.assign(problem.num_equalities, kInf);
    r.abs_h_values.assign(problem.num_equalities, kInf);
    r.relaxed_h_values.assign(problem.num_equalities, kInf);
    r.max_violation = kInf;
    return r;
}

PointEvaluation evaluate(const ProblemDefinition& problem, std::span<const double> x, double epsilon,
                         EvaluationLedger& ledger, Phase phase) {
    if (x.size() != problem.dimension) {
        throw std::invalid_argument(problem.name + ": expected a point of dimension " +
                                    std::to_string(problem.dimension) + ", got " +
                                    std::to_string(x.size()));
    }
    if (!(epsilon >= 0.0)) {
        throw std::invalid_argument("equality relaxation epsilon must be non-negative");
    }
    Vector g(problem.num_inequalities);
    Vector h(problem.num_equalities);
    const double f = problem.evaluator(x, g, h);
    ledger.charge(phase);

    PointEvaluation out;
    out.report = make_report(g, h, epsilon);
    if (!std::isfinite(f) || std::isinf(out.report.max_violation)) {
        out.f = kInf;
        out.report = worst_report(problem, epsilon);
        out.non_finite = true;
    } else {
        out.f = f;
    }
    return out;
}

bool is_feasible(const ConstraintReport& report, double slack) noexcept {
    for (double g : report.g_values) {
        if (!(g <= slack)) return false;
    }
    for (double h : report.relaxed_h_values) {
        if (!(h <= slack)) return false;
    }
    return !std::isinf(report.max_violation);
}

bool success(double f, double f_star) noexcept { return f - f_star <= kSuccessAccuracy; }

std::optional<bool> success(double f, std::optional<double> f_star) noexcept {
    if (!f_star) return std::nullopt;
    return success(f, *f_star);
}

double total_violation(const ConstraintReport& report) noexcept {
    if (std::isinf(report.max_violation)) return kInf;
    double sum = 0.0;
    for (double g : report.g_values) sum += std::max(0.0, g);
    for (double h : report.relaxed_h_values) sum += std::max(0.0, h);
    return sum;
}

SolutionRank rank_of(double f, const ConstraintReport& report, double slack) {
    return {f, report.max_violation, is_feasible(report, slack)};
}

SolutionRank rank_of(const Solution& s, double slack) {
    if (s.non_finite) return {kInf, kInf, false};
    return rank_of(s.f, s.report, slack);
}

std::weak_ordering compare_solutions(const SolutionRank& a, const SolutionRank& b) noexcept {
    if (a.feasible != b.feasible) return a.feasible ? std::weak_ordering::less : std::weak_ordering::greater;
    auto cmp = [](double x, double y) {
        if (x < y) return std::weak_ordering::less;
        if (y < x) return std::weak_ordering::greater;
        return std::weak_ordering::equivalent;
    };
    if (a.feasible) return cmp(a.f, b.f);
    const auto by_violation = cmp(a.max_violation, b.max_violation);
    if (by_violation != 0) return by_violation;
    return cmp(a.f, b.f);
}

Vector clip_to_bounds(std::span<const double> x, const ProblemDefinition& problem) {
    Vector out(x.begin(), x.end());
    for (std::size_t d = 0; d < out.size(); ++d) {
        out[d] = std::clamp(out[d], problem.lower[d], problem.upper[d]);
    }
    return out;
}

}  // namespace swarmsqp
