#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace swarmsqp {

using Vector = std::vector<double>;

/// Equality constraints are relaxed to |h(x)| - epsilon <= 0 with this epsilon.
inline constexpr double kEqualityTolerance = 1e-4;

/// A run is successful when f - f_star <= kSuccessAccuracy at a feasible point.
inline constexpr double kSuccessAccuracy = 1e-4;

/// Constraint slack the SQP stage uses to absorb round-off.
inline constexpr double kSqpFeasibilitySlack = 1e-12;

/// Joint objective and constraint evaluation. Fills `g` (size q) and `h` (size m)
/// and returns the objective. One call is one function evaluation (FE).
using EvaluatorFn =
    std::function<double(std::span<const double> x, std::span<double> g, std::span<double> h)>;

/// A box-bounded constrained minimisation problem:
///   minimise f(x)  s.t.  g_j(x) <= 0,  h_j(x) = 0,  lower <= x <= upper.
struct ProblemDefinition {
    std::string name;
    std::size_t dimension = 0;
    Vector lower;
    Vector upper;
    std::size_t num_inequalities = 0;
    std::size_t num_equalities = 0;
    EvaluatorFn evaluator;
    /// Known optimal objective value; absent when no optimum is known.
    std::optional<double> f_star;

    [[nodiscard]] bool optimum_known() const noexcept { return f_star.has_value(); }

    /// Throws std::invalid_argument if the definition breaks an invariant.
    void validate() const;

    /// Builds a problem from separate objective and per-constraint callables.
    static ProblemDefinition from_functions(
        std::string name, Vector lower, Vector upper,
        std::function<double(std::span<const double>)> objective,
        std::vector<std::function<double(std::span<const double>)>> inequalities,
        std::vector<std::function<double(std::span<const double>)>> equalities,
        std::optional<double> f_star = std::nullopt);
};

/// Constraint values at a point, with equalities in relaxed form.
struct ConstraintReport {
    Vector g_values;
    Vector h_values;          // h_j(x)
    Vector abs_h_values;      // |h_j(x)|
    Vector relaxed_h_values;  // |h_j(x)| - epsilon_used
    double max_violation = 0.0;
    double epsilon_used = kEqualityTolerance;

    /// Same raw values re-expressed under a different equality relaxation.
    [[nodiscard]] ConstraintReport with_epsilon(double epsilon) const;
};

/// Result of one FE. Non-finite outputs are collapsed to a sentinel that
/// every comparison treats as the worst possible record.
struct PointEvaluation {
    double f = 0.0;
    ConstraintReport report;
    bool non_finite = false;
};

/// A point together with its evaluation.
struct Solution {
    Vector x;
    double f = 0.0;
    ConstraintReport report;
    bool non_finite = false;

    [[nodiscard]] static Solution from(Vector x, PointEvaluation e);
};

enum class Phase { pso, sqp };

/// Function-evaluation accounting for a single run.
class EvaluationLedger {
public:
    void charge(Phase phase, std::size_t count = 1) noexcept;

    [[nodiscard]] std::size_t pso_fes() const noexcept { return pso_fes_; }
    [[nodiscard]] std::size_t sqp_fes() const noexcept { return sqp_fes_; }
    [[nodiscard]] std::size_t total_fes() const noexcept { return pso_fes_ + sqp_fes_; }

    EvaluationLedger& operator+=(const EvaluationLedger& other) noexcept;

private:
    std::size_t pso_fes_ = 0;
    std::size_t sqp_fes_ = 0;
};

/// Builds a report from raw constraint values. Non-finite inputs give the
/// worst-case sentinel (max_violation = +inf).
[[nodiscard]] ConstraintReport make_report(std::span<const double> g, std::span<const double> h,
                                           double epsilon);

[[nodiscard]] ConstraintReport worst_report(const ProblemDefinition& problem, double epsilon);

/// One FE: objective plus every constraint at `x`, charged to `phase`.
/// Throws std::invalid_argument on a dimension mismatch or negative epsilon.
[[nodiscard]] PointEvaluation evaluate(const ProblemDefinition& problem, std::span<const double> x,
                                       double epsilon, EvaluationLedger& ledger, Phase phase);

/// Every g_value and relaxed_h_value is <= slack.
[[nodiscard]] bool is_feasible(const ConstraintReport& report, double slack) noexcept;

[[nodiscard]] bool success(double f, double f_star) noexcept;

/// Undefined (nullopt) when the problem has no known optimum.
[[nodiscard]] std::optional<bool> success(double f, std::optional<double> f_star) noexcept;

/// Sum of positive parts of all relaxed constraint values.
[[nodiscard]] double total_violation(const ConstraintReport& report) noexcept;

/// The three keys compare_solutions looks at.
struct SolutionRank {
    double f = 0.0;
    double max_violation = 0.0;
    bool feasible = false;
};

[[nodiscard]] SolutionRank rank_of(double f, const ConstraintReport& report, double slack = 0.0);
[[nodiscard]] SolutionRank rank_of(const Solution& s, double slack = 0.0);

/// Priority rules. `less` means `a` is better than `b`.
[[nodiscard]] std::weak_ordering compare_solutions(const SolutionRank& a, const SolutionRank& b) noexcept;

/// Strictly better under compare_solutions.
[[nodiscard]] inline bool better(const SolutionRank& a, const SolutionRank& b) noexcept {
    return compare_solutions(a, b) < 0;
}

[[nodiscard]] Vector clip_to_bounds(std::span<const double> x, const ProblemDefinition& problem);

}  // namespace swarmsqp
