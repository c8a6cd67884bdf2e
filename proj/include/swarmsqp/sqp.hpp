#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string_view>

#include <Eigen/Dense>

#include "swarmsqp/problem.hpp"
#include "swarmsqp/qp.hpp"

namespace swarmsqp {

struct SqpConfig {
    double tol_x = 1e-12;
    double tol_con = 1e-14;
    double tol_fun = 1e-14;
    double feasibility_slack = kSqpFeasibilitySlack;
    std::size_t max_iterations = 400;
    /// Absolute finite-difference step; default sqrt(machine eps) * (1 + |x_d|).
    std::optional<double> fd_step;
    double epsilon = kEqualityTolerance;
    /// When set, SqpResult::fes_to_target records the SQP FE count at which a
    /// feasible iterate first came within kSuccessAccuracy of this value.
    std::optional<double> target_f;
    /// Optional per-variable scale; the initial Hessian becomes diag(1 / scale^2).
    Vector variable_scale;

    /// Throws std::invalid_argument.
    void validate() const;
};

enum class SqpStatus { converged, step_tolerance, max_iter, qp_infeasible, line_search_failure, non_finite };

[[nodiscard]] std::string_view to_string(SqpStatus s) noexcept;

struct SqpResult {
    Vector x;
    double f = 0.0;
    ConstraintReport report;
    bool non_finite = false;
    SqpStatus status = SqpStatus::max_iter;
    std::size_t iterations = 0;
    std::size_t fes = 0;
    double kkt_residual = 0.0;
    std::optional<std::size_t> fes_to_target;

    [[nodiscard]] bool feasible(double slack = kSqpFeasibilitySlack) const {
        return !non_finite && is_feasible(report, slack);
    }
    [[nodiscard]] Solution solution() const { return Solution{x, f, report, non_finite}; }
};

/// Forward differences with step h per coordinate (default sqrt(eps) * (1 + |x_d|)).
/// Issues n FEs when f0 is supplied, else n + 1, each charged to the sqp phase.
/// Returns nullopt if any sample is non-finite.
[[nodiscard]] std::optional<Vector> fd_gradient(const std::function<double(std::span<const double>)>& fn,
                                                std::span<const double> x, std::optional<double> h,
                                                EvaluationLedger& ledger, std::optional<double> f0 = std::nullopt);

/// Objective and constraint values with their forward-difference derivatives.
struct Linearization {
    double f = 0.0;
    Eigen::VectorXd grad;
    Eigen::VectorXd g;
    Eigen::MatrixXd Jg;
    Eigen::VectorXd h;
    Eigen::MatrixXd Jh;
};

/// n FEs: the base point's values are supplied by the caller. A coordinate whose
/// forward step would leave the box uses a backward step instead.
[[nodiscard]] std::optional<Linearization> fd_linearize(const ProblemDefinition& problem,
                                                        std::span<const double> x, double f0,
                                                        std::span<const double> g0, std::span<const double> h0,
                                                        std::optional<double> h_step, EvaluationLedger& ledger);

/// Powell-damped BFGS update.
[[nodiscard]] Eigen::MatrixXd bfgs_update(const Eigen::MatrixXd& B, const Eigen::VectorXd& s,
                                          const Eigen::VectorXd& y, double theta = 0.2);

/// Rows of the returned QP, in order: inequalities, equality pairs (+h, -h), bounds (upper, lower).
[[nodiscard]] QpSubproblem build_qp(std::span<const double> x, const Eigen::MatrixXd& B,
                                    const Linearization& lin, std::span<const double> lower,
                                    std::span<const double> upper, double epsilon);

struct LineSearchResult {
    double alpha = 1.0;
    bool success = false;
    Vector x;
    PointEvaluation evaluation;
    std::size_t trials = 0;
};

/// Backtracking on phi = f + mu * total_violation, alpha in {1, 1/2, ..., 2^-20},
/// Armijo constant 1e-4. `directional` is the merit slope along d (clamped to <= 0).
[[nodiscard]] LineSearchResult merit_line_search(const ProblemDefinition& problem, std::span<const double> x,
                                                 double phi0, std::span<const double> d, double mu,
                                                 double directional, double epsilon, EvaluationLedger& ledger);

[[nodiscard]] SqpResult sqp_solve(const ProblemDefinition& problem, std::span<const double> x0,
                                  const SqpConfig& config, EvaluationLedger& ledger);

}  // namespace swarmsqp
