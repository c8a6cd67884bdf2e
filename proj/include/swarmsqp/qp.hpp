#pragma once

#include <cstddef>
#include <string_view>

#include <Eigen/Dense>

namespace swarmsqp {

/// minimise 1/2 d'Hd + g'd  s.t.  A_eq d = b_eq,  A_in d <= b_in.
struct QpSubproblem {
    Eigen::MatrixXd H;
    Eigen::VectorXd g;
    Eigen::MatrixXd A_eq;
    Eigen::VectorXd b_eq;
    Eigen::MatrixXd A_in;
    Eigen::VectorXd b_in;

    [[nodiscard]] Eigen::Index dimension() const { return g.size(); }
};

enum class QpStatus { optimal, infeasible, not_positive_definite, iteration_limit };

[[nodiscard]] std::string_view to_string(QpStatus s) noexcept;

/// Multipliers follow the Lagrangian 1/2 d'Hd + g'd + l_eq'(A_eq d - b_eq) + l_in'(A_in d - b_in),
/// so l_in >= 0 at a solution and H d + g + A_eq' l_eq + A_in' l_in = 0.
struct QpResult {
    Eigen::VectorXd d;
    Eigen::VectorXd lambda_eq;
    Eigen::VectorXd lambda_in;
    QpStatus status = QpStatus::optimal;
    std::size_t iterations = 0;
};

/// Goldfarb-Idnani dual active-set method.
[[nodiscard]] QpResult solve_qp(const QpSubproblem& qp);

struct QpKkt {
    double stationarity = 0.0;
    double primal = 0.0;         // largest constraint violation
    double dual = 0.0;           // largest negative inequality multiplier magnitude
    double complementarity = 0.0;
};

[[nodiscard]] QpKkt qp_kkt_residuals(const QpSubproblem& qp, const QpResult& r);

}  // namespace swarmsqp
