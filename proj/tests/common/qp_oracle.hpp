#pragma once

// Brute-force active-set enumeration for small strictly convex QPs, plus a
// generator of random well-posed instances.

#include <cstdint>
#include <limits>
#include <algorithm>
#include <optional>
#include <random>

#include <Eigen/Dense>

#include "swarmsqp/qp.hpp"

namespace oracle {

struct QpAnswer {
    Eigen::VectorXd d;
    double objective = 0.0;
};

inline double qp_objective(const swarmsqp::QpSubproblem& qp, const Eigen::VectorXd& d) {
    return 0.5 * d.dot(qp.H * d) + qp.g.dot(d);
}

// Tries every subset of inequalities as the active set; keeps KKT points that
// are primal feasible with non-negative multipliers.
inline std::optional<QpAnswer> brute_force_qp(const swarmsqp::QpSubproblem& qp, double tol = 1e-9) {
    const Eigen::Index n = qp.dimension();
    const Eigen::Index me = qp.A_eq.rows();
    const Eigen::Index mi = qp.A_in.rows();
    std::optional<QpAnswer> best;
    for (std::uint32_t mask = 0; mask < (1u << mi); ++mask) {
        std::vector<Eigen::Index> act;
        for (Eigen::Index j = 0; j < mi; ++j) {
            if (mask & (1u << j)) act.push_back(j);
        }
        const Eigen::Index m = me + static_cast<Eigen::Index>(act.size());
        if (m > n) continue;
        Eigen::MatrixXd A(m, n);
        Eigen::VectorXd b(m);
        if (me > 0) {
            A.topRows(me) = qp.A_eq;
            b.head(me) = qp.b_eq;
        }
        for (std::size_t k = 0; k < act.size(); ++k) {
            A.row(me + static_cast<Eigen::Index>(k)) = qp.A_in.row(act[k]);
            b(me + static_cast<Eigen::Index>(k)) = qp.b_in(act[k]);
        }
        Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n + m, n + m);
        K.topLeftCorner(n, n) = qp.H;
        K.topRightCorner(n, m) = A.transpose();
        K.bottomLeftCorner(m, n) = A;
        Eigen::VectorXd rhs(n + m);
        rhs.head(n) = -qp.g;
        rhs.tail(m) = b;
        Eigen::FullPivLU<Eigen::MatrixXd> lu(K);
        if (!lu.isInvertible()) continue;
        const Eigen::VectorXd sol = lu.solve(rhs);
        const Eigen::VectorXd d = sol.head(n);
        const Eigen::VectorXd lam = sol.tail(m);
        bool ok = true;
        for (Eigen::Index k = me; k < m && ok; ++k) ok = lam(k) >= -tol;
        if (mi > 0 && ok) ok = ((qp.A_in * d - qp.b_in).array() <= tol).all();
        if (!ok) continue;
        const double obj = qp_objective(qp, d);
        if (!best || obj < best->objective) best = QpAnswer{d, obj};
    }
    return best;
}

// Strictly convex H, Gaussian constraint rows (linearly independent with
// probability one) and right-hand sides built around a feasible point.
inline swarmsqp::QpSubproblem random_qp(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> dim(1, 4);
    std::uniform_int_distribution<int> cons(0, 4);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int n = dim(rng);
    const int m = cons(rng);
    const int me = m == 0 ? 0 : std::uniform_int_distribution<int>(0, std::min(m, n - 1))(rng);
    const int mi = m - me;

    swarmsqp::QpSubproblem qp;
    Eigen::MatrixXd M(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) M(i, j) = gauss(rng);
    qp.H = M * M.transpose() + 0.5 * Eigen::MatrixXd::Identity(n, n);
    qp.g.resize(n);
    for (int i = 0; i < n; ++i) qp.g(i) = 3.0 * gauss(rng);

    Eigen::VectorXd d0(n);
    for (int i = 0; i < n; ++i) d0(i) = gauss(rng);
    qp.A_eq.resize(me, n);
    qp.A_in.resize(mi, n);
    for (int r = 0; r < me; ++r)
        for (int j = 0; j < n; ++j) qp.A_eq(r, j) = gauss(rng);
    for (int r = 0; r < mi; ++r)
        for (int j = 0; j < n; ++j) qp.A_in(r, j) = gauss(rng);
    qp.b_eq = qp.A_eq * d0;
    qp.b_in = qp.A_in * d0;
    for (int r = 0; r < mi; ++r) qp.b_in(r) += unit(rng) < 0.3 ? 0.0 : unit(rng);
    return qp;
}

}  // namespace oracle
