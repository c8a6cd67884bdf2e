#include "swarmsqp/qp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace swarmsqp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Internally every constraint is n'x >= b (equalities first, held as equalities).
struct Constraints {
    Eigen::MatrixXd N;  // one column per constraint
    Eigen::VectorXd b;
    Eigen::Index meq = 0;
};

Constraints normalise(const QpSubproblem& qp) {
    const Eigen::Index n = qp.dimension();
    const Eigen::Index meq = qp.A_eq.rows();
    const Eigen::Index min = qp.A_in.rows();
    Constraints c;
    c.meq = meq;
    c.N.resize(n, meq + min);
    c.b.resize(meq + min);
    for (Eigen::Index i = 0; i < meq; ++i) {
        c.N.col(i) = qp.A_eq.row(i).transpose();
        c.b(i) = qp.b_eq(i);
    }
    for (Eigen::Index i = 0; i < min; ++i) {
        c.N.col(meq + i) = -qp.A_in.row(i).transpose();
        c.b(meq + i) = -qp.b_in(i);
    }
    return c;
}

/// Projected direction z = H_s n_p and r = N* n_p for the current working set.
class WorkingSet {
public:
    explicit WorkingSet(const Eigen::LLT<Eigen::MatrixXd>& llt) : llt_(llt) {}

    void refresh(const Eigen::MatrixXd& N, const std::vector<Eigen::Index>& active) {
        const Eigen::Index n = N.rows();
        const auto q = static_cast<Eigen::Index>(active.size());
        Eigen::MatrixXd A(n, q);
        for (Eigen::Index k = 0; k < q; ++k) A.col(k) = N.col(active[static_cast<std::size_t>(k)]);
        M_ = llt_.matrixL().solve(A);
        qr_ = Eigen::HouseholderQR<Eigen::MatrixXd>(M_);
        q_ = q;
    }

    /// Returns false when n_p lies (numerically) in the span of the working set.
    bool directions(const Eigen::VectorXd& np, Eigen::VectorXd& z, Eigen::VectorXd& r) const {
        const Eigen::VectorXd w = llt_.matrixL().solve(np);
        Eigen::VectorXd proj = w;
        r.resize(q_);
        if (q_ > 0) {
            const Eigen::MatrixXd Q = qr_.householderQ() * Eigen::MatrixXd::Identity(M_.rows(), q_);
            const Eigen::VectorXd c = Q.transpose() * w;
            proj = w - Q * c;
            const Eigen::MatrixXd R = qr_.matrixQR().topLeftCorner(q_, q_).triangularView<Eigen::Upper>();
            r = R.triangularView<Eigen::Upper>().solve(c);
        }
        if (q_ >= M_.rows() || proj.norm() <= 1e-10 * w.norm()) {
            z = Eigen::VectorXd::Zero(w.size());
            return false;
        }
        z = llt_.matrixU().solve(proj);
        return true;
    }

private:
    const Eigen::LLT<Eigen::MatrixXd>& llt_;
    Eigen::MatrixXd M_;
    Eigen::HouseholderQR<Eigen::MatrixXd> qr_;
    Eigen::Index q_ = 0;
};

}  // namespace

std::string_view to_string(QpStatus s) noexcept {
    switch (s) {
        case QpStatus::optimal: return "optimal";
        case QpStatus::infeasible: return "infeasible";
        case QpStatus::not_positive_definite: return "not_positive_definite";
        case QpStatus::iteration_limit: return "iteration_limit";
    }
    return "?";
}

QpResult solve_qp(const QpSubproblem& qp) {
    const Eigen::Index n = qp.dimension();
    QpResult out;
    out.d = Eigen::VectorXd::Zero(n);
    out.lambda_eq = Eigen::VectorXd::Zero(qp.A_eq.rows());
    out.lambda_in = Eigen::VectorXd::Zero(qp.A_in.rows());

    Eigen::LLT<Eigen::MatrixXd> llt(qp.H);
    if (llt.info() != Eigen::Success) {
        out.status = QpStatus::not_positive_definite;
        return out;
    }
    const Constraints c = normalise(qp);
    const Eigen::Index m = c.N.cols();

    Eigen::VectorXd x = -llt.solve(qp.g);
    std::vector<Eigen::Index> active;
    std::vector<double> u;
    WorkingSet ws(llt);
    ws.refresh(c.N, active);

    Eigen::VectorXd norms(m);
    for (Eigen::Index i = 0; i < m; ++i) norms(i) = std::max(c.N.col(i).norm(), 1e-300);

    auto slack = [&](Eigen::Index i) { return c.N.col(i).dot(x) - c.b(i); };
    auto feas_tol = [&](Eigen::Index i) {
        return 1e-13 * std::max({1.0, std::abs(c.b(i)), norms(i) * x.cwiseAbs().maxCoeff()});
    };

    Eigen::VectorXd z;
    Eigen::VectorXd r;

    // Equalities enter first and are never dropped.
    for (Eigen::Index i = 0; i < c.meq; ++i) {
        const Eigen::VectorXd np = c.N.col(i);
        const bool independent = ws.directions(np, z, r);
        const double zn = z.dot(np);
        const double s = slack(i);
        if (!independent) {
            if (std::abs(s) <= feas_tol(i) * 1e3) continue;  // redundant equality
            out.status = QpStatus::infeasible;
            out.d = x;
            return out;
        }
        const double t = -s / zn;
        x += t * z;
        for (std::size_t k = 0; k < u.size(); ++k) u[k] -= t * r(static_cast<Eigen::Index>(k));
        active.push_back(i);
        u.push_back(t);
        ws.refresh(c.N, active);
    }

    const std::size_t max_iter = 50 * static_cast<std::size_t>(n + m) + 50;
    std::vector<char> in_active(static_cast<std::size_t>(m), 0);
    for (Eigen::Index a : active) in_active[static_cast<std::size_t>(a)] = 1;

    while (true) {
        // Step 1: most violated inequality (normalised).
        Eigen::Index p = -1;
        double worst = 0.0;
        for (Eigen::Index i = c.meq; i < m; ++i) {
            if (in_active[static_cast<std::size_t>(i)]) continue;
            const double s = slack(i);
            if (s < -feas_tol(i) && s / norms(i) < worst) {
                worst = s / norms(i);
                p = i;
            }
        }
        if (p < 0) break;

        double up = 0.0;
        const Eigen::VectorXd np = c.N.col(p);
        while (true) {
            if (++out.iterations > max_iter) {
                out.status = QpStatus::iteration_limit;
                out.d = x;
                return out;
            }
            const bool z_zero = !ws.directions(np, z, r);
            const double zn = z.dot(np);

            double t1 = kInf;
            std::size_t drop = u.size();
            for (std::size_t k = 0; k < u.size(); ++k) {
                if (active[k] < c.meq) continue;
                const double rk = r(static_cast<Eigen::Index>(k));
                if (rk > 0.0 && u[k] / rk < t1) {
                    t1 = u[k] / rk;
                    drop = k;
                }
            }
            const double t2 = z_zero ? kInf : -slack(p) / zn;
            const double t = std::min(t1, t2);
            if (!std::isfinite(t)) {
                out.status = QpStatus::infeasible;
                out.d = x;
                return out;
            }

            if (z_zero) {
                // Dual step only.
                for (std::size_t k = 0; k < u.size(); ++k) u[k] -= t * r(static_cast<Eigen::Index>(k));
                up += t;
            } else {
                x += t * z;
                for (std::size_t k = 0; k < u.size(); ++k) u[k] -= t * r(static_cast<Eigen::Index>(k));
                up += t;
                if (t2 <= t1) {
                    active.push_back(p);
                    u.push_back(up);
                    in_active[static_cast<std::size_t>(p)] = 1;
                    ws.refresh(c.N, active);
                    break;
                }
            }
            in_active[static_cast<std::size_t>(active[drop])] = 0;
            active.erase(active.begin() + static_cast<std::ptrdiff_t>(drop));
            u.erase(u.begin() + static_cast<std::ptrdiff_t>(drop));
            ws.refresh(c.N, active);
            if (slack(p) >= -feas_tol(p)) break;
        }
    }

    auto pack = [&](const Eigen::VectorXd& xs, const std::vector<double>& us) {
        QpResult res;
        res.d = xs;
        res.lambda_eq = Eigen::VectorXd::Zero(qp.A_eq.rows());
        res.lambda_in = Eigen::VectorXd::Zero(qp.A_in.rows());
        for (std::size_t k = 0; k < active.size(); ++k) {
            const Eigen::Index i = active[k];
            if (i < c.meq) {
                res.lambda_eq(i) = -us[k];
            } else {
                res.lambda_in(i - c.meq) = std::max(0.0, us[k]);
            }
        }
        res.status = QpStatus::optimal;
        res.iterations = out.iterations;
        return res;
    };
    out = pack(x, u);

    // Re-solve the equality-constrained problem on the final working set; keep
    // whichever of the two answers has the smaller KKT residual.
    if (!active.empty()) {
        const auto q = static_cast<Eigen::Index>(active.size());
        Eigen::MatrixXd W(n, q);
        Eigen::VectorXd bw(q);
        for (Eigen::Index k = 0; k < q; ++k) {
            W.col(k) = c.N.col(active[static_cast<std::size_t>(k)]);
            bw(k) = c.b(active[static_cast<std::size_t>(k)]);
        }
        const Eigen::MatrixXd M = llt.matrixL().solve(W);
        const Eigen::VectorXd lg = llt.matrixL().solve(qp.g);
        const Eigen::VectorXd us = (M.transpose() * M).ldlt().solve(bw + M.transpose() * lg);
        Eigen::VectorXd xs = llt.matrixU().solve(M * us - lg);
        std::vector<double> uv(us.data(), us.data() + us.size());
        const QpResult polished = pack(xs, uv);
        auto score = [&](const QpResult& res) {
            const QpKkt k = qp_kkt_residuals(qp, res);
            return std::max({k.stationarity, k.primal, k.dual, k.complementarity});
        };
        bool dual_ok = true;
        for (std::size_t k = 0; k < uv.size(); ++k) {
            if (active[k] >= c.meq && uv[k] < 0.0) dual_ok = false;
        }
        if (dual_ok && score(polished) < score(out)) out = polished;
    }
    return out;
}

QpKkt qp_kkt_residuals(const QpSubproblem& qp, const QpResult& r) {
    QpKkt k;
    Eigen::VectorXd grad = qp.H * r.d + qp.g;
    if (qp.A_eq.rows() > 0) grad += qp.A_eq.transpose() * r.lambda_eq;
    if (qp.A_in.rows() > 0) grad += qp.A_in.transpose() * r.lambda_in;
    k.stationarity = grad.size() ? grad.cwiseAbs().maxCoeff() : 0.0;
    for (Eigen::Index i = 0; i < qp.A_eq.rows(); ++i) {
        k.primal = std::max(k.primal, std::abs(qp.A_eq.row(i).dot(r.d) - qp.b_eq(i)));
    }
    for (Eigen::Index i = 0; i < qp.A_in.rows(); ++i) {
        const double c = qp.A_in.row(i).dot(r.d) - qp.b_in(i);
        k.primal = std::max(k.primal, c);
        k.dual = std::max(k.dual, -r.lambda_in(i));
        k.complementarity = std::max(k.complementarity, std::abs(r.lambda_in(i) * c));
    }
    return k;
}

}  // namespace swarmsqp
