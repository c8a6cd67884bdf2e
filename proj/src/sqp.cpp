#include "swarmsqp/sqp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace swarmsqp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kSqrtEps = std::sqrt(std::numeric_limits<double>::epsilon());

constexpr double kArmijo = 1e-4;
constexpr int kMaxHalvings = 20;
constexpr double kElasticRegularisation = 1e-6;
constexpr int kPolishSteps = 5;

Eigen::Map<const Eigen::VectorXd> as_eigen(std::span<const double> v) {
    return {v.data(), static_cast<Eigen::Index>(v.size())};
}

double step_for(double xd, std::optional<double> h) { return h.value_or(kSqrtEps * (1.0 + std::abs(xd))); }

double merit(const PointEvaluation& e, double mu) {
    if (e.non_finite) return kInf;
    return e.f + mu * total_violation(e.report);
}

std::size_t nonbound_rows(const ProblemDefinition& p) { return p.num_inequalities + 2 * p.num_equalities; }

/// Gradient of the Lagrangian restricted to the non-bound rows of build_qp.
Eigen::VectorXd lagrangian_gradient(const Linearization& lin, const Eigen::VectorXd& lam) {
    Eigen::VectorXd r = lin.grad;
    const Eigen::Index q = lin.g.size();
    const Eigen::Index m = lin.h.size();
    if (q > 0) r += lin.Jg.transpose() * lam.head(q);
    if (m > 0) r += lin.Jh.transpose() * (lam.segment(q, m) - lam.segment(q + m, m));
    return r;
}

/// Minimise total linearised violation, then re-solve with the constraints
/// loosened by the minimal slacks.
std::optional<QpResult> elastic_solve(const QpSubproblem& qp, Eigen::Index nb) {
    const Eigen::Index n = qp.dimension();
    const Eigen::Index rows = qp.A_in.rows();
    QpSubproblem p1;
    p1.H = kElasticRegularisation * Eigen::MatrixXd::Identity(n + nb, n + nb);
    p1.g = Eigen::VectorXd::Zero(n + nb);
    p1.g.tail(nb).setOnes();
    p1.A_eq.resize(0, n + nb);
    p1.b_eq.resize(0);
    p1.A_in = Eigen::MatrixXd::Zero(rows + nb, n + nb);
    p1.b_in = Eigen::VectorXd::Zero(rows + nb);
    p1.A_in.topLeftCorner(rows, n) = qp.A_in;
    p1.A_in.block(0, n, nb, nb) = -Eigen::MatrixXd::Identity(nb, nb);
    p1.b_in.head(rows) = qp.b_in;
    p1.A_in.block(rows, n, nb, nb) = -Eigen::MatrixXd::Identity(nb, nb);
    const QpResult r1 = solve_qp(p1);
    if (r1.status != QpStatus::optimal) return std::nullopt;

    QpSubproblem p2 = qp;
    for (Eigen::Index i = 0; i < nb; ++i) {
        const double s = std::max(0.0, r1.d(n + i));
        p2.b_in(i) += s + 1e-12 * std::max(1.0, std::abs(p2.b_in(i)));
    }
    QpResult r2 = solve_qp(p2);
    if (r2.status != QpStatus::optimal) return std::nullopt;
    return r2;
}

struct Iterate {
    Vector x;
    PointEvaluation eval;
};

/// Minimum-norm Newton projections onto the linearised feasible set. Keeps the
/// least-violating point seen; stops once feasible under `slack`.
Iterate feasibility_polish(const ProblemDefinition& problem, Iterate it, double eps, double slack,
                           std::optional<double> fd_step, int max_steps, EvaluationLedger& ledger) {
    const auto n = static_cast<Eigen::Index>(problem.dimension);
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
    for (int k = 0; k < max_steps; ++k) {
        if (it.eval.non_finite || is_feasible(it.eval.report, slack)) break;
        auto lin = fd_linearize(problem, it.x, it.eval.f, it.eval.report.g_values, it.eval.report.h_values, fd_step,
                                ledger);
        if (!lin) break;
        lin->grad.setZero();
        const QpResult qr = solve_qp(build_qp(it.x, I, *lin, problem.lower, problem.upper, eps));
        if (qr.status != QpStatus::optimal) break;
        Vector trial(it.x.size());
        for (std::size_t j = 0; j < trial.size(); ++j) {
            trial[j] = std::clamp(it.x[j] + qr.d(static_cast<Eigen::Index>(j)), problem.lower[j], problem.upper[j]);
        }
        PointEvaluation e = evaluate(problem, trial, eps, ledger, Phase::sqp);
        if (e.non_finite || !(e.report.max_violation < it.eval.report.max_violation)) break;
        it = {std::move(trial), std::move(e)};
    }
    return it;
}

}  // namespace

void SqpConfig::validate() const {
    if (!(tol_x > 0) || !(tol_con > 0) || !(tol_fun > 0) || !(feasibility_slack >= 0)) {
        throw std::invalid_argument("SQP tolerances must be positive");
    }
    if (fd_step && !(*fd_step > 0)) throw std::invalid_argument("fd_step must be positive");
    if (!(epsilon >= 0)) throw std::invalid_argument("epsilon must be non-negative");
    for (double s : variable_scale) {
        if (!(s > 0) || !std::isfinite(s)) throw std::invalid_argument("variable_scale entries must be positive");
    }
}

std::string_view to_string(SqpStatus s) noexcept {
    switch (s) {
        case SqpStatus::converged: return "converged";
        case SqpStatus::step_tolerance: return "step_tolerance";
        case SqpStatus::max_iter: return "max_iter";
        case SqpStatus::qp_infeasible: return "qp_infeasible";
        case SqpStatus::line_search_failure: return "line_search_failure";
        case SqpStatus::non_finite: return "non_finite";
    }
    return "?";
}

std::optional<Vector> fd_gradient(const std::function<double(std::span<const double>)>& fn,
                                  std::span<const double> x, std::optional<double> h, EvaluationLedger& ledger,
                                  std::optional<double> f0) {
    double base = 0.0;
    if (f0) {
        base = *f0;
    } else {
        base = fn(x);
        ledger.charge(Phase::sqp);
    }
    if (!std::isfinite(base)) return std::nullopt;
    Vector grad(x.size());
    Vector xp(x.begin(), x.end());
    for (std::size_t d = 0; d < x.size(); ++d) {
        const double step = step_for(x[d], h);
        xp[d] = x[d] + step;
        const double fp = fn(xp);
        ledger.charge(Phase::sqp);
        xp[d] = x[d];
        if (!std::isfinite(fp)) return std::nullopt;
        grad[d] = (fp - base) / step;
    }
    return grad;
}

std::optional<Linearization> fd_linearize(const ProblemDefinition& problem, std::span<const double> x, double f0,
                                          std::span<const double> g0, std::span<const double> h0,
                                          std::optional<double> h_step, EvaluationLedger& ledger) {
    const std::size_t n = problem.dimension;
    const std::size_t q = problem.num_inequalities;
    const std::size_t m = problem.num_equalities;
    Linearization lin;
    lin.f = f0;
    lin.g = as_eigen(g0);
    lin.h = as_eigen(h0);
    lin.grad.resize(static_cast<Eigen::Index>(n));
    lin.Jg.resize(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(n));
    lin.Jh.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));

    Vector xp(x.begin(), x.end());
    Vector g(q);
    Vector h(m);
    for (std::size_t d = 0; d < n; ++d) {
        double step = step_for(x[d], h_step);
        if (x[d] + step > problem.upper[d]) step = -step;
        xp[d] = x[d] + step;
        const double f = problem.evaluator(xp, g, h);
        ledger.charge(Phase::sqp);
        xp[d] = x[d];
        if (!std::isfinite(f)) return std::nullopt;
        const auto col = static_cast<Eigen::Index>(d);
        lin.grad(col) = (f - f0) / step;
        for (std::size_t j = 0; j < q; ++j) {
            if (!std::isfinite(g[j])) return std::nullopt;
            lin.Jg(static_cast<Eigen::Index>(j), col) = (g[j] - g0[j]) / step;
        }
        for (std::size_t j = 0; j < m; ++j) {
            if (!std::isfinite(h[j])) return std::nullopt;
            lin.Jh(static_cast<Eigen::Index>(j), col) = (h[j] - h0[j]) / step;
        }
    }
    return lin;
}

Eigen::MatrixXd bfgs_update(const Eigen::MatrixXd& B, const Eigen::VectorXd& s, const Eigen::VectorXd& y,
                            double theta) {
    const Eigen::VectorXd Bs = B * s;
    const double sBs = s.dot(Bs);
    if (!(sBs > 0.0) || !std::isfinite(sBs)) return B;
    double sy = s.dot(y);
    Eigen::VectorXd r = y;
    if (sy < theta * sBs) {
        const double phi = (1.0 - theta) * sBs / (sBs - sy);
        r = phi * y + (1.0 - phi) * Bs;
        sy = s.dot(r);
    }
    if (!(sy > 0.0) || !r.allFinite()) return B;
    Eigen::MatrixXd out = B + (r * r.transpose()) / sy - (Bs * Bs.transpose()) / sBs;
    return 0.5 * (out + out.transpose());
}

QpSubproblem build_qp(std::span<const double> x, const Eigen::MatrixXd& B, const Linearization& lin,
                      std::span<const double> lower, std::span<const double> upper, double epsilon) {
    const Eigen::Index n = static_cast<Eigen::Index>(x.size());
    const Eigen::Index q = lin.g.size();
    const Eigen::Index m = lin.h.size();
    QpSubproblem qp;
    qp.H = B;
    qp.g = lin.grad;
    qp.A_eq.resize(0, n);
    qp.b_eq.resize(0);
    qp.A_in = Eigen::MatrixXd::Zero(q + 2 * m + 2 * n, n);
    qp.b_in.resize(q + 2 * m + 2 * n);
    if (q > 0) {
        qp.A_in.topRows(q) = lin.Jg;
        qp.b_in.head(q) = -lin.g;
    }
    for (Eigen::Index j = 0; j < m; ++j) {
        qp.A_in.row(q + j) = lin.Jh.row(j);
        qp.b_in(q + j) = epsilon - lin.h(j);
        qp.A_in.row(q + m + j) = -lin.Jh.row(j);
        qp.b_in(q + m + j) = epsilon + lin.h(j);
    }
    const Eigen::Index off = q + 2 * m;
    for (Eigen::Index d = 0; d < n; ++d) {
        qp.A_in(off + d, d) = 1.0;
        qp.b_in(off + d) = upper[static_cast<std::size_t>(d)] - x[static_cast<std::size_t>(d)];
        qp.A_in(off + n + d, d) = -1.0;
        qp.b_in(off + n + d) = x[static_cast<std::size_t>(d)] - lower[static_cast<std::size_t>(d)];
    }
    return qp;
}

LineSearchResult merit_line_search(const ProblemDefinition& problem, std::span<const double> x, double phi0,
                                   std::span<const double> d, double mu, double directional, double epsilon,
                                   EvaluationLedger& ledger) {
    LineSearchResult out;
    out.x.assign(x.begin(), x.end());
    const bool zero = std::all_of(d.begin(), d.end(), [](double v) { return v == 0.0; });
    if (zero) {
        out.alpha = 1.0;
        out.success = true;
        return out;
    }
    const double D = std::min(directional, 0.0);
    double alpha = 1.0;
    Vector trial(x.size());
    for (int k = 0; k <= kMaxHalvings; ++k, alpha *= 0.5) {
        for (std::size_t j = 0; j < x.size(); ++j) {
            trial[j] = std::clamp(x[j] + alpha * d[j], problem.lower[j], problem.upper[j]);
        }
        PointEvaluation e = evaluate(problem, trial, epsilon, ledger, Phase::sqp);
        ++out.trials;
        const double phi = merit(e, mu);
        if (phi <= phi0 + kArmijo * alpha * D) {
            out.alpha = alpha;
            out.success = true;
            out.x = trial;
            out.evaluation = std::move(e);
            return out;
        }
    }
    out.success = false;
    return out;
}

SqpResult sqp_solve(const ProblemDefinition& problem, std::span<const double> x0, const SqpConfig& config,
                    EvaluationLedger& ledger) {
    config.validate();
    const std::size_t start = ledger.sqp_fes();
    const auto n = static_cast<Eigen::Index>(problem.dimension);
    const auto nb = static_cast<Eigen::Index>(nonbound_rows(problem));
    const double eps = config.epsilon;
    const double slack = config.feasibility_slack;

    SqpResult result;
    Vector x = clip_to_bounds(x0, problem);
    PointEvaluation cur = evaluate(problem, x, eps, ledger, Phase::sqp);

    Solution best = Solution::from(x, cur);
    auto consider = [&](const Vector& xs, const PointEvaluation& e) {
        const Solution s = Solution::from(xs, e);
        if (better(rank_of(s, slack), rank_of(best, slack))) best = s;
        if (config.target_f && !result.fes_to_target && !e.non_finite && is_feasible(e.report, slack) &&
            success(e.f, *config.target_f)) {
            result.fes_to_target = ledger.sqp_fes() - start;
        }
    };
    consider(x, cur);

    auto finish = [&](SqpStatus status) {
        result.status = status;
        const bool at_iterate = status == SqpStatus::converged || status == SqpStatus::step_tolerance;
        if (!at_iterate && config.max_iterations > 0 && !cur.non_finite && !is_feasible(cur.report, slack)) {
            Iterate p = feasibility_polish(problem, {x, cur}, eps, slack, config.fd_step, kPolishSteps, ledger);
            consider(p.x, p.eval);
        }
        const Solution s = at_iterate ? Solution::from(x, cur) : best;
        result.x = s.x;
        result.f = s.f;
        result.report = s.report;
        result.non_finite = s.non_finite;
        result.fes = ledger.sqp_fes() - start;
        return result;
    };

    if (cur.non_finite) return finish(SqpStatus::non_finite);

    Eigen::MatrixXd B0 = Eigen::MatrixXd::Identity(n, n);
    if (!config.variable_scale.empty()) {
        if (config.variable_scale.size() != problem.dimension) {
            throw std::invalid_argument("variable_scale must have one entry per dimension");
        }
        for (Eigen::Index d = 0; d < n; ++d) {
            const double s = config.variable_scale[static_cast<std::size_t>(d)];
            B0(d, d) = 1.0 / (s * s);
        }
    }
    Eigen::MatrixXd B = B0;
    double mu = 0.0;

    bool have_prev = false;
    Linearization prev;
    Eigen::VectorXd prev_lambda;
    Eigen::VectorXd s_prev;

    for (std::size_t iter = 0; iter < config.max_iterations; ++iter) {
        auto lin = fd_linearize(problem, x, cur.f, cur.report.g_values, cur.report.h_values, config.fd_step, ledger);
        if (!lin) return finish(SqpStatus::non_finite);
        if (have_prev) {
            const Eigen::VectorXd y = lagrangian_gradient(*lin, prev_lambda) - lagrangian_gradient(prev, prev_lambda);
            B = bfgs_update(B, s_prev, y);
        }

        const double phi_mu_free_viol = total_violation(cur.report);
        std::optional<LineSearchResult> accepted;
        Eigen::VectorXd lambda;
        double phi0 = 0.0;
        bool qp_failed = false;
        for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
            if (attempt == 1) {
                if (B.isApprox(B0)) break;
                B = B0;
            }
            const QpSubproblem qp = build_qp(x, B, *lin, problem.lower, problem.upper, eps);
            QpResult qr = solve_qp(qp);
            if (qr.status == QpStatus::not_positive_definite) {
                qp_failed = true;
                continue;
            }
            if (qr.status != QpStatus::optimal) {
                auto el = elastic_solve(qp, nb);
                if (!el) {
                    qp_failed = true;
                    continue;
                }
                qr = std::move(*el);
            }
            qp_failed = false;
            lambda = qr.lambda_in.head(nb);
            const Eigen::VectorXd& d = qr.d;

            if (attempt == 0) {
                double comp = 0.0;
                for (Eigen::Index i = 0; i < nb; ++i) comp = std::max(comp, std::abs(lambda(i) * qp.b_in(i)));
                const double stat = (B * d).cwiseAbs().maxCoeff();
                result.kkt_residual = std::max(stat, comp) / std::max(1.0, std::abs(cur.f));
                const bool feasible = is_feasible(cur.report, slack);
                if (result.kkt_residual <= config.tol_fun && feasible) return finish(SqpStatus::converged);
                const double xnorm = as_eigen(x).cwiseAbs().maxCoeff();
                if (feasible && d.cwiseAbs().maxCoeff() <= config.tol_x * std::max(1.0, xnorm)) {
                    return finish(SqpStatus::step_tolerance);
                }
            }

            const double lam_max = nb > 0 ? lambda.cwiseAbs().maxCoeff() : 0.0;
            mu = std::max(lam_max, 0.5 * (mu + lam_max));
            phi0 = cur.f + mu * phi_mu_free_viol;
            const double D = lin->grad.dot(d) - mu * phi_mu_free_viol;
            auto ls = merit_line_search(problem, x, phi0, Vector(d.data(), d.data() + d.size()), mu, D, eps, ledger);
            if (ls.success) accepted = std::move(ls);
        }
        if (!accepted) return finish(qp_failed ? SqpStatus::qp_infeasible : SqpStatus::line_search_failure);

        ++result.iterations;
        if (accepted->trials == 0) {
            return finish(is_feasible(cur.report, slack) ? SqpStatus::step_tolerance : SqpStatus::line_search_failure);
        }

        s_prev = as_eigen(accepted->x) - as_eigen(x);
        prev = std::move(*lin);
        prev_lambda = lambda;
        have_prev = true;
        x = std::move(accepted->x);
        cur = std::move(accepted->evaluation);
        consider(x, cur);
        const double phi1 = merit(cur, mu);
        if (std::abs(phi1 - phi0) <= config.tol_fun * std::max(1.0, std::abs(phi0)) && is_feasible(cur.report, slack)) {
            return finish(SqpStatus::step_tolerance);
        }
        if (s_prev.cwiseAbs().maxCoeff() == 0.0) {
            return finish(is_feasible(cur.report, slack) ? SqpStatus::step_tolerance : SqpStatus::line_search_failure);
        }
    }
    return finish(SqpStatus::max_iter);
}

}  // namespace swarmsqp
