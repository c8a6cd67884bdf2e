#include <cmath>
#include <random>

#include "doctest.h"
#include "swarmsqp/benchmarks.hpp"
#include "swarmsqp/sqp.hpp"

using namespace swarmsqp;

namespace {

ProblemDefinition square_1d() {
    return ProblemDefinition::from_functions(
        "square", {-10.0}, {10.0}, [](std::span<const double> x) { return x[0] * x[0]; }, {}, {});
}

std::function<double(std::span<const double>)> objective_of(const ProblemDefinition& p) {
    return [&p](std::span<const double> x) {
        Vector g(p.num_inequalities), h(p.num_equalities);
        return p.evaluator(x, g, h);
    };
}

bool positive_definite(const Eigen::MatrixXd& B) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(B);
    return es.eigenvalues().minCoeff() > 0.0;
}

}  // namespace

TEST_SUITE("sqp") {
    TEST_CASE("config validation") {
        SqpConfig c;
        CHECK_NOTHROW(c.validate());
        CHECK(c.tol_x == 1e-12);
        CHECK(c.feasibility_slack == 1e-12);
        c.tol_fun = 0.0;
        CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    }

    TEST_CASE("forward differences") {
        EvaluationLedger ledger;
        auto sq = [](std::span<const double> x) { return x[0] * x[0]; };
        const double x3[] = {3.0};
        const auto g = fd_gradient(sq, x3, 1e-7, ledger);
        REQUIRE(g);
        CHECK(std::abs((*g)[0] - 6.0) <= 1e-5);
        CHECK(ledger.sqp_fes() == 2);
        auto lin = [](std::span<const double> x) { return 2.0 * x[0] + 1.0; };
        for (double x : {-7.0, 0.0, 0.3, 41.0}) {
            const double xs[] = {x};
            const auto gl = fd_gradient(lin, xs, std::nullopt, ledger, 2.0 * x + 1.0);
            REQUIRE(gl);
            CHECK((*gl)[0] == doctest::Approx(2.0).epsilon(1e-7));
        }
        auto bad = [](std::span<const double> x) { return x[0] > 0.5 ? std::nan("") : 1.0; };
        const double x0[] = {0.5};
        CHECK_FALSE(fd_gradient(bad, x0, 0.1, ledger).has_value());
    }

    TEST_CASE("forward differences match analytic gradients") {
        std::mt19937_64 rng(7);
        const auto& g06 = lookup("g06").problem;
        const auto& g11 = lookup("g11").problem;
        auto grad06 = [](const Vector& x) {
            return Vector{3.0 * std::pow(x[0] - 10.0, 2), 3.0 * std::pow(x[1] - 20.0, 2)};
        };
        auto grad11 = [](const Vector& x) { return Vector{2.0 * x[0], 2.0 * (x[1] - 1.0)}; };
        for (int trial = 0; trial < 200; ++trial) {
            for (const auto* p : {&g06, &g11}) {
                Vector x(2);
                for (std::size_t j = 0; j < 2; ++j) {
                    x[j] = std::uniform_real_distribution<double>(p->lower[j], p->upper[j])(rng);
                }
                EvaluationLedger ledger;
                const auto fd = fd_gradient(objective_of(*p), x, std::nullopt, ledger);
                REQUIRE(fd);
                const Vector an = p == &g06 ? grad06(x) : grad11(x);
                const double err = std::hypot((*fd)[0] - an[0], (*fd)[1] - an[1]);
                CHECK(err <= 1e-4 * std::max(1.0, std::hypot(an[0], an[1])));
            }
        }
    }

    TEST_CASE("linearization spends n FEs") {
        const auto& p = lookup("g06").problem;
        const Vector x{14.095, 0.84296};
        EvaluationLedger ledger;
        const auto e = evaluate(p, x, kEqualityTolerance, ledger, Phase::sqp);
        const auto lin = fd_linearize(p, x, e.f, e.report.g_values, e.report.h_values, std::nullopt, ledger);
        REQUIRE(lin);
        CHECK(ledger.sqp_fes() == 3);
        CHECK(lin->Jg.rows() == 2);
        CHECK(lin->Jg.cols() == 2);
        CHECK(lin->Jg(0, 0) == doctest::Approx(-2.0 * (x[0] - 5.0)).epsilon(1e-6));
    }

    TEST_CASE("BFGS fixed point and convergence") {
        const Eigen::MatrixXd B = Eigen::Matrix2d{{3.0, 1.0}, {1.0, 2.0}};
        const Eigen::VectorXd s = Eigen::Vector2d(0.4, -1.1);
        CHECK((bfgs_update(B, s, B * s) - B).norm() <= 1e-14);

        const Eigen::Matrix2d H{{2.0, 0.0}, {0.0, 4.0}};
        Eigen::MatrixXd A = Eigen::MatrixXd::Identity(2, 2);
        for (const Eigen::Vector2d& step : {Eigen::Vector2d(1.0, 0.0), Eigen::Vector2d(0.0, 1.0)}) {
            A = bfgs_update(A, step, H * step);
        }
        CHECK((A - H).norm() <= 1e-8);
    }

    TEST_CASE("damped BFGS stays positive definite") {
        std::mt19937_64 rng(99);
        std::normal_distribution<double> gauss;
        int negative = 0;
        for (int trial = 0; trial < 2000; ++trial) {
            const int n = 1 + trial % 5;
            Eigen::MatrixXd M(n, n);
            for (int i = 0; i < n * n; ++i) M.data()[i] = gauss(rng);
            const Eigen::MatrixXd B = M * M.transpose() + 0.1 * Eigen::MatrixXd::Identity(n, n);
            Eigen::VectorXd s(n), y(n);
            for (int i = 0; i < n; ++i) {
                s(i) = gauss(rng);
                y(i) = gauss(rng);
            }
            if (s.dot(y) < 0.0) ++negative;
            CHECK(positive_definite(bfgs_update(B, s, y)));
        }
        CHECK(negative > 500);
    }

    TEST_CASE("QP rows") {
        Linearization lin;
        lin.grad = Eigen::Vector2d(1.0, -1.0);
        lin.g = Eigen::VectorXd::Constant(1, 1.0);
        lin.Jg = Eigen::MatrixXd(1, 2);
        lin.Jg << 1.0, 0.0;
        lin.h.resize(0);
        lin.Jh.resize(0, 2);
        const Vector x{1.0, 3.0}, lo{-10.0, 0.0}, hi{10.0, 10.0};
        const QpSubproblem qp = build_qp(x, Eigen::MatrixXd::Identity(2, 2), lin, lo, hi, kEqualityTolerance);
        REQUIRE(qp.A_in.rows() == 5);
        CHECK(qp.A_in.row(0) == Eigen::RowVector2d(1.0, 0.0));
        CHECK(qp.b_in(0) == -1.0);
        CHECK(qp.A_in(2, 1) == 1.0);
        CHECK(qp.b_in(2) == 7.0);
        CHECK(qp.A_in(4, 1) == -1.0);
        CHECK(qp.b_in(4) == 3.0);

        Linearization free;
        free.grad = Eigen::Vector2d(0.3, -0.2);
        free.g.resize(0);
        free.Jg.resize(0, 2);
        free.h.resize(0);
        free.Jh.resize(0, 2);
        const QpSubproblem open =
            build_qp(Vector{0.0, 0.0}, Eigen::MatrixXd::Identity(2, 2), free, Vector{-5, -5}, Vector{5, 5}, 1e-4);
        const QpResult r = solve_qp(open);
        CHECK(r.d(0) == doctest::Approx(-0.3));
        CHECK(r.d(1) == doctest::Approx(0.2));
    }

    TEST_CASE("equality rows come in relaxed pairs") {
        Linearization lin;
        lin.grad = Eigen::VectorXd::Zero(1);
        lin.g.resize(0);
        lin.Jg.resize(0, 1);
        lin.h = Eigen::VectorXd::Constant(1, 0.5);
        lin.Jh = Eigen::MatrixXd::Constant(1, 1, 2.0);
        const QpSubproblem qp = build_qp(Vector{0.0}, Eigen::MatrixXd::Identity(1, 1), lin, Vector{-1}, Vector{1}, 1e-4);
        CHECK(qp.A_in(0, 0) == 2.0);
        CHECK(qp.b_in(0) == doctest::Approx(1e-4 - 0.5));
        CHECK(qp.A_in(1, 0) == -2.0);
        CHECK(qp.b_in(1) == doctest::Approx(1e-4 + 0.5));
    }

    TEST_CASE("line search") {
        const auto p = square_1d();
        EvaluationLedger ledger;
        const Vector x{1.0};
        const Vector newton{-1.0};
        const auto full = merit_line_search(p, x, 1.0, newton, 1.0, -2.0, kEqualityTolerance, ledger);
        CHECK(full.success);
        CHECK(full.alpha == 1.0);
        CHECK(full.x[0] == 0.0);

        const Vector zero{0.0};
        const auto still = merit_line_search(p, x, 1.0, zero, 1.0, 0.0, kEqualityTolerance, ledger);
        CHECK(still.success);
        CHECK(still.alpha == 1.0);
        CHECK(still.x == x);

        const Vector up{1.0};
        EvaluationLedger count;
        const auto fail = merit_line_search(p, x, 1.0, up, 1.0, 2.0, kEqualityTolerance, count);
        CHECK_FALSE(fail.success);
        CHECK(fail.trials == 21);
        CHECK(count.sqp_fes() == 21);
    }

    TEST_CASE("one major iteration on a convex quadratic") {
        auto p = ProblemDefinition::from_functions(
            "quad", {-5.0, -5.0}, {5.0, 5.0},
            [](std::span<const double> x) { return (x[0] - 1.0) * (x[0] - 1.0) + (x[1] - 2.0) * (x[1] - 2.0); },
            {[](std::span<const double> x) { return x[0] + x[1] - 1.0; }}, {});
        SqpConfig c;
        c.max_iterations = 1;
        c.variable_scale = {std::sqrt(0.5), std::sqrt(0.5)};
        EvaluationLedger ledger;
        const auto r = sqp_solve(p, Vector{0.0, 0.0}, c, ledger);
        // projection of (1, 2) onto x1 + x2 <= 1
        CHECK(std::abs(r.x[0]) <= 1e-6);
        CHECK(std::abs(r.x[1] - 1.0) <= 1e-6);
        CHECK(r.iterations == 1);
    }

    TEST_CASE("g11 near a global optimizer") {
        const auto& p = lookup("g11").problem;
        SqpConfig c;
        c.target_f = p.f_star;
        EvaluationLedger ledger;
        const auto r = sqp_solve(p, Vector{0.7, 0.5}, c, ledger);
        CHECK(r.feasible());
        CHECK(std::abs(r.f - 0.7499) <= 1e-4);
        CHECK(r.fes == ledger.sqp_fes());
        CHECK(r.fes_to_target.has_value());
    }

    TEST_CASE("g11 from the centre stays at the local optimum") {
        const auto& p = lookup("g11").problem;
        EvaluationLedger ledger;
        const auto r = sqp_solve(p, Vector{0.0, 0.0}, SqpConfig{}, ledger);
        CHECK((r.status == SqpStatus::converged || r.status == SqpStatus::step_tolerance));
        CHECK(r.feasible());
        CHECK_FALSE(success(r.f, *p.f_star));
    }

    TEST_CASE("g08 from a suboptimal basin") {
        const auto& p = lookup("g08").problem;
        EvaluationLedger ledger;
        const auto r = sqp_solve(p, Vector{1.0, 3.0}, SqpConfig{}, ledger);
        CHECK((r.status == SqpStatus::converged || r.status == SqpStatus::step_tolerance));
        CHECK(r.feasible());
        CHECK_FALSE(success(r.f, *p.f_star));
    }

    TEST_CASE("zero iterations return the start") {
        const auto& p = lookup("g06").problem;
        SqpConfig c;
        c.max_iterations = 0;
        EvaluationLedger ledger;
        const Vector x0{50.0, 50.0};
        const auto r = sqp_solve(p, x0, c, ledger);
        CHECK(r.x == x0);
        CHECK(r.fes == ledger.sqp_fes());
    }

    TEST_CASE("never returns worse than the start") {
        std::mt19937_64 rng(4);
        for (const char* name : {"g04", "g06", "g09", "g10", "g21"}) {
            const auto& p = lookup(name).problem;
            for (int k = 0; k < 3; ++k) {
                Vector x0(p.dimension);
                for (std::size_t j = 0; j < p.dimension; ++j) {
                    x0[j] = std::uniform_real_distribution<double>(p.lower[j], p.upper[j])(rng);
                }
                EvaluationLedger ledger;
                const auto start = evaluate(p, x0, kEqualityTolerance, ledger, Phase::sqp);
                const auto r = sqp_solve(p, x0, SqpConfig{}, ledger);
                const auto slack = kSqpFeasibilitySlack;
                CHECK_FALSE(better(rank_of(start.f, start.report, slack), rank_of(r.solution(), slack)));
            }
        }
    }
}
