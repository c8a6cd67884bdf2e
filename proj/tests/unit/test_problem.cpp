#include <cmath>
#include <limits>

#include "doctest.h"
#include "swarmsqp/benchmarks.hpp"
#include "swarmsqp/problem.hpp"

using namespace swarmsqp;

namespace {

ProblemDefinition sum_problem() {
    return ProblemDefinition::from_functions(
        "sum", {-1, -1}, {1, 1}, [](std::span<const double> x) { return x[0] + x[1]; }, {}, {});
}

ProblemDefinition one_equality() {
    return ProblemDefinition::from_functions(
        "eq", {-1}, {1}, [](std::span<const double> x) { return x[0] * x[0]; }, {},
        {[](std::span<const double> x) { return x[0]; }});
}

ConstraintReport report_with(Vector g, Vector h, double eps = kEqualityTolerance) {
    return make_report(g, h, eps);
}

}  // namespace

TEST_SUITE("problem") {
    TEST_CASE("unconstrained evaluation") {
        EvaluationLedger ledger;
        const auto e = evaluate(sum_problem(), Vector{0, 0}, kEqualityTolerance, ledger, Phase::pso);
        CHECK(e.f == 0.0);
        CHECK(e.report.max_violation == 0.0);
        CHECK(ledger.pso_fes() == 1);
        CHECK(ledger.sqp_fes() == 0);
    }

    TEST_CASE("relaxed equality within epsilon") {
        EvaluationLedger ledger;
        const auto e = evaluate(one_equality(), Vector{5e-5}, 1e-4, ledger, Phase::sqp);
        CHECK(e.report.relaxed_h_values[0] == doctest::Approx(-5e-5).epsilon(1e-12));
        CHECK(e.report.max_violation == 0.0);
        CHECK(ledger.sqp_fes() == 1);
        CHECK(ledger.total_fes() == 1);
    }

    TEST_CASE("g06 at its optimizer") {
        const auto& entry = lookup("g06");
        EvaluationLedger ledger;
        const auto e = evaluate(entry.problem, *entry.optimizer_point, kEqualityTolerance, ledger, Phase::pso);
        CHECK(std::abs(e.f - (-6961.813876)) <= 1e-4);
        CHECK(e.report.max_violation == 0.0);
    }

    TEST_CASE("dimension mismatch and negative epsilon are rejected") {
        EvaluationLedger ledger;
        CHECK_THROWS_AS((void)evaluate(sum_problem(), Vector{0}, 1e-4, ledger, Phase::pso), std::invalid_argument);
        CHECK_THROWS_AS((void)evaluate(sum_problem(), Vector{0, 0}, -1.0, ledger, Phase::pso),
                        std::invalid_argument);
        CHECK(ledger.total_fes() == 0);
    }

    TEST_CASE("non-finite outputs become the worst record") {
        auto p = ProblemDefinition::from_functions(
            "nan", {-1}, {1}, [](std::span<const double> x) { return 1.0 / x[0]; },
            {[](std::span<const double> x) { return std::log(x[0]); }}, {});
        EvaluationLedger ledger;
        const auto e = evaluate(p, Vector{-0.5}, 1e-4, ledger, Phase::pso);
        CHECK(e.non_finite);
        CHECK(std::isinf(e.report.max_violation));
        const auto z = evaluate(p, Vector{0.0}, 1e-4, ledger, Phase::pso);
        CHECK(z.non_finite);
        CHECK(ledger.pso_fes() == 2);

        const Solution bad = Solution::from(Vector{0.0}, z);
        const Solution ok{{0.5}, 1e9, make_report(Vector{10.0}, {}, 1e-4), false};
        CHECK(better(rank_of(ok), rank_of(bad)));
    }

    TEST_CASE("is_feasible") {
        CHECK(is_feasible(report_with({-1.0, 0.0}, {}), 0.0));
        const auto r = report_with({5e-13}, {});
        CHECK(is_feasible(r, 1e-12));
        CHECK_FALSE(is_feasible(r, 0.0));
        const auto h = report_with({}, {2e-4});
        CHECK(h.relaxed_h_values[0] == doctest::Approx(1e-4));
        CHECK_FALSE(is_feasible(h, 0.0));
    }

    TEST_CASE("max_violation is zero exactly when feasible at slack 0") {
        for (double g : {-1.0, 0.0, 1e-15, 0.3}) {
            const auto r = report_with({g}, {});
            CHECK(r.max_violation >= 0.0);
            CHECK((r.max_violation == 0.0) == is_feasible(r, 0.0));
        }
    }

    TEST_CASE("success threshold") {
        CHECK(success(-6961.81380, -6961.813876));
        CHECK(success(1.0, 1.0));
        CHECK_FALSE(success(1.0 + 2e-4, 1.0));
        CHECK_FALSE(success(1.0, std::optional<double>{}).has_value());
        CHECK(success(1.0, std::optional<double>{1.0}).value());
    }

    TEST_CASE("relaxation monotonicity") {
        const auto r = report_with({-1.0}, {3e-4, -2e-3});
        double last = std::numeric_limits<double>::infinity();
        for (double eps : {0.0, 1e-5, 1e-4, 1e-3, 1e-2}) {
            const double v = r.with_epsilon(eps).max_violation;
            CHECK(v <= last);
            last = v;
        }
        CHECK(r.with_epsilon(1e-2).max_violation == 0.0);
    }

    TEST_CASE("evaluate is deterministic") {
        const auto& p = lookup("g10").problem;
        EvaluationLedger ledger;
        const Vector x{500, 1500, 5000, 200, 300, 200, 300, 400};
        const auto a = evaluate(p, x, 1e-4, ledger, Phase::pso);
        const auto b = evaluate(p, x, 1e-4, ledger, Phase::pso);
        CHECK(a.f == b.f);
        CHECK(a.report.g_values == b.report.g_values);
    }

    TEST_CASE("FE conservation against a counting wrapper") {
        std::size_t calls = 0;
        auto base = lookup("g04").problem;
        auto inner = base.evaluator;
        base.evaluator = [&](std::span<const double> x, std::span<double> g, std::span<double> h) {
            ++calls;
            return inner(x, g, h);
        };
        EvaluationLedger ledger;
        const Vector x{80, 40, 30, 40, 30};
        for (int i = 0; i < 7; ++i) (void)evaluate(base, x, 1e-4, ledger, i % 2 ? Phase::pso : Phase::sqp);
        CHECK(ledger.total_fes() == calls);
        CHECK(ledger.total_fes() == ledger.pso_fes() + ledger.sqp_fes());
        CHECK(ledger.pso_fes() == 3);
    }

    TEST_CASE("priority rules") {
        const SolutionRank feasible{10.0, 0.0, true};
        const SolutionRank infeasible{-100.0, 0.5, false};
        CHECK(better(feasible, infeasible));
        CHECK(better(SolutionRank{1.0, 0.0, true}, SolutionRank{2.0, 0.0, true}));
        CHECK(better(SolutionRank{99.0, 0.1, false}, SolutionRank{1.0, 0.5, false}));
        CHECK(better(SolutionRank{1.0, 0.1, false}, SolutionRank{2.0, 0.1, false}));
        CHECK(compare_solutions(feasible, feasible) == std::weak_ordering::equivalent);
    }

    TEST_CASE("invalid definitions") {
        auto p = sum_problem();
        p.lower = {1, -1};
        CHECK_THROWS_AS(p.validate(), std::invalid_argument);
        auto q = sum_problem();
        q.upper = {1};
        CHECK_THROWS_AS(q.validate(), std::invalid_argument);
    }

    TEST_CASE("clip_to_bounds") {
        const auto x = clip_to_bounds(Vector{-3.0, 0.25}, sum_problem());
        CHECK(x == Vector{-1.0, 0.25});
    }
}
