#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "swarmsqp/benchmarks.hpp"
#include "swarmsqp/hybrid.hpp"

using namespace swarmsqp;

namespace {

SwarmConfig short_swarm(std::size_t iterations) {
    SwarmConfig c;
    c.max_iterations = iterations;
    return c;
}

HybridResult fake(bool ok, std::optional<std::size_t> fes = std::nullopt) {
    HybridResult r;
    r.best.f = ok ? 0.0 : 1.0;
    r.best.report = make_report(std::vector<double>{ok ? -1.0 : 1.0}, {}, kEqualityTolerance);
    r.pso_final = r.best;
    r.fes_to_accuracy = fes;
    return r;
}

}  // namespace

TEST_SUITE("hybrid") {
    TEST_CASE("strategy names") {
        CHECK(strategy_name(parse_strategy("final")) == "final");
        CHECK(strategy_name(parse_strategy("every")) == "every");
        CHECK(strategy_name(parse_strategy("improve")) == "improve");
        CHECK(strategy_name(parse_strategy("periodic")) == "periodic");
        CHECK_THROWS_AS((void)parse_strategy("sometimes"), std::invalid_argument);
        CHECK_THROWS_AS(validate(PeriodicRandomSeeds{0, 5, true}), std::invalid_argument);
        CHECK_THROWS_AS(validate(PeriodicRandomSeeds{5, 0, true}), std::invalid_argument);
    }

    TEST_CASE("disabled refinement equals the swarm") {
        const auto& p = lookup("g06").problem;
        SqpConfig sqp;
        sqp.max_iterations = 0;
        const auto h = run_hybrid(p, short_swarm(50), sqp, FinalOnly{}, 3);
        SwarmConfig c = short_swarm(50);
        c.seed = 3;
        const auto t = run_pso(p, c);
        CHECK(h.best.x == t.gbest.x);
        CHECK(h.best.f == t.gbest.f);
        CHECK_FALSE(h.best_from_sqp);
    }

    TEST_CASE("hybrid never worse than its swarm") {
        for (const char* name : {"g04", "g06", "g07", "g09", "g10"}) {
            for (const TriggerStrategy& s :
                 {TriggerStrategy{FinalOnly{}}, TriggerStrategy{OnGbestImprovement{}},
                  TriggerStrategy{PeriodicRandomSeeds{10, 2, true}}}) {
                const auto h = run_hybrid(lookup(name).problem, short_swarm(40), SqpConfig{}, s, 17);
                CHECK_FALSE(better(rank_of(h.pso_final, 0.0), rank_of(h.best, h.best_slack)));
                CHECK(h.ledger.total_fes() == h.ledger.pso_fes() + h.ledger.sqp_fes());
                CHECK(h.sqp_fe_share() >= 0.0);
                CHECK(h.sqp_fe_share() <= 1.0);
            }
        }
    }

    TEST_CASE("g06 final refinement reaches the optimum") {
        const auto& p = lookup("g06").problem;
        const auto h = run_hybrid(p, short_swarm(100), SqpConfig{}, FinalOnly{}, 1);
        CHECK(h.succeeded(p.f_star) == std::optional<bool>(true));
        REQUIRE(h.fes_to_accuracy);
        CHECK(*h.fes_to_accuracy <= h.ledger.total_fes());
    }

    TEST_CASE("probes are charged to a side ledger") {
        const auto& p = lookup("g06").problem;
        const auto a = run_hybrid(p, short_swarm(20), SqpConfig{}, EveryIteration{}, 5);
        const auto b = run_hybrid(p, short_swarm(20), SqpConfig{}, FinalOnly{}, 5);
        CHECK(a.probes.size() == 21);
        CHECK(a.probe_ledger.total_fes() > 0);
        CHECK(a.ledger.total_fes() == b.ledger.total_fes());
        CHECK(a.best.x == b.best.x);
    }

    TEST_CASE("probe from iteration zero") {
        const auto& p = lookup("g06").problem;
        const auto s = first_success_study(p, short_swarm(5), SqpConfig{}, 2);
        REQUIRE(s.success.size() == 6);
        REQUIRE(s.first_success_fe);
        CHECK(s.success[0]);
        CHECK(*s.first_success_fe == 0);
        CHECK(*s.first_success_iteration == 0);
    }

    TEST_CASE("probe that never succeeds") {
        const auto& p = lookup("g06").problem;
        SqpConfig sqp;
        sqp.max_iterations = 0;
        SwarmConfig c = short_swarm(3);
        const auto s = first_success_study(p, c, sqp, 2);
        CHECK_FALSE(s.first_success_fe.has_value());
        CHECK_THROWS_AS((void)first_success_study(lookup("g20").problem, c, sqp, 2), std::invalid_argument);
    }

    TEST_CASE("success statistics") {
        std::vector<HybridResult> ten;
        for (int i = 0; i < 10; ++i) ten.push_back(fake(i < 7));
        CHECK(*success_rate(ten, 0.0) == doctest::Approx(70.0));
        CHECK(feasibility_rate(ten) == doctest::Approx(70.0));
        CHECK_FALSE(success_rate(ten, std::nullopt).has_value());

        std::vector<HybridResult> all(25, fake(true));
        CHECK(*success_rate(all, 0.0) == 100.0);
        CHECK_THROWS_AS((void)success_rate(std::span<const HybridResult>{}, 0.0), std::invalid_argument);

        for (std::size_t k = 1; k <= 25; ++k) {
            std::vector<HybridResult> runs;
            for (std::size_t i = 0; i < k; ++i) runs.push_back(fake(i % 3 == 0));
            const double rate = *success_rate(runs, 0.0);
            const double hits = rate * static_cast<double>(k) / 100.0;
            CHECK(hits == doctest::Approx(std::round(hits)));
        }
    }

    TEST_CASE("mean FEs to accuracy") {
        const std::vector<std::optional<std::size_t>> none{std::nullopt, std::nullopt};
        CHECK_FALSE(mean_fes_to_accuracy(none).has_value());
        const std::vector<std::optional<std::size_t>> one{500};
        CHECK(*mean_fes_to_accuracy(one) == 500.0);
        const std::vector<std::optional<std::size_t>> two{100, std::nullopt, 300};
        CHECK(*mean_fes_to_accuracy(two) == 200.0);
        std::vector<HybridResult> runs{fake(true, 100), fake(false), fake(true, 300)};
        CHECK(*mean_fes_to_accuracy(runs) == 200.0);
    }

    TEST_CASE("summary statistics") {
        const std::vector<double> v{1.0, 2.0, 3.0, 4.0, std::numeric_limits<double>::infinity()};
        const auto s = summarize(v);
        CHECK(*s.best == 1.0);
        CHECK(*s.average == 2.5);
        CHECK(*s.stdev == doctest::Approx(std::sqrt(5.0 / 3.0)));
        CHECK_FALSE(summarize(std::vector<double>{}).best.has_value());
        CHECK(*summarize(std::vector<double>{4.0}).stdev == 0.0);
    }

    TEST_CASE("no optimum means no success") {
        const auto& p = lookup("g20").problem;
        const auto h = run_hybrid(p, short_swarm(5), SqpConfig{}, EveryIteration{}, 1);
        CHECK_FALSE(h.succeeded(p.f_star).has_value());
        CHECK(h.probes.empty());
        CHECK_FALSE(h.fes_to_accuracy.has_value());
    }

    TEST_CASE("periodic seeding is reproducible") {
        const auto& p = lookup("g09").problem;
        const PeriodicRandomSeeds s{5, 3, false};
        const auto a = run_hybrid(p, short_swarm(20), SqpConfig{}, s, 8);
        const auto b = run_hybrid(p, short_swarm(20), SqpConfig{}, s, 8);
        CHECK(a.sqp_runs == 12);
        CHECK(a.best.x == b.best.x);
        CHECK(a.ledger.total_fes() == b.ledger.total_fes());
    }
}
