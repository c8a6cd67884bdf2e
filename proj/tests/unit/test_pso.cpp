#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "swarmsqp/benchmarks.hpp"
#include "swarmsqp/pso.hpp"

using namespace swarmsqp;

namespace {

SwarmConfig small_config(std::size_t iterations, std::uint64_t seed) {
    SwarmConfig c;
    c.max_iterations = iterations;
    c.seed = seed;
    return c;
}

bool same_trace(const RunTrace& a, const RunTrace& b) {
    if (a.history.size() != b.history.size() || a.gbest.x != b.gbest.x) return false;
    for (std::size_t i = 0; i < a.history.size(); ++i) {
        const auto& p = a.history[i];
        const auto& q = b.history[i];
        if (p.gbest_f != q.gbest_f || p.gbest_violation != q.gbest_violation || p.cog != q.cog ||
            p.gbest_x != q.gbest_x || p.fes != q.fes || p.epsilon != q.epsilon) {
            return false;
        }
    }
    return true;
}

}  // namespace

TEST_SUITE("pso") {
    TEST_CASE("velocity update identity and zero differences") {
        const Vector x{1.0, -2.0}, v{0.3, -0.4}, vmax{10.0, 10.0};
        auto draw = [] { return 0.77; };
        CHECK(velocity_update(x, v, Vector{5, 5}, Vector{-5, -5}, {1.0, 0.0, 0.0}, vmax, draw) == v);
        const Vector out = velocity_update(x, v, x, x, {0.6, 2.0, 2.0}, vmax, draw);
        CHECK(out[0] == doctest::Approx(0.6 * 0.3));
        CHECK(out[1] == doctest::Approx(0.6 * -0.4));
    }

    TEST_CASE("velocity update with pinned draws") {
        auto half = [] { return 0.5; };
        const Vector out = velocity_update(Vector{0.0}, Vector{1.0}, Vector{2.0}, Vector{4.0}, {0.7, 1.5, 1.5},
                                           Vector{100.0}, half);
        CHECK(out[0] == doctest::Approx(5.2));
        const Vector clamped = velocity_update(Vector{0.0}, Vector{1.0}, Vector{2.0}, Vector{4.0}, {0.7, 1.5, 1.5},
                                               Vector{3.0}, half);
        CHECK(clamped[0] == 3.0);
    }

    TEST_CASE("velocity update draws fresh values per dimension") {
        int calls = 0;
        auto draw = [&] { return ++calls * 0.1; };
        (void)velocity_update(Vector{0, 0, 0}, Vector{0, 0, 0}, Vector{1, 1, 1}, Vector{1, 1, 1}, {0.5, 1, 1},
                              Vector{9, 9, 9}, draw);
        CHECK(calls == 6);
    }

    TEST_CASE("position update") {
        Vector v{0.5, -0.5};
        CHECK(position_update(Vector{1, 1}, v, Vector{0, 0}, Vector{10, 10}) == Vector{1.5, 0.5});
        Vector zero{0.0, 0.0};
        CHECK(position_update(Vector{1, 1}, zero, Vector{0, 0}, Vector{10, 10}) == Vector{1, 1});
        Vector w{0.5};
        const Vector x = position_update(Vector{9.9}, w, Vector{0}, Vector{10});
        CHECK(x[0] == 10.0);
        CHECK(w[0] == 0.0);
        Vector low{-3.0};
        CHECK(position_update(Vector{1.0}, low, Vector{0}, Vector{10})[0] == 0.0);
        CHECK(low[0] == 0.0);
    }

    TEST_CASE("forward neighbours") {
        CHECK(forward_neighbors(0, 2, 5) == std::vector<std::size_t>{1, 2});
        CHECK(forward_neighbors(4, 2, 5) == std::vector<std::size_t>{0, 1});
        const auto all = forward_neighbors(3, 4, 5);
        CHECK(std::set<std::size_t>(all.begin(), all.end()) == std::set<std::size_t>{0, 1, 2, 4});
        CHECK_THROWS_AS((void)forward_neighbors(0, 0, 5), std::invalid_argument);
        CHECK_THROWS_AS((void)forward_neighbors(0, 5, 5), std::invalid_argument);
    }

    TEST_CASE("each particle is read by exactly k others") {
        for (std::size_t n = 2; n <= 10; ++n) {
            for (std::size_t k = 1; k < n; ++k) {
                std::vector<std::size_t> hits(n, 0);
                for (std::size_t i = 0; i < n; ++i) {
                    for (auto j : forward_neighbors(i, k, n)) {
                        CHECK(j != i);
                        ++hits[j];
                    }
                }
                CHECK(std::all_of(hits.begin(), hits.end(), [&](std::size_t h) { return h == k; }));
            }
        }
    }

    TEST_CASE("neighbourhood schedule") {
        CHECK(neighborhood_size(0, 100, 1, 9) == 1);
        CHECK(neighborhood_size(100, 100, 1, 9) == 9);
        CHECK(neighborhood_size(50, 100, 1, 9) == 5);
    }

    TEST_CASE("relaxation schedule") {
        RelaxationSchedule s;
        CHECK(current_epsilon(0, 1000, s) == doctest::Approx(1e-2));
        CHECK(current_epsilon(250, 1000, s) == doctest::Approx(50.5e-4));
        CHECK(current_epsilon(500, 1000, s) == 1e-4);
        CHECK(current_epsilon(900, 1000, s) == 1e-4);
        RelaxationSchedule flat;
        flat.initial_scale = 1.0;
        for (std::size_t t : {0, 10, 999}) CHECK(current_epsilon(t, 1000, flat) == 1e-4);
        double last = 1.0;
        for (std::size_t t = 0; t <= 1000; t += 7) {
            const double e = current_epsilon(t, 1000, s);
            CHECK(e <= last);
            last = e;
        }
    }

    TEST_CASE("centre of gravity") {
        SwarmState s;
        s.particles.resize(2);
        s.particles[0].x = {0, 0};
        s.particles[1].x = {2, 2};
        CHECK(centre_of_gravity(s) == Vector{1, 1});
        s.particles.resize(1);
        CHECK(centre_of_gravity(s) == Vector{0, 0});
        s.particles.resize(4);
        s.particles[0].x = {0, 0};
        s.particles[1].x = {1, 0};
        s.particles[2].x = {0, 1};
        s.particles[3].x = {1, 1};
        CHECK(centre_of_gravity(s) == Vector{0.5, 0.5});
        CHECK_THROWS_AS((void)centre_of_gravity(SwarmState{}), std::invalid_argument);
    }

    TEST_CASE("config validation") {
        SwarmConfig c;
        CHECK_NOTHROW(c.validate());
        CHECK(c.total_size() == 120);
        CHECK(c.resolved_k_max() == 119);
        c.k_max = 200;
        CHECK_THROWS_AS(c.validate(), std::invalid_argument);
        SwarmConfig d;
        d.relaxation.final_epsilon = 1e-3;
        CHECK_THROWS_AS(d.validate(), std::invalid_argument);
        SwarmConfig e;
        e.sub_swarms = {{1, {0.5, 1, 1}}};
        CHECK_THROWS_AS(e.validate(), std::invalid_argument);
    }

    TEST_CASE("frozen dynamics keep positions") {
        SwarmConfig c = small_config(20, 3);
        c.sub_swarms = {{2, {0.0, 0.0, 0.0}}};
        const auto& p = lookup("g06").problem;
        EvaluationLedger ledger;
        Rng rng(c.seed);
        SwarmState s = initialize_swarm(p, c, ledger, rng);
        for (auto& part : s.particles) std::fill(part.v.begin(), part.v.end(), 0.0);
        const Vector x0 = s.particles[0].x;
        const Vector x1 = s.particles[1].x;
        while (step(s, c, p, ledger, rng)) {
        }
        CHECK(s.particles[0].x == x0);
        CHECK(s.particles[1].x == x1);
    }

    TEST_CASE("each step costs one FE per particle") {
        SwarmConfig c = small_config(5, 1);
        const auto& p = lookup("g06").problem;
        EvaluationLedger ledger;
        Rng rng(1);
        SwarmState s = initialize_swarm(p, c, ledger, rng);
        CHECK(ledger.pso_fes() == c.total_size());
        for (int i = 0; i < 5; ++i) {
            const auto before = ledger.total_fes();
            CHECK(step(s, c, p, ledger, rng));
            CHECK(ledger.total_fes() - before == c.total_size());
            CHECK(s.history.back().fes == ledger.total_fes());
        }
        CHECK_FALSE(step(s, c, p, ledger, rng));
        CHECK(s.terminated);
        CHECK(s.history.size() == s.iteration);
    }

    TEST_CASE("FE budget stops the swarm") {
        SwarmConfig c = small_config(100, 2);
        c.fe_budget = c.total_size() * 4 + 7;
        const auto t = run_pso(lookup("g06").problem, c);
        CHECK(t.iterations == 3);
        CHECK(t.ledger.total_fes() <= c.fe_budget);
    }

    TEST_CASE("zero iterations return the best initial particle") {
        SwarmConfig c = small_config(0, 5);
        const auto& p = lookup("g08").problem;
        const auto t = run_pso(p, c);
        CHECK(t.iterations == 0);
        CHECK(t.history.empty());
        EvaluationLedger ledger;
        Rng rng(5);
        const auto s = initialize_swarm(p, c, ledger, rng);
        for (const auto& part : s.particles) CHECK_FALSE(better(rank_of(part.pbest), rank_of(t.gbest)));
    }

    TEST_CASE("identical seeds give identical traces") {
        const auto& p = lookup("g09").problem;
        const auto a = run_pso(p, small_config(60, 11));
        const auto b = run_pso(p, small_config(60, 11));
        const auto c = run_pso(p, small_config(60, 12));
        CHECK(same_trace(a, b));
        CHECK_FALSE(same_trace(a, c));
    }

    TEST_CASE("positions stay in bounds and gbest never worsens") {
        const auto& p = lookup("g06").problem;
        SwarmConfig c = small_config(100, 9);
        EvaluationLedger ledger;
        Rng rng(9);
        SwarmState s = initialize_swarm(p, c, ledger, rng);
        std::optional<double> last_feasible_f;
        while (step(s, c, p, ledger, rng)) {
            for (const auto& part : s.particles) {
                for (std::size_t j = 0; j < p.dimension; ++j) {
                    CHECK(part.x[j] >= p.lower[j]);
                    CHECK(part.x[j] <= p.upper[j]);
                }
            }
            if (is_feasible(s.gbest.report, 0.0)) {
                if (last_feasible_f) CHECK(s.gbest.f <= *last_feasible_f);
                last_feasible_f = s.gbest.f;
            }
        }
        CHECK(last_feasible_f.has_value());
    }

    TEST_CASE("full connectivity makes lbest the gbest") {
        const std::size_t n = 12;
        for (std::size_t i = 0; i < n; ++i) {
            auto nb = forward_neighbors(i, n - 1, n);
            nb.push_back(i);
            std::sort(nb.begin(), nb.end());
            CHECK(nb.size() == n);
            CHECK(std::adjacent_find(nb.begin(), nb.end()) == nb.end());
        }
    }
}
