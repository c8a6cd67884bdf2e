#include "swarmsqp/hybrid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace swarmsqp {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

bool solution_succeeds(const Solution& s, double slack, double f_star) {
    return !s.non_finite && is_feasible(s.report, slack) && success(s.f, f_star);
}

Solution at_epsilon(Solution s, double eps) {
    if (!s.non_finite) s.report = s.report.with_epsilon(eps);
    return s;
}

double percent(std::size_t k, std::size_t n) { return 100.0 * static_cast<double>(k) / static_cast<double>(n); }

void require_runs(std::span<const HybridResult> results) {
    if (results.empty()) throw std::invalid_argument("statistics need at least one run");
}

class Driver {
public:
    Driver(const ProblemDefinition& problem, const SwarmConfig& pso, const SqpConfig& sqp, std::uint64_t seed)
        : problem_(problem), pso_(pso), sqp_(sqp), rng_(seed) {
        pso_.seed = seed;
        sqp_.target_f = problem.f_star;
        std::seed_seq seq{seed, std::uint64_t{0x5eed}};
        pick_rng_.seed(seq);
        final_eps_ = pso_.relaxation.final_epsilon;
    }

    HybridResult run(const TriggerStrategy& strategy) {
        validate(strategy);
        state_ = initialize_swarm(problem_, pso_, out_.ledger, rng_);
        out_.trace.initial_fes = out_.ledger.total_fes();
        after_iteration();

        std::visit(overloaded{
                       [&](const FinalOnly&) { loop([] {}); },
                       [&](const EveryIteration&) {
                           probe();
                           loop([&] { probe(); });
                       },
                       [&](const OnGbestImprovement&) {
                           Vector last = state_.gbest.x;
                           loop([&] {
                               if (state_.gbest.x != last) {
                                   last = state_.gbest.x;
                                   refine(state_.gbest);
                               }
                           });
                       },
                       [&](const PeriodicRandomSeeds& p) {
                           loop([&] {
                               if (state_.iteration % p.period == 0) seed_from_random_particles(p.seeds);
                           });
                       },
                   },
                   strategy);

        const bool final_refine = std::visit(overloaded{
                                                 [](const OnGbestImprovement&) { return false; },
                                                 [](const PeriodicRandomSeeds& p) { return p.final_refine; },
                                                 [](const auto&) { return true; },
                                             },
                                             strategy);
        if (final_refine) refine(state_.gbest);

        out_.pso_final = at_epsilon(state_.gbest, final_eps_);
        out_.best = out_.pso_final;
        out_.best_slack = 0.0;
        if (out_.sqp_final) {
            const Solution s = out_.sqp_final->solution();
            if (better(rank_of(s, sqp_.feasibility_slack), rank_of(out_.best, 0.0))) {
                out_.best = s;
                out_.best_from_sqp = true;
                out_.best_slack = sqp_.feasibility_slack;
            }
        }
        out_.trace.gbest = state_.gbest;
        out_.trace.history = std::move(state_.history);
        out_.trace.iterations = state_.iteration;
        out_.trace.ledger = out_.ledger;
        return std::move(out_);
    }

private:
    template <class Hook>
    void loop(Hook&& hook) {
        while (step(state_, pso_, problem_, out_.ledger, rng_)) {
            after_iteration();
            hook();
        }
    }

    void after_iteration() {
        if (out_.pso_fes_to_accuracy || !problem_.f_star) return;
        if (solution_succeeds(at_epsilon(state_.gbest, final_eps_), 0.0, *problem_.f_star)) {
            out_.pso_fes_to_accuracy = out_.ledger.total_fes();
            if (!out_.fes_to_accuracy) out_.fes_to_accuracy = out_.pso_fes_to_accuracy;
        }
    }

    void refine(const Solution& seed) {
        if (seed.non_finite) return;
        const std::size_t launch = out_.ledger.total_fes();
        SqpResult r = sqp_solve(problem_, seed.x, sqp_, out_.ledger);
        ++out_.sqp_runs;
        if (!out_.fes_to_accuracy && r.fes_to_target) out_.fes_to_accuracy = launch + *r.fes_to_target;
        const double slack = sqp_.feasibility_slack;
        if (!out_.sqp_final || better(rank_of(r.solution(), slack), rank_of(out_.sqp_final->solution(), slack))) {
            out_.sqp_final = std::move(r);
        }
    }

    void seed_from_random_particles(std::size_t count) {
        std::vector<std::size_t> idx(state_.particles.size());
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        count = std::min(count, idx.size());
        for (std::size_t k = 0; k < count; ++k) {
            std::uniform_int_distribution<std::size_t> pick(k, idx.size() - 1);
            std::swap(idx[k], idx[pick(pick_rng_)]);
        }
        for (std::size_t k = 0; k < count; ++k) refine(state_.particles[idx[k]].pbest);
    }

    void probe() {
        if (!problem_.f_star) return;
        ProbeRecord rec;
        rec.iteration = state_.iteration;
        rec.pso_fes = out_.ledger.pso_fes() - out_.trace.initial_fes;
        const Solution& g = state_.gbest;
        if (have_probe_ && g.x == probe_x_) {
            rec.success = last_probe_.success;
            rec.sqp_fes_to_target = last_probe_.sqp_fes_to_target;
        } else if (!g.non_finite) {
            const SqpResult r = sqp_solve(problem_, g.x, sqp_, out_.probe_ledger);
            rec.sqp_fes = r.fes;
            rec.success = solution_succeeds(r.solution(), sqp_.feasibility_slack, *problem_.f_star);
            if (rec.success) rec.sqp_fes_to_target = r.fes_to_target;
            probe_x_ = g.x;
            have_probe_ = true;
            last_probe_ = rec;
        }
        if (rec.success && !out_.first_success_fe) {
            out_.first_success_fe = rec.pso_fes;
            out_.first_success_iteration = rec.iteration;
        }
        out_.probes.push_back(rec);
    }

    const ProblemDefinition& problem_;
    SwarmConfig pso_;
    SqpConfig sqp_;
    Rng rng_;
    Rng pick_rng_;
    double final_eps_ = kEqualityTolerance;
    SwarmState state_;
    HybridResult out_;
    bool have_probe_ = false;
    Vector probe_x_;
    ProbeRecord last_probe_;
};

}  // namespace

std::string_view strategy_name(const TriggerStrategy& s) noexcept {
    return std::visit(overloaded{
                          [](const FinalOnly&) { return std::string_view("final"); },
                          [](const EveryIteration&) { return std::string_view("every"); },
                          [](const OnGbestImprovement&) { return std::string_view("improve"); },
                          [](const PeriodicRandomSeeds&) { return std::string_view("periodic"); },
                      },
                      s);
}

TriggerStrategy parse_strategy(std::string_view name) {
    if (name == "final") return FinalOnly{};
    if (name == "every") return EveryIteration{};
    if (name == "improve") return OnGbestImprovement{};
    if (name == "periodic") return PeriodicRandomSeeds{};
    throw std::invalid_argument("unknown strategy '" + std::string(name) +
                                "' (expected final, every, improve or periodic)");
}

void validate(const TriggerStrategy& s) {
    if (const auto* p = std::get_if<PeriodicRandomSeeds>(&s)) {
        if (p->period < 1) throw std::invalid_argument("period must be >= 1");
        if (p->seeds < 1) throw std::invalid_argument("seeds must be >= 1");
    }
}

bool HybridResult::feasible() const { return !best.non_finite && is_feasible(best.report, best_slack); }

std::optional<bool> HybridResult::succeeded(std::optional<double> f_star) const {
    if (!f_star) return std::nullopt;
    return feasible() && success(best.f, *f_star);
}

bool HybridResult::pso_feasible() const { return !pso_final.non_finite && is_feasible(pso_final.report, 0.0); }

std::optional<bool> HybridResult::pso_succeeded(std::optional<double> f_star) const {
    if (!f_star) return std::nullopt;
    return pso_feasible() && success(pso_final.f, *f_star);
}

double HybridResult::sqp_fe_share() const {
    const std::size_t total = ledger.total_fes();
    return total == 0 ? 0.0 : static_cast<double>(ledger.sqp_fes()) / static_cast<double>(total);
}

HybridResult run_hybrid(const ProblemDefinition& problem, const SwarmConfig& pso_config, const SqpConfig& sqp_config,
                        const TriggerStrategy& strategy, std::uint64_t seed) {
    sqp_config.validate();
    Driver driver(problem, pso_config, sqp_config, seed);
    return driver.run(strategy);
}

std::optional<double> success_rate(std::span<const HybridResult> results, std::optional<double> f_star) {
    require_runs(results);
    if (!f_star) return std::nullopt;
    const auto k = std::count_if(results.begin(), results.end(), [&](const HybridResult& r) { return *r.succeeded(f_star); });
    return percent(static_cast<std::size_t>(k), results.size());
}

std::optional<double> pso_success_rate(std::span<const HybridResult> results, std::optional<double> f_star) {
    require_runs(results);
    if (!f_star) return std::nullopt;
    const auto k =
        std::count_if(results.begin(), results.end(), [&](const HybridResult& r) { return *r.pso_succeeded(f_star); });
    return percent(static_cast<std::size_t>(k), results.size());
}

double feasibility_rate(std::span<const HybridResult> results) {
    require_runs(results);
    const auto k = std::count_if(results.begin(), results.end(), [](const HybridResult& r) { return r.feasible(); });
    return percent(static_cast<std::size_t>(k), results.size());
}

double pso_feasibility_rate(std::span<const HybridResult> results) {
    require_runs(results);
    const auto k = std::count_if(results.begin(), results.end(), [](const HybridResult& r) { return r.pso_feasible(); });
    return percent(static_cast<std::size_t>(k), results.size());
}

std::optional<double> mean_fes_to_accuracy(std::span<const std::optional<std::size_t>> fes) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& f : fes) {
        if (!f) continue;
        sum += static_cast<double>(*f);
        ++n;
    }
    if (n == 0) return std::nullopt;
    return sum / static_cast<double>(n);
}

std::optional<double> mean_fes_to_accuracy(std::span<const HybridResult> results) {
    std::vector<std::optional<std::size_t>> fes;
    fes.reserve(results.size());
    for (const auto& r : results) fes.push_back(r.fes_to_accuracy);
    return mean_fes_to_accuracy(std::span<const std::optional<std::size_t>>(fes));
}

SummaryStat summarize(std::span<const double> values) {
    std::vector<double> v;
    for (double x : values) {
        if (std::isfinite(x)) v.push_back(x);
    }
    SummaryStat s;
    if (v.empty()) return s;
    s.best = *std::min_element(v.begin(), v.end());
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    s.average = mean;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    s.stdev = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
    return s;
}

FirstSuccessStudy first_success_study(const ProblemDefinition& problem, const SwarmConfig& pso_config,
                                      const SqpConfig& sqp_config, std::uint64_t seed) {
    if (!problem.f_star) throw std::invalid_argument("first_success_study needs a known optimum");
    const HybridResult r = run_hybrid(problem, pso_config, sqp_config, EveryIteration{}, seed);
    FirstSuccessStudy out;
    out.success.reserve(r.probes.size());
    for (const auto& p : r.probes) {
        out.success.push_back(p.success);
        if (p.success && !out.first_success_fe) {
            out.first_success_fe = p.pso_fes;
            out.first_success_iteration = p.iteration;
            out.sqp_fes_at_first_success = p.sqp_fes_to_target;
        }
    }
    out.probe_fes = r.probe_ledger.total_fes();
    out.pso_fes = r.ledger.pso_fes();
    return out;
}

}  // namespace swarmsqp
