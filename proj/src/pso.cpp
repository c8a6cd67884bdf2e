#include "swarmsqp/pso.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace swarmsqp {

namespace {


bool final_feasible(const Solution& s, double final_epsilon) {
    if (s.non_finite) return false;
    return is_feasible(s.report.with_epsilon(final_epsilon), 0.0);
}

Solution evaluate_solution(const ProblemDefinition& problem, Vector x, double eps, EvaluationLedger& ledger) {
    auto e = evaluate(problem, x, eps, ledger, Phase::pso);
    return Solution::from(std::move(x), std::move(e));
}

std::size_t best_pbest(const SwarmState& state) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < state.particles.size(); ++i) {
        if (better(rank_of(state.particles[i].pbest), rank_of(state.particles[best].pbest))) best = i;
    }
    return best;
}

void record(SwarmState& state, const SwarmConfig& config, const EvaluationLedger& ledger) {
    TraceRecord r;
    r.iter = state.iteration;
    r.gbest_f = state.gbest.f;
    r.gbest_violation = state.gbest.report.max_violation;
    r.gbest_x = state.gbest.x;
    r.cog = centre_of_gravity(state);
    r.epsilon = state.current_epsilon;
    r.fes = ledger.total_fes();
    if (config.record_positions) {
        for (const auto& p : state.particles) r.positions.push_back(p.x);
    }
    state.history.push_back(std::move(r));
}

}  // namespace

std::vector<SubSwarmSpec> default_sub_swarms() {
    return {
        {40, {0.9, 2.0, 2.0}},
        {40, {0.72, 1.49, 1.49}},
        {40, {0.5, 1.2, 1.2}},
    };
}

std::size_t SwarmConfig::total_size() const noexcept {
    std::size_t n = 0;
    for (const auto& s : sub_swarms) n += s.size;
    return n;
}

std::size_t SwarmConfig::resolved_k_max() const noexcept {
    const std::size_t n = total_size();
    return k_max.value_or(n > 0 ? n - 1 : 0);
}

void SwarmConfig::validate() const {
    const std::size_t n = total_size();
    if (n < 2) throw std::invalid_argument("swarm needs at least 2 particles");
    const std::size_t kmax = resolved_k_max();
    if (k_min < 1 || k_min > kmax || kmax > n - 1) {
        throw std::invalid_argument("neighbourhood sizes must satisfy 1 <= k_min <= k_max <= N-1");
    }
    for (const auto& s : sub_swarms) {
        const auto& c = s.coefficients;
        if (!std::isfinite(c.w) || !std::isfinite(c.iw) || !std::isfinite(c.sw) || c.w < 0 || c.iw < 0 ||
            c.sw < 0) {
            throw std::invalid_argument("coefficients must be finite and non-negative");
        }
    }
    if (!(v_max_fraction > 0.0) || !std::isfinite(v_max_fraction)) {
        throw std::invalid_argument("v_max_fraction must be positive");
    }
    if (!(relaxation.initial_scale >= 1.0) || !(relaxation.cutoff_fraction >= 0.0) ||
        relaxation.cutoff_fraction > 1.0 || relaxation.final_epsilon != kEqualityTolerance) {
        throw std::invalid_argument("relaxation schedule must start at >= 1x and end at eps = 1e-4");
    }
}

Vector velocity_update(const Particle& p, std::span<const double> lbest, const CoefficientSet& c,
                       std::span<const double> v_max, Rng& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    return velocity_update(p.x, p.v, p.pbest.x, lbest, c, v_max, [&] { return unit(rng); });
}

Vector position_update(std::span<const double> x, Vector& v, std::span<const double> lower,
                       std::span<const double> upper) {
    Vector out(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
        double xj = x[j] + v[j];
        if (xj > upper[j]) {
            xj = upper[j];
            v[j] = 0.0;
        } else if (xj < lower[j]) {
            xj = lower[j];
            v[j] = 0.0;
        }
        out[j] = xj;
    }
    return out;
}

std::vector<std::size_t> forward_neighbors(std::size_t i, std::size_t k, std::size_t n) {
    if (n < 2 || k < 1 || k > n - 1) {
        throw std::invalid_argument("forward_neighbors: k must lie in [1, N-1]");
    }
    std::vector<std::size_t> out(k);
    for (std::size_t s = 0; s < k; ++s) out[s] = (i + s + 1) % n;
    return out;
}

std::size_t neighborhood_size(std::size_t t, std::size_t t_max, std::size_t k_min, std::size_t k_max) noexcept {
    if (t_max == 0) return k_min;
    const double frac = static_cast<double>(std::min(t, t_max)) / static_cast<double>(t_max);
    const double k = static_cast<double>(k_min) + (static_cast<double>(k_max) - static_cast<double>(k_min)) * frac;
    return static_cast<std::size_t>(std::lround(k));
}

double current_epsilon(std::size_t t, std::size_t t_max, const RelaxationSchedule& schedule) noexcept {
    const double cutoff = schedule.cutoff_fraction * static_cast<double>(t_max);
    const double tt = static_cast<double>(t);
    if (schedule.initial_scale <= 1.0 || !(cutoff > 0.0) || tt >= cutoff) return schedule.final_epsilon;
    const double scale = schedule.initial_scale;
    return schedule.final_epsilon * (scale - (scale - 1.0) * tt / cutoff);
}

Vector centre_of_gravity(const SwarmState& state) {
    if (state.particles.empty()) throw std::invalid_argument("centre_of_gravity: empty swarm");
    Vector c(state.particles.front().x.size(), 0.0);
    for (const auto& p : state.particles) {
        for (std::size_t j = 0; j < c.size(); ++j) c[j] += p.x[j];
    }
    for (double& v : c) v /= static_cast<double>(state.particles.size());
    return c;
}

SwarmState initialize_swarm(const ProblemDefinition& problem, const SwarmConfig& config,
                            EvaluationLedger& ledger, Rng& rng) {
    config.validate();
    SwarmState state;
    const std::size_t n = problem.dimension;
    state.v_max.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        state.v_max[j] = config.v_max_fraction * (problem.upper[j] - problem.lower[j]);
    }
    state.current_epsilon = current_epsilon(0, config.max_iterations, config.relaxation);

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t s = 0; s < config.sub_swarms.size(); ++s) {
        for (std::size_t k = 0; k < config.sub_swarms[s].size; ++k) {
            Particle p;
            p.sub_swarm_id = s;
            p.x.resize(n);
            p.v.resize(n);
            for (std::size_t j = 0; j < n; ++j) {
                p.x[j] = problem.lower[j] + unit(rng) * (problem.upper[j] - problem.lower[j]);
            }
            for (std::size_t j = 0; j < n; ++j) p.v[j] = (2.0 * unit(rng) - 1.0) * state.v_max[j];
            state.particles.push_back(std::move(p));
        }
    }
    for (auto& p : state.particles) p.pbest = evaluate_solution(problem, p.x, state.current_epsilon, ledger);
    state.gbest = state.particles[best_pbest(state)].pbest;
    return state;
}

bool step(SwarmState& state, const SwarmConfig& config, const ProblemDefinition& problem,
          EvaluationLedger& ledger, Rng& rng) {
    const std::size_t count = state.particles.size();
    if (state.terminated || state.iteration >= config.max_iterations ||
        (config.fe_budget > 0 && ledger.total_fes() + count > config.fe_budget)) {
        state.terminated = true;
        return false;
    }
    const std::size_t t = state.iteration + 1;
    const double eps = current_epsilon(t, config.max_iterations, config.relaxation);
    const double final_eps = config.relaxation.final_epsilon;
    state.current_epsilon = eps;
    for (auto& p : state.particles) {
        if (!p.pbest.non_finite) p.pbest.report = p.pbest.report.with_epsilon(eps);
    }

    const std::size_t k = neighborhood_size(t, config.max_iterations, config.k_min, config.resolved_k_max());
    std::vector<std::size_t> lbest(count);
    for (std::size_t i = 0; i < count; ++i) {
        std::size_t best = i;
        for (std::size_t nb : forward_neighbors(i, k, count)) {
            if (better(rank_of(state.particles[nb].pbest), rank_of(state.particles[best].pbest))) best = nb;
        }
        lbest[i] = best;
    }

    std::vector<Vector> moved(count);
    for (std::size_t i = 0; i < count; ++i) {
        auto& p = state.particles[i];
        const auto& coeff = config.sub_swarms[p.sub_swarm_id].coefficients;
        Vector v = velocity_update(p, state.particles[lbest[i]].pbest.x, coeff, state.v_max, rng);
        moved[i] = position_update(p.x, v, problem.lower, problem.upper);
        p.v = std::move(v);
    }

    for (std::size_t i = 0; i < count; ++i) {
        auto& p = state.particles[i];
        p.x = std::move(moved[i]);
        Solution candidate = evaluate_solution(problem, p.x, eps, ledger);
        if (!better(rank_of(candidate), rank_of(p.pbest))) continue;
        if (final_feasible(p.pbest, final_eps) && !final_feasible(candidate, final_eps)) continue;
        p.pbest = std::move(candidate);
    }

    state.gbest = state.particles[best_pbest(state)].pbest;
    state.iteration = t;
    record(state, config, ledger);
    return true;
}

RunTrace run_pso(const ProblemDefinition& problem, const SwarmConfig& config) {
    Rng rng(config.seed);
    RunTrace trace;
    SwarmState state = initialize_swarm(problem, config, trace.ledger, rng);
    trace.initial_fes = trace.ledger.total_fes();
    while (step(state, config, problem, trace.ledger, rng)) {
    }
    trace.gbest = state.gbest;
    trace.history = std::move(state.history);
    trace.iterations = state.iteration;
    return trace;
}

}  // namespace swarmsqp
