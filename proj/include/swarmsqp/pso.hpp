#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "swarmsqp/problem.hpp"

namespace swarmsqp {

using Rng = std::mt19937_64;

struct CoefficientSet {
    double w = 0.72;   // inertia
    double iw = 1.49;  // individuality
    double sw = 1.49;  // social
};

struct SubSwarmSpec {
    std::size_t size = 40;
    CoefficientSet coefficients;
};

/// Linear tolerance relaxation: epsilon starts at initial_scale * final_epsilon
/// and reaches final_epsilon at cutoff_fraction * T.
struct RelaxationSchedule {
    double initial_scale = 100.0;
    double final_epsilon = kEqualityTolerance;
    double cutoff_fraction = 0.5;
};

[[nodiscard]] std::vector<SubSwarmSpec> default_sub_swarms();

struct SwarmConfig {
    std::vector<SubSwarmSpec> sub_swarms = default_sub_swarms();
    std::size_t max_iterations = 10000;
    std::size_t k_min = 1;
    std::optional<std::size_t> k_max;  // defaults to total size - 1
    double v_max_fraction = 0.5;
    RelaxationSchedule relaxation;
    std::uint64_t seed = 0;
    /// Total FE cap for the ledger the swarm charges; 0 means unlimited.
    std::size_t fe_budget = 0;
    /// Store every particle position in each trace record.
    bool record_positions = false;

    [[nodiscard]] std::size_t total_size() const noexcept;
    [[nodiscard]] std::size_t resolved_k_max() const noexcept;
    /// Throws std::invalid_argument.
    void validate() const;
};

struct Particle {
    Vector x;
    Vector v;
    Solution pbest;
    std::size_t sub_swarm_id = 0;
};

struct TraceRecord {
    std::size_t iter = 0;
    double gbest_f = 0.0;
    double gbest_violation = 0.0;
    Vector gbest_x;
    Vector cog;
    double epsilon = 0.0;
    std::size_t fes = 0;
    std::vector<Vector> positions;  // only when SwarmConfig::record_positions
};

struct SwarmState {
    std::vector<Particle> particles;
    std::size_t iteration = 0;
    Solution gbest;
    double current_epsilon = kEqualityTolerance;
    std::vector<TraceRecord> history;
    bool terminated = false;
    Vector v_max;
};

/// Velocity update with per-dimension draws, clamped to +-v_max.
/// `draw()` is called for U1_j then U2_j, j = 0..n-1.
template <class Draw>
[[nodiscard]] Vector velocity_update(std::span<const double> x, std::span<const double> v,
                                     std::span<const double> pbest, std::span<const double> lbest,
                                     const CoefficientSet& c, std::span<const double> v_max,
                                     Draw&& draw) {
    Vector out(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double u1 = draw();
        const double u2 = draw();
        double vj = c.w * v[j] + c.iw * u1 * (pbest[j] - x[j]) + c.sw * u2 * (lbest[j] - x[j]);
        if (vj > v_max[j]) vj = v_max[j];
        if (vj < -v_max[j]) vj = -v_max[j];
        out[j] = vj;
    }
    return out;
}

[[nodiscard]] Vector velocity_update(const Particle& p, std::span<const double> lbest,
                                     const CoefficientSet& c, std::span<const double> v_max, Rng& rng);

/// x + v clipped to the box; the velocity component that hit a bound is zeroed.
[[nodiscard]] Vector position_update(std::span<const double> x, Vector& v, std::span<const double> lower,
                                     std::span<const double> upper);

/// {(i+1) mod N, ..., (i+k) mod N}. Throws std::invalid_argument unless 1 <= k <= N-1.
[[nodiscard]] std::vector<std::size_t> forward_neighbors(std::size_t i, std::size_t k, std::size_t n);

[[nodiscard]] std::size_t neighborhood_size(std::size_t t, std::size_t t_max, std::size_t k_min,
                                            std::size_t k_max) noexcept;

[[nodiscard]] double current_epsilon(std::size_t t, std::size_t t_max,
                                     const RelaxationSchedule& schedule) noexcept;

[[nodiscard]] Vector centre_of_gravity(const SwarmState& state);

/// Random positions in the box, random velocities in +-v_max, one FE per particle.
[[nodiscard]] SwarmState initialize_swarm(const ProblemDefinition& problem, const SwarmConfig& config,
                                          EvaluationLedger& ledger, Rng& rng);

/// One synchronous iteration. Returns false (and sets `terminated`) when the
/// iteration cap or FE budget leaves no room for another step.
bool step(SwarmState& state, const SwarmConfig& config, const ProblemDefinition& problem,
          EvaluationLedger& ledger, Rng& rng);

struct RunTrace {
    Solution gbest;
    std::vector<TraceRecord> history;
    std::size_t iterations = 0;
    std::size_t initial_fes = 0;
    EvaluationLedger ledger;
};

[[nodiscard]] RunTrace run_pso(const ProblemDefinition& problem, const SwarmConfig& config);

}  // namespace swarmsqp
