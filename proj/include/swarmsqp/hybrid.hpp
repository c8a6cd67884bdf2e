#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "swarmsqp/problem.hpp"
#include "swarmsqp/pso.hpp"
#include "swarmsqp/sqp.hpp"

namespace swarmsqp {

/// SQP once, from the final gbest.
struct FinalOnly {};

/// FinalOnly plus a side-ledger SQP probe from every iteration's gbest.
struct EveryIteration {};

/// SQP from gbest whenever gbest improves.
struct OnGbestImprovement {};

/// Every `period` iterations, SQP from the pbests of `seeds` distinct random particles.
struct PeriodicRandomSeeds {
    std::size_t period = 50;
    std::size_t seeds = 5;
    bool final_refine = true;
};

using TriggerStrategy = std::variant<FinalOnly, EveryIteration, OnGbestImprovement, PeriodicRandomSeeds>;

/// "final", "every", "improve" or "periodic".
[[nodiscard]] std::string_view strategy_name(const TriggerStrategy& s) noexcept;

/// Throws std::invalid_argument on an unknown name.
[[nodiscard]] TriggerStrategy parse_strategy(std::string_view name);

/// Throws std::invalid_argument unless period >= 1 and seeds >= 1.
void validate(const TriggerStrategy& s);

struct ProbeRecord {
    std::size_t iteration = 0;
    std::size_t pso_fes = 0;  // swarm FEs after the initial population
    bool success = false;
    std::size_t sqp_fes = 0;  // FEs the probe itself spent (0 when reused)
    std::optional<std::size_t> sqp_fes_to_target;
};

struct HybridResult {
    Solution pso_final;
    /// The SQP run whose output is best; absent when SQP never ran.
    std::optional<SqpResult> sqp_final;
    /// Best of the swarm result and every SQP output.
    Solution best;
    bool best_from_sqp = false;
    /// Feasibility slack of the phase that produced `best`.
    double best_slack = 0.0;
    /// Total FEs at which the best-so-far record first met success().
    std::optional<std::size_t> fes_to_accuracy;
    /// Total FEs at which the swarm's gbest alone first met success().
    std::optional<std::size_t> pso_fes_to_accuracy;
    /// Swarm FEs (after the initial population) at the first successful probe.
    std::optional<std::size_t> first_success_fe;
    std::optional<std::size_t> first_success_iteration;
    std::vector<ProbeRecord> probes;
    std::size_t sqp_runs = 0;
    EvaluationLedger ledger;
    /// Probe FEs; never charged to `ledger`.
    EvaluationLedger probe_ledger;
    RunTrace trace;

    [[nodiscard]] bool feasible() const;
    /// nullopt when the problem has no known optimum.
    [[nodiscard]] std::optional<bool> succeeded(std::optional<double> f_star) const;
    [[nodiscard]] bool pso_feasible() const;
    [[nodiscard]] std::optional<bool> pso_succeeded(std::optional<double> f_star) const;
    /// SQP share of the main ledger in [0, 1].
    [[nodiscard]] double sqp_fe_share() const;
};

/// `seed` replaces pso_config.seed. sqp_config.target_f is filled from the problem.
[[nodiscard]] HybridResult run_hybrid(const ProblemDefinition& problem, const SwarmConfig& pso_config,
                                      const SqpConfig& sqp_config, const TriggerStrategy& strategy,
                                      std::uint64_t seed);

/// Percentage of successful runs; nullopt without f_star. Throws on an empty list.
[[nodiscard]] std::optional<double> success_rate(std::span<const HybridResult> results,
                                                 std::optional<double> f_star);
[[nodiscard]] std::optional<double> pso_success_rate(std::span<const HybridResult> results,
                                                     std::optional<double> f_star);
[[nodiscard]] double feasibility_rate(std::span<const HybridResult> results);
[[nodiscard]] double pso_feasibility_rate(std::span<const HybridResult> results);

/// Mean over the present entries; nullopt when none are present.
[[nodiscard]] std::optional<double> mean_fes_to_accuracy(std::span<const std::optional<std::size_t>> fes);
[[nodiscard]] std::optional<double> mean_fes_to_accuracy(std::span<const HybridResult> results);

struct SummaryStat {
    std::optional<double> best;
    std::optional<double> average;
    std::optional<double> stdev;
};

/// Minimum, mean and sample standard deviation of the finite values.
[[nodiscard]] SummaryStat summarize(std::span<const double> values);

struct FirstSuccessStudy {
    std::vector<bool> success;  // one flag per iteration, iteration 0 first
    std::optional<std::size_t> first_success_fe;
    std::optional<std::size_t> first_success_iteration;
    std::optional<std::size_t> sqp_fes_at_first_success;
    std::size_t probe_fes = 0;
    std::size_t pso_fes = 0;
};

/// EveryIteration run reduced to its probe flags. Throws std::invalid_argument
/// when the problem has no known optimum.
[[nodiscard]] FirstSuccessStudy first_success_study(const ProblemDefinition& problem,
                                                    const SwarmConfig& pso_config, const SqpConfig& sqp_config,
                                                    std::uint64_t seed);

}  // namespace swarmsqp
