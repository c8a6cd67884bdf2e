#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "swarmsqp/hybrid.hpp"

namespace swarmsqp {

enum class OutputFormat { json, csv, table };

[[nodiscard]] std::string_view to_string(OutputFormat f) noexcept;
/// Throws std::invalid_argument.
[[nodiscard]] OutputFormat parse_format(std::string_view name);

struct ExperimentConfig {
    std::vector<std::string> problems{"all"};
    std::size_t runs = 25;
    std::uint64_t seed = 1;
    TriggerStrategy strategy = FinalOnly{};
    std::size_t iterations = 10000;
    std::string output;  // empty writes to stdout
    OutputFormat format = OutputFormat::json;
    bool trace = false;
    std::string trace_dir;
    std::size_t workers = 1;

    /// Expands "all" and checks every name. Throws BenchmarkNotFound.
    [[nodiscard]] std::vector<std::string> resolved_problems() const;
    /// Throws std::invalid_argument.
    void validate() const;
};

/// Reads the JSON mirror of ExperimentConfig on top of `base`. Throws
/// std::invalid_argument on malformed input or unknown keys.
[[nodiscard]] ExperimentConfig parse_config(std::string_view json, ExperimentConfig base = {});

struct RunRecord {
    std::string problem;
    std::size_t run = 0;
    std::uint64_t seed = 0;
    double pso_f = 0.0;
    double pso_violation = 0.0;
    bool pso_feasible = false;
    std::optional<bool> pso_success;
    double f = 0.0;
    double violation = 0.0;
    bool feasible = false;
    std::optional<bool> success;
    bool from_sqp = false;
    std::string sqp_status;  // empty when SQP did not run
    std::size_t fes = 0;
    std::size_t sqp_fes = 0;
    std::optional<std::size_t> fes_to_accuracy;
    std::optional<std::size_t> pso_fes_to_accuracy;
    std::optional<std::size_t> first_success_fe;
    std::optional<std::size_t> sqp_fes_to_target;
};

[[nodiscard]] RunRecord make_record(std::string problem, std::size_t run, std::uint64_t seed,
                                    const HybridResult& r, std::optional<double> f_star);

struct ProblemReport {
    std::string problem;
    std::size_t runs = 0;
    std::optional<double> f_star;
    std::optional<double> pso_success_pct;
    double pso_feasible_pct = 0.0;
    std::optional<double> success_pct;
    double feasible_pct = 0.0;
    std::optional<double> pso_mean_fes;
    std::optional<double> mean_fes;
    /// Mean swarm FEs before the first successful probe (EveryIteration only).
    std::optional<double> loc_mean_fes;
    /// Mean SQP-internal FEs to reach the target, over runs whose SQP got there.
    std::optional<double> sqp_mean_fes;
    SummaryStat pso_f;
    SummaryStat pso_violation;
    SummaryStat f;
    SummaryStat violation;
    double sqp_fe_share = 0.0;
};

/// Aggregates the records of one problem. Throws on an empty list.
[[nodiscard]] ProblemReport summarize_problem(std::string problem, std::optional<double> f_star,
                                              const std::vector<RunRecord>& records);

struct ExperimentReport {
    std::string strategy;
    std::size_t iterations = 0;
    std::size_t runs = 0;
    std::uint64_t seed = 0;
    std::vector<ProblemReport> problems;
    std::vector<RunRecord> records;
};

/// One run of the experiment with its full result, handed to `on_run` in
/// deterministic (problem, run) order.
struct RunOutput {
    std::string problem;
    std::size_t run = 0;
    std::uint64_t seed = 0;
    HybridResult result;
};

/// Runs every (problem, run) pair with seed = config.seed + run, spread over
/// config.workers threads. Output does not depend on the worker count.
[[nodiscard]] ExperimentReport run_experiment(const ExperimentConfig& config,
                                              std::vector<RunOutput>* outputs = nullptr);

[[nodiscard]] std::string format_report(const ExperimentReport& report, OutputFormat format);

/// f to 6 decimals.
[[nodiscard]] std::string format_f(double f);
/// Scientific with one decimal, e.g. 5.8E-12.
[[nodiscard]] std::string format_sci(double v);

/// Per-iteration trace of one run; position snapshots only if they were recorded.
[[nodiscard]] std::string trace_json(const RunOutput& run);

struct ComparisonRow {
    std::string problem;
    bool has_reference = true;
    std::string metric;     // success_pct, feasible_pct or mean_fes
    std::string algorithm;  // gp_pso, gp_pso_sqp, gp_pso_loc, sqp, peso_plus, dms_pso
    std::optional<double> measured;
    std::optional<double> reference;
    std::optional<double> delta;  // measured - reference
    bool flagged = false;         // a rate below its reference
};

[[nodiscard]] std::vector<ComparisonRow> compare_reference(const ExperimentReport& report);
[[nodiscard]] std::string format_comparison(const std::vector<ComparisonRow>& rows);

}  // namespace swarmsqp
