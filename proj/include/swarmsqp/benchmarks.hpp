#pragma once

#include <array>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "swarmsqp/problem.hpp"

namespace swarmsqp {

/// Algorithms that have bundled reference columns.
enum class ReferenceAlgorithm { gp_pso, gp_pso_sqp, peso_plus, dms_pso };

inline constexpr std::array<ReferenceAlgorithm, 4> kReferenceAlgorithms = {
    ReferenceAlgorithm::gp_pso, ReferenceAlgorithm::gp_pso_sqp, ReferenceAlgorithm::peso_plus,
    ReferenceAlgorithm::dms_pso};

[[nodiscard]] std::string_view to_string(ReferenceAlgorithm a) noexcept;

/// Success and feasibility percentages; success is absent where reported "NA".
struct ReferenceRate {
    std::optional<double> success_pct;
    double feasible_pct = 0.0;
};

/// Mean FEs to reach the success accuracy; absent entries were reported as "-".
struct ReferenceFes {
    std::optional<double> gp_pso;
    std::optional<double> gp_pso_loc;
    std::optional<double> sqp;
    std::optional<double> peso_plus;
    std::optional<double> dms_pso;

    bool operator==(const ReferenceFes&) const = default;
};

struct ReferenceStat {
    std::optional<double> best;
    std::optional<double> average;
    std::optional<double> stdev;

    bool operator==(const ReferenceStat&) const = default;
};

/// Best/average/stdev of the objective and maximum constraint value for the
/// stand-alone swarm and for the SQP-refined results.
struct ReferenceOutcome {
    ReferenceStat pso_conflict;
    ReferenceStat pso_constraint;
    ReferenceStat sqp_conflict;
    ReferenceStat sqp_constraint;
};

struct BenchmarkEntry {
    ProblemDefinition problem;
    std::optional<double> f_star;
    /// Best-known optimizer, projected into strict feasibility where the
    /// published digits violate an active constraint by round-off.
    std::optional<Vector> optimizer_point;
    std::array<ReferenceRate, 4> rates;  // indexed by ReferenceAlgorithm
    ReferenceFes fes;
    ReferenceOutcome outcome;

    [[nodiscard]] const ReferenceRate& rate(ReferenceAlgorithm a) const {
        return rates[static_cast<std::size_t>(a)];
    }
};

class BenchmarkNotFound : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// All 24 entries, g01 through g24, in order.
[[nodiscard]] std::span<const BenchmarkEntry> all_benchmarks();

/// Throws BenchmarkNotFound (listing the valid names) for an unknown name.
[[nodiscard]] const BenchmarkEntry& lookup(std::string_view name);

[[nodiscard]] std::vector<std::string> benchmark_names();

enum class MetadataFormat { json, csv };

/// Flat per-problem metadata record, the unit of export_metadata.
struct BenchmarkMetadata {
    std::string name;
    std::size_t dim = 0;
    std::size_t n_ineq = 0;
    std::size_t n_eq = 0;
    std::optional<double> f_star;
    std::array<std::optional<double>, 4> ref_success_pct{};
    std::array<double, 4> ref_feasible_pct{};
    ReferenceFes ref_fes;
    ReferenceStat ref_pso_conflict;
    ReferenceStat ref_sqp_conflict;

    bool operator==(const BenchmarkMetadata&) const = default;
};

[[nodiscard]] BenchmarkMetadata metadata_of(const BenchmarkEntry& entry);

[[nodiscard]] std::string export_metadata(MetadataFormat format);

/// Inverse of export_metadata. Throws std::invalid_argument on malformed input.
[[nodiscard]] std::vector<BenchmarkMetadata> parse_metadata(std::string_view document,
                                                            MetadataFormat format);

}  // namespace swarmsqp
