#include "swarmsqp/report.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "swarmsqp/benchmarks.hpp"

namespace swarmsqp {

using ordered_json = nlohmann::ordered_json;

namespace {

std::string printf_string(const char* fmt, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

double round_f(double f) {
    if (!std::isfinite(f)) return f;
    return std::stod(format_f(f));
}

double round_sci(double v) {
    if (!std::isfinite(v)) return v;
    return std::stod(format_sci(v));
}

ordered_json opt_json(const std::optional<double>& v, double (*round)(double)) {
    if (!v || !std::isfinite(*v)) return nullptr;
    return round(*v);
}

double round_pct(double v) { return std::round(v * 10.0) / 10.0; }

ordered_json stat_json(const SummaryStat& s, bool objective) {
    ordered_json j;
    j["best"] = opt_json(s.best, objective ? round_f : round_sci);
    j["average"] = opt_json(s.average, objective ? round_f : round_sci);
    j["stdev"] = opt_json(s.stdev, round_sci);
    return j;
}

template <class T>
ordered_json opt_count(const std::optional<T>& v) {
    if (!v) return nullptr;
    return *v;
}

ordered_json opt_bool(const std::optional<bool>& v) {
    if (!v) return nullptr;
    return *v;
}

std::string cell(const std::optional<double>& v, std::string (*fmt)(double)) {
    if (!v || !std::isfinite(*v)) return "";
    return fmt(*v);
}

std::string pct_text(const std::optional<double>& v) {
    if (!v) return "NA";
    return printf_string("%.0f%%", *v);
}

std::string pct_cell(double v) { return printf_string("%.1f", v); }

std::string fes_text(const std::optional<double>& v) {
    if (!v) return "-";
    return format_sci(*v);
}

std::string stat_text(const std::optional<double>& v, bool objective) {
    if (!v || !std::isfinite(*v)) return "NaN";
    return objective ? format_f(*v) : format_sci(*v);
}

void pad(std::ostringstream& os, const std::string& s, std::size_t width) {
    os << s;
    for (std::size_t i = s.size(); i < width; ++i) os << ' ';
}

std::optional<double> mean_of(const std::vector<std::optional<std::size_t>>& v) {
    return mean_fes_to_accuracy(std::span<const std::optional<std::size_t>>(v));
}

}  // namespace

std::string_view to_string(OutputFormat f) noexcept {
    switch (f) {
        case OutputFormat::json: return "json";
        case OutputFormat::csv: return "csv";
        case OutputFormat::table: return "table";
    }
    return "?";
}

OutputFormat parse_format(std::string_view name) {
    if (name == "json") return OutputFormat::json;
    if (name == "csv") return OutputFormat::csv;
    if (name == "table" || name == "text") return OutputFormat::table;
    throw std::invalid_argument("unknown format '" + std::string(name) + "' (expected json, csv or table)");
}

std::vector<std::string> ExperimentConfig::resolved_problems() const {
    std::vector<std::string> out;
    for (const auto& p : problems) {
        if (p == "all") {
            for (auto& n : benchmark_names()) out.push_back(n);
        } else {
            out.push_back(lookup(p).problem.name);
        }
    }
    return out;
}

void ExperimentConfig::validate() const {
    if (runs < 1) throw std::invalid_argument("runs must be >= 1");
    if (problems.empty()) throw std::invalid_argument("no problems selected");
    if (workers < 1) throw std::invalid_argument("workers must be >= 1");
    swarmsqp::validate(strategy);
}

ExperimentConfig parse_config(std::string_view json, ExperimentConfig base) {
    ordered_json j;
    try {
        j = ordered_json::parse(json);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
    try {
        for (auto it = j.begin(); it != j.end(); ++it) {
            const std::string& key = it.key();
            const auto& v = it.value();
            if (key == "problems") {
                if (v.is_string()) {
                    base.problems = {v.get<std::string>()};
                } else {
                    base.problems = v.get<std::vector<std::string>>();
                }
            } else if (key == "runs") {
                base.runs = v.get<std::size_t>();
            } else if (key == "seed") {
                base.seed = v.get<std::uint64_t>();
            } else if (key == "strategy") {
                if (v.is_string()) {
                    base.strategy = parse_strategy(v.get<std::string>());
                } else {
                    PeriodicRandomSeeds p;
                    const std::string name = v.at("name").get<std::string>();
                    if (name != "periodic") {
                        base.strategy = parse_strategy(name);
                        continue;
                    }
                    p.period = v.value("period", p.period);
                    p.seeds = v.value("seeds", p.seeds);
                    p.final_refine = v.value("final_refine", p.final_refine);
                    base.strategy = p;
                }
            } else if (key == "iterations") {
                base.iterations = v.get<std::size_t>();
            } else if (key == "output") {
                base.output = v.get<std::string>();
            } else if (key == "format") {
                base.format = parse_format(v.get<std::string>());
            } else if (key == "trace") {
                base.trace = v.get<bool>();
            } else if (key == "trace_dir") {
                base.trace_dir = v.get<std::string>();
            } else if (key == "workers") {
                base.workers = v.get<std::size_t>();
            } else {
                throw std::invalid_argument("unknown config key '" + key + "'");
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("bad config value: ") + e.what());
    }
    return base;
}

RunRecord make_record(std::string problem, std::size_t run, std::uint64_t seed, const HybridResult& r,
                      std::optional<double> f_star) {
    RunRecord rec;
    rec.problem = std::move(problem);
    rec.run = run;
    rec.seed = seed;
    rec.pso_f = r.pso_final.non_finite ? std::numeric_limits<double>::infinity() : r.pso_final.f;
    rec.pso_violation = r.pso_final.report.max_violation;
    rec.pso_feasible = r.pso_feasible();
    rec.pso_success = r.pso_succeeded(f_star);
    rec.f = r.best.non_finite ? std::numeric_limits<double>::infinity() : r.best.f;
    rec.violation = r.best.report.max_violation;
    rec.feasible = r.feasible();
    rec.success = r.succeeded(f_star);
    rec.from_sqp = r.best_from_sqp;
    if (r.sqp_final) {
        rec.sqp_status = std::string(to_string(r.sqp_final->status));
        rec.sqp_fes_to_target = r.sqp_final->fes_to_target;
    }
    rec.fes = r.ledger.total_fes();
    rec.sqp_fes = r.ledger.sqp_fes();
    if (rec.success.value_or(false)) rec.fes_to_accuracy = r.fes_to_accuracy;
    if (rec.pso_success.value_or(false)) rec.pso_fes_to_accuracy = r.pso_fes_to_accuracy;
    rec.first_success_fe = r.first_success_fe;
    return rec;
}

ProblemReport summarize_problem(std::string problem, std::optional<double> f_star,
                                const std::vector<RunRecord>& records) {
    if (records.empty()) throw std::invalid_argument("summarize_problem: no runs");
    ProblemReport p;
    p.problem = std::move(problem);
    p.runs = records.size();
    p.f_star = f_star;
    const double n = static_cast<double>(records.size());
    std::size_t ps = 0, pf = 0, hs = 0, hf = 0;
    std::vector<double> pso_f, pso_v, f, v;
    std::vector<std::optional<std::size_t>> pso_fes, fes, loc, sqp;
    double share = 0.0;
    for (const auto& r : records) {
        ps += r.pso_success.value_or(false);
        pf += r.pso_feasible;
        hs += r.success.value_or(false);
        hf += r.feasible;
        pso_f.push_back(r.pso_f);
        pso_v.push_back(r.pso_violation);
        f.push_back(r.f);
        v.push_back(r.violation);
        pso_fes.push_back(r.pso_fes_to_accuracy);
        fes.push_back(r.fes_to_accuracy);
        loc.push_back(r.first_success_fe);
        sqp.push_back(r.success.value_or(false) ? r.sqp_fes_to_target : std::nullopt);
        share += r.fes ? static_cast<double>(r.sqp_fes) / static_cast<double>(r.fes) : 0.0;
    }
    if (f_star) {
        p.pso_success_pct = 100.0 * static_cast<double>(ps) / n;
        p.success_pct = 100.0 * static_cast<double>(hs) / n;
    }
    p.pso_feasible_pct = 100.0 * static_cast<double>(pf) / n;
    p.feasible_pct = 100.0 * static_cast<double>(hf) / n;
    p.pso_mean_fes = mean_of(pso_fes);
    p.mean_fes = mean_of(fes);
    p.loc_mean_fes = mean_of(loc);
    p.sqp_mean_fes = mean_of(sqp);
    p.pso_f = summarize(pso_f);
    p.pso_violation = summarize(pso_v);
    p.f = summarize(f);
    p.violation = summarize(v);
    p.sqp_fe_share = share / n;
    return p;
}

ExperimentReport run_experiment(const ExperimentConfig& config, std::vector<RunOutput>* outputs) {
    config.validate();
    const auto names = config.resolved_problems();

    struct Job {
        std::string problem;
        std::size_t run;
        std::uint64_t seed;
    };
    std::vector<Job> jobs;
    for (const auto& name : names) {
        for (std::size_t r = 0; r < config.runs; ++r) jobs.push_back({name, r, config.seed + r});
    }

    std::vector<std::optional<RunOutput>> done(jobs.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= jobs.size()) return;
            try {
                const auto& entry = lookup(jobs[i].problem);
                SwarmConfig pso;
                pso.max_iterations = config.iterations;
                pso.record_positions = config.trace && entry.problem.dimension == 2;
                RunOutput out{jobs[i].problem, jobs[i].run, jobs[i].seed,
                              run_hybrid(entry.problem, pso, SqpConfig{}, config.strategy, jobs[i].seed)};
                if (!config.trace && !outputs) out.result.trace.history.clear();
                done[i] = std::move(out);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                next = jobs.size();
            }
        }
    };
    const std::size_t threads = std::min(config.workers, std::max<std::size_t>(jobs.size(), 1));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (error) std::rethrow_exception(error);

    ExperimentReport report;
    report.strategy = std::string(strategy_name(config.strategy));
    report.iterations = config.iterations;
    report.runs = config.runs;
    report.seed = config.seed;
    std::size_t k = 0;
    for (const auto& name : names) {
        const auto f_star = lookup(name).f_star;
        std::vector<RunRecord> recs;
        for (std::size_t r = 0; r < config.runs; ++r, ++k) {
            const RunOutput& o = *done[k];
            recs.push_back(make_record(o.problem, o.run, o.seed, o.result, f_star));
        }
        report.problems.push_back(summarize_problem(name, f_star, recs));
        report.records.insert(report.records.end(), recs.begin(), recs.end());
    }
    if (outputs) {
        outputs->clear();
        for (auto& d : done) outputs->push_back(std::move(*d));
    }
    return report;
}

std::string format_f(double f) {
    std::string s = printf_string("%.6f", f);
    if (s == "-0.000000") s = "0.000000";
    return s;
}

std::string format_sci(double v) { return printf_string("%.1E", v); }

namespace {

ordered_json report_json(const ExperimentReport& r) {
    ordered_json j;
    j["strategy"] = r.strategy;
    j["iterations"] = r.iterations;
    j["runs"] = r.runs;
    j["seed"] = r.seed;
    j["problems"] = ordered_json::array();
    for (const auto& p : r.problems) {
        ordered_json q;
        q["problem"] = p.problem;
        q["runs"] = p.runs;
        q["f_star"] = opt_json(p.f_star, round_f);
        ordered_json pso;
        pso["success_pct"] = p.pso_success_pct ? ordered_json(round_pct(*p.pso_success_pct)) : ordered_json(nullptr);
        pso["feasible_pct"] = round_pct(p.pso_feasible_pct);
        pso["mean_fes"] = opt_json(p.pso_mean_fes, round_pct);
        pso["f"] = stat_json(p.pso_f, true);
        pso["max_violation"] = stat_json(p.pso_violation, false);
        q["pso"] = pso;
        ordered_json hyb;
        hyb["success_pct"] = p.success_pct ? ordered_json(round_pct(*p.success_pct)) : ordered_json(nullptr);
        hyb["feasible_pct"] = round_pct(p.feasible_pct);
        hyb["mean_fes"] = opt_json(p.mean_fes, round_pct);
        hyb["loc_mean_fes"] = opt_json(p.loc_mean_fes, round_pct);
        hyb["sqp_mean_fes"] = opt_json(p.sqp_mean_fes, round_pct);
        hyb["f"] = stat_json(p.f, true);
        hyb["max_violation"] = stat_json(p.violation, false);
        hyb["sqp_fe_share"] = round_sci(p.sqp_fe_share);
        q["hybrid"] = hyb;
        j["problems"].push_back(q);
    }
    j["records"] = ordered_json::array();
    for (const auto& rec : r.records) {
        ordered_json o;
        o["problem"] = rec.problem;
        o["run"] = rec.run;
        o["seed"] = rec.seed;
        o["pso_f"] = std::isfinite(rec.pso_f) ? ordered_json(round_f(rec.pso_f)) : ordered_json(nullptr);
        o["pso_max_violation"] =
            std::isfinite(rec.pso_violation) ? ordered_json(round_sci(rec.pso_violation)) : ordered_json(nullptr);
        o["pso_feasible"] = rec.pso_feasible;
        o["pso_success"] = opt_bool(rec.pso_success);
        o["f"] = std::isfinite(rec.f) ? ordered_json(round_f(rec.f)) : ordered_json(nullptr);
        o["max_violation"] =
            std::isfinite(rec.violation) ? ordered_json(round_sci(rec.violation)) : ordered_json(nullptr);
        o["feasible"] = rec.feasible;
        o["success"] = opt_bool(rec.success);
        o["from_sqp"] = rec.from_sqp;
        o["sqp_status"] = rec.sqp_status.empty() ? ordered_json(nullptr) : ordered_json(rec.sqp_status);
        o["fes"] = rec.fes;
        o["sqp_fes"] = rec.sqp_fes;
        o["fes_to_accuracy"] = opt_count(rec.fes_to_accuracy);
        o["first_success_fe"] = opt_count(rec.first_success_fe);
        j["records"].push_back(o);
    }
    return j;
}

std::string report_csv(const ExperimentReport& r) {
    std::ostringstream os;
    os << "problem,runs,f_star,pso_success_pct,pso_feasible_pct,pso_mean_fes,pso_f_best,pso_f_average,pso_f_stdev,"
          "pso_violation_best,pso_violation_average,pso_violation_stdev,success_pct,feasible_pct,mean_fes,"
          "loc_mean_fes,sqp_mean_fes,f_best,f_average,f_stdev,violation_best,violation_average,violation_stdev,"
          "sqp_fe_share\n";
    auto stat = [&](const SummaryStat& s, bool objective) {
        os << ',' << cell(s.best, objective ? format_f : format_sci) << ','
           << cell(s.average, objective ? format_f : format_sci) << ',' << cell(s.stdev, format_sci);
    };
    for (const auto& p : r.problems) {
        os << p.problem << ',' << p.runs << ',' << cell(p.f_star, format_f) << ','
           << (p.pso_success_pct ? pct_cell(*p.pso_success_pct) : "") << ',' << pct_cell(p.pso_feasible_pct) << ','
           << cell(p.pso_mean_fes, format_sci);
        stat(p.pso_f, true);
        stat(p.pso_violation, false);
        os << ',' << (p.success_pct ? pct_cell(*p.success_pct) : "") << ',' << pct_cell(p.feasible_pct) << ','
           << cell(p.mean_fes, format_sci) << ',' << cell(p.loc_mean_fes, format_sci) << ','
           << cell(p.sqp_mean_fes, format_sci);
        stat(p.f, true);
        stat(p.violation, false);
        os << ',' << format_sci(p.sqp_fe_share) << '\n';
    }
    return os.str();
}

std::string report_table(const ExperimentReport& r) {
    std::ostringstream os;
    os << "strategy " << r.strategy << ", " << r.runs << " runs, " << r.iterations << " iterations, seed " << r.seed
       << "\n\n";
    const std::size_t w = 20;
    pad(os, "PROBLEM", 10);
    pad(os, "GP-PSO SUCCESS", w);
    pad(os, "FEASIBLE", w);
    pad(os, "GP-PSO-SQP SUCCESS", w);
    os << "FEASIBLE\n";
    for (const auto& p : r.problems) {
        pad(os, p.problem, 10);
        pad(os, pct_text(p.pso_success_pct), w);
        pad(os, pct_text(p.pso_feasible_pct), w);
        pad(os, pct_text(p.success_pct), w);
        os << pct_text(p.feasible_pct) << '\n';
    }
    os << '\n';
    pad(os, "PROBLEM", 10);
    pad(os, "GP-PSO", w);
    pad(os, "GP-PSO-SQP", w);
    pad(os, "GP-PSO_loc", w);
    os << "SQP\n";
    for (const auto& p : r.problems) {
        pad(os, p.problem, 10);
        const bool na = !p.f_star;
        pad(os, na ? "NA" : fes_text(p.pso_mean_fes), w);
        pad(os, na ? "NA" : fes_text(p.mean_fes), w);
        pad(os, na ? "NA" : fes_text(p.loc_mean_fes), w);
        os << (na ? "NA" : fes_text(p.sqp_mean_fes)) << '\n';
    }
    os << '\n';
    pad(os, "PROBLEM", 10);
    pad(os, "OPTIMUM", 18);
    pad(os, "", 9);
    pad(os, "GP-PSO", 18);
    pad(os, "Max Constraint", 16);
    pad(os, "GP-PSO-SQP", 18);
    os << "Max Constraint\n";
    for (const auto& p : r.problems) {
        const char* labels[] = {"BEST", "AVERAGE", "STDEV"};
        for (int k = 0; k < 3; ++k) {
            auto pick = [&](const SummaryStat& s) { return k == 0 ? s.best : k == 1 ? s.average : s.stdev; };
            pad(os, k == 0 ? p.problem : "", 10);
            pad(os, k == 0 ? (p.f_star ? format_f(*p.f_star) : "NA") : "", 18);
            pad(os, labels[k], 9);
            pad(os, stat_text(pick(p.pso_f), k < 2), 18);
            pad(os, stat_text(pick(p.pso_violation), false), 16);
            pad(os, stat_text(pick(p.f), k < 2), 18);
            os << stat_text(pick(p.violation), false) << '\n';
        }
    }
    return os.str();
}

}  // namespace

std::string format_report(const ExperimentReport& report, OutputFormat format) {
    switch (format) {
        case OutputFormat::json: return report_json(report).dump(2) + "\n";
        case OutputFormat::csv: return report_csv(report);
        case OutputFormat::table: return report_table(report);
    }
    return {};
}

std::string trace_json(const RunOutput& run) {
    ordered_json j;
    j["problem"] = run.problem;
    j["run"] = run.run;
    j["seed"] = run.seed;
    j["iterations"] = run.result.trace.iterations;
    j["initial_fes"] = run.result.trace.initial_fes;
    j["records"] = ordered_json::array();
    for (const auto& r : run.result.trace.history) {
        ordered_json o;
        o["iter"] = r.iter;
        o["gbest_f"] = std::isfinite(r.gbest_f) ? ordered_json(r.gbest_f) : ordered_json(nullptr);
        o["gbest_violation"] =
            std::isfinite(r.gbest_violation) ? ordered_json(r.gbest_violation) : ordered_json(nullptr);
        o["gbest"] = r.gbest_x;
        o["cog"] = r.cog;
        o["epsilon"] = r.epsilon;
        o["fes"] = r.fes;
        if (!r.positions.empty()) o["positions"] = r.positions;
        j["records"].push_back(o);
    }
    return j.dump() + "\n";
}

std::vector<ComparisonRow> compare_reference(const ExperimentReport& report) {
    std::vector<ComparisonRow> rows;
    for (const auto& p : report.problems) {
        const BenchmarkEntry* entry = nullptr;
        try {
            entry = &lookup(p.problem);
        } catch (const BenchmarkNotFound&) {
        }
        if (!entry) {
            ComparisonRow row;
            row.problem = p.problem;
            row.has_reference = false;
            rows.push_back(row);
            continue;
        }
        auto add = [&](std::string metric, std::string algo, std::optional<double> measured,
                       std::optional<double> reference, bool rate) {
            ComparisonRow row;
            row.problem = p.problem;
            row.metric = std::move(metric);
            row.algorithm = std::move(algo);
            row.measured = measured;
            row.reference = reference;
            if (measured && reference) {
                row.delta = *measured - *reference;
                row.flagged = rate && *row.delta < 0.0;
            }
            rows.push_back(std::move(row));
        };
        const auto& gp = entry->rate(ReferenceAlgorithm::gp_pso);
        const auto& hy = entry->rate(ReferenceAlgorithm::gp_pso_sqp);
        const auto& pe = entry->rate(ReferenceAlgorithm::peso_plus);
        const auto& dm = entry->rate(ReferenceAlgorithm::dms_pso);
        add("success_pct", "gp_pso", p.pso_success_pct, gp.success_pct, true);
        add("success_pct", "gp_pso_sqp", p.success_pct, hy.success_pct, true);
        add("success_pct", "peso_plus", std::nullopt, pe.success_pct, true);
        add("success_pct", "dms_pso", std::nullopt, dm.success_pct, true);
        add("feasible_pct", "gp_pso", p.pso_feasible_pct, gp.feasible_pct, true);
        add("feasible_pct", "gp_pso_sqp", p.feasible_pct, hy.feasible_pct, true);
        add("feasible_pct", "peso_plus", std::nullopt, pe.feasible_pct, true);
        add("feasible_pct", "dms_pso", std::nullopt, dm.feasible_pct, true);
        add("mean_fes", "gp_pso", p.pso_mean_fes, entry->fes.gp_pso, false);
        add("mean_fes", "gp_pso_loc", p.loc_mean_fes, entry->fes.gp_pso_loc, false);
        add("mean_fes", "sqp", p.sqp_mean_fes, entry->fes.sqp, false);
        add("mean_fes", "peso_plus", std::nullopt, entry->fes.peso_plus, false);
        add("mean_fes", "dms_pso", std::nullopt, entry->fes.dms_pso, false);
    }
    return rows;
}

std::string format_comparison(const std::vector<ComparisonRow>& rows) {
    std::ostringstream os;
    pad(os, "PROBLEM", 10);
    pad(os, "METRIC", 14);
    pad(os, "ALGORITHM", 12);
    pad(os, "MEASURED", 12);
    pad(os, "REFERENCE", 12);
    os << "DELTA\n";
    for (const auto& r : rows) {
        pad(os, r.problem, 10);
        if (!r.has_reference) {
            os << "no reference\n";
            continue;
        }
        const bool rate = r.metric != "mean_fes";
        auto show = [&](const std::optional<double>& v) {
            if (!v) return std::string(rate ? "NA" : "-");
            return rate ? printf_string("%.0f%%", *v) : format_sci(*v);
        };
        pad(os, r.metric, 14);
        pad(os, r.algorithm, 12);
        pad(os, show(r.measured), 12);
        pad(os, show(r.reference), 12);
        if (r.delta) {
            os << (rate ? printf_string("%+.0f", *r.delta) : printf_string("%+.1E", *r.delta));
            if (r.flagged) os << " !";
        }
        os << '\n';
    }
    return os.str();
}

}  // namespace swarmsqp
