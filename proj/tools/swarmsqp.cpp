#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "swarmsqp/benchmarks.hpp"
#include "swarmsqp/report.hpp"

namespace fs = std::filesystem;
using namespace swarmsqp;

namespace {

constexpr int kOk = 0;
constexpr int kInternal = 1;
constexpr int kBadArgs = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    const fs::path p(path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << text;
}

fs::path trace_directory(const ExperimentConfig& c) {
    if (!c.trace_dir.empty()) return c.trace_dir;
    if (!c.output.empty() && c.output != "-") {
        const fs::path p(c.output);
        return p.has_parent_path() ? p.parent_path() : fs::path(".");
    }
    return ".";
}

std::vector<std::string> split_names(const std::vector<std::string>& raw) {
    std::vector<std::string> out;
    for (const auto& r : raw) {
        std::stringstream ss(r);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (!item.empty()) out.push_back(item);
        }
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"GP-PSO with SQP refinement on the CEC2006 constrained benchmarks"};
    app.set_version_flag("--version", "swarmsqp 0.1.0");

    std::vector<std::string> problems;
    std::size_t runs = 25;
    std::uint64_t seed = 1;
    std::string strategy = "final";
    std::size_t iterations = 10000;
    std::string out;
    std::string format = "json";
    bool trace = false;
    std::string trace_dir;
    std::string config_path;
    bool compare = false;
    std::size_t workers = 1;
    std::string export_format;

    app.add_option("--problem,-p", problems, "Benchmark names (g01..g24), comma separated, or 'all'");
    app.add_option("--runs,-r", runs, "Runs per problem")->check(CLI::PositiveNumber);
    app.add_option("--seed,-s", seed, "Base seed; run i uses seed + i");
    app.add_option("--strategy", strategy, "SQP trigger: final, every, improve or periodic");
    app.add_option("--iterations,-i", iterations, "Swarm iterations per run");
    app.add_option("--out,-o", out, "Report path (stdout when omitted)");
    app.add_option("--format,-f", format, "json, csv or table");
    app.add_flag("--trace", trace, "Write one per-iteration trace JSON per run");
    app.add_option("--trace-dir", trace_dir, "Directory for trace files");
    app.add_option("--config,-c", config_path, "JSON experiment config; flags override it");
    app.add_flag("--compare", compare, "Append a comparison against the bundled reference data");
    app.add_option("--workers,-j", workers, "Worker threads")->check(CLI::PositiveNumber);
    app.add_option("--export-metadata", export_format, "Print the benchmark metadata (json or csv) and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kBadArgs;
    }

    try {
        if (!export_format.empty()) {
            if (export_format != "json" && export_format != "csv") {
                throw UsageError("--export-metadata expects json or csv");
            }
            write_output(out, export_metadata(export_format == "json" ? MetadataFormat::json : MetadataFormat::csv));
            return kOk;
        }

        ExperimentConfig config;
        if (!config_path.empty()) config = parse_config(read_file(config_path));
        if (app.count("--problem")) config.problems = split_names(problems);
        if (app.count("--runs")) config.runs = runs;
        if (app.count("--seed")) config.seed = seed;
        if (app.count("--strategy")) config.strategy = parse_strategy(strategy);
        if (app.count("--iterations")) config.iterations = iterations;
        if (app.count("--out")) config.output = out;
        if (app.count("--format")) config.format = parse_format(format);
        if (trace) config.trace = true;
        if (app.count("--trace-dir")) config.trace_dir = trace_dir;
        if (app.count("--workers")) config.workers = workers;
        config.validate();
        (void)config.resolved_problems();

        std::vector<RunOutput> outputs;
        const ExperimentReport report = run_experiment(config, config.trace ? &outputs : nullptr);
        std::string text = format_report(report, config.format);
        if (compare) text += "\n" + format_comparison(compare_reference(report));
        write_output(config.output, text);

        if (config.trace) {
            const fs::path dir = trace_directory(config);
            fs::create_directories(dir);
            for (const auto& o : outputs) {
                const fs::path file = dir / (o.problem + "_run" + std::to_string(o.run) + "_trace.json");
                write_output(file.string(), trace_json(o));
            }
        }
        return kOk;
    } catch (const BenchmarkNotFound& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return kBadArgs;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return kBadArgs;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return kBadArgs;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kInternal;
    }
}
