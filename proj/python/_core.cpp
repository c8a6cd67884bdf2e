#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "swarmsqp/benchmarks.hpp"
#include "swarmsqp/hybrid.hpp"
#include "swarmsqp/qp.hpp"
#include "swarmsqp/report.hpp"
#include "swarmsqp/sqp.hpp"

namespace py = pybind11;
using namespace swarmsqp;

namespace {

py::dict sqp_dict(const SqpResult& r) {
    py::dict d;
    d["x"] = r.x;
    d["f"] = r.f;
    d["max_violation"] = r.report.max_violation;
    d["status"] = std::string(to_string(r.status));
    d["iterations"] = r.iterations;
    d["fes"] = r.fes;
    d["kkt_residual"] = r.kkt_residual;
    d["feasible"] = r.feasible();
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "GP-PSO, SQP and the CEC2006 benchmark set";

    py::register_exception<BenchmarkNotFound>(m, "BenchmarkNotFound", PyExc_KeyError);

    m.def("benchmark_names", &benchmark_names);

    m.def(
        "evaluate",
        [](const std::string& name, const Vector& x, double epsilon) {
            const auto& e = lookup(name);
            EvaluationLedger ledger;
            const auto r = evaluate(e.problem, x, epsilon, ledger, Phase::pso);
            py::dict d;
            d["f"] = r.f;
            d["g"] = r.report.g_values;
            d["h"] = r.report.h_values;
            d["max_violation"] = r.report.max_violation;
            d["feasible"] = !r.non_finite && is_feasible(r.report, 0.0);
            return d;
        },
        py::arg("name"), py::arg("x"), py::arg("epsilon") = kEqualityTolerance);

    m.def(
        "f_star",
        [](const std::string& name) { return lookup(name).f_star; }, py::arg("name"));

    m.def(
        "run_pso",
        [](const std::string& name, std::size_t iterations, std::uint64_t seed) {
            const auto& e = lookup(name);
            SwarmConfig c;
            c.max_iterations = iterations;
            c.seed = seed;
            RunTrace t;
            {
                py::gil_scoped_release release;
                t = run_pso(e.problem, c);
            }
            py::dict d;
            d["x"] = t.gbest.x;
            d["f"] = t.gbest.f;
            d["max_violation"] = t.gbest.report.max_violation;
            d["iterations"] = t.iterations;
            d["fes"] = t.ledger.total_fes();
            std::vector<double> gbest_f;
            for (const auto& r : t.history) gbest_f.push_back(r.gbest_f);
            d["gbest_f"] = gbest_f;
            return d;
        },
        py::arg("name"), py::arg("iterations") = 1000, py::arg("seed") = 0);

    m.def(
        "sqp_solve",
        [](const std::string& name, const Vector& x0, std::size_t max_iterations) {
            const auto& e = lookup(name);
            SqpConfig c;
            c.max_iterations = max_iterations;
            c.target_f = e.f_star;
            EvaluationLedger ledger;
            SqpResult r;
            {
                py::gil_scoped_release release;
                r = sqp_solve(e.problem, x0, c, ledger);
            }
            return sqp_dict(r);
        },
        py::arg("name"), py::arg("x0"), py::arg("max_iterations") = 400);

    m.def(
        "solve_qp",
        [](const Eigen::MatrixXd& H, const Eigen::VectorXd& g, const Eigen::MatrixXd& A_eq,
           const Eigen::VectorXd& b_eq, const Eigen::MatrixXd& A_in, const Eigen::VectorXd& b_in) {
            QpSubproblem qp{H, g, A_eq, b_eq, A_in, b_in};
            const auto n = H.rows();
            if (qp.A_eq.size() == 0) qp.A_eq.resize(0, n);
            if (qp.A_in.size() == 0) qp.A_in.resize(0, n);
            const QpResult r = solve_qp(qp);
            py::dict d;
            d["d"] = r.d;
            d["lambda_eq"] = r.lambda_eq;
            d["lambda_in"] = r.lambda_in;
            d["status"] = std::string(to_string(r.status));
            d["iterations"] = r.iterations;
            return d;
        },
        py::arg("H"), py::arg("g"), py::arg("A_eq") = Eigen::MatrixXd(), py::arg("b_eq") = Eigen::VectorXd(),
        py::arg("A_in") = Eigen::MatrixXd(), py::arg("b_in") = Eigen::VectorXd());

    m.def(
        "run_hybrid",
        [](const std::string& name, const std::string& strategy, std::size_t iterations, std::uint64_t seed) {
            const auto& e = lookup(name);
            SwarmConfig c;
            c.max_iterations = iterations;
            const TriggerStrategy s = parse_strategy(strategy);
            HybridResult r;
            {
                py::gil_scoped_release release;
                r = run_hybrid(e.problem, c, SqpConfig{}, s, seed);
            }
            py::dict d;
            d["x"] = r.best.x;
            d["f"] = r.best.f;
            d["max_violation"] = r.best.report.max_violation;
            d["feasible"] = r.feasible();
            d["success"] = r.succeeded(e.f_star);
            d["pso_f"] = r.pso_final.f;
            d["pso_max_violation"] = r.pso_final.report.max_violation;
            d["from_sqp"] = r.best_from_sqp;
            d["sqp"] = r.sqp_final ? py::object(sqp_dict(*r.sqp_final)) : py::object(py::none());
            d["fes"] = r.ledger.total_fes();
            d["sqp_fes"] = r.ledger.sqp_fes();
            d["fes_to_accuracy"] = r.fes_to_accuracy;
            d["first_success_fe"] = r.first_success_fe;
            return d;
        },
        py::arg("name"), py::arg("strategy") = "final", py::arg("iterations") = 1000, py::arg("seed") = 0);

    m.def(
        "run_experiment",
        [](const std::string& config_json, const std::string& format) {
            const ExperimentConfig c = parse_config(config_json);
            const OutputFormat f = parse_format(format);
            py::gil_scoped_release release;
            return format_report(run_experiment(c), f);
        },
        py::arg("config_json"), py::arg("format") = "json");

    m.def(
        "export_metadata",
        [](const std::string& format) {
            if (format == "json") return export_metadata(MetadataFormat::json);
            if (format == "csv") return export_metadata(MetadataFormat::csv);
            throw std::invalid_argument("format must be json or csv");
        },
        py::arg("format") = "json");
}
