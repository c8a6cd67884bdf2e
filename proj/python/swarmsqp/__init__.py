"""GP-PSO with SQP refinement on the CEC2006 constrained benchmarks."""

from ._core import (
    BenchmarkNotFound,
    benchmark_names,
    evaluate,
    export_metadata,
    f_star,
    run_experiment,
    run_hybrid,
    run_pso,
    solve_qp,
    sqp_solve,
)

__all__ = [
    "BenchmarkNotFound",
    "benchmark_names",
    "evaluate",
    "export_metadata",
    "f_star",
    "run_experiment",
    "run_hybrid",
    "run_pso",
    "solve_qp",
    "sqp_solve",
]
