"""Conic relaxations and cutting planes for box-constrained quadratic programs."""

from ._core import (
    BoxQpInstance,
    DriverConfig,
    GlobalSolution,
    RoundLog,
    SolveReport,
    builtin_bl,
    catalog,
    generate,
    generate_family,
    parse_instance,
    run,
    serialize_instance,
    solve_exact_qpb3,
    solve_global,
    violation_table,
)

__all__ = [
    "BoxQpInstance",
    "DriverConfig",
    "GlobalSolution",
    "RoundLog",
    "SolveReport",
    "builtin_bl",
    "catalog",
    "generate",
    "generate_family",
    "parse_instance",
    "run",
    "serialize_instance",
    "solve_exact_qpb3",
    "solve_global",
    "violation_table",
]
