import json

from ._qsep import (
    bracket_table,
    check_ybe,
    classical_reduce_batch,
    dimension_report,
    genus,
    index_map,
    suite_names,
)
from ._qsep import run_suite as _run_suite


def run_suite(suite, N="2", n="1", center_fix=False, seed=1, samples=100):
    """Run a check suite and return the parsed report."""
    return json.loads(_run_suite(suite, str(N), str(n), center_fix, seed, samples))


__all__ = [
    "bracket_table",
    "check_ybe",
    "classical_reduce_batch",
    "dimension_report",
    "genus",
    "index_map",
    "run_suite",
    "suite_names",
]
