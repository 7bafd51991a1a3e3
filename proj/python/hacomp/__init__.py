"""Human-AI complementarity metrics, statistics and simulation."""

from ._core import (
    Error,
    IoError,
    breakdown,
    mann_whitney_u,
    run_cli,
    sample_size,
    t_test,
    t_test_one_sample,
    worked_example,
)

__all__ = [
    "Error",
    "IoError",
    "breakdown",
    "mann_whitney_u",
    "run_cli",
    "sample_size",
    "t_test",
    "t_test_one_sample",
    "worked_example",
]
