"""Optimal systolic constants and extremal metrics on Klein bottles and Moebius bands."""

from ._core import (
    DomainError,
    Error,
    InvalidMetric,
    RegimeError,
    b0,
    certify,
    constant,
    extremal,
    gd,
    gd_inverse,
    probe_asymptotics,
    run_cli,
    solve,
    systoles,
    threshold,
    verify_inequality,
)

__all__ = [
    "DomainError",
    "Error",
    "InvalidMetric",
    "RegimeError",
    "b0",
    "certify",
    "constant",
    "extremal",
    "gd",
    "gd_inverse",
    "probe_asymptotics",
    "run_cli",
    "solve",
    "systoles",
    "threshold",
    "verify_inequality",
]
