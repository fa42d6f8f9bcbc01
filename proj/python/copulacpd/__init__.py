"""Conditional-copula causal change point detection."""

from ._core import (
    CopulaError,
    estimate_q,
    ewma_normalize,
    list_scenarios,
    mann_whitney_auc,
    permutation_test,
    scan,
    simulate,
    to_returns,
)

__all__ = [
    "CopulaError",
    "estimate_q",
    "ewma_normalize",
    "list_scenarios",
    "mann_whitney_auc",
    "permutation_test",
    "scan",
    "simulate",
    "to_returns",
]
