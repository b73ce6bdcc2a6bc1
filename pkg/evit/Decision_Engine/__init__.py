"""
Decision Engine: enumerates transfer strategies, values them by expected
value of information transfer (EVIT) plus transfer cost, and recommends
the best one.
"""

from .Engine import Recommendation, RankedStrategy, evit, recommend, render_table
from .strategies import (
    NULL_STRATEGY,
    EnumerationConstraints,
    EnumerationMode,
    TransferStrategy,
    enumerate_strategies,
)
from .utility import UtilitySpec, expected_utility, transfer_cost, utility_of_quality

__all__ = [
    "NULL_STRATEGY",
    "EnumerationConstraints",
    "EnumerationMode",
    "RankedStrategy",
    "Recommendation",
    "TransferStrategy",
    "UtilitySpec",
    "enumerate_strategies",
    "evit",
    "expected_utility",
    "recommend",
    "render_table",
    "transfer_cost",
    "utility_of_quality",
]
