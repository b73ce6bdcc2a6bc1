# Feature_Layer/__init__.py

"""
Feature Layer: domains, structure representations and their persistence.

This layer is shared by:
- the simulator, which manufactures labelled domains
- the ML engine, which transfers between domains and scores predictions
- the decision engine, which reasons over source subsets of a population
"""

from .domain import (
    Domain,
    Population,
    Representation,
    hide_labels,
    merge_sources,
    restore_labels,
)

__all__ = [
    "Domain",
    "Population",
    "Representation",
    "hide_labels",
    "merge_sources",
    "restore_labels",
]
