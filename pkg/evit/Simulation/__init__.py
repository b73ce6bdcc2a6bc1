# evit/Simulation/__init__.py

"""
Simulation layer: populations of lumped-mass chains, their modal
properties, and labelled natural-frequency datasets per structure.
"""

from .population import generate_population, synthesize_domain
from .schemas import Boundary, DamageState, PopulationConfig, StructureSpec
from .structures import ModalData, StructuralModel, build_structure, modal_analysis

__all__ = [
    "Boundary",
    "DamageState",
    "ModalData",
    "PopulationConfig",
    "StructuralModel",
    "StructureSpec",
    "build_structure",
    "generate_population",
    "modal_analysis",
    "synthesize_domain",
]
