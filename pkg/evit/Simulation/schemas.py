# evit/Simulation/schemas.py

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple


class Boundary(str, Enum):
    FIXED_FREE = "fixed-free"
    FIXED_FIXED = "fixed-fixed"

    def n_springs(self, n_dof: int) -> int:
        # fixed-fixed chains carry an extra ground spring on the last mass
        return n_dof + 1 if self is Boundary.FIXED_FIXED else n_dof


@dataclass(frozen=True)
class DamageState:
    """
    One health state of a structure.

    Attributes
    ----------
    class_label : int
        0 is the undamaged state; damaged states are 1..C-1.
    spring_index : Optional[int]
        Spring whose stiffness is reduced (None when undamaged).
    reduction : float
        Fractional stiffness loss in [0, 1).
    """

    class_label: int
    spring_index: Optional[int] = None
    reduction: float = 0.0

    @property
    def is_damaged(self) -> bool:
        return self.class_label != 0


UNDAMAGED = DamageState(class_label=0)


@dataclass(frozen=True)
class StructureSpec:
    id: str
    n_dof: int
    masses: Tuple[float, ...]
    stiffnesses: Tuple[float, ...]
    boundary: Boundary = Boundary.FIXED_FREE
    damage_states: Tuple[DamageState, ...] = (UNDAMAGED,)
    temperature_factor: float = 1.0

    @property
    def n_springs(self) -> int:
        return self.boundary.n_springs(self.n_dof)

    @property
    def n_classes(self) -> int:
        return len(self.damage_states)


@dataclass(frozen=True)
class PopulationConfig:
    """
    Recipe for a population of nominally-identical chains.

    Stiffness (and optionally mass) values are drawn per structure from
    normal perturbations around the nominal values; the std fields are
    relative to the nominal value.
    """

    structure_ids: Tuple[str, ...]
    n_dof: int
    nominal_masses: Tuple[float, ...]
    nominal_stiffnesses: Tuple[float, ...]
    boundaries: Tuple[Boundary, ...]
    damage_states: Tuple[DamageState, ...]
    n_per_class: int
    noise_std: float
    stiffness_std: float = 0.0
    mass_std: float = 0.0
    temperature_factors: Tuple[float, ...] = (1.0,)
    target_id: Optional[str] = None

    @property
    def n_structures(self) -> int:
        return len(self.structure_ids)

    @property
    def resolved_target_id(self) -> str:
        return self.target_id if self.target_id is not None else self.structure_ids[-1]

    def boundary_for(self, index: int) -> Boundary:
        return self.boundaries[index % len(self.boundaries)]

    def temperature_for(self, index: int) -> float:
        return self.temperature_factors[index % len(self.temperature_factors)]

    def to_dict(self) -> dict:
        return {
            "structure_ids": list(self.structure_ids),
            "n_dof": self.n_dof,
            "nominal_masses": list(self.nominal_masses),
            "nominal_stiffnesses": list(self.nominal_stiffnesses),
            "boundaries": [b.value for b in self.boundaries],
            "damage_states": [
                {
                    "class_label": d.class_label,
                    "spring_index": d.spring_index,
                    "reduction": d.reduction,
                }
                for d in self.damage_states
            ],
            "n_per_class": self.n_per_class,
            "noise_std": self.noise_std,
            "stiffness_std": self.stiffness_std,
            "mass_std": self.mass_std,
            "temperature_factors": list(self.temperature_factors),
            "target_id": self.resolved_target_id,
        }
