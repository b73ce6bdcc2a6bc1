# evit/Simulation/structures.py

"""
Lumped-mass chain assembly and modal analysis.

A chain of `n_dof` masses is connected by springs in series. Spring 0 ties
mass 0 to ground; spring i (1 <= i < n_dof) ties mass i-1 to mass i; a
fixed-fixed chain has one extra spring tying the last mass to ground.
"""

from dataclasses import dataclass
from typing import FrozenSet, Tuple

import numpy as np
import scipy.linalg

from evit.errors import NumericalError
from evit.Simulation.schemas import UNDAMAGED, Boundary, DamageState, StructureSpec
from evit.Simulation.validator import StructureValidator

SYMMETRY_RTOL = 1e-12

Edge = Tuple[int, int]


@dataclass(frozen=True, eq=False)
class StructuralModel:
    mass_matrix: np.ndarray
    stiffness_matrix: np.ndarray

    @property
    def n_dof(self) -> int:
        return self.mass_matrix.shape[0]


@dataclass(frozen=True, eq=False)
class ModalData:
    """
    Attributes
    ----------
    natural_frequencies : np.ndarray
        Ascending natural frequencies in rad/s.
    modeshapes : np.ndarray
        n_dof x n_modes, columns mass-normalised (phi.T @ M @ phi = 1) with
        the largest-magnitude entry of each column positive.
    """

    natural_frequencies: np.ndarray
    modeshapes: np.ndarray


# ---------------------------------------------------------------------------
# Assembly
# ---------------------------------------------------------------------------

def spring_values(spec: StructureSpec, damage: DamageState = UNDAMAGED) -> np.ndarray:
    """Effective spring stiffnesses after damage and temperature scaling."""
    k = np.asarray(spec.stiffnesses, dtype=float) * spec.temperature_factor
    if damage.spring_index is not None:
        k[damage.spring_index] *= 1.0 - damage.reduction
    return k


def build_structure(spec: StructureSpec, damage: DamageState = UNDAMAGED) -> StructuralModel:
    """
    Assemble mass and stiffness matrices for a (possibly damaged) chain.

    Raises
    ------
    ValidationError
        If the structure is inconsistent or the damage state is out of range.
    """
    StructureValidator.validate(spec)
    StructureValidator.validate_damage(spec, damage)

    n = spec.n_dof
    k = spring_values(spec, damage)

    M = np.diag(np.asarray(spec.masses, dtype=float))
    K = np.zeros((n, n))

    # Ground spring on the first mass
    K[0, 0] += k[0]

    # Inter-mass springs
    for i in range(1, n):
        K[i - 1, i - 1] += k[i]
        K[i, i] += k[i]
        K[i - 1, i] -= k[i]
        K[i, i - 1] -= k[i]

    if spec.boundary is Boundary.FIXED_FIXED:
        K[n - 1, n - 1] += k[n]

    return StructuralModel(mass_matrix=M, stiffness_matrix=K)


def chain_edges(n_dof: int, boundary: Boundary) -> FrozenSet[Edge]:
    """
    Undirected adjacency of a chain, ground nodes included.

    Node 0 is the grounded end, masses are nodes 1..n_dof and a fixed-fixed
    chain adds a second ground node n_dof + 1.
    """
    edges = {(i, i + 1) for i in range(n_dof)}
    if boundary is Boundary.FIXED_FIXED:
        edges.add((n_dof, n_dof + 1))
    return frozenset(edges)


# ---------------------------------------------------------------------------
# Modal analysis
# ---------------------------------------------------------------------------

def _check_symmetric(A: np.ndarray, name: str) -> None:
    scale = max(np.max(np.abs(A)), np.finfo(float).tiny)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise NumericalError(f"{name} must be square, got shape {A.shape}")
    if np.max(np.abs(A - A.T)) > SYMMETRY_RTOL * scale:
        raise NumericalError(f"{name} is not symmetric")


def fix_signs(vectors: np.ndarray) -> np.ndarray:
    """Flip each column so that its largest-magnitude entry is positive."""
    idx = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[idx, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs


def modal_analysis(model: StructuralModel) -> ModalData:
    """
    Solve K phi = w^2 M phi for every mode of the chain.

    Returns
    -------
    ModalData
        All n_dof modes, ascending by frequency.

    Raises
    ------
    NumericalError
        If a matrix is not symmetric or the mass matrix is not positive definite.
    """
    M = np.asarray(model.mass_matrix, dtype=float)
    K = np.asarray(model.stiffness_matrix, dtype=float)
    _check_symmetric(M, "mass matrix")
    _check_symmetric(K, "stiffness matrix")
    if M.shape != K.shape:
        raise NumericalError(f"Matrix shapes differ: M {M.shape} vs K {K.shape}")

    try:
        eigvals, eigvecs = scipy.linalg.eigh(K, M)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"Mass matrix is not positive definite: {exc}") from exc

    # Round-off can leave tiny negative eigenvalues for rigid-body modes
    omega = np.sqrt(np.clip(eigvals, 0.0, None))

    return ModalData(natural_frequencies=omega, modeshapes=fix_signs(eigvecs))
