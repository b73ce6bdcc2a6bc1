"""
Structural similarity between a target structure and a set of sources.

Two measures are available:
- MAC: modal assurance criterion between undamaged modeshapes, averaged
  over the first `n_modes` index-paired modes
- Jaccard: intersection-over-union of the chain adjacency edge sets

A target is compared with every source in the set and the pairwise scores
are summarised as (mean, min, max).
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from evit.errors import ValidationError
from evit.Feature_Layer.domain import Representation

DEFAULT_MAX_MODES = 5


class Measure(str, Enum):
    MAC = "MAC"
    JACCARD = "Jaccard"


@dataclass(frozen=True)
class SimilarityVector:
    measure_id: Measure
    mean: float
    min: float
    max: float

    def __post_init__(self):
        if not 0.0 <= self.min <= self.mean <= self.max <= 1.0:
            raise ValidationError(
                f"Similarity summary out of order: min={self.min}, "
                f"mean={self.mean}, max={self.max}"
            )

    def inputs(self, names: Sequence[str] = ("mean",)) -> list[float]:
        """Regressor inputs, selected by summary name."""
        return [getattr(self, n) for n in names]


# ---------------------------------------------------------------------------
# Pairwise measures
# ---------------------------------------------------------------------------

def mac(phi_a, phi_b) -> float:
    """
    Modal assurance criterion |a.b|^2 / ((a.a)(b.b)).

    Raises
    ------
    ValidationError
        On length mismatch or a zero vector.
    """
    a = np.asarray(phi_a, dtype=float).ravel()
    b = np.asarray(phi_b, dtype=float).ravel()
    if a.shape != b.shape:
        raise ValidationError(f"MAC needs equal lengths, got {a.shape[0]} and {b.shape[0]}")

    aa = float(np.dot(a, a))
    bb = float(np.dot(b, b))
    if aa == 0.0 or bb == 0.0:
        raise ValidationError("MAC is undefined for a zero vector")

    ab = float(np.dot(a, b))
    return min(1.0, (ab * ab) / (aa * bb))


def mac_summary(modes_a, modes_b, n_modes: int) -> float:
    """Mean MAC over index-paired columns 0..n_modes-1."""
    A = np.asarray(modes_a, dtype=float)
    B = np.asarray(modes_b, dtype=float)
    if n_modes < 1:
        raise ValidationError(f"n_modes must be positive, got {n_modes}")
    if A.shape[1] < n_modes or B.shape[1] < n_modes:
        raise ValidationError(
            f"n_modes={n_modes} exceeds available modes ({A.shape[1]}, {B.shape[1]})"
        )
    return math.fsum(mac(A[:, i], B[:, i]) for i in range(n_modes)) / n_modes


def jaccard(edges_a, edges_b) -> float:
    """|A & B| / |A | B|; two empty graphs are identical (1.0)."""
    A, B = set(edges_a), set(edges_b)
    union = A | B
    if not union:
        return 1.0
    return len(A & B) / len(union)


# ---------------------------------------------------------------------------
# Target vs source-set summary
# ---------------------------------------------------------------------------

def default_n_modes(*representations: Representation) -> int:
    n_dof = min(r.modeshapes.shape[0] for r in representations)
    return min(DEFAULT_MAX_MODES, n_dof)


def pairwise_score(
    target: Representation,
    source: Representation,
    measure: Measure,
    n_modes: int,
) -> float:
    if measure is Measure.MAC:
        return mac_summary(target.modeshapes, source.modeshapes, n_modes)
    if measure is Measure.JACCARD:
        return jaccard(target.graph_edges, source.graph_edges)
    raise ValidationError(f"Unknown similarity measure: {measure}")


def similarity_features(
    target: Representation,
    sources: Sequence[Representation],
    measure: Measure | str,
    n_modes: Optional[int] = None,
) -> SimilarityVector:
    """
    Summarise target-vs-source similarity over a set of sources.

    The summary is computed from the sorted scores, so it does not depend on
    the order of `sources`.
    """
    measure = Measure(measure)
    if not sources:
        raise ValidationError("similarity_features needs at least one source representation")

    # A merged source domain contributes each of its constituent structures
    flat = [m for s in sources for m in s.constituents]
    if n_modes is None:
        n_modes = default_n_modes(target, *flat)

    scores = sorted(pairwise_score(target, s, measure, n_modes) for s in flat)
    mean = math.fsum(scores) / len(scores)

    # Keep mean inside [min, max] despite rounding
    mean = min(max(mean, scores[0]), scores[-1])
    return SimilarityVector(measure_id=measure, mean=mean, min=scores[0], max=scores[-1])
