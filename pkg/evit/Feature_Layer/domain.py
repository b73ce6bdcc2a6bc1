# Feature_Layer/domain.py

"""
Core data model shared by every layer: structure representations, domains
(feature matrix + optional labels) and populations of source/target domains.

All objects are immutable; numpy payloads are copied and frozen on
construction so they can be shared across workers.
"""

from dataclasses import dataclass, field, replace
from typing import FrozenSet, List, Optional, Sequence, Tuple

import numpy as np

from evit.errors import PreconditionError, ValidationError

Edge = Tuple[int, int]


def _frozen(array, dtype) -> np.ndarray:
    out = np.array(array, dtype=dtype, copy=True)
    out.setflags(write=False)
    return out


def normalise_edges(edges) -> FrozenSet[Edge]:
    """Canonical undirected edge set; rejects self-loops."""
    out = set()
    for a, b in edges:
        a, b = int(a), int(b)
        if a == b:
            raise ValidationError(f"Graph edge ({a}, {b}) is a self-loop")
        out.add((min(a, b), max(a, b)))
    return frozenset(out)


@dataclass(frozen=True, eq=False)
class Representation:
    """
    Structural representation used by the similarity measures.

    Attributes
    ----------
    modeshapes : np.ndarray
        n_dof x n_modes matrix (undamaged modeshapes).
    graph_edges : frozenset of (int, int)
        Undirected chain adjacency, each edge stored as (low, high).
    members : tuple of Representation
        Constituent representations of a merged (multi-source) domain;
        empty for a single structure.
    """

    modeshapes: np.ndarray
    graph_edges: FrozenSet[Edge]
    members: Tuple["Representation", ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "modeshapes", _frozen(self.modeshapes, float))
        object.__setattr__(self, "graph_edges", normalise_edges(self.graph_edges))

    @property
    def constituents(self) -> Tuple["Representation", ...]:
        return self.members if self.members else (self,)

    def to_dict(self) -> dict:
        return {
            "modeshapes": self.modeshapes.tolist(),
            "graph_edges": [list(e) for e in sorted(self.graph_edges)],
            "members": [m.to_dict() for m in self.members],
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "Representation":
        return cls(
            modeshapes=np.asarray(raw["modeshapes"], dtype=float),
            graph_edges=[tuple(e) for e in raw["graph_edges"]],
            members=tuple(cls.from_dict(m) for m in raw.get("members", [])),
        )


@dataclass(frozen=True, eq=False)
class Domain:
    id: str
    features: np.ndarray
    labels: Optional[np.ndarray]
    representation: Representation
    n_classes: int
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        features = _frozen(self.features, float)
        if features.ndim != 2:
            raise ValidationError(f"Domain {self.id}: features must be 2-D, got {features.ndim}-D")
        object.__setattr__(self, "features", features)

        if self.n_classes < 1:
            raise ValidationError(f"Domain {self.id}: n_classes must be positive")

        if self.labels is not None:
            labels = np.asarray(self.labels)
            if labels.ndim != 1 or labels.shape[0] != features.shape[0]:
                raise ValidationError(
                    f"Domain {self.id}: {labels.shape[0]} labels for "
                    f"{features.shape[0]} samples"
                )
            if labels.size and (labels.min() < 0 or labels.max() >= self.n_classes):
                raise ValidationError(
                    f"Domain {self.id}: labels must lie in 0..{self.n_classes - 1}"
                )
            object.__setattr__(self, "labels", _frozen(labels, np.int64))

    @property
    def n_samples(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    @property
    def is_labelled(self) -> bool:
        return self.labels is not None


@dataclass(frozen=True, eq=False)
class Population:
    """
    Candidate source domains plus the target domain of interest.

    The target's labels are never part of the target Domain; in oracle mode
    (simulation) they are carried separately in `hidden_target_labels`.
    """

    source_domains: Tuple[Domain, ...]
    target_domain: Domain
    hidden_target_labels: Optional[np.ndarray] = None

    def __post_init__(self):
        object.__setattr__(self, "source_domains", tuple(self.source_domains))
        for d in self.source_domains:
            if not d.is_labelled:
                raise ValidationError(f"Source domain {d.id} has no labels")
        if self.target_domain.is_labelled:
            raise ValidationError(
                f"Target domain {self.target_domain.id} must not carry labels; "
                "hide them first"
            )
        check_population_dimensions([*self.source_domains, self.target_domain])
        ids = [d.id for d in self.source_domains]
        if len(set(ids)) != len(ids) or self.target_domain.id in ids:
            raise ValidationError("Domain ids within a population must be unique")
        if self.hidden_target_labels is not None:
            object.__setattr__(
                self, "hidden_target_labels", _frozen(self.hidden_target_labels, np.int64)
            )

    @property
    def n_sources(self) -> int:
        return len(self.source_domains)

    @property
    def source_ids(self) -> List[str]:
        return [d.id for d in self.source_domains]

    def source(self, domain_id: str) -> Domain:
        for d in self.source_domains:
            if d.id == domain_id:
                return d
        raise ValidationError(f"Unknown source domain '{domain_id}'")

    def sources(self, domain_ids: Sequence[str]) -> List[Domain]:
        return [self.source(i) for i in domain_ids]

    def require_oracle(self) -> np.ndarray:
        if self.hidden_target_labels is None:
            raise PreconditionError(
                f"Target {self.target_domain.id} has no hidden labels; "
                "oracle evaluation needs simulated ground truth"
            )
        return self.hidden_target_labels


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------

def hide_labels(domain: Domain) -> Tuple[Domain, np.ndarray]:
    """
    Obscure a domain's class labels.

    Returns
    -------
    (Domain, np.ndarray)
        An unlabelled copy of the domain and the hidden labels, kept aside
        for oracle scoring.
    """
    if not domain.is_labelled:
        raise PreconditionError(f"Domain {domain.id} has no labels to hide")
    return replace(domain, labels=None), domain.labels


def restore_labels(domain: Domain, labels: np.ndarray) -> Domain:
    if domain.is_labelled:
        raise PreconditionError(f"Domain {domain.id} is already labelled")
    return replace(domain, labels=labels)


def merge_sources(domains: Sequence[Domain]) -> Domain:
    """
    Row-concatenate labelled source domains in input order.

    The merged representation keeps every constituent representation in
    `members` so set-level similarity can still be computed.
    """
    if not domains:
        raise ValidationError("merge_sources needs at least one domain")

    first = domains[0]
    for d in domains:
        if not d.is_labelled:
            raise PreconditionError(f"Source domain {d.id} has no labels")
        if d.n_features != first.n_features:
            raise ValidationError(
                f"Cannot merge domains with {first.n_features} and {d.n_features} features "
                f"({first.id}, {d.id})"
            )
        if d.n_classes != first.n_classes:
            raise ValidationError(
                f"Domains {first.id} and {d.id} use different class alphabets "
                f"({first.n_classes} vs {d.n_classes} classes)"
            )

    if len(domains) == 1:
        return first

    return Domain(
        id="+".join(d.id for d in domains),
        features=np.vstack([d.features for d in domains]),
        labels=np.concatenate([d.labels for d in domains]),
        representation=Representation(
            modeshapes=first.representation.modeshapes,
            graph_edges=first.representation.graph_edges,
            members=tuple(r for d in domains for r in d.representation.constituents),
        ),
        n_classes=first.n_classes,
    )


def check_population_dimensions(domains: Sequence[Domain]) -> None:
    """All domains of one population share the feature dimension d."""
    dims = {d.n_features for d in domains}
    if len(dims) > 1:
        raise ValidationError(f"Domains have mixed feature dimensions: {sorted(dims)}")
