"""
Transfer strategies T(D_s_tau, A) and their enumeration.

A strategy pairs a subset of source domains with a transfer algorithm. The
null strategy T_0 pairs the empty subset with the identity (NULL)
algorithm and means "do not transfer".
"""

from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Iterator, List, Sequence, Tuple

import numpy as np

from evit.errors import ConfigError, ValidationError, require_multiple_sources
from evit.ML_Engine.Models.transfer import ALGORITHM_ORDER, AlgorithmId

DEFAULT_CAP = 100


class EnumerationMode(str, Enum):
    FULL = "full"
    SINGLE_SOURCE = "single_source"
    RANDOM_CAP = "random_cap"


@dataclass(frozen=True)
class EnumerationConstraints:
    mode: EnumerationMode = EnumerationMode.FULL
    cap: int = DEFAULT_CAP
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "mode", EnumerationMode(self.mode))
        if self.cap < 1:
            raise ConfigError(f"Enumeration cap must be positive, got {self.cap}")

    def to_dict(self) -> dict:
        return {"mode": self.mode.value, "cap": self.cap, "seed": self.seed}


@dataclass(frozen=True)
class TransferStrategy:
    source_ids: Tuple[str, ...]
    algorithm: AlgorithmId

    def __post_init__(self):
        object.__setattr__(self, "source_ids", tuple(sorted(self.source_ids)))
        object.__setattr__(self, "algorithm", AlgorithmId(self.algorithm))
        if len(set(self.source_ids)) != len(self.source_ids):
            raise ValidationError(f"Duplicate source ids in strategy: {self.source_ids}")
        if (not self.source_ids) != (self.algorithm is AlgorithmId.NULL):
            raise ValidationError(
                "The empty source set goes with the NULL algorithm and only with it "
                f"(got {self.source_ids or '{}'} with {self.algorithm.value})"
            )

    @property
    def is_null(self) -> bool:
        return not self.source_ids

    @property
    def n_sources(self) -> int:
        return len(self.source_ids)

    @property
    def label(self) -> str:
        if self.is_null:
            return "T0"
        return f"{'+'.join(self.source_ids)}|{self.algorithm.value}"

    @property
    def tie_break_key(self) -> tuple:
        """Fewer sources first, then NULL-first algorithm order, then ids."""
        return (self.n_sources, ALGORITHM_ORDER[self.algorithm], self.source_ids)

    def to_dict(self) -> dict:
        return {"source_ids": list(self.source_ids), "algorithm": self.algorithm.value}

    @classmethod
    def from_dict(cls, raw: dict) -> "TransferStrategy":
        return cls(source_ids=tuple(raw["source_ids"]), algorithm=AlgorithmId(raw["algorithm"]))


NULL_STRATEGY = TransferStrategy(source_ids=(), algorithm=AlgorithmId.NULL)


def non_null(algorithms: Sequence[AlgorithmId | str]) -> List[AlgorithmId]:
    """Distinct non-NULL algorithms in NULL-first registry order."""
    algs = {AlgorithmId(a) for a in algorithms}
    algs.discard(AlgorithmId.NULL)
    return sorted(algs, key=ALGORITHM_ORDER.__getitem__)


def nonempty_subsets(ids: Sequence[str]) -> Iterator[Tuple[str, ...]]:
    for size in range(1, len(ids) + 1):
        yield from combinations(ids, size)


def sample_without_replacement(items: list, cap: int, seed: int) -> list:
    """Uniform sample of min(cap, len(items)) items, kept in input order."""
    if cap >= len(items):
        return list(items)
    rng = np.random.default_rng(int(seed) & 0xFFFFFFFFFFFFFFFF)
    keep = np.sort(rng.choice(len(items), size=cap, replace=False))
    return [items[i] for i in keep]


def enumerate_strategies(
    source_ids: Sequence[str],
    algorithms: Sequence[AlgorithmId | str],
    constraints: EnumerationConstraints,
) -> List[TransferStrategy]:
    """
    Candidate strategies, T_0 first.

    - full: every non-empty source subset x every non-null algorithm
    - single_source: singleton subsets only
    - random_cap: `cap` strategies drawn uniformly without replacement from
      the full list, plus T_0
    """
    ids = sorted(source_ids)
    require_multiple_sources(len(ids))
    algs = non_null(algorithms)

    if constraints.mode is EnumerationMode.SINGLE_SOURCE:
        subsets = [(i,) for i in ids]
    else:
        subsets = list(nonempty_subsets(ids))

    candidates = [TransferStrategy(s, a) for s in subsets for a in algs]
    if constraints.mode is EnumerationMode.RANDOM_CAP:
        candidates = sample_without_replacement(candidates, constraints.cap, constraints.seed)

    return [NULL_STRATEGY, *candidates]
