"""
Pseudo-target training data for the quality meta-models.

Each labelled source domain takes a turn as pseudo-target D_p: its labels
are hidden, a subset of the *other* sources is transferred to it with each
candidate algorithm, and the realised quality is recorded against the
structural similarity between D_p and the subset.

An empty subset is part of the power-set enumeration; it has no similarity
and is scored with the population-majority baseline, i.e. the null
strategy evaluated leave-one-out.
"""

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from joblib import Parallel, delayed

from evit.Decision_Engine.strategies import (
    EnumerationConstraints,
    EnumerationMode,
    non_null,
    sample_without_replacement,
)
from evit.errors import PreconditionError, ValidationError, require_multiple_sources
from evit.Feature_Layer.data_loader import read_table, write_table
from evit.Feature_Layer.domain import Domain, hide_labels, merge_sources
from evit.ML_Engine.features.similarity import Measure, SimilarityVector, similarity_features
from evit.ML_Engine.Models.evaluate import QUALITY_COMPONENTS, QualityMeasures, evaluate_quality
from evit.ML_Engine.Models.quality_model import QualityDistribution, QualityDistributions
from evit.ML_Engine.Models.train import predict_majority, train_classify
from evit.ML_Engine.Models.transfer import ALGORITHM_ORDER, AlgorithmId, AlgorithmParams, apply_transfer

LOGGER = logging.getLogger(__name__)

Pair = Tuple[str, Tuple[str, ...]]

RECORD_COLUMNS = [
    "algorithm",
    "pseudo_target_id",
    "source_ids",
    "measure_id",
    "sim_mean",
    "sim_min",
    "sim_max",
    "accuracy",
    "type1",
    "type2",
    "degenerate_flags",
]
TEXT_COLUMNS = ["algorithm", "pseudo_target_id", "source_ids", "measure_id", "degenerate_flags"]


@dataclass(frozen=True)
class TrainingRecord:
    algorithm: AlgorithmId
    pseudo_target_id: str
    source_ids: Tuple[str, ...]
    similarity: Optional[SimilarityVector]
    quality: QualityMeasures
    measure_id: Measure = Measure.MAC

    def __post_init__(self):
        if self.pseudo_target_id in self.source_ids:
            raise ValidationError(
                f"Pseudo-target {self.pseudo_target_id} cannot also be a source"
            )

    @property
    def sort_key(self) -> tuple:
        return (self.pseudo_target_id, len(self.source_ids), self.source_ids,
                ALGORITHM_ORDER[self.algorithm])


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------

def enumerate_pseudo_target_pairs(
    source_ids: Sequence[str],
    constraints: EnumerationConstraints,
) -> List[Pair]:
    """
    (pseudo-target, source subset) pairs allowed by the constraints.

    full: every subset of the remaining sources, the empty one included,
    giving N_s * 2^(N_s - 1) pairs. single_source: N_s * (N_s - 1) pairs.
    random_cap: `cap` pairs drawn without replacement from the full list.
    """
    ids = list(source_ids)
    require_multiple_sources(len(ids))

    pairs: List[Pair] = []
    for p in ids:
        others = [i for i in ids if i != p]
        if constraints.mode is EnumerationMode.SINGLE_SOURCE:
            pairs.extend((p, (s,)) for s in others)
        else:
            for size in range(0, len(others) + 1):
                pairs.extend((p, subset) for subset in combinations(others, size))

    if constraints.mode is EnumerationMode.RANDOM_CAP:
        pairs = sample_without_replacement(pairs, constraints.cap, constraints.seed)
    return pairs


# ---------------------------------------------------------------------------
# Baseline
# ---------------------------------------------------------------------------

def baseline_quality(domains: Dict[str, Domain], pseudo_target_id: str) -> QualityMeasures:
    """Population-majority predictor scored on one pseudo-target."""
    target = domains[pseudo_target_id]
    population_labels = np.concatenate(
        [d.labels for i, d in domains.items() if i != pseudo_target_id]
    )
    y_pred = predict_majority(population_labels, target.n_samples)
    return evaluate_quality(y_pred, target.labels)


def _check_sources(sources: Sequence[Domain]) -> Dict[str, Domain]:
    require_multiple_sources(len(sources))
    by_id = {}
    for d in sources:
        if not d.is_labelled:
            raise PreconditionError(f"Source domain {d.id} has no labels")
        if d.id in by_id:
            raise ValidationError(f"Duplicate source id {d.id}")
        by_id[d.id] = d
    return by_id


def null_quality_distribution(
    sources: Sequence[Domain],
    n_mc: int,
    seed: int,
) -> QualityDistributions:
    """
    Empirical quality distribution of the null strategy.

    The majority-class baseline is scored leave-one-out on every source and
    the N_s results are resampled (jointly across components) to n_mc draws.
    """
    by_id = _check_sources(sources)
    scores = [baseline_quality(by_id, i) for i in by_id]

    rng = np.random.default_rng(int(seed) & 0xFFFFFFFFFFFFFFFF)
    idx = rng.integers(0, len(scores), size=n_mc)
    return {
        name: QualityDistribution.from_samples(
            name, np.asarray([s.component(name) for s in scores])[idx]
        )
        for name in QUALITY_COMPONENTS
    }


# ---------------------------------------------------------------------------
# Record generation
# ---------------------------------------------------------------------------

def _task_seed(seed: int, task_index: int) -> int:
    sequence = np.random.SeedSequence([int(seed) & 0xFFFFFFFFFFFFFFFF, task_index])
    return int(sequence.generate_state(1)[0])


def run_pseudo_transfer(
    domains: Dict[str, Domain],
    pseudo_target_id: str,
    subset: Tuple[str, ...],
    algorithm: AlgorithmId,
    measure: Measure,
    n_modes: Optional[int],
    params: AlgorithmParams,
    seed: int,
) -> TrainingRecord:
    if not subset:
        return TrainingRecord(
            algorithm=algorithm,
            pseudo_target_id=pseudo_target_id,
            source_ids=(),
            similarity=None,
            quality=baseline_quality(domains, pseudo_target_id),
            measure_id=measure,
        )

    target, hidden = hide_labels(domains[pseudo_target_id])
    chosen = [domains[s] for s in subset]

    Zs, ys, Zt = apply_transfer(algorithm, merge_sources(chosen), target.features, params, seed)
    y_pred = train_classify(Zs, ys, Zt, params)

    return TrainingRecord(
        algorithm=algorithm,
        pseudo_target_id=pseudo_target_id,
        source_ids=tuple(subset),
        similarity=similarity_features(
            target.representation, [d.representation for d in chosen], measure, n_modes
        ),
        quality=evaluate_quality(y_pred, hidden),
        measure_id=measure,
    )


def generate_training_records(
    sources: Sequence[Domain],
    algorithms: Sequence[AlgorithmId | str],
    constraints: EnumerationConstraints,
    measure: Measure | str,
    params: AlgorithmParams,
    seed: int,
    n_modes: Optional[int] = None,
    jobs: int = 1,
) -> List[TrainingRecord]:
    """
    One record per (pseudo-target pair, non-null algorithm).

    Tasks are numbered pair-major; task i runs with a seed derived from
    (seed, i) and results come back in task order whatever `jobs` is.

    Raises
    ------
    PreconditionError
        If fewer than two source domains are given.
    """
    by_id = _check_sources(sources)
    measure = Measure(measure)
    algs = non_null(algorithms)
    pairs = enumerate_pseudo_target_pairs(list(by_id), constraints)

    tasks = [(p, subset, a) for p, subset in pairs for a in algs]
    LOGGER.info(
        "Generating training records",
        extra={"stage": "simulate-records", "n_pairs": len(pairs), "n_tasks": len(tasks)},
    )

    records = Parallel(n_jobs=jobs)(
        delayed(run_pseudo_transfer)(
            by_id, p, subset, a, measure, n_modes, params, _task_seed(seed, i)
        )
        for i, (p, subset, a) in enumerate(tasks)
    )
    return list(records)


# ---------------------------------------------------------------------------
# Persistence
# ---------------------------------------------------------------------------

def records_to_frame(records: Sequence[TrainingRecord]) -> pd.DataFrame:
    rows = []
    for r in records:
        sim = r.similarity
        rows.append({
            "algorithm": r.algorithm.value,
            "pseudo_target_id": r.pseudo_target_id,
            "source_ids": "|".join(r.source_ids),
            "measure_id": r.measure_id.value,
            "sim_mean": np.nan if sim is None else sim.mean,
            "sim_min": np.nan if sim is None else sim.min,
            "sim_max": np.nan if sim is None else sim.max,
            "accuracy": r.quality.accuracy,
            "type1": r.quality.type1_rate,
            "type2": r.quality.type2_rate,
            "degenerate_flags": r.quality.degenerate_flags,
        })
    return pd.DataFrame(rows, columns=RECORD_COLUMNS)


def records_from_frame(df: pd.DataFrame) -> List[TrainingRecord]:
    missing = [c for c in RECORD_COLUMNS if c not in df.columns]
    if missing:
        raise ValidationError(f"Training-record table lacks columns {missing}")

    df = df.copy()
    df[TEXT_COLUMNS] = df[TEXT_COLUMNS].fillna("").astype(str)

    records = []
    for row in df.itertuples(index=False):
        measure = Measure(row.measure_id)
        flags = set(filter(None, row.degenerate_flags.split(";")))
        similarity = None
        if not pd.isna(row.sim_mean):
            similarity = SimilarityVector(
                measure_id=measure, mean=row.sim_mean, min=row.sim_min, max=row.sim_max
            )
        records.append(TrainingRecord(
            algorithm=AlgorithmId(row.algorithm),
            pseudo_target_id=row.pseudo_target_id,
            source_ids=tuple(filter(None, row.source_ids.split("|"))),
            similarity=similarity,
            quality=QualityMeasures(
                accuracy=float(row.accuracy),
                type1_rate=float(row.type1),
                type2_rate=float(row.type2),
                type1_degenerate="type1" in flags,
                type2_degenerate="type2" in flags,
            ),
            measure_id=measure,
        ))
    return records


def save_records(path, records: Sequence[TrainingRecord]):
    return write_table(path, records_to_frame(records))


def load_records(path) -> List[TrainingRecord]:
    df = read_table(path, what="Training-record table", dtype={c: str for c in TEXT_COLUMNS})
    return records_from_frame(df)
