# evit/Simulation/population.py

"""
Synthetic population generation.

Each structure gets its own random stream derived from the master seed and
the structure id, so per-structure data does not depend on the order of the
structures in the config or on how the work is scheduled.
"""

import logging
import zlib
from typing import List

import numpy as np
from joblib import Parallel, delayed

from evit.errors import NumericalError
from evit.Feature_Layer.domain import Domain, Representation
from evit.Simulation.schemas import UNDAMAGED, Boundary, PopulationConfig, StructureSpec
from evit.Simulation.structures import build_structure, chain_edges, modal_analysis
from evit.Simulation.validator import StructureValidator

LOGGER = logging.getLogger(__name__)

MAX_RESAMPLE_ATTEMPTS = 100


def derive_seed(master_seed: int, key: str) -> np.random.SeedSequence:
    """Stable child seed for `key` (crc32 keeps it independent of PYTHONHASHSEED)."""
    return np.random.SeedSequence(
        [int(master_seed) & 0xFFFFFFFFFFFFFFFF, zlib.crc32(key.encode("utf-8"))]
    )


def synthesize_domain(
    spec: StructureSpec,
    n_per_class: int,
    noise_std: float,
    seed: int | np.random.SeedSequence,
) -> Domain:
    """
    Emit noisy natural-frequency features for every damage state of a structure.

    For each damage state the damaged chain's natural frequencies are computed
    and `n_per_class` samples are drawn as frequencies plus zero-mean Gaussian
    noise with std `noise_std * frequency`. The representation is the
    undamaged modeshapes plus the chain graph.
    """
    StructureValidator.validate(spec)
    rng = np.random.default_rng(seed)

    blocks, labels = [], []
    for state in spec.damage_states:
        omega = modal_analysis(build_structure(spec, state)).natural_frequencies
        noise = rng.normal(0.0, 1.0, size=(n_per_class, omega.shape[0])) * (noise_std * omega)
        blocks.append(omega + noise)
        labels.append(np.full(n_per_class, state.class_label, dtype=np.int64))

    undamaged = modal_analysis(build_structure(spec, UNDAMAGED))

    return Domain(
        id=spec.id,
        features=np.vstack(blocks),
        labels=np.concatenate(labels),
        representation=Representation(
            modeshapes=undamaged.modeshapes,
            graph_edges=chain_edges(spec.n_dof, spec.boundary),
        ),
        n_classes=spec.n_classes,
        metadata={
            "boundary": spec.boundary.value,
            "temperature_factor": spec.temperature_factor,
            "stiffnesses": list(spec.stiffnesses),
            "masses": list(spec.masses),
        },
    )


def _perturb(nominal: np.ndarray, rel_std: float, rng: np.random.Generator, what: str, sid: str):
    """Normal perturbation around nominal values, resampled until positive."""
    if rel_std == 0.0:
        return nominal.copy()
    for _ in range(MAX_RESAMPLE_ATTEMPTS):
        draw = nominal * (1.0 + rel_std * rng.standard_normal(nominal.shape[0]))
        if np.all(draw > 0):
            return draw
    raise NumericalError(
        f"Structure {sid}: could not draw positive {what} in "
        f"{MAX_RESAMPLE_ATTEMPTS} attempts (relative std {rel_std})"
    )


def sample_structure(config: PopulationConfig, index: int, seed: int) -> tuple[StructureSpec, np.random.SeedSequence]:
    """Draw structure `index` of the population and the seed for its features."""
    sid = config.structure_ids[index]
    param_seed, feature_seed = derive_seed(seed, sid).spawn(2)
    rng = np.random.default_rng(param_seed)

    boundary = config.boundary_for(index)
    n_springs = config.n_dof + 1 if boundary is Boundary.FIXED_FIXED else config.n_dof

    stiffnesses = _perturb(
        np.asarray(config.nominal_stiffnesses[:n_springs], dtype=float),
        config.stiffness_std, rng, "stiffnesses", sid,
    )
    masses = _perturb(
        np.asarray(config.nominal_masses, dtype=float), config.mass_std, rng, "masses", sid
    )

    spec = StructureSpec(
        id=sid,
        n_dof=config.n_dof,
        masses=tuple(masses.tolist()),
        stiffnesses=tuple(stiffnesses.tolist()),
        boundary=boundary,
        damage_states=config.damage_states,
        temperature_factor=config.temperature_for(index),
    )
    return spec, feature_seed


def _generate_one(config: PopulationConfig, index: int, seed: int) -> Domain:
    spec, feature_seed = sample_structure(config, index, seed)
    return synthesize_domain(spec, config.n_per_class, config.noise_std, feature_seed)


def generate_population(config: PopulationConfig, seed: int, jobs: int = 1) -> List[Domain]:
    """
    Draw every structure of the population and synthesise its domain.

    Returns
    -------
    list of Domain
        One labelled domain per structure, in config order.
    """
    LOGGER.info(
        "Generating population",
        extra={"stage": "generate", "n_structures": config.n_structures, "seed": seed},
    )
    domains = Parallel(n_jobs=jobs)(
        delayed(_generate_one)(config, i, seed) for i in range(config.n_structures)
    )
    return list(domains)
