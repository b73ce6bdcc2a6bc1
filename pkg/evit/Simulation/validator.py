# evit/Simulation/validator.py

from typing import Sequence

import numpy as np

from evit.errors import ConfigError, EvitError, ValidationError, invalid_config
from evit.Simulation.schemas import (
    Boundary,
    DamageState,
    PopulationConfig,
    StructureSpec,
)


def _as_tuple(value, length: int, name: str) -> tuple:
    """Expand a scalar to `length` entries, or check a list has that length."""
    if np.isscalar(value):
        return tuple(float(value) for _ in range(length))
    values = tuple(float(v) for v in value)
    if len(values) != length:
        raise ConfigError(f"{name} must have {length} entries, got {len(values)}")
    return values


def _parse_boundary(value) -> Boundary:
    try:
        return Boundary(value)
    except ValueError:
        allowed = ", ".join(b.value for b in Boundary)
        raise ConfigError(f"Unknown boundary '{value}' (allowed: {allowed})") from None


class StructureValidator:

    @staticmethod
    def validate_damage_states(states: Sequence[DamageState]) -> None:
        if not states:
            raise ValidationError("At least one damage state is required")

        labels = sorted(d.class_label for d in states)
        if labels != list(range(len(states))):
            raise ValidationError(
                f"Class labels must be contiguous 0..C-1, got {labels}"
            )

        for d in states:
            if not 0.0 <= d.reduction < 1.0:
                raise ValidationError(
                    f"Damage reduction must lie in [0, 1), got {d.reduction} "
                    f"for class {d.class_label}"
                )
            undamaged = d.reduction == 0.0 and d.spring_index is None
            if (d.class_label == 0) != undamaged:
                raise ValidationError(
                    "Class 0 must be the only undamaged state "
                    f"(class {d.class_label}: spring={d.spring_index}, "
                    f"reduction={d.reduction})"
                )

    @staticmethod
    def validate_damage(spec: StructureSpec, damage: DamageState) -> None:
        if not 0.0 <= damage.reduction < 1.0:
            raise ValidationError(f"Damage reduction must lie in [0, 1), got {damage.reduction}")
        if damage.spring_index is not None and not 0 <= damage.spring_index < spec.n_springs:
            raise ValidationError(
                f"Spring index {damage.spring_index} out of range for "
                f"{spec.n_springs} springs on structure {spec.id}"
            )

    @staticmethod
    def validate(spec: StructureSpec) -> StructureSpec:
        if spec.n_dof < 1:
            raise ValidationError(f"n_dof must be positive, got {spec.n_dof}")

        if len(spec.masses) != spec.n_dof:
            raise ValidationError(
                f"Structure {spec.id}: expected {spec.n_dof} masses, got {len(spec.masses)}"
            )

        if len(spec.stiffnesses) != spec.n_springs:
            raise ValidationError(
                f"Structure {spec.id}: a {spec.boundary.value} chain needs "
                f"{spec.n_springs} stiffnesses, got {len(spec.stiffnesses)}"
            )

        if min(spec.masses) <= 0 or min(spec.stiffnesses) <= 0:
            raise ValidationError(f"Structure {spec.id}: masses and stiffnesses must be positive")

        if spec.temperature_factor <= 0:
            raise ValidationError(
                f"Structure {spec.id}: temperature_factor must be positive, "
                f"got {spec.temperature_factor}"
            )

        StructureValidator.validate_damage_states(spec.damage_states)
        for d in spec.damage_states:
            StructureValidator.validate_damage(spec, d)

        return spec


class PopulationConfigValidator:

    REQUIRED_FIELDS = [
        "n_dof",
        "nominal_masses",
        "nominal_stiffnesses",
        "boundaries",
        "damage_states",
        "n_per_class",
        "noise_std",
    ]

    @staticmethod
    def validate(raw: dict) -> PopulationConfig:
        for field in PopulationConfigValidator.REQUIRED_FIELDS:
            if field not in raw:
                raise ConfigError(f"Missing required population field: {field}")

        try:
            return PopulationConfigValidator._build(raw)
        except EvitError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise invalid_config("Invalid population config", exc) from exc

    @staticmethod
    def _build(raw: dict) -> PopulationConfig:
        if "structure_ids" in raw:
            ids = tuple(str(i) for i in raw["structure_ids"])
        elif "n_structures" in raw:
            ids = tuple(f"S{i:02d}" for i in range(int(raw["n_structures"])))
        else:
            raise ConfigError("Population config needs n_structures or structure_ids")

        if len(ids) < 1:
            raise ConfigError("n_structures must be at least 1")
        if len(set(ids)) != len(ids):
            raise ConfigError("Structure ids must be unique")

        n_dof = int(raw["n_dof"])
        if n_dof < 1:
            raise ConfigError(f"n_dof must be positive, got {n_dof}")

        boundaries = tuple(_parse_boundary(b) for b in raw["boundaries"])
        if not boundaries:
            raise ConfigError("boundaries must list at least one boundary condition")

        damage_states = tuple(
            DamageState(
                class_label=int(d["class_label"]),
                spring_index=None if d.get("spring_index") is None else int(d["spring_index"]),
                reduction=float(d.get("reduction", 0.0)),
            )
            for d in raw["damage_states"]
        )
        try:
            StructureValidator.validate_damage_states(damage_states)
        except ValidationError as exc:
            raise ConfigError(str(exc)) from None

        # every damage state is applied to every structure
        used = {boundaries[i % len(boundaries)] for i in range(len(ids))}
        n_springs = min(b.n_springs(n_dof) for b in used)
        for d in damage_states:
            if d.spring_index is not None and not 0 <= d.spring_index < n_springs:
                raise ConfigError(
                    f"Damage spring_index {d.spring_index} must be below {n_springs}, "
                    f"the spring count of a {n_dof}-DOF "
                    f"{'/'.join(sorted(b.value for b in used))} chain"
                )

        n_per_class = int(raw["n_per_class"])
        noise_std = float(raw["noise_std"])
        stiffness_std = float(raw.get("stiffness_std", 0.0))
        mass_std = float(raw.get("mass_std", 0.0))
        if n_per_class < 1:
            raise ConfigError(f"n_per_class must be positive, got {n_per_class}")
        if min(noise_std, stiffness_std, mass_std) < 0:
            raise ConfigError("noise_std, stiffness_std and mass_std must be non-negative")

        temperature_factors = tuple(float(t) for t in raw.get("temperature_factors", [1.0]))
        if not temperature_factors or min(temperature_factors) <= 0:
            raise ConfigError("temperature_factors must be a non-empty list of positive values")

        target_id = raw.get("target_id")
        if target_id is not None and str(target_id) not in ids:
            raise ConfigError(f"target_id '{target_id}' is not one of the structure ids")

        masses = _as_tuple(raw["nominal_masses"], n_dof, "nominal_masses")
        stiffnesses = _as_tuple(raw["nominal_stiffnesses"], n_dof + 1, "nominal_stiffnesses")
        if min(masses) <= 0 or min(stiffnesses) <= 0:
            raise ConfigError("Nominal masses and stiffnesses must be positive")

        return PopulationConfig(
            structure_ids=ids,
            n_dof=n_dof,
            nominal_masses=masses,
            nominal_stiffnesses=stiffnesses,
            boundaries=boundaries,
            damage_states=damage_states,
            n_per_class=n_per_class,
            noise_std=noise_std,
            stiffness_std=stiffness_std,
            mass_std=mass_std,
            temperature_factors=temperature_factors,
            target_id=None if target_id is None else str(target_id),
        )
