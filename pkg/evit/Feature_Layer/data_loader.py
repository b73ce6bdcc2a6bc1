# Feature_Layer/data_loader.py

"""
File persistence for domains and run artifacts.

Domains are stored as a JSON document (metadata + representation) next to a
CSV table with one row per sample (columns f1..fd, plus `label` when the
domain is labelled). Numerics are written with 17 significant digits and read
back with pandas' round-trip parser so the round trip is bit-exact.
"""

import json
import os
from pathlib import Path
from typing import Any, Optional, Tuple

import numpy as np
import pandas as pd

from evit.errors import ConfigError, ValidationError
from evit.Feature_Layer.domain import Domain, Representation

FLOAT_FORMAT = "%.17g"
LABEL_COLUMN = "label"


# ---------------------------------------------------------------------------
# Generic helpers
# ---------------------------------------------------------------------------

def write_json(path: str | Path, payload: Any) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def read_json(path: str | Path, what: str = "file") -> Any:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"{what} not found at path: {path}")
    with open(path, "r", encoding="utf-8") as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{what} at {path} is not valid JSON: {exc}") from exc


def write_table(path: str | Path, df: pd.DataFrame) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    df.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    return path


def read_table(path: str | Path, what: str = "table", **kwargs) -> pd.DataFrame:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"{what} not found at path: {path}")
    return pd.read_csv(path, float_precision="round_trip", **kwargs)


def append_table(path: str | Path, df: pd.DataFrame) -> Path:
    """Append rows to a CSV, writing the header only when the file is new."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = not path.exists() or os.path.getsize(path) == 0
    df.to_csv(
        path, mode="a", header=header, index=False,
        float_format=FLOAT_FORMAT, lineterminator="\n",
    )
    return path


# ---------------------------------------------------------------------------
# Domains
# ---------------------------------------------------------------------------

def feature_columns(n_features: int) -> list[str]:
    return [f"f{i + 1}" for i in range(n_features)]


def domain_to_frame(domain: Domain) -> pd.DataFrame:
    df = pd.DataFrame(domain.features, columns=feature_columns(domain.n_features))
    if domain.is_labelled:
        df[LABEL_COLUMN] = domain.labels
    return df


def save_domain(domain: Domain, directory: str | Path) -> Tuple[Path, Path]:
    directory = Path(directory)
    meta = {
        "id": domain.id,
        "n_classes": domain.n_classes,
        "n_features": domain.n_features,
        "labelled": domain.is_labelled,
        "representation": domain.representation.to_dict(),
        "metadata": domain.metadata,
    }
    json_path = write_json(directory / f"{domain.id}.json", meta)
    csv_path = write_table(directory / f"{domain.id}.csv", domain_to_frame(domain))
    return json_path, csv_path


def labels_from_column(series: pd.Series, owner: str) -> Optional[np.ndarray]:
    if series.isna().all():
        return None
    if series.isna().any():
        raise ValidationError(
            f"Domain {owner} is partially labelled; partially-labelled targets "
            "are not supported"
        )
    return series.to_numpy(dtype=np.int64)


def load_domain(directory: str | Path, domain_id: str) -> Domain:
    directory = Path(directory)
    meta = read_json(directory / f"{domain_id}.json", what=f"Domain metadata for {domain_id}")
    df = read_table(directory / f"{domain_id}.csv", what=f"Domain table for {domain_id}")

    columns = feature_columns(int(meta["n_features"]))
    missing = [c for c in columns if c not in df.columns]
    if missing:
        raise ValidationError(f"Domain table for {domain_id} lacks columns {missing}")

    labels = labels_from_column(df[LABEL_COLUMN], domain_id) if LABEL_COLUMN in df.columns else None

    return Domain(
        id=str(meta["id"]),
        features=df[columns].to_numpy(dtype=float),
        labels=labels,
        representation=Representation.from_dict(meta["representation"]),
        n_classes=int(meta["n_classes"]),
        metadata=meta.get("metadata", {}),
    )


def save_labels(path: str | Path, labels: np.ndarray) -> Path:
    return write_table(path, pd.DataFrame({LABEL_COLUMN: np.asarray(labels, dtype=np.int64)}))


def load_labels(path: str | Path) -> np.ndarray:
    df = read_table(path, what="Hidden label table")
    if LABEL_COLUMN not in df.columns:
        raise ValidationError(f"Label table {path} has no '{LABEL_COLUMN}' column")
    return df[LABEL_COLUMN].to_numpy(dtype=np.int64)
