import numpy as np
import pandas as pd
import pytest

from conftest import make_domain
from evit.errors import ConfigError, ValidationError
from evit.Feature_Layer.data_loader import (
    append_table,
    load_domain,
    load_labels,
    read_json,
    read_table,
    save_domain,
    save_labels,
    write_json,
)
from evit.Feature_Layer.domain import hide_labels
from evit.ML_Engine.experiments.training_records import load_records, save_records


def test_domain_round_trip_is_bit_exact(tmp_path, small_domains):
    original = small_domains[2]
    save_domain(original, tmp_path)
    loaded = load_domain(tmp_path, original.id)

    np.testing.assert_array_equal(loaded.features, original.features)
    np.testing.assert_array_equal(loaded.labels, original.labels)
    np.testing.assert_array_equal(
        loaded.representation.modeshapes, original.representation.modeshapes
    )
    assert loaded.representation.graph_edges == original.representation.graph_edges
    assert loaded.metadata == original.metadata


def test_unlabelled_domain_round_trip(tmp_path, small_domains):
    hidden, labels = hide_labels(small_domains[0])
    save_domain(hidden, tmp_path)
    save_labels(tmp_path / "labels.csv", labels)

    assert load_domain(tmp_path, hidden.id).labels is None
    np.testing.assert_array_equal(load_labels(tmp_path / "labels.csv"), labels)


def test_partially_labelled_table_rejected(tmp_path):
    domain = make_domain("P", np.ones((3, 2)), np.array([0, 1, 2]))
    save_domain(domain, tmp_path)
    (tmp_path / "P.csv").write_text("f1,f2,label\n1,1,0\n1,1,\n1,1,2\n")
    with pytest.raises(ValidationError):
        load_domain(tmp_path, "P")


def test_missing_files_are_config_errors(tmp_path):
    with pytest.raises(ConfigError):
        read_json(tmp_path / "nope.json")
    with pytest.raises(ConfigError):
        read_table(tmp_path / "nope.csv")
    with pytest.raises(ConfigError):
        load_domain(tmp_path, "nope")


def test_invalid_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(ConfigError):
        read_json(path)


def test_json_is_sorted_and_stable(tmp_path):
    write_json(tmp_path / "a.json", {"b": 1, "a": [1.5, 2]})
    assert (tmp_path / "a.json").read_text() == '{\n  "a": [\n    1.5,\n    2\n  ],\n  "b": 1\n}\n'


def test_append_table_writes_header_once(tmp_path):
    path = tmp_path / "rows.csv"
    append_table(path, pd.DataFrame([{"x": 1, "y": 0.1}]))
    append_table(path, pd.DataFrame([{"x": 2, "y": 0.2}]))
    assert path.read_text().splitlines() == ["x,y", "1,0.10000000000000001", "2,0.20000000000000001"]


def test_records_round_trip(tmp_path, small_records):
    path = tmp_path / "records.csv"
    save_records(path, small_records)
    loaded = load_records(path)

    assert len(loaded) == len(small_records)
    for a, b in zip(small_records, loaded):
        assert a.algorithm is b.algorithm
        assert a.pseudo_target_id == b.pseudo_target_id
        assert a.source_ids == b.source_ids
        assert a.similarity == b.similarity
        assert a.quality == b.quality
