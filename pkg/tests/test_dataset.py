import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from airesample.dataset import CsvSchema, Dataset, GroupConfig, group_cells, load_csv, provenance, save_csv
from airesample.errors import EmptyInputError, ParseError, SchemaError, ValidationError

from conftest import make_dataset


def write(path, text):
    path.write_text(text, encoding="utf-8")
    return path


def test_load_small_csv(tmp_path):
    p = write(tmp_path / "d.csv", "id,group,outcome,f1,f2\na,W,1,0.5,1\nb,B,0,1.5,2\nc,W,1,2,3\nd,H,0,-1,4e-3\n")
    d = load_csv(p)
    assert (d.n, d.p) == (4, 2)
    assert d.outcome.tolist() == [1, 0, 1, 0]
    assert d.group.tolist() == ["W", "B", "W", "H"]
    assert d.feature_names == ("f1", "f2")
    assert d.features[3, 1] == 0.004


def test_bad_outcome_names_row(tmp_path):
    p = write(tmp_path / "d.csv", "id,group,outcome,f1\na,W,1,0\nb,W,0,0\nc,W,2,0\n")
    with pytest.raises(ParseError, match="row 3") as info:
        load_csv(p)
    assert info.value.row == 3


def test_non_numeric_feature(tmp_path):
    p = write(tmp_path / "d.csv", "id,group,outcome,f1\na,W,1,x\n")
    with pytest.raises(ParseError, match="row 1"):
        load_csv(p)


def test_missing_value_rejected(tmp_path):
    p = write(tmp_path / "d.csv", "id,group,outcome,f1,f2\na,W,1,1,\n")
    with pytest.raises(ParseError):
        load_csv(p)


def test_missing_column(tmp_path):
    p = write(tmp_path / "d.csv", "id,grp,outcome,f1\na,W,1,0\n")
    with pytest.raises(SchemaError):
        load_csv(p)


@pytest.mark.parametrize("text", ["", "id,group,outcome,f1\n"])
def test_empty_input(tmp_path, text):
    with pytest.raises(EmptyInputError):
        load_csv(write(tmp_path / "d.csv", text))


def test_remapped_schema(tmp_path):
    p = write(tmp_path / "d.csv", "race,pass,score,junk\nW,1,3.0,9\nB,0,2.0,9\n")
    d = load_csv(p, CsvSchema(id=None, group="race", outcome="pass", features=["score"]))
    assert d.row_id.tolist() == ["r1", "r2"]
    assert d.p == 1


def test_dataset_invariants():
    with pytest.raises(ValidationError):
        make_dataset(["W", "W"], [1, 0], ids=["a", "a"])
    with pytest.raises(ValidationError):
        make_dataset(["W", ""], [1, 0])
    with pytest.raises(ValidationError):
        make_dataset(["W"], [1], features=[[np.nan]])
    with pytest.raises(ValidationError):
        make_dataset(["W"], [2])
    with pytest.raises(ValidationError):
        Dataset(np.zeros((2, 1)), [1, 0], ["W"], ["a", "b"])


def test_dataset_is_immutable():
    d = make_dataset(["W", "B"], [1, 0])
    with pytest.raises(ValueError):
        d.features[0, 0] = 3.0


def test_group_cells_enumeration():
    d = make_dataset(["W", "W", "B"], [1, 0, 1])
    cells = {k: v.tolist() for k, v in group_cells(d).items()}
    assert cells == {("W", 1): [0], ("W", 0): [1], ("B", 1): [2]}
    assert ("B", 0) not in cells


def test_group_cells_partition_paper_pool(paper_pool):
    cells = group_cells(paper_pool)
    idx = np.concatenate(list(cells.values()))
    assert sum(len(v) for v in cells.values()) == 2501
    assert sorted(idx.tolist()) == list(range(2501))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_csv_round_trip(tmp_path_factory, seed):
    rng = np.random.default_rng(seed)
    n = 100
    X = rng.normal(size=(n, 3)) * 10.0 ** rng.integers(-8, 8, size=(n, 3))
    d = Dataset(
        X,
        rng.integers(0, 2, n),
        rng.choice(["White", "Black", "Hispanic", "Other group"], n).astype(object),
        [f"id{i}" for i in rng.permutation(n)],
    )
    path = tmp_path_factory.mktemp("rt") / "d.csv"
    save_csv(d, path)
    assert load_csv(path).equals(d)


def test_provenance_tags():
    assert provenance("a17") == "real"
    assert provenance("a17#dup3") == "real-duplicate"
    assert provenance("a17#smote9") == "smote"


def test_group_config_rules():
    cfg = GroupConfig()
    assert cfg.aggregate_label == "Non-White"
    assert cfg.report_labels() == ["Non-White", "Black", "Hispanic"]
    with pytest.raises(ValidationError):
        GroupConfig("White", ("White",))
    with pytest.raises(ValidationError):
        GroupConfig("White", ("Black", "Black"))
