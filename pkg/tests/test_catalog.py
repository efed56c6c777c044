import pytest
from sympy import oo

from pcebounds.catalog import (Database, StatisticsCatalog, file_digest,
                               load_catalog, load_csv, save_catalog,
                               stale_sources, write_csv)
from pcebounds.exceptions import CatalogError, SchemaError
from pcebounds.model import Relation
from pcebounds.stats import (MCV, Condition, SequenceEntry, StatEntry,
                             compressed_from_degrees)


@pytest.fixture
def catalog():
    entries = [StatEntry("R", (), ("X", "Y", "Z"), 1, 8),
               StatEntry("R", "X", "Y", 2, 13 ** 0.5),
               StatEntry("R", (), "X", oo, 3,
                         Condition(MCV, "Y", value="b"))]
    sequences = [SequenceEntry("R", "X", ("X", "Y"),
                               compressed_from_degrees((2, 2, 2, 1)))]

    return StatisticsCatalog(entries, sequences, {"R": ("X", "Y", "Z")},
                             {"sources": {}})


def test_lookup(catalog):

    assert catalog.lookup("R", (), ("X", "Y", "Z"), 1) == 8.0
    assert catalog.lookup("R", ["X"], ["X", "Y"], 2) == 13 ** 0.5
    assert catalog.lookup("R", "X", "Y", 3) is None
    assert catalog.lookup("R", (), "X", oo) is None
    assert catalog.lookup("R", (), "X", "inf",
                          Condition(MCV, "Y", value="b")) == 3.0


def test_conditional_and_global_entries(catalog):

    assert [entry.value for entry in
            catalog.conditional_entries("R", (), "X", oo, "Y")] == [3.0]
    assert catalog.conditional_entries("R", (), "X", oo, "Z") == []
    assert len(catalog.global_entries("R")) == 2
    assert catalog.global_entries("S") == []


def test_stored_sequence(catalog):
    entry = catalog.sequence("R", "X", "Y")

    assert entry.sequence.runs == ((2.0, 3), (1.0, 1))
    assert entry.sequence.cond == ("X",)
    assert entry.sequence.target == ("Y",)
    assert catalog.sequence("R", "Y", "X") is None


def test_duplicate_entries():
    entry = StatEntry("R", (), "X", 1, 2)

    with pytest.raises(CatalogError):
        StatisticsCatalog([entry, StatEntry("R", (), "X", 1, 3)])


def test_catalog_file_preserves_values(catalog, tmp_path):
    path = tmp_path / "catalog.json"
    save_catalog(catalog, path)
    loaded = load_catalog(path)

    assert loaded.entries == catalog.entries
    assert loaded.sequences == catalog.sequences
    assert loaded.schemas == catalog.schemas
    assert loaded.lookup("R", "X", "Y", 2) == 13 ** 0.5


@pytest.mark.parametrize("text", [
    "{",
    "[]",
    '{"version": 99}',
    '{"version": 1, "entries": [{"relation": "R"}]}',
    '{"version": 1, "entries": [{"relation": "R", "cond": [], '
    '"target": ["A"], "p": "-1", "value": "1"}]}',
])
def test_malformed_catalogs(tmp_path, text):
    path = tmp_path / "catalog.json"
    path.write_text(text, encoding="utf-8")

    with pytest.raises(CatalogError):
        load_catalog(path)


def test_load_csv(tmp_path):
    path = tmp_path / "R.csv"
    path.write_text("A, B\n1,x\n1,x\n-2,\"y,z\"\n\n", encoding="utf-8")
    relation = load_csv(path, "R")

    assert relation.attributes == ("A", "B")
    assert relation.tuples == frozenset({(1, "x"), (-2, "y,z")})


def test_load_csv_without_header(tmp_path):
    path = tmp_path / "R.csv"
    path.write_text("1,2\n3,4\n", encoding="utf-8")

    assert load_csv(path, "R", header=False).attributes == ("A1", "A2")


def test_load_header_only_csv(fixture_dir):
    relation = load_csv(fixture_dir / "E.csv", "E")

    assert relation.attributes == ("A", "B")
    assert len(relation) == 0


@pytest.mark.parametrize("text", ["", "A,B\n1,2\n3\n"])
def test_bad_csv(tmp_path, text):
    path = tmp_path / "R.csv"
    path.write_text(text, encoding="utf-8")

    with pytest.raises(SchemaError):
        load_csv(path, "R")


def test_write_csv_is_read_back(skewed, tmp_path):
    path = tmp_path / "R.csv"
    write_csv(skewed, path)

    assert load_csv(path, "R") == skewed
    assert path.read_text(encoding="utf-8").splitlines()[:2] == \
        ["X,Y,Z", "1,a,1"]


def test_database():
    database = Database.from_relations([Relation("R", ("A",)),
                                        Relation("S", ("B", "C"))])

    assert database.schemas == {"R": ("A",), "S": ("B", "C")}
    assert "R" in database
    with pytest.raises(SchemaError):
        database["T"]
    with pytest.raises(SchemaError):
        Database.from_relations([Relation("R", ("A",)),
                                 Relation("R", ("B",))])


def test_stale_sources(tmp_path):
    (tmp_path / "R.csv").write_text("A\n1\n", encoding="utf-8")
    (tmp_path / "S.csv").write_text("A\n1\n", encoding="utf-8")
    sources = {name: {"file": f"{name}.csv",
                      "sha256": file_digest(tmp_path / f"{name}.csv")}
               for name in ("R", "S")}
    sources["T"] = {"file": "T.csv", "sha256": "0"}
    catalog = StatisticsCatalog(meta={"sources": sources})

    assert stale_sources(catalog, tmp_path) == ["T"]

    (tmp_path / "S.csv").write_text("A\n2\n", encoding="utf-8")
    assert stale_sources(catalog, tmp_path) == ["S", "T"]
