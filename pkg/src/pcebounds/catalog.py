"""CSV ingestion of relations and persistence of the statistics
catalog."""
import csv
import hashlib
import json
import logging
import re
from dataclasses import dataclass, field
from pathlib import Path

from .config import CATALOG_VERSION, norm_order
from .exceptions import CatalogError, SchemaError
from .model import Relation
from .stats.entries import GLOBAL, GLOBAL_CONDITION, SequenceEntry, StatEntry
from .utils import iter_wrapper

logger = logging.getLogger(__name__)

_INTEGER_RE = re.compile(r"[+-]?\d+")


@dataclass(frozen=True)
class Database:
    """Relations by name."""
    relations: dict = field(default_factory=dict)

    @classmethod
    def from_relations(cls, relations):
        """Build a database, rejecting repeated relation names."""
        by_name = {}
        for relation in relations:
            if relation.name in by_name:
                raise SchemaError(f"Relation {relation.name} defined twice")
            by_name[relation.name] = relation

        return cls(by_name)

    def __getitem__(self, name):
        try:
            return self.relations[name]
        except KeyError:
            raise SchemaError(f"Relation {name} is not bound") from None

    def __contains__(self, name):

        return name in self.relations

    def __iter__(self):

        return iter(self.relations.values())

    @property
    def schemas(self):
        """Relation name -> attribute tuple."""
        return {name: relation.attributes
                for name, relation in self.relations.items()}


def _normalize_key(relation, cond, target, p):
    cond = frozenset(iter_wrapper(cond))

    return (relation, cond, frozenset(iter_wrapper(target)) - cond,
            norm_order(p))


@dataclass(frozen=True)
class StatisticsCatalog:
    """The persisted statistics of a database.

    :param entries: The norm statistics, in build order.
    :type entries: tuple[:class:`~pcebounds.stats.entries.StatEntry`, ...]

    :param sequences: Stored compressed degree sequences.
    :type sequences:
        tuple[:class:`~pcebounds.stats.entries.SequenceEntry`, ...]

    :param schemas: Relation name -> attribute tuple.
    :type schemas: dict

    :param meta: Build timestamp, source digests and build summary.
    :type meta: dict

    :raises CatalogError: if two entries share a key.
    """
    entries: tuple = ()
    sequences: tuple = ()
    schemas: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)
    _index: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        object.__setattr__(self, "sequences", tuple(self.sequences))
        object.__setattr__(self, "schemas",
                           {name: tuple(attrs)
                            for name, attrs in self.schemas.items()})

        index = {}
        for entry in self.entries:
            if entry.key in index:
                raise CatalogError(f"Duplicate catalog entry "
                                   f"{entry.describe()}")
            index[entry.key] = entry

        sequence_index = {}
        for entry in self.sequences:
            if entry.key in sequence_index:
                raise CatalogError(f"Duplicate stored sequence for "
                                   f"{entry.relation}")
            sequence_index[entry.key] = entry

        object.__setattr__(self, "_index", (index, sequence_index))

    def __len__(self):

        return len(self.entries)

    def lookup(self, relation, cond, target, p, condition=GLOBAL_CONDITION):
        """The value of one statistic, or ``None`` if absent.

        :rtype: float or None
        """
        entry = self._index[0].get(_normalize_key(relation, cond, target, p)
                                   + (condition,))

        return None if entry is None else entry.value

    def conditional_entries(self, relation, cond, target, p, attr):
        """Non-global entries of one statistic conditioned on ``attr``."""
        key = _normalize_key(relation, cond, target, p)

        return [entry for entry in self.entries
                if entry.key[:4] == key and entry.condition.kind != GLOBAL
                and entry.condition.attr == attr]

    def global_entries(self, relation):
        """The unconditional entries of one relation, in build order."""
        return [entry for entry in self.entries
                if entry.relation == relation
                and entry.condition.kind == GLOBAL]

    def sequence(self, relation, cond, target):
        """The stored sequence deg(V|U) of a relation, or ``None``."""
        cond = frozenset(iter_wrapper(cond))
        key = (relation, cond, frozenset(iter_wrapper(target)) - cond)

        return self._index[1].get(key)

    def to_json(self):

        return {"version": CATALOG_VERSION,
                "meta": self.meta,
                "schemas": {name: list(attrs)
                            for name, attrs in self.schemas.items()},
                "entries": [entry.to_json() for entry in self.entries],
                "sequences": [entry.to_json() for entry in self.sequences]}

    @classmethod
    def from_json(cls, document):
        if not isinstance(document, dict):
            raise CatalogError("A catalog must be a JSON object")
        if document.get("version") != CATALOG_VERSION:
            raise CatalogError(f"Catalog version {document.get('version')!r}"
                               f" is not supported (expected "
                               f"{CATALOG_VERSION})")

        try:
            return cls(entries=[StatEntry.from_json(entry)
                                for entry in document.get("entries", [])],
                       sequences=[SequenceEntry.from_json(entry)
                                  for entry in document.get("sequences", [])],
                       schemas=document.get("schemas", {}),
                       meta=document.get("meta", {}))
        except (KeyError, TypeError, ValueError) as err:
            if isinstance(err, CatalogError):
                raise
            raise CatalogError(f"Malformed catalog entry: {err}") from err


def save_catalog(catalog, path):
    """Write a catalog as one JSON document.

    Norm values are stored as decimal strings that parse back to the
    same floats.
    """
    path = Path(path)
    path.write_text(json.dumps(catalog.to_json(), indent=2) + "\n",
                    encoding="utf-8")

    logger.info("Wrote %d statistics to %s", len(catalog), path)


def load_catalog(path):
    """Read a catalog written by :func:`save_catalog`.

    :rtype: :class:`StatisticsCatalog`

    :raises CatalogError: if the file is malformed or of another
        version.
    """
    path = Path(path)

    try:
        document = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as err:
        raise CatalogError(f"{path}: invalid JSON ({err})") from err

    return StatisticsCatalog.from_json(document)


def _parse_value(text):

    return int(text) if _INTEGER_RE.fullmatch(text) else text


def load_csv(path, name, header=True):
    """Read a relation from a comma separated file.

    Integer-looking fields become integers, everything else stays a
    string. Duplicate rows are collapsed.

    :param path: The file.
    :type path: str or :class:`pathlib.Path`

    :param name: The relation name.
    :type name: str

    :param header: Whether the first row names the attributes. Without
        a header the attributes are named ``A1, ..., Ak``.
    :type header: bool, optional

    :rtype: :class:`~pcebounds.model.Relation`

    :raises SchemaError: for an empty file or rows of unequal length.
    :raises OSError: if the file cannot be read.
    """
    path = Path(path)

    with path.open(newline="", encoding="utf-8") as file:
        rows = [(line, row) for line, row in enumerate(csv.reader(file), 1)
                if row]

    if not rows:
        raise SchemaError(f"{path}: empty file")

    if header:
        attributes = tuple(attr.strip() for attr in rows[0][1])
        rows = rows[1:]
    else:
        attributes = tuple(f"A{i}" for i in range(1, len(rows[0][1]) + 1))

    tuples = []
    for line, row in rows:
        if len(row) != len(attributes):
            raise SchemaError(f"{path}:{line}: row has {len(row)} fields, "
                              f"expected {len(attributes)}")
        tuples.append(tuple(_parse_value(value.strip()) for value in row))

    relation = Relation(name, attributes, frozenset(tuples))

    duplicates = len(tuples) - len(relation)
    if duplicates:
        logger.info("Collapsed %d duplicate rows of %s", duplicates, name)
    logger.info("Read %d rows of %s from %s", len(relation), name, path)

    return relation


def write_csv(relation, path, header=True):
    """Write a relation in the dialect :func:`load_csv` reads, rows in
    value order."""
    path = Path(path)

    with path.open("w", newline="", encoding="utf-8") as file:
        writer = csv.writer(file)
        if header:
            writer.writerow(relation.attributes)
        writer.writerows(relation.sorted_rows())


def file_digest(path):
    """The sha256 hex digest of a file."""
    digest = hashlib.sha256()
    with Path(path).open("rb") as file:
        for block in iter(lambda: file.read(1 << 16), b""):
            digest.update(block)

    return digest.hexdigest()


def stale_sources(catalog, data_dir):
    """Relations whose data file changed since the catalog was built.

    :param catalog: The catalog, with recorded source digests.
    :type catalog: :class:`StatisticsCatalog`

    :param data_dir: The directory holding the data files.
    :type data_dir: str or :class:`pathlib.Path`

    :return: The names of relations with a missing or changed file.
    :rtype: list[str]
    """
    stale = []
    for name, source in sorted(catalog.meta.get("sources", {}).items()):
        path = Path(data_dir) / source["file"]
        if not path.is_file() or file_digest(path) != source["sha256"]:
            stale.append(name)

    return stale
