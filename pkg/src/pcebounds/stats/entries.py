"""Catalog entries: norm statistics and stored degree sequences."""
from dataclasses import dataclass, replace

from ..config import format_norm_order, norm_order
from ..utils import iter_wrapper, value_key
from .compress import CompressedDegreeSequence

GLOBAL = "global"
MCV = "mcv"
COMMON = "common"
BUCKET = "bucket"

CONDITION_KINDS = (GLOBAL, MCV, COMMON, BUCKET)

# Bucket entries store the largest per-value norm and the norm of the
# whole bucket
PER_VALUE = "value"
WHOLE = "total"


@dataclass(frozen=True)
class Condition:
    """The predicate a statistic was computed under.

    ``global`` statistics are unconditional, ``mcv`` statistics hold for
    ``attr = value``, ``common`` statistics for any non-MCV value of
    ``attr`` and ``bucket`` statistics for values in ``[lo, hi]``.
    """
    kind: str = GLOBAL
    attr: str = None
    value: object = None
    lo: object = None
    hi: object = None
    scope: str = None

    def __post_init__(self):
        if self.kind not in CONDITION_KINDS:
            raise ValueError(f"Unknown condition kind {self.kind!r}")
        if self.kind != GLOBAL and self.attr is None:
            raise ValueError(f"A {self.kind} condition needs an attribute")
        if self.kind == BUCKET and self.scope not in (PER_VALUE, WHOLE):
            raise ValueError("A bucket condition needs a scope")

    def contains(self, value):
        """Test if a bucket condition's range holds a value."""
        return (self.kind == BUCKET
                and value_key(self.lo) <= value_key(value)
                <= value_key(self.hi))

    def to_json(self):
        document = {"kind": self.kind}
        for name in ("attr", "value", "lo", "hi", "scope"):
            if getattr(self, name) is not None:
                document[name] = getattr(self, name)

        return document

    @classmethod
    def from_json(cls, document):

        return cls(**document)

    def __str__(self):
        if self.kind == GLOBAL:
            return "global"
        if self.kind == MCV:
            return f"{self.attr}={self.value!r}"
        if self.kind == COMMON:
            return f"{self.attr}=<common>"

        return f"{self.attr} in [{self.lo!r},{self.hi!r}] ({self.scope})"


GLOBAL_CONDITION = Condition()


@dataclass(frozen=True)
class StatEntry:
    """A norm statistic ``||deg_R(V|U)||_p`` of one relation.

    The target never contains conditioning attributes, since
    deg_R(V|U) = deg_R(UV|U).

    :param relation: The relation name.
    :type relation: str

    :param cond: The conditioning attributes U.
    :type cond: frozenset[str]

    :param target: The target attributes V.
    :type target: frozenset[str]

    :param p: The norm order.
    :type p: :class:`sympy.Expr`

    :param value: The norm, in linear scale.
    :type value: float

    :param condition: The predicate the norm was computed under.
    :type condition: :class:`Condition`
    """
    relation: str
    cond: frozenset
    target: frozenset
    p: object
    value: float
    condition: Condition = GLOBAL_CONDITION

    def __post_init__(self):
        cond = frozenset(iter_wrapper(self.cond))
        object.__setattr__(self, "cond", cond)
        object.__setattr__(self, "target",
                           frozenset(iter_wrapper(self.target)) - cond)
        object.__setattr__(self, "p", norm_order(self.p))
        object.__setattr__(self, "value", float(self.value))

        if self.value < 0:
            raise ValueError(f"Statistic value {self.value} is negative")

    @property
    def key(self):

        return (self.relation, self.cond, self.target, self.p, self.condition)

    def describe(self):
        """Human-readable form, e.g. ``||deg_R(Y|X)||_2``."""
        target = "".join(sorted(self.target)) or "-"
        cond = "".join(sorted(self.cond))
        order = format_norm_order(self.p)
        text = f"||deg_{self.relation}({target}|{cond})||_{order}"
        if self.condition.kind != GLOBAL:
            text += f" [{self.condition}]"

        return text

    def to_json(self):

        return {"relation": self.relation,
                "cond": sorted(self.cond),
                "target": sorted(self.target),
                "p": format_norm_order(self.p),
                "value": repr(self.value),
                "condition": self.condition.to_json()}

    @classmethod
    def from_json(cls, document):

        return cls(relation=document["relation"],
                   cond=frozenset(document["cond"]),
                   target=frozenset(document["target"]),
                   p=norm_order(document["p"]),
                   value=float(document["value"]),
                   condition=Condition.from_json(document.get(
                       "condition", {"kind": GLOBAL})))


@dataclass(frozen=True)
class SequenceEntry:
    """A stored, possibly lossy, degree sequence deg_R(V|U).

    :param sequence: The compressed sequence.
    :type sequence:
        :class:`~pcebounds.stats.compress.CompressedDegreeSequence`
    """
    relation: str
    cond: frozenset
    target: frozenset
    sequence: object

    def __post_init__(self):
        cond = frozenset(iter_wrapper(self.cond))
        object.__setattr__(self, "cond", cond)
        object.__setattr__(self, "target",
                           frozenset(iter_wrapper(self.target)) - cond)
        object.__setattr__(self, "sequence",
                           replace(self.sequence, relation=self.relation,
                                   cond=tuple(sorted(cond)),
                                   target=tuple(sorted(self.target))))

    @property
    def key(self):

        return (self.relation, self.cond, self.target)

    def to_json(self):

        return {"relation": self.relation,
                "cond": sorted(self.cond),
                "target": sorted(self.target),
                "runs": [[repr(value), length]
                         for value, length in self.sequence.runs],
                "lossless": self.sequence.lossless,
                "certified": self.sequence.certified}

    @classmethod
    def from_json(cls, document):
        cond = tuple(document["cond"])
        target = tuple(document["target"])
        runs = tuple((float(value), int(length))
                     for value, length in document["runs"])
        sequence = CompressedDegreeSequence(
            runs, document["relation"], cond, target,
            lossless=bool(document.get("lossless", False)),
            certified=bool(document.get("certified", False)))

        return cls(document["relation"], frozenset(cond), frozenset(target),
                   sequence)
