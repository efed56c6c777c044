"""Lossless and lossy compression of degree sequences.

Run-length compression is lossless. The lossy compressions keep a
bound valid: :func:`elementwise_upper_compress` dominates every degree,
:func:`cdf_upper_compress` only dominates the cumulative sums, which is
enough for the degree sequence bound and keeps the total size.
"""
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .degree import DegreeSequence

# Absolute slack, relative to the total, accepted in dominance checks
DOMINANCE_TOLERANCE = 1e-9


@dataclass(frozen=True)
class CompressedDegreeSequence:
    """A degree sequence as runs of (value, length).

    :param runs: The runs. Values are non-negative reals, lengths
        positive integers.
    :type runs: tuple[tuple[float, int], ...]

    :param relation: Name of the source relation.
    :type relation: str

    :param cond: The conditioning attributes U of the source sequence.
    :type cond: tuple[str, ...]

    :param target: The target attributes V of the source sequence.
    :type target: tuple[str, ...]

    :param lossless: True if the runs expand to the source exactly.
    :type lossless: bool

    :param certified: True if the cumulative sums were checked to
        dominate those of the source when the sequence was built.
    :type certified: bool
    """
    runs: tuple
    relation: str = None
    cond: tuple = ()
    target: tuple = ()
    lossless: bool = False
    certified: bool = False

    def __post_init__(self):
        runs = tuple((float(value), int(length)) for value, length in self.runs)

        for value, length in runs:
            if value < 0 or math.isnan(value):
                raise ValueError(f"Run value {value} must be non-negative")
            if length < 1:
                raise ValueError(f"Run length {length} must be positive")

        object.__setattr__(self, "runs", runs)

    @property
    def length(self):

        return sum(length for _, length in self.runs)

    @property
    def values(self):
        """Run values and lengths, as arrays."""
        return (np.array([value for value, _ in self.runs], dtype=float),
                np.array([length for _, length in self.runs], dtype=float))

    @property
    def is_non_increasing(self):

        return all(v1 >= v2 for (v1, _), (v2, _) in zip(self.runs,
                                                         self.runs[1:]))

    def expand(self):
        """The uncompressed degrees, as an array."""
        values, lengths = self.values

        return np.repeat(values, lengths.astype(int))

    def cdf(self):
        """Cumulative sums of the expanded degrees."""
        return np.cumsum(self.expand())


def cdf_dominates(upper_cdf, cdf, tolerance=DOMINANCE_TOLERANCE):
    """Test ``upper_cdf[i] >= cdf[i]`` at every index.

    Indices past the end of a CDF repeat its last value.

    :rtype: bool
    """
    upper_cdf = np.asarray(upper_cdf, dtype=float)
    cdf = np.asarray(cdf, dtype=float)

    size = max(len(upper_cdf), len(cdf))
    if size == 0:
        return True

    def padded(values):
        last = values[-1] if len(values) else 0.0
        return np.concatenate((values, np.full(size - len(values), last)))

    upper_cdf, cdf = padded(upper_cdf), padded(cdf)
    slack = tolerance * max(1.0, float(np.abs(cdf).max()))

    return bool(np.all(upper_cdf >= cdf - slack))


def _merge_runs(runs):
    merged = []
    for value, length in runs:
        if merged and merged[-1][0] == value:
            merged[-1] = (value, merged[-1][1] + length)
        else:
            merged.append((value, length))

    return tuple(merged)


def run_length_compress(sequence):
    """Replace every constant subsequence by its value and length.

    :param sequence: The degree sequence.
    :type sequence: :class:`~pcebounds.stats.degree.DegreeSequence`

    :return: The lossless compressed sequence.
    :rtype: :class:`CompressedDegreeSequence`
    """
    runs = _merge_runs((d, 1) for d in sequence.degrees)

    return CompressedDegreeSequence(runs, sequence.relation, sequence.cond,
                                    sequence.target, lossless=True,
                                    certified=True)


def _segments(size, max_runs):
    """Index segments: the first degree alone, the rest in
    ``max_runs - 1`` segments of near-equal length."""
    if max_runs == 1 or size <= 1:
        return [(0, size)] if size else []

    bounds = np.array_split(np.arange(1, size), max_runs - 1)

    return [(0, 1)] + [(int(part[0]), int(part[-1]) + 1) for part in bounds
                       if len(part)]


def _round_up(value):
    # Nearest float not below an exact rational
    approx = float(value)
    if Fraction(approx) < value:
        approx = math.nextafter(approx, math.inf)

    return approx


def cdf_upper_compress(sequence, max_runs):
    """Lossy compression whose cumulative sums dominate the source.

    The first degree is kept as its own run, so the maximum degree is
    preserved. The remaining indices are split into equal-length
    segments, and each segment takes the smallest constant for which
    the compressed CDF stays above the source CDF on that segment.
    The total length is preserved; the values need not be monotone.

    :param sequence: The degree sequence.
    :type sequence: :class:`~pcebounds.stats.degree.DegreeSequence`

    :param max_runs: The maximum number of runs of the result.
    :type max_runs: int

    :rtype: :class:`CompressedDegreeSequence`

    :raises ValueError: if ``max_runs < 1``.
    """
    if max_runs < 1:
        raise ValueError("max_runs must be at least 1")

    lossless = run_length_compress(sequence)
    if len(lossless.runs) <= max_runs:
        return lossless

    degrees = sequence.degrees
    cdf = np.cumsum(degrees)

    runs = []
    base = Fraction(0)
    for start, end in _segments(len(degrees), max_runs):
        value = max(Fraction(int(cdf[k]) - base) / (k - start + 1)
                    for k in range(start, end))
        value = max(value, Fraction(0))

        runs.append((_round_up(value), end - start))
        base += value * (end - start)

    compressed = CompressedDegreeSequence(_merge_runs(runs),
                                          sequence.relation, sequence.cond,
                                          sequence.target, lossless=False,
                                          certified=False)

    if not cdf_dominates(compressed.cdf(), cdf):
        raise ArithmeticError("Compressed CDF does not dominate the source")

    return CompressedDegreeSequence(compressed.runs, sequence.relation,
                                    sequence.cond, sequence.target,
                                    lossless=False, certified=True)


def elementwise_upper_compress(sequence, max_runs):
    """Lossy compression that dominates every degree.

    Uses the same segments as :func:`cdf_upper_compress`, each taking
    its first (largest) degree. The l1-norm grows.

    :rtype: :class:`CompressedDegreeSequence`
    """
    if max_runs < 1:
        raise ValueError("max_runs must be at least 1")

    lossless = run_length_compress(sequence)
    if len(lossless.runs) <= max_runs:
        return lossless

    degrees = sequence.degrees
    runs = [(degrees[start], end - start)
            for start, end in _segments(len(degrees), max_runs)]

    return CompressedDegreeSequence(_merge_runs(runs), sequence.relation,
                                    sequence.cond, sequence.target,
                                    lossless=False, certified=True)


def compressed_from_degrees(degrees):
    """Run-length compress a plain non-increasing degree list."""
    return run_length_compress(DegreeSequence(None, (), (), tuple(degrees)))
