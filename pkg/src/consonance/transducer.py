"""Conformal transducer and nonconformity measures.

Given an exchangeable bag ``y^n`` and a candidate outcome ``c``, the
transducer forms the augmented bag ``y^n + [c]``, scores every element
against the rest of the bag with a nonconformity measure, and returns the
rank-based p-value

    pi(c) = (1/(n+1)) * #{ i : T_i >= T_{n+1} },

where ``T_{n+1}`` is the candidate's own score.  The candidate term always
participates in the count, so ``pi`` takes values ``k/(n+1)`` with
``k >= 1``; results are exact :class:`fractions.Fraction` objects.

Sweeping the candidate over an outcome space yields a contour ``y -> pi(y)``
which is the object every downstream module consumes.  A contour need not
attain 1; :func:`adjust_prime` (divide by the supremum) and
:func:`adjust_double_prime` (lift the argmax to 1) produce consonant
versions, the latter pointwise no larger and hence never less efficient.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import fsum
from typing import Callable, Sequence

import numpy as np

from ._num import Scalar, fmt_scalar, parse_scalar
from .errors import AllZeroContour, EmptyBag, UnknownLabel
from .outcome import (
    FiniteOutcomeSpace,
    GridOutcomeSpace,
    OutcomeSpace,
    space_from_json,
)

__all__ = [
    "nonconformity_mean_abs",
    "nonconformity_one_minus_emp",
    "NonconformityMeasure",
    "conformal_transducer",
    "transduce_grid",
    "Contour",
    "ConformalResult",
    "adjust_prime",
    "adjust_double_prime",
]


def nonconformity_mean_abs(rest: Sequence[float], y: float) -> float:
    """Absolute distance from ``y`` to the mean of the remaining bag."""
    n = len(rest)
    if n == 0:
        raise EmptyBag("mean of an empty bag is undefined")
    return abs(fsum(rest) / n - y)


def nonconformity_one_minus_emp(counts, y) -> Fraction:
    """One minus the empirical frequency of ``y`` in the augmented bag.

    Parameters
    ----------
    counts : mapping label -> int
        Per-label counts of the full augmented bag, candidate included.
    y : label
        The element being scored; must appear as a key.

    Rare labels score high.  Inside the transducer the comparison
    ``T_i >= T_{n+1}`` reduces to comparing bag counts, which makes this
    measure equivalent to its leave-one-out variant.
    """
    if y not in counts:
        raise UnknownLabel(f"label {y!r} not in count table")
    total = sum(counts.values())
    if total == 0:
        raise EmptyBag("count table is empty")
    if any(v < 0 for v in counts.values()):
        raise ValueError("counts must be nonnegative")
    return 1 - Fraction(counts[y], total)


@dataclass(frozen=True)
class NonconformityMeasure:
    """A nonconformity measure plus the dispatch tag the transducer uses.

    ``kind`` is one of ``"mean-abs-distance"``, ``"one-minus-empirical-pmf"``
    or ``"user"``.  User measures supply ``fn(rest, y)`` with the bag minus
    the scored element as first argument.
    """

    kind: str
    fn: Callable | None = None

    _KINDS = ("mean-abs-distance", "one-minus-empirical-pmf", "user")

    def __post_init__(self):
        if self.kind not in self._KINDS:
            raise ValueError(f"unknown measure kind {self.kind!r}")
        if self.kind == "user" and self.fn is None:
            raise ValueError("user measure needs a callable")

    @classmethod
    def mean_abs(cls) -> "NonconformityMeasure":
        return cls("mean-abs-distance")

    @classmethod
    def one_minus_emp(cls) -> "NonconformityMeasure":
        return cls("one-minus-empirical-pmf")

    @classmethod
    def from_function(cls, fn: Callable) -> "NonconformityMeasure":
        return cls("user", fn)

    @classmethod
    def from_name(cls, name: str) -> "NonconformityMeasure":
        table = {
            "mean-abs": cls.mean_abs(),
            "mean-abs-distance": cls.mean_abs(),
            "one-minus-emp": cls.one_minus_emp(),
            "one-minus-empirical-pmf": cls.one_minus_emp(),
        }
        if name not in table:
            raise ValueError(f"unknown measure name {name!r}")
        return table[name]

    def raw_scores(self, data: Sequence, candidate) -> tuple[list, Scalar]:
        """Scores ``(T_1..T_n, T_{n+1})`` for the augmented bag.

        All transducer entry points funnel through here so that scalar and
        grid evaluation agree bit for bit.
        """
        n = len(data)
        if self.kind == "mean-abs-distance":
            total = fsum(data) + candidate
            t = [abs((total - y) / n - y) for y in data]
            t_cand = abs((total - candidate) / n - candidate)
            return t, t_cand
        if self.kind == "one-minus-empirical-pmf":
            counts = Counter(data)
            counts[candidate] += 1
            t = [nonconformity_one_minus_emp(counts, y) for y in data]
            return t, nonconformity_one_minus_emp(counts, candidate)
        bag = list(data) + [candidate]
        t = [self.fn(tuple(bag[:i] + bag[i + 1 :]), bag[i]) for i in range(n)]
        return t, self.fn(tuple(data), candidate)


def conformal_transducer(data: Sequence, candidate, psi: NonconformityMeasure) -> Fraction:
    """Rank p-value of ``candidate`` against the bag ``data``.

    Returns an exact rational ``k/(n+1)`` with ``k >= 1``; an empty bag gives
    1 (any candidate is fully plausible).
    """
    n = len(data)
    if n == 0:
        return Fraction(1)
    t, t_cand = psi.raw_scores(data, candidate)
    k = 1 + sum(1 for v in t if v >= t_cand)
    return Fraction(k, n + 1)


_PROVENANCES = ("raw", "prime-adjusted", "double-prime-adjusted", "analytic")


@dataclass(frozen=True)
class Contour:
    """Plausibility contour over an outcome space.

    ``values[i]`` is the contour at label/grid-point ``i``, in [0, 1].
    Transducer output is exact rational; hand-built contours may be float.
    ``provenance`` records how the contour arose: "raw" out of the
    transducer, "prime-adjusted"/"double-prime-adjusted" after the
    respective normalization, "analytic" for everything built directly.
    """

    space: OutcomeSpace
    values: tuple
    provenance: str = "analytic"

    def __post_init__(self):
        vals = tuple(self.values)
        object.__setattr__(self, "values", vals)
        if len(vals) != self.space.size:
            raise ValueError("one value per outcome required")
        if any(v < 0 or v > 1 for v in vals):
            raise ValueError("contour values must lie in [0, 1]")
        if self.provenance not in _PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")

    @property
    def size(self) -> int:
        return self.space.size

    def max_value(self) -> Scalar:
        return max(self.values)

    def to_json(self) -> dict:
        if isinstance(self.space, FiniteOutcomeSpace):
            obj = self.space.to_json()
        else:
            obj = {"grid": self.space.to_json()}
        obj["pi"] = [fmt_scalar(v) for v in self.values]
        obj["provenance"] = self.provenance
        return obj

    @classmethod
    def from_json(cls, obj: dict) -> "Contour":
        space = space_from_json(obj)
        values = tuple(parse_scalar(v) for v in obj["pi"])
        return cls(space, values, obj.get("provenance", "analytic"))


@dataclass(frozen=True)
class ConformalResult:
    """Transducer sweep output: the contour plus what produced it."""

    contour: Contour
    data: tuple = field(repr=False)
    psi_kind: str = "user"

    @property
    def n(self) -> int:
        return len(self.data)


def _sweep_label_counts(data: Sequence, space: FiniteOutcomeSpace) -> list[Fraction]:
    """Count-table shortcut for the empirical-pmf measure on label data.

    For candidate label ``l`` the augmented counts are ``c' = c + e_l`` and
    the rank count is the total mass of labels with ``c'(m) <= c'(l)``.
    Equivalent to the generic score path, just O(K^2) instead of O(n*K).
    """
    counts = Counter(data)
    unknown = set(counts) - set(space.labels)
    if unknown:
        raise UnknownLabel(f"data labels {sorted(map(repr, unknown))} not in space")
    n = len(data)
    out = []
    for label in space.labels:
        aug = dict(counts)
        aug[label] = aug.get(label, 0) + 1
        k = sum(v for v in aug.values() if v <= aug[label])
        out.append(Fraction(k, n + 1))
    return out


def _sweep_mean_abs_grid(data: Sequence[float], candidates: np.ndarray) -> np.ndarray:
    """Vectorized rank counts for the mean-abs measure over many candidates."""
    y = np.asarray(data, dtype=float)
    n = y.size
    c = np.asarray(candidates, dtype=float)
    total = y.sum() + c[:, None]                      # bag sums, per candidate
    t = np.abs((total - y[None, :]) / n - y[None, :])  # (G, n) leave-one-out scores
    t_cand = np.abs((total[:, 0] - c) / n - c)
    return 1 + (t >= t_cand[:, None]).sum(axis=1)


def transduce_grid(
    data: Sequence, space: OutcomeSpace, psi: NonconformityMeasure
) -> ConformalResult:
    """Evaluate the transducer at every outcome of ``space``.

    The returned contour matches :func:`conformal_transducer` pointwise;
    label data under the empirical-pmf measure and numeric data under
    mean-abs take O(K^2) / vectorized shortcuts through the same formulas.
    """
    data = tuple(data)
    n = len(data)
    if n == 0:
        values = tuple(Fraction(1) for _ in range(space.size))
        contour = Contour(space, values, provenance="raw")
        return ConformalResult(contour, data, psi.kind)

    if isinstance(space, FiniteOutcomeSpace) and psi.kind == "one-minus-empirical-pmf":
        values = tuple(_sweep_label_counts(data, space))
    elif isinstance(space, GridOutcomeSpace) and psi.kind == "mean-abs-distance":
        counts = _sweep_mean_abs_grid(data, np.array(space.points()))
        values = tuple(Fraction(int(k), n + 1) for k in counts)
    else:
        if isinstance(space, FiniteOutcomeSpace):
            candidates = space.labels
        else:
            candidates = space.points()
        values = tuple(conformal_transducer(data, c, psi) for c in candidates)

    contour = Contour(space, values, provenance="raw")
    return ConformalResult(contour, data, psi.kind)


def adjust_prime(c: Contour) -> Contour:
    """Normalize by the supremum: pi'(y) = pi(y) / sup pi."""
    m = c.max_value()
    if m == 0:
        raise AllZeroContour("cannot normalize an identically-zero contour")
    if m == 1:
        return Contour(c.space, c.values, provenance="prime-adjusted")
    values = tuple(v / m for v in c.values)
    return Contour(c.space, values, provenance="prime-adjusted")


def adjust_double_prime(c: Contour) -> Contour:
    """Lift the argmax to 1, leave the rest alone: the sharper adjustment.

    Pointwise pi <= pi'' <= pi', so regions from pi'' are never wider than
    regions from pi'.
    """
    m = c.max_value()
    if m == 0:
        raise AllZeroContour("cannot adjust an identically-zero contour")
    one = Fraction(1) if isinstance(m, (int, Fraction)) else 1.0
    values = tuple(one if v == m else v for v in c.values)
    return Contour(c.space, values, provenance="double-prime-adjusted")
