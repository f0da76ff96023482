"""Possibility calculus on top of a consonant contour.

A contour with sup pi = 1 induces a possibility measure (upper probability)
by maximization and, by duality, a necessity measure (lower probability):

    upper(A) = max_{y in A} pi(y)          upper(empty) = 0
    lower(A) = 1 - upper(complement of A)

The lower probability of a consonant contour is a belief function whose
Moebius mass sits on a nested chain of focal events; the induced upper/lower
pair also passes every k-alternating/k-monotone test within budget.  Both
facts are checkable here: :func:`mass_from_belief` inverts any belief
function exactly, :func:`check_k_monotone` / :func:`check_k_alternating`
sweep all collections of distinct events up to size k.

Maximization makes the calculus tropical: events under union map to values
under max (:func:`tropical_sum`), turning finite additivity into the
max-plus analogue tested in the property suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Callable, Sequence

import numpy as np

from ._num import Scalar, all_rational, common_integers, zero_like
from .errors import (
    BudgetExceeded,
    EmptyList,
    NegativeMass,
    NonConsonantContour,
    SpaceTooLarge,
)
from .outcome import MAX_ENUM, Event, complement
from .transducer import Contour

__all__ = [
    "is_consonant",
    "upper_prob",
    "lower_prob",
    "UpperLowerPair",
    "upper_table",
    "MassFunction",
    "mass_from_belief",
    "FocalSet",
    "focal_elements",
    "Witness",
    "CheckResult",
    "check_k_monotone",
    "check_k_alternating",
    "Cloud",
    "cloud_gamma",
    "tropical_sum",
]

#: float slack below which a capacity inequality counts as a tie
_FLOAT_TIE = 1e-9


def is_consonant(c: Contour) -> bool:
    """True when the contour attains 1 somewhere."""
    return c.max_value() == 1


def _require_consonant(c: Contour):
    if not is_consonant(c):
        raise NonConsonantContour(
            "contour does not attain 1; apply an adjustment first"
        )


def _check_event(c: Contour, event: Event):
    if event.space_size != c.size:
        raise ValueError("event does not belong to the contour's space")


def upper_prob(c: Contour, event: Event) -> Scalar:
    """Possibility of an event: max of the contour over it."""
    _require_consonant(c)
    _check_event(c, event)
    if len(event) == 0:
        return zero_like(c.values)
    return max(c.values[i] for i in event.indices)


def lower_prob(c: Contour, event: Event) -> Scalar:
    """Necessity of an event, dual to :func:`upper_prob`."""
    return 1 - upper_prob(c, complement(event))


def upper_table(c: Contour) -> list:
    """Possibility of every event, indexed by bitmask.  O(2^K)."""
    _require_consonant(c)
    if c.size > MAX_ENUM:
        raise SpaceTooLarge(f"2^{c.size} events exceed the enumeration budget")
    return _max_table(c.values)


@dataclass
class UpperLowerPair:
    """A contour's possibility/necessity pair with per-event memoization.

    Repeated queries against the same contour (region sweeps, credal
    membership over many events) hit the cache; the cache key is the event
    bitmask, so two ``Event`` objects naming the same subset share an entry.
    """

    contour: Contour
    cache: dict = None

    def __post_init__(self):
        _require_consonant(self.contour)
        if self.cache is None:
            self.cache = {}

    def upper(self, event: Event) -> Scalar:
        _check_event(self.contour, event)
        key = event.mask
        if key not in self.cache:
            self.cache[key] = upper_prob(self.contour, event)
        return self.cache[key]

    def lower(self, event: Event) -> Scalar:
        return 1 - self.upper(complement(event))


def _max_table(values: Sequence[Scalar]) -> list:
    k = len(values)
    table = [zero_like(values)] * (1 << k)
    for m in range(1, 1 << k):
        low = (m & -m).bit_length() - 1
        table[m] = max(table[m & (m - 1)], values[low])
    return table


@dataclass(frozen=True)
class MassFunction:
    """Moebius masses of a belief function, keyed by focal event."""

    space_size: int
    masses: dict

    def __post_init__(self):
        for ev, m in self.masses.items():
            if ev.space_size != self.space_size:
                raise ValueError("focal event from a different space")
            if len(ev) == 0:
                raise ValueError("empty set cannot carry mass")
            if m <= 0:
                raise NegativeMass(f"mass {m} at {ev.indices} must be positive")
        total = sum(self.masses.values())
        exact = all_rational(self.masses.values())
        if (exact and total != 1) or (not exact and abs(total - 1) > _FLOAT_TIE):
            raise ValueError(f"masses sum to {total}, expected 1")

    def belief(self, event: Event) -> Scalar:
        """Total mass of focal events inside ``event``."""
        target = set(event.indices)
        vals = [m for ev, m in self.masses.items() if set(ev.indices) <= target]
        return sum(vals) if vals else zero_like(self.masses.values())

    def plausibility(self, event: Event) -> Scalar:
        """Total mass of focal events hitting ``event``."""
        target = set(event.indices)
        vals = [m for ev, m in self.masses.items() if set(ev.indices) & target]
        return sum(vals) if vals else zero_like(self.masses.values())


def mass_from_belief(bel: Callable[[Event], Scalar], space) -> MassFunction:
    """Moebius inversion m(A) = sum_{B subset A} (-1)^|A-B| bel(B).

    ``bel`` is evaluated once per event; the alternating sum is done by the
    in-place subset transform, O(K * 2^K).  Exact when ``bel`` returns
    rationals.  Raises :class:`NegativeMass` when the input is not a belief
    function (some mass comes out negative beyond float noise).
    """
    k = space.size
    if k > MAX_ENUM:
        raise SpaceTooLarge(f"2^{k} events exceed the enumeration budget")
    f = [bel(Event.from_mask(m, k)) for m in range(1 << k)]
    exact = all_rational(f)
    if (exact and f[0] != 0) or (not exact and abs(f[0]) > _FLOAT_TIE):
        raise ValueError("bel(empty) must be 0")
    full = (1 << k) - 1
    if (exact and f[full] != 1) or (not exact and abs(f[full] - 1) > _FLOAT_TIE):
        raise ValueError("bel(full space) must be 1")

    for j in range(k):
        bit = 1 << j
        for m in range(1 << k):
            if m & bit:
                f[m] = f[m] - f[m ^ bit]

    floor = 0 if exact else -1e-12
    masses = {}
    for m in range(1, 1 << k):
        val = f[m]
        if val < floor:
            raise NegativeMass(
                f"mass {val} at mask {m:b}; input is not a belief function"
            )
        if (exact and val > 0) or (not exact and val > 1e-12):
            masses[Event.from_mask(m, k)] = val
    return MassFunction(k, masses)


@dataclass(frozen=True)
class FocalSet:
    """Focal events of a mass function, sorted by cardinality then indices."""

    elements: tuple[Event, ...]
    nested: bool


def focal_elements(m: MassFunction) -> FocalSet:
    """Focal events plus whether they form a nested chain.

    Nestedness of the focal set is exactly consonance of the induced
    plausibility; sorting by cardinality makes the chain check a single
    pass over consecutive pairs.
    """
    elems = sorted(m.masses, key=lambda e: (len(e), e.indices))
    nested = all(a.issubset(b) for a, b in zip(elems, elems[1:]))
    return FocalSet(tuple(elems), nested)


@dataclass(frozen=True)
class Witness:
    """First violating collection found by a capacity check."""

    target: Event
    collection: tuple[Event, ...]
    lhs: Scalar
    rhs: Scalar


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    k: int
    kind: str
    witness: Witness | None = None

    def __bool__(self) -> bool:
        return self.ok


def _submasks(mask: int) -> list[int]:
    out = []
    s = mask
    while True:
        out.append(s)
        if s == 0:
            break
        s = (s - 1) & mask
    out.reverse()
    return out


def _collection_rhs(table, combo_masks, combine) -> Scalar:
    total = 0
    j = len(combo_masks)
    for r in range(1, j + 1):
        sign = 1 if r % 2 else -1
        for chosen in combinations(combo_masks, r):
            m = chosen[0]
            for x in chosen[1:]:
                m = combine(m, x)
            total = total + sign * table[m]
    return total


def _scan_capacity(table, k: int, space_size: int, alternating: bool):
    """Shared sweep for the k-monotone / k-alternating checks.

    Targets in cardinality-then-lexicographic order; for each target the
    admissible pool is its subsets (monotone) or supersets (alternating),
    and every combination of 1..k distinct pool events is tested with the
    inclusion-exclusion bound.  Numpy evaluates whole combination blocks;
    rational capacities are rescaled to a common integer denominator so the
    comparison is exact, float capacities treat violations within 1e-9 as
    ties.  Returns the first violation as (target, combo_masks) or None.
    """
    full = (1 << space_size) - 1
    scaled = common_integers(table)
    if scaled is not None:
        arr = np.array(scaled[0], dtype=np.int64)
        tol = 0
    else:
        arr = np.array([float(v) for v in table])
        tol = _FLOAT_TIE

    targets = sorted(range(full + 1), key=lambda m: (bin(m).count("1"), m))
    for a in targets:
        if alternating:
            pool = [a | x for x in _submasks(full ^ a)]
        else:
            pool = _submasks(a)
        pool_arr = np.array(pool, dtype=np.int64)
        for j in range(1, k + 1):
            if j > len(pool):
                break
            combos = np.fromiter(
                (i for c in combinations(range(len(pool)), j) for i in c),
                dtype=np.int64,
            ).reshape(-1, j)
            masks = pool_arr[combos]
            rhs = np.zeros(len(combos), dtype=arr.dtype)
            for r in range(1, j + 1):
                sign = 1 if r % 2 else -1
                for cols in combinations(range(j), r):
                    m = masks[:, cols[0]]
                    for col in cols[1:]:
                        m = (m | masks[:, col]) if alternating else (m & masks[:, col])
                    rhs = rhs + sign * arr[m]
            if alternating:
                bad = arr[a] > rhs + tol
            else:
                bad = arr[a] < rhs - tol
            hits = np.flatnonzero(bad)
            if hits.size:
                first = int(hits[0])
                return a, tuple(int(m) for m in masks[first])
    return None


def _run_check(nu, k, space, alternating: bool) -> CheckResult:
    if space.size > 6:
        raise BudgetExceeded("capacity checks support at most 6 outcomes")
    if not 2 <= k <= 4:
        raise BudgetExceeded("capacity checks support 2 <= k <= 4")
    table = [nu(Event.from_mask(m, space.size)) for m in range(1 << space.size)]
    kind = "alternating" if alternating else "monotone"
    found = _scan_capacity(table, k, space.size, alternating)
    if found is None:
        return CheckResult(True, k, kind)
    a_mask, combo_masks = found
    combine = (lambda x, y: x | y) if alternating else (lambda x, y: x & y)
    rhs = _collection_rhs(table, combo_masks, combine)
    witness = Witness(
        target=Event.from_mask(a_mask, space.size),
        collection=tuple(Event.from_mask(m, space.size) for m in combo_masks),
        lhs=table[a_mask],
        rhs=rhs,
    )
    return CheckResult(False, k, kind, witness)


def check_k_monotone(nu: Callable[[Event], Scalar], k: int, space) -> CheckResult:
    """Test nu(A) >= sum_I (-1)^(|I|+1) nu(intersection of A_i in I).

    Collections range over distinct subsets A_i of each target A, sizes 1
    through k; size 1 is plain monotonicity.  Budget: K <= 6, k <= 4.
    """
    return _run_check(nu, k, space, alternating=False)


def check_k_alternating(nu: Callable[[Event], Scalar], k: int, space) -> CheckResult:
    """Test nu(A) <= sum_I (-1)^(|I|+1) nu(union of A_i in I).

    Dual of :func:`check_k_monotone`: collections range over distinct
    supersets A_i of each target A.  Budget: K <= 6, k <= 4.
    """
    return _run_check(nu, k, space, alternating=True)


@dataclass(frozen=True)
class Cloud:
    """Thin pair of contours gamma <= pi with min gamma = 0, max pi = 1."""

    gamma: Contour
    pi: Contour

    def __post_init__(self):
        if self.gamma.space != self.pi.space:
            raise ValueError("cloud contours must share a space")
        pairs = zip(self.gamma.values, self.pi.values)
        if any(g > p for g, p in pairs):
            raise ValueError("need gamma <= pi pointwise")
        if min(self.gamma.values) != 0:
            raise ValueError("gamma must vanish somewhere")
        if max(self.pi.values) != 1:
            raise ValueError("pi must attain 1")


def cloud_gamma(c: Contour) -> Cloud:
    """Lower contour gamma(y) = pi(y) if pi(y) <= 1/2 else 1 - pi(y).

    Pairs the contour with a lower bound that vanishes wherever pi attains
    1, giving a cloud representation of the same uncertainty.
    """
    _require_consonant(c)
    half = Fraction(1, 2)
    gamma = tuple(v if v <= half else 1 - v for v in c.values)
    return Cloud(Contour(c.space, gamma, provenance="analytic"), c)


def tropical_sum(values: Sequence[Scalar]) -> Scalar:
    """Max of the values; the additive operation of the tropical semiring."""
    vals = list(values)
    if not vals:
        raise EmptyList("tropical sum of an empty collection")
    return max(vals)
