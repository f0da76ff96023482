"""The credal set of a consonant contour.

A consonant contour's upper probability dominates a convex set of
probability measures

    M = { P : P(A) <= upper(A) for every event A },

the credal set.  Membership is decided exhaustively over all 2^K events
(dominance on singletons is not enough for general capacities), or
equivalently via the strong-cut characterization: P is in M iff
P({pi > alpha}) >= 1 - alpha at every breakpoint alpha of the contour.
Both tests are exact on rational input; any float input switches the
comparisons to a 1e-12 slack so that boundary members survive rounding.

Extreme points come from the classic permutation construction: walk the
outcomes in some order and assign each the increment of the upper
probability over the prefix.  Consonance puts a point mass at any outcome
with contour value 1, which is why the minimum Shannon entropy over the
credal set is always zero here.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from math import log, sqrt

import numpy as np

from ._num import Scalar, all_rational, zero_like
from .errors import SpaceTooLarge, WrongDimension
from .outcome import Event
from .possibility import _require_consonant, upper_table
from .transducer import Contour

__all__ = [
    "ProbabilityVector",
    "in_credal_set",
    "prop2_membership",
    "extreme_points",
    "lower_entropy",
    "sample_credal",
    "ternary_coords",
]

_FLOAT_SLACK = 1e-12

#: extreme-point enumeration walks K! permutations
_MAX_PERMUTE = 8


@dataclass(frozen=True)
class ProbabilityVector:
    """Point of the probability simplex over an outcome space."""

    weights: tuple

    def __post_init__(self):
        w = tuple(self.weights)
        object.__setattr__(self, "weights", w)
        if not w:
            raise ValueError("need at least one weight")
        exact = all_rational(w)
        floor = 0 if exact else -_FLOAT_SLACK
        if any(v < floor for v in w):
            raise ValueError("weights must be nonnegative")
        total = sum(w)
        if exact:
            if total != 1:
                raise ValueError(f"weights sum to {total}, expected 1")
        elif abs(total - 1) > _FLOAT_SLACK:
            raise ValueError(f"weights sum to {total}, expected 1")

    @property
    def size(self) -> int:
        return len(self.weights)

    def prob(self, event: Event) -> Scalar:
        vals = [self.weights[i] for i in event.indices]
        return sum(vals) if vals else zero_like(self.weights)

    def as_floats(self) -> tuple[float, ...]:
        return tuple(float(v) for v in self.weights)


def _check_space(c: Contour, space):
    if space is not None and space != c.space:
        raise ValueError("space does not match the contour's space")


def _default_tol(c: Contour, p: ProbabilityVector) -> Scalar:
    if all_rational(c.values) and all_rational(p.weights):
        return 0
    return _FLOAT_SLACK


def _prob_table(weights) -> list:
    k = len(weights)
    table = [zero_like(weights)] * (1 << k)
    for m in range(1, 1 << k):
        low = (m & -m).bit_length() - 1
        table[m] = table[m & (m - 1)] + weights[low]
    return table


def in_credal_set(
    p: ProbabilityVector, c: Contour, space=None, tol: Scalar | None = None
) -> bool:
    """Exhaustive dominance check P(A) <= upper(A) over all 2^K events."""
    _check_space(c, space)
    if p.size != c.size:
        raise WrongDimension("vector and contour sizes differ")
    if tol is None:
        tol = _default_tol(c, p)
    up = upper_table(c)
    pt = _prob_table(p.weights)
    return all(pt[m] <= up[m] + tol for m in range(len(up)))


def prop2_membership(
    p: ProbabilityVector, c: Contour, space=None, tol: Scalar | None = None
) -> bool:
    """Strong-cut membership: P({pi > alpha}) >= 1 - alpha at breakpoints.

    The cut is a step function of alpha, so checking the contour's distinct
    values covers every level; agrees with :func:`in_credal_set` on all
    inputs (the two are dual descriptions of the same constraint set).
    """
    _check_space(c, space)
    if p.size != c.size:
        raise WrongDimension("vector and contour sizes differ")
    if tol is None:
        tol = _default_tol(c, p)
    _require_consonant(c)
    for alpha in set(c.values):
        mass = sum(w for w, v in zip(p.weights, c.values) if v > alpha)
        if mass < 1 - alpha - tol:
            return False
    return True


def extreme_points(c: Contour, space=None) -> list[ProbabilityVector]:
    """Vertices of the credal set via the permutation construction.

    For each outcome order the vector of prefix increments of the upper
    probability is an extreme point; all K! orders are walked and exact
    duplicates (1e-12 duplicates on the float path) dropped.  K <= 8.
    """
    _check_space(c, space)
    if c.size > _MAX_PERMUTE:
        raise SpaceTooLarge(f"{c.size}! permutations exceed the budget")
    up = upper_table(c)
    exact = all_rational(c.values)
    seen = set()
    out = []
    for order in permutations(range(c.size)):
        weights = [zero_like(c.values)] * c.size
        prefix = 0
        prev = zero_like(c.values)
        for i in order:
            prefix |= 1 << i
            cur = up[prefix]
            weights[i] = cur - prev
            prev = cur
        key = tuple(weights) if exact else tuple(round(float(w), 12) for w in weights)
        if key not in seen:
            seen.add(key)
            out.append(ProbabilityVector(tuple(weights)))
    return out


def lower_entropy(c: Contour, space=None) -> float:
    """Minimum Shannon entropy (nats) over the credal set.

    Entropy is concave, so the minimum over a polytope sits at a vertex;
    consonance guarantees a point-mass vertex and hence a zero minimum,
    returned exactly as 0.0 on the rational path.
    """
    _check_space(c, space)
    best = None
    for p in extreme_points(c):
        h = -sum(float(w) * log(float(w)) for w in p.weights if w > 0)
        if best is None or h < best:
            best = h
    return best + 0.0  # turn -0.0 into 0.0


def sample_credal(c: Contour, space=None, count: int = 1, seed: int = 0) -> list[ProbabilityVector]:
    """Draw ``count`` members of the credal set, deterministically per seed.

    Uniform Dirichlet proposals filtered by membership; if a draw keeps
    missing (tiny credal sets), fall back to a random convex mixture of the
    extreme points, which is a member by construction.
    """
    _check_space(c, space)
    if count < 0:
        raise ValueError("count must be nonnegative")
    rng = np.random.default_rng(seed)
    ones = np.ones(c.size)
    extremes = None
    out = []
    for _ in range(count):
        vec = None
        for _ in range(64):
            w = rng.dirichlet(ones)
            cand = ProbabilityVector(tuple(float(x) for x in w))
            if in_credal_set(cand, c):
                vec = cand
                break
        if vec is None:
            if extremes is None:
                extremes = np.array(
                    [p.as_floats() for p in extreme_points(c)], dtype=float
                )
            lam = rng.dirichlet(np.ones(len(extremes)))
            w = lam @ extremes
            w = w / w.sum()  # numpy's dirichlet can sit one ulp off the simplex
            vec = ProbabilityVector(tuple(float(x) for x in w))
        out.append(vec)
    return out


def ternary_coords(p: ProbabilityVector) -> tuple[float, float]:
    """Barycentric embedding of a 3-outcome vector into the unit triangle.

    Vertices: outcome 0 -> (0,0), outcome 1 -> (1,0), outcome 2 ->
    (1/2, sqrt(3)/2); so x = w1 + w2/2 and y = w2 * sqrt(3)/2.
    """
    if p.size != 3:
        raise WrongDimension("ternary coordinates need exactly 3 outcomes")
    w0, w1, w2 = (float(v) for v in p.weights)
    return (w1 + 0.5 * w2, w2 * sqrt(3.0) / 2.0)
