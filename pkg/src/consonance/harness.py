"""Monte-Carlo check of the finite-sample coverage guarantee.

Each trial draws n+1 points from an exchangeable process, transduces the
first n over a candidate set containing the held-out point, and records
whether the held-out point falls in the strict-cut region at level alpha.
The guarantee says the hit rate is at least 1 - alpha for every n and
every exchangeable process; a cell passes when the empirical coverage
stays above (1 - alpha) - 3 * standard error.

Families: iid categorical, iid Gaussian, iid Poisson, and a Polya urn with
unit reinforcement -- exchangeable but not independent.  Urn draws are
generated through their de Finetti representation (a Dirichlet-distributed
latent pmf followed by iid draws), which is distributionally exact and
vectorizes.

Label data transduces over the label space directly.  Numeric data uses
201 grid candidates spanning sample mean +/- 6 sample sd plus the held-out
point itself; the center candidate sits at the sample mean, so the raw
contour attains 1 there up to float rounding.  On the rare trial where
rounding leaves the maximum below 1, the argmax is lifted to 1 (the
sharper consonance adjustment), which only enlarges the region and keeps
the bound conservative.  Membership is then evaluated through the real
region code paths for both the plain cut and the possibilistic cut, and
the two are asserted identical trial by trial.

Per-trial generators are seeded with (master seed, trial index), so trials
are order-independent and may run on a thread pool; CONSONANCE_THREADS
caps the worker count (default 1).
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import sqrt

import numpy as np

from .errors import UnknownLabel
from .outcome import FiniteOutcomeSpace
from .region import cpr, ihdr_cut
from .transducer import (
    Contour,
    NonconformityMeasure,
    _sweep_mean_abs_grid,
    adjust_double_prime,
    conformal_transducer,
    transduce_grid,
)

__all__ = [
    "ProcessSpec",
    "CoverageReport",
    "run_coverage",
    "run_uniformity_sweep",
    "worker_count",
]

_FAMILIES = ("iid-categorical", "iid-gaussian", "iid-poisson", "polya-urn")
_LABEL_FAMILIES = ("iid-categorical", "polya-urn")

_GRID_POINTS = 201
_GRID_SDS = 6.0


@dataclass(frozen=True)
class ProcessSpec:
    """Exchangeable data-generating process for the harness."""

    family: str
    weights: tuple = ()       # iid-categorical
    labels: tuple = ()        # label families; defaults to c0, c1, ...
    mu: float = 0.0           # iid-gaussian
    sigma: float = 1.0
    lam: float = 1.0          # iid-poisson
    counts: tuple = ()        # polya-urn initial composition

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        object.__setattr__(self, "weights", tuple(self.weights))
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "counts", tuple(self.counts))
        if self.family == "iid-categorical":
            if not self.weights:
                raise ValueError("categorical family needs weights")
            if any(w < 0 for w in self.weights):
                raise ValueError("weights must be nonnegative")
            if abs(sum(self.weights) - 1) > 1e-9:
                raise ValueError("weights must sum to 1")
            self._check_labels(len(self.weights))
        elif self.family == "polya-urn":
            if not self.counts:
                raise ValueError("urn family needs initial counts")
            if any(c <= 0 or c != int(c) for c in self.counts):
                raise ValueError("urn counts must be positive integers")
            self._check_labels(len(self.counts))
        elif self.family == "iid-gaussian":
            if not self.sigma > 0:
                raise ValueError("sigma must be positive")
        elif not self.lam > 0:
            raise ValueError("lambda must be positive")

    def _check_labels(self, k: int):
        if self.labels and len(self.labels) != k:
            raise ValueError("labels and parameters disagree on K")

    @property
    def is_label(self) -> bool:
        return self.family in _LABEL_FAMILIES

    def label_space(self) -> FiniteOutcomeSpace:
        if not self.is_label:
            raise ValueError(f"{self.family} is not a label family")
        k = len(self.weights) if self.family == "iid-categorical" else len(self.counts)
        labels = self.labels or tuple(f"c{i}" for i in range(k))
        return FiniteOutcomeSpace(labels)

    def draw(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """One exchangeable sequence: label index array or float array."""
        if self.family == "iid-categorical":
            return rng.choice(len(self.weights), size=size, p=np.array(self.weights, float))
        if self.family == "polya-urn":
            theta = rng.dirichlet(np.array(self.counts, float))
            return rng.choice(len(self.counts), size=size, p=theta)
        if self.family == "iid-gaussian":
            return rng.normal(self.mu, self.sigma, size=size)
        return rng.poisson(self.lam, size=size).astype(float)

    def to_json(self) -> dict:
        if self.family == "iid-categorical":
            out = {"family": self.family, "weights": list(self.weights)}
            if self.labels:
                out["labels"] = list(self.labels)
            return out
        if self.family == "polya-urn":
            out = {"family": self.family, "counts": list(self.counts)}
            if self.labels:
                out["labels"] = list(self.labels)
            return out
        if self.family == "iid-gaussian":
            return {"family": self.family, "mu": self.mu, "sigma": self.sigma}
        return {"family": self.family, "lambda": self.lam}

    @classmethod
    def from_json(cls, obj: dict) -> "ProcessSpec":
        family = obj["family"]
        if family == "iid-categorical":
            return cls(family, weights=tuple(obj["weights"]), labels=tuple(obj.get("labels", ())))
        if family == "polya-urn":
            return cls(family, counts=tuple(obj["counts"]), labels=tuple(obj.get("labels", ())))
        if family == "iid-gaussian":
            return cls(family, mu=float(obj["mu"]), sigma=float(obj["sigma"]))
        if family == "iid-poisson":
            return cls(family, lam=float(obj["lambda"]))
        raise ValueError(f"unknown family {family!r}")


@dataclass(frozen=True)
class CoverageReport:
    family: str
    n: int
    alpha: float
    trials: int
    hits: int
    empirical_coverage: float
    standard_error: float
    passed: bool


def worker_count() -> int:
    """Thread budget from CONSONANCE_THREADS; at least 1."""
    raw = os.environ.get("CONSONANCE_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _default_psi(spec: ProcessSpec) -> NonconformityMeasure:
    if spec.is_label:
        return NonconformityMeasure.one_minus_emp()
    return NonconformityMeasure.mean_abs()


def _check_psi(spec: ProcessSpec, psi: NonconformityMeasure):
    if psi.kind == "one-minus-empirical-pmf" and not spec.is_label:
        raise ValueError(f"{psi.kind} needs a label family, got {spec.family}")
    if psi.kind == "mean-abs-distance" and spec.is_label:
        raise ValueError(f"{psi.kind} needs a numeric family, got {spec.family}")


def _label_trial(spec, space, n, alpha, psi, rng) -> bool:
    seq = spec.draw(rng, n + 1)
    data = tuple(space.labels[i] for i in seq[:n])
    held = int(seq[n])
    contour = transduce_grid(data, space, psi).contour
    return _member_both_ways(contour, held, alpha)


def _numeric_trial(spec, n, alpha, psi, rng) -> bool:
    seq = spec.draw(rng, n + 1)
    data, held = seq[:n], float(seq[n])
    if n == 0:
        space = FiniteOutcomeSpace((held,))
        contour = Contour(space, (Fraction(1),), provenance="raw")
        return _member_both_ways(contour, 0, alpha)

    mean = float(data.mean())
    sd = float(data.std(ddof=1)) if n > 1 else 1.0
    span = _GRID_SDS * sd if sd > 0 else 1.0
    cands = np.linspace(mean - span, mean + span, _GRID_POINTS)
    if held not in set(cands.tolist()):
        cands = np.append(cands, held)
    held_idx = int(np.nonzero(cands == held)[0][0])

    if psi.kind == "mean-abs-distance":
        counts = _sweep_mean_abs_grid(data, cands)
        values = tuple(Fraction(int(k), n + 1) for k in counts)
    else:
        values = tuple(conformal_transducer(data, c, psi) for c in cands)
    space = FiniteOutcomeSpace(tuple(float(c) for c in cands))
    contour = Contour(space, values, provenance="raw")
    return _member_both_ways(contour, held_idx, alpha)


def _member_both_ways(contour: Contour, held_idx: int, alpha) -> bool:
    if contour.max_value() != 1:
        contour = adjust_double_prime(contour)
    in_cpr = held_idx in cpr(contour, alpha).event
    in_cut = held_idx in ihdr_cut(contour, alpha).event
    if in_cpr != in_cut:
        raise AssertionError("strict-cut and possibilistic-cut membership differ")
    return in_cpr


def run_coverage(
    spec: ProcessSpec,
    n: int,
    alpha: float,
    psi: NonconformityMeasure | None,
    trials: int,
    seed,
) -> CoverageReport:
    """Coverage of the level-alpha region over seeded Monte-Carlo trials.

    Each trial checks the held-out point through both region constructions
    and counts a hit when it is covered.  Pass means empirical coverage at
    least (1 - alpha) - 3 * standard error; that reading is meaningful for
    trials >= 1000.  Deterministic for a given (spec, n, alpha, seed),
    independent of worker count.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if trials < 1:
        raise ValueError("need at least one trial")
    if not 0 <= alpha < 1:
        raise ValueError(f"alpha must lie in [0, 1), got {alpha}")
    psi = _default_psi(spec) if psi is None else psi
    _check_psi(spec, psi)
    space = spec.label_space() if spec.is_label else None

    def one_trial(t: int) -> bool:
        rng = np.random.default_rng(np.random.SeedSequence((int(seed), t)))
        if spec.is_label:
            return _label_trial(spec, space, n, alpha, psi, rng)
        return _numeric_trial(spec, n, alpha, psi, rng)

    workers = worker_count()
    if workers == 1:
        hits = sum(one_trial(t) for t in range(trials))
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            hits = sum(pool.map(one_trial, range(trials), chunksize=64))

    coverage = hits / trials
    se = sqrt(coverage * (1 - coverage) / trials)
    return CoverageReport(
        family=spec.family,
        n=n,
        alpha=float(alpha),
        trials=trials,
        hits=int(hits),
        empirical_coverage=coverage,
        standard_error=se,
        passed=coverage >= (1 - alpha) - 3 * se,
    )


def run_uniformity_sweep(
    specs, ns, alphas, psi, trials: int, seed
) -> list[CoverageReport]:
    """One :func:`run_coverage` report per (spec, n, alpha) cell.

    The master seed is passed to every cell unchanged, so a single-cell
    sweep reproduces run_coverage exactly; cells are deterministic and
    order-independent.
    """
    return [
        run_coverage(spec, n, alpha, psi, trials, seed)
        for spec, n, alpha in product(specs, ns, alphas)
    ]
