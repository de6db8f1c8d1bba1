"""Numerical transport of hyperlogarithm word systems.

Hyperlogarithms with letters dz/(z - b_k) satisfy a triangular linear ODE:
the derivative of the value of a word is the first letter's form times the
value of the word with that letter removed. This module integrates the full
word-indexed system along straight segments (or along pullbacks of planar
segments under the embedded first integrals) with a fixed-step fourth-order
scheme, doubling the step count until the values stabilize; the reported
error estimate is never below the observed halving discrepancy.

The five-integral planar web (x, y, x/y, (1-x)/(1-y), x(1-y)/(y(1-x))) is
embedded alongside its fiber tables so the weight-2 functional identity can
be checked at rank 4; the rank-5 ten-term identity reuses the embedded web
data of the dp4 module. In both cases the term signs come from the wedge
kernel certificate, aligned fiber-by-fiber, never from a hard-coded list.
"""

from __future__ import annotations

import itertools
import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from ..incidence import enumerate_conics, enumerate_lines
from ..lattice import DivisorClass
from ..rep_theory import InternalError
from ..wedge_kernel import HlogCertificate, kernel_signs
from . import dp4
from .words import Word, WordCombination, asym

_MAX_WEIGHT = 5
_STEP_CAP = 1 << 17
_CLEARANCE_GRID = 1025


class PathTooClose(RuntimeError):
    """The integration path comes within delta of a branch point."""

    def __init__(self, delta: float, message: str) -> None:
        super().__init__(message)
        self.delta = delta


class QuadratureFailure(RuntimeError):
    """Step doubling hit the cap without meeting the tolerance."""


@dataclass(frozen=True)
class LogFormBasis:
    """Branch points b_1..b_s of the forms dz/(z - b_k); infinity implicit."""

    points: tuple[complex, ...]

    def __post_init__(self) -> None:
        pts = tuple(complex(p) for p in self.points)
        if len(set(pts)) != len(pts):
            raise ValueError("branch points must be pairwise distinct")
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return len(self.points)


@dataclass(frozen=True, eq=False)
class PathEvaluation:
    """Values of every word along one path, with a shared error estimate."""

    base: complex
    end: complex
    values: dict[Word, complex]
    error: float

    def value_of(self, combination: WordCombination) -> complex:
        total = 0j
        for w, c in combination:
            total += float(c) * self.values[w]
        return total


def _word_system(alphabet: int, max_weight: int):
    """Words of weight 1..max_weight with first-letter and suffix indices.

    Index 0 is the empty word; word k sits at index k+1. Suffixes are one
    letter shorter, so they always precede the words that extend them.
    """
    words: list[Word] = []
    index: dict[Word, int] = {(): 0}
    letters: list[int] = []
    parents: list[int] = []
    for weight in range(1, max_weight + 1):
        for w in itertools.product(range(alphabet), repeat=weight):
            index[w] = len(words) + 1
            words.append(w)
            letters.append(w[0])
            parents.append(index[w[1:]])
    return words, np.asarray(letters), np.asarray(parents)


def _rk4_run(
    coef_at: Callable[[np.ndarray], np.ndarray],
    letters: np.ndarray,
    parents: np.ndarray,
    n_steps: int,
) -> np.ndarray:
    h = 1.0 / n_steps
    grid = np.arange(n_steps) * h
    c0 = coef_at(grid)
    ch = coef_at(grid + h / 2)
    c1 = coef_at(grid + h)
    m = len(letters) + 1
    v = np.zeros(m, dtype=complex)
    v[0] = 1.0
    k = np.zeros((4, m), dtype=complex)
    for i in range(n_steps):
        a0 = c0[i][letters]
        ah = ch[i][letters]
        a1 = c1[i][letters]
        k[0, 1:] = a0 * v[parents]
        k[1, 1:] = ah * (v + (h / 2) * k[0])[parents]
        k[2, 1:] = ah * (v + (h / 2) * k[1])[parents]
        k[3, 1:] = a1 * (v + h * k[2])[parents]
        v = v + (h / 6) * (k[0] + 2 * k[1] + 2 * k[2] + k[3])
    return v


def _transport(
    coef_at: Callable[[np.ndarray], np.ndarray],
    letters: np.ndarray,
    parents: np.ndarray,
    tol: float,
    max_steps: int,
) -> tuple[np.ndarray, float]:
    n = 64
    prev = _rk4_run(coef_at, letters, parents, n)
    while True:
        n *= 2
        if n > max_steps:
            raise QuadratureFailure(
                f"no convergence below {tol:.1e} within {max_steps} steps"
            )
        cur = _rk4_run(coef_at, letters, parents, n)
        diff = float(np.max(np.abs(cur - prev)))
        if not math.isfinite(diff):
            raise QuadratureFailure("transport diverged (path too singular)")
        if diff < tol:
            scale = float(np.max(np.abs(cur)))
            return cur, max(diff, 3e-14 * (1.0 + scale))
        prev = cur


def _segment_clearance(
    base: complex, end: complex, points: Sequence[complex]
) -> float:
    seg = end - base
    norm2 = abs(seg) ** 2
    best = math.inf
    for p in points:
        if norm2 == 0.0:
            d = abs(p - base)
        else:
            t = ((p - base) * seg.conjugate()).real / norm2
            t = min(1.0, max(0.0, t))
            d = abs(p - (base + t * seg))
        best = min(best, d)
    return best


def evaluate_words(
    basis: LogFormBasis,
    base: complex,
    end: complex,
    max_weight: int,
    *,
    delta: float = 1e-3,
    tol: float = 1e-12,
    max_steps: int = _STEP_CAP,
) -> PathEvaluation:
    """Transport all words of weight <= max_weight along the segment.

    The segment must keep distance > delta from every branch point; `tol`
    is the step-halving stabilization target.
    """
    if not 1 <= max_weight <= _MAX_WEIGHT:
        raise ValueError(f"max_weight must be in 1..{_MAX_WEIGHT}")
    base = complex(base)
    end = complex(end)
    clearance = _segment_clearance(base, end, basis.points)
    if clearance <= delta:
        raise PathTooClose(
            delta, f"segment clearance {clearance:.3e} is not above {delta:.3e}"
        )
    pts = np.asarray(basis.points)
    seg = end - base

    def coef_at(t: np.ndarray) -> np.ndarray:
        z = base + t[:, None] * seg
        return seg / (z - pts[None, :])

    words, letters, parents = _word_system(len(basis), max_weight)
    v, err = _transport(coef_at, letters, parents, tol, max_steps)
    values: dict[Word, complex] = {(): 1.0 + 0j}
    for i, w in enumerate(words):
        values[w] = complex(v[i + 1])
    return PathEvaluation(base, end, values, err)


def ai3_cross_check(
    basis: LogFormBasis,
    base: complex,
    end: complex,
    *,
    delta: float = 1e-3,
    tol: float = 1e-12,
) -> float:
    """Discrepancy of the weight-3 antisymmetric value against its
    logarithm-times-weight-2 decomposition (must be at quadrature level)."""
    if len(basis) != 3:
        raise ValueError("the decomposition needs exactly three finite letters")
    pe = evaluate_words(basis, base, end, 3, delta=delta, tol=tol)
    lhs = pe.value_of(asym((0, 1, 2)))
    rhs = 0j
    for i in range(3):
        rest = tuple(k for k in range(3) if k != i)
        rhs += (-1) ** i * pe.values[(i,)] * pe.value_of(asym(rest))
    return abs(lhs - rhs / 3)


# The five-integral planar web: numerator/denominator coefficient tables
# over (x, y) and, for each integral, its conic class with the reducible
# fibers over 0, 1, infinity as pairs of line classes.
BOL_INTEGRALS: tuple[tuple[dict, dict], ...] = (
    ({(1, 0): 1}, {(0, 0): 1}),
    ({(0, 1): 1}, {(0, 0): 1}),
    ({(1, 0): 1}, {(0, 1): 1}),
    ({(0, 0): 1, (1, 0): -1}, {(0, 0): 1, (0, 1): -1}),
    ({(1, 0): 1, (1, 1): -1}, {(0, 1): 1, (1, 1): -1}),
)

BOL_FIBER_TABLE: tuple = (
    (
        (1, 0, 0, 0, -1),
        (
            ((1, -1, 0, 0, -1), (0, 1, 0, 0, 0)),
            ((1, 0, -1, 0, -1), (0, 0, 1, 0, 0)),
            ((1, 0, 0, -1, -1), (0, 0, 0, 1, 0)),
        ),
    ),
    (
        (1, 0, 0, -1, 0),
        (
            ((1, -1, 0, -1, 0), (0, 1, 0, 0, 0)),
            ((1, 0, -1, -1, 0), (0, 0, 1, 0, 0)),
            ((1, 0, 0, -1, -1), (0, 0, 0, 0, 1)),
        ),
    ),
    (
        (1, -1, 0, 0, 0),
        (
            ((1, -1, 0, 0, -1), (0, 0, 0, 0, 1)),
            ((1, -1, -1, 0, 0), (0, 0, 1, 0, 0)),
            ((1, -1, 0, -1, 0), (0, 0, 0, 1, 0)),
        ),
    ),
    (
        (1, 0, -1, 0, 0),
        (
            ((1, 0, -1, 0, -1), (0, 0, 0, 0, 1)),
            ((1, -1, -1, 0, 0), (0, 1, 0, 0, 0)),
            ((1, 0, -1, -1, 0), (0, 0, 0, 1, 0)),
        ),
    ),
    (
        (2, -1, -1, -1, -1),
        (
            ((1, -1, 0, 0, -1), (1, 0, -1, -1, 0)),
            ((1, -1, -1, 0, 0), (1, 0, 0, -1, -1)),
            ((1, -1, 0, -1, 0), (1, 0, -1, 0, -1)),
        ),
    ),
)


def bol_alignment() -> tuple[dp4.AlignmentEntry, ...]:
    """Match the five planar integrals to the rank-4 conic classes."""
    lt = enumerate_lines(4)
    conics = enumerate_conics(4, lt)
    cls_index = {c.cls: k for k, c in enumerate(conics)}
    entries = []
    for i, (cls, fibers) in enumerate(BOL_FIBER_TABLE):
        k = cls_index[DivisorClass(cls)]
        order = []
        for pair in fibers:
            a, b = sorted(lt.index[DivisorClass(p)] for p in pair)
            order.append((a, b))
        if sorted(order) != sorted(conics[k].fibers):
            raise InternalError(f"fiber table row {i + 1} does not match conic {k}")
        entries.append(dp4.AlignmentEntry(i, k, tuple(order), 2))
    if len({e.conic for e in entries}) != len(conics):
        raise InternalError("integrals do not exhaust the conic classes")
    return tuple(entries)


def aligned_certificate(
    r: int, alignment: Sequence[dp4.AlignmentEntry]
) -> tuple[HlogCertificate, tuple[int, ...]]:
    """Kernel certificate with fibers in spectrum order; signs per integral."""
    count = len(alignment)
    fiber_orders: list = [None] * count
    bases: list = [None] * count
    for e in alignment:
        fiber_orders[e.conic] = e.fiber_order
        bases[e.conic] = e.base
    cert = kernel_signs(r, fiber_orders=fiber_orders, bases=bases)
    by_integral = sorted(alignment, key=lambda e: e.integral)
    return cert, tuple(cert.epsilon[e.conic] for e in by_integral)


class _RationalMap:
    """Vectorized evaluation of one first integral along a planar segment."""

    __slots__ = ("num", "den", "grads")

    def __init__(self, num: dict, den: dict) -> None:
        self.num = _PolyEval(num)
        self.den = _PolyEval(den)
        self.grads = (
            (_PolyEval(dp4._pdiff(num, 0)), _PolyEval(dp4._pdiff(num, 1))),
            (_PolyEval(dp4._pdiff(den, 0)), _PolyEval(dp4._pdiff(den, 1))),
        )

    def along(self, start: tuple[complex, complex], stop: tuple[complex, complex]):
        """Return u(t), du/dt(t) callables on t arrays for the segment."""
        dx = stop[0] - start[0]
        dy = stop[1] - start[1]

        def at(t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
            x = start[0] + t * dx
            y = start[1] + t * dy
            n = self.num(x, y)
            d = self.den(x, y)
            (nx, ny), (dxp, dyp) = self.grads
            dn = nx(x, y) * dx + ny(x, y) * dy
            dd = dxp(x, y) * dx + dyp(x, y) * dy
            return n / d, (dn * d - n * dd) / (d * d)

        return at


class _PolyEval:
    __slots__ = ("ei", "ej", "c")

    def __init__(self, poly: dict) -> None:
        items = sorted(poly.items())
        self.ei = np.asarray([k[0] for k, _ in items], dtype=np.int64)
        self.ej = np.asarray([k[1] for k, _ in items], dtype=np.int64)
        self.c = np.asarray([complex(v) for _, v in items], dtype=complex)

    def __call__(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        if len(self.c) == 0:
            return np.zeros_like(x, dtype=complex)
        return (
            self.c * x[..., None] ** self.ei * y[..., None] ** self.ej
        ).sum(axis=-1)


@dataclass(frozen=True)
class NumericReport:
    """Per-sample residuals of the functional identity, with error budgets."""

    r: int
    samples: int
    tol: float
    seed: int | None
    gamma: Fraction | None
    pi: Fraction | None
    signs: tuple[int, ...]
    residuals: tuple[float, ...]
    error_budgets: tuple[float, ...]
    max_residual: float
    passed: bool


def _web(r: int, data: dp4.DP4Data | None):
    if r == 4:
        if data is not None:
            raise ValueError("the five-integral web has no parameters")
        maps = [_RationalMap(n, d) for n, d in BOL_INTEGRALS]
        letters = [(0j, 1 + 0j) for _ in maps]
        alignment = bol_alignment()
        return None, maps, letters, alignment, 2
    if r == 5:
        if data is None:
            data = dp4.dp4_data(Fraction(1, 3), Fraction(5, 2))
        maps = [_RationalMap(n, d) for n, d in data.integrals]
        letters = [tuple(complex(c) for c in row) for row in data.spectra]
        return data, maps, letters, dp4.conic_alignment(), 3
    raise ValueError("numeric verification covers ranks 4 and 5 only")


def _path_clear(
    m: _RationalMap,
    pts: Sequence[complex],
    start: tuple[complex, complex],
    stop: tuple[complex, complex],
    delta: float,
) -> bool:
    t = np.linspace(0.0, 1.0, _CLEARANCE_GRID)
    x = start[0] + t * (stop[0] - start[0])
    y = start[1] + t * (stop[1] - start[1])
    n = m.num(x, y)
    d = m.den(x, y)
    if np.min(np.abs(d)) <= 1e-12:
        return False
    u = n / d
    if np.max(np.abs(u)) >= 1.0 / delta:
        return False
    for b in pts:
        if np.min(np.abs(u - b)) <= delta:
            return False
    return True


def _draw_plan(
    rng: random.Random,
    maps: Sequence[_RationalMap],
    letters: Sequence[tuple[complex, ...]],
    samples: int,
    delta: float,
):
    def cpx(lo: float, hi: float, im_lo: float, im_hi: float) -> complex:
        return complex(rng.uniform(lo, hi), rng.uniform(im_lo, im_hi))

    for _ in range(100):
        xi = (cpx(-1.2, 1.2, 0.1, 0.9), cpx(-1.2, 1.2, -0.9, -0.1))
        probe = (xi[0] + 1e-6, xi[1] + 1e-6j)
        if all(
            _path_clear(m, pts, xi, probe, delta)
            for m, pts in zip(maps, letters)
        ):
            break
    else:
        raise PathTooClose(delta, "no admissible base point found")
    plan = []
    attempts = 0
    while len(plan) < samples:
        attempts += 1
        if attempts > 200 * samples:
            raise PathTooClose(delta, "could not sample enough clear endpoints")
        p = (
            xi[0] + cpx(-0.7, 0.7, -0.7, 0.7),
            xi[1] + cpx(-0.7, 0.7, -0.7, 0.7),
        )
        if all(
            _path_clear(m, pts, xi, p, delta) for m, pts in zip(maps, letters)
        ):
            plan.append((xi, p))
    return plan


def _sample_terms(
    maps: Sequence[_RationalMap],
    letters: Sequence[tuple[complex, ...]],
    xi: tuple[complex, complex],
    p: tuple[complex, complex],
    weight: int,
    quad_tol: float,
    max_steps: int,
) -> tuple[list[complex], list[float]]:
    """The per-integral antisymmetric values along one planar segment."""
    word = tuple(range(weight))
    combination = asym(word)
    terms: list[complex] = []
    errors: list[float] = []
    for m, pts in zip(maps, letters):
        at = m.along(xi, p)
        pts_arr = np.asarray(pts)

        def coef_at(t: np.ndarray, at=at, pts_arr=pts_arr) -> np.ndarray:
            u, du = at(t)
            return du[:, None] / (u[:, None] - pts_arr[None, :])

        words, larr, parr = _word_system(len(pts), weight)
        v, err = _transport(coef_at, larr, parr, quad_tol, max_steps)
        values: dict[Word, complex] = {(): 1.0 + 0j}
        for i, w in enumerate(words):
            values[w] = complex(v[i + 1])
        u0, _ = at(np.zeros(1))
        u1, _ = at(np.ones(1))
        pe = PathEvaluation(complex(u0[0]), complex(u1[0]), values, err)
        terms.append(pe.value_of(combination))
        errors.append(err)
    return terms, errors


def verify_identity_numeric(
    r: int,
    samples: int = 5,
    tol: float = 1e-6,
    *,
    data: dp4.DP4Data | None = None,
    seed: int | None = None,
    delta: float = 1e-3,
    quad_tol: float | None = None,
    threads: int = 1,
    max_steps: int = _STEP_CAP,
) -> NumericReport:
    """Check the rank-4 or rank-5 functional identity on random samples.

    Endpoints are drawn in a disk around a fixed admissible base point; each
    term is the antisymmetric combination of word values transported along
    the pullback of the planar segment under that first integral. The report
    carries per-sample residuals max|sum_i eps_i AI_i| / max_i|AI_i| and the
    propagated quadrature budgets; it passes iff the worst residual is below
    tol. Signs come from the aligned kernel certificate.
    """
    if samples < 1:
        raise ValueError("need at least one sample")
    data, maps, letters, alignment, weight = _web(r, data)
    if quad_tol is None:
        quad_tol = min(1e-11, tol * 1e-3)
    _, signs = aligned_certificate(r, alignment)
    rng = random.Random(seed)
    plan = _draw_plan(rng, maps, letters, samples, delta)

    def run(pair) -> tuple[float, float]:
        xi, p = pair
        terms, errors = _sample_terms(
            maps, letters, xi, p, weight, quad_tol, max_steps
        )
        scale = max(abs(t) for t in terms)
        total = sum(s * t for s, t in zip(signs, terms))
        return abs(total) / scale, sum(errors) / scale

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, plan))
    else:
        results = [run(pair) for pair in plan]
    residuals = tuple(res for res, _ in results)
    budgets = tuple(b for _, b in results)
    worst = max(residuals)
    return NumericReport(
        r=r,
        samples=samples,
        tol=tol,
        seed=seed,
        gamma=None if data is None else data.gamma,
        pi=None if data is None else data.pi,
        signs=signs,
        residuals=residuals,
        error_budgets=budgets,
        max_residual=worst,
        passed=worst < tol,
    )
