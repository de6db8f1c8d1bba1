"""Lines, conic classes and reducible fibers on a del Pezzo surface.

A degree 9 - r del Pezzo surface carries finitely many lines and finitely
many conic fibration classes; the Weyl group W(E_r) acts transitively on
both sets, so each is enumerated here as the orbit closure of one seed
(l_r for lines, h - l_1 for conics) under the fundamental reflections.

Each conic fibration has exactly r - 1 reducible fibers, and every
reducible fiber is a pair of lines meeting transversely in one point:
from l + l' = c, expanding (c, c) = 0 gives pair(l, l') = 1 for free.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .lattice import DelPezzoLattice, DivisorClass, SUPPORTED_RANKS

LINE_COUNTS = {3: 6, 4: 10, 5: 16, 6: 27, 7: 56, 8: 240}
CONIC_COUNTS = {3: 3, 4: 5, 5: 10, 6: 27, 7: 126, 8: 2160}


class UnsupportedRank(ValueError):
    """Rank outside 3..8 (or outside the range a routine can afford)."""


class FiberCountViolation(RuntimeError):
    """A conic fibration did not decompose into exactly r - 1 line pairs."""


@dataclass(frozen=True)
class LineTable:
    """The lines of X_r in canonical (lexicographic) order, with index map."""

    r: int
    lines: tuple[DivisorClass, ...]
    index: dict[DivisorClass, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "index", {l: i for i, l in enumerate(self.lines)})

    def __len__(self) -> int:
        return len(self.lines)


@dataclass(frozen=True)
class ConicFibration:
    """A conic class together with its r - 1 reducible fibers.

    Fibers are unordered pairs (i, j) of line-table indices with
    line_i + line_j = cls, stored sorted by (min, max).
    """

    cls: DivisorClass
    fibers: tuple[tuple[int, int], ...]


def _check_rank(r: int) -> None:
    if r not in SUPPORTED_RANKS:
        raise UnsupportedRank(f"rank must be in 3..8, got {r}")


def _orbit(lat: DelPezzoLattice, seed: DivisorClass) -> list[DivisorClass]:
    """Breadth-first closure of seed under the fundamental reflections."""
    seen = {seed}
    frontier = [seed]
    while frontier:
        nxt = []
        for d in frontier:
            for rho in lat.roots:
                image = lat.reflect(rho, d)
                if image not in seen:
                    seen.add(image)
                    nxt.append(image)
        frontier = nxt
    return sorted(seen)


def enumerate_lines(r: int) -> LineTable:
    """All lines of X_r, as the Weyl orbit of l_r, in canonical order."""
    _check_rank(r)
    lat = DelPezzoLattice(r)
    orbit = _orbit(lat, lat.exceptional(r))
    if len(orbit) != LINE_COUNTS[r]:
        raise RuntimeError(f"line orbit has size {len(orbit)}, expected {LINE_COUNTS[r]}")
    return LineTable(r, tuple(orbit))


def reducible_fibers(c: DivisorClass, lt: LineTable) -> list[tuple[int, int]]:
    """All unordered line-index pairs {i, j} with line_i + line_j = c.

    Found by partner lookup: for each line l the complementary class c - l
    either is a line (one dictionary probe) or contributes nothing. Exactly
    r - 1 pairs must exist for a conic class; anything else signals a broken
    enumeration.
    """
    pairs = []
    for i, line in enumerate(lt.lines):
        j = lt.index.get(c - line)
        if j is not None and i < j:
            pairs.append((i, j))
    if len(pairs) != lt.r - 1:
        raise FiberCountViolation(
            f"conic {c.coeffs} has {len(pairs)} reducible fibers, expected {lt.r - 1}"
        )
    return pairs


def enumerate_conics(r: int, lt: LineTable | None = None) -> list[ConicFibration]:
    """All conic fibrations of X_r, as the Weyl orbit of h - l_1.

    Classes come back in canonical (lexicographic) order, each with its
    reducible fibers resolved against the canonical line table.
    """
    _check_rank(r)
    lat = DelPezzoLattice(r)
    if lt is None:
        lt = enumerate_lines(r)
    orbit = _orbit(lat, lat.h - lat.exceptional(1))
    if len(orbit) != CONIC_COUNTS[r]:
        raise RuntimeError(f"conic orbit has size {len(orbit)}, expected {CONIC_COUNTS[r]}")
    return [ConicFibration(c, tuple(reducible_fibers(c, lt))) for c in orbit]
