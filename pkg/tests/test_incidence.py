import random
from collections import Counter

import pytest

from dp_hlog.incidence import (
    CONIC_COUNTS,
    LINE_COUNTS,
    FiberCountViolation,
    UnsupportedRank,
    enumerate_conics,
    enumerate_lines,
    reducible_fibers,
)
from dp_hlog.lattice import DelPezzoLattice, DivisorClass, pair


def test_line_counts() -> None:
    for r, expected in LINE_COUNTS.items():
        lt = enumerate_lines(r)
        assert len(lt) == expected
        assert len(set(lt.lines)) == expected


def test_lines_pass_predicate_and_are_sorted() -> None:
    for r in (3, 5, 8):
        lat = DelPezzoLattice(r)
        lt = enumerate_lines(r)
        assert all(lat.is_line(l) for l in lt.lines)
        assert list(lt.lines) == sorted(lt.lines)
        assert all(lt.index[l] == i for i, l in enumerate(lt.lines))


def test_r7_line_shapes() -> None:
    # By h-degree: 7 exceptional, 21 through two points, 21 conic-degree
    # duals, 7 cubics; the quoted partition is 7/21/21/7.
    lt = enumerate_lines(7)
    by_degree = Counter(l.coeffs[0] for l in lt.lines)
    assert by_degree == {0: 7, 1: 21, 2: 21, 3: 7}


def test_conic_counts() -> None:
    lines = {r: enumerate_lines(r) for r in range(3, 9)}
    for r, expected in CONIC_COUNTS.items():
        conics = enumerate_conics(r, lines[r])
        assert len(conics) == expected
        assert len({f.cls for f in conics}) == expected


def test_r7_conic_shapes() -> None:
    conics = enumerate_conics(7)
    by_degree = Counter(f.cls.coeffs[0] for f in conics)
    assert by_degree == {1: 7, 2: 35, 3: 42, 4: 35, 5: 7}


def test_conics_pass_predicate_in_canonical_order() -> None:
    lat = DelPezzoLattice(5)
    conics = enumerate_conics(5)
    assert all(lat.is_conic_class(f.cls) for f in conics)
    assert [f.cls for f in conics] == sorted(f.cls for f in conics)


def test_fiber_structure_all_ranks() -> None:
    for r in range(3, 9):
        lt = enumerate_lines(r)
        covered = set()
        for fib in enumerate_conics(r, lt):
            assert len(fib.fibers) == r - 1
            occurrences = [i for p in fib.fibers for i in p]
            assert len(set(occurrences)) == 2 * (r - 1)
            covered.update(occurrences)
            assert list(fib.fibers) == sorted(fib.fibers)
            for i, j in fib.fibers:
                assert lt.lines[i] + lt.lines[j] == fib.cls
                assert pair(lt.lines[i], lt.lines[j]) == 1
        # every line is a component of some reducible fiber
        assert covered == set(range(len(lt)))


def test_fibers_of_h_minus_l1() -> None:
    # For c = h - l1 the fibers are {h - l1 - lj, lj}, j = 2..r.
    for r in (4, 7):
        lat = DelPezzoLattice(r)
        lt = enumerate_lines(r)
        c = lat.h - lat.exceptional(1)
        fibers = reducible_fibers(c, lt)
        assert len(fibers) == r - 1
        expected = {
            frozenset((lat.exceptional(j), lat.h - lat.exceptional(1) - lat.exceptional(j)))
            for j in range(2, r + 1)
        }
        got = {frozenset((lt.lines[i], lt.lines[j])) for i, j in fibers}
        assert got == expected


def test_r7_degree_two_conic_fiber_shapes() -> None:
    # c = 2h - l1 - l2 - l3 - l4: three fibers split the four points into
    # two lines, three pair an exceptional line with a conic-degree line.
    lt = enumerate_lines(7)
    c = DivisorClass((2, -1, -1, -1, -1, 0, 0, 0))
    shapes = Counter(
        tuple(sorted((lt.lines[i].coeffs[0], lt.lines[j].coeffs[0])))
        for i, j in reducible_fibers(c, lt)
    )
    assert shapes == {(1, 1): 3, (0, 2): 3}


def test_non_conic_class_raises_fiber_count() -> None:
    lt = enumerate_lines(4)
    with pytest.raises(FiberCountViolation):
        reducible_fibers(DelPezzoLattice(4).h, lt)


def test_unsupported_rank() -> None:
    with pytest.raises(UnsupportedRank):
        enumerate_lines(9)
    with pytest.raises(UnsupportedRank):
        enumerate_conics(2)


def test_orbit_independent_of_generator_order() -> None:
    rng = random.Random(11)
    lat = DelPezzoLattice(5)
    reference = set(enumerate_lines(5).lines)
    for _ in range(3):
        roots = list(lat.roots)
        rng.shuffle(roots)
        seen = {lat.exceptional(5)}
        frontier = [lat.exceptional(5)]
        while frontier:
            nxt = []
            for d in frontier:
                for rho in roots:
                    image = lat.reflect(rho, d)
                    if image not in seen:
                        seen.add(image)
                        nxt.append(image)
            frontier = nxt
        assert seen == reference
