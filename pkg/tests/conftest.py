import itertools

import pytest

from locale_forge.lattice import FiniteLattice, FinitePoset, MonotoneMap, downsets


@pytest.fixture
def two_chain():
    return FiniteLattice.from_poset(FinitePoset.from_pairs(["0", "1"], [(0, 1)]))


@pytest.fixture
def three_chain():
    return FiniteLattice.from_poset(FinitePoset.from_pairs(["0", "m", "1"], [(0, 1), (1, 2)]))


@pytest.fixture
def four_boolean():
    return downsets(FinitePoset.from_pairs(["a", "b"], []))


@pytest.fixture
def swap_closure(four_boolean):
    """The closure generated by swapping the two atoms."""
    from locale_forge.lattice import kleene_closure

    L = four_boolean
    idx = {e: i for i, e in enumerate(L.elements)}
    swap = {"{}": "{}", "{a}": "{b}", "{b}": "{a}", "{a,b}": "{a,b}"}
    j = MonotoneMap(L, L, tuple(idx[swap[e]] for e in L.elements))
    return kleene_closure(j)


def all_monotone_maps(src: FiniteLattice, tgt: FiniteLattice):
    """Brute-force enumeration of every monotone map, for adjoint oracles."""
    for table in itertools.product(range(tgt.n), repeat=src.n):
        ok = all(
            tgt.leq(table[i], table[j])
            for i in range(src.n)
            for j in range(src.n)
            if src.leq(i, j)
        )
        if ok:
            yield MonotoneMap(src, tgt, table)


def galois_left_oracle(f: MonotoneMap):
    """The unique l with l(b) <= a iff b <= f(a), found by exhaustive scan."""
    hits = [
        l
        for l in all_monotone_maps(f.target, f.source)
        if all(
            f.source.leq(l(b), a) == f.target.leq(b, f(a))
            for a in range(f.source.n)
            for b in range(f.target.n)
        )
    ]
    assert len(hits) <= 1
    return hits[0] if hits else None


def galois_right_oracle(f: MonotoneMap):
    hits = [
        r
        for r in all_monotone_maps(f.target, f.source)
        if all(
            f.source.leq(a, r(b)) == f.target.leq(f(a), b)
            for a in range(f.source.n)
            for b in range(f.target.n)
        )
    ]
    assert len(hits) <= 1
    return hits[0] if hits else None
