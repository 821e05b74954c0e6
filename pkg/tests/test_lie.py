from itertools import permutations
from math import factorial

import pytest
from gmpy2 import mpq

from nch.algebra import builtin
from nch.lie import (ChainSpace, LieAlgebra, ResourceError, action_commutes, ce_homology, coinvariants,
                     cyclic_class_homology, permutation_side_dim, quasi_iso_check, stable_range_report,
                     tr_sigma, tr_sigma_invariance)


def _cycles(p):
    seen, c = set(), 0
    for i in range(len(p)):
        if i not in seen:
            c += 1
            while i not in seen:
                seen.add(i)
                i = p[i]
    return c


def _sign(p):
    return (-1) ** (len(p) - _cycles(p))


def _centralizer(p):
    n = len(p)
    comp = lambda a, b: tuple(a[b[i]] for i in range(n))
    return sum(1 for q in permutations(range(n)) if comp(q, p) == comp(p, q))


def character_count(d, n, signed):
    """dim of S_n-coinvariants of k[S_n] (x) V^(x)n (x) (sgn), dim V = d, by averaging characters."""
    tot = 0
    for p in permutations(range(n)):
        chi = _centralizer(p) * d ** _cycles(p)
        tot += (_sign(p) if signed else 1) * chi
    assert tot % factorial(n) == 0
    return tot // factorial(n)


@pytest.mark.parametrize("name", ["C", "C2"])
@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("signed", [True, False])
def test_permutation_side_against_characters(name, n, signed):
    A = builtin(name)
    assert permutation_side_dim(A, n, signed) == character_count(A.dim, n, signed)


def test_ce_homology_frozen():
    assert ce_homology(LieAlgebra.gl(builtin("C"), 1), range(3)) == {0: 1, 1: 1, 2: 0}
    # gl_1(dual) is abelian of dimension 2
    assert ce_homology(LieAlgebra.gl(builtin("dual"), 1), range(3)) == {0: 1, 1: 2, 2: 1}
    # gl_2 = sl_2 + k: exterior algebra on generators of degree 1 and 3
    assert ce_homology(LieAlgebra.gl(builtin("C"), 2), range(5)) == {0: 1, 1: 1, 2: 0, 3: 1, 4: 1}


def test_lie_of_m2_is_gl2():
    g = LieAlgebra.from_algebra(builtin("M2"))
    assert ce_homology(g, range(5)) == {0: 1, 1: 1, 2: 0, 3: 1, 4: 1}


@pytest.mark.parametrize("name", ["dual", "upper2"])
def test_gl2_axioms(name):
    assert all(LieAlgebra.gl(builtin(name), 2).check().values())


def test_action_commutes_with_differential():
    assert action_commutes(LieAlgebra.gl(builtin("dual"), 2), 2)


@pytest.mark.parametrize("a,r,n,want", [("C", 1, 1, 1), ("C", 2, 2, 0), ("C2", 2, 2, 2), ("C", 3, 3, 1)])
def test_exterior_coinvariants(a, r, n, want):
    rep = coinvariants(builtin(a), r, n)
    assert rep.equal and rep.lie_side == want


@pytest.mark.parametrize("a,r,n,want", [("C", 2, 2, 2), ("C2", 2, 2, 8), ("C", 3, 3, 6)])
def test_tensor_coinvariants(a, r, n, want):
    rep = coinvariants(builtin(a), r, n, power="tensor")
    assert rep.equal and rep.lie_side == want


def test_tensor_coinvariants_fail_below_stable_range():
    rep = coinvariants(builtin("C"), 1, 2, power="tensor")
    assert not rep.stable_range and not rep.equal


def test_tr_sigma_values():
    E = lambda p, q: [[mpq(int(a == p and b == q)) for b in range(2)] for a in range(2)]
    # tr(E12 E21) = 1, tr(E12) tr(E21) = 0
    assert tr_sigma(2, (1, 0), [E(0, 1), E(1, 0)]) == 1
    assert tr_sigma(2, (0, 1), [E(0, 1), E(1, 0)]) == 0


def test_tr_sigma_invariant():
    assert tr_sigma_invariance(2, 2)


def test_tr_sigma_independence_needs_r_at_least_n():
    rows = stable_range_report([(1, 2), (2, 2), (2, 3), (3, 3)])
    assert [row["independent"] for row in rows] == [False, True, False, True]
    assert all(row["independent"] == row["r>=n"] for row in rows)


def test_cyclic_class_subcomplex():
    rep = cyclic_class_homology(builtin("C"), 3)
    assert rep.ok and rep.homology_dims == [1, 0, 1] == rep.hc_dims
    with pytest.raises(ValueError):
        cyclic_class_homology(builtin("C"), 3, r=2)


def test_cyclic_class_subcomplex_dual():
    rep = cyclic_class_homology(builtin("dual"), 2)
    assert rep.ok and rep.hc_dims == [2, 0]


@pytest.mark.parametrize("name", ["C", "C2", "dual"])
def test_coinvariant_complex_quasi_isomorphic(name):
    assert quasi_iso_check(builtin(name), 2, range(3))["equal"]


def test_resource_cap(monkeypatch):
    monkeypatch.setenv("NCH_MAX_DIM", "50")
    with pytest.raises(ResourceError):
        ChainSpace(LieAlgebra.gl(builtin("C2"), 2), 3)
