import random
from math import factorial

import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from nch.algebra import builtin
from nch.cochains import (Cochain, InfiniteCochain, b_transpose, based_map, bianchi_defect, chern_forms,
                          cyclic_cohomology_dims, curvature, fbB_check, is_cyclic_cocycle, lambda_action,
                          leibniz_defect, pair, random_based_map, random_rcochain, supertrace_check,
                          supertrace_space, trace_functional, transgression_defect)
from nch.homology import cyclic_homology, dims

seeds = st.integers(0, 10 ** 6)


def _random_cochain(A, n, seed):
    rng = random.Random(seed)
    return Cochain.from_function(A, n, lambda t: mpq(rng.randint(-2, 2)))


@pytest.mark.parametrize("name", ["C2", "dual", "upper2"])
@given(seed=seeds)
def test_b_transpose_squares_to_zero(name, seed):
    f = _random_cochain(builtin(name), 1, seed)
    assert b_transpose(b_transpose(f)).is_zero()


@given(seed=seeds)
def test_lambda_has_order_n_plus_one(seed):
    f = _random_cochain(builtin("dual"), 2, seed)
    g = f
    for _ in range(3):
        g = lambda_action(g)
    assert g == f


def test_traces_are_cyclic_cocycles():
    assert is_cyclic_cocycle(trace_functional(builtin("C2"), [1, 5]))
    assert is_cyclic_cocycle(trace_functional(builtin("M2"), [2, 0, 0, 1]))
    # e12 e21 - e21 e12 = e11 - e22, which a non-trace weight does not kill
    assert not is_cyclic_cocycle(trace_functional(builtin("M2"), [0, 0, 0, 1]))


def test_pair_checks_degree():
    f = trace_functional(builtin("C2"), [1, 5])
    assert pair(f, {(1,): mpq(2)}) == 10
    with pytest.raises(ValueError):
        pair(f, {(0, 1): mpq(1)})


@pytest.mark.parametrize("name", ["C", "C2", "dual", "upper2"])
def test_cohomology_dims_match_homology(name):
    A = builtin(name)
    assert cyclic_cohomology_dims(A, 4) == dims(cyclic_homology(A, 4, "connes"))


@pytest.mark.parametrize("name", ["C", "dual"])
def test_supertrace_space_members_pass_all_tests(name):
    A = builtin(name)
    basis = supertrace_space(A, 4)
    assert basis
    for tau in basis:
        r = supertrace_check(tau)
        assert r["agree"] and all(r["verdicts"].values())
        assert all(fbB_check(tau, 3).values())


def test_non_supertrace_fails_every_characterization():
    A = builtin("C2")
    comps = [{0: mpq(1), 1: mpq(2)}, {0: mpq(1)}, {}, {}]
    r = supertrace_check(InfiniteCochain(A, 3, comps))
    assert r["agree"] and not any(r["verdicts"].values())


def test_odd_supertraces_skip_degree_zero():
    A = builtin("C2")
    odd = [t for t in supertrace_space(A, 4) if t.parity() == "odd"]
    assert odd
    for tau in odd:
        r = supertrace_check(tau)
        assert r["degree0_excluded"] and all(r["verdicts"].values())


@pytest.mark.parametrize("name", ["dual", "M2"])
@given(seed=seeds)
def test_bianchi_identity(name, seed):
    rho = random_based_map(builtin(name), builtin("M2"), seed)
    assert bianchi_defect(rho).is_zero()


@given(seed=seeds, p=st.integers(1, 2), q=st.integers(1, 2))
def test_leibniz_rule(seed, p, q):
    A, R = builtin("dual"), builtin("M2")
    f = random_rcochain(A, R, p, seed)
    g = random_rcochain(A, R, q, seed + 1)
    assert leibniz_defect(f, g).is_zero()


@given(seed=seeds)
def test_transgression_random(seed):
    rho = random_based_map(builtin("dual"), builtin("M2"), seed)
    for n in range(2):
        assert transgression_defect(rho, {0: mpq(2), 3: mpq(1)}, n).is_zero()


def test_curvature_vanishes_for_homomorphisms():
    # the identity map is multiplicative, so omega = 0
    A = builtin("M2")
    rho = based_map(A, A, [{k: mpq(1)} for k in range(A.dim)])
    assert curvature(rho).is_zero()


def test_unbased_map_rejected():
    A = builtin("dual")
    rho = based_map(A, A, [{0: mpq(2)}, {1: mpq(1)}])
    with pytest.raises(ValueError):
        curvature(rho)


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_cs_on_units(n):
    rho = random_based_map(builtin("C"), builtin("C"), 0)
    v = chern_forms(rho, {0: mpq(1)}, n)["cs"](*([0] * (2 * n + 1)))
    assert v == mpq(factorial(n), factorial(2 * n))


def test_chern_forms_are_cyclic():
    rho = random_based_map(builtin("dual"), builtin("M2"), 3)
    f = chern_forms(rho, {0: mpq(2), 3: mpq(1)}, 1)
    assert lambda_action(f["cs"]) == f["cs"]
    assert lambda_action(f["ch"]) == f["ch"]
