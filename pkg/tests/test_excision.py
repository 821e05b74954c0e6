import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from nch.algebra import AlgebraError, Bimodule, builtin, direct_sum
from nch.excision import (ExtensionSpec, derivation_defects, excision_check, goodwillie_decomposition,
                          h_unitality, hochschild_with_coeffs, inner_acts_trivially, inner_derivation,
                          lie_derivative, ls_zero, reduced_cyclic)
from nch.forms import ConventionError
from nch.homology import dims, hochschild
from nch.linalg import SMat

EPS = SMat(2, 2, [{}, {1: mpq(1)}])


@pytest.mark.parametrize("name,want", [("M2", True), ("C2", True), ("C", True), ("strict_upper2", False)])
def test_h_unitality(name, want):
    r = h_unitality(builtin(name), 4)
    assert r["h_unital"] is want
    if not want:
        # b' vanishes identically on a square-zero algebra, so every degree survives
        assert r["dims"] == [1, 1, 1, 1]


def test_h_unitality_window_guard():
    with pytest.raises(ValueError):
        h_unitality(builtin("C"), 1)


@pytest.mark.parametrize("second", ["C", "M2"])
def test_split_extension_is_exact(second):
    S = direct_sum(builtin("C"), builtin(second))
    r = excision_check(ExtensionSpec.build(S, [{1: mpq(1)}]), 4)
    assert r["ok"]
    assert [a + b for a, b in zip(r["dims"]["I"], r["dims"]["A"])] == r["dims"]["R"]


def test_square_zero_ideal_breaks_excision():
    r = excision_check(ExtensionSpec.build(builtin("upper2"), [{1: mpq(1)}]), 4)
    assert not r["ok"]
    assert not all(r["connecting_dims"].values())
    assert r["dims"]["I"] == [1, 0, 1, 0, 1]


def test_goodwillie_weight_one_is_hochschild_with_coefficients():
    C = builtin("C")
    r = goodwillie_decomposition(C, Bimodule.regular(C), 1, 6)
    assert r["ok"] and r["weight1_is_C(A,M)"] and r["HH(A,M)"] == [1, 0, 0, 0, 0, 0]


@pytest.mark.parametrize("p", [1, 2, 3])
def test_goodwillie_lambda_convention(p):
    C = builtin("C")
    r = goodwillie_decomposition(C, Bimodule.regular(C), p, 6)
    assert r["ok"] and r["grading_preserved"]


def test_goodwillie_on_c2():
    A = builtin("C2")
    assert goodwillie_decomposition(A, Bimodule.regular(A), 2, 4)["ok"]


def test_goodwillie_unsigned_rotation_is_refused():
    C = builtin("C")
    with pytest.raises(ConventionError):
        goodwillie_decomposition(C, Bimodule.regular(C), 2, 6, convention="none")


@pytest.mark.parametrize("name", ["dual", "upper2", "C2"])
def test_coefficients_in_the_regular_bimodule(name):
    A = builtin(name)
    res, _ = hochschild_with_coeffs(A, Bimodule.regular(A), 5)
    assert dims(res)[:4] == dims(hochschild(A, 3))


@pytest.mark.parametrize("name,bar", [("dual", [1, 0, 1, 0, 1]), ("M2", [0, 0, 0, 0, 0]),
                                      ("upper2", [1, 0, 1, 0, 1])])
def test_reduced_cyclic_sequence(name, bar):
    r = reduced_cyclic(builtin(name), 4)
    assert r["ok"] and r["HCbar_A"] == bar


def test_reduced_cyclic_needs_unit():
    with pytest.raises(AlgebraError):
        reduced_cyclic(builtin("strict_upper2"))


def test_derivation_checks():
    assert derivation_defects(builtin("dual"), EPS) == []
    # the identity map is not a derivation: D(1) would have to vanish
    assert derivation_defects(builtin("dual"), SMat.identity(2))


@given(st.lists(st.integers(-3, 3), min_size=4, max_size=4))
def test_inner_derivations(xs):
    A = builtin("M2")
    x = {k: mpq(v) for k, v in enumerate(xs) if v}
    D = inner_derivation(A, x)
    assert derivation_defects(A, D) == []


@pytest.mark.parametrize("name", ["M2", "upper2"])
def test_inner_derivations_act_trivially(name):
    A = builtin(name)
    assert inner_acts_trivially(A, {1: mpq(1)}, 3)["ok"]


def test_lie_derivative_commutes_with_operators():
    assert lie_derivative(builtin("dual"), EPS, 4)["ok"]


def test_lie_derivative_kills_s_but_not_itself():
    r = ls_zero(builtin("dual"), EPS, 4)
    assert r["ok"]
    # L_D alone is nonzero on HC_0, HC_2, HC_4, so the vanishing after S is a real statement
    assert r["rank_L_D"] == {0: 1, 1: 0, 2: 1, 3: 0, 4: 1}
