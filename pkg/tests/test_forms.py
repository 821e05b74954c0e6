import pytest
import sympy
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from nch.algebra import builtin
from nch.forms import (GradedChain, apply_operator, fedosov_product, form_d, form_product, forms, t_B_explicit,
                       tilde_block_check)
from nch.linalg import rank
from nch.suites import harmonic_identities, operator_identities

ALGS = ("C", "C2", "dual", "M2", "upper2")


@st.composite
def forms_of(draw, alg, max_deg=2, max_terms=3):
    d = alg.dim
    terms = {}
    for _ in range(draw(st.integers(1, max_terms))):
        n = draw(st.integers(0, max_deg))
        t = (draw(st.integers(0, d - 1)),) + tuple(draw(st.integers(1, d - 1)) for _ in range(n))
        terms[t] = terms.get(t, 0) + mpq(draw(st.integers(-3, 3)))
    return GradedChain(alg, terms, None)


def _deg(x):
    ds = x.degrees()
    assert len(ds) <= 1
    return ds[0] if ds else 0


@pytest.mark.parametrize("name", ALGS)
def test_reduced_form_dims(name):
    A = builtin(name)
    F = forms(A, 4)
    assert [F.space(n).dim for n in range(5)] == [A.dim * (A.dim - 1) ** n for n in range(5)]


@pytest.mark.parametrize("name", ["dual", "M2"])
@given(data=st.data())
def test_leibniz_rule(name, data):
    A = builtin(name)
    x = data.draw(forms_of(A, 2, 1))
    y = data.draw(forms_of(A, 2, 2))
    sign = -1 if _deg(x) % 2 else 1
    lhs = form_d(form_product(x, y))
    rhs = form_product(form_d(x), y) + form_product(x, form_d(y)) * sign
    assert lhs == rhs


@pytest.mark.parametrize("name", ["dual", "M2", "upper2"])
@given(data=st.data())
def test_products_associate(name, data):
    A = builtin(name)
    x, y, z = (data.draw(forms_of(A, 1, 2)) for _ in range(3))
    assert form_product(form_product(x, y), z) == form_product(x, form_product(y, z))
    f = lambda a, b: fedosov_product(a, b, 12)
    assert f(f(x, y), z) == f(x, f(y, z))


@pytest.mark.parametrize("name", ["dual", "M2"])
@given(data=st.data())
def test_b_against_definition(name, data):
    # b(w da) = (-1)^|w| (w a - a w), computed from the product alone
    A = builtin(name)
    n = data.draw(st.integers(1, 3))
    t = (data.draw(st.integers(0, A.dim - 1)),) + tuple(data.draw(st.integers(1, A.dim - 1)) for _ in range(n))
    w = GradedChain(A, {t[:-1]: mpq(1)}, None)
    a = GradedChain(A, {(t[-1],): mpq(1)}, None)
    want = (form_product(w, a) - form_product(a, w)) * (-1 if (n - 1) % 2 else 1)
    got = apply_operator("b", GradedChain(A, {t: mpq(1)}, n + 1))
    assert got.terms == want.terms


@pytest.mark.parametrize("name", ALGS)
def test_B_matches_explicit_formula(name):
    A = builtin(name)
    F = forms(A, 4)
    for n in range(4):
        sp, tgt = F.space(n), F.space(n + 1)
        for j, t in enumerate(sp.basis):
            assert tgt.terms(F.B(n).cols[j]) == t_B_explicit(t)


@pytest.mark.parametrize("name", ["C", "dual", "strict_upper2"])
def test_unitalization_blocks(name):
    rep = tilde_block_check(builtin(name), 3)
    for op in ("b", "d", "B", "kappa"):
        assert all(v == 0 for v in rep[op].values()), (op, rep[op])


def test_B_lower_left_is_the_full_norm():
    # the block is N = 1 + lambda + ... + lambda^n, not the partial sum from 1 to n-1
    rep = tilde_block_check(builtin("dual"), 3)
    assert rep["B"] == {0: 0, 1: 0, 2: 0}
    assert not all(rep["B_lower_left_vs_sum_1_to_n-1"].values())


@pytest.mark.parametrize("name", ["dual", "upper2"])
def test_harmonic_projection_rank_oracle(name):
    # P projects onto ker (kappa - 1)^2; its rank is the nullity of that matrix over sympy
    A = builtin(name)
    F = forms(A, 4)
    for n in range(4):
        K = sympy.Matrix([[sympy.Rational(int(x.numerator), int(x.denominator)) for x in row]
                          for row in F.kappa(n).to_dense()])
        E = (K - sympy.eye(K.rows)) ** 2
        assert rank(F.P(n)) == K.rows - E.rank()


@pytest.mark.parametrize("name", ALGS)
def test_operator_and_harmonic_suites_small(name):
    A = builtin(name)
    bad = [a for a in operator_identities(A, 4) + harmonic_identities(A, 4) if not a.passed]
    assert not bad


def test_failing_identity_names_tuple():
    from nch.suites import _cmp
    F = forms(builtin("dual"), 2)
    a = _cmp("kappa=1", F.kappa(1), F.identity(1), F.space(1))
    assert not a.passed and "first offending basis tuple" in a.detail


def test_kappa_power_identity_numeric():
    # kappa^{n(n+1)} = 1 + bB on degree 2 of M2, spelled out
    F = forms(builtin("M2"), 4)
    assert F.kappa_pow(2, 6) == F.identity(2) + F.b(3) @ F.B(2)
