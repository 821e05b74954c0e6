from math import factorial

import pytest
import sympy
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from nch.algebra import builtin
from nch.cuntz import (Dihedral, QElement, c_tilde, dihedral_report, dihedral_series, exp_series,
                       folding_is_homomorphism, generator_relations, log_closed, log_direct, substitute,
                       w_closed, w_series, words_are_products)
from nch.forms import TruncationError

N = 7
x, t = sympy.symbols("x t")


# -- independent model: A(q) + p B(q) with p q = -q p and p^2 = 1 - q^2 -------------

def _trunc(e):
    e = sympy.expand(e)
    return sum((e.coeff(x, k) * x ** k for k in range(N + 1)), sympy.Integer(0))


def omul(u, v):
    A, B = u
    C, D = v
    neg = lambda P: P.subs(x, -x)
    return (_trunc(A * C + (1 - x ** 2) * neg(B) * D), _trunc(neg(A) * D + B * C))


def oadd(u, v, c=1):
    return (_trunc(u[0] + c * v[0]), _trunc(u[1] + c * v[1]))


def oseries(u, coeff):
    out, power = (sympy.Integer(0), sympy.Integer(0)), (sympy.Integer(1), sympy.Integer(0))
    for n in range(N + 1):
        c = coeff(n)
        if c:
            out = oadd(out, power, c)
        power = omul(power, u)
    return out


F = (x, sympy.Integer(1))
FG = (-x, sympy.Integer(1))
Q = (x, sympy.Integer(0))


def oracle_log():
    u = omul(F, Q)
    u = (2 * u[0], 2 * u[1])
    return oseries(u, lambda n: sympy.Rational(-1, n) if n else 0)


def to_pair(el):
    A = sum((c.as_expr() * x ** k for (kind, k), c in el.c.items() if kind == "q"), sympy.Integer(0))
    B = sum((c.as_expr() * x ** k for (kind, k), c in el.c.items() if kind == "pq"), sympy.Integer(0))
    return sympy.expand(A.subs(sympy.Symbol("t"), t)), sympy.expand(B.subs(sympy.Symbol("t"), t))


@pytest.fixture(scope="module")
def D():
    return Dihedral(N)


def test_dihedral_relations(D):
    p, q = D.p(), D.q()
    assert p * q == -(q * p)
    assert p * p + q * q == D.one()


def test_log_matches_independent_model(D):
    assert to_pair(log_direct(D)) == oracle_log()


def test_log_coefficients_frozen(D):
    L = log_direct(D)
    want = {1: -2, 3: sympy.Rational(-4, 3), 5: sympy.Rational(-16, 15), 7: sympy.Rational(-32, 35)}
    got = {k: L.coefficient("pq", k).as_expr() for k in range(N + 1) if not L.coefficient("pq", k).is_zero}
    assert got == want
    assert all(L.coefficient("q", k).is_zero for k in range(N + 1))
    assert L == log_closed(D)


def test_closed_form_coefficients_formula():
    # -2^{2i-1} ((i-1)!)^2 / (2i-1)!
    vals = [-sympy.Rational(2 ** (2 * i - 1) * factorial(i - 1) ** 2, factorial(2 * i - 1)) for i in range(1, 5)]
    assert vals == [-2, sympy.Rational(-4, 3), sympy.Rational(-16, 15), sympy.Rational(-32, 35)]


def test_exp_log_in_independent_model():
    L = oracle_log()
    E = oseries(L, lambda n: sympy.Rational(1, factorial(n)))
    assert E == omul(F, FG)


def test_exp_log_in_package(D):
    assert exp_series(D, log_direct(D)) == D.f_elem() * D.f_gamma()


def test_w_series_matches_model(D):
    L = oracle_log()
    half = (sympy.expand(t * L[0] / 2), sympy.expand(t * L[1] / 2))
    W = oseries(half, lambda n: sympy.Rational(1, factorial(n)))
    got = to_pair(w_series(D))
    assert (sympy.expand(got[0] - W[0]), sympy.expand(got[1] - W[1])) == (0, 0)
    assert w_series(D) == w_closed(D)


def test_conjugation(D):
    W = w_series(D)
    W1, Wm1 = substitute(W, 1), substitute(W, -1)
    assert Wm1 * W1 == D.one()
    assert Wm1 * D.f_elem() * W1 == D.f_gamma()


def test_gamma_is_odd_on_log(D):
    L = log_direct(D)
    assert L.gamma() == -L


def test_report_and_rows():
    r = dihedral_report(6)
    assert all(getattr(r, k) for k in ("L_direct_eq_closed", "L_odd", "exp_L_eq_ff_gamma",
                                       "W_closed_eq_series", "W_minus_t_eq_gamma", "conjugation"))
    assert r.L_rows[0] == (1, "p(f)q(f)", "-2")
    assert dihedral_series("L", 4)
    with pytest.raises(TruncationError):
        Dihedral(1)


@pytest.mark.parametrize("name", ["C", "dual", "M2", "C2", "upper2"])
def test_generator_relations(name):
    r = generator_relations(builtin(name), 2)
    assert r["relations"] and r["p(1)=1,q(1)=0"]


@pytest.mark.parametrize("name", ["dual", "M2"])
def test_words_are_products(name):
    assert words_are_products(builtin(name), 3)


@st.composite
def q_elements(draw, alg, Nmax=4):
    out = QElement.p(alg, {}, Nmax)
    for _ in range(draw(st.integers(1, 3))):
        a = draw(st.integers(0, alg.dim - 1))
        b = draw(st.integers(0, alg.dim - 1))
        c = draw(st.integers(-2, 2))
        w = QElement.p(alg, a, Nmax) if draw(st.booleans()) else QElement.q(alg, a, Nmax)
        w = w * (QElement.q(alg, b, Nmax) if draw(st.booleans()) else QElement.p(alg, b, Nmax))
        out = out + w * c
    return out


@given(data=st.data())
def test_folding_and_gamma_are_homomorphisms(data):
    A = builtin("M2")
    x_, y_ = data.draw(q_elements(A)), data.draw(q_elements(A))
    assert folding_is_homomorphism(A, 4, [(x_, y_)])
    assert (x_ * y_).gamma() == x_.gamma() * y_.gamma()


@given(data=st.data())
def test_q_product_associates(data):
    A = builtin("dual")
    a, b, c = (data.draw(q_elements(A, 6)) for _ in range(3))
    assert (a * b) * c == a * (b * c)


def test_c_tilde_is_unitalized_c():
    A = c_tilde()
    assert A.mul({1: mpq(1)}, {1: mpq(1)}) == {1: mpq(1)}
