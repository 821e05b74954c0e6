import cmath
import math

import pytest
from gmpy2 import mpq
from hypothesis import assume, given
from hypothesis import strategies as st

from nch.toeplitz import (HalfLineOperator, LaurentSymbol, SymbolError, cocycle_phi, commutator_trace,
                          count_inside, fourier_pairing, index_report, inverse_on_circle, phi_coboundary,
                          schur_cohn, toeplitz_matrix, winding_number)


def numeric_winding(f, samples=2048):
    """Argument principle on a fine grid, plus the smallest |f| seen."""
    total, low = 0.0, float("inf")
    prev = f(1.0)
    if prev == 0:
        return None, 0.0
    for j in range(1, samples + 1):
        cur = f(cmath.exp(2j * math.pi * j / samples))
        low = min(low, abs(cur))
        if cur == 0:
            return None, 0.0
        total += cmath.phase(cur / prev)
        prev = cur
    return round(total / (2 * math.pi)), low


@st.composite
def symbols(draw, width=3):
    lo = draw(st.integers(-width, 0))
    n = draw(st.integers(1, 4))
    coeffs = {lo + i: draw(st.integers(-4, 4)) for i in range(n)}
    f = LaurentSymbol(coeffs)
    assume(f.c)
    return f


def test_parse_forms():
    assert LaurentSymbol.parse("z^-1*(1+z/3)") == LaurentSymbol({-1: 1, 0: mpq(1, 3)})
    assert LaurentSymbol.parse("2 + 3z^2").c == {0: 2, 2: 3}
    with pytest.raises(SymbolError):
        LaurentSymbol.parse("sin(z)")
    with pytest.raises(SymbolError):
        LaurentSymbol.parse("z^(1/2)")


def test_json_round_trip():
    f = LaurentSymbol.parse("z^-2 - 1/2 + 5z")
    assert LaurentSymbol.from_json(f.to_json()) == f


@given(symbols())
def test_winding_matches_argument_principle(f):
    w_num, low = numeric_winding(f)
    assume(low > 1e-2)
    assert winding_number(f)[0] == w_num


@given(symbols(), symbols())
def test_winding_is_additive(f, g):
    assume(numeric_winding(f)[1] > 1e-2 and numeric_winding(g)[1] > 1e-2)
    assert winding_number(f * g)[0] == winding_number(f)[0] + winding_number(g)[0]


def test_zero_on_circle_rejected():
    with pytest.raises(SymbolError):
        winding_number(LaurentSymbol.parse("1+z"))
    with pytest.raises(SymbolError):
        winding_number(LaurentSymbol.parse("z^2+1"))


def test_schur_cohn_against_known_roots():
    # (z - 1/2)(z - 3) = z^2 - 7/2 z + 3/2
    assert schur_cohn([mpq(3, 2), mpq(-7, 2), 1]) == 1
    assert count_inside([mpq(1, 4), 0, 1])[0] == 2
    assert count_inside([4, 0, 1])[0] == 0


def test_degenerate_schur_cohn_uses_root_isolation():
    # z^2 + 3z + 1 has |a_0| = |a_2|; roots (-3 +- sqrt 5)/2, one inside
    assert schur_cohn([1, 3, 1]) is None
    assert count_inside([1, 3, 1]) == (1, "root-isolation")
    with pytest.raises(SymbolError):
        count_inside([1, 3, 1], fallback=False)


@given(symbols(), symbols())
def test_commutator_trace_is_fourier_pairing(f, g):
    lo = f.width + g.width
    for N in (lo, lo + 1, lo + 3):
        mat, four = commutator_trace(f, g, N)
        assert mat == four == fourier_pairing(f, g)


@given(symbols(), symbols())
def test_phi_operator_model(f, g):
    val, four = cocycle_phi(f, g, N=f.width + g.width)
    assert val == four


@given(symbols(), symbols())
def test_phi_antisymmetric(f, g):
    assert fourier_pairing(f, g) == -fourier_pairing(g, f)


@given(symbols(), symbols(), symbols())
def test_phi_is_a_cocycle(f, g, h):
    assert phi_coboundary(f, g, h) == 0


@given(symbols(), symbols(), symbols())
def test_operator_product_associates(f, g, h):
    A, B, C = (HalfLineOperator.toeplitz(x) for x in (f, g, h))
    E = HalfLineOperator.unit(0, 1, 2)
    assert (A * B) * C == A * (B * C)
    assert (A * E) * B == A * (E * B)


def test_toeplitz_matrix_entries():
    f = LaurentSymbol.parse("z^-1 + 2 + 3z")
    M = toeplitz_matrix(f, 3).to_dense()
    assert [list(map(int, r)) for r in M] == [[2, 1, 0, 0], [3, 2, 1, 0], [0, 3, 2, 1], [0, 0, 3, 2]]
    with pytest.raises(SymbolError):
        toeplitz_matrix(LaurentSymbol.monomial(5), 3)


@pytest.mark.parametrize("text,w", [("z", 1), ("z^2", 2), ("2+z", 0), ("z^-1*(1+z/3)", -1), ("z^-3", -3),
                                    ("(1+2z)*(3+z)", 1), ("(z-1/2)*(z-1/3)", 2)])
def test_index_is_minus_winding(text, w):
    r = index_report(LaurentSymbol.parse(text), range(2, 12))
    assert r.winding == w and r.exact
    assert r.stabilized == -w
    assert r.kernel_dims == (max(0, -w), max(0, w))


def test_inverse_symbol_truncation():
    f = LaurentSymbol.parse("2+z")
    g, exact = inverse_on_circle(f, 12)
    assert exact
    # 1/(2+z) = sum (-1)^k z^k / 2^{k+1}
    assert all(g[k] == mpq((-1) ** k, 2 ** (k + 1)) for k in range(10))
    assert all(g[-k] == 0 for k in range(1, 12))


def test_inverse_symbol_with_inner_factor():
    f = LaurentSymbol.parse("(z-1/2)*(z-3)")
    g, exact = inverse_on_circle(f, 30)
    assert exact
    prod = f * g
    assert all(prod[k] == (1 if k == 0 else 0) for k in range(-20, 20))


def test_irrational_split_falls_back_to_numeric():
    # z^2 - 2z - 1/2: roots 1 +- sqrt(6)/2, one inside, irreducible over Q
    f = LaurentSymbol.parse("z^2 - 2z - 1/2")
    g, exact = inverse_on_circle(f, 10)
    assert not exact
    assert winding_number(f)[0] == 1
