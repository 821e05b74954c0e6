import pytest
import sympy
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from nch.algebra import AlgebraElement, Ideal, Mat, builtin, matrix_algebra, matrix_over
from nch.k_index import (KClass, LiftError, ParityError, chern_character, commutator_decomposition,
                         connecting_idempotent, crt_check, fd_trace, index_pairing, index_report,
                         lift_idempotent, lifting_polynomial, milnor_patch, toeplitz_trace, whitehead_factor)
from nch.toeplitz import LaurentSymbol


@pytest.mark.parametrize("n", range(6))
def test_lifting_polynomial_against_integral(n):
    x, t = sympy.symbols("x t")
    c = sympy.factorial(2 * n + 1) / sympy.factorial(n) ** 2
    want = sympy.Poly(c * sympy.integrate((t - t ** 2) ** n, (t, 0, x)), x).all_coeffs()[::-1]
    got = lifting_polynomial(n)
    assert [sympy.Rational(int(v.numerator), int(v.denominator)) for v in got] == want


def test_first_lifting_polynomial():
    assert lifting_polynomial(1) == [0, 0, 3, -2]
    with pytest.raises(ValueError):
        lifting_polynomial(-1)


@pytest.mark.parametrize("n", range(6))
def test_crt_conditions(n):
    assert all(crt_check(n).values())


def _dual():
    return builtin("dual")


def test_whitehead_and_commutators_over_dual_numbers():
    A = _dual()
    phi = matrix_over(A, [[[2, 1]]])
    fs = whitehead_factor(phi)
    assert len(fs) == 4
    x = matrix_over(A, [[[1, 1], [0, 1]], [0, [1, 0]]])
    y = matrix_over(A, [[[1, 0], 0], [[0, 3], [1, 0]]])
    out = commutator_decomposition(x, y)
    assert len(out["diagonals"]) == 3 and len(out["factors"]) == 3


def test_milnor_patch_checks():
    A = _dual()
    I = Ideal(A, [{1: mpq(1)}])
    p = matrix_over(A, [[[1, 1]]])
    q = matrix_over(A, [[[1, 0]]])
    r = milnor_patch(p, q, I)
    assert all(r["checks"].values()), r["checks"]


def test_milnor_patch_rejects_non_inverses():
    A = _dual()
    I = Ideal(A, [{1: mpq(1)}])
    with pytest.raises(LiftError):
        milnor_patch(matrix_over(A, [[[2, 0]]]), matrix_over(A, [[[1, 0]]]), I)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_connecting_idempotent_over_dual(n):
    A = _dual()
    I = Ideal(A, [{1: mpq(1)}])
    p = matrix_over(A, [[[1, 2]]])
    q = matrix_over(A, [[[1, 1]]])
    r = connecting_idempotent(p, q, n, I)
    assert all(r["checks"].values()), r["checks"]


def test_connecting_idempotent_toeplitz():
    from nch.toeplitz import HalfLineOperator
    p = Mat([[HalfLineOperator.toeplitz(LaurentSymbol.monomial(2))]])
    q = Mat([[HalfLineOperator.toeplitz(LaurentSymbol.monomial(-2))]])
    r = connecting_idempotent(p, q, 2)
    assert all(r["checks"].values())


def test_chern_character_cycles():
    M = builtin("M2")
    e = KClass.idempotent(Mat([[M.e(M.basis.index("e22"))]]))
    for n in range(3):
        r = chern_character(e, n)
        assert r["degree"] == 2 * n and r["cycle"] and r["norm_identity"]
    A = _dual()
    u = KClass.invertible(matrix_over(A, [[[1, 1]]]))
    r = chern_character(u, 1)
    assert r["degree"] == 1 and r["cycle"]


def test_non_idempotent_rejected():
    from nch.algebra import AlgebraError
    A = _dual()
    with pytest.raises(AlgebraError):
        KClass.idempotent(matrix_over(A, [[[2, 0]]]))


def _m2_dual_trace(weights=None, seed=None):
    R = matrix_algebra(builtin("dual"), 2)
    b = R.basis.index
    w = weights or {0: 2, b("E22(1)"): 1, b("E11(eps)"): 3, b("E22(eps)"): 3}
    return fd_trace(R, [{b("E11(eps)"): mpq(1)}], "even", 1, w, lift_seed=seed)


def test_non_trace_weights_fail_verification():
    R = matrix_algebra(builtin("dual"), 2)
    ht = _m2_dual_trace({R.basis.index("E22(1)"): 1})
    assert not ht.verify()["trace_on_commutators"]


@given(seed=st.integers(0, 10 ** 6))
def test_even_index_independent_of_lift(seed):
    ht = _m2_dual_trace(seed=seed)
    e = KClass.idempotent(Mat([[AlgebraElement(ht.A, {ht.A.basis.index("E22(1)"): mpq(1)})]]))
    r = index_pairing(ht, e, 2)
    assert r.equal and r.direct == 1


def test_lifted_idempotent_is_idempotent_mod_ideal_power():
    ht = _m2_dual_trace(seed=5)
    e = Mat([[AlgebraElement(ht.A, {ht.A.basis.index("E22(1)"): mpq(1)})]])
    F, ok = lift_idempotent(ht, e, 1)
    assert ok and F * F == F


def test_parity_mismatch():
    ht = _m2_dual_trace()
    u = KClass.invertible(Mat([[ht.A.one()]]), Mat([[ht.A.one()]]))
    with pytest.raises(ParityError):
        index_pairing(ht, u, 1)
    e = KClass.idempotent(Mat([[ht.A.one()]]))
    with pytest.raises(ValueError):
        index_pairing(ht, e, 0)


@pytest.mark.parametrize("k", [1, 2, 3, -2])
def test_toeplitz_odd_index_is_minus_degree(k):
    ht, other = toeplitz_trace(), toeplitz_trace(perturb_seed=k + 10)
    kc = KClass.invertible(Mat([[LaurentSymbol.monomial(k)]]), Mat([[LaurentSymbol.monomial(-k)]]))
    rep = index_report(ht, kc, [1, 2], other)
    assert rep["equal"] and rep["lift_independent"] and rep["value"] == str(-k)


def test_toeplitz_trace_on_sample():
    assert toeplitz_trace(window=2).verify()["trace_on_[R,I^m]"]
