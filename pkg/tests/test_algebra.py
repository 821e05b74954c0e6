import json

import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from nch.algebra import (BUILTINS, AlgebraError, Bimodule, FinDimAlgebra, Ideal, Mat, builtin, direct_sum,
                         from_json, invert, is_ideal, load, matrix_algebra, matrix_over, quotient,
                         square_zero_extension, truncated_poly, unitalize, validate)


@pytest.mark.parametrize("name", BUILTINS)
def test_builtins_are_associative(name):
    rep = validate(builtin(name))
    assert rep.ok, (rep.associativity[:3], rep.unit)


def test_builtin_dims():
    assert {n: builtin(n).dim for n in BUILTINS} == {"C": 1, "C2": 2, "dual": 2, "M2": 4, "upper2": 3,
                                                      "strict_upper2": 1}
    assert [builtin(n).unital for n in BUILTINS] == [True] * 5 + [False]


def test_tampered_structure_is_reported():
    data = builtin("M2").to_json()
    data["structure"] = [t for t in data["structure"] if t[:3] != [1, 2, 0]]
    rep = validate(from_json(data))
    assert not rep.ok
    assert rep.associativity[0] == min(rep.associativity)


def test_json_round_trip(tmp_path):
    A = matrix_algebra(builtin("dual"), 2)
    p = tmp_path / "a.json"
    p.write_text(json.dumps(A.to_json()))
    B = load(str(p))
    assert list(B.triples()) == list(A.triples()) and B.basis == A.basis and B.unital


def test_unitalize_strict_upper_is_dual():
    U = unitalize(builtin("strict_upper2"))
    assert list(U.triples()) == list(builtin("dual").triples())


def test_square_zero_extension_of_regular_module():
    C = builtin("C")
    E = square_zero_extension(C, Bimodule.regular(C))
    assert list(E.triples()) == list(builtin("dual").triples())


def test_bad_bimodule_rejected():
    A = builtin("dual")
    M = Bimodule.regular(A)
    M.left = [M.left[0], M.left[0]]  # eps acting as 1 breaks eps^2 = 0
    assert M.defects()
    with pytest.raises(AlgebraError):
        square_zero_extension(A, M)


def test_quotient_upper2_by_offdiagonal():
    Q, P = quotient(builtin("upper2"), [{1: mpq(1)}])
    assert Q.dim == 2 and Q.is_commutative() and validate(Q).ok
    # two orthogonal idempotents: C x C
    assert Q.mul({1: mpq(1)}, {1: mpq(1)}) == {1: mpq(1)}


def test_non_ideal_rejected():
    with pytest.raises(AlgebraError):
        quotient(builtin("M2"), [{1: mpq(1)}], close=False)
    assert not is_ideal(builtin("M2"), [{1: mpq(1)}])


def test_matrix_algebra_of_c_is_m2():
    M = matrix_algebra(builtin("C"), 2)
    assert M.dim == 4 and M.unital and validate(M).ok and not M.is_commutative()


def test_ideal_powers_in_truncated_polynomials():
    T = truncated_poly(4)
    I = Ideal(T, [{1: mpq(1)}])
    assert [I.power(k).dim for k in range(1, 6)] == [4, 3, 2, 1, 0]
    assert I.as_algebra().dim == 4


def test_direct_sum_unit_and_dims():
    S = direct_sum(builtin("C"), builtin("M2"))
    assert S.dim == 5 and S.unital and validate(S).ok


def test_invert_over_dual_numbers():
    A = builtin("dual")
    u = matrix_over(A, [[[1, 1], [0, 1]], [0, [1, -1]]])
    ui = invert(u)
    one = Mat.identity(2, A.one(), A.zero())
    assert u * ui == one and ui * u == one


def test_invert_rejects_singular():
    A = builtin("dual")
    with pytest.raises(AlgebraError):
        invert(matrix_over(A, [[[0, 1]]]))


coord = st.integers(-3, 3)


@given(st.lists(coord, min_size=24, max_size=24))
def test_products_associate_in_m2_dual(xs):
    R = matrix_algebra(builtin("dual"), 2)
    a, b, c = (R.element(xs[i:i + 8]) for i in (0, 8, 16))
    assert (a * b) * c == a * (b * c)
    assert R.one() * a == a == a * R.one()


@given(st.lists(coord, min_size=9, max_size=9))
def test_upper2_products_stay_upper(xs):
    U = builtin("upper2")
    a, b, c = (U.element(xs[i:i + 3]) for i in (0, 3, 6))
    assert (a * b) * c == a * (b * c)
    assert set((a * b - b * a).c) <= {1}


def test_out_of_range_structure_rejected():
    with pytest.raises(AlgebraError):
        FinDimAlgebra.from_triples("bad", ["a"], [(0, 0, 3, 1)])
