import pytest
from gmpy2 import mpq

from nch.algebra import builtin, matrix_algebra, truncated_poly
from nch.homology import ComplexError, cyclic_homology, dims, hochschild, homology, periodic_approx, sbi_check
from nch.linalg import SMat

from oracles import connes_dims, hochschild_dims

# frozen values, each cross-checked against the brute-force oracle below
HH = {"C": [1, 0, 0, 0], "C2": [2, 0, 0, 0], "dual": [2, 1, 1, 1], "upper2": [2, 0, 0, 0], "M2": [1, 0, 0, 0]}
HC = {"C": [1, 0, 1, 0], "C2": [2, 0, 2, 0], "dual": [2, 0, 2, 0], "upper2": [2, 0, 2, 0], "M2": [1, 0, 1, 0]}


def _top(name):
    return 2 if name == "M2" else 3


@pytest.mark.parametrize("name", sorted(HH))
def test_hochschild_frozen(name):
    assert dims(hochschild(builtin(name), 3)) == HH[name]


@pytest.mark.parametrize("name", sorted(HC))
@pytest.mark.parametrize("model", ["mixed", "connes"])
def test_cyclic_frozen(name, model):
    assert dims(cyclic_homology(builtin(name), 3, model)) == HC[name]


@pytest.mark.parametrize("name", sorted(HH))
def test_frozen_values_match_oracle(name):
    A = builtin(name)
    k = _top(name)
    assert hochschild_dims(A, k) == HH[name][:k + 1]
    assert connes_dims(A, k) == HC[name][:k + 1]


def test_nonunital_connes_against_oracle():
    A = builtin("strict_upper2")
    assert dims(cyclic_homology(A, 4, "connes")) == connes_dims(A, 4) == [1, 0, 1, 0, 1]
    with pytest.raises(ComplexError):
        cyclic_homology(A, 2, "mixed")


def test_truncated_polynomial_hochschild():
    # k[t]/t^3: HH_0 = 3 and HH_n = 2 for n >= 1 in characteristic 0
    assert dims(hochschild(truncated_poly(2), 4)) == [3, 2, 2, 2, 2]


def test_trusted_flags():
    res = cyclic_homology(builtin("dual"), 5, N=5)
    assert [r.trusted for r in res] == [True, True, True, True, False, False]
    assert dims(res, trusted_only=True) == [2, 0, 2, 0]


def test_hc_of_ground_field_long():
    assert dims(cyclic_homology(builtin("C"), 8)) == [1, 0] * 4 + [1]


def test_morita_m2_of_dual():
    A = matrix_algebra(builtin("dual"), 2)
    assert dims(cyclic_homology(A, 2)) == dims(cyclic_homology(builtin("dual"), 2))


@pytest.mark.parametrize("name", ["C", "C2", "dual", "upper2"])
def test_sbi_exact(name):
    rep = sbi_check(builtin(name), 4)
    assert rep.ok, rep.failures()
    assert all(rep.composites.values())


def test_periodic_estimate():
    r = periodic_approx(builtin("C2"), 0, 6)
    assert r["stabilized"] and r["estimate"] == 2
    r = periodic_approx(builtin("dual"), 1, 7)
    assert r["estimate"] == 0


def test_broken_complex_is_refused():
    d1 = SMat.from_dense([[mpq(1)]])
    d2 = SMat.from_dense([[mpq(1)]])
    with pytest.raises(ComplexError):
        homology(lambda n: {1: d1, 2: d2}.get(n), lambda n: 1, [1])


def test_homology_representatives_are_cycles():
    res = hochschild(builtin("dual"), 2)
    from nch.forms import forms
    F = forms(builtin("dual"), 4)
    for r in res[1:]:
        for v in r.reps:
            assert not F.b(r.degree).apply(v)
