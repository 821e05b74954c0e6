"""Verification suites shared by the CLI and the tests.

Each suite returns a list of Assertion records; a failing matrix identity
names the first basis tuple on which the two sides differ.
"""

import random
from dataclasses import dataclass

from gmpy2 import mpq

from .forms import chains, forms
from .linalg import SMat


@dataclass
class Assertion:
    name: str
    passed: bool
    detail: str = ""

    def as_json(self):
        return {"name": self.name, "pass": self.passed, "detail": self.detail}


def _cmp(name, lhs, rhs, space):
    """Compare two matrices on a TupleSpace source; detail names the first offending tuple."""
    if lhs == rhs:
        return Assertion(name, True)
    row, col = lhs.first_difference(rhs)
    return Assertion(name, False, "first offending basis tuple %r" % (space.basis[col],))


def _zero(name, M, space):
    return _cmp(name, M, SMat.zero(M.m, M.n), space)


def operator_identities(alg, N=6):
    """b^2 = b'^2 = d^2 = 0, bd + db = 1 - kappa, the kappa power identities,
    b(lambda - 1) = (lambda - 1)b' and b'N = Nb."""
    F = forms(alg, N)
    C = chains(alg, N + 1)
    out = []
    for n in range(2, N + 1):
        out.append(_zero("b^2=0 [n=%d]" % n, F.b(n - 1) @ F.b(n), F.space(n)))
    for n in range(0, N - 1):
        out.append(_zero("d^2=0 [n=%d]" % n, F.d(n + 1) @ F.d(n), F.space(n)))
    for n in range(0, N):
        one = F.identity(n)
        bd = F.b(n + 1) @ F.d(n)
        db = F.d(n - 1) @ F.b(n) if n >= 1 else F.zero(n, n)
        out.append(_cmp("bd+db=1-kappa [n=%d]" % n, bd + db, one - F.kappa(n), F.space(n)))
        out.append(_cmp("kappa^n=1+b kappa^-1 d [n=%d]" % n, F.kappa_pow(n, n),
                        one + F.b(n + 1) @ F.kappa_inv(n + 1) @ F.d(n), F.space(n)))
        out.append(_cmp("kappa^(n+1)=1-db [n=%d]" % n, F.kappa_pow(n, n + 1), one - db, F.space(n)))
        out.append(_cmp("kappa^(n(n+1))=1+bB [n=%d]" % n, F.kappa_pow(n, n * (n + 1)),
                        one + F.b(n + 1) @ F.B(n), F.space(n)))
    for k in range(2, N + 2):
        sp = C.space(k)
        out.append(_zero("b'^2=0 [k=%d]" % k, C.bprime(k - 1) @ C.bprime(k), sp))
        I_k, I_k1 = SMat.identity(sp.dim), SMat.identity(C.space(k - 1).dim)
        out.append(_cmp("b(lambda-1)=(lambda-1)b' [k=%d]" % k, C.b(k) @ (C.lam(k) - I_k),
                        (C.lam(k - 1) - I_k1) @ C.bprime(k), sp))
        out.append(_cmp("b'N=Nb [k=%d]" % k, C.bprime(k) @ C.norm(k), C.norm(k - 1) @ C.b(k), sp))
    return out


def harmonic_identities(alg, N=5):
    """P^2 = P, P kappa = kappa P and G(bd + db) = 1 on (1 - P)Omega."""
    F = forms(alg, N)
    out = []
    for n in range(0, N):
        sp = F.space(n)
        P, K = F.P(n), F.kappa(n)
        out.append(_cmp("P^2=P [n=%d]" % n, P @ P, P, sp))
        out.append(_cmp("P kappa=kappa P [n=%d]" % n, P @ K, K @ P, sp))
        one = F.identity(n)
        bd = F.b(n + 1) @ F.d(n)
        db = F.d(n - 1) @ F.b(n) if n >= 1 else F.zero(n, n)
        out.append(_cmp("G(bd+db)=1 on (1-P) [n=%d]" % n, F.G(n) @ (bd + db) @ (one - P), one - P, sp))
    return out


def xcomplex_identities(alg, N=6):
    """beta o natdelta = 0 and natdelta o beta = 0, every component inside degrees 0..N."""
    F = forms(alg, N)
    out = []

    def beta(n, m):
        # odd n: b down, -(1 + kappa)d up
        if m == n - 1:
            return F.b(n)
        return -((F.identity(n + 1) + F.kappa(n + 1)) @ F.d(n))

    def delta(n, m):
        # even n: -N_{kappa^2} b down, B up
        if m == n - 1:
            return None if n == 0 else -(F.N_kappa2(n - 1) @ F.b(n))
        return F.B(n)

    for n in range(0, N + 1):
        first, second = (delta, beta) if n % 2 == 0 else (beta, delta)
        label = "beta.natdelta" if n % 2 == 0 else "natdelta.beta"
        for m in (n - 2, n, n + 2):
            if m < 0 or m > N or (m == n and n + 1 > N):
                continue
            tot = SMat.zero(F.space(m).dim, F.space(n).dim)
            for k in (n - 1, n + 1):
                if k < 0 or abs(k - m) != 1:
                    continue
                A_ = first(n, k)
                if A_ is None:
                    continue
                tot = tot + second(k, m) @ A_
            out.append(_zero("%s=0 [%d->%d]" % (label, n, m), tot, F.space(n)))
    return out


def sbi_identities(alg, window=4):
    from .homology import sbi_check
    rep = sbi_check(alg, window)
    if rep.ok:
        return [Assertion("SBI exact [n<=%d]" % window, True)]
    return [Assertion("SBI exact [n<=%d]" % window, False, "first failing node %s" % (rep.failures()[0],))]


def transgression_identities(seed, nmax=2, algebras=("M2", "dual")):
    """b cs_{2n+1} = ch_{2n+2} over seeded random based maps, and cs(1,...,1) = n!/(2n)!."""
    from math import factorial
    from .algebra import builtin
    from .cochains import chern_forms, random_based_map, transgression_defect
    out = []
    rng = random.Random(seed)
    for name in algebras:
        A = builtin(name)
        R = builtin("M2")
        rho = random_based_map(A, R, rng.randrange(10 ** 6))
        tau = {0: mpq(2), 3: mpq(1)}
        for n in range(nmax + 1):
            bad = sorted(transgression_defect(rho, tau, n).values)
            out.append(Assertion("b cs_%d = ch_%d (%s)" % (2 * n + 1, 2 * n + 2, name), not bad,
                                 "" if not bad else "first offending basis tuple %r" % (bad[0],)))
    C = builtin("C")
    rho = random_based_map(C, C, 0)
    for n in range(nmax + 1):
        v = chern_forms(rho, {0: mpq(1)}, n)["cs"](*([0] * (2 * n + 1)))
        want = mpq(factorial(n), factorial(2 * n))
        out.append(Assertion("cs_%d(1,...,1) = n!/(2n)!" % (2 * n + 1), v == want, "%s vs %s" % (v, want)))
    return out


def run_suite(name, alg=None, N=None, seed=0):
    from .algebra import builtin
    if name == "operators":
        return operator_identities(alg, N or 6)
    if name == "harmonic":
        return harmonic_identities(alg, N or 5)
    if name == "xcomplex":
        return xcomplex_identities(alg, N or 6)
    if name == "sbi":
        return sbi_identities(alg, N or 4)
    if name == "excision":
        from .excision import ExtensionSpec, excision_check, h_unitality
        R = builtin("C")
        from .algebra import direct_sum
        S = direct_sum(R, builtin("M2"))
        res = excision_check(ExtensionSpec.build(S, [{1: mpq(1)}]), window=N or 4)
        out = [Assertion("excision split C x M2: %s" % k, bool(res[k]))
               for k in ("composite_zero", "im_eq_ker", "connecting_dims")]
        U = builtin("upper2")
        neg = excision_check(ExtensionSpec.build(U, [{1: mpq(1)}]), window=N or 4)
        out.append(Assertion("excision upper2 fails (negative control)", not neg["ok"]))
        out.append(Assertion("H-unital M2", h_unitality(builtin("M2"), 4)["h_unital"]))
        out.append(Assertion("H-unital strict_upper2 is false",
                             not h_unitality(builtin("strict_upper2"), 4)["h_unital"]))
        return out
    if name == "goodwillie":
        from .algebra import Bimodule
        from .excision import goodwillie_decomposition
        C = builtin("C")
        M = Bimodule.regular(C)
        out = []
        for p in (1, 2):
            r = goodwillie_decomposition(C, M, p, N or 6)
            out.append(Assertion("goodwillie p=%d" % p, bool(r["ok"])))
        return out
    if name == "derivation":
        from .excision import ls_zero
        A = builtin("dual")
        r = ls_zero(A, SMat(2, 2, [{}, {1: mpq(1)}]), N or 4)
        return [Assertion("L_D S = 0 on HC(dual) [n=%s]" % k, bool(v)) for k, v in sorted(r["LS_zero"].items())]
    if name == "cuntz":
        from .cuntz import dihedral_report, generator_relations
        r = dihedral_report(N or 6)
        out = [Assertion(k, bool(getattr(r, k))) for k in
               ("L_direct_eq_closed", "L_odd", "exp_L_eq_ff_gamma", "W_closed_eq_series",
                "W_minus_t_eq_gamma", "conjugation")]
        A = alg or builtin("M2")
        g = generator_relations(A, 2)
        out.append(Assertion("p/q generator relations (%s)" % A.name, g["relations"],
                             "" if g["relations"] else "first offending basis pair %r" % (g["failures"][0],)))
        return out
    if name == "lie":
        from .lie import coinvariants, cyclic_class_homology
        out = []
        for a, r, n in (("C", 1, 1), ("C", 2, 2), ("C2", 2, 2)):
            rep = coinvariants(builtin(a), r, n)
            out.append(Assertion("coinvariant dims (%s, r=%d, n=%d)" % (a, r, n), rep.equal,
                                 "%d vs %d" % (rep.lie_side, rep.permutation_side)))
        cc = cyclic_class_homology(builtin("C"), 3)
        out.append(Assertion("cyclic-class homology = HC_{n-1}(C), n<=3", cc.ok, str(cc.homology_dims)))
        return out
    if name == "cochains":
        return transgression_identities(seed)
    if name == "index":
        from .algebra import Mat
        from .k_index import KClass, fd_trace, index_report
        R = builtin("dual")
        ht = fd_trace(R, [{1: mpq(1)}], "even", 1, {0: 1, 1: 3})
        other = fd_trace(R, [{1: mpq(1)}], "even", 1, {0: 1, 1: 3}, lift_seed=seed)
        e = KClass.idempotent(Mat([[ht.A.one()]]))
        rep = index_report(ht, e, [1, 2, 3], other)
        return [Assertion("even index: direct = paired (dual numbers)", rep["equal"], "value %s" % rep["value"]),
                Assertion("even index: stable in n", rep["stable_in_n"]),
                Assertion("even index: lift independent", rep["lift_independent"])]
    raise ValueError("unknown suite %r" % name)


SUITES = ("operators", "harmonic", "xcomplex", "sbi", "excision", "goodwillie", "derivation",
          "cuntz", "lie", "cochains", "index")
