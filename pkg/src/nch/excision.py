"""Excision experiments: H-unitality, the excision sequence, Goodwillie's
weight decomposition for square-zero extensions, the reduced cyclic
sequence and Lie derivatives along derivations.
"""

from dataclasses import dataclass
from itertools import product

from gmpy2 import mpq

from .algebra import AlgebraError, Bimodule, FinDimAlgebra, Ideal, quotient, square_zero_extension
from .forms import chains, forms, MixedComplex, space, t_b, ConventionError
from .homology import ConnesComplex, cyclic_homology, homology, hochschild, _exact_at
from .linalg import SMat, dense_rank, induced_map, rank


# -- H-unitality -------------------------------------------------------------

def h_unitality(I, N):
    """Dims of H_n(B(I), b') for n = 0..N-1 (degree n = tensor length n+1)."""
    if N < 2:
        raise ValueError("N must be >= 2")
    C = chains(I, N + 1)

    def diffs(n):
        if n <= 0 or n > N:
            return None
        return C.bprime(n + 1)
    res = homology(diffs, lambda n: C.space(n + 1).dim, range(N))
    dims = [r.dim for r in res]
    return {"dims": dims, "h_unital": all(d == 0 for d in dims), "window": N - 1}


# -- excision ----------------------------------------------------------------

@dataclass
class ExtensionSpec:
    R: FinDimAlgebra
    ideal: Ideal
    I: FinDimAlgebra = None
    A: FinDimAlgebra = None
    inc: SMat = None
    proj: SMat = None

    @classmethod
    def build(cls, R, gens):
        ideal = Ideal(R, gens)
        I = ideal.as_algebra(name="I")
        A, P = quotient(R, ideal.basis, close=False, name="R/I")
        if ideal.dim + A.dim != R.dim:
            raise AlgebraError("dim R != dim I + dim R/I")
        return cls(R, ideal, I, A, ideal.inclusion(), P)


def _connes(alg, top):
    X = ConnesComplex(alg, top + 1)
    nodes = homology(lambda n: X.b(n) if 0 < n <= top + 1 else None, X.dim, range(top + 1))
    return X, {r.degree: r.node for r in nodes}


def connes_map(X, Y, F, n):
    """Chain map C^lambda_n(X.alg) -> C^lambda_n(Y.alg) induced by the linear map F."""
    reps, _ = X.classes(n)
    M = SMat(Y.dim(n), len(reps))
    for j, t in enumerate(reps):
        terms = [(mpq(1), ())]
        for k in t:
            terms = [(c * v, s + (i,)) for c, s in terms for i, v in F.cols[k].items()]
        acc = {}
        for c, s in terms:
            acc[s] = acc.get(s, 0) + c
        M.cols[j] = Y.project(n, {s: v for s, v in acc.items() if v})
    return M


def excision_check(ext, window=4):
    """Three predicates on HC_q(I) -> HC_q(R) -> HC_q(A) for q <= window."""
    XI, HI = _connes(ext.I, window + 1)
    XR, HR = _connes(ext.R, window + 1)
    XA, HA = _connes(ext.A, window + 1)
    i_star, p_star = {}, {}
    for q in range(window + 2):
        Fi = connes_map(XI, XR, ext.inc, q)
        Fp = connes_map(XR, XA, ext.proj, q)
        i_star[q] = induced_map(Fi, HI[q], HR[q])
        p_star[q] = induced_map(Fp, HR[q], HA[q])
    comp, exact, conn = {}, {}, {}
    for q in range(window + 1):
        rows = _mul(p_star[q], i_star[q], HA[q].dim, HI[q].dim)
        comp[q] = all(x == 0 for r in rows for x in r)
        exact[q] = _exact_at(_pad(i_star[q], HR[q].dim, HI[q].dim), _pad(p_star[q], HA[q].dim, HR[q].dim) or None,
                             HR[q].dim)
    for q in range(window):
        ker_i = HI[q].dim - _rk(i_star[q])
        coker_p = HA[q + 1].dim - _rk(p_star[q + 1])
        conn[q] = ker_i == coker_p
    dims = {"I": [HI[q].dim for q in range(window + 1)], "R": [HR[q].dim for q in range(window + 1)],
            "A": [HA[q].dim for q in range(window + 1)]}
    ok = all(comp.values()) and all(exact.values()) and all(conn.values())
    return {"dims": dims, "composite_zero": comp, "im_eq_ker": exact, "connecting_dims": conn, "ok": ok}


def _rk(rows):
    return dense_rank(rows) if rows else 0


def _pad(rows, m, n):
    if m == 0 or n == 0:
        return [[mpq(0)] * n for _ in range(m)]
    return rows


def _mul(A, B, m, n):
    if not A or not B:
        return [[mpq(0)] * n for _ in range(m)]
    k = len(B)
    return [[sum((A[i][l] * B[l][j] for l in range(k)), mpq(0)) for j in range(n)] for i in range(m)]


# -- Goodwillie --------------------------------------------------------------

def _weight(t, mset):
    return sum(1 for k in t if k in mset)


def goodwillie_decomposition(A, M, p, N, convention="lambda"):
    """Weight-p part of C^lambda(A + M) against the cyclic tensor complex.

    Left side: tuples starting with an M-entry, p M-entries in all, modulo
    the cyclic group of order p rotating whole segments (m, a, ..., a).
    ``convention`` picks the segment-rotation sign: "lambda" uses the sign of
    the corresponding power of lambda; "none" uses no sign (expected to fail
    when it matters).  The chosen convention must make the canonical map a
    chain map, else ConventionError.
    """
    R = square_zero_extension(A, M) if isinstance(M, Bimodule) else M
    d = A.dim
    mset = set(range(d, R.dim))
    X = ConnesComplex(R, N)
    report = {"convention": convention, "degrees": {}, "grading_preserved": True}
    # grading: b maps weight p to weight p on every class rep
    for n in range(1, N + 1):
        reps, _ = X.classes(n)
        for t in reps:
            w = _weight(t, mset)
            for s, c in t_b(R, t, False).items():
                if c and _weight(s, mset) != w:
                    report["grading_preserved"] = False
    left = {}
    for n in range(0, N + 1):
        left[n] = _segment_classes(R, n, mset, p, convention)
    ok_all = True
    for n in range(0, N + 1):
        reps_l, cls_l = left[n]
        reps_c, cls_c = X.classes(n)
        wp = [i for i, t in enumerate(reps_c) if _weight(t, mset) == p]
        pos = {i: k for k, i in enumerate(wp)}
        Phi = SMat(len(wp), len(reps_l))
        for j, t in enumerate(reps_l):
            v = cls_c[t]
            if v is not None:
                Phi.cols[j] = {pos[v[0]]: mpq(v[1])}
        iso = len(wp) == len(reps_l) and rank(Phi) == len(wp)
        chain = True
        if n >= 1:
            # b on the left complex, projected to left classes
            reps_lm, cls_lm = left[n - 1]
            reps_cm, _ = X.classes(n - 1)
            wpm = [i for i, t in enumerate(reps_cm) if _weight(t, mset) == p]
            posm = {i: k for k, i in enumerate(wpm)}
            bL = SMat(len(reps_lm), len(reps_l))
            for j, t in enumerate(reps_l):
                col = {}
                for s, c in t_b(R, t, False).items():
                    v = cls_lm.get(s)
                    if v is None:
                        continue
                    col[v[0]] = col.get(v[0], 0) + v[1] * c
                bL.cols[j] = {k: c for k, c in col.items() if c}
            Phim = SMat(len(wpm), len(reps_lm))
            for j, t in enumerate(reps_lm):
                v = X.classes(n - 1)[1][t]
                if v is not None:
                    Phim.cols[j] = {posm[v[0]]: mpq(v[1])}
            bC = X.b(n)
            bCp = SMat(len(wpm), len(wp), [{posm[i]: c for i, c in bC.cols[k].items() if i in posm}
                                           for k in wp])
            chain = (Phim @ bL) == (bCp @ Phi)
        report["degrees"][n] = {"dim_left": len(reps_l), "dim_weight_p": len(wp), "iso": iso,
                                "chain_map": chain}
        ok_all = ok_all and iso and chain
    if p == 1 and isinstance(M, Bimodule):
        res, bases = hochschild_with_coeffs(A, M, N)
        same = all(sorted(left[n][0]) == sorted(bases[n]) for n in range(N + 1))
        report["weight1_is_C(A,M)"] = same
        report["HH(A,M)"] = [r.dim for r in res]
        ok_all = ok_all and same
    report["ok"] = ok_all and report["grading_preserved"]
    bad = [n for n, v in report["degrees"].items() if not (v["chain_map"] and v["iso"])]
    if bad:
        raise ConventionError("segment-rotation convention %r fails at degree %d (chain map %s, iso %s)"
                              % (convention, bad[0], report["degrees"][bad[0]]["chain_map"],
                                 report["degrees"][bad[0]]["iso"]))
    return report


def _segment_classes(R, n, mset, p, convention):
    """Orbits of M-first (n+1)-tuples of weight p under segment rotations.

    Returns (reps, cls) with cls[t] = (index, sign); tuples whose orbit
    carries contradictory signs are dropped (cls value None).
    """
    k = n + 1
    sgn_unit = -1 if n % 2 else 1
    cls, reps = {}, []
    for t in product(range(R.dim), repeat=k):
        if t in cls or t[0] not in mset or _weight(t, mset) != p:
            continue
        starts = [i for i in range(k) if t[i] in mset]
        orbit, dead = {}, False
        for i in starts:
            u = t[i:] + t[:i]
            # u = lambda^{k-i} t
            s = sgn_unit ** (k - i) if convention == "lambda" else 1
            if u in orbit and orbit[u] != s:
                dead = True
            orbit.setdefault(u, s)
        if dead:
            for u in orbit:
                cls[u] = None
            continue
        rep = min(orbit)
        rs = orbit[rep]
        for u, su in orbit.items():
            cls[u] = (len(reps), su * rs)
        reps.append(rep)
    return reps, cls


def hochschild_with_coeffs(A, M, N):
    """C_n(A, M) = M (x) A^{(x)n} with the bimodule Hochschild b; dims of homology."""
    R = square_zero_extension(A, M)
    d = A.dim
    mset = set(range(d, R.dim))

    def basis(n):
        return [t for t in product(range(R.dim), repeat=n + 1)
                if t[0] in mset and all(k < d for k in t[1:])]
    bases = {n: basis(n) for n in range(N + 1)}
    index = {n: {t: i for i, t in enumerate(b)} for n, b in bases.items()}

    def diffs(n):
        if n <= 0 or n > N:
            return None
        M_ = SMat(len(bases[n - 1]), len(bases[n]))
        for j, t in enumerate(bases[n]):
            M_.cols[j] = {index[n - 1][s]: c for s, c in t_b(R, t, False).items() if c}
        return M_
    return homology(diffs, lambda n: len(bases[n]), range(N)), bases


# -- reduced cyclic sequence -------------------------------------------------

def reduced_cyclic(A, window=4):
    """HC(k) -> HC(A) -> HC-bar(A) -> HC(k)[-1] with C-bar = C^lambda(A)/C^lambda(k)."""
    if not A.unital:
        raise AlgebraError("reduced cyclic homology needs a unital algebra")
    top = window + 1
    X = ConnesComplex(A, top + 1)
    k = FinDimAlgebra("k", ["1"], {(0, 0): {0: mpq(1)}}, True)
    K = ConnesComplex(k, top + 1)

    def unit_class(n):
        v = X.classes(n)[1][(0,) * (n + 1)]
        return None if v is None else v[0]

    def bar_b(n):
        if n <= 0 or n > top + 1:
            return None
        keep_src = [i for i in range(X.dim(n)) if i != unit_class(n)]
        keep_tgt = {i: j for j, i in enumerate(i for i in range(X.dim(n - 1)) if i != unit_class(n - 1))}
        B = X.b(n)
        return SMat(len(keep_tgt), len(keep_src),
                    [{keep_tgt[i]: c for i, c in B.cols[s].items() if i in keep_tgt} for s in keep_src])

    def bar_dim(n):
        return X.dim(n) - (0 if unit_class(n) is None else 1)

    HB = {r.degree: r.node for r in homology(bar_b, bar_dim, range(top + 1))}
    HA = {r.degree: r.node for r in homology(lambda n: X.b(n) if 0 < n <= top + 1 else None, X.dim,
                                              range(top + 1))}
    HK = {r.degree: r.node for r in homology(lambda n: K.b(n) if 0 < n <= top + 1 else None, K.dim,
                                              range(top + 1))}
    j_star, q_star = {}, {}
    for n in range(top + 1):
        unit = SMat(A.dim, 1, [{0: mpq(1)}])
        Fj = connes_map(K, X, unit, n)
        uc = unit_class(n)
        keep = {i: j for j, i in enumerate(i for i in range(X.dim(n)) if i != uc)}
        Fq = SMat(bar_dim(n), X.dim(n), [({keep[i]: mpq(1)} if i in keep else {}) for i in range(X.dim(n))])
        j_star[n] = induced_map(Fj, HK[n], HA[n])
        q_star[n] = induced_map(Fq, HA[n], HB[n])
    nodes = {}
    for n in range(window + 1):
        nodes["HC_%d(A)" % n] = _exact_at(_pad(j_star[n], HA[n].dim, HK[n].dim),
                                          _pad(q_star[n], HB[n].dim, HA[n].dim) or None, HA[n].dim)
        if n >= 1:
            nodes["connecting_%d" % n] = (HB[n].dim - _rk(q_star[n])) == (HK[n - 1].dim - _rk(j_star[n - 1]))
    return {"HC_k": [HK[n].dim for n in range(window + 1)],
            "HC_A": [HA[n].dim for n in range(window + 1)],
            "HCbar_A": [HB[n].dim for n in range(window + 1)],
            "nodes": nodes, "ok": all(nodes.values())}


# -- derivations -------------------------------------------------------------

def derivation_defects(A, D):
    """Basis pairs (i, j) where D(e_i e_j) != D(e_i) e_j + e_i D(e_j)."""
    bad = []
    for i in range(A.dim):
        for j in range(A.dim):
            lhs = D.apply(A.table[i][j])
            rhs = A.mul(D.cols[i], {j: mpq(1)})
            for k, c in A.mul({i: mpq(1)}, D.cols[j]).items():
                rhs[k] = rhs.get(k, 0) + c
            rhs = {k: c for k, c in rhs.items() if c}
            if lhs != rhs:
                bad.append((i, j))
    return bad


def inner_derivation(A, x):
    """D = [x, .] as an SMat."""
    cols = []
    for j in range(A.dim):
        u = A.mul(x, {j: mpq(1)})
        for k, c in A.mul({j: mpq(1)}, x).items():
            u[k] = u.get(k, 0) - c
        cols.append({k: c for k, c in u.items() if c})
    return SMat(A.dim, A.dim, cols)


def lie_derivative_forms(A, D, n):
    """L_D on reduced forms of degree n (unit slots vanish)."""
    if derivation_defects(A, D):
        raise AlgebraError("not a derivation")
    sp = space(A, "reduced", n)
    red = set(A.reduced_indices())
    M = SMat(sp.dim, sp.dim)
    for j, t in enumerate(sp.basis):
        col = {}
        for i in range(len(t)):
            for k, c in D.cols[t[i]].items():
                if i > 0 and k not in red:
                    continue
                s = t[:i] + (k,) + t[i + 1:]
                idx = sp.index[s]
                col[idx] = col.get(idx, 0) + c
        M.cols[j] = {k: c for k, c in col.items() if c}
    return M


def lie_derivative(A, D, N):
    """Commutation of L_D with b, d, kappa in degrees <= N (matrix identities)."""
    F = forms(A, N)
    L = {n: lie_derivative_forms(A, D, n) for n in range(N + 1)}
    out = {}
    for n in range(N + 1):
        row = {"kappa": F.kappa(n) @ L[n] == L[n] @ F.kappa(n)}
        if n >= 1:
            row["b"] = F.b(n) @ L[n] == L[n - 1] @ F.b(n)
        if n < N:
            row["d"] = F.d(n) @ L[n] == L[n + 1] @ F.d(n)
        out[n] = row
    return {"degrees": out, "ok": all(all(r.values()) for r in out.values())}


def _mixed_lie(A, D, X, n):
    """L_D on the mixed complex in total degree n, block diagonal."""
    off = X.offsets(n)
    dim = X.dim(n)
    M = SMat(dim, dim)
    for p, deg in X.blocks(n):
        o = off[p]
        L = lie_derivative_forms(A, D, deg)
        for j, col in enumerate(L.cols):
            M.cols[o + j] = {o + i: c for i, c in col.items()}
    return M


def ls_zero(A, D, window=4):
    """L_D o S on HC_n for 2 <= n <= window is zero."""
    N = window + 2
    X = MixedComplex(A, N)
    HC = {r.degree: r.node for r in cyclic_homology(A, window, "mixed", N=N)}
    out = {}
    for n in range(2, window + 1):
        F = _mixed_lie(A, D, X, n - 2) @ X.S(n)
        rows = induced_map(F, HC[n], HC[n - 2])
        out[n] = all(x == 0 for r in rows for x in r)
    L_alone = {}
    for n in range(window + 1):
        rows = induced_map(_mixed_lie(A, D, X, n), HC[n], HC[n])
        L_alone[n] = _rk(rows)
    return {"LS_zero": out, "rank_L_D": L_alone, "ok": all(out.values())}


def inner_acts_trivially(A, x, window=3):
    """An inner derivation acts as zero on HH_n, n <= window."""
    D = inner_derivation(A, x)
    N = window + 2
    HH = {r.degree: r.node for r in hochschild(A, window, N=N)}
    out = {}
    for n in range(window + 1):
        rows = induced_map(lie_derivative_forms(A, D, n), HH[n], HH[n])
        out[n] = all(v == 0 for r in rows for v in r)
    return {"degrees": out, "ok": all(out.values())}
