"""Chevalley-Eilenberg homology of gl_r(A), gl_r(k)-coinvariants and the
cyclic-class subcomplex (Loday-Quillen desk checks)."""

import os
from dataclasses import dataclass, field
from itertools import combinations, permutations, product
from math import comb, factorial

from gmpy2 import mpq

from .homology import ConnesComplex, cyclic_homology
from .linalg import Homology, SMat, Subspace, vaxpy


class ResourceError(RuntimeError):
    pass


def max_dim():
    return int(os.environ.get("NCH_MAX_DIM", "20000"))


class LieAlgebra:
    """Basis labels plus bracket structure constants {(i, j): {k: c}}.

    For gl_r(A) the basis element E_ij (x) a_k sits at index (i*r + j)*dim A + k and
    ``weights`` records e_i - e_j, which is what the diagonal of gl_r(k) sees.
    """

    def __init__(self, name, labels, bracket, r=None, alg=None):
        self.name = name
        self.labels = list(labels)
        self.dim = len(self.labels)
        self.br = bracket
        self.r = r
        self.alg = alg

    @classmethod
    def from_algebra(cls, A):
        br = {}
        for i, j in product(range(A.dim), repeat=2):
            v = dict(A.table[i][j])
            vaxpy(v, A.table[j][i], -1)
            if v:
                br[(i, j)] = v
        return cls("Lie(%s)" % A.name, A.basis, br)

    @classmethod
    def gl(cls, A, r):
        d = A.dim
        labels = ["E%d%d(%s)" % (i + 1, j + 1, A.basis[k]) for i in range(r) for j in range(r) for k in range(d)]
        idx = lambda i, j, k: (i * r + j) * d + k
        br = {}
        for (i, j, a), (p, q, b) in product(product(range(r), range(r), range(d)), repeat=2):
            v = {}
            if j == p:
                for k, c in A.table[a][b].items():
                    vaxpy(v, {idx(i, q, k): c})
            if q == i:
                for k, c in A.table[b][a].items():
                    vaxpy(v, {idx(p, j, k): -c})
            if v:
                br[(idx(i, j, a), idx(p, q, b))] = v
        g = cls("gl_%d(%s)" % (r, A.name), labels, br, r, A)
        return g

    def bracket(self, i, j):
        return self.br.get((i, j), {})

    def entry(self, x):
        """(i, j, k) for a basis index of gl_r(A)."""
        d = self.alg.dim
        ij, k = divmod(x, d)
        return ij // self.r, ij % self.r, k

    def weight(self, x):
        i, j, _ = self.entry(x)
        w = [0] * self.r
        w[i] += 1
        w[j] -= 1
        return tuple(w)

    def check(self):
        """Antisymmetry and Jacobi on basis pairs and triples."""
        anti = all({k: -c for k, c in self.bracket(j, i).items()} == self.bracket(i, j)
                   for i in range(self.dim) for j in range(self.dim))
        jac = True
        for i, j, k in combinations(range(self.dim), 3):
            tot = {}
            for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
                for m, x in self.bracket(b, c).items():
                    vaxpy(tot, self.bracket(a, m), x)
            if tot:
                jac = False
                break
        return {"antisymmetric": anti, "jacobi": jac}


def _sort_sign(t):
    """(sorted tuple, sign) or (None, 0) when t has a repeat."""
    if len(set(t)) < len(t):
        return None, 0
    t = list(t)
    s = 1
    for i in range(len(t)):
        for j in range(len(t) - 1 - i):
            if t[j] > t[j + 1]:
                t[j], t[j + 1] = t[j + 1], t[j]
                s = -s
    return tuple(t), s


class ChainSpace:
    """Basis of Lambda^n g (exterior) or g^(x)n (tensor)."""

    def __init__(self, g, n, power="exterior", cap=None):
        cap = max_dim() if cap is None else cap
        size = comb(g.dim, n) if power == "exterior" else g.dim ** n
        if size > cap:
            raise ResourceError("dim %s^%d %s = %d exceeds cap %d" % (power, n, g.name, size, cap))
        self.g, self.n, self.power = g, n, power
        if power == "exterior":
            self.basis = list(combinations(range(g.dim), n))
        elif power == "tensor":
            self.basis = list(product(range(g.dim), repeat=n))
        else:
            raise ValueError("power must be exterior or tensor")
        self.index = {t: i for i, t in enumerate(self.basis)}
        self.dim = len(self.basis)

    def vec(self, terms):
        """{tuple: c} with arbitrary order tuples -> sparse vector."""
        out = {}
        for t, c in terms.items():
            if self.power == "exterior":
                t, s = _sort_sign(t)
                if not s:
                    continue
                c = c * s
            vaxpy(out, {self.index[t]: c})
        return out

    def weight(self, t):
        r = self.g.r
        w = [0] * r
        for x in t:
            for a, b in enumerate(self.g.weight(x)):
                w[a] += b
        return tuple(w)


def ce_differential(g, src, tgt):
    """d(x_1 ^ ... ^ x_n) = sum_{i<j} (-1)^{i+j} [x_i, x_j] ^ x_1 ^ .. ^ x_n (hats at i, j)."""
    M = SMat(tgt.dim, src.dim)
    n = src.n
    for col, t in enumerate(src.basis):
        terms = {}
        for i, j in combinations(range(n), 2):
            s = -1 if (i + j) & 1 else 1
            rest = t[:i] + t[i + 1:j] + t[j + 1:]
            for k, c in g.bracket(t[i], t[j]).items():
                u = (k,) + rest
                terms[u] = terms.get(u, 0) + s * c
        M.cols[col] = tgt.vec({u: c for u, c in terms.items() if c})
    return M


def lie_derivative(g, X, space):
    """Matrix of X acting on Lambda^n g or g^(x)n by derivations; X is a basis index of g."""
    M = SMat(space.dim, space.dim)
    for col, t in enumerate(space.basis):
        terms = {}
        for i in range(space.n):
            for k, c in g.bracket(X, t[i]).items():
                u = t[:i] + (k,) + t[i + 1:]
                terms[u] = terms.get(u, 0) + c
        M.cols[col] = space.vec({u: c for u, c in terms.items() if c})
    return M


def ce_homology(g, degrees, cap=None):
    """Dims of H_n(g) with d^2 = 0 checked."""
    spaces = {}

    def sp(n):
        if n not in spaces:
            spaces[n] = ChainSpace(g, n, cap=cap)
        return spaces[n]
    out = {}
    for n in degrees:
        dout = ce_differential(g, sp(n), sp(n - 1)) if n >= 1 else None
        din = ce_differential(g, sp(n + 1), sp(n)) if n + 1 <= g.dim else None
        if dout is not None and din is not None and not (dout @ din).is_zero():
            raise AssertionError("CE differential does not square to zero at %d" % n)
        out[n] = Homology(dout, din, sp(n).dim).dim if n <= g.dim else 0
    return out


def gl_k_index(g, p, q):
    """Basis index of the scalar matrix unit E_pq (x) 1 in gl_r(A), A unital."""
    return (p * g.r + q) * g.alg.dim


class Coinvariants:
    """C_n(g)_h for h = gl_r(k) inside g = gl_r(A), A unital.

    Basis elements of nonzero weight lie in h C_n already (a diagonal element acts on
    them by a nonzero scalar), so only the weight zero part and the root vector images
    landing there are kept.
    """

    def __init__(self, g, n, power="exterior", cap=None):
        if not g.alg.unital:
            raise ValueError("coefficients must be unital")
        self.g, self.n = g, n
        self.space = ChainSpace(g, n, power, cap)
        sp = self.space
        self.wt = [sp.weight(t) for t in sp.basis]
        self.zero = [i for i, w in enumerate(self.wt) if not any(w)]
        R = Subspace()
        r = g.r
        for p, q in product(range(r), repeat=2):
            if p == q:
                continue
            X = gl_k_index(g, p, q)
            need = [0] * r
            need[p] -= 1
            need[q] += 1
            need = tuple(need)
            for col, t in enumerate(sp.basis):
                if self.wt[col] != need:
                    continue
                terms = {}
                for i in range(n):
                    for k, c in g.bracket(X, t[i]).items():
                        u = t[:i] + (k,) + t[i + 1:]
                        terms[u] = terms.get(u, 0) + c
                v = sp.vec({u: c for u, c in terms.items() if c})
                if v:
                    R.add(v)
        self.R = R
        self.qbasis = [i for i in self.zero if i not in R.rows]
        self.qindex = {i: a for a, i in enumerate(self.qbasis)}

    @property
    def dim(self):
        return len(self.qbasis)

    def normal_form(self, v):
        """Coordinates of the class of v in the quotient basis."""
        w = {i: c for i, c in v.items() if not any(self.wt[i])}
        w, _ = self.R.reduce(w)
        return {self.qindex[i]: c for i, c in w.items()}


def coinvariant_differential(src, tgt):
    g = src.g
    d = ce_differential(g, src.space, tgt.space)
    M = SMat(tgt.dim, src.dim)
    for a, i in enumerate(src.qbasis):
        M.cols[a] = tgt.normal_form(d.cols[i])
    return M


# -- the permutation side ------------------------------------------------------

def _compose(a, b):
    return tuple(a[b[i]] for i in range(len(a)))


def _inverse(a):
    out = [0] * len(a)
    for i, x in enumerate(a):
        out[x] = i
    return tuple(out)


def _perm_sign(a):
    s, seen = 1, set()
    for i in range(len(a)):
        if i in seen:
            continue
        j, length = i, 0
        while j not in seen:
            seen.add(j)
            j = a[j]
            length += 1
        if length % 2 == 0:
            s = -s
    return s


def permutation_side_dim(A, n, signed=True):
    """dim (k[S_n] (x) A^(x)n)_{S_n}, S_n acting by conjugation and by permuting factors;
    signed=True twists by the sign character (the exterior power case)."""
    perms = list(permutations(range(n)))
    seen = set()
    count = 0
    for sigma in perms:
        for t in product(range(A.dim), repeat=n):
            if (sigma, t) in seen:
                continue
            orbit = set()
            alive = True
            for pi in perms:
                pinv = _inverse(pi)
                img = (_compose(_compose(pi, sigma), pinv), tuple(t[pinv[i]] for i in range(n)))
                orbit.add(img)
                if img == (sigma, t) and signed and _perm_sign(pi) < 0:
                    alive = False
            seen |= orbit
            count += alive
    return count


@dataclass
class CoinvariantReport:
    algebra: str
    r: int
    n: int
    power: str
    lie_side: int
    permutation_side: int
    stable_range: bool

    @property
    def equal(self):
        return self.lie_side == self.permutation_side

    def as_json(self):
        return {"algebra": self.algebra, "r": self.r, "n": self.n, "power": self.power,
                "lie_side": self.lie_side, "permutation_side": self.permutation_side,
                "equal": self.equal, "stable_range": self.stable_range}


def coinvariants(A, r, n, power="exterior", cap=None):
    g = LieAlgebra.gl(A, r)
    Q = Coinvariants(g, n, power, cap)
    if power == "exterior":
        perm = permutation_side_dim(A, n)
    else:
        # (g^(x)n)_h = k[S_n] (x) A^(x)n, no quotient by S_n
        perm = factorial(n) * A.dim ** n
    return CoinvariantReport(A.name, r, n, power, Q.dim, perm, r >= n)


def tr_sigma(r, sigma, mats):
    """prod over cycles of sigma of tr(X^{i_1} ... X^{i_l}); mats are dense r x r lists."""
    n = len(sigma)
    seen = set()
    out = mpq(1)
    for i in range(n):
        if i in seen:
            continue
        cyc = []
        j = i
        while j not in seen:
            seen.add(j)
            cyc.append(j)
            j = sigma[j]
        P = [[mpq(int(a == b)) for b in range(r)] for a in range(r)]
        for c in cyc:
            X = mats[c]
            P = [[sum(P[a][m] * X[m][b] for m in range(r)) for b in range(r)] for a in range(r)]
        out *= sum(P[a][a] for a in range(r))
    return out


def _unit(r, p, q):
    return [[mpq(int(a == p and b == q)) for b in range(r)] for a in range(r)]


def tr_sigma_invariance(r, n):
    """Check sum_i tr_sigma(.., [X, X^i], ..) = 0 for all sigma, all basis X and X^i."""
    units = [(p, q) for p in range(r) for q in range(r)]
    bad = []
    for sigma in permutations(range(n)):
        for X in units:
            Xm = _unit(r, *X)
            for t in product(units, repeat=n):
                mats = [_unit(r, *u) for u in t]
                tot = mpq(0)
                for i in range(n):
                    Y = mats[i]
                    br = [[sum(Xm[a][m] * Y[m][b] - Y[a][m] * Xm[m][b] for m in range(r)) for b in range(r)]
                          for a in range(r)]
                    tot += tr_sigma(r, sigma, mats[:i] + [br] + mats[i + 1:])
                if tot:
                    bad.append((sigma, X, t))
                    break
    return not bad


def tr_sigma_rank(r, n):
    """Rank of the functionals {tr_sigma} on gl_r(k)^(x)n; n! exactly when they are independent."""
    units = [(p, q) for p in range(r) for q in range(r)]
    S = Subspace()
    tuples = list(product(units, repeat=n))
    for sigma in permutations(range(n)):
        v = {}
        for col, t in enumerate(tuples):
            x = tr_sigma(r, sigma, [_unit(r, *u) for u in t])
            if x:
                v[col] = x
        S.add(v)
    return S.dim


def stable_range_report(pairs):
    """For each (r, n): are the tr_sigma independent, and does r >= n hold."""
    return [{"r": r, "n": n, "rank": tr_sigma_rank(r, n), "n!": factorial(n),
             "independent": tr_sigma_rank(r, n) == factorial(n), "r>=n": r >= n} for r, n in pairs]


# -- cyclic classes ------------------------------------------------------------

def lq_chain(g, t):
    """E_12 a_1 ^ E_23 a_2 ^ ... ^ E_n1 a_n as {tuple: 1}."""
    n = len(t)
    d = g.alg.dim
    idx = tuple((i * g.r + (i + 1) % n) * d + k for i, k in enumerate(t))
    return {idx: mpq(1)}


@dataclass
class CyclicClassReport:
    algebra: str
    r: int
    degrees: list
    subcomplex: bool
    space_dims: list
    connes_dims: list
    homology_dims: list
    hc_dims: list
    ok: bool = field(init=False)

    def __post_init__(self):
        self.ok = self.subcomplex and self.space_dims == self.connes_dims and self.homology_dims == self.hc_dims

    def as_json(self):
        return {k: getattr(self, k) for k in ("algebra", "r", "degrees", "subcomplex", "space_dims",
                                              "connes_dims", "homology_dims", "hc_dims", "ok")}


def cyclic_class_homology(A, nmax, r=None, cap=None):
    """Homology of the span of cyclic-class chains inside C_n(gl_r(A))_{gl_r(k)}, 1 <= n <= nmax,
    compared with HC_{n-1}(A). Uses r = nmax + 1 by default so boundaries from degree nmax + 1 exist."""
    r = nmax + 1 if r is None else r
    if r < nmax + 1:
        raise ValueError("stable range needs r >= nmax + 1")
    g = LieAlgebra.gl(A, r)
    Q = {n: Coinvariants(g, n, cap=cap) for n in range(0, nmax + 2)}
    sub = {}
    for n in range(1, nmax + 2):
        S = Subspace(track=True)
        gens = []
        for t in product(range(A.dim), repeat=n):
            v = Q[n].normal_form(Q[n].space.vec(lq_chain(g, t)))
            if S.add(v, tag=len(gens)) is not None:
                gens.append(v)
        sub[n] = (S, gens)
    sub[0] = (Subspace(track=True), [])
    closed = True
    D = {}
    for n in range(1, nmax + 2):
        dQ = coinvariant_differential(Q[n], Q[n - 1])
        S_lo, gens_lo = sub[n - 1]
        M = SMat(len(gens_lo), len(sub[n][1]))
        for j, v in enumerate(sub[n][1]):
            w = dQ.apply(v)
            c = S_lo.coords(w) if w else {}
            if c is None:
                closed = False
                c = {}
            M.cols[j] = c
        D[n] = M
    hom = []
    for n in range(1, nmax + 1):
        dout = D[n] if n >= 2 else None
        hom.append(Homology(dout, D[n + 1], len(sub[n][1])).dim)
    C = ConnesComplex(A, nmax)
    hc = [res.dim for res in cyclic_homology(A, nmax - 1, model="connes", N=nmax + 1)]
    return CyclicClassReport(A.name, r, list(range(1, nmax + 1)), closed,
                             [len(sub[n][1]) for n in range(1, nmax + 1)],
                             [C.dim(n - 1) for n in range(1, nmax + 1)], hom, hc)


def quasi_iso_check(A, r, degrees, cap=None):
    """H_n(gl_r(A)) versus the homology of the coinvariant complex."""
    g = LieAlgebra.gl(A, r)
    full = ce_homology(g, degrees, cap)
    Q = {}

    def q(n):
        if n not in Q:
            Q[n] = Coinvariants(g, n, cap=cap)
        return Q[n]
    co = {}
    for n in degrees:
        dout = coinvariant_differential(q(n), q(n - 1)) if n >= 1 else None
        din = coinvariant_differential(q(n + 1), q(n)) if n + 1 <= g.dim else None
        co[n] = Homology(dout, din, q(n).dim).dim
    return {"full": full, "coinvariants": co, "equal": full == co}


def action_commutes(g, n, cap=None):
    """d L_X = L_X d on Lambda^n for every basis X of gl_r(k)."""
    src, tgt = ChainSpace(g, n, cap=cap), ChainSpace(g, n - 1, cap=cap)
    d = ce_differential(g, src, tgt)
    for p, q in product(range(g.r), repeat=2):
        X = gl_k_index(g, p, q)
        if not ((d @ lie_derivative(g, X, src)) - (lie_derivative(g, X, tgt) @ d)).is_zero():
            return False
    return True
