"""Noncommutative differential forms and the operators acting on them.

Reduced forms: Omega^n A = A (x) Abar^{(x)n}; a basis tuple (a_0, ..., a_n)
stands for a_0 da_1 ... da_n, with a_i != unit for i >= 1.  Unreduced chains
are plain tuples in A^{(x)k}.
"""

from functools import lru_cache
from itertools import product
from math import factorial

import sympy
from gmpy2 import mpq

from .linalg import SMat, block, inverse, vaxpy, vscale


class TruncationError(ValueError):
    """A degree-raising operator was asked for past the truncation bound."""


class ConventionError(ValueError):
    pass


class TupleSpace:
    """Basis of index tuples in lexicographic order."""

    def __init__(self, basis, degree, convention):
        self.basis = basis
        self.index = {t: i for i, t in enumerate(basis)}
        self.degree = degree
        self.convention = convention

    @property
    def dim(self):
        return len(self.basis)

    def vector(self, terms):
        """{tuple: coeff} -> {index: coeff}."""
        out = {}
        for t, c in terms.items():
            if c:
                vaxpy(out, {self.index[t]: c})
        return out

    def terms(self, vec):
        return {self.basis[i]: c for i, c in vec.items()}

    def __len__(self):
        return len(self.basis)

    def __repr__(self):
        return "TupleSpace(%s, n=%d, dim=%d)" % (self.convention, self.degree, self.dim)


def build_spaces(alg, convention, N):
    """Chain spaces for degrees 0..N.

    reduced: Omega^n A (needs a unital algebra); unreduced: A^{(x)(n+1)};
    bar: A^{(x)n}.
    """
    if N < 0:
        raise ValueError("N must be >= 0")
    out = []
    for n in range(N + 1):
        out.append(space(alg, convention, n))
    return out


@lru_cache(maxsize=None)
def space(alg, convention, n):
    d = alg.dim
    if convention == "reduced":
        if not alg.unital:
            raise ConventionError("reduced forms need a unital algebra (unitalize first)")
        basis = list(product(range(d), *([range(1, d)] * n)))
    elif convention == "unreduced":
        basis = list(product(range(d), repeat=n + 1))
    elif convention == "bar":
        basis = list(product(range(d), repeat=n))
    else:
        raise ConventionError("unknown convention %r" % convention)
    return TupleSpace(basis, n, convention)


# -- tuple-level formulas ---------------------------------------------------

def _put(out, t, c):
    y = out.get(t)
    if y is None:
        out[t] = c
    else:
        y = y + c
        if y:
            out[t] = y
        else:
            del out[t]


def t_b(alg, t, reduced, wrap=True):
    """Hochschild b (wrap=True) or b' (wrap=False) on a tuple."""
    out = {}
    n = len(t) - 1
    tab = alg.table
    for i in range(n):
        s = -1 if i & 1 else 1
        for k, c in tab[t[i]][t[i + 1]].items():
            if reduced and i >= 1 and k == 0:
                continue
            _put(out, t[:i] + (k,) + t[i + 2:], s * c)
    if wrap and n >= 1:
        s = -1 if n & 1 else 1
        for k, c in tab[t[n]][t[0]].items():
            _put(out, (k,) + t[1:n], s * c)
    return out


def t_d(t):
    if t[0] == 0:
        return {}
    return {(0,) + t: mpq(1)}


def t_kappa(alg, t):
    n = len(t) - 1
    if n == 0:
        return {t: mpq(1)}
    out = {}
    s = -1 if n & 1 else 1
    if t[0] != 0:
        _put(out, (t[n],) + t[:n], mpq(s))
    for k, c in alg.table[t[n]][t[0]].items():
        if k == 0:
            continue
        _put(out, (0, k) + t[1:n], -s * c)
    return out


def t_lambda(t):
    k = len(t)
    s = -1 if (k - 1) & 1 else 1
    return {(t[-1],) + t[:-1]: mpq(s)}


def t_B_explicit(t):
    """Connes' B on a reduced tuple, written out; used as a cross-check."""
    n = len(t) - 1
    out = {}
    for i in range(n + 1):
        rot = t[i:] + t[:i]
        if 0 in rot:
            continue
        _put(out, (0,) + rot, mpq(-1 if (n * i) & 1 else 1))
    return out


def _matrix(src, tgt, fn):
    M = SMat(tgt.dim, src.dim)
    idx = tgt.index
    for j, t in enumerate(src.basis):
        col = {}
        for u, c in fn(t).items():
            col[idx[u]] = c
        M.cols[j] = col
    return M


# -- the operator pack --------------------------------------------------------

def _poly_at(coeffs, K):
    """sum coeffs[i] K^i by Horner; coeffs are rationals, low degree first."""
    n = K.n
    out = SMat.identity(n, coeffs[-1]) if coeffs[-1] else SMat.zero(n, n)
    for c in reversed(coeffs[:-1]):
        out = out @ K
        if c:
            out = out + SMat.identity(n, c)
    return out


@lru_cache(maxsize=None)
def harmonic_polys(n):
    """Bezout data for (x^n - 1)(x^{n+1} - 1) = (x-1)^2 q(x).

    Returns (p, g): P = p(kappa) is the projection onto ker(kappa-1)^2 and
    G = g(kappa) satisfies G(1-kappa) = 1-P, GP = 0.
    """
    x = sympy.Symbol("x")
    q = sympy.Poly(sum(x ** i for i in range(n)) * sum(x ** i for i in range(n + 1)), x, domain="QQ")
    sq = sympy.Poly((x - 1) ** 2, x, domain="QQ")
    a, bb, h = sympy.gcdex(sq, q)
    assert h == 1
    p = (bb * q).rem(sympy.Poly((x ** n - 1) * (x ** (n + 1) - 1), x, domain="QQ"))
    one_minus = sympy.Poly(1 - x, x, domain="QQ")
    ginv, _, h2 = sympy.gcdex(one_minus, q)
    assert h2 == 1
    # g(1-x) = 1 mod q, so G = g(kappa)(1 - P)
    m = sympy.Poly((x ** n - 1) * (x ** (n + 1) - 1), x, domain="QQ")
    g = (ginv * (sympy.Poly(1, x, domain="QQ") - p)).rem(m)

    def coeffs(poly):
        c = [mpq(int(r.p), int(r.q)) for r in reversed(poly.all_coeffs())]
        return c or [mpq(0)]
    return coeffs(p), coeffs(g)


class Forms:
    """Operators on reduced forms of a unital algebra, degrees 0..N."""

    def __init__(self, alg, N):
        if not alg.unital:
            raise ConventionError("reduced forms need a unital algebra (unitalize first)")
        self.alg = alg
        self.N = N
        self._cache = {}

    def space(self, n):
        if n < 0 or n > self.N:
            raise TruncationError("degree %d outside 0..%d" % (n, self.N))
        return space(self.alg, "reduced", n)

    def _get(self, key, fn):
        M = self._cache.get(key)
        if M is None:
            M = fn()
            self._cache[key] = M
        return M

    def _raise_check(self, n):
        if n + 1 > self.N:
            raise TruncationError("degree-raising operator at top degree %d" % n)

    def identity(self, n):
        return SMat.identity(self.space(n).dim)

    def zero(self, n, m):
        return SMat.zero(self.space(m).dim, self.space(n).dim)

    def b(self, n):
        """b: Omega^n -> Omega^{n-1}."""
        if n == 0:
            return SMat.zero(0, self.space(0).dim)
        return self._get(("b", n), lambda: _matrix(self.space(n), self.space(n - 1),
                                                   lambda t: t_b(self.alg, t, True)))

    def d(self, n):
        self._raise_check(n)
        return self._get(("d", n), lambda: _matrix(self.space(n), self.space(n + 1), t_d))

    def kappa(self, n):
        return self._get(("k", n), lambda: _matrix(self.space(n), self.space(n),
                                                   lambda t: t_kappa(self.alg, t)))

    def kappa_inv(self, n):
        return self._get(("ki", n), lambda: inverse(self.kappa(n)))

    def kappa_pow(self, n, e):
        return self._get(("kp", n, e), lambda: self.kappa(n) ** e)

    def B(self, n):
        """B = sum_{j=0}^{n} kappa^j d : Omega^n -> Omega^{n+1}."""
        self._raise_check(n)

        def build():
            K = self.kappa(n + 1)
            acc = self.d(n)
            term = acc
            for _ in range(n):
                term = K @ term
                acc = acc + term
            return acc
        return self._get(("B", n), build)

    def P(self, n):
        if n == 0:
            return self.identity(0)
        p, _ = harmonic_polys(n)
        return self._get(("P", n), lambda: _poly_at(p, self.kappa(n)))

    def G(self, n):
        if n == 0:
            return self.zero(0, 0)
        _, g = harmonic_polys(n)
        return self._get(("G", n), lambda: _poly_at(g, self.kappa(n)))

    def N_kappa2(self, m):
        """sum_{j=0}^{k-1} kappa^{2j} on Omega^{2k-1} (m = 2k-1)."""
        assert m % 2 == 1
        k = (m + 1) // 2

        def build():
            K2 = self.kappa(m) @ self.kappa(m)
            acc = self.identity(m)
            term = acc
            for _ in range(k - 1):
                term = K2 @ term
                acc = acc + term
            return acc
        return self._get(("Nk2", m), build)

    def beta(self, n):
        """Components of beta = b - (1+kappa)d on odd Omega^n: (to n-1, to n+1)."""
        assert n % 2 == 1
        down = self.b(n)
        up = -((self.identity(n + 1) + self.kappa(n + 1)) @ self.d(n))
        return down, up

    def nat_delta(self, n):
        """Components of -N_{kappa^2} b + B on even Omega^n: (to n-1 or None, to n+1)."""
        assert n % 2 == 0
        down = None if n == 0 else -(self.N_kappa2(n - 1) @ self.b(n))
        return down, self.B(n)

    @staticmethod
    def c_scale(n):
        """c_{2m} = c_{2m+1} = (-1)^m m!."""
        m = n // 2
        return mpq((-1) ** m * factorial(m))

    @staticmethod
    def z_scale(n):
        """z_{2m} = (-1)^m/m!, z_{2m+1} = (-1)^m 2^m/(2m+1)!!."""
        m = n // 2
        if n % 2 == 0:
            return mpq((-1) ** m, factorial(m))
        dfact = 1
        for j in range(1, 2 * m + 2, 2):
            dfact *= j
        return mpq((-1) ** m * 2 ** m, dfact)


class Chains:
    """Operators on unreduced chains A^{(x)k}, indexed by k >= 1."""

    def __init__(self, alg, kmax):
        self.alg = alg
        self.kmax = kmax
        self._cache = {}

    def space(self, k):
        if k < 0 or k > self.kmax:
            raise TruncationError("tensor length %d outside 0..%d" % (k, self.kmax))
        return space(self.alg, "bar", k)

    def _get(self, key, fn):
        M = self._cache.get(key)
        if M is None:
            M = fn()
            self._cache[key] = M
        return M

    def b(self, k):
        """Hochschild b: A^{(x)k} -> A^{(x)(k-1)}."""
        return self._get(("b", k), lambda: _matrix(self.space(k), self.space(k - 1),
                                                   lambda t: t_b(self.alg, t, False)))

    def bprime(self, k):
        return self._get(("b'", k), lambda: _matrix(self.space(k), self.space(k - 1),
                                                    lambda t: t_b(self.alg, t, False, wrap=False)))

    def lam(self, k):
        return self._get(("l", k), lambda: _matrix(self.space(k), self.space(k), t_lambda))

    def norm(self, k):
        def build():
            L = self.lam(k)
            acc = SMat.identity(self.space(k).dim)
            term = acc
            for _ in range(k - 1):
                term = L @ term
                acc = acc + term
            return acc
        return self._get(("N", k), build)


@lru_cache(maxsize=None)
def forms(alg, N):
    """Cached operator pack on reduced forms."""
    return Forms(alg, N)


@lru_cache(maxsize=None)
def chains(alg, kmax):
    return Chains(alg, kmax)


# -- graded chains and products -------------------------------------------------

class GradedChain:
    """Finite sum of reduced basis forms, {tuple: coeff}, truncated at degree N."""

    def __init__(self, alg, terms=None, N=None):
        self.alg = alg
        self.N = N
        self.terms = {t: c for t, c in (terms or {}).items() if c}
        if N is not None:
            for t in self.terms:
                if len(t) - 1 > N:
                    raise TruncationError("term of degree %d beyond N=%d" % (len(t) - 1, N))

    @classmethod
    def basis_form(cls, alg, t, c=1, N=None):
        return cls(alg, {tuple(t): mpq(c)}, N)

    @classmethod
    def from_element(cls, alg, coords, N=None):
        return cls(alg, {(k,): c for k, c in coords.items()}, N)

    def degrees(self):
        return sorted({len(t) - 1 for t in self.terms})

    def part(self, n):
        return GradedChain(self.alg, {t: c for t, c in self.terms.items() if len(t) - 1 == n}, self.N)

    def vector(self, n):
        sp = space(self.alg, "reduced", n)
        return sp.vector({t: c for t, c in self.terms.items() if len(t) - 1 == n})

    @classmethod
    def from_vector(cls, alg, n, vec, N=None):
        sp = space(alg, "reduced", n)
        return cls(alg, sp.terms(vec), N)

    def __add__(self, o):
        out = dict(self.terms)
        for t, c in o.terms.items():
            _put(out, t, c)
        return GradedChain(self.alg, out, self.N)

    def __sub__(self, o):
        return self + o * (-1)

    def __mul__(self, c):
        return GradedChain(self.alg, {t: x * c for t, x in self.terms.items()}, self.N)

    __rmul__ = __mul__

    def __neg__(self):
        return self * (-1)

    def __eq__(self, o):
        return isinstance(o, GradedChain) and self.terms == o.terms

    def is_zero(self):
        return not self.terms

    def __repr__(self):
        from .scalars import fmt
        if not self.terms:
            return "0"
        parts = []
        for t in sorted(self.terms, key=lambda s: (len(s), s)):
            parts.append("%s*%s" % (fmt(self.terms[t]), _form_label(self.alg, t)))
        return " + ".join(parts)


def _form_label(alg, t):
    s = alg.basis[t[0]] if t[0] != 0 else ""
    s += "".join("d" + alg.basis[k] for k in t[1:])
    return s or "1"


def apply_operator(kind, chain, N=None):
    """Apply a named operator degreewise to a GradedChain.

    kinds: b, d, kappa, kappa_inv, B, P, G, c, z.
    """
    N = chain.N if N is None else N
    if N is None:
        raise ValueError("truncation bound required")
    F = forms(chain.alg, N)
    out = GradedChain(chain.alg, {}, N)
    for n in chain.degrees():
        v = chain.vector(n)
        if kind == "b":
            if n == 0:
                continue
            w, m = F.b(n).apply(v), n - 1
        elif kind == "d":
            w, m = F.d(n).apply(v), n + 1
        elif kind == "B":
            w, m = F.B(n).apply(v), n + 1
        elif kind == "kappa":
            w, m = F.kappa(n).apply(v), n
        elif kind == "kappa_inv":
            w, m = F.kappa_inv(n).apply(v), n
        elif kind == "P":
            w, m = F.P(n).apply(v), n
        elif kind == "G":
            w, m = F.G(n).apply(v), n
        elif kind == "c":
            w, m = vscale(v, Forms.c_scale(n)), n
        elif kind == "z":
            w, m = vscale(v, Forms.z_scale(n)), n
        else:
            raise ConventionError("operator %r not available on reduced forms" % kind)
        out = out + GradedChain.from_vector(chain.alg, m, w, N)
    return out


def apply_chain_operator(kind, alg, terms):
    """b, bprime, lambda or N on an unreduced chain {tuple: coeff}."""
    out = {}
    for t, c in terms.items():
        k = len(t)
        if kind == "b":
            img = t_b(alg, t, False)
        elif kind == "bprime":
            img = t_b(alg, t, False, wrap=False)
        elif kind == "lambda":
            img = t_lambda(t)
        elif kind == "N":
            img = {}
            cur = {t: mpq(1)}
            for _ in range(k):
                for u, x in cur.items():
                    _put(img, u, x)
                nxt = {}
                for u, x in cur.items():
                    for v, y in t_lambda(u).items():
                        _put(nxt, v, x * y)
                cur = nxt
        else:
            raise ConventionError("operator %r not available on unreduced chains" % kind)
        for u, x in img.items():
            _put(out, u, c * x)
    return out


def _times_elem(alg, t, b):
    """Basis form t times basis element b, as {tuple: coeff}."""
    if len(t) == 1:
        return {(k,): c for k, c in alg.table[t[0]][b].items()}
    out = {}
    head, an = t[:-1], t[-1]
    for k, c in alg.table[an][b].items():
        if k != 0:
            _put(out, head + (k,), c)
    if b != 0:
        for u, c in _times_elem(alg, head, an).items():
            _put(out, u + (b,), -c)
    return out


def _mul_tuples(alg, s, t):
    out = {}
    for u, c in _times_elem(alg, s, t[0]).items():
        _put(out, u + t[1:], c)
    return out


def form_product(x, y, N=None, drop_above=False):
    """Ordinary product in Omega A."""
    N = x.N if N is None else N
    out = {}
    alg = x.alg
    for s, a in x.terms.items():
        for t, b in y.terms.items():
            deg = len(s) + len(t) - 2
            if N is not None and deg > N:
                if drop_above:
                    continue
                prod_ = _mul_tuples(alg, s, t)
                if prod_:
                    raise TruncationError("product of degree %d beyond N=%d" % (deg, N))
                continue
            for u, c in _mul_tuples(alg, s, t).items():
                _put(out, u, a * b * c)
    return GradedChain(alg, out, N)


def form_d(x):
    out = {}
    for t, c in x.terms.items():
        for u, e in t_d(t).items():
            _put(out, u, c * e)
    return GradedChain(x.alg, out, None)


def fedosov_product(x, y, N=None, drop_above=False):
    """x o y = xy - (-1)^{|x|} dx dy, degreewise in x."""
    N = x.N if N is None else N
    out = form_product(x, y, N, drop_above)
    for n in x.degrees():
        xn = x.part(n)
        dx = form_d(xn)
        dy = form_d(y)
        dx.N = dy.N = None
        corr = form_product(dx, dy, N, drop_above)
        out = out - corr * (-1 if n % 2 else 1)
    out.N = N
    return out


# -- mixed complex ------------------------------------------------------------

class MixedChain:
    """sum_p u^p omega_{n-2p}; parts maps p -> GradedChain homogeneous of degree n-2p."""

    def __init__(self, alg, n, parts):
        self.alg = alg
        self.n = n
        self.parts = {}
        for p, w in parts.items():
            if w.is_zero():
                continue
            if any(k != n - 2 * p for k in w.degrees()) or n - 2 * p < 0:
                raise ValueError("coefficient of u^%d must have degree %d" % (p, n - 2 * p))
            self.parts[p] = w

    def S(self):
        return MixedChain(self.alg, self.n - 2, {p - 1: w for p, w in self.parts.items() if p >= 1})

    def __eq__(self, o):
        return self.n == o.n and self.parts == o.parts


class MixedComplex:
    """The (b, B) total complex B(Omega)_n = sum_p u^p Omega^{n-2p}, degrees 0..N."""

    def __init__(self, alg, N):
        self.alg = alg
        self.N = N
        self.F = forms(alg, N)
        self._cache = {}

    def blocks(self, n):
        return [(p, n - 2 * p) for p in range(n // 2 + 1)]

    def dim(self, n):
        return sum(self.F.space(m).dim for _, m in self.blocks(n))

    def offsets(self, n):
        off, out = 0, {}
        for p, m in self.blocks(n):
            out[p] = off
            off += self.F.space(m).dim
        return out

    def D(self, n):
        """Total differential B(Omega)_n -> B(Omega)_{n-1}."""
        if n in self._cache:
            return self._cache[n]
        if n == 0:
            M = SMat.zero(0, self.dim(0))
        else:
            src, tgt = self.blocks(n), self.blocks(n - 1)
            grid = []
            for q, mt in tgt:
                row = []
                for p, ms in src:
                    if p == q and ms >= 1:
                        row.append(self.F.b(ms))
                    elif p == q + 1:
                        row.append(self.F.B(ms))
                    else:
                        row.append(SMat.zero(self.F.space(mt).dim, self.F.space(ms).dim))
                grid.append(row)
            M = block(grid) if grid else SMat.zero(0, self.dim(n))
        self._cache[n] = M
        return M

    def S(self, n):
        """S: B(Omega)_n -> B(Omega)_{n-2}."""
        src, tgt = self.offsets(n), self.offsets(n - 2)
        M = SMat(self.dim(n - 2), self.dim(n))
        for p, m in self.blocks(n):
            if p == 0:
                continue
            for i in range(self.F.space(m).dim):
                M.cols[src[p] + i] = {tgt[p - 1] + i: mpq(1)}
        return M

    def I(self, n):
        """Inclusion Omega^n -> B(Omega)_n as the u^0 column."""
        M = SMat(self.dim(n), self.F.space(n).dim)
        for i in range(M.n):
            M.cols[i] = {i: mpq(1)}
        return M

    def Bconn(self, n):
        """Connecting map B(Omega)_n -> Omega^{n+1}: B on the u^0 component."""
        Bm = self.F.B(n)
        M = SMat(Bm.m, self.dim(n))
        for i in range(Bm.n):
            M.cols[i] = Bm.cols[i]
        return M

    def to_vector(self, mc):
        off = self.offsets(mc.n)
        out = {}
        for p, w in mc.parts.items():
            for i, c in w.vector(mc.n - 2 * p).items():
                out[off[p] + i] = c
        return out

    def from_vector(self, n, vec):
        off = self.offsets(n)
        parts = {}
        for p, m in self.blocks(n):
            dm = self.F.space(m).dim
            sub = {i - off[p]: c for i, c in vec.items() if off[p] <= i < off[p] + dm}
            parts[p] = GradedChain.from_vector(self.alg, m, sub, self.N)
        return MixedChain(self.alg, n, parts)


def s_operator(mixed):
    return mixed.S()


# -- nonunital 2x2 block description --------------------------------------------

def tilde_block_check(alg, N):
    """Compare operators on reduced forms of the unitalization with block formulas.

    Omega^n of A~ splits as C_n(A) (+) C_{n-1}(A): a_0 da_1..da_n and da_1..da_n.
    Returns a dict of per-operator, per-degree discrepancy counts (all must be 0)
    plus a comparison of the lower-left block of B~ with two candidate norms.
    """
    from .algebra import unitalize
    At = unitalize(alg)
    F = forms(At, N)
    C = chains(alg, N + 2)
    report = {}

    def split_perm(n):
        # old index -> (summand, index) ; summand 0 = C_n (len n+1), 1 = C_{n-1} (len n)
        sp = F.space(n)
        up = C.space(n + 1)
        lo = C.space(n)
        P = SMat(sp.dim, up.dim + lo.dim)
        for t, i in sp.index.items():
            if t[0] == 0:
                j = up.dim + lo.index[tuple(k - 1 for k in t[1:])]
            else:
                j = up.index[tuple(k - 1 for k in t)]
            P.cols[j] = {i: mpq(1)}
        return P, up.dim, lo.dim

    def in_blocks(M, n_src, n_tgt):
        Ps, _, _ = split_perm(n_src)
        Pt, _, _ = split_perm(n_tgt)
        return inverse(Pt) @ M @ Ps

    def zero(k1, k2):
        return SMat.zero(C.space(k1).dim, C.space(k2).dim)

    def lam(k):
        return C.lam(k) if k >= 1 else SMat.identity(C.space(k).dim)

    def diff(name, n, actual, expected):
        bad = 0 if actual == expected else sum(
            1 for a, e in zip(actual.cols, expected.cols) if a != e)
        report.setdefault(name, {})[n] = bad

    for n in range(1, N + 1):
        bt = in_blocks(F.b(n), n, n - 1)
        b_n = C.b(n + 1)
        one_minus_lam = SMat.identity(C.space(n).dim) - lam(n)
        bp = C.bprime(n) if n >= 1 else zero(n - 1, n)
        exp_b = block([[b_n, one_minus_lam], [zero(n - 1, n + 1), -bp]]) if n >= 1 else None
        diff("b", n, bt, exp_b)
    for n in range(0, N):
        dt = in_blocks(F.d(n), n, n + 1)
        exp_d = block([[zero(n + 2, n + 1), zero(n + 2, n)],
                       [SMat.identity(C.space(n + 1).dim), zero(n + 1, n)]])
        diff("d", n, dt, exp_d)
        Bt = in_blocks(F.B(n), n, n + 1)
        full = C.norm(n + 1)
        exp_B = block([[zero(n + 2, n + 1), zero(n + 2, n)], [full, zero(n + 1, n)]])
        diff("B", n, Bt, exp_B)
        partial = SMat.zero(full.m, full.n)
        L = C.lam(n + 1)
        for i in range(1, n):
            partial = partial + L ** i
        report.setdefault("B_lower_left_vs_sum_1_to_n-1", {})[n] = Bt.restrict_cols(
            list(range(C.space(n + 1).dim))) == block([[zero(n + 2, n + 1)], [partial]])
    for n in range(1, N + 1):
        kt = in_blocks(F.kappa(n), n, n)
        exp_k = block([[lam(n + 1), zero(n + 1, n)],
                       [C.bprime(n + 1) - C.b(n + 1), lam(n)]])
        diff("kappa", n, kt, exp_k)
    return report


# -- sparse triplet export ------------------------------------------------------

def export_triplets(M, degree):
    from .scalars import fmt
    return ["%d %d %d %s" % (degree, i, j, fmt(x)) for i, j, x in M.entries()]
