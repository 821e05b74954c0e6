"""The Cuntz algebra QA realised on differential forms.

A word p(a_0) q(a_1) ... q(a_n) is stored as the reduced form a_0 da_1 ... da_n,
and products are Fedosov products. The dihedral part of Q(C~) is kept in the
basis {q(f)^k, p(f) q(f)^k}, with coefficients that may be polynomials in a
formal parameter t.
"""

from dataclasses import dataclass
from itertools import product
from math import factorial

import sympy
from gmpy2 import mpq

from .algebra import FinDimAlgebra
from .forms import GradedChain, TruncationError, fedosov_product, form_d
from .linalg import SMat, solve
from .scalars import fmt

T = sympy.Symbol("t")


class QElement:
    """Element of QA, held as mu(x) in Omega A."""

    def __init__(self, chain):
        self.chain = chain

    @property
    def alg(self):
        return self.chain.alg

    @property
    def N(self):
        return self.chain.N

    @classmethod
    def p(cls, alg, a, N):
        a = a if isinstance(a, dict) else {a: mpq(1)}
        return cls(GradedChain.from_element(alg, a, N))

    @classmethod
    def q(cls, alg, a, N):
        a = a if isinstance(a, dict) else {a: mpq(1)}
        ch = form_d(GradedChain.from_element(alg, a, N))
        ch.N = N
        return cls(ch)

    @classmethod
    def iota(cls, alg, a, N):
        return cls.p(alg, a, N) + cls.q(alg, a, N)

    @classmethod
    def word(cls, alg, t, c=1, N=None):
        return cls(GradedChain.basis_form(alg, t, c, N))

    @classmethod
    def one(cls, alg, N):
        return cls.p(alg, 0, N)

    def __mul__(self, o):
        if isinstance(o, QElement):
            return q_multiply(self, o)
        return QElement(self.chain * o)

    __rmul__ = lambda self, c: QElement(self.chain * c)

    def __add__(self, o):
        return QElement(self.chain + o.chain)

    def __sub__(self, o):
        return QElement(self.chain - o.chain)

    def __neg__(self):
        return QElement(-self.chain)

    def __eq__(self, o):
        return isinstance(o, QElement) and self.chain == o.chain

    def gamma(self):
        """The canonical automorphism: q -> -q, i.e. (-1)^degree on forms."""
        return QElement(GradedChain(self.alg, {t: (-c if (len(t) - 1) % 2 else c)
                                               for t, c in self.chain.terms.items()}, self.N))

    def parity(self):
        ps = {(len(t) - 1) % 2 for t in self.chain.terms}
        return ps.pop() if len(ps) == 1 else None

    def fold(self):
        """Folding map QA -> A: keep the degree zero part."""
        return {t[0]: c for t, c in self.chain.terms.items() if len(t) == 1}

    def words(self):
        out = []
        for t in sorted(self.chain.terms, key=lambda s: (len(s), s)):
            w = "p(%s)" % self.alg.basis[t[0]] + "".join("q(%s)" % self.alg.basis[k] for k in t[1:])
            out.append((w, self.chain.terms[t]))
        return out

    def __repr__(self):
        if not self.chain.terms:
            return "0"
        return " + ".join("%s*%s" % (fmt(c), w) for w, c in self.words())


def q_multiply(x, y, drop_above=False):
    """Product in QA, computed as mu^-1(mu(x) o mu(y))."""
    N = x.N if y.N is None else (y.N if x.N is None else min(x.N, y.N))
    return QElement(fedosov_product(x.chain, y.chain, N, drop_above))


def generator_relations(alg, N=2):
    """Check p(ab) = p(a)p(b) + q(a)q(b) and q(ab) = p(a)q(b) + q(a)p(b) on basis pairs."""
    if N < 2:
        raise TruncationError("relations involve q(a)q(b), need N >= 2")
    bad = []
    for i, j in product(range(alg.dim), repeat=2):
        ab = alg.mul({i: mpq(1)}, {j: mpq(1)})
        pa, qa = QElement.p(alg, i, N), QElement.q(alg, i, N)
        pb, qb = QElement.p(alg, j, N), QElement.q(alg, j, N)
        if QElement.p(alg, ab, N) != pa * pb + qa * qb:
            bad.append(("p", i, j))
        if QElement.q(alg, ab, N) != pa * qb + qa * pb:
            bad.append(("q", i, j))
    unit = alg.unital and QElement.p(alg, 0, N) == QElement.one(alg, N) and \
        QElement.q(alg, 0, N).chain.is_zero()
    return {"relations": not bad, "failures": bad, "p(1)=1,q(1)=0": unit}


def words_are_products(alg, N):
    """p(a_0) q(a_1)...q(a_n), multiplied out, is the basis form a_0 da_1...da_n."""
    red = alg.reduced_indices()
    for n in range(N + 1):
        for t in product(range(alg.dim), *([red] * n)):
            x = QElement.p(alg, t[0], N)
            for k in t[1:]:
                x = x * QElement.q(alg, k, N)
            if x != QElement.word(alg, t, 1, N):
                return False
    return True


def folding_is_homomorphism(alg, N, pairs):
    for x, y in pairs:
        lhs = (x * y).fold()
        rhs = alg.mul(x.fold(), y.fold())
        if {k: v for k, v in lhs.items() if v} != {k: v for k, v in rhs.items() if v}:
            return False
    return True


# -- the dihedral subalgebra of Q(C~) ------------------------------------------

def c_tilde():
    """C with a unit adjoined: basis 1, u with u^2 = u."""
    one = {0: mpq(1)}
    s = {(0, 0): one, (0, 1): {1: mpq(1)}, (1, 0): {1: mpq(1)}, (1, 1): {1: mpq(1)}}
    return FinDimAlgebra("C~", ["1", "u"], s, True)


def _poly(c):
    if isinstance(c, sympy.Poly):
        return c
    return sympy.Poly(sympy.Rational(int(mpq(c).numerator), int(mpq(c).denominator)), T, domain="QQ")


class Dihedral:
    """Multiplication table of the words q^k = q(f)^k and pq^k = p(f)q(f)^k up to degree N."""

    def __init__(self, N):
        if N < 2:
            raise TruncationError("need N >= 2")
        self.N = N
        self.A = c_tilde()
        A = self.A
        self.f = QElement.iota(A, {0: mpq(-1), 1: mpq(2)}, N)
        self.pf = QElement.p(A, {0: mpq(-1), 1: mpq(2)}, N)
        self.qf = QElement.q(A, {0: mpq(-1), 1: mpq(2)}, N)
        self.words = [(kind, k) for k in range(N + 1) for kind in ("q", "pq")]
        self.ambient = {}
        qk = QElement.one(A, N)
        for k in range(N + 1):
            self.ambient[("q", k)] = qk
            self.ambient[("pq", k)] = q_multiply(self.pf, qk)
            qk = q_multiply(qk, self.qf, drop_above=True)
        self._table = {}
        for u, v in product(self.words, repeat=2):
            if u[1] + v[1] > N:
                continue
            self._table[(u, v)] = self.project(q_multiply(self.ambient[u], self.ambient[v], drop_above=True))

    def project(self, x):
        """Coordinates of an ambient element in the word basis; asserts it lies in the span."""
        out = {}
        for k in range(self.N + 1):
            part = x.chain.part(k)
            if part.is_zero():
                continue
            cols = [self.ambient[("q", k)].chain.vector(k), self.ambient[("pq", k)].chain.vector(k)]
            M = SMat(max([0] + [i + 1 for c in cols for i in c] + [i + 1 for i in part.vector(k)]), 2, cols)
            sol = solve(M, part.vector(k))
            if sol is None:
                raise AssertionError("product left the dihedral span in degree %d" % k)
            for j, kind in enumerate(("q", "pq")):
                if sol.get(j):
                    out[(kind, k)] = sol[j]
        return out

    def element(self, coeffs):
        return DihedralElement(self, {w: _poly(c) for w, c in coeffs.items()})

    def one(self):
        return self.element({("q", 0): 1})

    def f_elem(self):
        return self.element({("pq", 0): 1, ("q", 1): 1})

    def f_gamma(self):
        return self.element({("pq", 0): 1, ("q", 1): -1})

    def q(self):
        return self.element({("q", 1): 1})

    def p(self):
        return self.element({("pq", 0): 1})


class DihedralElement:
    def __init__(self, D, coeffs):
        self.D = D
        self.c = {w: v for w, v in coeffs.items() if not v.is_zero}

    def __add__(self, o):
        out = dict(self.c)
        for w, v in o.c.items():
            out[w] = out[w] + v if w in out else v
        return DihedralElement(self.D, out)

    def __neg__(self):
        return DihedralElement(self.D, {w: -v for w, v in self.c.items()})

    def __sub__(self, o):
        return self + (-o)

    def scale(self, c):
        c = _poly(c)
        return DihedralElement(self.D, {w: v * c for w, v in self.c.items()})

    def __mul__(self, o):
        if not isinstance(o, DihedralElement):
            return self.scale(o)
        out = {}
        for u, a in self.c.items():
            for v, b in o.c.items():
                if u[1] + v[1] > self.D.N:
                    continue
                for w, x in self.D._table[(u, v)].items():
                    term = a * b * _poly(x)
                    out[w] = out[w] + term if w in out else term
        return DihedralElement(self.D, out)

    def __eq__(self, o):
        return self.c == o.c

    def gamma(self):
        """q(f) is odd, p(f) even."""
        return DihedralElement(self.D, {w: (-v if w[1] % 2 else v) for w, v in self.c.items()})

    def min_degree(self):
        return min((w[1] for w in self.c), default=self.D.N + 1)

    def coefficient(self, kind, k):
        v = self.c.get((kind, k))
        return v if v is not None else _poly(0)

    def table(self):
        """Rows (k, word, coefficient) sorted by degree."""
        rows = []
        for (kind, k) in sorted(self.c, key=lambda w: (w[1], w[0] != "q")):
            word = ("p(f)" if kind == "pq" else "") + ("q(f)" if k == 1 else "q(f)^%d" % k if k else "")
            rows.append((k, word or "1", _fmt_poly(self.c[(kind, k)])))
        return rows


def _fmt_poly(p):
    e = p.as_expr()
    return str(e)


def _series(D, x, coeff_fn, start=0):
    """sum_{n >= start} coeff_fn(n) x^n, truncated at degree N (x without constant term)."""
    if x.min_degree() < 1:
        raise ValueError("series argument must lie in the folding ideal")
    out = DihedralElement(D, {})
    power = D.one()
    for n in range(D.N + 1):
        if n >= start:
            c = coeff_fn(n)
            if c:
                out = out + power.scale(c)
        power = power * x
    return out


def log_direct(D):
    """L = -sum_{n>=1} (2 f q(f))^n / n."""
    x = (D.f_elem() * D.q()).scale(2)
    return _series(D, x, lambda n: mpq(-1, n), start=1)


def log_closed(D):
    """-sum_i 2^{2i-1} ((i-1)!)^2/(2i-1)! p(f) q(f)^{2i-1}."""
    coeffs = {}
    i = 1
    while 2 * i - 1 <= D.N:
        coeffs[("pq", 2 * i - 1)] = -mpq(2 ** (2 * i - 1) * factorial(i - 1) ** 2, factorial(2 * i - 1))
        i += 1
    return D.element(coeffs)


def exp_series(D, x):
    return _series(D, x, lambda n: mpq(1, factorial(n)))


def w_series(D, t=None):
    """W_t = exp(t L / 2); t defaults to the formal parameter."""
    t = sympy.Poly(T, T, domain="QQ") if t is None else _poly(t)
    L = log_direct(D)
    return exp_series(D, L.scale(t * _poly(mpq(1, 2))))


def _binom_poly(top, k):
    """binomial(top, k) for a polynomial top, as a polynomial."""
    out = _poly(1)
    for j in range(k):
        out = out * (top - j)
    return out * _poly(mpq(1, factorial(k)))


def w_closed(D):
    """1 + sum_n (-1)^n 2^{2n-1} C(t/2 + n - 1, 2n - 1) ((t/2n) q^{2n} + p q^{2n-1})."""
    t = sympy.Poly(T, T, domain="QQ")
    out = D.one()
    n = 1
    while 2 * n - 1 <= D.N:
        c = _binom_poly(t * _poly(mpq(1, 2)) + (n - 1), 2 * n - 1) * _poly((-1) ** n * 2 ** (2 * n - 1))
        terms = {("pq", 2 * n - 1): c}
        if 2 * n <= D.N:
            terms[("q", 2 * n)] = c * t * _poly(mpq(1, 2 * n))
        out = out + DihedralElement(D, terms)
        n += 1
    return out


def substitute(x, value):
    """Replace t by a rational (or polynomial) value."""
    v = _poly(value).as_expr() if not isinstance(value, sympy.Poly) else value.as_expr()
    return DihedralElement(x.D, {w: sympy.Poly(c.as_expr().subs(T, v), T, domain="QQ") for w, c in x.c.items()})


@dataclass
class DihedralReport:
    N: int
    L_direct_eq_closed: bool
    L_odd: bool
    exp_L_eq_ff_gamma: bool
    W_closed_eq_series: bool
    W_minus_t_eq_gamma: bool
    conjugation: bool
    L_rows: list
    W_rows: list

    def as_json(self):
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def dihedral_series(which, N):
    """which: "L", "W" or "conjugation-check". Returns coefficient rows or a check dict."""
    D = Dihedral(N)
    if which == "L":
        return log_direct(D)
    if which == "W":
        return w_series(D)
    if which == "conjugation-check":
        return dihedral_report(N, D).as_json()
    raise ValueError("unknown series %r" % which)


def dihedral_report(N, D=None):
    D = D or Dihedral(N)
    L = log_direct(D)
    f, fg = D.f_elem(), D.f_gamma()
    W = w_series(D)
    W1 = substitute(W, 1)
    Wm1 = substitute(W, -1)
    return DihedralReport(
        N=N,
        L_direct_eq_closed=L == log_closed(D),
        L_odd=L.gamma() == -L,
        exp_L_eq_ff_gamma=exp_series(D, L) == f * fg,
        W_closed_eq_series=W == w_closed(D),
        W_minus_t_eq_gamma=substitute(W, sympy.Poly(-T, T, domain="QQ")) == W.gamma(),
        conjugation=(Wm1 * f * W1 == fg) and (Wm1 * W1 == D.one()),
        L_rows=L.table(),
        W_rows=W.table(),
    )
