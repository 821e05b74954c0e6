"""Toeplitz operators on the Hardy space of the circle, at finite resolution.

Symbols are Laurent polynomials with rational coefficients.  Operators on
the half line basis z^0, z^1, ... are modelled exactly as a Toeplitz part
plus a finitely supported matrix (``HalfLineOperator``); products of such
operators stay in the model.
"""

import re
from dataclasses import dataclass, field

from gmpy2 import mpq

from .linalg import SMat
from .scalars import fmt, parse_scalar


class SymbolError(ValueError):
    pass


class LaurentSymbol:
    """f = sum_k f_k z^k with finitely many nonzero f_k."""

    __slots__ = ("c",)

    def __init__(self, coeffs=None):
        self.c = {int(k): mpq(v) for k, v in (coeffs or {}).items() if v}

    @classmethod
    def monomial(cls, k, c=1):
        return cls({k: c})

    @classmethod
    def const(cls, c):
        return cls({0: c})

    @classmethod
    def parse(cls, text):
        """Parse strings like "z^-1 + 2 + 3z^2" or "z^-1*(1 + z/3)"."""
        import sympy
        from sympy.parsing.sympy_parser import (parse_expr, standard_transformations,
                                                implicit_multiplication_application)
        z = sympy.Symbol("z")
        src = text.replace("^", "**")
        src = re.sub(r"\*\*\s*-\s*(\d+)", r"**(-\1)", src)
        try:
            expr = parse_expr(src, local_dict={"z": z},
                              transformations=standard_transformations + (implicit_multiplication_application,))
        except Exception as exc:  # sympy raises a zoo of types here
            raise SymbolError("cannot parse symbol %r: %s" % (text, exc)) from None
        expr = sympy.expand(expr)
        out = {}
        for term in sympy.Add.make_args(expr):
            coeff, pw = term.as_coeff_exponent(z)
            if coeff.free_symbols or not pw.is_integer or not coeff.is_rational:
                raise SymbolError("not a rational Laurent polynomial: %r" % text)
            k = int(pw)
            out[k] = out.get(k, mpq(0)) + mpq(int(coeff.p), int(coeff.q))
        return cls(out)

    @classmethod
    def from_json(cls, data):
        if isinstance(data, str):
            return cls.parse(data)
        return cls({int(k): parse_scalar(v) for k, v in data.items()})

    def to_json(self):
        return {str(k): fmt(v) for k, v in sorted(self.c.items())}

    def __getitem__(self, k):
        return self.c.get(k, mpq(0))

    @property
    def support(self):
        if not self.c:
            return (0, 0)
        return (min(self.c), max(self.c))

    @property
    def width(self):
        lo, hi = self.support
        return max(-lo, hi, 0)

    def __add__(self, o):
        o = _sym(o)
        out = dict(self.c)
        for k, v in o.c.items():
            out[k] = out.get(k, 0) + v
        return LaurentSymbol(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentSymbol({k: -v for k, v in self.c.items()})

    def __sub__(self, o):
        return self + (-_sym(o))

    def __rsub__(self, o):
        return _sym(o) - self

    def __mul__(self, o):
        if not isinstance(o, LaurentSymbol):
            c = parse_scalar(o)
            return LaurentSymbol({k: v * c for k, v in self.c.items()})
        out = {}
        for i, a in self.c.items():
            for j, b in o.c.items():
                out[i + j] = out.get(i + j, 0) + a * b
        return LaurentSymbol(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            if len(self.c) != 1:
                raise SymbolError("only monomials have Laurent polynomial inverses")
            (k, v), = self.c.items()
            return LaurentSymbol({k * n: v ** n})
        out = LaurentSymbol.const(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, o):
        if not isinstance(o, LaurentSymbol):
            o = _sym(o)
        return self.c == o.c

    def __hash__(self):
        return hash(tuple(sorted(self.c.items())))

    def star(self):
        """Adjoint symbol z -> 1/z (coefficients are real)."""
        return LaurentSymbol({-k: v for k, v in self.c.items()})

    def truncate(self, lo, hi):
        return LaurentSymbol({k: v for k, v in self.c.items() if lo <= k <= hi})

    def __call__(self, z):
        return sum(float(v) * z ** k for k, v in self.c.items())

    def __repr__(self):
        if not self.c:
            return "0"
        parts = []
        for k, v in sorted(self.c.items()):
            parts.append(fmt(v) if k == 0 else "%s*z^%d" % (fmt(v), k))
        return " + ".join(parts)


def _sym(x):
    return x if isinstance(x, LaurentSymbol) else LaurentSymbol.const(parse_scalar(x))


Z = LaurentSymbol.monomial(1)


# -- truncated matrices ------------------------------------------------------

def toeplitz_matrix(f, N):
    """(T_f)_{jk} = f_{j-k} on Hardy indices 0..N."""
    if N < f.width:
        raise SymbolError("N=%d below the support bound %d" % (N, f.width))
    return SMat.from_entries(N + 1, N + 1, {(j, k): f[j - k] for j in range(N + 1)
                                            for k in range(N + 1) if f[j - k]})


def fourier_pairing(f, g):
    """sum_k k f_{-k} g_k, the Fourier side of (1/2 pi i) int f dg."""
    return sum((k * f[-k] * v for k, v in g.c.items()), mpq(0))


def commutator_trace(f, g, N):
    """tr(f [e, g]) on span{z^-N..z^N}, with e the Hardy projection.

    Returns (matrix value, Fourier value).
    """
    if N < f.width + g.width:
        raise SymbolError("N=%d below the combined support %d" % (N, f.width + g.width))
    idx = range(-N, N + 1)
    e = lambda j: 1 if j >= 0 else 0
    tr = mpq(0)
    for j in idx:
        for l in idx:
            a = f[j - l]
            if not a:
                continue
            s = e(l) - e(j)
            if s:
                tr += a * s * g[l - j]
    return tr, fourier_pairing(f, g)


# -- the half line operator model --------------------------------------------

class HalfLineOperator:
    """T_sym + F on l^2(N), F a finitely supported matrix {(i, j): c}."""

    __slots__ = ("sym", "fin")

    def __init__(self, sym=None, fin=None):
        self.sym = sym if sym is not None else LaurentSymbol()
        self.fin = {k: mpq(v) for k, v in (fin or {}).items() if v}

    @classmethod
    def toeplitz(cls, f):
        return cls(_sym(f))

    @classmethod
    def unit(cls, i, j, c=1):
        return cls(None, {(i, j): c})

    @classmethod
    def identity(cls):
        return cls(LaurentSymbol.const(1))

    def is_finite(self):
        return not self.sym.c

    def trace(self):
        if not self.is_finite():
            raise SymbolError("trace of a non finite-rank operator")
        return sum((v for (i, j), v in self.fin.items() if i == j), mpq(0))

    def __add__(self, o):
        o = _op(o)
        fin = dict(self.fin)
        for k, v in o.fin.items():
            fin[k] = fin.get(k, 0) + v
        return HalfLineOperator(self.sym + o.sym, fin)

    __radd__ = __add__

    def __neg__(self):
        return HalfLineOperator(-self.sym, {k: -v for k, v in self.fin.items()})

    def __sub__(self, o):
        return self + (-_op(o))

    def __rsub__(self, o):
        return _op(o) - self

    def __mul__(self, o):
        if not isinstance(o, HalfLineOperator):
            c = parse_scalar(o)
            return HalfLineOperator(self.sym * c, {k: v * c for k, v in self.fin.items()})
        a, b = self.sym, o.sym
        fin = {}

        def put(i, j, v):
            fin[(i, j)] = fin.get((i, j), 0) + v
        # T_a T_b - T_ab = -sum_{l<0} a_{j-l} b_{l-k}
        for s, x in a.c.items():
            for t, y in b.c.items():
                for l in range(max(-s, t), 0):
                    put(s + l, l - t, -x * y)
        for (l, k), v in o.fin.items():
            for s, x in a.c.items():
                if l + s >= 0:
                    put(l + s, k, x * v)
        for (j, l), v in self.fin.items():
            for t, y in b.c.items():
                if l - t >= 0:
                    put(j, l - t, v * y)
        right = {}
        for (l, k), v in o.fin.items():
            right.setdefault(l, []).append((k, v))
        for (j, l), v in self.fin.items():
            for k, w in right.get(l, ()):
                put(j, k, v * w)
        return HalfLineOperator(a * b, fin)

    def __rmul__(self, c):
        return self * c

    def __pow__(self, n):
        out = HalfLineOperator.identity()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, o):
        o = _op(o)
        return self.sym == o.sym and self.fin == o.fin

    def __hash__(self):
        return hash((self.sym, tuple(sorted(self.fin.items()))))

    def __repr__(self):
        return "HalfLineOperator(T[%r] + %r)" % (self.sym, self.fin)


def _op(x):
    if isinstance(x, HalfLineOperator):
        return x
    return HalfLineOperator(_sym(x))


def cocycle_phi(f, g, N=None):
    """tr(T_f T_g - T_fg) - tr(T_g T_f - T_gf) in the operator model.

    Returns (operator value, Fourier value sum_k k f_{-k} g_k).
    """
    Tf, Tg = HalfLineOperator.toeplitz(f), HalfLineOperator.toeplitz(g)
    left = Tf * Tg - HalfLineOperator.toeplitz(f * g)
    right = Tg * Tf - HalfLineOperator.toeplitz(g * f)
    val = left.trace() - right.trace()
    if N is not None:
        mat, _ = commutator_trace(f, g, max(N, f.width + g.width))
        if mat != val:
            raise ArithmeticError("operator model and truncation disagree")
    return val, fourier_pairing(f, g)


def phi_coboundary(f, g, h):
    """(b phi)(f, g, h) = phi(fg, h) - phi(f, gh) + phi(hf, g)."""
    p = fourier_pairing
    return p(f * g, h) - p(f, g * h) + p(h * f, g)


# -- root location -----------------------------------------------------------

def _poly_coeffs(f):
    """f = z^lo q(z) with q(0) != 0; returns (lo, [q_0, ..., q_d])."""
    if not f.c:
        raise SymbolError("zero symbol")
    lo, hi = f.support
    return lo, [f[k] for k in range(lo, hi + 1)]


def schur_cohn(coeffs):
    """Number of roots of sum a_k z^k in the open unit disk, or None if degenerate.

    Real rational coefficients.  Uses the Schur transform
    p -> a_0 p - a_n p*, counting negative partial products of the constants.
    """
    a = [mpq(c) for c in coeffs]
    while a and a[-1] == 0:
        a.pop()
    n = len(a) - 1
    if n <= 0:
        return 0
    count, prod = 0, mpq(1)
    cur = a
    for j in range(n):
        m = len(cur) - 1
        rev = cur[::-1]
        nxt = [cur[0] * cur[k] - cur[m] * rev[k] for k in range(m)]
        delta = nxt[0]
        if delta == 0:
            return None
        prod *= delta
        if prod < 0:
            count += 1
        cur = nxt
    return count


def _side(box):
    (x0, y0), (x1, y1) = box[0], box[1]
    xs = [x0, x1]
    ys = [y0, y1]
    far = max(x * x for x in xs) + max(y * y for y in ys)
    nx = 0 if x0 <= 0 <= x1 else min(x * x for x in xs)
    ny = 0 if y0 <= 0 <= y1 else min(y * y for y in ys)
    near = nx + ny
    if far < 1:
        return 1
    if near > 1:
        return 0
    return None


def count_inside(coeffs, fallback=True):
    """(count, method) for the roots of sum a_k z^k in the open unit disk."""
    c = schur_cohn(coeffs)
    if c is not None:
        return c, "schur-cohn"
    if not fallback:
        raise SymbolError("Schur-Cohn test degenerate")
    import sympy
    P = _sympy_poly(coeffs)
    inside = 0
    for fac, mult in sympy.factor_list(P)[1]:
        inside += mult * sum(_boxes_sides(fac, strict=True))
    return inside, "root-isolation"


def _sympy_poly(coeffs):
    import sympy
    z = sympy.Symbol("z")
    return sympy.Poly([sympy.Rational(int(x.numerator), int(x.denominator))
                       for x in reversed(coeffs)], z)


def _boxes_sides(fac, strict):
    """Per root of fac: 1 inside the disk, 0 outside, decided on exact rational boxes."""
    import sympy
    eps = sympy.Rational(1, 4)
    for _ in range(40):
        boxes = []
        real, cplx = fac.intervals(all=True, eps=eps)
        for (a, b), m in real:
            boxes.append(((sympy.Rational(a), 0), (sympy.Rational(b), 0), m))
        for (c0, c1), m in cplx:
            # corners come back as complex numbers (lower left, upper right)
            x0, y0 = sympy.re(c0), sympy.im(c0)
            x1, y1 = sympy.re(c1), sympy.im(c1)
            boxes.append(((min(x0, x1), min(y0, y1)), (max(x0, x1), max(y0, y1)), m))
        sides = [_side(b) for b in boxes]
        if all(s is not None for s in sides):
            return [s for s, b in zip(sides, boxes) for _ in range(b[2])]
        eps /= 4
    if strict:
        raise SymbolError("symbol vanishes on (or too close to) the unit circle")
    return [None]


def winding_number(f):
    """Exact winding number of f around 0 on the unit circle."""
    lo, q = _poly_coeffs(f)
    if _on_circle(q):
        raise SymbolError("symbol vanishes on the unit circle")
    inside, method = count_inside(q)
    return lo + inside, method


def _on_circle(q):
    """True if q has a root of modulus 1.

    Such a root r also gives the root 1/r, so it divides gcd(q, reversed q).
    """
    import sympy
    P = _sympy_poly(q)
    if P.degree() <= 0:
        return False
    g = sympy.gcd(P, sympy.Poly(list(reversed(P.all_coeffs())), P.gen))
    if g.degree() <= 0:
        return False
    for fac, _ in sympy.factor_list(g)[1]:
        if fac.degree() > 0 and None in _boxes_sides(fac, strict=False):
            return True
    return False


# -- inverse symbol and index ------------------------------------------------

def _series(num, den, n):
    """First n power series coefficients of num/den, den[0] != 0."""
    out = []
    for k in range(n):
        v = num[k] if k < len(num) else mpq(0)
        for i in range(1, min(k, len(den) - 1) + 1):
            v -= den[i] * out[k - i]
        out.append(v / den[0])
    return out


def _split_inside(q):
    """q = q_in * q_out over Q with all roots of q_in inside the disk, or None."""
    import sympy
    P = _sympy_poly(q)
    lead, facs = sympy.factor_list(P)
    q_in = sympy.Poly(1, P.gen)
    q_out = sympy.Poly(lead, P.gen)
    for fac, mult in facs:
        c, _ = count_inside([mpq(int(x.p), int(x.q)) for x in reversed(fac.all_coeffs())])
        if c == fac.degree():
            q_in = q_in * fac ** mult
        elif c == 0:
            q_out = q_out * fac ** mult
        else:
            return None
    return q_in, q_out


def _to_mpq(poly):
    return [mpq(int(x.p), int(x.q)) for x in reversed(poly.all_coeffs())]


def inverse_on_circle(f, N):
    """Coefficients of 1/f on the unit circle for degrees -N..N.

    Returns (LaurentSymbol, exact flag).  Exact when q splits over Q into a
    factor with all roots inside and one with all roots outside; otherwise
    the coefficients come from floating partial fractions rounded to
    rationals and the flag is False.
    """
    lo, q = _poly_coeffs(f)
    split = _split_inside(q)
    if split is None:
        return _inverse_numeric(lo, q, N), False
    import sympy
    q_in, q_out = split
    s = q_in.degree()
    if s == 0:
        pos = _series([1 / mpq(int(q_in.LC().p), int(q_in.LC().q))], _to_mpq(q_out), N + abs(lo) + 1)
        neg = []
    else:
        # A q_out + B q_in = 1, deg A < deg q_in
        A, B, g = sympy.gcdex(q_out, q_in)
        A, B = A.quo_ground(g.LC()), B.quo_ground(g.LC())
        pos = _series(_to_mpq(B), _to_mpq(q_out), N + abs(lo) + 1)
        # A/q_in = w A^(w)/q^(w) in w = 1/z
        a = (_to_mpq(A) + [mpq(0)] * s)[:s]
        a_hat = a[::-1]
        q_hat = _to_mpq(q_in)[::-1]
        neg = _series([mpq(0)] + a_hat, q_hat, N + abs(lo) + 2)
    coeffs = {}
    for k, v in enumerate(pos):
        coeffs[k - lo] = coeffs.get(k - lo, 0) + v
    for k, v in enumerate(neg):
        if k:
            coeffs[-k - lo] = coeffs.get(-k - lo, 0) + v
    return LaurentSymbol({k: v for k, v in coeffs.items() if -N <= k <= N}), True


def _inverse_numeric(lo, q, N):
    P = _sympy_poly(q)
    roots = [complex(r) for r in P.nroots(n=40)]
    lead = float(q[-1])
    coeffs = {}
    # 1/q = (1/lead) sum_i c_i / (z - r_i), simple roots assumed
    for i, r in enumerate(roots):
        c = 1.0 / lead
        for j, s in enumerate(roots):
            if j != i:
                c /= (r - s)
        for k in range(-N - abs(lo) - 1, N + abs(lo) + 2):
            if abs(r) < 1 and k <= -1:
                v = c * r ** (-k - 1)
            elif abs(r) > 1 and k >= 0:
                v = -c / r ** (k + 1)
            else:
                continue
            coeffs[k - lo] = coeffs.get(k - lo, 0) + v
    out = {}
    for k, v in coeffs.items():
        if -N <= k <= N:
            out[k] = mpq(round(v.real * 10 ** 12), 10 ** 12)
    return LaurentSymbol(out)


def parametrix_index(f, g):
    """tr(1 - T_g T_f) - tr(1 - T_f T_g) = tr(T_f T_g - T_g T_f), operator model."""
    Tf, Tg = HalfLineOperator.toeplitz(f), HalfLineOperator.toeplitz(g)
    return (Tf * Tg - Tg * Tf).trace()


@dataclass
class IndexReport:
    symbol: str
    winding: int
    method: str
    per_N: dict = field(default_factory=dict)
    stabilized: object = None
    stable_from: object = None
    phi_inverse_f: object = None
    exact: bool = True
    kernel_dims: tuple = (0, 0)
    convention: str = "index = -winding (parametrix difference)"

    def as_json(self):
        return {"symbol": self.symbol, "winding": self.winding, "winding_method": self.method,
                "index_per_N": {str(k): fmt(v) for k, v in sorted(self.per_N.items())},
                "stabilized_index": None if self.stabilized is None else fmt(self.stabilized),
                "stable_from_N": self.stable_from,
                "phi(f^-1,f)": None if self.phi_inverse_f is None else fmt(self.phi_inverse_f),
                "exact": self.exact, "dim_ker_T_f": self.kernel_dims[0],
                "dim_ker_T_f_star": self.kernel_dims[1], "convention": self.convention}


def index_report(f, Ns):
    """Winding number, per-N parametrix index, stabilized value.

    Per N the parametrix is the degree -N..N part of 1/f on the circle.
    """
    w, method = winding_number(f)
    rep = IndexReport(repr(f), w, method)
    rep.kernel_dims = (max(0, -w), max(0, w))
    for N in Ns:
        g, exact = inverse_on_circle(f, N)
        rep.exact = rep.exact and exact
        val = parametrix_index(f, g)
        if val != fourier_pairing(f, g):
            raise ArithmeticError("operator model disagrees with the Fourier formula")
        rep.per_N[N] = val
    Ns = sorted(rep.per_N)
    if Ns:
        last = rep.per_N[Ns[-1]]
        start = Ns[-1]
        for N in reversed(Ns):
            if rep.per_N[N] != last:
                break
            start = N
        if len(Ns) >= 2 and start < Ns[-1] and last == int(last):
            rep.stabilized = int(last)
            rep.stable_from = start
    gN = inverse_on_circle(f, max(Ns[-1] if Ns else 0, f.width))[0]
    rep.phi_inverse_f = fourier_pairing(gN, f)
    return rep
