"""Exact scalars: rationals (gmpy2.mpq) and Gaussian rationals."""

import re
from fractions import Fraction

import gmpy2
from gmpy2 import mpq, mpz

Q = mpq
ZERO = mpq(0)
ONE = mpq(1)


class GaussQ:
    """a + b i with a, b rational."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = mpq(re)
        self.im = mpq(im)

    @staticmethod
    def _lift(x):
        if isinstance(x, GaussQ):
            return x
        return GaussQ(x, 0)

    def __add__(self, other):
        o = GaussQ._lift(other)
        return GaussQ(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = GaussQ._lift(other)
        return GaussQ(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return GaussQ._lift(other) - self

    def __neg__(self):
        return GaussQ(-self.re, -self.im)

    def __mul__(self, other):
        o = GaussQ._lift(other)
        return GaussQ(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conj(self):
        return GaussQ(self.re, -self.im)

    def norm2(self):
        return self.re * self.re + self.im * self.im

    def __truediv__(self, other):
        o = GaussQ._lift(other)
        n = o.norm2()
        if n == 0:
            raise ZeroDivisionError("division by zero")
        p = self * o.conj()
        return GaussQ(p.re / n, p.im / n)

    def __rtruediv__(self, other):
        return GaussQ._lift(other) / self

    def __pow__(self, k):
        r = GaussQ(1)
        for _ in range(k):
            r = r * self
        return r

    def __eq__(self, other):
        if isinstance(other, GaussQ):
            return self.re == other.re and self.im == other.im
        try:
            return self.im == 0 and self.re == other
        except TypeError:
            return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __repr__(self):
        return fmt(self)


def is_gauss(x):
    return isinstance(x, GaussQ) and x.im != 0


def simplify(x):
    """Drop a zero imaginary part."""
    if isinstance(x, GaussQ) and x.im == 0:
        return x.re
    return x


_RAT = r"[+-]?\d+(?:/\d+)?"


def parse_scalar(s):
    """Parse "p/q", "p/q+r/s i", "r/s i", "i" or a number."""
    if isinstance(s, (int, Fraction)) or type(s) is type(ZERO):
        return mpq(s)
    if isinstance(s, GaussQ):
        return s
    t = str(s).replace(" ", "")
    if not t:
        raise ValueError("empty scalar")
    if re.fullmatch(_RAT, t):
        return mpq(Fraction(t))
    if not t.endswith("i"):
        raise ValueError("cannot parse scalar %r" % (s,))
    body = t[:-1].rstrip("*")
    cut = max(body.rfind("+"), body.rfind("-"))
    if cut > 0:
        re_txt, im_txt = body[:cut], body[cut:]
    else:
        re_txt, im_txt = "0", body
    if im_txt in ("", "+", "-"):
        im_txt += "1"
    if not (re.fullmatch(_RAT, re_txt) and re.fullmatch(_RAT, im_txt)):
        raise ValueError("cannot parse scalar %r" % (s,))
    return simplify(GaussQ(mpq(Fraction(re_txt)), mpq(Fraction(im_txt))))


def fmt(x):
    """Canonical text form of a scalar."""
    if isinstance(x, GaussQ):
        if x.im == 0:
            return fmt(x.re)
        im = "%si" % ("" if abs(x.im) == 1 else fmt(abs(x.im)))
        if x.re == 0:
            return ("-" if x.im < 0 else "") + im
        return "%s%s%s" % (fmt(x.re), "-" if x.im < 0 else "+", im)
    x = mpq(x)
    if x.denominator == 1:
        return str(x.numerator)
    return "%s/%s" % (x.numerator, x.denominator)


def to_fraction(x):
    x = mpq(x)
    return Fraction(int(x.numerator), int(x.denominator))


def is_integral(x):
    return not isinstance(x, GaussQ) and mpq(x).denominator == 1


def lcm_denoms(vals):
    l = mpz(1)
    for v in vals:
        l = gmpy2.lcm(l, mpq(v).denominator)
    return l
