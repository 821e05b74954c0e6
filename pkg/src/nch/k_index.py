"""Matrix K-theory by hand: idempotent lifting, elementary factorizations,
patching, the connecting map K_1 -> K_0, Chern characters and the index
pairing with higher traces.

Ring elements are duck typed: anything with + - * works, so the same code
runs over FinDimAlgebra elements and over the half line operator model.
"""

import random
from dataclasses import dataclass, field
from math import comb, factorial
from itertools import product

from gmpy2 import mpq

from .algebra import (AlgebraElement, AlgebraError, FinDimAlgebra, Ideal, Mat, block_mat, invert,
                      quotient)
from .scalars import fmt


class LiftError(ValueError):
    pass


class ParityError(ValueError):
    pass


# -- the lifting polynomial --------------------------------------------------

def lifting_polynomial(n):
    """Coefficients c_0..c_{2n+1} of f_n(x) = ((2n+1)!/(n!)^2) int_0^x (t - t^2)^n dt."""
    if n < 0:
        raise ValueError("n must be >= 0")
    scale = mpq(factorial(2 * n + 1), factorial(n) ** 2)
    c = [mpq(0)] * (2 * n + 2)
    for j in range(n + 1):
        c[n + j + 1] = scale * comb(n, j) * (-1) ** j / (n + j + 1)
    return c


def poly_eval(coeffs, x, one):
    """Horner evaluation in any ring with unit ``one``."""
    acc = one * coeffs[-1]
    for c in reversed(coeffs[:-1]):
        acc = acc * x + one * c
    return acc


def _pmul(a, b):
    out = [mpq(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _pmod(a, m):
    """Remainder of a modulo a monic-up-to-scalar polynomial m."""
    a = list(a)
    while len(a) >= len(m):
        c = a[-1] / m[-1]
        s = len(a) - len(m)
        for i, y in enumerate(m):
            a[s + i] -= c * y
        a.pop()
    while a and a[-1] == 0:
        a.pop()
    return a


def crt_check(n):
    """f_n = 0 mod x^{n+1}, f_n = 1 mod (1-x)^{n+1}, f_n = x mod x(1-x)."""
    f = lifting_polynomial(n)
    low = all(c == 0 for c in f[:n + 1])
    one_minus_x = [mpq(1), mpq(-1)]
    m = [mpq(1)]
    for _ in range(n + 1):
        m = _pmul(m, one_minus_x)
    g = list(f)
    g[0] -= 1
    high = _pmod(g, m) == []
    h = list(f)
    h[1] -= 1
    mid = _pmod(h, [mpq(0), mpq(1), mpq(-1)]) == []
    idem = _pmod([a - b for a, b in zip(_pmul(f, f), f + [0] * (len(f) - 1))],
                 _ppow([mpq(0), mpq(1), mpq(-1)], n + 1)) == []
    return {"zero_mod_x^(n+1)": low, "one_mod_(1-x)^(n+1)": high, "x_mod_x(1-x)": mid,
            "idempotent_mod_(x-x^2)^(n+1)": idem, "degree": len(f) - 1 <= 2 * n + 1}


def _ppow(p, k):
    out = [mpq(1)]
    for _ in range(k):
        out = _pmul(out, p)
    return out


# -- K-classes ---------------------------------------------------------------

@dataclass
class KClass:
    kind: str                       # "idempotent" | "invertible"
    e: Mat = None
    u: Mat = None
    uinv: Mat = None

    @classmethod
    def idempotent(cls, e):
        k = cls("idempotent", e=e)
        k.check()
        return k

    @classmethod
    def invertible(cls, u, uinv=None):
        if uinv is None:
            uinv = invert(u)
        k = cls("invertible", u=u, uinv=uinv)
        k.check()
        return k

    @property
    def r(self):
        return (self.e if self.kind == "idempotent" else self.u).r

    def check(self):
        if self.kind == "idempotent":
            if self.e * self.e != self.e:
                raise AlgebraError("e is not idempotent")
        elif self.kind == "invertible":
            one = _identity_like(self.u)
            if self.u * self.uinv != one or self.uinv * self.u != one:
                raise AlgebraError("u * u^-1 != 1")
        else:
            raise ValueError("unknown K-class kind %r" % self.kind)

    def to_json(self):
        m = self.e if self.kind == "idempotent" else self.u
        out = {"kind": self.kind, "matrix": [[_elem_json(x) for x in row] for row in m.rows]}
        if self.kind == "invertible":
            out["inverse"] = [[_elem_json(x) for x in row] for row in self.uinv.rows]
        return out


def _elem_json(x):
    if isinstance(x, AlgebraElement):
        return {str(k): fmt(v) for k, v in sorted(x.c.items())}
    if hasattr(x, "to_json"):
        return x.to_json()
    return fmt(x)


def _one_of(x):
    if isinstance(x, AlgebraElement):
        return x.alg.one()
    return type(x).identity() if hasattr(type(x), "identity") else x * 0 + 1


def _zero_of(x):
    return x * 0 if not isinstance(x, AlgebraElement) else x.alg.zero()


def _identity_like(M):
    x = M.rows[0][0]
    return Mat.identity(M.r, _one_of(x), _zero_of(x))


def _zero_like(M):
    x = M.rows[0][0]
    z = _zero_of(x)
    return Mat([[z] * M.r for _ in range(M.r)])


def _scal(M, c):
    return M.map(lambda x: x * c)


# -- Whitehead factorization ------------------------------------------------

def whitehead_factor(phi, phi_inv=None):
    """Four 2r x 2r factors with product diag(phi, phi^-1).

    (1 phi; 0 1)(1 0; -phi^-1 1)(1 phi; 0 1)(0 -1; 1 0)
    """
    if phi_inv is None:
        phi_inv = invert(phi)
    one, zero = _identity_like(phi), _zero_like(phi)
    if phi * phi_inv != one or phi_inv * phi != one:
        raise AlgebraError("phi is not invertible")
    factors = [block_mat([[one, phi], [zero, one]]),
               block_mat([[one, zero], [-phi_inv, one]]),
               block_mat([[one, phi], [zero, one]]),
               block_mat([[zero, -one], [one, zero]])]
    prod = factors[0] * factors[1] * factors[2] * factors[3]
    target = block_mat([[phi, zero], [zero, phi_inv]])
    if prod != target:
        raise ArithmeticError("factorization failed")
    return factors


def commutator_decomposition(x, y, x_inv=None, y_inv=None):
    """diag(x y x^-1 y^-1, 1) = diag(x, x^-1) diag(y, y^-1) diag((yx)^-1, yx).

    Returns the three diagonal blocks together with their four-factor
    elementary decompositions.
    """
    x_inv = invert(x) if x_inv is None else x_inv
    y_inv = invert(y) if y_inv is None else y_inv
    one, zero = _identity_like(x), _zero_like(x)
    yx, yx_inv = y * x, x_inv * y_inv
    diags = [(x, x_inv), (y, y_inv), (yx_inv, yx)]
    mats = [block_mat([[a, zero], [zero, b]]) for a, b in diags]
    lhs = block_mat([[x * y * x_inv * y_inv, zero], [zero, one]])
    if mats[0] * mats[1] * mats[2] != lhs:
        raise ArithmeticError("commutator identity failed")
    return {"diagonals": mats, "factors": [whitehead_factor(a, b) for a, b in diags]}


# -- ideals of matrices ------------------------------------------------------

def _in_ideal(M, ideal):
    """Every entry of M lies in the ideal (Ideal object or a predicate)."""
    test = ideal.contains if isinstance(ideal, Ideal) else ideal
    return all(test(x) for row in M.rows for x in row)


def milnor_patch(p, q, ideal):
    """omega lifting diag(phi, phi^-1) and e = omega diag(1, 0) omega^-1.

    Also uses the corrected lift q~ = (1 + (1 - qp)) q with q~ p = 1 mod I^2.
    """
    one, zero = _identity_like(p), _zero_like(p)
    if not (_in_ideal(q * p - one, ideal) and _in_ideal(p * q - one, ideal)):
        raise LiftError("p and q are not inverse modulo I")
    w = [block_mat([[one, p], [zero, one]]), block_mat([[one, zero], [-q, one]]),
         block_mat([[one, p], [zero, one]]), block_mat([[zero, -one], [one, zero]])]
    w_inv = [block_mat([[zero, one], [-one, zero]]), block_mat([[one, -p], [zero, one]]),
             block_mat([[one, zero], [q, one]]), block_mat([[one, -p], [zero, one]])]
    omega = w[0] * w[1] * w[2] * w[3]
    omega_inv = w_inv[0] * w_inv[1] * w_inv[2] * w_inv[3]
    e0 = block_mat([[one, zero], [zero, zero]])
    e = omega * e0 * omega_inv
    q_t = (one + (one - q * p)) * q
    x = one - q * p
    explicit = block_mat([[p * q_t, p * x], [x * q_t, x * x]])
    I2 = ideal.power(2) if isinstance(ideal, Ideal) else None
    big_one = _identity_like(omega)
    checks = {
        "omega_invertible": omega * omega_inv == big_one and omega_inv * omega == big_one,
        "e_idempotent": e * e == e,
        "e = diag(1,0) mod I": _in_ideal(e - e0, ideal),
        "explicit_idempotent": explicit * explicit == explicit,
        "explicit = diag(1,0) mod I": _in_ideal(explicit - e0, ideal),
    }
    if I2 is not None:
        checks["q~p - 1 in I^2"] = _in_ideal(q_t * p - one, I2)
    return {"omega": omega, "omega_inv": omega_inv, "e": e, "q_tilde": q_t,
            "e_explicit": explicit, "checks": checks}


def connecting_idempotent(p, q, n, ideal=None):
    """(e_n, T, T^-1) for lifts p of u and q of u^-1.

    x = 1 - qp, y = 1 - pq, q_n = (1 + x + ... + x^{2n-1}) q.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    one, zero = _identity_like(p), _zero_like(p)
    x, y = one - q * p, one - p * q
    if ideal is not None and not (_in_ideal(x, ideal) and _in_ideal(y, ideal)):
        raise LiftError("p and q are not inverse modulo I")
    s, xp = one, one
    for _ in range(2 * n - 1):
        xp = xp * x
        s = s + xp
    qn = s * q
    xn, yn = x ** n, y ** n
    x2n, y2n = xn * xn, yn * yn
    e_n = block_mat([[one - y2n, p * xn], [xn * qn, x2n]])
    T = block_mat([[p, -yn], [xn, qn]])
    T_inv = block_mat([[qn, xn], [-yn, p]])
    e0 = block_mat([[one, zero], [zero, zero]])
    big = _identity_like(T)
    checks = {
        "q_n p = 1 - x^2n": qn * p == one - x2n,
        "p q_n = 1 - y^2n": p * qn == one - y2n,
        "e_n idempotent": e_n * e_n == e_n,
        "T T^-1 = 1": T * T_inv == big and T_inv * T == big,
        "T e_0 T^-1 = e_n": T * e0 * T_inv == e_n,
    }
    xi, yi, ok = one, one, True
    for _ in range(4):
        ok = ok and xi * q == q * yi
        xi, yi = xi * x, yi * y
    checks["x^i q = q y^i (i<=3)"] = ok
    return {"e_n": e_n, "T": T, "T_inv": T_inv, "x": x, "y": y, "q_n": qn, "checks": checks}


# -- higher traces -----------------------------------------------------------

@dataclass
class HigherTrace:
    """Trace data for an extension A = R/I.

    ``tau`` maps R elements to scalars; ``lift`` is a based linear section
    A -> R.  For FinDimAlgebra rings the ideal is an Ideal; for the operator
    model it is the finite-rank ideal (``ideal`` is None).
    """
    R: object
    ideal: object
    parity: str
    m: int
    tau: object
    lift: object
    A: object = None
    name: str = ""
    spanning: list = field(default_factory=list, repr=False)

    def verify(self):
        """Trace condition on a spanning set of the relevant commutator space."""
        if isinstance(self.R, FinDimAlgebra):
            R = self.R
            basis = [R.e(i) for i in range(R.dim)]
            if self.parity == "even":
                Im = self.ideal.power(self.m + 1) if self.ideal is not None and self.ideal.dim else None
                vanish = all(self.tau(AlgebraElement(R, b)) == 0 for b in (Im.basis if Im else []))
                comm = all(self.tau(a * b - b * a) == 0 for a in basis for b in basis)
                return {"vanishes_on_I^(m+1)": vanish, "trace_on_commutators": comm}
            Im = self.ideal.power(self.m)
            ib = [AlgebraElement(R, b) for b in Im.basis]
            comm = all(self.tau(a * b - b * a) == 0 for a in basis for b in ib)
            return {"trace_on_[R,I^m]": comm}
        comm = all(self.tau(a * b - b * a) == 0 for a, b in self.spanning)
        return {"trace_on_[R,I^m]": comm, "sampled_pairs": len(self.spanning)}


def extension(R, gens, name=None):
    """(A, pi, section images) for A = R/I with I generated by ``gens``."""
    I = Ideal(R, gens)
    A, P = quotient(R, I.basis, close=False, name=name)
    keep = [k for k in range(R.dim) if k not in I.space.rows]
    section = [{keep[a]: mpq(1)} for a in range(A.dim)]
    if A.unital and section[0] != {0: mpq(1)}:
        raise LiftError("section is not based")
    return I, A, P, section


def fd_trace(R, gens, parity, m, weights, lift_seed=None, name=""):
    """HigherTrace on a FinDimAlgebra extension with tau given by weights on R's basis.

    With ``lift_seed`` the section is perturbed by seeded random elements of I
    (keeping rho(1) = 1).
    """
    I, A, P, section = extension(R, gens)
    images = [dict(s) for s in section]
    if lift_seed is not None and I.dim:
        rng = random.Random(lift_seed)
        for a in range(A.dim):
            if A.unital and a == 0:
                continue
            for b in I.basis:
                c = mpq(rng.randint(-3, 3), rng.randint(1, 2))
                for k, v in b.items():
                    images[a][k] = images[a].get(k, 0) + c * v
            images[a] = {k: v for k, v in images[a].items() if v}
    w = {int(k): mpq(v) for k, v in weights.items()}

    def tau(x):
        return sum((w.get(k, 0) * v for k, v in x.c.items()), mpq(0))

    def lift(a):
        out = {}
        for k, v in a.c.items():
            for j, c in images[k].items():
                out[j] = out.get(j, 0) + v * c
        return AlgebraElement(R, out)

    return HigherTrace(R, I, parity, m, tau, lift, A, name)


def toeplitz_trace(perturb_seed=None, window=3):
    """Odd higher trace on the half line operator model: I = finite rank, m = 1.

    The lift sends z^k to T_{z^k}, optionally plus a seeded finite-rank
    perturbation (never on the constant 1).
    """
    from .toeplitz import HalfLineOperator, LaurentSymbol
    rng = random.Random(perturb_seed)
    perturb = {}

    def lift(f):
        f = f if isinstance(f, LaurentSymbol) else LaurentSymbol.const(f)
        out = HalfLineOperator(f)
        if perturb_seed is None:
            return out
        fin = {}
        for k, v in f.c.items():
            if k == 0:
                continue
            if k not in perturb:
                perturb[k] = {(rng.randint(0, 2), rng.randint(0, 2)): mpq(rng.randint(-2, 2))}
            for ij, c in perturb[k].items():
                fin[ij] = fin.get(ij, 0) + v * c
        return out + HalfLineOperator(None, fin)

    def tau(x):
        return x.trace()

    gens = [HalfLineOperator.toeplitz(LaurentSymbol.monomial(k)) for k in range(-window, window + 1)]
    gens += [HalfLineOperator.unit(i, j) for i in range(window) for j in range(window)]
    fin = [HalfLineOperator.unit(i, j) for i in range(window + 1) for j in range(window + 1)]
    pairs = [(a, b) for a in gens for b in fin]
    return HigherTrace("halfline", None, "odd", 1, tau, lift, "laurent", "toeplitz", pairs)


# -- Chern characters ---------------------------------------------------------

def matrix_trace_chain(mats):
    """tr(m_0 (x) ... (x) m_k) = sum m0_{i0 i1} (x) m1_{i1 i2} (x) ... (x) mk_{ik i0}.

    Returns [(coefficient, tuple of ring elements)], zero entries skipped.
    """
    r = mats[0].r
    k = len(mats)
    out = []
    for idx in product(range(r), repeat=k):
        ents = []
        for pos in range(k):
            x = mats[pos].rows[idx[pos]][idx[(pos + 1) % k]]
            if _is_zero(x):
                break
            ents.append(x)
        else:
            out.append((mpq(1), tuple(ents)))
    return out


def _is_zero(x):
    if isinstance(x, AlgebraElement):
        return not x.c
    if hasattr(x, "c"):
        return not x.c
    return x == 0


def chern_chain(kc, n):
    """Element-level Chern chain: list of (coefficient, tuple of A elements).

    even: ((2n)!/n!) tr(e)_{2n+1};  odd: (n-1)! tr(u^-1 - 1, u - 1)_{2n}.
    """
    if kc.kind == "idempotent":
        c = mpq(factorial(2 * n), factorial(n))
        return [(c * a, t) for a, t in matrix_trace_chain([kc.e] * (2 * n + 1))]
    if n < 1:
        raise ValueError("odd Chern character needs n >= 1")
    one = _identity_like(kc.u)
    a, b = kc.uinv - one, kc.u - one
    c = mpq(factorial(n - 1))
    return [(c * x, t) for x, t in matrix_trace_chain([a, b] * n)]


def expand_chain(chain, alg):
    """Multilinear expansion of an element chain into basis tuples {tuple: coeff}."""
    out = {}
    for c, elems in chain:
        terms = [(c, ())]
        for x in elems:
            terms = [(a * v, t + (k,)) for a, t in terms for k, v in x.c.items()]
        for a, t in terms:
            out[t] = out.get(t, 0) + a
    return {t: v for t, v in out.items() if v}


def chern_character(kc, n):
    """Chern character as a cyclic chain over a FinDimAlgebra, with checks.

    Returns {"degree", "chain" (basis tuples), "cycle" (b-image zero in C^lambda),
    "norm_identity"}.
    """
    from .homology import ConnesComplex
    from .forms import t_b
    chain = chern_chain(kc, n)
    x = kc.e.rows[0][0] if kc.kind == "idempotent" else kc.u.rows[0][0]
    alg = x.alg
    terms = expand_chain(chain, alg)
    k = 2 * n + 1 if kc.kind == "idempotent" else 2 * n
    deg = k - 1
    X = ConnesComplex(alg, deg + 1)
    bterms = {}
    for t, c in terms.items():
        for s, v in t_b(alg, t, False).items():
            bterms[s] = bterms.get(s, 0) + c * v
    cycle = deg == 0 or not X.project(deg - 1, {s: v for s, v in bterms.items() if v})
    # N acting on the chain: sum of signed rotations
    sgn = -1 if (k - 1) % 2 else 1
    normed = {}
    for t, c in terms.items():
        cur, s = t, 1
        for _ in range(k):
            normed[cur] = normed.get(cur, 0) + s * c
            cur = (cur[-1],) + cur[:-1]
            s *= sgn
    normed = {t: v for t, v in normed.items() if v}
    if kc.kind == "idempotent":
        norm_ok = normed == {t: k * v for t, v in terms.items()}
    else:
        norm_ok = True
    return {"degree": deg, "chain": terms, "cycle": cycle, "norm_identity": norm_ok}


# -- index pairing ------------------------------------------------------------

def _tau_tilde(ht, M):
    return sum((ht.tau(M.rows[i][i]) for i in range(M.r)), mpq(0))


def _r_one(ht, sample):
    return _one_of(sample)


def even_direct(ht, kc, n):
    """tau~(f_n(rho~(e))), and the same via exact expansion of the t-integral."""
    E = kc.e.map(ht.lift)
    one = _identity_like(E)
    val = _tau_tilde(ht, poly_eval(lifting_polynomial(n), E, one))
    # ((2n+1)!/(n!)^2) int_0^1 tau~ E (tE - t^2 E^2)^n dt, expanded in t
    E2 = E * E
    poly = {0: E}
    for _ in range(n):
        nxt = {}
        for p, M in poly.items():
            for dp, F in ((1, M * E), (2, -(M * E2))):
                nxt[p + dp] = nxt[p + dp] + F if p + dp in nxt else F
        poly = nxt
    integral = sum((_tau_tilde(ht, M) / (p + 1) for p, M in poly.items()), mpq(0))
    integral *= mpq(factorial(2 * n + 1), factorial(n) ** 2)
    return val, integral


def odd_direct(ht, kc, n, p=None, q=None):
    """tau~((1 - qp)^n - (1 - pq)^n) with p, q lifts of u, u^-1 (default rho~)."""
    p = kc.u.map(ht.lift) if p is None else p
    q = kc.uinv.map(ht.lift) if q is None else q
    one = _identity_like(p)
    x, y = one - q * p, one - p * q
    return _tau_tilde(ht, x ** n) - _tau_tilde(ht, y ** n)


class _Curv:
    """Cached rho and omega for one lift."""

    def __init__(self, ht):
        self.ht = ht
        self._rho = {}
        self._om = {}

    def rho(self, a):
        if a not in self._rho:
            self._rho[a] = self.ht.lift(a)
        return self._rho[a]

    def omega(self, a, b):
        key = (a, b)
        if key not in self._om:
            self._om[key] = self.rho(a * b) - self.rho(a) * self.rho(b)
        return self._om[key]


def _cs_value(cv, args, n):
    """cs_{2n+1}(a_0, ..., a_2n) = sum over rotations of
    (1/n!) int_0^1 tau(rho(a_0) w_t(a_1, a_2) ... w_t(a_{2n-1}, a_2n)) dt."""
    k = len(args)
    total = mpq(0)
    for i in range(k):
        a = args[k - i:] + args[:k - i]
        poly = {0: cv.rho(a[0])}
        for j in range(n):
            u, v = a[2 * j + 1], a[2 * j + 2]
            ruv = cv.rho(u * v)
            rr = cv.rho(u) * cv.rho(v)
            nxt = {}
            for p, M in poly.items():
                for dp, F in ((1, M * ruv), (2, -(M * rr))):
                    nxt[p + dp] = nxt[p + dp] + F if p + dp in nxt else F
            poly = nxt
        total += sum((cv.ht.tau(M) / (p + 1) for p, M in poly.items()), mpq(0))
    return total / factorial(n)


def _ch_value(cv, args, n):
    """ch_{2n}(a_0..a_{2n-1}) = N[tau(omega^n)/n!] with lambda sign -1."""
    k = len(args)
    total = mpq(0)
    for i in range(k):
        a = args[k - i:] + args[:k - i]
        M = cv.omega(a[0], a[1])
        for j in range(1, n):
            M = M * cv.omega(a[2 * j], a[2 * j + 1])
        total += (-1) ** i * cv.ht.tau(M)
    return total / factorial(n)


def paired(ht, kc, n):
    """<Connes class of ht, Chern character of kc> at level n."""
    cv = _Curv(ht)
    chain = chern_chain(kc, n)
    if kc.kind == "idempotent":
        return sum((c * _cs_value(cv, t, n) for c, t in chain), mpq(0))
    return sum((c * _ch_value(cv, t, n) for c, t in chain), mpq(0))


@dataclass
class IndexResult:
    n: int
    direct: object
    paired: object
    integral: object = None
    second_lift: object = None

    @property
    def equal(self):
        vals = [self.direct, self.paired]
        if self.integral is not None:
            vals.append(self.integral)
        return all(v == vals[0] for v in vals)

    def as_json(self):
        out = {"n": self.n, "direct": fmt(self.direct), "paired": fmt(self.paired), "equal": self.equal}
        if self.second_lift is not None:
            out["second_lift"] = fmt(self.second_lift)
        return out


def index_pairing(ht, kc, n, other=None):
    """Direct index formula and the cochain pairing at level n >= m.

    ``other`` is a second HigherTrace differing only in the lift; its direct
    value is recorded for the lift-independence check.
    """
    want = "even" if kc.kind == "idempotent" else "odd"
    if ht.parity != want:
        raise ParityError("%s class against an %s higher trace" % (kc.kind, ht.parity))
    if n < ht.m or (want == "odd" and n < 1):
        raise ValueError("level n=%d below the trace power m=%d" % (n, ht.m))
    if want == "even":
        d, integral = even_direct(ht, kc, n)
        res = IndexResult(n, d, paired(ht, kc, n), integral)
        if other is not None:
            res.second_lift = even_direct(other, kc, n)[0]
    else:
        res = IndexResult(n, odd_direct(ht, kc, n), paired(ht, kc, n))
        if other is not None:
            res.second_lift = odd_direct(other, kc, n)
    return res


def index_report(ht, kc, levels, other=None):
    """Results for several levels plus stability and lift-independence verdicts."""
    rows = [index_pairing(ht, kc, n, other) for n in levels]
    vals = {r.direct for r in rows}
    out = {"results": [r.as_json() for r in rows],
           "equal": all(r.equal for r in rows),
           "stable_in_n": len(vals) == 1,
           "value": fmt(rows[0].direct) if rows else None}
    if other is not None:
        out["lift_independent"] = all(r.second_lift == r.direct for r in rows) and all(
            r.paired == index_pairing(other, kc, r.n).paired for r in rows)
    return out


def lift_idempotent(ht, e, n):
    """f_n(rho~(e)) and whether it is idempotent modulo I^{n+1}."""
    E = e.map(ht.lift)
    F = poly_eval(lifting_polynomial(n), E, _identity_like(E))
    defect = F * F - F
    ok = _in_ideal(defect, ht.ideal.power(n + 1)) if ht.ideal is not None else True
    return F, ok
