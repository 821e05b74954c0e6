"""Finite-dimensional associative algebras given by structure constants."""

import json
from dataclasses import dataclass, field
from itertools import product

from gmpy2 import mpq

from .linalg import SMat, Subspace, inverse, lowest_pivot, solve, vaxpy, vscale
from .scalars import fmt, parse_scalar


class AlgebraError(ValueError):
    pass


class FinDimAlgebra:
    """Algebra with basis e_0..e_{d-1} and e_i e_j = sum_k c_ijk e_k.

    When unital, the unit is e_0.
    """

    def __init__(self, name, basis, structure, unital=False):
        self.name = name
        self.basis = list(basis)
        self.dim = len(self.basis)
        self.unital = bool(unital)
        d = self.dim
        table = [[{} for _ in range(d)] for _ in range(d)]
        for (i, j), v in structure.items():
            if not (0 <= i < d and 0 <= j < d) or any(not 0 <= k < d for k in v):
                raise AlgebraError("structure index out of range: %r" % ((i, j),))
            table[i][j] = {k: c for k, c in v.items() if c}
        self.table = table

    @classmethod
    def from_triples(cls, name, basis, triples, unital=False):
        s = {}
        d = len(basis)
        for i, j, k, c in triples:
            if not (0 <= i < d and 0 <= j < d and 0 <= k < d):
                raise AlgebraError("structure index out of range: %r" % ((i, j, k),))
            c = parse_scalar(c)
            entry = s.setdefault((i, j), {})
            vaxpy(entry, {k: c})
        return cls(name, basis, s, unital)

    def triples(self):
        for i in range(self.dim):
            for j in range(self.dim):
                for k in sorted(self.table[i][j]):
                    yield i, j, k, self.table[i][j][k]

    def mul(self, u, v):
        """Product of sparse coordinate dicts."""
        out = {}
        for i, a in u.items():
            row = self.table[i]
            for j, b in v.items():
                t = row[j]
                if t:
                    vaxpy(out, t, a * b)
        return out

    def e(self, i):
        return AlgebraElement(self, {i: mpq(1)})

    def one(self):
        if not self.unital:
            raise AlgebraError("%s is not unital" % self.name)
        return self.e(0)

    def zero(self):
        return AlgebraElement(self, {})

    def element(self, coords):
        if isinstance(coords, dict):
            return AlgebraElement(self, coords)
        if len(coords) != self.dim:
            raise AlgebraError("coordinate length %d != dim %d" % (len(coords), self.dim))
        return AlgebraElement(self, {i: parse_scalar(c) for i, c in enumerate(coords) if c})

    def left_matrix(self, x):
        x = _coords(x)
        return SMat(self.dim, self.dim, [self.mul(x, {j: mpq(1)}) for j in range(self.dim)])

    def right_matrix(self, x):
        x = _coords(x)
        return SMat(self.dim, self.dim, [self.mul({j: mpq(1)}, x) for j in range(self.dim)])

    def is_commutative(self):
        return all(self.table[i][j] == self.table[j][i]
                   for i in range(self.dim) for j in range(i))

    def reduced_indices(self):
        """Basis indices of the reduced space A/k (all of A when nonunital)."""
        return list(range(1, self.dim)) if self.unital else list(range(self.dim))

    def to_json(self):
        return {
            "name": self.name,
            "dim": self.dim,
            "unital": self.unital,
            "basis": self.basis,
            "structure": [[i, j, k, fmt(c)] for i, j, k, c in self.triples()],
        }

    def __repr__(self):
        return "FinDimAlgebra(%s, dim=%d%s)" % (self.name, self.dim, ", unital" if self.unital else "")


def _coords(x):
    return x.c if isinstance(x, AlgebraElement) else x


class AlgebraElement:
    __slots__ = ("alg", "c")

    def __init__(self, alg, coords):
        self.alg = alg
        self.c = {k: v for k, v in coords.items() if v}

    def _other(self, o):
        if isinstance(o, AlgebraElement):
            return o.c
        if o == 0:
            return {}
        return vscale(self.alg.one().c, parse_scalar(o))

    def __add__(self, o):
        return AlgebraElement(self.alg, vaxpy(dict(self.c), self._other(o)))

    __radd__ = __add__

    def __sub__(self, o):
        return AlgebraElement(self.alg, vaxpy(dict(self.c), self._other(o), -1))

    def __rsub__(self, o):
        return AlgebraElement(self.alg, vaxpy(dict(self._other(o)), self.c, -1))

    def __neg__(self):
        return AlgebraElement(self.alg, vscale(self.c, -1))

    def __mul__(self, o):
        if isinstance(o, AlgebraElement):
            return AlgebraElement(self.alg, self.alg.mul(self.c, o.c))
        return AlgebraElement(self.alg, vscale(self.c, parse_scalar(o)))

    def __rmul__(self, o):
        return AlgebraElement(self.alg, vscale(self.c, parse_scalar(o)))

    def __pow__(self, k):
        r = self.alg.one() if self.alg.unital else None
        for _ in range(k):
            r = self if r is None else r * self
        return r

    def __eq__(self, o):
        if isinstance(o, AlgebraElement):
            return self.c == o.c
        return self.c == self._other(o)

    def __hash__(self):
        return hash(tuple(sorted(self.c.items())))

    def is_zero(self):
        return not self.c

    def dense(self):
        return [self.c.get(i, mpq(0)) for i in range(self.alg.dim)]

    def __repr__(self):
        if not self.c:
            return "0"
        return " + ".join("%s*%s" % (fmt(v), self.alg.basis[k]) for k, v in sorted(self.c.items()))


@dataclass
class ValidationReport:
    associativity: list = field(default_factory=list)
    unit: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.associativity and not self.unit


def validate(A):
    """Check associativity on all basis triples and the unit axioms."""
    rep = ValidationReport()
    d = A.dim
    for i, j, k in product(range(d), repeat=3):
        lhs = A.mul(A.table[i][j], {k: mpq(1)})
        rhs = A.mul({i: mpq(1)}, A.table[j][k])
        if lhs != rhs:
            rep.associativity.append((i, j, k))
    if A.unital:
        for i in range(d):
            if A.table[0][i] != {i: 1} or A.table[i][0] != {i: 1}:
                rep.unit.append(i)
    return rep


def rebase(A, vectors, labels, name=None, unital=None):
    """Same algebra in a new basis given by old-coordinate vectors."""
    d = A.dim
    P = SMat(d, d, [dict(v) for v in vectors])
    Pinv = inverse(P)
    s = {}
    for i in range(d):
        for j in range(d):
            prod_ = A.mul(P.cols[i], P.cols[j])
            if prod_:
                s[(i, j)] = Pinv.apply(prod_)
    return FinDimAlgebra(name or A.name, labels, s, A.unital if unital is None else unital)


def rebase_unit(A, u, name=None):
    """Move a unit element u (sparse coords) to basis position 0."""
    j = min(u)
    vecs = [dict(u)] + [{k: mpq(1)} for k in range(A.dim) if k != j]
    labels = ["1"] + [A.basis[k] for k in range(A.dim) if k != j]
    B = rebase(A, vecs, labels, name=name, unital=True)
    return B


def _find_unit(A):
    """Solve for a two-sided unit, or None."""
    d = A.dim
    # u e_j = e_j for all j, linear in u
    M = SMat(d * d, d)
    rhs = {}
    for i in range(d):
        col = {}
        for j in range(d):
            for k, c in A.table[i][j].items():
                col[j * d + k] = c
        M.cols[i] = col
    for j in range(d):
        rhs[j * d + j] = mpq(1)
    u = solve(M, rhs)
    if u is None:
        return None
    for j in range(d):
        if A.mul({j: mpq(1)}, u) != {j: 1}:
            return None
    return u


def unitalize(A, name=None):
    """Adjoin a new unit as basis vector 0."""
    s = {(0, 0): {0: mpq(1)}}
    for i in range(A.dim):
        s[(0, i + 1)] = {i + 1: mpq(1)}
        s[(i + 1, 0)] = {i + 1: mpq(1)}
        for j in range(A.dim):
            t = A.table[i][j]
            if t:
                s[(i + 1, j + 1)] = {k + 1: c for k, c in t.items()}
    return FinDimAlgebra(name or (A.name + "~"), ["1"] + A.basis, s, True)


def unit_last_pivot(v, colcount):
    keys = [k for k in v if k != 0]
    return min(keys) if keys else 0


def ideal_closure(A, gens):
    """Two-sided ideal generated by the given vectors, as a Subspace."""
    S = Subspace(pivot_rule=unit_last_pivot)
    todo = [dict(g) for g in gens]
    while todo:
        v = todo.pop()
        if S.add(v) is None:
            continue
        for i in range(A.dim):
            todo.append(A.mul({i: mpq(1)}, v))
            todo.append(A.mul(v, {i: mpq(1)}))
    return S


def is_ideal(A, gens):
    S = Subspace(pivot_rule=unit_last_pivot)
    for g in gens:
        S.add(g)
    for g in gens:
        for i in range(A.dim):
            if not S.contains(A.mul({i: mpq(1)}, g)) or not S.contains(A.mul(g, {i: mpq(1)})):
                return False
    return True


def quotient(A, gens, close=True, name=None):
    """A/I; returns (quotient algebra, projection matrix)."""
    if not close and not is_ideal(A, gens):
        raise AlgebraError("spanning set is not a two-sided ideal")
    S = ideal_closure(A, gens)
    keep = [k for k in range(A.dim) if k not in S.rows]
    pos = {k: i for i, k in enumerate(keep)}

    def proj(v):
        w, _ = S.reduce(v)
        return {pos[k]: c for k, c in w.items()}

    s = {}
    for a, i in enumerate(keep):
        for b, j in enumerate(keep):
            p = proj(A.table[i][j])
            if p:
                s[(a, b)] = p
    unital = A.unital and 0 in pos
    Q = FinDimAlgebra(name or "%s/I" % A.name, [A.basis[k] for k in keep], s, unital)
    P = SMat(len(keep), A.dim, [proj({k: mpq(1)}) for k in range(A.dim)])
    return Q, P


def matrix_algebra(A, r, name=None):
    """M_r(A) with basis E_ij (x) a_k; the unit is rebased to position 0."""
    d = A.dim
    idx = lambda i, j, k: (i * r + j) * d + k
    labels = []
    for i in range(r):
        for j in range(r):
            for k in range(d):
                labels.append("E%d%d" % (i + 1, j + 1) if d == 1 else "E%d%d(%s)" % (i + 1, j + 1, A.basis[k]))
    s = {}
    for i, j, l in product(range(r), repeat=3):
        for k1 in range(d):
            for k2 in range(d):
                t = A.table[k1][k2]
                if t:
                    s[(idx(i, j, k1), idx(j, l, k2))] = {idx(i, l, k): c for k, c in t.items()}
    M = FinDimAlgebra(name or "M%d(%s)" % (r, A.name), labels, s, False)
    if A.unital:
        u = {idx(i, i, 0): mpq(1) for i in range(r)}
        return rebase_unit(M, u, name=M.name)
    return M


def direct_sum(A, B, name=None):
    dA = A.dim
    s = {}
    for i in range(A.dim):
        for j in range(A.dim):
            if A.table[i][j]:
                s[(i, j)] = dict(A.table[i][j])
    for i in range(B.dim):
        for j in range(B.dim):
            if B.table[i][j]:
                s[(dA + i, dA + j)] = {dA + k: c for k, c in B.table[i][j].items()}
    na, nb = (A.name, B.name) if A.name != B.name else (A.name + "1", B.name + "2")
    labels = ["%s.%s" % (na, b) for b in A.basis] + ["%s.%s" % (nb, b) for b in B.basis]
    S = FinDimAlgebra(name or "%s+%s" % (A.name, B.name), labels, s, False)
    if A.unital and B.unital:
        return rebase_unit(S, {0: mpq(1), dA: mpq(1)}, name=S.name)
    return S


class Bimodule:
    """A-bimodule of dimension m; left[i], right[i] act by e_i on either side."""

    def __init__(self, A, m, left, right, basis=None):
        self.A = A
        self.dim = m
        self.left = left
        self.right = right
        self.basis = basis or ["m%d" % i for i in range(m)]

    @classmethod
    def regular(cls, A):
        return cls(A, A.dim, [A.left_matrix({i: mpq(1)}) for i in range(A.dim)],
                   [A.right_matrix({i: mpq(1)}) for i in range(A.dim)], ["m" + b for b in A.basis])

    def act_left(self, a, m):
        out = {}
        for i, c in a.items():
            vaxpy(out, self.left[i].apply(m), c)
        return out

    def act_right(self, m, a):
        out = {}
        for i, c in a.items():
            vaxpy(out, self.right[i].apply(m), c)
        return out

    def defects(self):
        A = self.A
        bad = []
        for i in range(A.dim):
            for j in range(A.dim):
                t = A.table[i][j]
                Lij = _combo(self.left, t, self.dim)
                if self.left[i] @ self.left[j] != Lij:
                    bad.append(("left", i, j))
                if self.right[j] @ self.right[i] != _combo(self.right, t, self.dim):
                    bad.append(("right", i, j))
                if self.left[i] @ self.right[j] != self.right[j] @ self.left[i]:
                    bad.append(("mixed", i, j))
        if A.unital:
            I = SMat.identity(self.dim)
            if self.left[0] != I or self.right[0] != I:
                bad.append(("unit", 0, 0))
        return bad


def _combo(mats, coeffs, m):
    out = SMat.zero(m, m)
    for k, c in coeffs.items():
        out = out + mats[k] * c
    return out


def square_zero_extension(A, M, name=None):
    """A (+) M with (a,m)(a',m') = (aa', am' + ma')."""
    bad = M.defects()
    if bad:
        raise AlgebraError("bimodule axioms violated: %r" % (bad[:3],))
    d = A.dim
    s = {}
    for i in range(d):
        for j in range(d):
            if A.table[i][j]:
                s[(i, j)] = dict(A.table[i][j])
        for m in range(M.dim):
            am = M.left[i].cols[m]
            if am:
                s[(i, d + m)] = {d + k: c for k, c in am.items()}
            ma = M.right[i].cols[m]
            if ma:
                s[(d + m, i)] = {d + k: c for k, c in ma.items()}
    return FinDimAlgebra(name or "%s+%s" % (A.name, "M"), A.basis + M.basis, s, A.unital)


def truncated_poly(n, name=None):
    """k[t]/(t^{n+1})."""
    s = {}
    for i in range(n + 1):
        for j in range(n + 1):
            if i + j <= n:
                s[(i, j)] = {i + j: mpq(1)}
    labels = ["1"] + ["t" if i == 1 else "t^%d" % i for i in range(1, n + 1)]
    return FinDimAlgebra(name or "k[t]/t^%d" % (n + 1), labels, s, True)


def _std_matrix_units(r):
    s = {}
    for p, q, t in product(range(r), repeat=3):
        s[(p * r + q, q * r + t)] = {p * r + t: mpq(1)}
    return s


def builtin(name):
    """Named algebras: C, C2, dual, M2, upper2, strict_upper2."""
    if name == "C":
        return FinDimAlgebra("C", ["1"], {(0, 0): {0: mpq(1)}}, True)
    if name == "C2":
        C = builtin("C")
        S = direct_sum(C, C, name="C2")
        S.basis = ["1", "f"]
        return S
    if name == "dual":
        return FinDimAlgebra("dual", ["1", "eps"], {(0, 0): {0: mpq(1)}, (0, 1): {1: mpq(1)},
                                                    (1, 0): {1: mpq(1)}}, True)
    if name == "M2":
        M = FinDimAlgebra("M2", ["e11", "e12", "e21", "e22"], _std_matrix_units(2))
        return rebase_unit(M, {0: mpq(1), 3: mpq(1)}, name="M2")
    if name == "upper2":
        # e11, e12, e22
        s = {(0, 0): {0: mpq(1)}, (0, 1): {1: mpq(1)}, (1, 2): {1: mpq(1)}, (2, 2): {2: mpq(1)}}
        U = FinDimAlgebra("upper2", ["e11", "e12", "e22"], s)
        return rebase_unit(U, {0: mpq(1), 2: mpq(1)}, name="upper2")
    if name == "strict_upper2":
        return FinDimAlgebra("strict_upper2", ["e12"], {}, False)
    raise AlgebraError("unknown algebra %r" % name)


BUILTINS = ("C", "C2", "dual", "M2", "upper2", "strict_upper2")


def from_json(data):
    if isinstance(data, str):
        with open(data) as fh:
            data = json.load(fh)
    basis = data.get("basis") or ["e%d" % i for i in range(data["dim"])]
    if len(basis) != data["dim"]:
        raise AlgebraError("basis length does not match dim")
    A = FinDimAlgebra.from_triples(data.get("name", "A"), basis, data["structure"], data.get("unital", False))
    return A


def load(source):
    """Built-in name, JSON file path, or dict."""
    if isinstance(source, dict):
        return from_json(source)
    if source in BUILTINS:
        return builtin(source)
    return from_json(source)


class Ideal:
    """Two-sided ideal of R spanned by vectors in R-coordinates."""

    def __init__(self, R, gens, close=True):
        self.R = R
        if close:
            S = ideal_closure(R, gens)
        else:
            if not is_ideal(R, gens):
                raise AlgebraError("spanning set is not a two-sided ideal")
            S = Subspace(pivot_rule=unit_last_pivot)
            for g in gens:
                S.add(g)
        self.space = S
        self.basis = [S.rows[p] for p in S.pivots()]
        self._coord = Subspace(track=True, pivot_rule=lowest_pivot)
        for i, b in enumerate(self.basis):
            self._coord.add(b, tag=i)

    @property
    def dim(self):
        return len(self.basis)

    def contains(self, x):
        return self.space.contains(_coords(x))

    def coords(self, x):
        return self._coord.coords(_coords(x))

    def power(self, k):
        """I^k as an Ideal."""
        if k <= 1:
            return self
        prev = self.power(k - 1)
        gens = [self.R.mul(a, b) for a in prev.basis for b in self.basis]
        gens = [g for g in gens if g]
        return Ideal(self.R, gens)

    def as_algebra(self, name=None):
        """I as a nonunital algebra in its own basis."""
        s = {}
        for i, a in enumerate(self.basis):
            for j, b in enumerate(self.basis):
                p = self.R.mul(a, b)
                if p:
                    s[(i, j)] = self.coords(p)
        labels = ["i%d" % i for i in range(self.dim)]
        for i, b in enumerate(self.basis):
            if len(b) == 1 and next(iter(b.values())) == 1:
                labels[i] = self.R.basis[next(iter(b))]
        return FinDimAlgebra(name or "I", labels, s, False)

    def inclusion(self):
        return SMat(self.R.dim, self.dim, [dict(b) for b in self.basis])

    def quotient(self, name=None):
        return quotient(self.R, self.basis, close=False, name=name)


class Mat:
    """r x r matrix over a ring whose elements support + - *."""

    def __init__(self, rows):
        self.rows = [list(r) for r in rows]
        self.r = len(self.rows)
        if any(len(row) != self.r for row in self.rows):
            raise ValueError("matrix must be square")

    @classmethod
    def diag(cls, entries, zero):
        r = len(entries)
        return cls([[entries[i] if i == j else zero for j in range(r)] for i in range(r)])

    @classmethod
    def identity(cls, r, one, zero):
        return cls.diag([one] * r, zero)

    def __getitem__(self, ij):
        return self.rows[ij[0]][ij[1]]

    def __mul__(self, o):
        if not isinstance(o, Mat):
            return Mat([[x * o for x in row] for row in self.rows])
        if o.r != self.r:
            raise ValueError("size mismatch")
        n = self.r
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = self.rows[i][0] * o.rows[0][j]
                for k in range(1, n):
                    acc = acc + self.rows[i][k] * o.rows[k][j]
                row.append(acc)
            out.append(row)
        return Mat(out)

    def __add__(self, o):
        return Mat([[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, o.rows)])

    def __sub__(self, o):
        return Mat([[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, o.rows)])

    def __neg__(self):
        return Mat([[-a for a in row] for row in self.rows])

    def __eq__(self, o):
        return isinstance(o, Mat) and self.rows == o.rows

    def __pow__(self, k):
        assert k >= 1
        out = self
        for _ in range(k - 1):
            out = out * self
        return out

    def map(self, f):
        return Mat([[f(x) for x in row] for row in self.rows])

    def is_idempotent(self):
        return self * self == self

    def __repr__(self):
        return "Mat(%r)" % (self.rows,)


def block_mat(blocks):
    """Glue a 2x2 grid of Mat blocks into one Mat."""
    (A, B), (C, D) = blocks
    rows = [ra + rb for ra, rb in zip(A.rows, B.rows)] + [rc + rd for rc, rd in zip(C.rows, D.rows)]
    return Mat(rows)


def invert(M):
    """Inverse of a Mat over a unital FinDimAlgebra, by solving M X = 1."""
    A = M.rows[0][0].alg
    if not A.unital:
        raise AlgebraError("inversion needs a unital algebra")
    r, d = M.r, A.dim
    n = r * r * d
    idx = lambda i, j, k: (i * r + j) * d + k
    # column (j, l, k): M * (e_k at (j, l)) = sum_i M_ij e_k at (i, l)
    L = SMat(n, n)
    for j in range(r):
        for l in range(r):
            for k in range(d):
                col = {}
                for i in range(r):
                    p = A.mul(M.rows[i][j].c, {k: mpq(1)})
                    for t, c in p.items():
                        col[idx(i, l, t)] = c
                L.cols[idx(j, l, k)] = col
    rhs = {idx(i, i, 0): mpq(1) for i in range(r)}
    x = solve(L, rhs)
    if x is None:
        raise AlgebraError("matrix is not invertible")
    X = Mat([[AlgebraElement(A, {k: x.get(idx(i, j, k), 0) for k in range(d)}) for j in range(r)]
             for i in range(r)])
    one = Mat.identity(r, A.one(), A.zero())
    if X * M != one or M * X != one:
        raise AlgebraError("matrix is not invertible")
    return X


def matrix_over(A, rows):
    """Mat over A from nested lists of coordinate lists, dicts, scalars or elements."""
    def conv(x):
        if isinstance(x, AlgebraElement):
            return x
        if isinstance(x, (list, tuple)):
            return A.element(x)
        if isinstance(x, dict):
            return AlgebraElement(A, x)
        return A.one() * parse_scalar(x) if x != 0 else A.zero()
    return Mat([[conv(x) for x in row] for row in rows])
