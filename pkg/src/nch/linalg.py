"""Exact sparse linear algebra.

Vectors are dicts {index: scalar} without zero entries.  Matrices store
columns, so column j is the image of basis vector j.
"""

import heapq

import gmpy2
from gmpy2 import mpq, mpz

from .scalars import GaussQ, lcm_denoms


def vadd(u, v, c=1):
    """u + c*v as a new dict."""
    w = dict(u)
    vaxpy(w, v, c)
    return w


def vaxpy(w, v, c=1):
    """w += c*v in place."""
    for k, x in v.items():
        y = w.get(k)
        if y is None:
            y = c * x
            if y:
                w[k] = y
        else:
            y = y + c * x
            if y:
                w[k] = y
            else:
                del w[k]
    return w


def vscale(v, c):
    if not c:
        return {}
    return {k: c * x for k, x in v.items()}


class SMat:
    """Sparse m x n matrix stored by columns."""

    __slots__ = ("m", "n", "cols")

    def __init__(self, m, n, cols=None):
        self.m = m
        self.n = n
        if cols is None:
            cols = [{} for _ in range(n)]
        assert len(cols) == n
        self.cols = cols

    @classmethod
    def identity(cls, n, c=1):
        return cls(n, n, [{i: mpq(c)} for i in range(n)] if c else None)

    @classmethod
    def zero(cls, m, n):
        return cls(m, n)

    @classmethod
    def from_dense(cls, rows):
        m = len(rows)
        n = len(rows[0]) if m else 0
        cols = [{} for _ in range(n)]
        for i, row in enumerate(rows):
            for j, x in enumerate(row):
                if x:
                    cols[j][i] = x if isinstance(x, GaussQ) else mpq(x)
        return cls(m, n, cols)

    @classmethod
    def from_entries(cls, m, n, entries):
        M = cls(m, n)
        for (i, j), x in entries.items():
            if x:
                M.cols[j][i] = M.cols[j].get(i, 0) + x
                if not M.cols[j][i]:
                    del M.cols[j][i]
        return M

    @property
    def shape(self):
        return (self.m, self.n)

    def __getitem__(self, ij):
        i, j = ij
        return self.cols[j].get(i, mpq(0))

    def nnz(self):
        return sum(len(c) for c in self.cols)

    def entries(self):
        for j, c in enumerate(self.cols):
            for i in sorted(c):
                yield i, j, c[i]

    def to_dense(self):
        out = [[mpq(0)] * self.n for _ in range(self.m)]
        for i, j, x in self.entries():
            out[i][j] = x
        return out

    def rows(self):
        r = [{} for _ in range(self.m)]
        for j, c in enumerate(self.cols):
            for i, x in c.items():
                r[i][j] = x
        return r

    def T(self):
        return SMat(self.n, self.m, self.rows())

    def apply(self, v):
        out = {}
        for j, x in v.items():
            vaxpy(out, self.cols[j], x)
        return out

    def __matmul__(self, other):
        if isinstance(other, dict):
            return self.apply(other)
        if self.n != other.m:
            raise ValueError("shape mismatch %s @ %s" % (self.shape, other.shape))
        return SMat(self.m, other.n, [self.apply(c) for c in other.cols])

    def __add__(self, other):
        self._same(other)
        return SMat(self.m, self.n, [vadd(a, b) for a, b in zip(self.cols, other.cols)])

    def __sub__(self, other):
        self._same(other)
        return SMat(self.m, self.n, [vadd(a, b, -1) for a, b in zip(self.cols, other.cols)])

    def __neg__(self):
        return SMat(self.m, self.n, [vscale(c, -1) for c in self.cols])

    def __mul__(self, c):
        return SMat(self.m, self.n, [vscale(col, c) for col in self.cols])

    __rmul__ = __mul__

    def __pow__(self, k):
        assert self.m == self.n and k >= 0
        result = SMat.identity(self.n)
        base = self
        while k:
            if k & 1:
                result = result @ base
            k >>= 1
            if k:
                base = base @ base
        return result

    def _same(self, other):
        if self.shape != other.shape:
            raise ValueError("shape mismatch %s vs %s" % (self.shape, other.shape))

    def __eq__(self, other):
        if not isinstance(other, SMat):
            return NotImplemented
        return self.shape == other.shape and self.cols == other.cols

    def is_zero(self):
        return not any(self.cols)

    def first_difference(self, other):
        """First (row, col) where two matrices differ, or None."""
        self._same(other)
        for j, (a, b) in enumerate(zip(self.cols, other.cols)):
            if a != b:
                diff = vadd(a, b, -1)
                return (min(diff), j)
        return None

    def restrict_cols(self, idx):
        return SMat(self.m, len(idx), [self.cols[j] for j in idx])

    def __repr__(self):
        return "SMat(%d x %d, nnz=%d)" % (self.m, self.n, self.nnz())


def block(blocks):
    """Assemble a block matrix from a grid of SMat (None means zero)."""
    heights = []
    for row in blocks:
        h = [B.m for B in row if B is not None]
        heights.append(h[0])
    widths = []
    for j in range(len(blocks[0])):
        w = [row[j].n for row in blocks if row[j] is not None]
        widths.append(w[0])
    offs_r = [sum(heights[:i]) for i in range(len(heights))]
    cols = []
    for j, w in enumerate(widths):
        for c in range(w):
            col = {}
            for i, row in enumerate(blocks):
                B = row[j]
                if B is None:
                    continue
                for r, x in B.cols[c].items():
                    col[offs_r[i] + r] = x
            cols.append(col)
    return SMat(sum(heights), sum(widths), cols)


def _integral_rows(rows):
    out = []
    for r in rows:
        if not r:
            continue
        l = lcm_denoms(r.values())
        v = {k: mpz(x * l) for k, x in r.items()}
        g = mpz(0)
        for x in v.values():
            g = gmpy2.gcd(g, x)
        if g != 1:
            v = {k: x // g for k, x in v.items()}
        out.append(v)
    return out


def rank(M, reverse=False):
    """Exact rank.

    Rational matrices use fraction-free elimination on integer rows with
    content removal; pivots follow a Markowitz-like rule (shortest row, then
    sparsest column, ties to the lowest index).  ``reverse`` flips the basis
    order, which must not change the answer.
    """
    rows = M.rows()
    if reverse:
        rows = [{M.n - 1 - k: x for k, x in r.items()} for r in reversed(rows)]
    if any(isinstance(x, GaussQ) for r in rows for x in r.values()):
        return _rank_field(rows)
    return _rank_ff(_integral_rows(rows))


def _rank_ff(rows):
    rows = dict(enumerate(rows))
    colmap = {}
    for i, r in rows.items():
        for k in r:
            colmap.setdefault(k, set()).add(i)
    heap = [(len(r), i) for i, r in rows.items()]
    heapq.heapify(heap)
    rk = 0
    while heap:
        ln, i = heapq.heappop(heap)
        r = rows.get(i)
        if r is None or len(r) != ln:
            continue
        if not r:
            del rows[i]
            continue
        p = min(r, key=lambda k: (len(colmap[k]), k))
        a = r[p]
        del rows[i]
        for k in r:
            colmap[k].discard(i)
        rk += 1
        for j in sorted(colmap[p]):
            s = rows[j]
            c = s[p]
            for k in s:
                colmap[k].discard(j)
            new = {}
            for k, x in s.items():
                new[k] = a * x
            for k, x in r.items():
                y = new.get(k, 0) - c * x
                if y:
                    new[k] = y
                else:
                    new.pop(k, None)
            g = mpz(0)
            for x in new.values():
                g = gmpy2.gcd(g, x)
                if g == 1:
                    break
            if g > 1:
                new = {k: x // g for k, x in new.items()}
            rows[j] = new
            for k in new:
                colmap[k].add(j)
            heapq.heappush(heap, (len(new), j))
        colmap.pop(p, None)
    return rk


def _rank_field(rows):
    S = Subspace()
    for r in rows:
        S.add(r)
    return S.dim


def markowitz_pivot(v, colcount):
    return min(v, key=lambda k: (len(colcount.get(k, ())), k))


def lowest_pivot(v, colcount):
    return min(v)


class Subspace:
    """Span of sparse vectors kept in fully reduced echelon form.

    Every stored row has a pivot column where it equals 1 and where all
    other rows vanish.  With ``track`` set, each row remembers its
    expression in the tags of the generators that produced it.
    """

    def __init__(self, track=False, pivot_rule=markowitz_pivot):
        self.rows = {}
        self.expr = {}
        self.colmap = {}
        self.track = track
        self.pivot_rule = pivot_rule

    @property
    def dim(self):
        return len(self.rows)

    def pivots(self):
        return sorted(self.rows)

    def reduce(self, v):
        """Return (remainder, combination) with v = remainder + sum c_p row_p."""
        w = dict(v)
        comb = {}
        for p in [k for k in v if k in self.rows]:
            c = w.get(p)
            if not c:
                continue
            vaxpy(w, self.rows[p], -c)
            comb[p] = c
        return w, comb

    def contains(self, v):
        return not self.reduce(v)[0]

    def _expr_of(self, comb):
        out = {}
        for p, c in comb.items():
            vaxpy(out, self.expr[p], c)
        return out

    def add(self, v, tag=None):
        """Insert v; returns the pivot used, or None if v was dependent.

        When tracking, a dependent v yields a relation which is stored in
        ``self.last_relation`` as {tag: coeff} summing to zero.
        """
        w, comb = self.reduce(v)
        if not w:
            if self.track:
                rel = {} if tag is None else {tag: 1}
                vaxpy(rel, self._expr_of(comb), -1)
                self.last_relation = rel
            return None
        p = self.pivot_rule(w, self.colmap)
        inv = 1 / w[p]
        w = {k: x * inv for k, x in w.items()}
        if self.track:
            e = {} if tag is None else {tag: 1}
            vaxpy(e, self._expr_of(comb), -1)
            e = vscale(e, inv)
        for q in list(self.colmap.get(p, ())):
            row = self.rows[q]
            c = row[p]
            for k in row:
                self.colmap[k].discard(q)
            vaxpy(row, w, -c)
            for k in row:
                self.colmap.setdefault(k, set()).add(q)
            if self.track:
                vaxpy(self.expr[q], e, -c)
        self.rows[p] = w
        for k in w:
            self.colmap.setdefault(k, set()).add(p)
        if self.track:
            self.expr[p] = e
        return p

    def coords(self, v):
        """Expression of v in generator tags, or None if v is not in the span."""
        w, comb = self.reduce(v)
        if w:
            return None
        return self._expr_of(comb)


def kernel(M):
    """Basis of the null space of M as sparse vectors."""
    S = Subspace(track=True)
    out = []
    for j, c in enumerate(M.cols):
        if S.add(c, tag=j) is None:
            out.append(S.last_relation)
    return out


def image_basis(M):
    S = Subspace()
    for c in M.cols:
        S.add(c)
    return S


def solve(M, b):
    """Some x with M x = b, or None."""
    S = Subspace(track=True)
    for j, c in enumerate(M.cols):
        S.add(c, tag=j)
    return S.coords(b)


def inverse(M):
    """Exact inverse of a square matrix; raises ValueError when singular."""
    if M.m != M.n:
        raise ValueError("not square")
    S = Subspace(track=True)
    for j, c in enumerate(M.cols):
        if S.add(c, tag=j) is None:
            raise ValueError("singular matrix")
    cols = []
    for i in range(M.n):
        x = S.coords({i: mpq(1)})
        cols.append(x)
    return SMat(M.n, M.n, cols)


def span_equal(vs, ws):
    A, B = Subspace(), Subspace()
    for v in vs:
        A.add(v)
    for w in ws:
        B.add(w)
    return A.dim == B.dim and all(B.contains(r) for r in A.rows.values())


class Homology:
    """Homology at one node of a complex  C_{n+1} --d_in--> C_n --d_out--> C_{n-1}.

    ``reps`` are cycles whose classes form a basis; ``coords`` expresses the
    class of any cycle in that basis.
    """

    def __init__(self, d_out, d_in, dim_chain=None):
        if d_out is not None:
            n = d_out.n
        elif d_in is not None:
            n = d_in.m
        else:
            n = dim_chain
        self.chain_dim = n
        if d_out is None:
            cycles = [{i: mpq(1)} for i in range(n)]
        else:
            cycles = kernel(d_out)
        self.cycles = cycles
        S = Subspace(track=True)
        if d_in is not None:
            for c in d_in.cols:
                S.add(c)
        self.boundary_rank = S.dim
        self.reps = []
        for z in cycles:
            if S.add(z, tag=len(self.reps)) is not None:
                self.reps.append(z)
        self._S = S

    @property
    def dim(self):
        return len(self.reps)

    def coords(self, z):
        """Coordinates of the class of cycle z (dense list)."""
        e = self._S.coords(z)
        if e is None:
            raise ValueError("not a cycle in the span")
        return [e.get(i, mpq(0)) for i in range(self.dim)]

    def is_boundary(self, z):
        e = self._S.coords(z)
        return e is not None and not any(e.values())


def induced_map(F, src, tgt):
    """Matrix (dense rows) of the map on homology induced by chain map F."""
    cols = [tgt.coords(F.apply(z)) for z in src.reps]
    return [[cols[j][i] for j in range(src.dim)] for i in range(tgt.dim)]


def dense_rank(rows):
    S = Subspace()
    for r in rows:
        S.add({j: x for j, x in enumerate(r) if x})
    return S.dim


def dense_kernel(rows, ncols):
    """Kernel of a dense matrix given by rows."""
    M = SMat(len(rows), ncols)
    for i, r in enumerate(rows):
        for j, x in enumerate(r):
            if x:
                M.cols[j][i] = x
    return kernel(M)


def dense_image(rows, ncols):
    """Column space of a dense matrix, as sparse vectors."""
    out = []
    for j in range(ncols):
        out.append({i: r[j] for i, r in enumerate(rows) if r[j]})
    return out
