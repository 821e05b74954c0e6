"""Hochschild, cyclic and periodic cyclic homology at desk scale."""

from dataclasses import dataclass, field
from itertools import product

from gmpy2 import mpq

from .forms import forms, MixedComplex, t_b
from .linalg import Homology, SMat, induced_map, rank, span_equal


class ComplexError(ValueError):
    pass


@dataclass
class HomologyResult:
    degree: int
    dim: int
    trusted: bool
    reps: list = field(default_factory=list, repr=False)
    node: object = field(default=None, repr=False, compare=False)

    def as_json(self):
        from .scalars import fmt
        return {"degree": self.degree, "dim": self.dim, "trusted": self.trusted,
                "representatives": [{str(k): fmt(v) for k, v in sorted(r.items())} for r in self.reps]}


def homology(diffs, dims, degrees, trusted_top=None, check=True):
    """Homology of a complex with d_n = diffs(n): C_n -> C_{n-1}.

    ``diffs(n)`` returns an SMat or None (zero map); ``dims(n)`` the chain
    dimension.  Degrees above ``trusted_top`` are flagged untrusted.
    """
    out = []
    cache = {}

    def get(n):
        if n not in cache:
            cache[n] = diffs(n)
        return cache[n]
    for n in degrees:
        dout, din = get(n), get(n + 1)
        if check and dout is not None and din is not None:
            if not (dout @ din).is_zero():
                raise ComplexError("d o d != 0 at degree %d" % n)
        node = Homology(dout, din, dims(n))
        tr = trusted_top is None or n <= trusted_top
        out.append(HomologyResult(n, node.dim, tr, node.reps, node))
    return out


def hochschild(alg, max_degree, N=None):
    """HH_n = H_n(Omega A, b) for n <= max_degree."""
    N = max_degree + 2 if N is None else N
    F = forms(alg, N)

    def diffs(n):
        if n <= 0 or n > N:
            return None
        return F.b(n)
    return homology(diffs, lambda n: F.space(n).dim, range(max_degree + 1), trusted_top=N - 2)


class ConnesComplex:
    """C^lambda_n = A^{(x)(n+1)}/(1 - lambda) with basis the signed rotation orbits."""

    def __init__(self, alg, N):
        self.alg = alg
        self.N = N
        self._spaces = {}
        self._b = {}

    def classes(self, n):
        """(reps, cls) where cls[tuple] = (class index, sign) or None if killed."""
        if n in self._spaces:
            return self._spaces[n]
        k = n + 1
        sgn = -1 if n & 1 else 1
        cls = {}
        reps = []
        for t in product(range(self.alg.dim), repeat=k):
            if t in cls:
                continue
            orbit = {}
            cur, s = t, 1
            dead = False
            for _ in range(k):
                if cur in orbit:
                    if orbit[cur] != s:
                        dead = True
                    break
                orbit[cur] = s
                cur = (cur[-1],) + cur[:-1]
                s *= sgn
            else:
                if orbit.get(cur, s) != s:
                    dead = True
            if dead:
                for u in orbit:
                    cls[u] = None
                continue
            rep = min(orbit)
            rs = orbit[rep]
            idx = len(reps)
            reps.append(rep)
            for u, su in orbit.items():
                cls[u] = (idx, su * rs)
        order = sorted(range(len(reps)), key=lambda i: reps[i])
        remap = {old: new for new, old in enumerate(order)}
        reps = [reps[i] for i in order]
        cls = {u: (None if v is None else (remap[v[0]], v[1])) for u, v in cls.items()}
        self._spaces[n] = (reps, cls)
        return reps, cls

    def dim(self, n):
        return len(self.classes(n)[0])

    def project(self, n, terms):
        _, cls = self.classes(n)
        out = {}
        for t, c in terms.items():
            v = cls[t]
            if v is None:
                continue
            i, s = v
            y = out.get(i, 0) + s * c
            if y:
                out[i] = y
            else:
                out.pop(i, None)
        return out

    def b(self, n):
        if n <= 0:
            return None
        if n not in self._b:
            reps, _ = self.classes(n)
            M = SMat(self.dim(n - 1), len(reps))
            for j, t in enumerate(reps):
                M.cols[j] = self.project(n - 1, t_b(self.alg, t, False))
            self._b[n] = M
        return self._b[n]


def cyclic_homology(alg, max_degree, model="mixed", N=None):
    """HC_n for n <= max_degree in the mixed (reduced forms, b+B) or Connes model."""
    N = max_degree + 2 if N is None else N
    if model == "mixed":
        if not alg.unital:
            raise ComplexError("the mixed model needs a unital algebra")
        X = MixedComplex(alg, N)
        return homology(lambda n: X.D(n) if 0 < n <= N else None, X.dim,
                        range(max_degree + 1), trusted_top=N - 2)
    if model == "connes":
        X = ConnesComplex(alg, N)
        return homology(lambda n: X.b(n) if 0 < n <= N else None, X.dim,
                        range(max_degree + 1), trusted_top=N - 2)
    raise ValueError("unknown model %r" % model)


def dims(results, trusted_only=False):
    return [r.dim for r in results if r.trusted or not trusted_only]


def _exact_at(incoming, outgoing, mid_dim):
    """im(incoming) == ker(outgoing) inside a space of dimension mid_dim (dense matrices)."""
    from .linalg import dense_image, dense_kernel
    im = dense_image(incoming, len(incoming[0]) if incoming else 0) if incoming else []
    im = [v for v in im if v]
    ker = dense_kernel(outgoing, mid_dim) if outgoing else [{i: mpq(1)} for i in range(mid_dim)]
    if not outgoing:
        ker = [{i: mpq(1)} for i in range(mid_dim)]
    return span_equal(im, ker)


def _dense(rows, m, n):
    if m == 0 or n == 0:
        return [[mpq(0)] * n for _ in range(m)]
    return rows


@dataclass
class ExactnessReport:
    nodes: list = field(default_factory=list)

    @property
    def ok(self):
        return all(n["exact"] for n in self.nodes)

    def failures(self):
        return [n for n in self.nodes if not n["exact"]]


def sbi_check(alg, max_degree):
    """Exactness of ... HH_n -I-> HC_n -S-> HC_{n-2} -B-> HH_{n-1} -I-> ... for n <= max_degree.

    Also records B o S = 0 and the other consecutive composites.
    """
    N = max_degree + 2
    X = MixedComplex(alg, N)
    HH = {r.degree: r.node for r in hochschild(alg, max_degree + 1, N=N + 1)}
    HC = {r.degree: r.node for r in cyclic_homology(alg, max_degree, "mixed", N=N)}

    def mat(F_, src, tgt):
        return _dense(induced_map(F_, src, tgt), tgt.dim, src.dim)

    I = {n: mat(X.I(n), HH[n], HC[n]) for n in range(max_degree + 1)}
    S = {n: mat(X.S(n), HC[n], HC[n - 2]) for n in range(2, max_degree + 1)}
    Bc = {n: mat(X.Bconn(n), HC[n], HH[n + 1]) for n in range(0, max_degree)}
    rep = ExactnessReport()

    def node(name, incoming, outgoing, mid):
        ok = _exact_at(incoming, outgoing, mid)
        rep.nodes.append({"node": name, "exact": ok})

    for n in range(max_degree + 1):
        # at HC_n: im I_n = ker S_n
        if n >= 2:
            node("HC_%d (I,S)" % n, I[n], S[n], HC[n].dim)
        else:
            node("HC_%d (I,S)" % n, I[n], None, HC[n].dim)
        # at HC_{n-2}: im S_n = ker B_{n-2}
        if n >= 2 and n - 2 < max_degree:
            node("HC_%d (S,B)" % (n - 2), S[n], Bc[n - 2], HC[n - 2].dim)
        # at HH_{n+1}: im B_n = ker I_{n+1}
        if n < max_degree:
            node("HH_%d (B,I)" % (n + 1), Bc[n], I[n + 1], HH[n + 1].dim)
    composites = {}
    for n in range(2, max_degree + 1):
        if n - 2 < max_degree:
            composites["BS_%d" % n] = all(
                x == 0 for row in _mul(Bc[n - 2], S[n]) for x in row)
        composites["SI_%d" % n] = all(x == 0 for row in _mul(S[n], I[n]) for x in row)
    rep.composites = composites
    return rep


def _mul(A, B):
    if not A or not B:
        return []
    return [[sum((A[i][k] * B[k][j] for k in range(len(B))), mpq(0)) for j in range(len(B[0]))]
            for i in range(len(A))]


def periodic_approx(alg, parity, max_degree):
    """Truncation-stabilized estimate of HP_parity from the S-tower of HC_n."""
    N = max_degree + 2
    X = MixedComplex(alg, N)
    HC = {r.degree: r.node for r in cyclic_homology(alg, max_degree, "mixed", N=N)}
    tower = [n for n in range(max_degree + 1) if n % 2 == parity]
    steps = []
    for n in tower:
        if n - 2 < 0:
            continue
        M = induced_map(X.S(n), HC[n], HC[n - 2])
        r = _rank_dense(M)
        iso = HC[n].dim == HC[n - 2].dim == r
        steps.append({"from": n, "to": n - 2, "dims": (HC[n].dim, HC[n - 2].dim), "S_iso": iso})
    estimate = None
    for i in range(len(steps) - 1):
        if steps[i]["S_iso"] and steps[i + 1]["S_iso"]:
            estimate = steps[i + 1]["dims"][0]
    return {"parity": parity, "estimate": estimate, "stabilized": estimate is not None,
            "label": "truncation-stabilized estimate", "tower": steps,
            "dims": {n: HC[n].dim for n in tower}}


def _rank_dense(rows):
    from .linalg import dense_rank
    return dense_rank(rows) if rows else 0


def rank_check(M):
    """Rank agrees under reversed basis order."""
    return rank(M) == rank(M, reverse=True)
