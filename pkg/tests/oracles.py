"""Small brute-force references built directly on sympy, independent of nch.linalg."""

from itertools import product

import sympy


def _table(A):
    return [[{k: sympy.Rational(int(c.numerator), int(c.denominator)) for k, c in A.table[i][j].items()}
             for j in range(A.dim)] for i in range(A.dim)]


def _b_matrix(A, n, wrap=True):
    """Hochschild b (or b' without the wrap term) from A^{n+1} to A^n, dense sympy."""
    T = _table(A)
    d = A.dim
    src = list(product(range(d), repeat=n + 1))
    tgt = {t: i for i, t in enumerate(product(range(d), repeat=n))}
    M = sympy.zeros(len(tgt), len(src))
    for j, t in enumerate(src):
        for i in range(n):
            for k, c in T[t[i]][t[i + 1]].items():
                u = t[:i] + (k,) + t[i + 2:]
                M[tgt[u], j] += (-1) ** i * c
        if wrap:
            for k, c in T[t[n]][t[0]].items():
                u = (k,) + t[1:n]
                M[tgt[u], j] += (-1) ** n * c
    return M


def _one_minus_lambda(A, n):
    d = A.dim
    src = list(product(range(d), repeat=n + 1))
    idx = {t: i for i, t in enumerate(src)}
    M = sympy.eye(len(src))
    for j, t in enumerate(src):
        M[idx[(t[-1],) + t[:-1]], j] -= (-1) ** n
    return M


def hochschild_dims(A, top):
    """dim HH_n for n <= top from the unnormalized bar complex."""
    out = []
    for n in range(top + 1):
        dim = A.dim ** (n + 1)
        r_out = _b_matrix(A, n).rank() if n > 0 else 0
        r_in = _b_matrix(A, n + 1).rank()
        out.append(dim - r_out - r_in)
    return out


def connes_dims(A, top):
    """dim HC_n for n <= top from C^lambda = A^{n+1} / im(1 - lambda)."""
    K = {n: _one_minus_lambda(A, n) for n in range(top + 2)}
    rk = {n: K[n].rank() for n in K}

    def induced_rank(n):
        if n == 0:
            return 0
        return _b_matrix(A, n).row_join(K[n - 1]).rank() - rk[n - 1]
    return [A.dim ** (n + 1) - rk[n] - induced_rank(n) - induced_rank(n + 1) for n in range(top + 1)]
