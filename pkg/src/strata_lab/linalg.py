"""Linear algebra over Z_p truncated to Z/p^c, built on a Smith-form kernel.

Lattices live in Q_p^d and are stored as integer basis columns together with a
power-of-p denominator. All computations are exact modulo a declared working
exponent; callers pick the exponent large enough for the valuations involved.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

from . import _snf_py
from .errors import InsufficientPrecision, NotContained, SingularAtPrecision

try:  # compiled kernel, unless explicitly disabled
    if os.environ.get("STRATA_LAB_PURE") == "1":
        raise ImportError
    from . import _snf as _snf_c
except ImportError:  # pragma: no cover - exercised via STRATA_LAB_PURE
    _snf_c = None

BACKEND = "cython" if _snf_c is not None else "python"
_C_LIMIT = 2**62


def vp(x: int, p: int) -> int | None:
    """p-adic valuation of an integer, ``None`` for zero."""
    if x == 0:
        return None
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


@dataclass(frozen=True)
class SmithResult:
    vals: list
    L: list | None
    Linv: list | None
    R: list | None
    c: int

    def rank(self, tol: int | None = None) -> int:
        bound = self.c if tol is None else tol
        return sum(1 for v in self.vals if v < bound)


def smith(a, p, c, left=False, left_inv=False, right=True, backend=None) -> SmithResult:
    """Smith form of ``a`` over Z/p^c, dispatching to the compiled kernel when possible."""
    use = backend or BACKEND
    if not a or not a[0]:
        m = len(a)
        n = len(a[0]) if a else 0
        ident = lambda k: [[int(i == j) for j in range(k)] for i in range(k)]
        return SmithResult([], ident(m) if left else None, ident(m) if left_inv else None,
                           ident(n) if right else None, c)
    if use == "cython" and _snf_c is not None and p**c < _C_LIMIT:
        vals, L, Li, R = _snf_c.smith_mod(a, p, c, left, left_inv, right)
    else:
        vals, L, Li, R = _snf_py.smith_mod(a, p, c, left, left_inv, right)
    return SmithResult(vals, L, Li, R, c)


# ---------------------------------------------------------------- matrix helpers

def zeros(m, n):
    return [[0] * n for _ in range(m)]


def identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(a):
    return [list(r) for r in zip(*a)] if a else []


def matmul(a, b, mod=None):
    bt = transpose(b)
    if mod is None:
        return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]
    return [[sum(x * y for x, y in zip(row, col)) % mod for col in bt] for row in a]


def matvec(a, v, mod=None):
    if mod is None:
        return [sum(x * y for x, y in zip(row, v)) for row in a]
    return [sum(x * y for x, y in zip(row, v)) % mod for row in a]


def columns(a):
    return transpose(a)


def from_columns(cols, d):
    if not cols:
        return [[] for _ in range(d)]
    return [list(r) for r in zip(*cols)]


def min_val_matrix(a, p):
    best = None
    for row in a:
        for x in row:
            v = vp(x, p)
            if v is not None and (best is None or v < best):
                best = v
    return best


def rank_mod_p(a, p) -> int:
    if not a or not a[0]:
        return 0
    return smith(a, p, 1, right=False).rank()


# ---------------------------------------------------------------- kernels

def modular_kernel(a, p, g):
    """Columns generating {y in Z_p^n : a y = 0 mod p^g} (a lattice containing p^g Z_p^n)."""
    n = len(a[0])
    if g <= 0:
        return identity(n)
    res = smith(a, p, g)
    R = res.R
    cols = []
    for i in range(n):
        v = res.vals[i] if i < len(res.vals) else g
        e = max(0, g - v)
        pe = p**e
        cols.append([R[k][i] * pe for k in range(n)])
    return from_columns(cols, n)


def saturated_kernel(a, p, c, expected_dim=None):
    """Basis columns of ker_Q_p(a) intersected with Z_p^n, correct modulo p^(c - guard)."""
    n = len(a[0])
    res = smith(a, p, c)
    guard = c // 2
    cols = []
    for i in range(n):
        v = res.vals[i] if i < len(res.vals) else c
        if v >= c:
            cols.append([res.R[k][i] for k in range(n)])
        elif v > guard:
            raise InsufficientPrecision(
                f"pivot valuation {v} too close to working exponent {c}")
    if expected_dim is not None and len(cols) != expected_dim:
        raise InsufficientPrecision(
            f"kernel dimension {len(cols)} differs from expected {expected_dim}")
    return from_columns(cols, n)


def inverse(a, p, c):
    """Return (X, s) with a^{-1} = p^{-s} X, X exact modulo p^(c - 2s)."""
    n = len(a)
    res = smith(a, p, c, left=True)
    if res.rank() < n:
        raise SingularAtPrecision("matrix is singular modulo p^%d" % c)
    s = max(res.vals) if res.vals else 0
    if 2 * s >= c:
        raise InsufficientPrecision("inverse loses all precision")
    M = p**c
    # a^{-1} = R D^{-1} L ; p^s D^{-1} = diag(p^{s - v_i})
    DL = [[res.L[i][j] * p ** (s - res.vals[i]) for j in range(n)] for i in range(n)]
    X = matmul(res.R, DL, M)
    return X, s


def solve(a, b, p, c):
    """Solve a x = b (a square, invertible over Q_p). Returns (x, s) with x_true = p^{-s} x."""
    X, s = inverse(a, p, c)
    return matvec(X, b, p**c), s


# ---------------------------------------------------------------- lattices

@dataclass(frozen=True)
class Lattice:
    """p^(-shift) * span_Z_p(cols) inside Q_p^dim, with cols independent."""

    p: int
    dim: int
    cols: tuple
    shift: int
    wp: int

    @property
    def rank(self) -> int:
        return len(self.cols)

    @staticmethod
    def from_generators(p, dim, gens, shift, wp):
        """Reduce a list of generating columns to a basis (mod p^wp)."""
        gens = [list(g) for g in gens if any(g)]
        if not gens:
            return Lattice(p, dim, (), shift, wp)
        a = from_columns(gens, dim)
        res = smith(a, p, wp, left_inv=True, right=False)
        M = p**wp
        cols = []
        for i, v in enumerate(res.vals):
            if v < wp:
                pv = p**v
                cols.append(tuple(res.Linv[k][i] * pv % M for k in range(dim)))
        return Lattice(p, dim, tuple(cols), shift, wp)._normalized()

    def _normalized(self):
        if not self.cols:
            return self
        v = min_val_matrix(self.cols, self.p)
        if v:
            pv = self.p**v
            cols = tuple(tuple(x // pv for x in c) for c in self.cols)
            return Lattice(self.p, self.dim, cols, self.shift - v, self.wp)
        return self

    def with_shift(self, shift):
        """Same lattice, columns rescaled to the larger denominator ``shift``."""
        if shift < self.shift:
            raise ValueError("cannot lower the denominator without division")
        f = self.p ** (shift - self.shift)
        return [[x * f for x in c] for c in self.cols]

    def scaled(self, k):
        """p^k * self."""
        return Lattice(self.p, self.dim, self.cols, self.shift - k, self.wp)

    def __add__(self, other):
        s = max(self.shift, other.shift)
        return Lattice.from_generators(self.p, self.dim, self.with_shift(s) + other.with_shift(s), s,
                                       max(self.wp, other.wp))

    def _left(self):
        a = from_columns(list(self.cols), self.dim)
        return smith(a, self.p, self.wp, left=True, right=False)

    def contains_vectors(self, vecs, vshift):
        """Test p^(-vshift) * v in self for each integer vector v."""
        if not vecs:
            return []
        p = self.p
        s = max(self.shift, vshift)
        fv = p ** (s - vshift)
        if not self.cols:
            return [not any(v) for v in vecs]
        res = self._left()
        k = res.rank()
        tol = self.wp - self.wp // 3
        M = p**self.wp
        out = []
        for v in vecs:
            z = matvec(res.L, [x * fv for x in v], M)
            ok = True
            for i in range(self.dim):
                zi = z[i]
                if i < k:
                    # pivot i of the rescaled basis is p^(v_i + s - shift)
                    w = vp(zi, p)
                    if w is not None and w < res.vals[i] + (s - self.shift):
                        ok = False
                        break
                else:
                    w = vp(zi, p)
                    if w is not None and w < tol:
                        ok = False
                        break
            out.append(ok)
        return out

    def contains(self, other) -> bool:
        if not other.cols:
            return True
        return all(self.contains_vectors([list(c) for c in other.cols], other.shift))

    def equals(self, other) -> bool:
        return self.contains(other) and other.contains(self)

    def volume(self) -> int:
        """Sum of elementary-divisor exponents, relative to the saturated span."""
        if not self.cols:
            return 0
        res = smith(from_columns(list(self.cols), self.dim), self.p, self.wp, right=False)
        vals = [v for v in res.vals if v < self.wp]
        if len(vals) != self.rank:
            raise InsufficientPrecision("basis degenerate at working exponent")
        return sum(vals) - self.rank * self.shift

    def index_in(self, big) -> int:
        """log_p |big / self| for self inside big, both spanning the same space."""
        if self.rank != big.rank:
            raise NotContained("lattices of different rank have infinite index")
        if not big.contains(self):
            raise NotContained("sublattice is not contained")
        return self.volume() - big.volume()

    def intersect_coordinate_bounds(self, w):
        """self intersected with {x : v_p(x_i) >= w_i}; ``None`` entries impose nothing."""
        if not self.cols:
            return self
        p = self.p
        conds = [(i, w[i] + self.shift) for i in range(self.dim) if w[i] is not None]
        conds = [(i, t) for i, t in conds if t > 0]
        if not conds:
            return self
        G = max(t for _, t in conds)
        B = from_columns(list(self.cols), self.dim)
        rows = [[x * p ** (G - t) for x in B[i]] for i, t in conds]
        Y = modular_kernel(rows, p, G)
        gens = columns(matmul(B, Y))
        return Lattice.from_generators(p, self.dim, gens, self.shift, self.wp)

    def image(self, mat, mshift=0):
        """Image under the linear map p^(-mshift) * mat."""
        gens = columns(matmul(mat, from_columns(list(self.cols), self.dim))) if self.cols else []
        return Lattice.from_generators(self.p, len(mat), gens, self.shift + mshift, self.wp)

    def reduce_mod_p_rank(self, coords):
        """F_p-rank of the projection of self (assumed integral) onto ``coords`` mod p."""
        if not self.cols:
            return 0
        if self.shift > 0:
            raise ValueError("lattice not integral")
        f = self.p ** (-self.shift)
        rows = [[c[i] * f % self.p for c in self.cols] for i in coords]
        return rank_mod_p(rows, self.p)

    def fingerprint(self):
        """Elementary-divisor multiset (exponents), used in reports."""
        if not self.cols:
            return []
        res = smith(from_columns(list(self.cols), self.dim), self.p, self.wp, right=False)
        return sorted(v - self.shift for v in res.vals if v < self.wp)


def diagonal_lattice(p, w, wp):
    """{x : v_p(x_i) >= w_i} as a Lattice."""
    d = len(w)
    s = max(0, -min(w)) if w else 0
    cols = []
    for i in range(d):
        col = [0] * d
        col[i] = p ** (w[i] + s)
        cols.append(col)
    return Lattice.from_generators(p, d, cols, s, wp)
