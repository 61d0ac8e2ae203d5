"""The principal order of the chain pi^k o_E^m inside A = End_F(E^m).

V = E^m carries the F-basis zeta^a pi^j e_l, flattened as l*n + j*f + a. In that
basis the chain lattices are coordinate boxes, so every radical power P^k is the
box {X : v_p(X_rc) >= ceil((k + j_c - j_r)/e)}. Subsets of A are stored as
lattices in Q_p^(N*N) with index r*N + c.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import cached_property

from . import linalg
from .errors import (InsufficientPrecision, NotContained, NotNormalizing,
                     SingularAtPrecision)
from .linalg import Lattice, vp
from .padic import INF, Elem, Subfield, Tower


class MatElem:
    """p^(-s) * a for an N x N integer matrix a (entries reduced modulo p^wp)."""

    __slots__ = ("order", "a", "s")

    def __init__(self, order, a, s=0):
        self.order = order
        self.a = a
        self.s = s

    @property
    def _mod(self):
        return self.order.p ** self.order.wp

    def normalized(self):
        p = self.order.p
        v = linalg.min_val_matrix(self.a, p)
        if v is None:
            return MatElem(self.order, [[0] * len(r) for r in self.a], 0)
        if v == 0:
            return self
        pv = p**v
        return MatElem(self.order, [[x // pv for x in r] for r in self.a], self.s - v)

    def is_zero(self):
        return all(x % self._mod == 0 for r in self.a for x in r)

    def _aligned(self, other):
        S = max(self.s, other.s)
        p = self.order.p
        f1, f2 = p ** (S - self.s), p ** (S - other.s)
        return S, f1, f2

    def __add__(self, other):
        S, f1, f2 = self._aligned(other)
        M = self._mod
        a = [[(x * f1 + y * f2) % M for x, y in zip(r1, r2)] for r1, r2 in zip(self.a, other.a)]
        return MatElem(self.order, a, S).normalized()

    def __neg__(self):
        M = self._mod
        return MatElem(self.order, [[(-x) % M for x in r] for r in self.a], self.s)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, MatElem):
            return MatElem(self.order, linalg.matmul(self.a, other.a, self._mod),
                           self.s + other.s).normalized()
        r = Fraction(other)
        p = self.order.p
        num, den = r.numerator, r.denominator
        vn = vp(num, p) or 0
        vd = vp(den, p) or 0
        num //= p**vn
        den //= p**vd
        M = self._mod
        u = num * pow(den, -1, M) % M
        return MatElem(self.order, [[x * u % M for x in row] for row in self.a],
                       self.s - vn + vd).normalized()

    __rmul__ = __mul__

    def vec(self):
        return [x for r in self.a for x in r]

    def trace(self) -> Fraction:
        t = sum(self.a[i][i] for i in range(len(self.a))) % self._mod
        return Fraction(t, self.order.p**self.s) if self.s >= 0 else Fraction(t * self.order.p ** (-self.s))

    def nu(self):
        return self.order.nu(self)

    def inverse(self):
        p, wp = self.order.p, self.order.wp
        X, s = linalg.inverse(self.a, p, wp)
        return MatElem(self.order, X, s - self.s).normalized()

    def __repr__(self):
        return f"MatElem(shift={self.s}, a={self.a})"


class StandardOrder:
    """Hereditary order of the chain L_k = pi_E^k o_E^m, with period e(E|F)."""

    def __init__(self, E: Tower, m: int = 1, wp: int | None = None):
        self.E = E
        self.m = m
        self.p = E.p
        self.e = E.e
        self.n = E.n
        self.N = m * E.n
        self.D = self.N * self.N
        self.wp = E.P if wp is None else wp
        self.jidx = [(c % E.n) // E.f for c in range(self.N)]
        self._pk = {}
        self._alg = {}

    def __repr__(self):
        return f"StandardOrder({self.E!r}, m={self.m})"

    @property
    def e_chain(self):
        return self.e

    # ---------------------------------------------------------- matrices
    def zero(self):
        return MatElem(self, linalg.zeros(self.N, self.N), 0)

    def one(self):
        return MatElem(self, linalg.identity(self.N), 0)

    def from_vec(self, v, s=0):
        N = self.N
        return MatElem(self, [list(v[r * N:(r + 1) * N]) for r in range(N)], s).normalized()

    def mat(self, x: Elem) -> MatElem:
        """Left multiplication by x on E^m."""
        E = self.E
        if x.F != E:
            raise ValueError("element of a different tower")
        M = self.p**self.wp
        n = E.n
        block = [[0] * n for _ in range(n)]
        coords = [c % M for c in x.c]
        for col in range(n):
            w = [0] * n
            w[col] = 1
            img = E.raw_mul(coords, w, M)
            for r in range(n):
                block[r][col] = img[r]
        a = linalg.zeros(self.N, self.N)
        for l in range(self.m):
            for r in range(n):
                for c in range(n):
                    a[l * n + r][l * n + c] = block[r][c]
        return MatElem(self, a, x.s).normalized()

    # ---------------------------------------------------------- valuations
    def bound(self, k, r, c):
        return -((-(k + self.jidx[c] - self.jidx[r])) // self.e)

    def bounds(self, k):
        N = self.N
        return [self.bound(k, r, c) for r in range(N) for c in range(N)]

    def nu(self, X: MatElem):
        """nu_A(X): the largest k with X in P^k (INF for zero)."""
        best = INF
        p = self.p
        for r, row in enumerate(X.a):
            for c, x in enumerate(row):
                v = vp(x % p**self.wp, p)
                if v is not None:
                    val = self.e * (v - X.s) + self.jidx[r] - self.jidx[c]
                    best = min(best, val)
        return best

    def radical_power(self, k) -> Lattice:
        """P^k as a lattice in Q_p^(N*N)."""
        L = self._pk.get(k)
        if L is None:
            L = linalg.diagonal_lattice(self.p, self.bounds(k), self.wp)
            self._pk[k] = L
        return L

    def contains(self, X: MatElem, k: int = 0) -> bool:
        return self.nu(X) >= k

    @property
    def noise_floor(self):
        """Chain level below which matrix entries are no longer trusted."""
        return self.e * (self.wp // 2)

    def negligible(self, X: MatElem) -> bool:
        return self.nu(X) >= self.noise_floor

    def in_normalizer(self, g: MatElem) -> bool:
        """g permutes the chain: nu(g) + nu(g^-1) = 0."""
        try:
            ginv = g.inverse()
        except (SingularAtPrecision, InsufficientPrecision) as exc:
            raise SingularAtPrecision("element is not invertible at this precision") from exc
        return self.nu(g) + self.nu(ginv) == 0

    def chain_shift(self, g: MatElem) -> int:
        """h with g L_i = L_(i+h); requires g in the normalizer."""
        if not self.in_normalizer(g):
            raise NotNormalizing("element does not normalize the order")
        return self.nu(g)

    # ---------------------------------------------------------- linear maps on A
    def ad_matrix(self, X: MatElem):
        """(integer D x D matrix, shift) of Y -> XY - YX on flattened Y."""
        N, M = self.N, self.p**self.wp
        a = X.a
        out = [[0] * self.D for _ in range(self.D)]
        for r in range(N):
            for c in range(N):
                row = out[r * N + c]
                # (XY)_rc = sum_k X_rk Y_kc
                for k in range(N):
                    if a[r][k]:
                        row[k * N + c] = (row[k * N + c] + a[r][k]) % M
                    if a[k][c]:
                        row[r * N + k] = (row[r * N + k] - a[k][c]) % M
        return out, X.s

    def left_right(self, X: MatElem):
        """Pair of D x D matrices for Y -> XY and Y -> YX (shift X.s)."""
        N = self.N
        L = [[0] * self.D for _ in range(self.D)]
        R = [[0] * self.D for _ in range(self.D)]
        for r in range(N):
            for c in range(N):
                for k in range(N):
                    if X.a[r][k]:
                        L[r * N + c][k * N + c] = X.a[r][k]
                    if X.a[k][c]:
                        R[r * N + c][r * N + k] = X.a[k][c]
        return L, R, X.s

    def trace_pairing(self, X: MatElem, Y: MatElem) -> Fraction:
        N = self.N
        t = sum(X.a[r][c] * Y.a[c][r] for r in range(N) for c in range(N))
        return Fraction(t, 1) / Fraction(self.p) ** (X.s + Y.s)

    # ---------------------------------------------------------- centralizers
    def algebra(self, L: Subfield | None = None) -> "CentralizerAlgebra":
        """B_L = End_L(V) with its order B_L cap A; L = Q_p gives A itself."""
        L = L or self.E.prime
        key = L.key
        alg = self._alg.get(key)
        if alg is None:
            alg = CentralizerAlgebra(self, L)
            self._alg[key] = alg
        return alg

    def lattice_of(self, mats, shift=None) -> Lattice:
        """o_F-span of the given matrices."""
        mats = [X for X in mats if not X.is_zero()]
        if not mats:
            return Lattice(self.p, self.D, (), 0, self.wp)
        S = max(X.s for X in mats) if shift is None else shift
        cols = [[x * self.p ** (S - X.s) for x in X.vec()] for X in mats]
        return Lattice.from_generators(self.p, self.D, cols, S, self.wp)

    def basis_mats(self, lat: Lattice):
        return [self.from_vec(c, lat.shift) for c in lat.cols]

    def contains_mat(self, lat: Lattice, X: MatElem) -> bool:
        return lat.contains_vectors([X.vec()], X.s)[0]


class CentralizerAlgebra:
    """B_L = End_L(V), the order B_L cap A, its radical powers, and the corestriction."""

    def __init__(self, order: StandardOrder, L: Subfield):
        self.order = order
        self.L = L
        self._pk = {}

    def __repr__(self):
        return f"CentralizerAlgebra({self.L!r})"

    @property
    def is_whole(self):
        return self.L.degree == 1

    @cached_property
    def generators(self):
        o = self.order
        return [o.mat(self.L.eta), o.mat(self.L.varpi)]

    @cached_property
    def integral_basis(self) -> Lattice:
        """B_L cap M_N(Z_p), saturated."""
        o = self.order
        if self.is_whole:
            return linalg.diagonal_lattice(o.p, [0] * o.D, o.wp)
        rows = []
        for g in self.generators:
            ad, _ = o.ad_matrix(g)
            rows.extend(ad)
        dim = o.D // self.L.degree
        cols = linalg.saturated_kernel(rows, o.p, o.wp, expected_dim=dim)
        return Lattice.from_generators(o.p, o.D, linalg.columns(cols), 0, o.wp)

    @property
    def dim(self):
        return self.order.D // self.L.degree

    def radical_power(self, k) -> Lattice:
        """P^k cap B_L."""
        lat = self._pk.get(k)
        if lat is None:
            o = self.order
            if self.is_whole:
                lat = o.radical_power(k)
            else:
                w = o.bounds(k)
                s0 = max(0, -min(w))
                base = Lattice(o.p, o.D, self.integral_basis.cols, s0, o.wp)
                lat = base.intersect_coordinate_bounds(w)
            self._pk[k] = lat
        return lat

    @property
    def order_lattice(self) -> Lattice:
        return self.radical_power(0)

    def contains(self, X: MatElem) -> bool:
        """X in B_L: X commutes with the generators of L."""
        return all(self.order.negligible(g * X - X * g) for g in self.generators)

    # ---------------------------------------------------------- E_L-linear structure
    @cached_property
    def e_basis(self):
        """(l, (a, j)): the L-basis zeta^a pi^j e_l of V."""
        return [(l, aj) for l in range(self.order.m) for aj in self.L.relative_basis()]

    def _apply(self, X: MatElem, l, a, j):
        o = self.order
        E = o.E
        w = E.monomial(a, j)
        vec = [0] * o.N
        vec[l * o.n:(l + 1) * o.n] = list(w.c)
        img = linalg.matvec(X.a, vec, o.p**o.wp)
        return [E.elem(img[k * o.n:(k + 1) * o.n], X.s + w.s) for k in range(o.m)]

    def e_matrix(self, X: MatElem):
        """Matrix of X over L in the basis e_basis (entries are elements of L)."""
        basis = self.e_basis
        cols = []
        for (l, (a, j)) in basis:
            blocks = self._apply(X, l, a, j)
            dec = [self.L.decompose(b) for b in blocks]
            cols.append([dec[l2][aj2] for (l2, aj2) in basis])
        k = len(basis)
        return [[cols[c][r] for c in range(k)] for r in range(k)]

    def det(self, X: MatElem) -> Elem:
        """det over L of X in B_L."""
        M = self.e_matrix(X)
        k = len(M)
        E = self.order.E
        result = E.one()
        M = [row[:] for row in M]
        for col in range(k):
            piv = None
            best = INF
            for r in range(col, k):
                v = M[r][col].val()
                if v < best:
                    best, piv = v, r
            if piv is None:
                raise SingularAtPrecision("matrix singular over the centralizer field")
            if piv != col:
                M[col], M[piv] = M[piv], M[col]
                result = -result
            pv = M[col][col]
            result = result * pv
            inv = pv.inverse()
            for r in range(col + 1, k):
                if M[r][col].is_zero():
                    continue
                fct = M[r][col] * inv
                for c2 in range(col + 1, k):
                    M[r][c2] = M[r][c2] - fct * M[col][c2]
        return result

    def realize(self, u: Elem) -> MatElem:
        """The element of B_L acting as u on L e_0 and trivially on the other L-basis vectors."""
        o = self.order
        E = o.E
        cols = []
        for idx in range(o.N):
            l, rem = divmod(idx, o.n)
            j, a = divmod(rem, E.f)
            w = E.monomial(a, j)
            if l == 0:
                lam = self.L.decompose(w)[(0, 0)]
                w = w + (u - 1) * lam
            cols.append(w)
        S = max(w.s for w in cols if not w.is_zero())
        a_mat = linalg.zeros(o.N, o.N)
        for idx, w in enumerate(cols):
            l = idx // o.n
            f = o.p ** (S - w.s)
            for r in range(o.n):
                a_mat[l * o.n + r][idx] = w.c[r] * f
        return MatElem(o, a_mat, S).normalized()

    # ---------------------------------------------------------- corestriction
    @cached_property
    def _projection(self):
        """(P, s): the trace-orthogonal projection A -> B_L is p^(-s) * P on vectors."""
        o = self.order
        p, N, D = o.p, o.N, o.D
        if self.is_whole:
            return linalg.identity(D), 0
        B = [list(c) for c in self.integral_basis.cols]
        k = len(B)
        # tr(X Y) = sum_rc X_rc Y_cr
        tperm = [c * N + r for r in range(N) for c in range(N)]
        G = [[sum(B[i][idx] * B[j][tperm[idx]] for idx in range(D)) for j in range(k)] for i in range(k)]
        Ginv, s = linalg.inverse(G, p, o.wp + 2 * o.wp)
        M = p ** (3 * o.wp)
        # P x = B Ginv (tr(b_j x))_j
        BT = [[B[j][tperm[idx]] for idx in range(D)] for j in range(k)]
        inner = linalg.matmul(Ginv, BT, M)
        Bm = linalg.from_columns(B, D)
        P = linalg.matmul(Bm, inner, M)
        return P, s

    def corestriction(self, X: MatElem) -> MatElem:
        """Tame corestriction s_L(X): the B_L-component of X under A = B_L + B_L^perp."""
        P, s = self._projection
        o = self.order
        M = o.p ** (3 * o.wp)
        v = linalg.matvec(P, X.vec(), M)
        res = MatElem(o, [v[r * o.N:(r + 1) * o.N] for r in range(o.N)], X.s + s)
        return MatElem(o, [[x % o.p**o.wp for x in row] for row in res.normalized().a],
                       res.normalized().s)

    def projection_matrix(self):
        return self._projection


def standard_order(E: Tower, m: int = 1) -> StandardOrder:
    return StandardOrder(E, m)


def nu_A(X: MatElem, order: StandardOrder):
    return order.nu(X)


def in_normalizer(g: MatElem, order: StandardOrder) -> bool:
    return order.in_normalizer(g)


def centralizer_order(order: StandardOrder, L: Subfield) -> CentralizerAlgebra:
    """Centralizer algebra of L, after checking that L^x normalizes the order."""
    for g in (order.mat(L.eta), order.mat(L.varpi)):
        if not order.in_normalizer(g):
            raise NotNormalizing("field does not normalize the order")
    return order.algebra(L)


def quotient_size(big: Lattice, small: Lattice) -> int:
    """|big / small| as an exact integer."""
    if not big.contains(small):
        raise NotContained("second lattice is not contained in the first")
    return big.p ** small.index_in(big)


def tame_corestriction(X: MatElem, alg: CentralizerAlgebra) -> MatElem:
    return alg.corestriction(X)


def lattice_product_closed(order: StandardOrder, lat: Lattice) -> bool:
    """1 + lat is closed under products: x + y + xy in lat for basis pairs."""
    mats = order.basis_mats(lat)
    for x in mats:
        for y in mats:
            if not order.contains_mat(lat, x * y):
                return False
    return True


def gcd_list(xs):
    g = 0
    for x in xs:
        g = math.gcd(g, x)
    return g
