"""Exact finite-precision arithmetic in tame extensions of Q_p.

A tower is the two-step extension E = K[pi], K = Q_p(zeta) unramified of degree f
with zeta a primitive (q-1)-th root of unity, and pi^e = p * zeta^(-t).
Elements are p^(-shift) * sum c[j*f + a] zeta^a pi^j with integer coordinates
known modulo p^prec (prec <= the tower's working precision P).
"""

from __future__ import annotations

import math
import random
from fractions import Fraction
from functools import cached_property, lru_cache

from . import linalg
from .errors import (BadTwist, InsufficientPrecision, NonTameStep, NotSubfield,
                     ZeroElement, ZeroResidue)
from .residue import residue_field

INF = math.inf


def _floorlog(k, p):
    r = 0
    while k >= p:
        k //= p
        r += 1
    return r


def _vp(x, p):
    if x == 0:
        return None
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


class Tower:
    """Totally tame extension of degree e over the unramified extension of degree f of Q_p."""

    def __init__(self, p: int, f: int = 1, e: int = 1, t: int = 0, prec: int = 16):
        if e < 1 or f < 1:
            raise ValueError("e and f must be positive")
        if math.gcd(e, p) != 1:
            raise NonTameStep(f"ramification index {e} is divisible by p={p}")
        self.p = p
        self.f = f
        self.e = e
        self.q = p**f
        self.t = t % (self.q - 1)
        self.P = prec
        self.M = p**prec
        self.n = e * f
        self.kf = residue_field(p, f)
        self._build_unramified()
        self._zeta_cache = {0: self._kone()}
        self.pz = [p * x % self.M for x in self.zeta_vec(-self.t)]

    # ------------------------------------------------------------ construction
    @property
    def key(self):
        return (self.p, self.f, self.e, self.t, self.P)

    def __repr__(self):
        return f"Tower(p={self.p}, f={self.f}, e={self.e}, t={self.t}, P={self.P})"

    def __eq__(self, other):
        return isinstance(other, Tower) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def with_precision(self, prec):
        return get_tower(self.p, self.f, self.e, self.t, prec)

    def _build_unramified(self):
        p, f, M, P = self.p, self.f, self.M, self.P
        h0 = list(self.kf.h)  # monic residue modulus, lifted naively
        if f == 1:
            y = (-h0[0]) % M
            for _ in range(P + 1):
                y = pow(y, self.q, M)
            self.hT = [(-y) % M, 1]
        else:
            red0 = _reduction_table(h0, f, M)
            y = [0, 1] + [0] * (f - 2)
            for _ in range(P + 1):
                y = _kpow(y, self.q, red0, f, M)
            conj = [y]
            for _ in range(f - 1):
                conj.append(_kpow(conj[-1], p, red0, f, M))
            # prod (X - conj_k), coefficients computed in Z/p^P[x]/(h0)
            poly = [[1] + [0] * (f - 1)]
            for c in conj:
                newp = [[0] * f for _ in range(len(poly) + 1)]
                for i, coef in enumerate(poly):
                    newp[i + 1] = [(a + b) % M for a, b in zip(newp[i + 1], coef)]
                    prod = _kmul(coef, c, red0, f, M)
                    newp[i] = [(a - b) % M for a, b in zip(newp[i], prod)]
                poly = newp
            hT = []
            for coef in poly:
                if any(coef[1:]):
                    raise InsufficientPrecision("Teichmuller modulus is not rational")
                hT.append(coef[0])
            self.hT = hT
        self.red = _reduction_table(self.hT, f, M)

    # ------------------------------------------------------------ unramified layer
    def _kone(self):
        return [1] + [0] * (self.f - 1)

    def kmul(self, u, v, mod=None):
        return _kmul(u, v, self.red, self.f, mod or self.M)

    def zeta_vec(self, k):
        """zeta^k as a coordinate vector of K (exact modulo p^P)."""
        k %= self.q - 1
        c = self._zeta_cache.get(k)
        if c is None:
            base = [0] * self.f
            if self.f == 1:
                base = [(-self.hT[0]) % self.M]
            else:
                base[1] = 1
            c = _kpow(base, k, self.red, self.f, self.M)
            self._zeta_cache[k] = c
        return c

    # ------------------------------------------------------------ ring products
    def raw_mul(self, A, B, mod):
        f, e = self.f, self.e
        out = [[0] * f for _ in range(2 * e - 1)]
        blocksA = [A[j * f:(j + 1) * f] for j in range(e)]
        blocksB = [B[j * f:(j + 1) * f] for j in range(e)]
        for j1, a in enumerate(blocksA):
            if not any(a):
                continue
            for j2, b in enumerate(blocksB):
                if not any(b):
                    continue
                c = _kmul(a, b, self.red, f, mod)
                acc = out[j1 + j2]
                for i in range(f):
                    acc[i] += c[i]
        for j in range(e, 2 * e - 1):
            hi = out[j]
            if any(hi):
                c = _kmul([x % mod for x in hi], self.pz, self.red, f, mod)
                acc = out[j - e]
                for i in range(f):
                    acc[i] += c[i]
        res = []
        for j in range(e):
            res.extend(x % mod for x in out[j])
        return res

    # ------------------------------------------------------------ element constructors
    def elem(self, coords, shift=0, prec=None):
        prec = self.P if prec is None else prec
        return Elem._make(self, coords, shift, prec)

    def zero(self, abs_prec=None):
        a = self.P if abs_prec is None else abs_prec
        return Elem(self, (0,) * self.n, -a, 0) if a <= 0 else Elem(self, (0,) * self.n, 0, a)

    def one(self):
        return self.from_int(1)

    def from_int(self, k):
        return self.from_rational(Fraction(k))

    def from_rational(self, r):
        r = Fraction(r)
        if r == 0:
            return self.zero()
        num, den = r.numerator, r.denominator
        v = (_vp(num, self.p) or 0) - (_vp(den, self.p) or 0)
        num //= self.p ** (_vp(num, self.p) or 0)
        den //= self.p ** (_vp(den, self.p) or 0)
        u = num * pow(den, -1, self.M) % self.M
        coords = [0] * self.n
        coords[0] = u
        return Elem._make(self, coords, -v, self.P)

    def monomial(self, k, j):
        """zeta^k * pi^j (exact)."""
        w, j0 = divmod(j, self.e)
        z = self.zeta_vec(k - self.t * w)
        coords = [0] * self.n
        coords[j0 * self.f:(j0 + 1) * self.f] = z
        return Elem._make(self, coords, -w, self.P)

    @property
    def pi(self):
        return self.monomial(0, 1)

    @property
    def zeta(self):
        return self.monomial(1, 0)

    def teichmuller(self, r):
        """Teichmuller lift of a residue element given as a coordinate tuple."""
        r = tuple(x % self.p for x in r)
        if not any(r):
            raise ZeroResidue("zero residue has no Teichmuller lift")
        return self.monomial(self.kf.log(r), 0)

    def random_elem(self, rng: random.Random, vmin=0, vmax=None):
        vmax = vmin + 2 * self.e if vmax is None else vmax
        x = self.zero()
        for j in range(vmin, vmax):
            k = rng.randrange(self.q)
            if k < self.q - 1:
                x = x + self.monomial(k, j)
        return x

    # ------------------------------------------------------------ invariants
    @cached_property
    def basis_traces(self):
        """Q_p-traces of the basis monomials, read off the regular representation."""
        out = []
        for i in range(self.n):
            w = [0] * self.n
            w[i] = 1
            col = [self.raw_mul(w, [int(k == j) for k in range(self.n)], self.M) for j in range(self.n)]
            out.append(sum(col[j][j] for j in range(self.n)) % self.M)
        return out

    @cached_property
    def base(self):
        return get_tower(self.p, 1, 1, 0, self.P)

    def subfields(self):
        return all_subfields(self)

    @cached_property
    def whole(self):
        return Subfield(self, self.f, self.e, 0)

    @cached_property
    def prime(self):
        return Subfield(self, 1, 1, self.t)


@lru_cache(maxsize=None)
def get_tower(p, f, e, t, prec):
    return Tower(p, f, e, t, prec)


def _reduction_table(h, f, M):
    """X^k mod h for 0 <= k <= 2f-2, h monic of degree f."""
    red = []
    for k in range(2 * f - 1):
        if k < f:
            v = [0] * f
            v[k] = 1
            red.append(v)
        else:
            prev = red[k - 1]
            shifted = [0] + prev[:-1]
            top = prev[-1]
            v = [(shifted[i] - top * h[i]) % M for i in range(f)]
            red.append(v)
    return red


def _kmul(u, v, red, f, M):
    if f == 1:
        return [u[0] * v[0] % M]
    prod = [0] * (2 * f - 1)
    for i, x in enumerate(u):
        if x:
            for j, y in enumerate(v):
                if y:
                    prod[i + j] += x * y
    out = prod[:f]
    for k in range(f, 2 * f - 1):
        c = prod[k]
        if c:
            r = red[k]
            for i in range(f):
                out[i] += c * r[i]
    return [x % M for x in out]


def _kpow(u, k, red, f, M):
    result = [1] + [0] * (f - 1)
    base = list(u)
    while k:
        if k & 1:
            result = _kmul(result, base, red, f, M)
        base = _kmul(base, base, red, f, M)
        k >>= 1
    return result


class Elem:
    """p^(-s) * sum c_i b_i, coordinates known modulo p^prec, normalised to be primitive."""

    __slots__ = ("F", "c", "s", "prec")

    def __init__(self, F, c, s, prec):
        self.F = F
        self.c = c
        self.s = s
        self.prec = prec

    @staticmethod
    def _make(F, coords, s, prec):
        p = F.p
        prec = min(prec, F.P)
        if prec <= 0:
            return Elem(F, (0,) * F.n, s - prec, 0)
        mod = p**prec
        coords = [x % mod for x in coords]
        if not any(coords):
            return Elem(F, tuple(coords), s, prec)
        v = min(_vp(x, p) for x in coords if x)
        if v:
            pv = p**v
            coords = [x // pv for x in coords]
            s -= v
            prec -= v
        return Elem(F, tuple(coords), s, prec)

    # ------------------------------------------------------------ predicates
    def is_zero(self):
        return not any(self.c)

    @property
    def abs_prec(self):
        """Value is known modulo p^abs_prec * o_E."""
        return self.prec - self.s

    def __repr__(self):
        if self.is_zero():
            return f"O(p^{self.abs_prec})"
        return f"Elem(c={list(self.c)}, shift={self.s}, prec={self.prec})"

    # ------------------------------------------------------------ arithmetic
    def _coerce(self, other):
        if isinstance(other, Elem):
            if other.F is not self.F and other.F != self.F:
                raise TypeError("elements of different towers")
            return other
        if isinstance(other, (int, Fraction)):
            return self.F.from_rational(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        F, p = self.F, self.F.p
        S = max(self.s, other.s)
        ap = min(self.abs_prec, other.abs_prec)
        f1, f2 = p ** (S - self.s), p ** (S - other.s)
        coords = [a * f1 + b * f2 for a, b in zip(self.c, other.c)]
        return Elem._make(F, coords, S, ap + S)

    __radd__ = __add__

    def __neg__(self):
        mod = self.F.p ** self.prec
        return Elem(self.F, tuple((-x) % mod for x in self.c), self.s, self.prec)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        F = self.F
        if self.is_zero() and other.is_zero():
            return Elem._make(F, [0] * F.n, self.s + other.s, self.prec + other.prec)
        if self.is_zero() or other.is_zero():
            z, w = (self, other) if self.is_zero() else (other, self)
            return Elem._make(F, [0] * F.n, z.s + w.s, z.prec)
        prec = min(self.prec, other.prec)
        coords = F.raw_mul(list(self.c), list(other.c), F.p**prec)
        return Elem._make(F, coords, self.s + other.s, prec)

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.F.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __truediv__(self, other):
        other = self._coerce(other)
        return self * other.inverse()

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return (self - other).is_zero()

    __hash__ = None

    # ------------------------------------------------------------ valuation data
    def val(self):
        """Normalised valuation nu_E (pi has valuation 1); INF when zero at precision."""
        if self.is_zero():
            return INF
        F, p = self.F, self.F.p
        best = INF
        for j in range(F.e):
            blk = self.c[j * F.f:(j + 1) * F.f]
            vs = [_vp(x, p) for x in blk if x]
            if vs:
                best = min(best, F.e * (min(vs) - self.s) + j)
        return best

    def ord_abs(self):
        v = self.val()
        if v == INF:
            raise ZeroElement("zero element has no valuation")
        return Fraction(v, self.F.e)

    def residue(self):
        """Image in the residue field of an element of valuation 0."""
        if self.val() != 0:
            raise ValueError("residue needs a unit")
        F = self.F
        return tuple(x % F.p for x in self.c[:F.f])

    def leading(self):
        """(k, v) with zeta^k pi^v the leading Teichmuller monomial."""
        v = self.val()
        if v == INF:
            raise ZeroElement("zero element has no leading digit")
        u = self * self.F.monomial(0, -v)
        return self.F.kf.log(u.residue()), v

    def digits(self, upto=None):
        """Teichmuller digits (k, v) with v < upto, in increasing valuation.

        With ``upto=None`` the expansion runs to the known precision.
        """
        F = self.F
        out = []
        x = self
        while not x.is_zero():
            k, v = x.leading()
            if upto is not None and v >= upto:
                return out
            out.append((k, v))
            x = x - F.monomial(k, v)
        if upto is not None and x.abs_prec * F.e < upto:
            raise InsufficientPrecision("digit expansion exceeds known precision")
        return out

    def inverse(self):
        F = self.F
        v = self.val()
        if v == INF:
            raise ZeroElement("cannot invert zero")
        shift = F.monomial(0, -v)
        y = self * shift
        k = F.kf.log(y.residue())
        z = F.monomial(-k, 0)
        two = F.from_int(2)
        for _ in range((F.e * F.P).bit_length() + 2):
            z = z * (two - y * z)
        z = Elem._make(F, list(z.c), z.s, min(z.prec, y.prec))
        return z * shift

    def trace(self):
        """Trace down to Q_p as an element of the base tower."""
        F = self.F
        B = F.base
        if self.is_zero():
            return B.zero(self.abs_prec)
        tr = sum(x * t for x, t in zip(self.c, F.basis_traces))
        return Elem._make(B, [tr] + [0] * (B.n - 1), self.s, self.prec)

    def log(self):
        """p-adic logarithm of a principal unit."""
        F = self.F
        x = self - 1
        a = x.val()
        if a == INF:
            return F.zero(self.abs_prec)
        if a < 1:
            raise ValueError("log needs a principal unit")
        target = self.abs_prec * F.e
        total = F.zero()
        power = F.one()
        k = 1
        while not (k >= 2 * F.e and k * a - F.e * _floorlog(k, F.p) >= target + F.e):
            power = power * x
            total = total + power * Fraction((-1) ** (k + 1), k)
            k += 1
        return total

    def lift_to(self, G):
        """Same element viewed in the same tower at a different working precision."""
        return Elem._make(G, list(self.c), self.s, min(self.prec, G.P))

    def to_rational_mod(self):
        """For a base-field element: (integer a, shift s) with value a / p^s."""
        return self.c[0], self.s


def psi(x: Elem) -> Fraction:
    """Standard additive character of Q_p: the p-adic fractional part, valued in Q/Z."""
    if x.F.n != 1:
        raise ValueError("psi is defined on the base field")
    if x.is_zero():
        if x.abs_prec < 0:
            raise InsufficientPrecision("value not known modulo Z_p")
        return Fraction(0)
    if x.s <= 0:
        return Fraction(0)
    if x.prec < x.s:
        raise InsufficientPrecision("value not known modulo Z_p")
    return Fraction(x.c[0] % x.F.p ** x.s, x.F.p ** x.s)


# ---------------------------------------------------------------- subfields

class Subfield:
    """Subfield L of a tower E with f(L)=fL, e(L)=eL, uniformizer zeta^b pi^(e/eL)."""

    def __init__(self, E: Tower, fL: int, eL: int, b: int):
        if E.f % fL or E.e % eL:
            raise NotSubfield("degrees must divide those of the tower")
        self.E = E
        self.fL = fL
        self.eL = eL
        self.qL = E.p**fL
        self.dL = (E.q - 1) // (self.qL - 1)
        self.ep = E.e // eL
        self.b = b % self.dL
        if (self.b * eL - E.t) % self.dL:
            raise NotSubfield("uniformizer power does not land in the unramified part")

    @property
    def key(self):
        return (self.fL, self.eL, self.b)

    def __eq__(self, other):
        return isinstance(other, Subfield) and self.E == other.E and self.key == other.key

    def __hash__(self):
        return hash((self.E.key, self.key))

    def __repr__(self):
        return f"Subfield(f={self.fL}, e={self.eL}, b={self.b})"

    @property
    def degree(self):
        return self.fL * self.eL

    @property
    def e_abs(self):
        return self.eL

    @property
    def f_abs(self):
        return self.fL

    @property
    def q(self):
        return self.qL

    @property
    def twist(self):
        """Exponent tL with varpi^eL * eta^tL = p."""
        return (-(self.b * self.eL - self.E.t) // self.dL) % (self.qL - 1)

    @property
    def eta(self):
        return self.E.monomial(self.dL, 0)

    @property
    def varpi(self):
        return self.E.monomial(self.b, self.ep)

    def contains_monomial(self, k, j):
        if j % self.ep:
            return False
        w = j // self.ep
        return (k - w * self.b) % self.dL == 0

    def is_subfield_of(self, other):
        return (other.fL % self.fL == 0 and other.eL % self.eL == 0
                and other.contains_monomial(self.b, self.ep) and other.contains_monomial(self.dL, 0))

    def generators(self):
        return [self.eta, self.varpi]

    def val(self, x: Elem):
        v = x.val()
        return v if v == INF else v // self.ep

    def basis_exponents(self):
        """(zeta exponent, pi exponent) of the Q_p-basis eta^u varpi^w."""
        return [(self.dL * u + self.b * w, self.ep * w) for w in range(self.eL) for u in range(self.fL)]

    def relative_basis(self):
        """(a, j) with zeta^a pi^j running over an L-basis of E."""
        return [(a, j) for j in range(self.ep) for a in range(self.E.f // self.fL)]

    @cached_property
    def _decomposition(self):
        E = self.E
        mons = []
        for (a, j) in self.relative_basis():
            for (k, w) in self.basis_exponents():
                mons.append((k + a, w + j, (a, j), (k, w)))
        cols = []
        for k, j, _, _ in mons:
            m = E.monomial(k, j)
            if m.s != 0:
                raise AssertionError("basis monomial should be integral")
            cols.append(list(m.c))
        T = linalg.from_columns(cols, E.n)
        Tinv, s = linalg.inverse(T, E.p, E.P)
        if s:
            raise InsufficientPrecision("relative basis is not unimodular")
        return mons, Tinv

    def decompose(self, x: Elem):
        """Coefficients lambda_(a,j) in L with x = sum lambda * zeta^a pi^j."""
        E = self.E
        mons, Tinv = self._decomposition
        if x.is_zero():
            return {aj: E.zero(x.abs_prec) for aj in self.relative_basis()}
        mod = E.p**x.prec
        coef = linalg.matvec(Tinv, list(x.c), mod)
        out = {aj: E.zero(x.abs_prec) for aj in self.relative_basis()}
        for c, (k, j, aj, kw) in zip(coef, mons):
            if c:
                term = E.monomial(kw[0], kw[1]) * Elem._make(E, [c] + [0] * (E.n - 1), x.s, x.prec)
                out[aj] = out[aj] + term
        return out

    def contains(self, x: Elem) -> bool:
        d = self.decompose(x)
        return all(v.is_zero() for aj, v in d.items() if aj != (0, 0))

    def trace_from_top(self, x: Elem) -> Elem:
        """tr_{E/L}(x) computed from the multiplication matrix on the L-basis."""
        E = self.E
        total = E.zero()
        for (a, j) in self.relative_basis():
            w = E.monomial(a, j)
            total = total + self.decompose(x * w)[(a, j)]
        return total

    def trace_to_base(self, x: Elem) -> Elem:
        """tr_{L/Q_p}(x) for x in L."""
        rel = self.E.n // self.degree
        return x.trace() * Fraction(1, rel)

    def residue_degree_of(self, x: Elem) -> int:
        return self.E.kf.degree(x.residue())


@lru_cache(maxsize=None)
def _subfields_cached(key):
    E = get_tower(*key)
    out = []
    for fL in range(1, E.f + 1):
        if E.f % fL:
            continue
        for eL in range(1, E.e + 1):
            if E.e % eL:
                continue
            dL = (E.q - 1) // (E.p**fL - 1)
            for b in range(dL):
                if (b * eL - E.t) % dL == 0:
                    out.append(Subfield(E, fL, eL, b))
    out.sort(key=lambda L: (L.degree, L.fL, L.eL, L.b))
    return tuple(out)


def all_subfields(E: Tower):
    return list(_subfields_cached(E.key))


def field_of_monomials(E: Tower, mons):
    """Smallest subfield containing the monomials zeta^k pi^j for (k, j) in mons."""
    for L in all_subfields(E):
        if all(L.contains_monomial(k, j) for k, j in mons):
            return L
    raise NotSubfield("monomials generate nothing inside the tower")


def power_rank(x: Elem, K: Subfield | None = None) -> int:
    """Degree [K[x]:K] from the rank of the powers of x (K defaults to Q_p)."""
    E = x.F
    K = K or E.prime
    limit = E.n // K.degree
    pows = [E.one()]
    for _ in range(limit):
        pows.append(pows[-1] * x)
    # vectors of K-coordinates of 1, x, x^2, ...: over Q_p use raw coordinates
    for d in range(1, limit + 1):
        if _in_span(pows[:d], pows[d], K):
            return d
    return limit


def _coords_over(x: Elem, S: int):
    """Q_p-coordinates of x scaled by p^S (S at least the shift of x)."""
    if x.is_zero():
        return [0] * x.F.n
    f = x.F.p ** (S - x.s)
    return [c * f for c in x.c]


def _in_span(vecs, target, K: Subfield):
    """Is target in the K-span of vecs? Uses K-linear combinations via the K-basis."""
    E = target.F
    # K-span of vecs = Q_p-span of {k_i * v} for k_i in a Q_p-basis of K
    kb = [E.monomial(k, j) for (k, j) in K.basis_exponents()]
    gens = [b * v for v in vecs for b in kb]
    allv = gens + [target]
    S = max(v.s for v in allv if not v.is_zero()) if any(not v.is_zero() for v in allv) else 0
    cols = [_coords_over(v, S) for v in gens]
    tcol = _coords_over(target, S)
    c = E.P
    M = E.p**c
    if not cols:
        return not any(x % M for x in tcol)
    A = linalg.from_columns(cols, E.n)
    res = linalg.smith(A, E.p, c, left=True, right=False)
    guard = c // 2
    rank = sum(1 for v in res.vals if v < guard)
    if any(guard <= v < c for v in res.vals):
        raise InsufficientPrecision("span test is ambiguous at this precision")
    z = linalg.matvec(res.L, [x % M for x in tcol], M)
    for i in range(rank, E.n):
        w = _vp(z[i], E.p)
        if w is not None and w < guard:
            return False
    return True


def generated_field(elems, E: Tower | None = None) -> Subfield:
    """Q_p[elems] as a subfield of the tower."""
    elems = list(elems)
    E = E or elems[0].F
    nz = [x for x in elems if not x.is_zero()]
    if not nz:
        return E.prime
    for L in all_subfields(E):
        if all(L.contains(x) for x in nz):
            return L
    raise NotSubfield("elements do not lie in the tower")


def minimal_poly(x: Elem, K: Subfield | None = None):
    """Monic minimal polynomial of x over K, coefficients as tower elements (lowest first)."""
    E = x.F
    K = K or E.prime
    limit = E.n // K.degree
    pows = [E.one()]
    for _ in range(limit):
        pows.append(pows[-1] * x)
    for d in range(1, limit + 1):
        if _in_span(pows[:d], pows[d], K):
            coeffs = _solve_in_span(pows[:d], pows[d], K)
            return [-c for c in coeffs] + [E.one()]
    raise InsufficientPrecision("no relation found among powers")


def _solve_in_span(vecs, target, K: Subfield):
    """Coefficients k_i in K with sum k_i v_i = target (vecs K-independent)."""
    E = target.F
    kexp = K.basis_exponents()
    kb = [E.monomial(k, j) for (k, j) in kexp]
    gens = [b * v for v in vecs for b in kb]
    S = max(v.s for v in gens + [target] if not v.is_zero())
    cols = [_coords_over(v, S) for v in gens]
    tcol = _coords_over(target, S)
    A = linalg.from_columns(cols, E.n)
    # least-squares free: pick an invertible square subsystem through the Smith form
    c = E.P
    res = linalg.smith(A, E.p, c, left=True)
    M = E.p**c
    z = linalg.matvec(res.L, [x % M for x in tcol], M)
    r = len(cols)
    smax = max(res.vals[:r]) if r else 0
    sol = linalg.matvec(res.R, [z[i] * E.p ** (smax - res.vals[i]) for i in range(r)], M)
    out = []
    nb = len(kb)
    for i in range(len(vecs)):
        acc = E.zero()
        for jb in range(nb):
            coef = sol[i * nb + jb]
            if coef % M:
                acc = acc + kb[jb] * Elem._make(E, [coef] + [0] * (E.n - 1), smax, c)
        out.append(acc)
    return out


# ---------------------------------------------------------------- tower descriptions

def make_tower(p: int, steps, abs_prec: int = 24, guard: int = 4) -> Tower:
    """Normalise a list of ("unramified", f) / ("totally_tame", e, twist) steps.

    ``twist`` is a residue element (coordinate tuple, or an int taken as a residue of
    F_p, or the string "zeta" for the Teichmuller generator of the current residue field).
    Returns the two-step tower with pi^e * zeta^t = p.
    """
    f, e, t = 1, 1, 0
    for step in steps:
        kind = step[0]
        if kind == "unramified":
            nf = f * int(step[1])
            if nf != f:
                old_q, new_q = p**f - 1, p**nf - 1
                t = t * (new_q // old_q) * _embedding_power(p, f, nf)
                f = nf
        elif kind == "totally_tame":
            e2 = int(step[1])
            if math.gcd(e2, p) != 1:
                raise NonTameStep(f"ramification index {e2} divisible by {p}")
            twist = step[2] if len(step) > 2 else 1
            kf = residue_field(p, f)
            z = _twist_residue(twist, kf)
            if not any(z):
                raise BadTwist("twist must be a nonzero residue")
            # pi_new^e2 * z = pi_old, pi_old^e * zeta^t = p
            t = (e * kf.log(z) + t) % (kf.q - 1)
            e *= e2
        else:
            raise ValueError(f"unknown step kind {kind!r}")
    prec = -(-abs_prec // e) + guard
    E = get_tower(p, f, e, t, prec)
    _verify_relation(E)
    return E


def _twist_residue(twist, kf):
    if isinstance(twist, str):
        if twist != "zeta":
            raise BadTwist(f"unknown twist {twist!r}")
        return kf.generator
    if isinstance(twist, int):
        return (twist % kf.p,) + (0,) * (kf.f - 1)
    return tuple(int(x) % kf.p for x in twist)


def _embedding_power(p, f, nf):
    """k with (generator of F_{p^nf})^(d*k) equal to the generator of F_{p^f}."""
    small, big = residue_field(p, f), residue_field(p, nf)
    d = (big.q - 1) // (small.q - 1)
    # a root of the small modulus inside the big field, of smallest log
    h = small.h
    for k in range(small.q - 1):
        if math.gcd(k, small.q - 1) != 1:
            continue
        x = big.exp(d * k)
        acc = big.zero()
        power = big.one()
        for coef in h:
            acc = big.add(acc, tuple(coef * y % p for y in power))
            power = big.mul(power, x)
        if not any(acc):
            return k
    raise ValueError("residue field embedding not found")


def _verify_relation(E: Tower):
    lhs = E.pi ** E.e * E.monomial(E.t, 0)
    if not (lhs - E.from_int(E.p)).is_zero():
        raise AssertionError("defining relation failed on re-evaluation")
