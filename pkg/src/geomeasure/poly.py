"""Univariate real polynomials, certified nonnegative root isolation,
Sylvester matrices with polynomial entries and their determinants."""
from __future__ import annotations

import math
import warnings
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial import chebyshev as C

from .errors import DegenerateSpectrumError, ValidationError

BISECT_WIDTH = 1e-13
MERGE_TOL = 1e-9
DET_TRUNC = 1e-10
_EPS = np.finfo(float).eps


class Polynomial:
    """Real polynomial with ascending coefficients; trailing zeros are trimmed."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        c = np.atleast_1d(np.asarray(coeffs, dtype=np.float64)).copy()
        nz = np.nonzero(c)[0]
        c = c[: nz[-1] + 1] if nz.size else np.zeros(1)
        c.setflags(write=False)
        self.coeffs = c

    @classmethod
    def from_roots(cls, roots):
        c = np.array([1.0])
        for r in roots:
            c = np.convolve(c, [-float(r), 1.0])
        return cls(c)

    @property
    def degree(self) -> int:
        return -1 if self.is_zero() else len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return len(self.coeffs) == 1 and self.coeffs[0] == 0.0

    def scale(self) -> float:
        return float(np.max(np.abs(self.coeffs)))

    def __call__(self, x):
        x = np.asarray(x, dtype=np.float64)
        out = np.zeros_like(x)
        for c in self.coeffs[::-1]:
            out = out * x + c
        return out if out.ndim else float(out)

    def deriv(self) -> "Polynomial":
        if len(self.coeffs) == 1:
            return Polynomial([0.0])
        return Polynomial(self.coeffs[1:] * np.arange(1, len(self.coeffs)))

    def chop(self, rel: float) -> "Polynomial":
        """Zero out coefficients below ``rel`` times the largest one."""
        c = self.coeffs.copy()
        c[np.abs(c) <= rel * self.scale()] = 0.0
        return Polynomial(c)

    def _coerce(self, other):
        return other if isinstance(other, Polynomial) else Polynomial([float(other)])

    def __add__(self, other):
        o = self._coerce(other)
        n = max(len(self.coeffs), len(o.coeffs))
        return Polynomial(np.pad(self.coeffs, (0, n - len(self.coeffs)))
                          + np.pad(o.coeffs, (0, n - len(o.coeffs))))

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(-self.coeffs)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        return Polynomial(np.convolve(self.coeffs, o.coeffs))

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, Polynomial) and np.array_equal(self.coeffs, other.coeffs)

    def __repr__(self):
        return f"Polynomial({self.coeffs.tolist()})"


ZERO = Polynomial([0.0])
ONE = Polynomial([1.0])


class PolyMatrix:
    """Rectangular grid of Polynomials in one variable."""

    def __init__(self, entries: Sequence[Sequence[Polynomial]]):
        rows = [list(r) for r in entries]
        if rows and any(len(r) != len(rows[0]) for r in rows):
            raise ValidationError("polynomial matrix must be rectangular")
        self.entries = rows

    @property
    def shape(self):
        return (len(self.entries), len(self.entries[0]) if self.entries else 0)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row_degrees(self):
        return [max((p.degree for p in row), default=-1) for row in self.entries]

    def evaluate(self, v: float) -> np.ndarray:
        return np.array([[p(v) for p in row] for row in self.entries], dtype=np.float64)


# ---------------------------------------------------------------------------
# Sturm chains.  Built in exact rational arithmetic over the (exactly
# representable) float coefficients; signs are evaluated in floating point
# with a rounding-error bound and fall back to exact evaluation near zero.


def _to_integers(coeffs):
    """Exact integer coefficients of 2**k * p for a suitable k."""
    fr = [Fraction(float(c)) for c in coeffs]
    den = 1
    for f in fr:
        den = max(den, f.denominator)  # denominators are powers of two
    return [int(f * den) for f in fr]


def _primitive(a):
    g = 0
    for c in a:
        g = math.gcd(g, c)
    return [c // g for c in a] if g > 1 else a


def _prem(a, b):
    """Pseudo-remainder |lc(b)|^(da-db+1) * a mod b, exact over the integers."""
    a = list(a)
    db = len(b) - 1
    lead = b[-1]
    alead = abs(lead)
    sgn = 1 if lead > 0 else -1
    while len(a) - 1 >= db and any(a):
        if a[-1] == 0:
            a.pop()
            continue
        q = a[-1] * sgn
        shift = len(a) - 1 - db
        a = [c * alead for c in a]
        for i in range(db + 1):
            a[shift + i] -= q * b[i]
        a.pop()
    while a and a[-1] == 0:
        a.pop()
    return a


class _SturmChain:
    def __init__(self, coeffs: np.ndarray):
        p = _primitive(_to_integers(coeffs))
        dp = _primitive([i * p[i] for i in range(1, len(p))])
        chain = [p, dp]
        while True:
            r = _prem(chain[-2], chain[-1])
            if not r:
                break
            chain.append(_primitive([-c for c in r]))
        self.exact = chain
        self.approx = []
        for q in chain:
            top = max(abs(c) for c in q)
            shift = max(top.bit_length() - 60, 0)
            self.approx.append(np.array([float(Fraction(c, 1 << shift)) for c in q]))

    @staticmethod
    def _sign_float(c, x):
        val = 0.0
        bound = 0.0
        ax = abs(x)
        for coef in c[::-1]:
            val = val * x + coef
            bound = bound * ax + abs(coef)
        if not np.isfinite(val):
            return None
        err = 4.0 * (len(c) + 1) * _EPS * bound
        if val > err:
            return 1
        if val < -err:
            return -1
        return None

    @staticmethod
    def _sign_exact(c, x):
        num, den = Fraction(x).as_integer_ratio()
        deg = len(c) - 1
        val = 0
        for i, coef in enumerate(c):
            val += coef * num ** i * den ** (deg - i)
        return (val > 0) - (val < 0)

    def sign(self, k, x):
        s = self._sign_float(self.approx[k], x)
        return s if s is not None else self._sign_exact(self.exact[k], x)

    def variations(self, x):
        signs = [s for s in (self.sign(k, x) for k in range(len(self.exact))) if s != 0]
        return sum(1 for a, b in zip(signs, signs[1:]) if a != b)

    def count(self, a, b):
        """Distinct real roots in (a, b]."""
        return self.variations(a) - self.variations(b)


def cauchy_bound(p: Polynomial) -> float:
    c = p.coeffs
    return 1.0 + float(np.max(np.abs(c[:-1] / c[-1]))) if len(c) > 1 else 1.0


def _isolate(p: Polynomial, lo: float, hi: float):
    """Certified distinct real roots of p in (lo, hi], each to BISECT_WIDTH."""
    chain = _SturmChain(p.coeffs)
    roots = []
    stack = [(lo, hi, chain.count(lo, hi))]
    while stack:
        a, b, n = stack.pop()
        if n <= 0:
            continue
        if b - a <= BISECT_WIDTH * max(1.0, abs(b)):
            roots.append(0.5 * (a + b))
            continue
        mid = 0.5 * (a + b)
        if mid <= a or mid >= b:
            roots.append(mid)
            continue
        if n == 1 and chain.sign(0, a) * chain.sign(0, b) < 0:
            roots.append(_bisect_sign(chain, a, b))
            continue
        left = chain.count(a, mid)
        stack.append((mid, b, n - left))
        stack.append((a, mid, left))
    return [_newton_polish(p, r) for r in sorted(roots)]


def _bisect_sign(chain, a, b):
    sa = chain.sign(0, a)
    while b - a > BISECT_WIDTH * max(1.0, abs(b)):
        mid = 0.5 * (a + b)
        if mid <= a or mid >= b:
            break
        sm = chain.sign(0, mid)
        if sm == 0:
            return mid
        if sm == sa:
            a = mid
        else:
            b = mid
    return 0.5 * (a + b)


def _newton_polish(p: Polynomial, r: float, steps: int = 3) -> float:
    dp = p.deriv()
    best, best_val = r, abs(p(r))
    x = r
    for _ in range(steps):
        d = dp(x)
        if d == 0.0:
            break
        x = x - p(x) / d
        v = abs(p(x))
        if not np.isfinite(x) or abs(x - r) > 1e-9 * max(1.0, abs(r)):
            break
        if v < best_val:
            best, best_val = x, v
    return best


def _merge(roots):
    out = []
    for r in sorted(roots):
        if out and abs(r - out[-1][-1]) <= MERGE_TOL * max(1.0, abs(r)):
            out[-1].append(r)
        else:
            out.append([r])
    return [(float(np.mean(g)), len(g)) for g in out]


def _near_zero(p: Polynomial, r: float, tol: float) -> bool:
    # relative to the magnitude of the terms being summed, not to p's coefficients alone
    terms = float(np.sum(np.abs(p.coeffs) * abs(r) ** np.arange(len(p.coeffs))))
    return abs(p(r)) <= tol * terms


def _sound(p: Polynomial, r: float, tol: float) -> bool:
    # absolute test for sign-certified roots whose terms cancel (roots next to 0)
    return abs(p(r)) <= tol * (1.0 + abs(r)) ** p.degree * float(np.max(np.abs(p.coeffs)))


def real_roots_nonneg(p: Polynomial, tol: float = 1e-9, upper: float | None = None,
                      with_multiplicity: bool = False, cluster_tol: float | None = None,
                      _depth: int = 0):
    """Sorted nonnegative real roots of p.

    Distinct roots are isolated by Sturm sign counting on [0, B] (B the Cauchy
    bound, or ``upper`` when given), bisected to width 1e-13 and Newton
    polished; each must satisfy |p(r)| <= tol * sum_i |c_i| |r|^i.

    With ``cluster_tol`` set, near-multiple roots that coefficient noise has
    pushed off the real axis are recovered as critical points of p where
    |p| <= cluster_tol * sum_i |c_i| |r|^i.  Such roots are not sign-change
    certified, so use it only when candidates are verified downstream.
    Roots closer than 1e-9 are merged; ``with_multiplicity`` returns
    (root, merged count) pairs.
    """
    if p.is_zero():
        raise DegenerateSpectrumError(
            "identically zero: root set is R, caller must handle degenerate branch"
        )
    if p.degree <= 0:
        return []
    hi = cauchy_bound(p)
    if upper is not None:
        hi = min(hi, float(upper))
    # roots pushed slightly negative by rounding are clamped to 0; the margin
    # stays absolute so a huge bound cannot pull in a genuine negative root
    lo = -1e-9
    found = [r for r in _isolate(p, lo, hi) if _near_zero(p, r, max(tol, 1e-12)) or _sound(p, r, tol)]
    if p.coeffs[0] == 0.0:
        found.append(0.0)
    if cluster_tol is not None and _depth < 4 and p.degree >= 2:
        for r in real_roots_nonneg(p.deriv(), tol, upper=hi, cluster_tol=cluster_tol,
                                   _depth=_depth + 1):
            if _near_zero(p, r, cluster_tol):
                found.append(r)
    found = [max(r, 0.0) for r in found if lo <= r <= hi]
    merged = _merge(found)
    if with_multiplicity:
        return [(r, max(k, multiplicity(p, r))) for r, k in merged]
    return [r for r, _ in merged]


def multiplicity(p: Polynomial, r: float, tol: float = 1e-7) -> int:
    """1 + number of leading derivatives that also vanish (relatively) at r."""
    k = 1
    d = p.deriv()
    while not d.is_zero() and d.degree >= 0 and _near_zero(d, r, tol):
        k += 1
        d = d.deriv()
    return k


def common_nonneg_roots(p: Polynomial, q: Polynomial, tol: float = 1e-8,
                        match_tol: float = 1e-6, cluster_tol: float | None = None) -> list:
    """Nonnegative roots shared by p and q.

    Roots of each are matched within ``match_tol`` (relative to 1 + |r|) and
    the merged root is re-checked against both polynomials at ``tol``.  An
    identically zero argument imposes no constraint.
    """
    if p.is_zero() and q.is_zero():
        raise DegenerateSpectrumError("both polynomials identically zero: every t is a common root")
    if p.is_zero():
        return real_roots_nonneg(q, tol, cluster_tol=cluster_tol)
    if q.is_zero():
        return real_roots_nonneg(p, tol, cluster_tol=cluster_tol)
    rq = real_roots_nonneg(q, tol, cluster_tol=cluster_tol)
    out = []
    for r in real_roots_nonneg(p, tol, cluster_tol=cluster_tol):
        close = [s for s in rq if abs(s - r) <= match_tol * (1.0 + abs(r))]
        if not close:
            continue
        s = min(close, key=lambda s: abs(s - r))
        t = 0.5 * (r + s)
        if _near_zero(p, t, tol) and _near_zero(q, t, tol):
            out.append(t)
    return [r for r, _ in _merge(out)]


def sylvester(f: Sequence[Polynomial], g: Sequence[Polynomial], m: int | None = None) -> PolyMatrix:
    """Sylvester matrix of f = f[0] u^p + ... + f[p] and g = g[0] u^q + ... + g[q].

    Coefficients are given in descending powers of u.  The first q rows carry
    shifted copies of f, the last p rows shifted copies of g.  Passing ``m``
    asserts p = m and q = m - 1 (the (2m-1) x (2m-1) layout).
    """
    f = [c if isinstance(c, Polynomial) else Polynomial([c]) for c in f]
    g = [c if isinstance(c, Polynomial) else Polynomial([c]) for c in g]
    p, q = len(f) - 1, len(g) - 1
    if p < 0 or q < 0:
        raise ValidationError("sylvester needs nonempty coefficient lists")
    if m is not None and (p != m or q != m - 1):
        raise ValidationError(f"expected u-degrees ({m}, {m - 1}), got ({p}, {q})")
    size = p + q
    rows = []
    for i in range(q):
        rows.append([ZERO] * i + list(f) + [ZERO] * (size - p - 1 - i))
    for i in range(p):
        rows.append([ZERO] * i + list(g) + [ZERO] * (size - q - 1 - i))
    return PolyMatrix(rows)


def chebyshev_nodes(count: int, radius: float = 1.0) -> np.ndarray:
    k = np.arange(count)
    return radius * np.cos((2 * k + 1) * np.pi / (2 * count))


def interpolate(fn: Callable[[float], float], degree: int, radius: float = 1.0,
                avoid_zero: bool = False, warn: bool = True) -> Polynomial:
    """Polynomial of the given degree through samples of ``fn`` at Chebyshev nodes."""
    if degree < 0:
        return Polynomial([0.0])
    count = degree + 1
    if avoid_zero and count % 2 == 1:
        count += 1
    nodes = chebyshev_nodes(count, radius)
    vals = np.array([fn(float(v)) for v in nodes])
    mags = np.abs(vals[vals != 0])
    if warn and mags.size and mags.max() / mags.min() > 1e12:
        warnings.warn(
            f"determinant samples span {mags.max() / mags.min():.1e}; interpolation may be ill conditioned",
            RuntimeWarning, stacklevel=2,
        )
    if not np.any(vals):
        return Polynomial([0.0])
    cheb = C.chebfit(nodes / radius, vals, degree)
    mono = C.cheb2poly(cheb)
    mono = mono / radius ** np.arange(len(mono))
    big = float(np.max(np.abs(mono)))
    mono[np.abs(mono) < DET_TRUNC * big] = 0.0
    return Polynomial(mono)


def det_polymatrix(M: PolyMatrix, degree_bound: int | None = None, radius: float = 1.0,
                   warn: bool = True) -> Polynomial:
    """Determinant of a square polynomial matrix by evaluation and interpolation.

    The degree bound defaults to the sum of the row-wise maximal degrees.
    """
    rows, cols = M.shape
    if rows != cols:
        raise ValidationError(f"determinant needs a square matrix, got {M.shape}")
    if rows == 0:
        return Polynomial([1.0])
    degs = M.row_degrees()
    if min(degs) < 0:
        return Polynomial([0.0])
    D = sum(degs) if degree_bound is None else min(degree_bound, sum(degs))
    return interpolate(lambda v: float(np.linalg.det(M.evaluate(v))), D, radius, warn=warn)
