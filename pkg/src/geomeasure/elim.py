"""Exact enumeration of nonnegative Z-eigenpairs for dimension 2 and 3.

Candidates come from univariate root finding (qubit) or a Sylvester
resultant in one ratio variable followed by back-substitution (qutrit).
Every candidate is Newton-polished on the full eigen-system and admitted
only if its residual passes ``ADMIT_TOL * max(1, lambda)``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import CapabilityError, DegenerateSpectrumError, ValidationError
from .poly import (Polynomial, common_nonneg_roots, det_polymatrix, interpolate,
                   real_roots_nonneg, sylvester)
from .tensor_core import SymTensor, ZEigenpair, contract_full, contract_once, contract_partial

ADMIT_TOL = 1e-8
DEDUP_TOL = 1e-7
ROOT_TOL = 1e-8
CLUSTER_TOL = 1e-9
MATCH_TOL = 1e-5
CHOP = 1e-13


@dataclass
class ZSpectrum:
    pairs: list
    radius: float
    complete: bool
    notes: list = field(default_factory=list)

    def eigenvalues(self):
        return [p.lam for p in self.pairs]

    def maximizers(self, atol=1e-9):
        return [p for p in self.pairs if p.lam >= self.radius - atol]

    def to_dict(self):
        return {
            "radius": self.radius,
            "complete": self.complete,
            "pairs": [p.to_dict() for p in self.pairs],
            "notes": list(self.notes),
        }


def count_bound(m: int, n: int) -> float:
    """Upper bound ((m-1)^n - 1)/(m-2) on the number of Z-eigenvalues."""
    if m == 2:
        return float(n)
    return ((m - 1) ** n - 1) / (m - 2)


def _as_nonneg_sym(T, n):
    if not isinstance(T, SymTensor):
        T = SymTensor(np.asarray(getattr(T, "entries", T)))
    if T.dim != n:
        raise ValidationError(f"expected dimension {n}, got {T.dim}")
    if not T.is_nonnegative():
        raise ValidationError("tensor has negative entries")
    return T


def _row_polys(T: SymTensor):
    """Coefficient arrays of x -> (T x^{m-1})_i with the last coordinate set to 1.

    For n = 2 returns arrays c[i][j] (coefficient of t^j, t = x1/x2).  For
    n = 3 returns c[i][j, k] (coefficient of u^j v^k, u = x1/x3, v = x2/x3).
    """
    a = T.entries
    n, m = T.dim, T.order
    shape = (n,) + (m,) * (n - 1)
    out = np.zeros(shape)
    for rest in itertools.product(range(n), repeat=m - 1):
        powers = tuple(rest.count(k) for k in range(n - 1))
        for i in range(n):
            out[(i,) + powers] += a[(i,) + rest]
    return out


def _polish(T: SymTensor, x, steps: int = 8):
    """Newton refinement of (lambda, x) on T x^{m-1} = lambda x, x.x = 1."""
    m, n = T.order, T.dim
    x = np.asarray(x, dtype=np.float64)
    x = x / np.linalg.norm(x)
    lam = contract_full(T, x)
    res = float(np.linalg.norm(contract_once(T, x) - lam * x))
    for _ in range(steps):
        if res < 1e-15:
            break
        H = np.asarray(contract_partial(T, x, m - 2), dtype=np.float64)
        g = contract_once(T, x)
        J = np.zeros((n + 1, n + 1))
        J[:n, :n] = (m - 1) * H - lam * np.eye(n)
        J[:n, n] = -x
        J[n, :n] = -x
        F = np.concatenate([g - lam * x, [(1.0 - x @ x) / 2.0]])
        try:
            step = np.linalg.solve(J, -F)
        except np.linalg.LinAlgError:
            break
        xn = x + step[:n]
        if not np.all(np.isfinite(xn)):
            break
        xn = xn / np.linalg.norm(xn)
        ln = contract_full(T, xn)
        rn = float(np.linalg.norm(contract_once(T, xn) - ln * xn))
        if rn >= res:
            break
        x, lam, res = xn, ln, rn
    return lam, x, res


def _admit(T: SymTensor, x, pairs: list, tol: float = ADMIT_TOL):
    x = np.asarray(x, dtype=np.float64)
    if not np.all(np.isfinite(x)) or np.linalg.norm(x) == 0:
        return
    lam, x, res = _polish(T, x)
    if np.any(x < -1e-9):
        return
    if np.any(x < 0):
        x = np.clip(x, 0.0, None)
        x = x / np.linalg.norm(x)
        lam = contract_full(T, x)
        res = float(np.linalg.norm(contract_once(T, x) - lam * x))
    if res > tol * max(1.0, abs(lam)):
        return
    for k, p in enumerate(pairs):
        if np.linalg.norm(p.x - x) <= DEDUP_TOL:
            if res < p.residual:
                pairs[k] = ZEigenpair(lam, x, res)
            return
    pairs.append(ZEigenpair(float(lam), x, float(res)))


def _finish(T: SymTensor, pairs: list, notes=None) -> ZSpectrum:
    pairs = sorted(pairs, key=lambda p: (-p.lam, tuple(-p.x)))
    radius = pairs[0].lam if pairs else 0.0
    return ZSpectrum(pairs, float(radius), True, list(notes or []))


def _zero_spectrum(n):
    e1 = np.zeros(n)
    e1[0] = 1.0
    return ZSpectrum([ZEigenpair(0.0, e1, 0.0)], 0.0, False,
                     ["zero tensor: every unit vector is a Z-eigenvector; e1 reported"])


def _coordinate_pair(T, i, pairs, tol=ADMIT_TOL):
    e = np.zeros(T.dim)
    e[i] = 1.0
    _admit(T, e, pairs, tol)


def qubit_spectrum(T, tol: float = ADMIT_TOL) -> ZSpectrum:
    """All nonnegative Z-eigenpairs of a nonnegative symmetric tensor with n = 2."""
    T = _as_nonneg_sym(T, 2)
    if not np.any(T.entries):
        return _zero_spectrum(2)
    pairs: list = []
    _coordinate_pair(T, 0, pairs, tol)
    c = _row_polys(T)
    # x2 > 0, t = x1/x2:  x2 * row1 = x1 * row2, divided by x2^m
    q = Polynomial(c[0]) - Polynomial([0.0, 1.0]) * Polynomial(c[1])
    q = q.chop(CHOP)
    for t in real_roots_nonneg(q, ROOT_TOL, cluster_tol=CLUSTER_TOL):
        _admit(T, np.array([t, 1.0]), pairs, tol)
    return _finish(T, pairs)


def _bivariate_f_g(T: SymTensor):
    c = _row_polys(T)
    m = T.order
    size = m + 1
    r = [np.zeros((size, size)) for _ in range(3)]
    for i in range(3):
        r[i][: m, : m] = c[i]
    shift_u = np.zeros((size, size))
    shift_u[1:, :] = r[2][:-1, :]
    shift_v = np.zeros((size, size))
    shift_v[:, 1:] = r[2][:, :-1]
    f = r[0] - shift_u
    g = r[1] - shift_v
    scale = max(float(np.max(np.abs(f))), float(np.max(np.abs(g))), 1e-300)
    f[np.abs(f) <= CHOP * scale] = 0.0
    g[np.abs(g) <= CHOP * scale] = 0.0
    return f, g


def _u_degree(B):
    rows = np.nonzero(np.any(B != 0, axis=1))[0]
    return int(rows[-1]) if rows.size else -1


def _total_degree(B):
    idx = np.argwhere(B != 0)
    return int(idx.sum(axis=1).max()) if idx.size else -1


def _descending(B, deg):
    return [Polynomial(B[deg - j]) for j in range(deg + 1)]


def _at_v(B, v):
    """Univariate polynomial in u of B(u, v) with near-vanishing coefficients zeroed."""
    powers = v ** np.arange(B.shape[1])
    vals = B @ powers
    mags = np.abs(B) @ powers
    vals[np.abs(vals) <= 1e-9 * np.maximum(mags, 1e-300)] = 0.0
    return Polynomial(vals)


def _resultant_v_roots(f, g, p, q, notes):
    fd, gd = _descending(f, p), _descending(g, q)
    M = sylvester(fd, gd)
    rowsum = sum(M.row_degrees())
    D = max(0, min(rowsum, _total_degree(f) * _total_degree(g)))

    def det_at(v):
        return float(np.linalg.det(M.evaluate(v)))

    probes = [0.0, 0.37, 1.0, 2.9, 7.3]
    hadamard = [float(np.prod(np.linalg.norm(M.evaluate(v), axis=1))) for v in probes]
    if all(abs(det_at(v)) <= 1e-11 * max(h, 1e-300) for v, h in zip(probes, hadamard)):
        raise DegenerateSpectrumError(
            "resultant vanishes identically: infinitely many candidate eigenvectors"
        )
    roots = []
    d = det_polymatrix(M, degree_bound=D, warn=False)
    if not d.is_zero():
        roots += real_roots_nonneg(d, ROOT_TOL, upper=1.0 + 1e-9, cluster_tol=CLUSTER_TOL)
    # v > 1 through w = 1/v on the reversed determinant w^D d(1/w)
    dr = interpolate(lambda w: w ** D * det_at(1.0 / w), D, avoid_zero=True, warn=False)
    if not dr.is_zero():
        for w in real_roots_nonneg(dr, ROOT_TOL, upper=1.0 + 1e-9, cluster_tol=CLUSTER_TOL):
            if w > 1e-12:
                roots.append(1.0 / w)
    notes.append(f"resultant degree bound {D}, {len(roots)} candidate v-roots")
    return sorted(roots)


def _u_candidates(fu: Polynomial, gu: Polynomial):
    out = []
    for poly in (fu, gu):
        if not poly.is_zero() and poly.degree > 0:
            out += real_roots_nonneg(poly, ROOT_TOL, cluster_tol=CLUSTER_TOL)
    out.sort()
    return [u for k, u in enumerate(out) if k == 0 or u - out[k - 1] > 1e-12 * (1 + u)]


def qutrit_spectrum(T, tol: float = ADMIT_TOL) -> ZSpectrum:
    """All nonnegative Z-eigenpairs of a nonnegative symmetric tensor with n = 3.

    Step 1 checks (1, 0, 0) directly (always, not only under the zero-pattern
    guard).  Step 2 covers x3 = 0, x2 > 0 with t = x1/x2.  Step 3 covers
    x3 > 0 with u = x1/x3, v = x2/x3: the Sylvester resultant in u gives
    d(v), and each nonnegative root v is substituted back to recover u.
    """
    T = _as_nonneg_sym(T, 3)
    if not np.any(T.entries):
        return _zero_spectrum(3)
    notes: list = []
    pairs: list = []

    # Step 1
    _coordinate_pair(T, 0, pairs, tol)

    # Step 2: x3 = 0, x2 != 0
    c = _row_polys(T)
    t_poly = Polynomial([0.0, 1.0])
    m = T.order
    # x3 = 0 keeps only the monomials x1^j x2^(m-1-j)
    anti = [np.array([c[i][j, m - 1 - j] for j in range(m)]) for i in range(3)]
    f2 = Polynomial(anti[0])
    g2 = t_poly * Polynomial(anti[1])
    h2 = Polynomial(anti[2])
    fg = (f2 - g2).chop(CHOP)
    h2 = h2.chop(CHOP)
    for t in common_nonneg_roots(fg, h2, ROOT_TOL, MATCH_TOL, CLUSTER_TOL):
        _admit(T, np.array([t, 1.0, 0.0]), pairs, tol)

    # Step 3: x3 != 0
    f, g = _bivariate_f_g(T)
    p, q = _u_degree(f), _u_degree(g)
    if p < 0 or q < 0:
        raise DegenerateSpectrumError(
            "one eliminated equation vanishes identically: solution set is a curve"
        )
    if p == 0 and q == 0:
        a0, b0 = Polynomial(f[0]), Polynomial(g[0])
        if common_nonneg_roots(a0, b0, ROOT_TOL, MATCH_TOL):
            raise DegenerateSpectrumError("eliminated system leaves u free: infinitely many eigenvectors")
        v_roots = []
    else:
        v_roots = _resultant_v_roots(f, g, p, q, notes)
    for v in v_roots:
        fu, gu = _at_v(f, v), _at_v(g, v)
        if fu.is_zero() and gu.is_zero():
            raise DegenerateSpectrumError(f"at v={v:.6g} every u solves the system")
        # v carries interpolation error, so the u-roots of f and g need not
        # coincide; every nonnegative root of either seeds a polished candidate
        for u in _u_candidates(fu, gu):
            _admit(T, np.array([u, v, 1.0]), pairs, tol)
    return _finish(T, pairs, notes)


def spectrum(T, tol: float = ADMIT_TOL) -> ZSpectrum:
    dim = T.dim if isinstance(T, SymTensor) else np.asarray(getattr(T, "entries", T)).shape[0]
    if dim == 2:
        return qubit_spectrum(T, tol)
    if dim == 3:
        return qutrit_spectrum(T, tol)
    raise CapabilityError(
        f"elimination handles n in {{2, 3}} only (got n={dim}); use shopm.restart_radius"
    )


def radius_elim(T) -> float:
    return spectrum(T).radius
