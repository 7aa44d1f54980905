"""Pure states with nonnegative amplitudes and their geometric measure of
entanglement."""
from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import elim, shopm
from .errors import CapabilityError, ValidationError
from .tensor_core import (GenTensor, SingularTuple, SymTensor, embedding_scale,
                          singular_residual, split_blocks, symmetric_embedding)

NORM_TOL = 1e-10
RENORM_TOL = 1e-6
METHODS = ("auto", "elim", "power", "embed")


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized m-partite state given by its (nonnegative) amplitude array.

    Index 0 along each mode is the first basis vector (|0> for qubits).
    """

    dims: tuple
    amplitudes: np.ndarray
    label: str = ""

    def __post_init__(self):
        amp = np.array(self.amplitudes, dtype=np.float64)
        dims = tuple(int(d) for d in self.dims)
        if amp.shape != dims:
            raise ValidationError(f"amplitude array shape {amp.shape} does not match dims {dims}")
        if len(dims) < 3:
            raise ValidationError(f"need at least 3 parties, got {len(dims)}")
        if any(d < 2 for d in dims):
            raise ValidationError("every party needs local dimension >= 2")
        if not np.all(np.isfinite(amp)):
            raise ValidationError("amplitudes must be finite")
        if np.any(amp < 0):
            raise ValidationError("state not nonnegative in given basis")
        norm2 = float(np.sum(amp ** 2))
        if abs(1.0 - norm2) > RENORM_TOL:
            raise ValidationError(f"state is not normalized (sum of squares {norm2:.12g})")
        if abs(1.0 - norm2) > NORM_TOL:
            warnings.warn(f"renormalizing state with sum of squares {norm2:.12g}", stacklevel=3)
            amp = amp / math.sqrt(norm2)
        amp.setflags(write=False)
        object.__setattr__(self, "amplitudes", amp)
        object.__setattr__(self, "dims", dims)

    @property
    def parts(self) -> int:
        return len(self.dims)

    def is_symmetric(self) -> bool:
        if len(set(self.dims)) != 1:
            return False
        a = self.amplitudes
        return all(np.max(np.abs(a - np.swapaxes(a, 0, j))) <= 1e-12 for j in range(1, a.ndim))


@dataclass
class MeasureResult:
    G: float
    E_G: float
    witness: list
    method: str
    audit: dict = field(default_factory=dict)
    maximizers: int = 1

    def to_dict(self):
        return {
            "G": self.G,
            "E_G": self.E_G,
            "witness": [[float(c) for c in v] for v in self.witness],
            "method": self.method,
            "maximizers": self.maximizers,
            "audit": self.audit,
        }


def dicke(m: int, k: int) -> PureState:
    """|S(m,k)>: equal superposition of the basis strings with k zeros and m-k ones."""
    if not 0 <= k <= m:
        raise ValidationError(f"need 0 <= k <= m, got k={k}, m={m}")
    amp = np.zeros((2,) * m)
    c = math.sqrt(math.factorial(k) * math.factorial(m - k) / math.factorial(m))
    for ones in itertools.combinations(range(m), m - k):
        idx = [0] * m
        for j in ones:
            idx[j] = 1
        amp[tuple(idx)] = c
    return PureState((2,) * m, amp, f"S({m},{k})")


def w_state() -> PureState:
    s = dicke(3, 2)
    return PureState(s.dims, s.amplitudes, "W")


def inverted_w() -> PureState:
    s = dicke(3, 1)
    return PureState(s.dims, s.amplitudes, "inverted-W")


def ghz(m: int) -> PureState:
    amp = np.zeros((2,) * m)
    amp[(0,) * m] = amp[(1,) * m] = 1.0 / math.sqrt(2.0)
    return PureState((2,) * m, amp, f"{m}GHZ")


def general_ghz_qutrit(alpha: float, beta: float, gamma: float, m: int = 3) -> PureState:
    """alpha|11..1> + beta|22..2> + gamma|33..3> on m qutrits."""
    coef = (float(alpha), float(beta), float(gamma))
    if min(coef) < 0:
        raise ValidationError("qutrit GHZ coefficients must be nonnegative")
    if abs(sum(c * c for c in coef) - 1.0) > NORM_TOL:
        raise ValidationError("qutrit GHZ coefficients must satisfy a^2 + b^2 + c^2 = 1")
    amp = np.zeros((3,) * m)
    for i, c in enumerate(coef):
        amp[(i,) * m] = c
    return PureState((3,) * m, amp, f"qutrit-GHZ{coef}")


def to_tensor(s: PureState):
    if s.is_symmetric():
        return SymTensor(s.amplitudes)
    return GenTensor(s.amplitudes)


def _sorted_unique(vectors, tol=1e-6):
    out = []
    for v in vectors:
        v = np.asarray(v, dtype=np.float64)
        if not any(np.linalg.norm(v - w) <= tol for w in out):
            out.append(v)
    out.sort(key=lambda v: tuple(-np.round(v, 8)))
    return out


def _embedding_vectors(y, dims):
    m = len(dims)
    vecs = []
    for block in split_blocks(y, dims):
        x = math.sqrt(m) * np.clip(block, 0.0, None)
        nrm = np.linalg.norm(x)
        vecs.append(x / nrm if nrm > 0 else x)
    return vecs


def _singular_via_embedding(a, restarts, cfg, trace=False):
    S = symmetric_embedding(a)
    res = shopm.restart_radius(S, restarts, cfg, trace=trace)
    sigma = embedding_scale(a.ndim) * res.radius
    cands = [_embedding_vectors(np.asarray(y), a.shape) for y in res.audit["maximizers"]]
    return sigma, cands, res


def geometric_measure(s: PureState, method: str = "auto", restarts: int = shopm.DEFAULT_RESTARTS,
                      tol: float = 1e-11, seed: int = 0, alpha=None,
                      max_iter: int = 200_000) -> MeasureResult:
    """G(psi) and E_G = 1 - G^2 for a nonnegative pure state.

    ``auto`` uses elimination for symmetric qubit/qutrit states, restarted
    power iteration for other symmetric states, and the symmetric embedding
    for nonsymmetric ones.  ``power`` on a nonsymmetric state also goes
    through the embedding.
    """
    if method not in METHODS:
        raise ValidationError(f"unknown method {method!r}; choose from {METHODS}")
    T = to_tensor(s)
    sym = isinstance(T, SymTensor)
    m = s.parts
    if method == "auto":
        method = "elim" if sym and T.dim in (2, 3) else ("power" if sym else "embed")
    if method == "power" and not sym:
        method = "embed"
    cfg = shopm.ShopmConfig(alpha=alpha, tol=tol, max_iter=max_iter, seed=seed)

    if method == "elim":
        if not sym:
            raise CapabilityError("elimination needs a symmetric state; use the embedding")
        if T.dim not in (2, 3):
            raise CapabilityError(f"elimination handles local dimension 2 or 3, got {T.dim}; use power")
        sp = elim.spectrum(T)
        G = sp.radius
        maxs = _sorted_unique([p.x for p in sp.maximizers()])
        label = "elim-qubit" if T.dim == 2 else "elim-qutrit"
        witness = [maxs[0]] * m
        audit = {"spectrum": sp.to_dict()}
    elif method == "power":
        res = shopm.restart_radius(T, restarts, cfg)
        G = res.radius
        maxs = _sorted_unique(res.audit["maximizers"])
        label = "shopm-restart"
        witness = [maxs[0]] * m
        audit = res.audit
    else:
        sigma, cands, res = _singular_via_embedding(s.amplitudes, restarts, cfg)
        G = sigma
        cands.sort(key=lambda vs: tuple(-np.round(np.concatenate(vs), 8)))
        maxs = cands
        label = "embedding"
        witness = cands[0]
        audit = res.audit
    G = float(min(max(G, 0.0), 1.0))
    return MeasureResult(G, 1.0 - G * G, [np.asarray(w) for w in witness], label, audit, len(maxs))


def singular_radius(A, restarts: int = shopm.DEFAULT_RESTARTS, tol: float = 1e-11,
                    seed: int = 0) -> SingularTuple:
    """Largest singular value of a nonnegative tensor with nonnegative mode vectors."""
    a = np.asarray(getattr(A, "entries", A), dtype=np.float64)
    if np.any(a < 0):
        raise ValidationError("singular_radius needs a nonnegative tensor")
    if not np.any(a):
        vecs = []
        for d in a.shape:
            e = np.zeros(d)
            e[0] = 1.0
            vecs.append(e)
        return SingularTuple(0.0, vecs, 0.0, ["zero tensor: canonical vectors, sigma = 0"])
    cfg = shopm.ShopmConfig(tol=tol, seed=seed)
    sigma, cands, _ = _singular_via_embedding(a, restarts, cfg)
    vecs = cands[0]
    return SingularTuple(float(sigma), vecs, singular_residual(a, sigma, vecs))
