"""Dense real tensors, contractions, structural predicates and the
symmetric embedding of a multilinear form."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from . import _kernels
from .errors import CapabilityError, DimensionMismatchError, ValidationError

SYMMETRY_TOL = 1e-12
IRREDUCIBLE_MAX_DIM = 20


def _frozen(arr):
    out = np.array(arr, dtype=np.float64, copy=True, order="C")
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class SymTensor:
    """Order-m, dimension-n real symmetric tensor stored as the full n**m array.

    The constructor verifies permutation invariance to ``SYMMETRY_TOL`` and
    rejects violations; use :meth:`symmetrized` to average an arbitrary array.
    """

    entries: np.ndarray

    def __post_init__(self):
        a = _frozen(self.entries)
        if a.ndim < 2:
            raise ValidationError(f"symmetric tensor needs order >= 2, got {a.ndim}")
        n = a.shape[0]
        if n < 2 or any(d != n for d in a.shape):
            raise ValidationError(f"symmetric tensor needs equal dims >= 2, got {a.shape}")
        if not np.all(np.isfinite(a)):
            raise ValidationError("tensor entries must be finite")
        scale = max(1.0, float(np.max(np.abs(a))))
        for j in range(1, a.ndim):
            dev = float(np.max(np.abs(a - np.swapaxes(a, 0, j))))
            if dev > SYMMETRY_TOL * scale:
                raise ValidationError(
                    f"tensor is not symmetric: axes 0 and {j} differ by {dev:.3e}"
                )
        object.__setattr__(self, "entries", a)

    @classmethod
    def symmetrized(cls, arr) -> "SymTensor":
        a = np.asarray(arr, dtype=np.float64)
        perms = list(itertools.permutations(range(a.ndim)))
        return cls(sum(np.transpose(a, p) for p in perms) / len(perms))

    @property
    def order(self) -> int:
        return self.entries.ndim

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def dims(self) -> tuple:
        return self.entries.shape

    @property
    def flat(self) -> np.ndarray:
        return self.entries.reshape(-1)

    def is_nonnegative(self) -> bool:
        return bool(np.all(self.entries >= 0))

    def scaled(self, c: float) -> "SymTensor":
        return SymTensor(self.entries * c)


@dataclass(frozen=True, eq=False)
class GenTensor:
    """d_1 x ... x d_m real tensor with no symmetry assumed."""

    entries: np.ndarray

    def __post_init__(self):
        a = _frozen(self.entries)
        if a.ndim < 1 or any(d < 1 for d in a.shape):
            raise ValidationError(f"invalid tensor shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise ValidationError("tensor entries must be finite")
        object.__setattr__(self, "entries", a)

    @property
    def order(self) -> int:
        return self.entries.ndim

    @property
    def dims(self) -> tuple:
        return self.entries.shape

    def is_nonnegative(self) -> bool:
        return bool(np.all(self.entries >= 0))


Tensor = Union[SymTensor, GenTensor]


@dataclass(frozen=True)
class ZEigenpair:
    lam: float
    x: np.ndarray
    residual: float

    def to_dict(self):
        return {"lambda": self.lam, "x": [float(v) for v in self.x], "residual": self.residual}


@dataclass(frozen=True)
class SingularTuple:
    sigma: float
    vectors: list
    residual: float
    flags: list = field(default_factory=list)

    def to_dict(self):
        return {
            "sigma": self.sigma,
            "vectors": [[float(v) for v in x] for x in self.vectors],
            "residual": self.residual,
            "flags": list(self.flags),
        }


def _array(T):
    return T.entries if isinstance(T, (SymTensor, GenTensor)) else np.asarray(T, dtype=np.float64)


def _is_vector_list(x):
    return isinstance(x, (list, tuple)) and len(x) > 0 and np.ndim(x[0]) == 1


def _check_vec(x, expected, mode):
    v = np.asarray(x, dtype=np.float64)
    if v.ndim != 1 or v.shape[0] != expected:
        raise DimensionMismatchError(mode, expected, v.shape[0] if v.ndim == 1 else v.shape)
    return v


def contract_full(T: Tensor, x) -> float:
    """Full contraction: T x^m for one vector, or A x1 ... xm for a list."""
    a = _array(T)
    if _is_vector_list(x):
        if len(x) != a.ndim:
            raise ValidationError(f"need {a.ndim} vectors, got {len(x)}")
        vecs = [_check_vec(v, d, k + 1) for k, (v, d) in enumerate(zip(x, a.shape))]
        out = a
        for v in reversed(vecs):
            out = out @ v
        return float(out)
    if isinstance(T, GenTensor) and len(set(a.shape)) != 1:
        raise ValidationError("nonsymmetric tensor with unequal dims needs one vector per mode")
    n = a.shape[0]
    v = _check_vec(x, n, 1)
    for k, d in enumerate(a.shape):
        if d != n:
            raise DimensionMismatchError(k + 1, d, n)
    return float(_kernels.contract_full(np.ascontiguousarray(a).reshape(-1), n, a.ndim, v))


def contract_once(T: SymTensor, x) -> np.ndarray:
    """The vector T x^{m-1}: entry i is the sum of t[i, i2..im] x[i2]..x[im]."""
    a = _array(T)
    n = a.shape[0]
    v = _check_vec(x, n, 2)
    return np.asarray(
        _kernels.contract_once(np.ascontiguousarray(a).reshape(-1), n, a.ndim, v)
    )


def contract_partial(T: Tensor, x, times: int):
    """Contract the trailing ``times`` modes with x, leaving an order m-times tensor."""
    a = _array(T)
    if not 0 <= times <= a.ndim:
        raise ValidationError(f"times must be in [0, {a.ndim}]")
    out = a
    for k in range(times):
        mode = a.ndim - k
        out = out @ _check_vec(x, a.shape[mode - 1], mode)
    return out


def frobenius_norm(T) -> float:
    return float(np.sqrt(np.sum(_array(T) ** 2)))


def residual(T: SymTensor, lam: float, x) -> float:
    return float(np.linalg.norm(contract_once(T, x) - lam * np.asarray(x)))


def singular_residual(A: Tensor, sigma: float, vectors: Sequence[np.ndarray]) -> float:
    """Largest mode-wise violation of the singular-value stationarity system."""
    a = _array(A)
    worst = 0.0
    for k in range(a.ndim):
        g = np.moveaxis(a, k, 0)
        for j in reversed([j for j in range(a.ndim) if j != k]):
            g = g @ vectors[j]
        worst = max(worst, float(np.linalg.norm(g - sigma * vectors[k])))
    return worst


def is_irreducible(T: Tensor) -> bool:
    """Exhaustive subset test of the (ir)reducibility definition.

    T is reducible when some nonempty proper index set I has
    t[i1, i2, ..., im] == 0 for every i1 in I and all of i2..im outside I.
    """
    a = _array(T)
    n = a.shape[0]
    if any(d != n for d in a.shape):
        raise ValidationError("irreducibility is defined for equal dims only")
    if n > IRREDUCIBLE_MAX_DIM:
        raise CapabilityError(
            f"irreducibility check enumerates 2^n subsets and is capped at n={IRREDUCIBLE_MAX_DIM}; "
            "run the power method anyway and treat the result with care"
        )
    # each nonzero entry (i1, rest) forbids any I containing i1 and missing all of rest
    nz = np.argwhere(a != 0)
    constraints = set()
    for idx in nz:
        rest = 0
        for j in idx[1:]:
            rest |= 1 << int(j)
        constraints.add((int(idx[0]), rest))
    masks = np.arange(1, (1 << n) - 1, dtype=np.int64)
    if masks.size == 0:
        return True
    ok = np.ones(masks.shape, dtype=bool)
    for i1, rest in constraints:
        violated = ((masks >> i1) & 1).astype(bool) & ((masks & rest) == 0)
        ok &= ~violated
        if not ok.any():
            return True
    return not bool(ok.any())


def symmetric_embedding(A: Tensor) -> SymTensor:
    """Order-m symmetric tensor on the direct sum of the mode spaces.

    A copy of A (with its modes permuted accordingly) sits in every block whose
    block labels form a permutation of (1..m); all other blocks are zero.  For a
    block vector y = (y1, ..., ym) this gives S y^m = m! A y1 ... ym.
    """
    a = _array(A)
    m = a.ndim
    if m < 3:
        raise ValidationError("symmetric embedding needs order m >= 3")
    offsets = np.concatenate([[0], np.cumsum(a.shape)])
    N = int(offsets[-1])
    S = np.zeros((N,) * m)
    ranges = [np.arange(offsets[k], offsets[k + 1]) for k in range(m)]
    for perm in itertools.permutations(range(m)):
        S[np.ix_(*[ranges[k] for k in perm])] = np.transpose(a, perm)
    return SymTensor(S)


def embedding_scale(m: int) -> float:
    """Factor sqrt(m^m)/m! converting the embedding's radius to a singular value."""
    return math.sqrt(float(m) ** m) / math.factorial(m)


def split_blocks(y, dims) -> list:
    offsets = np.concatenate([[0], np.cumsum(dims)])
    return [np.asarray(y[offsets[k]:offsets[k + 1]]) for k in range(len(dims))]
