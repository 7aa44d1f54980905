"""Shifted higher-order power method, the rescaling restart loop built on
it, and the spectral-gap estimate that sizes its guaranteed basin."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from . import _kernels
from .errors import CapabilityError, ValidationError
from .tensor_core import SymTensor, ZEigenpair, contract_full, frobenius_norm, is_irreducible, residual

SHIFT_MARGIN = 1e-6
MU_TOL = 1e-10
DEFAULT_RESTARTS = 32
MAX_ROUNDS = 50
IRREDUCIBILITY_CHECK_MAX_DIM = 12


@dataclass(frozen=True)
class ShopmConfig:
    alpha: Optional[float] = None  # None -> default_shift of the tensor
    tol: float = 1e-11
    max_iter: int = 200_000
    seed: int = 0

    def __post_init__(self):
        if self.alpha is not None and not self.alpha > 0:
            raise ValidationError(f"shift alpha must be positive, got {self.alpha}")
        if not self.tol > 0:
            raise ValidationError(f"tol must be positive, got {self.tol}")
        if self.max_iter < 1:
            raise ValidationError("max_iter must be at least 1")


@dataclass
class ShopmTrace:
    lambdas: np.ndarray
    final: ZEigenpair
    iterations: int
    converged: bool
    alpha: float

    def to_dict(self, with_lambdas=True):
        out = {
            "final": self.final.to_dict(),
            "iterations": self.iterations,
            "converged": self.converged,
            "alpha": self.alpha,
        }
        if with_lambdas:
            out["lambdas"] = [float(v) for v in self.lambdas]
        return out


@dataclass
class GapEstimate:
    rho: float
    lambda2: float
    kappa: float
    acc_radius: float
    singleton: bool = False
    flags: list = field(default_factory=list)

    def to_dict(self):
        return {
            "rho": self.rho,
            "lambda2": self.lambda2,
            "kappa": self.kappa,
            "acc_radius": self.acc_radius if math.isfinite(self.acc_radius) else "inf",
            "singleton": self.singleton,
            "flags": list(self.flags),
        }


class RestartResult(NamedTuple):
    radius: float
    pair: ZEigenpair
    audit: dict


def default_shift(T: SymTensor) -> float:
    """(m-1) * ||T||_F + 1e-6, an upper bound on (m-1) times the Z-spectral radius."""
    return (T.order - 1) * frobenius_norm(T) + SHIFT_MARGIN


def _check_tensor(T):
    if not isinstance(T, SymTensor):
        T = SymTensor(np.asarray(getattr(T, "entries", T)))
    if not T.is_nonnegative():
        raise ValidationError("power method needs a nonnegative tensor")
    return T


def shopm_run(T: SymTensor, x0, cfg: ShopmConfig = ShopmConfig()) -> ShopmTrace:
    """One run of x <- normalize(T x^{m-1} + alpha x), lambda <- T x^m.

    Stops when ||T x^{m-1} - lambda x|| <= cfg.tol or after cfg.max_iter
    updates.  ``lambdas[k]`` is lambda after k updates (``lambdas[0]`` is the
    value at the start point).
    """
    T = _check_tensor(T)
    x0 = np.asarray(x0, dtype=np.float64)
    if x0.shape != (T.dim,):
        raise ValidationError(f"start vector must have shape ({T.dim},)")
    if not np.all(x0 > 0):
        raise ValidationError("start vector must be strictly positive")
    x0 = x0 / np.linalg.norm(x0)
    alpha = default_shift(T) if cfg.alpha is None else float(cfg.alpha)
    lambdas = np.empty(cfg.max_iter + 1)
    x, lam, res, it, conv = _kernels.shopm_loop(
        np.ascontiguousarray(T.flat), T.dim, T.order, x0, alpha, cfg.tol, cfg.max_iter, lambdas
    )
    return ShopmTrace(lambdas[: it + 1].copy(), ZEigenpair(float(lam), np.asarray(x), float(res)),
                      int(it), bool(conv), alpha)


def random_start(n: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform point on the sphere folded into the open positive orthant."""
    while True:
        x = np.abs(rng.standard_normal(n))
        if np.all(x > 0):
            return x / np.linalg.norm(x)


def restart_radius(T: SymTensor, N: int = DEFAULT_RESTARTS, cfg: ShopmConfig = ShopmConfig(),
                   trace: bool = False, max_rounds: int = MAX_ROUNDS) -> RestartResult:
    """Z-spectral radius by randomized restarts with rescaling.

    One run gives lambda_0 and the tensor is divided by it.  Each round then
    runs N fresh random starts on the rescaled tensor; mu is the largest
    limit.  If mu <= 1 + 1e-10 no start improved on the current value and the
    product of all scale factors is returned; otherwise the tensor is divided
    by mu and another round follows.
    """
    T = _check_tensor(T)
    if N < 1:
        raise ValidationError("need at least one restart")
    rng = np.random.default_rng(cfg.seed)
    alpha0 = default_shift(T) if cfg.alpha is None else float(cfg.alpha)
    flags = []
    if alpha0 < default_shift(T) - SHIFT_MARGIN:
        flags.append("shift below guaranteed bound")
    if T.dim <= IRREDUCIBILITY_CHECK_MAX_DIM and not is_irreducible(T):
        flags.append("reducible input: restarts may stop below the radius")
    zero_tol = 1e-12 * max(1.0, frobenius_norm(T))

    def run(tensor, scale, x0):
        c = ShopmConfig(alpha=alpha0 / scale, tol=cfg.tol / scale, max_iter=cfg.max_iter,
                        seed=cfg.seed)
        return shopm_run(tensor, x0, c)

    first = run(T, 1.0, random_start(T.dim, rng))
    lam0 = first.final.lam
    if lam0 <= zero_tol:
        raise CapabilityError(
            f"rescaling undefined: first run returned eigenvalue {lam0:.3e}; "
            "the tensor is probably reducible"
        )
    lambdas = [lam0]
    scale = lam0
    best_x = first.final.x
    rounds = []
    at_max = []
    traces = [first.to_dict()] if trace else None
    terminated = False
    for _ in range(max_rounds):
        A = SymTensor(T.entries / scale)
        runs = [run(A, scale, random_start(T.dim, rng)) for _ in range(N)]
        limits = [r.final.lam for r in runs]
        k = int(np.argmax(limits))
        mu = limits[k]
        rounds.append({
            "scale": scale,
            "mu": mu,
            "limits": [v * scale for v in limits],
            "converged": [r.converged for r in runs],
            "iterations": [r.iterations for r in runs],
        })
        if trace:
            traces.extend(r.to_dict() for r in runs)
        if mu <= 1.0 + MU_TOL:
            at_max = [r.final.x for r in runs if r.final.lam >= 1.0 - 1e-9]
            if mu < 1.0 - MU_TOL:
                rounds[-1]["note"] = "no start reached the current value"
            terminated = True
            break
        if mu <= zero_tol / scale:
            raise CapabilityError("rescaling undefined: a round returned a zero eigenvalue")
        lambdas.append(mu)
        scale *= mu
        best_x = runs[k].final.x
    if not terminated:
        flags.append("did not telescope")
        warnings.warn(f"restart loop did not terminate in {max_rounds} rounds", RuntimeWarning,
                      stacklevel=2)
    radius = float(np.prod(lambdas))
    x = np.asarray(best_x)
    maximizers = []
    for v in [x] + at_max:
        if not any(np.linalg.norm(v - w) <= 1e-6 for w in maximizers):
            maximizers.append(np.asarray(v))
    maximizers.sort(key=lambda v: tuple(-np.round(v, 8)))
    pair = ZEigenpair(contract_full(T, x), x, residual(T, contract_full(T, x), x))
    audit = {
        "alpha": alpha0,
        "restarts": N,
        "seed": cfg.seed,
        "lambdas": lambdas,
        "first_run": {"lambda": lam0, "converged": first.converged, "iterations": first.iterations},
        "rounds": rounds,
        "flags": flags,
        "maximizers": [[float(c) for c in v] for v in maximizers],
    }
    if trace:
        audit["traces"] = traces
    return RestartResult(radius, pair, audit)


def all_limits(audit: dict) -> list:
    """Every per-start limit in the audit, in the original scale."""
    out = [audit["first_run"]["lambda"]]
    for r in audit["rounds"]:
        out.extend(r["limits"])
    return out


def gap_estimate(sp, T: SymTensor, distinct_tol: float = 1e-9) -> GapEstimate:
    """Half-gap kappa between the radius and the next nonnegative eigenvalue,
    and the radius kappa / (m ||T||_F) of the start cap around the radius
    eigenvector inside which the power method must reach the radius."""
    values = sp.eigenvalues() if hasattr(sp, "eigenvalues") else list(sp)
    if not values:
        raise ValidationError("gap estimate needs a nonempty spectrum")
    distinct = []
    for v in sorted(values, reverse=True):
        if not distinct or distinct[-1] - v > distinct_tol:
            distinct.append(float(v))
    rho = distinct[0]
    if len(distinct) == 1:
        return GapEstimate(rho, 0.0, rho / 2.0, math.inf, True, ["singleton spectrum: any start works"])
    lam2 = distinct[1]
    kappa = (rho - lam2) / 2.0
    fro = frobenius_norm(T)
    acc = kappa / (T.order * fro) if fro > 0 else math.inf
    return GapEstimate(rho, lam2, kappa, acc)
