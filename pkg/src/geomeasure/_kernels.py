"""Hot loops for symmetric-tensor contraction and the shifted power iteration.

Two interchangeable implementations live here: plain numpy (``*_py``) and
numba-compiled (``*_nb``).  The public names ``contract_once``,
``contract_full`` and ``shopm_loop`` point at the numba versions unless
numba is missing or ``GEOMEASURE_DISABLE_NUMBA`` is set to a truthy value.

All kernels take the tensor as a flat C-ordered float64 array of length n**m.
"""
import os

import numpy as np

_DISABLE = os.environ.get("GEOMEASURE_DISABLE_NUMBA", "").strip().lower() in (
    "1", "true", "yes", "on",
)


def contract_once_py(flat, n, m, x):
    v = flat
    for _ in range(m - 1):
        v = v.reshape(-1, n) @ x
    return v


def contract_full_py(flat, n, m, x):
    return float(contract_once_py(flat, n, m, x) @ x)


def shopm_loop_py(flat, n, m, x0, alpha, tol, max_iter, lambdas):
    x = x0.copy()
    g = contract_once_py(flat, n, m, x)
    lam = float(g @ x)
    lambdas[0] = lam
    res = float(np.linalg.norm(g - lam * x))
    it = 0
    converged = False
    while it < max_iter:
        xh = g + alpha * x
        x = xh / np.linalg.norm(xh)
        g = contract_once_py(flat, n, m, x)
        lam = float(g @ x)
        it += 1
        lambdas[it] = lam
        res = float(np.linalg.norm(g - lam * x))
        if res <= tol:
            converged = True
            break
    return x, lam, res, it, converged


try:
    if _DISABLE:
        raise ImportError("numba disabled by GEOMEASURE_DISABLE_NUMBA")
    from numba import njit
except ImportError:
    HAVE_NUMBA = False
else:
    HAVE_NUMBA = True

    @njit(cache=True)
    def contract_once_nb(flat, n, m, x):
        cur = flat
        length = flat.shape[0]
        for _ in range(m - 1):
            length //= n
            nxt = np.empty(length)
            for a in range(length):
                s = 0.0
                base = a * n
                for b in range(n):
                    s += cur[base + b] * x[b]
                nxt[a] = s
            cur = nxt
        return cur

    @njit(cache=True)
    def contract_full_nb(flat, n, m, x):
        g = contract_once_nb(flat, n, m, x)
        s = 0.0
        for i in range(n):
            s += g[i] * x[i]
        return s

    @njit(cache=True)
    def _residual(g, lam, x):
        s = 0.0
        for i in range(x.shape[0]):
            d = g[i] - lam * x[i]
            s += d * d
        return np.sqrt(s)

    @njit(cache=True)
    def shopm_loop_nb(flat, n, m, x0, alpha, tol, max_iter, lambdas):
        x = x0.copy()
        g = contract_once_nb(flat, n, m, x)
        lam = 0.0
        for i in range(n):
            lam += g[i] * x[i]
        lambdas[0] = lam
        res = _residual(g, lam, x)
        it = 0
        converged = False
        xh = np.empty(n)
        while it < max_iter:
            nrm = 0.0
            for i in range(n):
                xh[i] = g[i] + alpha * x[i]
                nrm += xh[i] * xh[i]
            nrm = np.sqrt(nrm)
            for i in range(n):
                x[i] = xh[i] / nrm
            g = contract_once_nb(flat, n, m, x)
            lam = 0.0
            for i in range(n):
                lam += g[i] * x[i]
            it += 1
            lambdas[it] = lam
            res = _residual(g, lam, x)
            if res <= tol:
                converged = True
                break
        return x, lam, res, it, converged


if HAVE_NUMBA:
    contract_once = contract_once_nb
    contract_full = contract_full_nb
    shopm_loop = shopm_loop_nb
else:
    contract_once = contract_once_py
    contract_full = contract_full_py
    shopm_loop = shopm_loop_py

USING_NUMBA = HAVE_NUMBA
