"""Regenerate random444.json: a fixed nonnegative symmetric 4x4x4 tensor and
its Z-spectral radius from a zooming grid search (no solver code involved).

    python tests/fixtures/make_random444.py
"""
import itertools
import json
from pathlib import Path

import numpy as np


def sym_tensor(seed=444, n=4):
    rng = np.random.default_rng(seed)
    a = rng.random((n, n, n))
    return sum(np.transpose(a, p) for p in itertools.permutations(range(3))) / 6


def sphere_points(theta):
    # hyperspherical coordinates, all angles in [0, pi/2] -> nonnegative orthant
    t1, t2, t3 = theta
    s1, s2 = np.sin(t1), np.sin(t1) * np.sin(t2)
    return np.stack([np.cos(t1), s1 * np.cos(t2), s2 * np.cos(t3), s2 * np.sin(t3)], axis=-1)


def value(T, x):
    return np.einsum("ijk,...i,...j,...k->...", T, x, x, x)


def grid_max(T, res=60, zooms=12):
    lo, hi = np.zeros(3), np.full(3, np.pi / 2)
    best = None
    for _ in range(zooms):
        axes = [np.linspace(l, h, res) for l, h in zip(lo, hi)]
        g = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, 3)
        v = value(T, sphere_points(g.T))
        k = int(np.argmax(v))
        best = (float(v[k]), g[k])
        width = (hi - lo) / (res - 1) * 4
        lo = np.clip(best[1] - width, 0, np.pi / 2)
        hi = np.clip(best[1] + width, 0, np.pi / 2)
    return best[0], sphere_points(best[1]).tolist()


if __name__ == "__main__":
    T = sym_tensor()
    rho, x = grid_max(T)
    n = T.shape[0]
    entries = [{"idx": [i + 1 for i in z], "value": float(T[z])}
               for z in itertools.product(range(n), repeat=3)]
    out = {"order": 3, "dims": [n] * 3, "entries": entries,
           "oracle": {"radius": rho, "x": x, "method": "zooming grid search, 60^3 x 12"}}
    Path(__file__).with_name("random444.json").write_text(json.dumps(out, indent=1) + "\n")
    print(rho, x)
