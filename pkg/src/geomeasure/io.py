"""JSON readers and writers for tensors and states.

Both formats list nonzero entries sparsely with 1-based indices:

    {"order": 3, "dims": [2, 2, 2], "entries": [{"idx": [1, 1, 2], "value": "1/3"}],
     "symmetrize": true}
    {"dims": [2, 2, 2], "amplitudes": [{"idx": [1, 1, 2], "value": 0.577}], "label": "W"}

Values may be numbers or fraction strings such as "1/3".
"""
from __future__ import annotations

import itertools
import json
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import ValidationError
from .tensor_core import GenTensor, SymTensor


def parse_number(v) -> float:
    """Float from a JSON number or an exact decimal/fraction literal."""
    if isinstance(v, bool):
        raise ValidationError(f"expected a number, got {v!r}")
    if isinstance(v, (int, float)):
        return float(v)
    if isinstance(v, str):
        try:
            return float(Fraction(v.strip()))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"cannot parse number {v!r}") from exc
    raise ValidationError(f"expected a number, got {v!r}")


def read_json(source):
    """Accept a path, a JSON string, or an already-parsed dict."""
    if isinstance(source, dict):
        return source
    if isinstance(source, Path) or (isinstance(source, str) and not source.lstrip().startswith("{")):
        try:
            text = Path(source).read_text()
        except OSError as exc:
            raise ValidationError(f"cannot read {source}: {exc}") from exc
    else:
        text = source
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"invalid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise ValidationError("top-level JSON value must be an object")
    return obj


def _dims(obj):
    dims = obj.get("dims")
    if not isinstance(dims, list) or not dims or not all(isinstance(d, int) and d >= 1 for d in dims):
        raise ValidationError("'dims' must be a nonempty list of positive integers")
    return tuple(dims)


def _fill(dims, entries, symmetrize=False, key="entries"):
    if not isinstance(entries, list):
        raise ValidationError(f"'{key}' must be a list of {{idx, value}} objects")
    a = np.zeros(dims)
    seen = {}
    for e in entries:
        if not isinstance(e, dict) or "idx" not in e or "value" not in e:
            raise ValidationError(f"each item of '{key}' needs 'idx' and 'value'")
        idx = e["idx"]
        if not isinstance(idx, list) or len(idx) != len(dims):
            raise ValidationError(f"index {idx!r} must have {len(dims)} components")
        for k, (i, d) in enumerate(zip(idx, dims)):
            if not isinstance(i, int) or not 1 <= i <= d:
                raise ValidationError(f"index {idx!r} out of range in mode {k + 1} (1..{d})")
        val = parse_number(e["value"])
        z = tuple(i - 1 for i in idx)
        targets = set(itertools.permutations(z)) if symmetrize else {z}
        for t in targets:
            if t in seen and seen[t] != val:
                raise ValidationError(f"conflicting values for index {[i + 1 for i in t]}")
            seen[t] = val
            a[t] = val
    return a


def load_tensor(source):
    """SymTensor when the entries are permutation invariant on a cubical shape, else GenTensor."""
    obj = read_json(source)
    dims = _dims(obj)
    order = obj.get("order", len(dims))
    if order != len(dims):
        raise ValidationError(f"'order' is {order} but 'dims' has {len(dims)} entries")
    sym = bool(obj.get("symmetrize", False))
    if sym and len(set(dims)) != 1:
        raise ValidationError("'symmetrize' requires equal dims")
    a = _fill(dims, obj.get("entries", []), sym)
    if len(dims) >= 2 and len(set(dims)) == 1 and dims[0] >= 2:
        try:
            return SymTensor(a)
        except ValidationError:
            if sym:
                raise
    return GenTensor(a)


def _sparse(a):
    return [{"idx": [int(i) + 1 for i in z], "value": float(a[z])} for z in zip(*np.nonzero(a))]


def tensor_to_json(T) -> dict:
    a = np.asarray(T.entries)
    return {"order": a.ndim, "dims": list(a.shape), "entries": _sparse(a)}


def load_state_array(source):
    """(dims, amplitudes, label) without the normalization checks of PureState."""
    obj = read_json(source)
    dims = _dims(obj)
    return dims, _fill(dims, obj.get("amplitudes", []), key="amplitudes"), str(obj.get("label", ""))


def load_state(source):
    from .states import PureState

    dims, amp, label = load_state_array(source)
    return PureState(dims, amp, label)


def state_to_json(s) -> dict:
    return {"dims": list(s.dims), "amplitudes": _sparse(s.amplitudes), "label": s.label}


def looks_like_state(obj: dict) -> bool:
    return "amplitudes" in obj
