from __future__ import annotations

import json
import math
from typing import Any, Mapping


def cjson(z: complex) -> dict:
    z = complex(z)
    return {"re": _num(z.real), "im": _num(z.imag)}


def cfrom(d: Mapping | float) -> complex:
    if isinstance(d, Mapping):
        return complex(float(d["re"]), float(d["im"]))
    return complex(d)


def _num(x: float):
    x = float(x)
    if math.isfinite(x):
        return x
    return str(x)


def _finite(obj: Any) -> Any:
    """Replace non-finite floats by ``None`` so the output stays strict JSON."""
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, Mapping):
        return {k: _finite(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_finite(v) for v in obj]
    return obj


def dumps(obj: Any, indent: int | None = 2) -> str:
    return json.dumps(_finite(obj), indent=indent, sort_keys=True, allow_nan=False)
