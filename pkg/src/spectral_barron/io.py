"""JSON records for grids, spectral functions and reports."""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import GridError, PreconditionError
from .grid import FreqGrid
from .spectral import SpectralFunction

SCHEMA = "1"


def function_to_dict(f: SpectralFunction) -> dict:
    c = f.coeffs.ravel()
    return {
        "schema": SCHEMA,
        "grid": f.grid.to_dict(),
        "coeffs_re": c.real.tolist(),
        "coeffs_im": c.imag.tolist(),
    }


def function_from_dict(d: dict) -> SpectralFunction:
    try:
        grid = FreqGrid.from_dict(d["grid"])
        re = np.asarray(d["coeffs_re"], dtype=float)
        im = np.asarray(d["coeffs_im"], dtype=float)
    except KeyError as exc:
        raise PreconditionError(f"function record missing key {exc}") from None
    if re.shape != im.shape or re.size != grid.size:
        raise GridError(f"function record has {re.size} coefficients, grid needs {grid.size}")
    return SpectralFunction(grid, (re + 1j * im).reshape(grid.shape))


def dumps(obj) -> str:
    """Deterministic JSON text (sorted keys, fixed separators, trailing newline)."""
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False, default=_default) + "\n"


def _default(o):
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, complex):
        return [o.real, o.imag]
    if hasattr(o, "to_dict"):
        return o.to_dict()
    raise TypeError(f"cannot serialize {type(o).__name__}")


def save_function(f: SpectralFunction, path) -> None:
    Path(path).write_text(dumps(function_to_dict(f)))


def load_function(path) -> SpectralFunction:
    p = Path(path)
    if not p.is_file():
        raise PreconditionError(f"function file not found: {p}")
    try:
        return function_from_dict(json.loads(p.read_text()))
    except json.JSONDecodeError as exc:
        raise PreconditionError(f"{p}: invalid JSON ({exc})") from None
