"""Problem-file loading and CSV/JSON writers."""
from __future__ import annotations

import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import QSLError
from .linalg_core import Generator, eig_hermitian, random_pure_state
from .speed_limits import optimal_state
from .states import PureState

__all__ = [
    "ProblemError",
    "ProblemFile",
    "parse_problem",
    "load_problem",
    "state_from_problem",
    "dump_problem",
    "encode_complex",
    "decode_complex",
    "format_number",
    "write_csv",
]

PROBLEM_FIELDS = {"hbar", "dim", "k", "psi0", "theta_max", "grid_points", "seed"}
HERMITIAN_TOL = 1e-10
RENORMALIZE_TOL = 1e-6


class ProblemError(QSLError):
    """Malformed or invalid problem file."""


def encode_complex(values) -> list:
    arr = np.asarray(values, dtype=complex)
    if arr.ndim == 0:
        return [float(arr.real), float(arr.imag)]
    return [encode_complex(v) for v in arr]


def decode_complex(values, shape: tuple, name: str) -> np.ndarray:
    try:
        arr = np.array(values, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ProblemError(f"{name}: expected nested [re, im] number pairs") from exc
    if arr.shape != shape + (2,):
        raise ProblemError(f"{name}: expected shape {shape + (2,)} of [re, im] pairs, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ProblemError(f"{name}: entries must be finite")
    return arr[..., 0] + 1j * arr[..., 1]


@dataclass(frozen=True, eq=False)
class ProblemFile:
    """A generator with an optional initial state and sweep settings.

    ``psi0`` is an amplitude array, the string ``"optimal"``, or ``None``;
    with ``None`` a ``seed`` selects a random state.
    """

    k: np.ndarray
    psi0: np.ndarray | str | None = None
    hbar: float = 1.0
    theta_max: float | None = None
    grid_points: int = 256
    seed: int | None = None

    @property
    def dim(self) -> int:
        return self.k.shape[0]

    def generator(self) -> Generator:
        return eig_hermitian(self.k)

    def as_dict(self) -> dict:
        out = {"hbar": self.hbar, "dim": self.dim, "k": encode_complex(self.k),
               "grid_points": self.grid_points}
        if isinstance(self.psi0, str):
            out["psi0"] = self.psi0
        elif self.psi0 is not None:
            out["psi0"] = encode_complex(self.psi0)
        if self.theta_max is not None:
            out["theta_max"] = self.theta_max
        if self.seed is not None:
            out["seed"] = self.seed
        return out


def _number(data, key, default=None, positive=True):
    value = data.get(key, default)
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise ProblemError(f"{key}: expected a finite number")
    if positive and value <= 0:
        raise ProblemError(f"{key}: must be positive")
    return value


def parse_problem(data) -> ProblemFile:
    if not isinstance(data, dict):
        raise ProblemError("problem file must contain a JSON object")
    unknown = set(data) - PROBLEM_FIELDS
    if unknown:
        raise ProblemError(f"unknown fields: {sorted(unknown)}")
    if "k" not in data:
        raise ProblemError("missing field: k")
    k_raw = data["k"]
    dim = data.get("dim", len(k_raw) if isinstance(k_raw, list) else 0)
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise ProblemError("dim: expected a positive integer")
    k = decode_complex(k_raw, (dim, dim), "k")
    if np.max(np.abs(k - k.conj().T)) > HERMITIAN_TOL:
        raise ProblemError("k is not Hermitian within 1e-10")
    k = 0.5 * (k + k.conj().T)

    psi0 = data.get("psi0")
    if isinstance(psi0, str):
        if psi0 != "optimal":
            raise ProblemError("psi0: the only accepted string is 'optimal'")
    elif psi0 is not None:
        psi0 = decode_complex(psi0, (dim,), "psi0")
        norm = np.linalg.norm(psi0)
        if abs(norm - 1.0) > RENORMALIZE_TOL:
            raise ProblemError(f"psi0 norm {norm:.8g} is not within 1e-6 of 1")
        if abs(norm - 1.0) > 1e-12:
            psi0 = psi0 / norm

    seed = data.get("seed")
    if seed is not None and (isinstance(seed, bool) or not isinstance(seed, int) or seed < 0):
        raise ProblemError("seed: expected a non-negative integer")
    grid_points = data.get("grid_points", 256)
    if isinstance(grid_points, bool) or not isinstance(grid_points, int) or grid_points < 2:
        raise ProblemError("grid_points: expected an integer >= 2")
    return ProblemFile(
        k=k,
        psi0=psi0,
        hbar=float(_number(data, "hbar", 1.0)),
        theta_max=_number(data, "theta_max"),
        grid_points=grid_points,
        seed=seed,
    )


def load_problem(path) -> ProblemFile:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise ProblemError(f"cannot read {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemError(f"invalid JSON in {path}: {exc}") from exc
    return parse_problem(data)


def dump_problem(problem: ProblemFile, path) -> None:
    Path(path).write_text(json.dumps(problem.as_dict(), indent=2) + "\n", encoding="utf-8")


def state_from_problem(problem: ProblemFile, g: Generator, phi: float = 0.0) -> PureState:
    if isinstance(problem.psi0, str):
        return optimal_state(g, phi)
    if problem.psi0 is not None:
        return PureState.normalized(problem.psi0)
    if problem.seed is not None:
        return random_pure_state(problem.dim, problem.seed)
    raise ProblemError("problem has no psi0; give psi0, 'optimal', or a seed")


def format_number(x) -> str:
    if x is None:
        return ""
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def write_csv(path, header: list, rows: list) -> None:
    """Write rows with 17 significant digits; ``path`` of ``"-"`` means stdout."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([v if isinstance(v, str) else format_number(v) for v in row])
    _emit(path, buf.getvalue())


def write_text(path, text: str) -> None:
    _emit(path, text)


def _emit(path, text: str) -> None:
    if path is None or str(path) == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")
