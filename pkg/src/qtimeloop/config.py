"""JSON problem descriptions for the command-line front end.

A config names the two forward channels, the backward propagator, exactly
one of the coupler amplitudes, and the input state. Operators may be given
as presets ("zero", "identity", "phase:<radians>", "random-unitary:<seed>")
or as explicit matrices with {re, im} entries, so every worked case is
expressible without writing matrices by hand.
"""

from __future__ import annotations

import cmath
import json
import math

import numpy as np

from .linalg import DIM_CAP, SplitterParams, norm_sq, random_unitary
from .network import FeedbackNetwork


class ConfigError(ValueError):
    """Malformed or inconsistent problem description."""


_ALLOWED_KEYS = {"dim", "g1", "g2", "m", "alpha", "beta", "input_state"}


def load_config(path) -> dict:
    """Read a JSON config file, normalizing read errors to ConfigError."""
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")
    return raw


def parse_config(raw: dict) -> tuple[FeedbackNetwork, np.ndarray]:
    """Validate a config dict and build the network plus input state."""
    unknown = set(raw) - _ALLOWED_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    for key in ("dim", "g1", "g2", "m", "input_state"):
        if key not in raw:
            raise ConfigError(f"config is missing {key!r}")
    dim = raw["dim"]
    if isinstance(dim, bool) or not isinstance(dim, int) or not 1 <= dim <= DIM_CAP:
        raise ConfigError(f"dim must be an integer in [1, {DIM_CAP}]")
    splitter = _parse_splitter(raw)
    g1 = _parse_operator(raw["g1"], dim, "g1")
    g2 = _parse_operator(raw["g2"], dim, "g2")
    m = _parse_operator(raw["m"], dim, "m")
    psi = _parse_state(raw["input_state"], dim)
    if norm_sq(psi) == 0.0:
        raise ConfigError("input_state must have nonzero norm")
    return FeedbackNetwork(g1=g1, g2=g2, m=m, splitter=splitter), psi


def _parse_splitter(raw: dict) -> SplitterParams:
    has_alpha = "alpha" in raw
    has_beta = "beta" in raw
    if has_alpha == has_beta:
        raise ConfigError("give exactly one of alpha or beta")
    key = "alpha" if has_alpha else "beta"
    value = raw[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{key} must be a number")
    value = float(value)
    if not math.isfinite(value) or not 0.0 <= value <= 1.0:
        raise ConfigError(f"{key} must lie in [0, 1]")
    return SplitterParams.from_alpha(value) if has_alpha else SplitterParams.from_beta(value)


def _parse_entry(obj, where: str) -> complex:
    if isinstance(obj, bool):
        raise ConfigError(f"{where}: booleans are not numbers")
    if isinstance(obj, (int, float)):
        return complex(float(obj), 0.0)
    if isinstance(obj, dict):
        extra = set(obj) - {"re", "im"}
        if extra:
            raise ConfigError(f"{where}: unexpected entry keys {sorted(extra)}")
        re = obj.get("re", 0.0)
        im = obj.get("im", 0.0)
        if any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in (re, im)):
            raise ConfigError(f"{where}: re/im must be numbers")
        return complex(float(re), float(im))
    raise ConfigError(f"{where}: expected a number or an {{re, im}} object")


def _parse_operator(spec, dim: int, name: str) -> np.ndarray:
    if isinstance(spec, str):
        return _operator_preset(spec, dim, name)
    if isinstance(spec, list):
        if len(spec) != dim or any(not isinstance(row, list) or len(row) != dim for row in spec):
            raise ConfigError(f"{name}: matrix literal must be {dim}x{dim}")
        out = np.empty((dim, dim), dtype=complex)
        for i, row in enumerate(spec):
            for j, cell in enumerate(row):
                out[i, j] = _parse_entry(cell, f"{name}[{i}][{j}]")
        return out
    raise ConfigError(f"{name}: expected a preset string or a matrix literal")


def _operator_preset(spec: str, dim: int, name: str) -> np.ndarray:
    if spec == "zero":
        return np.zeros((dim, dim), dtype=complex)
    if spec == "identity":
        return np.eye(dim, dtype=complex)
    if spec.startswith("phase:"):
        try:
            angle = float(spec.split(":", 1)[1])
        except ValueError as exc:
            raise ConfigError(f"{name}: bad phase preset {spec!r}") from exc
        if not math.isfinite(angle):
            raise ConfigError(f"{name}: phase angle must be finite")
        return cmath.exp(1j * angle) * np.eye(dim, dtype=complex)
    if spec.startswith("random-unitary:"):
        try:
            seed = int(spec.split(":", 1)[1])
        except ValueError as exc:
            raise ConfigError(f"{name}: bad random-unitary preset {spec!r}") from exc
        return random_unitary(dim, seed)
    raise ConfigError(f"{name}: unknown preset {spec!r}")


def _parse_state(spec, dim: int) -> np.ndarray:
    if isinstance(spec, str):
        if spec.startswith("basis:"):
            try:
                index = int(spec.split(":", 1)[1])
            except ValueError as exc:
                raise ConfigError(f"input_state: bad basis preset {spec!r}") from exc
            if not 0 <= index < dim:
                raise ConfigError(f"input_state: basis index {index} out of range for dim {dim}")
            out = np.zeros(dim, dtype=complex)
            out[index] = 1.0
            return out
        raise ConfigError(f"input_state: unknown preset {spec!r}")
    if isinstance(spec, list):
        if len(spec) != dim:
            raise ConfigError(f"input_state: vector literal must have length {dim}")
        return np.array([_parse_entry(cell, f"input_state[{i}]") for i, cell in enumerate(spec)])
    raise ConfigError("input_state: expected 'basis:<i>' or a vector literal")
