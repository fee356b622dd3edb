"""JSON representations of matrices, states, channels, codes, and reports.

All loaders raise ParseError with a pointed message; they never let raw
KeyError/TypeError escape.  Dumpers emit plain dicts ready for json.dumps.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .channels import QuantumChannel
from .codes import ConvolutionalCode, CyclicCode
from .entropy import EntropyValue
from .errors import ParseError
from .operators import DensityOperator


def matrix_to_json(matrix: np.ndarray) -> dict:
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ParseError(f"expected a square matrix, got shape {m.shape}")
    return {
        "dim": int(m.shape[0]),
        "re": m.real.tolist(),
        "im": m.imag.tolist(),
    }


def matrix_from_json(obj) -> np.ndarray:
    if not isinstance(obj, dict):
        raise ParseError(f"matrix literal must be an object, got {type(obj).__name__}")
    try:
        dim = int(obj["dim"])
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj["im"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed matrix literal: {exc}") from exc
    if re.shape != (dim, dim) or im.shape != (dim, dim):
        raise ParseError(
            f"matrix parts must be {dim}x{dim}; got re{re.shape}, im{im.shape}"
        )
    return re + 1j * im


def density_from_json(obj) -> DensityOperator:
    return DensityOperator(matrix_from_json(obj))


def entropy_to_json(entropy: EntropyValue) -> dict:
    value = entropy.value
    return {
        "value": "inf" if math.isinf(value) else value,
        "base": entropy.base,
    }


def entropy_from_json(obj) -> EntropyValue:
    if not isinstance(obj, dict) or "value" not in obj or "base" not in obj:
        raise ParseError("entropy literal needs 'value' and 'base'")
    base = obj["base"]
    if base not in ("2", "e"):
        raise ParseError(f"entropy base must be '2' or 'e', got {base!r}")
    raw = obj["value"]
    value = math.inf if raw == "inf" else float(raw)
    if value == math.inf:
        return EntropyValue(value=math.inf, base=base)
    nats = value * (math.log(2.0) if base == "2" else 1.0)
    return EntropyValue.from_nats(nats).in_base(base)


def channel_to_json(channel: QuantumChannel) -> dict:
    return channel.describe()


_CHANNEL_KINDS = (
    "identity",
    "depolarizing",
    "constant",
    "phase_damping",
    "classical_stochastic",
    "kraus",
    "isometry",
)


def channel_from_json(obj) -> QuantumChannel:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ParseError("channel spec needs a 'kind' field")
    kind = obj["kind"]
    if kind not in _CHANNEL_KINDS:
        raise ParseError(
            f"unknown channel kind {kind!r}; expected one of {_CHANNEL_KINDS}"
        )
    try:
        if kind == "identity":
            return QuantumChannel.identity(int(obj["dim"]))
        if kind == "depolarizing":
            return QuantumChannel.depolarizing(int(obj["dim"]), float(obj["p"]))
        if kind == "constant":
            target = density_from_json(obj["target"])
            input_dim = int(obj.get("input_dim", target.dim))
            return QuantumChannel.constant(target, input_dim)
        if kind == "phase_damping":
            return QuantumChannel.phase_damping(int(obj["dim"]), float(obj["p"]))
        if kind == "classical_stochastic":
            transition = np.asarray(obj["transition"], dtype=float)
            return QuantumChannel.classical_stochastic(transition)
        if kind == "kraus":
            operators = [matrix_from_json(op) for op in obj["operators"]]
            return QuantumChannel.from_kraus(operators)
        isometry = matrix_from_json(obj["matrix"])
        return QuantumChannel.from_isometry(isometry, int(obj["noise_dim"]))
    except ParseError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed {kind!r} channel spec: {exc}") from exc


def code_to_json(code) -> dict:
    return code.describe()


def code_from_json(obj):
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ParseError("code spec needs a 'kind' field")
    kind = obj["kind"]
    try:
        if kind == "cyclic":
            return CyclicCode(
                n=int(obj["n"]),
                k=int(obj["k"]),
                generator=tuple(int(c) for c in obj["generator"]),
            )
        if kind == "conv":
            rate = obj.get("rate", "1/2")
            if rate != "1/2":
                raise ParseError(f"only rate 1/2 is supported, got {rate!r}")
            return ConvolutionalCode(taps=tuple(int(t) for t in obj["taps"]))
    except ParseError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed {kind!r} code spec: {exc}") from exc
    raise ParseError(f"unknown code kind {kind!r}; expected 'cyclic' or 'conv'")


def load_json(path: str):
    try:
        with open(path, encoding="utf-8") as handle:
            return json.load(handle)
    except FileNotFoundError as exc:
        raise ParseError(f"file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}") from exc


def load_density(path: str) -> DensityOperator:
    return density_from_json(load_json(path))


def load_channel(path: str) -> QuantumChannel:
    return channel_from_json(load_json(path))


def load_code(path: str):
    return code_from_json(load_json(path))
