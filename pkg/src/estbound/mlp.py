"""Dense relu networks as estimators: forward pass, interval forward pass,
serialization, and a small full-batch trainer for building fixtures.

The interval forward pass propagates one interval per neuron through each
affine layer using the outward-rounded elementary operations, then applies
the exact relu image. This is the plainest possible bound propagation; it
gets looser as networks grow deeper, which is acceptable here because the
validation method only needs soundness, not tightness.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .framework import EstimatorModel, Vector
from .interval import Interval, IntervalBox, _mul_scalar, iadd, irelu

__all__ = ["MlpLayer", "MlpModel", "load_mlp", "save_mlp", "train_mlp"]

_ACTIVATIONS = ("relu", "linear")


@dataclass(frozen=True)
class MlpLayer:
    """One dense layer: weights are row-major (rows x cols), one row per
    output neuron."""

    weights: tuple[tuple[float, ...], ...]
    bias: tuple[float, ...]
    activation: str

    def __post_init__(self) -> None:
        if self.activation not in _ACTIVATIONS:
            raise ValueError(
                f"activation must be one of {_ACTIVATIONS}, got {self.activation!r}"
            )
        if not self.weights:
            raise ValueError("layer has no weight rows")
        cols = len(self.weights[0])
        if cols == 0:
            raise ValueError("layer has zero-width weight rows")
        for row in self.weights:
            if len(row) != cols:
                raise ValueError("weight rows have inconsistent lengths")
            for w in row:
                if not math.isfinite(w):
                    raise ValueError(f"non-finite weight: {w!r}")
        if len(self.bias) != len(self.weights):
            raise ValueError(
                f"bias length {len(self.bias)} != weight rows {len(self.weights)}"
            )
        for b in self.bias:
            if not math.isfinite(b):
                raise ValueError(f"non-finite bias: {b!r}")

    @property
    def rows(self) -> int:
        return len(self.weights)

    @property
    def cols(self) -> int:
        return len(self.weights[0])


class MlpModel(EstimatorModel):
    """Feed-forward dense network acting as an estimator."""

    def __init__(self, layers: Sequence[MlpLayer], meta: dict | None = None) -> None:
        layers = tuple(layers)
        if not layers:
            raise ValueError("model must have at least one layer")
        for i in range(1, len(layers)):
            if layers[i].cols != layers[i - 1].rows:
                raise ValueError(
                    f"layer {i} expects {layers[i].cols} inputs but layer "
                    f"{i - 1} produces {layers[i - 1].rows}"
                )
        self.layers = layers
        self.meta = dict(meta or {})
        self.n_obs = layers[0].cols
        self.n_params = layers[-1].rows
        self._bias_ivs: tuple[tuple[Interval, ...], ...] | None = None

    def eval_point(self, y: Sequence[float]) -> Vector:
        self._check_point(y)
        values = [float(v) for v in y]
        for layer in self.layers:
            out = []
            for row, b in zip(layer.weights, layer.bias):
                acc = 0.0
                for w, v in zip(row, values):
                    acc += w * v
                acc += b
                if layer.activation == "relu" and acc < 0.0:
                    acc = 0.0
                out.append(acc)
            values = out
        return tuple(values)

    def eval_box(self, box: IntervalBox) -> IntervalBox:
        self._check_box(box)
        if self._bias_ivs is None:
            self._bias_ivs = tuple(
                tuple(Interval.point(b) for b in layer.bias)
                for layer in self.layers
            )
        values = list(box.components)
        for layer, bias_ivs in zip(self.layers, self._bias_ivs):
            out = []
            relu = layer.activation == "relu"
            for row, b_iv in zip(layer.weights, bias_ivs):
                acc = _mul_scalar(row[0], values[0])
                for w, v in zip(row[1:], values[1:]):
                    acc = iadd(acc, _mul_scalar(w, v))
                acc = iadd(acc, b_iv)
                if relu:
                    acc = irelu(acc)
                out.append(acc)
            values = out
        return IntervalBox(values)


def save_mlp(model: MlpModel, path: str | Path) -> None:
    """Write the model as JSON; floats keep full round-trip precision."""
    doc = {
        "layers": [
            {
                "weights": [list(row) for row in layer.weights],
                "bias": list(layer.bias),
                "activation": layer.activation,
            }
            for layer in model.layers
        ],
        "meta": model.meta,
    }
    Path(path).write_text(json.dumps(doc, indent=1) + "\n")


def load_mlp(path: str | Path) -> MlpModel:
    """Load a model saved by save_mlp; errors name the offending layer."""
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ValueError(f"cannot read weight file {path}: {exc}") from exc
    if not isinstance(doc, dict) or "layers" not in doc:
        raise ValueError(f"weight file {path} has no 'layers' entry")
    layers = []
    for i, spec in enumerate(doc["layers"]):
        try:
            layers.append(
                MlpLayer(
                    weights=tuple(tuple(float(w) for w in row) for row in spec["weights"]),
                    bias=tuple(float(b) for b in spec["bias"]),
                    activation=spec.get("activation", "relu"),
                )
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"weight file {path}, layer {i}: {exc}") from exc
    try:
        return MlpModel(layers, meta=doc.get("meta"))
    except ValueError as exc:
        raise ValueError(f"weight file {path}: {exc}") from exc


def train_mlp(
    data: Sequence[tuple[Sequence[float], Sequence[float]]],
    sizes: Sequence[int],
    epochs: int,
    rate: float,
    seed: int,
    output_activation: str = "relu",
) -> MlpModel:
    """Full-batch gradient descent on mean squared error.

    sizes lists the layer widths input-first, e.g. (3, 32, 32, 2). Hidden
    layers use relu; the output layer uses output_activation. The relu
    subgradient at 0 is taken as 0. Deterministic for a fixed seed.
    """
    if not data:
        raise ValueError("training data is empty")
    if epochs < 1:
        raise ValueError(f"epochs must be >= 1, got {epochs}")
    if len(sizes) < 2:
        raise ValueError("sizes must list at least input and output widths")
    if output_activation not in _ACTIVATIONS:
        raise ValueError(f"unknown output activation {output_activation!r}")

    inputs = np.asarray([row[0] for row in data], dtype=np.float64)
    targets = np.asarray([row[1] for row in data], dtype=np.float64)
    if inputs.shape[1] != sizes[0]:
        raise ValueError(
            f"inputs have dim {inputs.shape[1]}, sizes[0] is {sizes[0]}"
        )
    if targets.shape[1] != sizes[-1]:
        raise ValueError(
            f"targets have dim {targets.shape[1]}, sizes[-1] is {sizes[-1]}"
        )

    rng = np.random.default_rng(seed)
    n_layers = len(sizes) - 1
    weights = []
    biases = []
    for i in range(n_layers):
        fan_in, fan_out = sizes[i], sizes[i + 1]
        limit = math.sqrt(6.0 / (fan_in + fan_out))
        weights.append(rng.uniform(-limit, limit, size=(fan_out, fan_in)))
        biases.append(np.zeros(fan_out))
    activations = ["relu"] * (n_layers - 1) + [output_activation]

    n_samples = inputs.shape[0]
    first_loss = None
    loss = None
    # divergence is detected via the finite-loss check, not warnings
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(epochs):
            # forward
            acts = [inputs]
            pre = []
            h = inputs
            for W, b, act in zip(weights, biases, activations):
                z = h @ W.T + b
                pre.append(z)
                h = np.maximum(z, 0.0) if act == "relu" else z
                acts.append(h)
            err = h - targets
            loss = float(np.mean(err * err))
            if not math.isfinite(loss):
                raise ValueError(
                    f"training diverged (loss {loss!r}); use a smaller rate"
                )
            if first_loss is None:
                first_loss = loss
            # backward
            grad = 2.0 * err / (n_samples * targets.shape[1])
            for i in range(n_layers - 1, -1, -1):
                if activations[i] == "relu":
                    grad = grad * (pre[i] > 0.0)
                gw = grad.T @ acts[i]
                gb = grad.sum(axis=0)
                grad = grad @ weights[i]
                weights[i] = weights[i] - rate * gw
                biases[i] = biases[i] - rate * gb

    if loss is not None and first_loss is not None and loss > first_loss:
        raise ValueError(
            f"training did not improve (loss {first_loss:.6g} -> {loss:.6g}); "
            "use a smaller rate"
        )

    layers = [
        MlpLayer(
            weights=tuple(tuple(float(w) for w in row) for row in W),
            bias=tuple(float(b) for b in bv),
            activation=act,
        )
        for W, bv, act in zip(weights, biases, activations)
    ]
    return MlpModel(layers, meta={"seed": seed})
