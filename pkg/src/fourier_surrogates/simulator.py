"""Exact statevector simulation of data-reuploading circuits.

The circuit family interleaves trainable rotation blocks with repeated
data-encoding blocks:

    U(x; angles) = W_L . E(x) . W_{L-1} . E(x) ... W_1 . E(x) . W_0

* ``W_l`` applies Rx, Ry, Rz (in that order) on every qubit, using the
  angle triple for block ``l``, followed by the CNOTs of the coupling
  map in list order.  Every W block, including the last, is followed by
  its entanglement layer.
* ``E(x)`` applies Rx(x_f) on every qubit, where ``f`` is the feature
  assigned to that qubit.

Model output is the qubit-averaged Pauli-Z expectation of U(x)|0...0>,
optionally corrupted by binomial shot noise and a global depolarizing
shrink (1 - p) of the observable.

Bit ordering convention: qubit 0 is the most significant bit of the
state index, so for two qubits the basis order is |00>, |01>, |10>,
|11> and bitstring labels read qubit 0 first.

All functions are pure; randomness enters only through explicit seeds.
Batched variants evaluate many input vectors in one vectorized pass and
are the preferred entry points for grid or dataset sampling.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

__all__ = [
    "CircuitConfig",
    "ParameterSet",
    "NoiseConfig",
    "apply_rotation",
    "apply_cnot",
    "run_circuit",
    "run_circuit_batch",
    "expectation",
    "expectation_batch",
    "sample_bitstrings",
]

_AXES = ("x", "y", "z")


def _linear_chain(n_qubits: int) -> tuple[tuple[int, int], ...]:
    return tuple((q, q + 1) for q in range(n_qubits - 1))


@dataclass(frozen=True)
class CircuitConfig:
    """Architecture of a reuploading circuit.

    Parameters
    ----------
    n_qubits : int
        Circuit width.
    n_layers : int
        Number of encoding repetitions L (the circuit holds L+1 trainable
        blocks).
    d_features : int, optional
        Input dimension; defaults to ``n_qubits``.  Must not exceed the
        qubit count.
    coupling_map : sequence of (control, target), optional
        Directed CNOT pairs applied after each trainable block, in list
        order.  Defaults to the linear chain (q, q+1).
    feature_assignment : sequence of int, optional
        Feature index encoded on each qubit; entry q is the feature for
        qubit q.  Defaults to round-robin ``q mod d_features``.
    """

    n_qubits: int
    n_layers: int
    d_features: int | None = None
    coupling_map: tuple[tuple[int, int], ...] | None = None
    feature_assignment: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError("n_qubits must be positive")
        if self.n_layers < 1:
            raise ValueError("n_layers must be positive")
        d = self.n_qubits if self.d_features is None else self.d_features
        if not (1 <= d <= self.n_qubits):
            raise ValueError(f"d_features must be in [1, {self.n_qubits}], got {d}")
        object.__setattr__(self, "d_features", d)
        if self.coupling_map is None:
            object.__setattr__(self, "coupling_map", _linear_chain(self.n_qubits))
        else:
            object.__setattr__(
                self, "coupling_map", tuple((int(c), int(t)) for c, t in self.coupling_map)
            )
        for c, t in self.coupling_map:
            if c == t:
                raise ValueError(f"coupling pair ({c},{t}) has control == target")
            if not (0 <= c < self.n_qubits and 0 <= t < self.n_qubits):
                raise ValueError(f"coupling pair ({c},{t}) out of range")
        if self.feature_assignment is None:
            object.__setattr__(
                self, "feature_assignment", tuple(q % d for q in range(self.n_qubits))
            )
        else:
            object.__setattr__(
                self, "feature_assignment", tuple(int(f) for f in self.feature_assignment)
            )
        fa = self.feature_assignment
        if len(fa) != self.n_qubits:
            raise ValueError("feature_assignment must cover every qubit")
        if any(not (0 <= f < d) for f in fa):
            raise ValueError("feature_assignment entries must lie in [0, d_features)")
        if set(fa) != set(range(d)):
            raise ValueError("every feature must be assigned to at least one qubit")

    def to_json_dict(self) -> dict:
        return {
            "n_qubits": self.n_qubits,
            "n_layers": self.n_layers,
            "d_features": self.d_features,
            "coupling_map": [list(p) for p in self.coupling_map],
            "feature_assignment": list(self.feature_assignment),
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "CircuitConfig":
        return cls(
            n_qubits=int(doc["n_qubits"]),
            n_layers=int(doc["n_layers"]),
            d_features=int(doc["d_features"]),
            coupling_map=tuple((int(c), int(t)) for c, t in doc["coupling_map"]),
            feature_assignment=tuple(int(f) for f in doc["feature_assignment"]),
        )

    def dumps(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)

    @classmethod
    def loads(cls, text: str) -> "CircuitConfig":
        return cls.from_json_dict(json.loads(text))


@dataclass(frozen=True)
class ParameterSet:
    """Trainable angles, shape (n_layers + 1, n_qubits, 3) in radians.

    Index order is (block, qubit, rotation axis x/y/z); block 0 is the
    initial trainable block, block l the one after the l-th encoding.
    """

    angles: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.angles, dtype=float)
        if arr.ndim != 3 or arr.shape[2] != 3:
            raise ValueError(f"angles must have shape (L+1, n_qubits, 3), got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("angles must be finite")
        object.__setattr__(self, "angles", arr)

    def validate_for(self, config: CircuitConfig) -> None:
        expected = (config.n_layers + 1, config.n_qubits, 3)
        if self.angles.shape != expected:
            raise ValueError(
                f"angles shape {self.angles.shape} does not match circuit {expected}"
            )

    @classmethod
    def zeros(cls, config: CircuitConfig) -> "ParameterSet":
        return cls(np.zeros((config.n_layers + 1, config.n_qubits, 3)))

    @classmethod
    def random(cls, config: CircuitConfig, seed: int) -> "ParameterSet":
        rng = np.random.default_rng(seed)
        shape = (config.n_layers + 1, config.n_qubits, 3)
        return cls(rng.uniform(0.0, 2.0 * np.pi, size=shape))

    def to_json_dict(self) -> dict:
        return {"angles": self.angles.tolist()}

    @classmethod
    def from_json_dict(cls, doc: dict) -> "ParameterSet":
        return cls(np.asarray(doc["angles"], dtype=float))


@dataclass(frozen=True)
class NoiseConfig:
    """Measurement-noise knobs for expectation values.

    ``shots`` absent means exact expectations.  ``depolarizing_p``
    shrinks the (traceless) observable's expectation by (1 - p), the
    effect of a global depolarizing channel.
    """

    shots: int | None = None
    depolarizing_p: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.shots is not None and self.shots < 1:
            raise ValueError("shots must be a positive integer or None")
        if not (0.0 <= self.depolarizing_p <= 1.0):
            raise ValueError("depolarizing_p must lie in [0, 1]")


# ---------------------------------------------------------------------------
# gate application on batched states, shape (batch, 2**n)
# ---------------------------------------------------------------------------


def _check_qubit(qubit: int, n: int) -> None:
    if not (0 <= qubit < n):
        raise ValueError(f"qubit {qubit} out of range for {n} qubits")


def _rotate_batch(states: np.ndarray, qubit: int, axis: str, angles) -> np.ndarray:
    """Apply exp(-i*angle*P/2) on one qubit of every row.

    ``angles`` is a scalar (same rotation everywhere) or one angle per row.
    """
    batch, dim = states.shape
    n = dim.bit_length() - 1
    _check_qubit(qubit, n)
    if axis not in _AXES:
        raise ValueError(f"axis must be one of {_AXES}, got {axis!r}")
    theta = np.asarray(angles, dtype=float)
    half = theta / 2.0
    # broadcast per-row angles against the (batch, 2, ..., 2) slices
    if half.ndim == 1:
        half = half.reshape((batch,) + (1,) * (n - 1))
    arr = states.reshape((batch,) + (2,) * n)
    ax = 1 + qubit
    a0 = np.take(arr, 0, axis=ax)
    a1 = np.take(arr, 1, axis=ax)
    if axis == "x":
        c, s = np.cos(half), np.sin(half)
        n0 = c * a0 - 1j * s * a1
        n1 = -1j * s * a0 + c * a1
    elif axis == "y":
        c, s = np.cos(half), np.sin(half)
        n0 = c * a0 - s * a1
        n1 = s * a0 + c * a1
    else:
        phase = np.exp(-1j * half)
        n0 = phase * a0
        n1 = np.conj(phase) * a1
    return np.stack((n0, n1), axis=ax).reshape(batch, dim)


def _cnot_batch(states: np.ndarray, control: int, target: int) -> np.ndarray:
    batch, dim = states.shape
    n = dim.bit_length() - 1
    _check_qubit(control, n)
    _check_qubit(target, n)
    if control == target:
        raise ValueError("control and target must differ")
    arr = states.reshape((batch,) + (2,) * n).copy()
    i10 = [slice(None)] * (n + 1)
    i10[1 + control] = 1
    i11 = list(i10)
    i10[1 + target] = 0
    i11[1 + target] = 1
    i10, i11 = tuple(i10), tuple(i11)
    arr[i10], arr[i11] = arr[i11].copy(), arr[i10].copy()
    return arr.reshape(batch, dim)


def apply_rotation(state: np.ndarray, qubit: int, axis: str, angle: float) -> np.ndarray:
    """Rotate one qubit of a single statevector; returns a new state."""
    state = np.asarray(state, dtype=complex)
    return _rotate_batch(state.reshape(1, -1), qubit, axis, float(angle))[0]

def apply_cnot(state: np.ndarray, control: int, target: int) -> np.ndarray:
    """Apply CNOT to a single statevector; returns a new state."""
    state = np.asarray(state, dtype=complex)
    return _cnot_batch(state.reshape(1, -1), control, target)[0]


# ---------------------------------------------------------------------------
# circuit execution
# ---------------------------------------------------------------------------


def run_circuit_batch(
    config: CircuitConfig, params: ParameterSet, X: np.ndarray
) -> np.ndarray:
    """Run U(x)|0..0> for every row x of X; returns (len(X), 2**n) states."""
    params.validate_for(config)
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.shape[1] != config.d_features:
        raise ValueError(
            f"input dimension {X.shape[1]} does not match d_features {config.d_features}"
        )
    if not np.all(np.isfinite(X)):
        raise ValueError("inputs must be finite")
    batch = X.shape[0]
    n = config.n_qubits
    states = np.zeros((batch, 2**n), dtype=complex)
    states[:, 0] = 1.0

    def w_block(states, block):
        for q in range(n):
            for a, axis in enumerate(_AXES):
                angle = params.angles[block, q, a]
                if angle != 0.0:
                    states = _rotate_batch(states, q, axis, angle)
        for c, t in config.coupling_map:
            states = _cnot_batch(states, c, t)
        return states

    states = w_block(states, 0)
    for layer in range(1, config.n_layers + 1):
        for q in range(n):
            states = _rotate_batch(states, q, "x", X[:, config.feature_assignment[q]])
        states = w_block(states, layer)
    return states


def run_circuit(config: CircuitConfig, params: ParameterSet, x: np.ndarray) -> np.ndarray:
    """Run the circuit on one input vector; returns the final statevector."""
    return run_circuit_batch(config, params, np.asarray(x, dtype=float).reshape(1, -1))[0]


@lru_cache(maxsize=32)
def _mean_z_diagonal(n: int) -> np.ndarray:
    """Diagonal of the qubit-averaged Z observable in the computational basis."""
    idx = np.arange(2**n)
    bits = (idx[:, None] >> np.arange(n - 1, -1, -1)[None, :]) & 1
    return (1.0 - 2.0 * bits).mean(axis=1)


def expectation_batch(
    config: CircuitConfig,
    params: ParameterSet,
    X: np.ndarray,
    noise: NoiseConfig | None = None,
) -> np.ndarray:
    """Qubit-averaged Z expectation for every row of X.

    Without ``noise.shots`` the value is exact; with shots it is the
    empirical mean-Z of a bitstring sample (one independent substream
    per row, derived from ``noise.seed``).  Either way the result is
    scaled by (1 - depolarizing_p).
    """
    noise = noise or NoiseConfig()
    states = run_circuit_batch(config, params, X)
    w = _mean_z_diagonal(config.n_qubits)
    probs = np.abs(states) ** 2
    if noise.shots is None:
        values = probs @ w
    else:
        values = np.empty(len(probs))
        seeds = np.random.SeedSequence(noise.seed).spawn(len(probs))
        for i, (p, ss) in enumerate(zip(probs, seeds)):
            rng = np.random.default_rng(ss)
            counts = rng.multinomial(noise.shots, p / p.sum())
            values[i] = (counts @ w) / noise.shots
    return (1.0 - noise.depolarizing_p) * values


def expectation(
    config: CircuitConfig,
    params: ParameterSet,
    x: np.ndarray,
    noise: NoiseConfig | None = None,
) -> float:
    """Model output f(x) for a single input vector."""
    return float(
        expectation_batch(config, params, np.asarray(x, dtype=float).reshape(1, -1), noise)[0]
    )


def sample_bitstrings(state: np.ndarray, shots: int, seed: int) -> dict[str, int]:
    """Sample measurement outcomes; returns {bitstring: count}, counts > 0.

    Bitstrings read qubit 0 first (most significant bit).  Deterministic
    for a fixed seed.
    """
    if shots < 1:
        raise ValueError("shots must be positive")
    state = np.asarray(state, dtype=complex)
    probs = np.abs(state) ** 2
    total = probs.sum()
    if not np.isclose(total, 1.0, atol=1e-9):
        raise ValueError("state must be normalized")
    rng = np.random.default_rng(seed)
    counts = rng.multinomial(shots, probs / total)
    n = state.shape[0].bit_length() - 1
    return {
        format(i, f"0{n}b"): int(c) for i, c in enumerate(counts) if c > 0
    }
