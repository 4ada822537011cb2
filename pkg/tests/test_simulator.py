"""Simulator tests against an independent dense-matrix oracle."""

import numpy as np
import pytest

from fourier_surrogates import (
    CircuitConfig,
    NoiseConfig,
    ParameterSet,
    apply_cnot,
    apply_rotation,
    expectation,
    expectation_batch,
    run_circuit,
    run_circuit_batch,
    sample_bitstrings,
)

# ---------------------------------------------------------------------------
# oracle: build the circuit unitary from explicit 2x2 matrices and kron
# products, with qubit 0 as the leftmost (most significant) factor
# ---------------------------------------------------------------------------

I2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
P0 = np.array([[1, 0], [0, 0]], dtype=complex)
P1 = np.array([[0, 0], [0, 1]], dtype=complex)


def rot_matrix(axis: str, theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
    if axis == "x":
        return np.array([[c, -1j * s], [-1j * s, c]])
    if axis == "y":
        return np.array([[c, -s], [s, c]])
    return np.array([[np.exp(-1j * theta / 2.0), 0], [0, np.exp(1j * theta / 2.0)]])


def embed(ops: dict, n: int) -> np.ndarray:
    """Kron product over qubits 0..n-1 with identity where no op is given."""
    out = np.array([[1.0 + 0j]])
    for q in range(n):
        out = np.kron(out, ops.get(q, I2))
    return out


def cnot_matrix(control: int, target: int, n: int) -> np.ndarray:
    return embed({control: P0}, n) + embed({control: P1, target: PAULI_X}, n)


def oracle_state(config: CircuitConfig, params: ParameterSet, x: np.ndarray) -> np.ndarray:
    n = config.n_qubits
    state = np.zeros(2**n, dtype=complex)
    state[0] = 1.0

    def w_block(state, block):
        for q in range(n):
            for a, axis in enumerate(("x", "y", "z")):
                state = embed({q: rot_matrix(axis, params.angles[block, q, a])}, n) @ state
        for c, t in config.coupling_map:
            state = cnot_matrix(c, t, n) @ state
        return state

    state = w_block(state, 0)
    for layer in range(1, config.n_layers + 1):
        for q in range(n):
            f = config.feature_assignment[q]
            state = embed({q: rot_matrix("x", x[f])}, n) @ state
        state = w_block(state, layer)
    return state


def oracle_mean_z(state: np.ndarray) -> float:
    n = state.shape[0].bit_length() - 1
    total = 0.0
    for i, amp in enumerate(state):
        bits = [(i >> (n - 1 - q)) & 1 for q in range(n)]
        total += abs(amp) ** 2 * np.mean([1.0 - 2.0 * b for b in bits])
    return float(total)


# ---------------------------------------------------------------------------
# single-gate fixtures
# ---------------------------------------------------------------------------


def test_rx_pi_flips_with_phase():
    out = apply_rotation(np.array([1.0, 0.0]), 0, "x", np.pi)
    np.testing.assert_allclose(out, [0.0, -1.0j], atol=1e-15)


def test_ry_half_pi_makes_plus():
    out = apply_rotation(np.array([1.0, 0.0]), 0, "y", np.pi / 2)
    np.testing.assert_allclose(out, [1 / np.sqrt(2), 1 / np.sqrt(2)], atol=1e-15)


def test_rz_phases_basis_states():
    theta = 0.7
    out = apply_rotation(np.array([1.0, 1.0]) / np.sqrt(2), 0, "z", theta)
    expected = np.array([np.exp(-1j * theta / 2), np.exp(1j * theta / 2)]) / np.sqrt(2)
    np.testing.assert_allclose(out, expected, atol=1e-15)


def test_cnot_msb_convention():
    # qubit 0 is the MSB: |10> is index 2 and must map to |11> = index 3
    state = np.zeros(4)
    state[2] = 1.0
    out = apply_cnot(state, 0, 1)
    np.testing.assert_allclose(out, [0, 0, 0, 1], atol=1e-15)
    # control off: |01> stays put
    state = np.zeros(4)
    state[1] = 1.0
    np.testing.assert_allclose(apply_cnot(state, 0, 1), state, atol=1e-15)


def test_cnot_reverse_direction():
    # control on qubit 1 (LSB): |01> -> |11>
    state = np.zeros(4)
    state[1] = 1.0
    out = apply_cnot(state, 1, 0)
    np.testing.assert_allclose(out, [0, 0, 0, 1], atol=1e-15)


def test_rotation_validates_axis_and_qubit():
    state = np.array([1.0, 0.0])
    with pytest.raises(ValueError):
        apply_rotation(state, 0, "w", 0.1)
    with pytest.raises(ValueError):
        apply_rotation(state, 1, "x", 0.1)
    with pytest.raises(ValueError):
        apply_cnot(np.array([1.0, 0, 0, 0]), 0, 0)


# ---------------------------------------------------------------------------
# full circuits against the dense oracle
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("n_qubits", [1, 2, 3])
@pytest.mark.parametrize("n_layers", [1, 2])
def test_circuit_matches_dense_oracle(n_qubits, n_layers):
    config = CircuitConfig(n_qubits=n_qubits, n_layers=n_layers)
    rng = np.random.default_rng(11 * n_qubits + n_layers)
    for trial in range(3):
        params = ParameterSet.random(config, seed=100 * n_qubits + 10 * n_layers + trial)
        x = rng.uniform(0, 2 * np.pi, size=n_qubits)
        got = run_circuit(config, params, x)
        want = oracle_state(config, params, x)
        np.testing.assert_allclose(got, want, atol=1e-12)
        np.testing.assert_allclose(
            expectation(config, params, x), oracle_mean_z(want), atol=1e-12
        )


def test_circuit_with_custom_wiring_matches_oracle():
    config = CircuitConfig(
        n_qubits=3,
        n_layers=2,
        d_features=2,
        coupling_map=((2, 0), (0, 1)),
        feature_assignment=(1, 0, 1),
    )
    params = ParameterSet.random(config, seed=7)
    x = np.array([0.3, 1.9])
    got = run_circuit(config, params, x)
    want = oracle_state(config, params, x)
    np.testing.assert_allclose(got, want, atol=1e-12)


def test_states_are_normalized():
    config = CircuitConfig(n_qubits=4, n_layers=2)
    params = ParameterSet.random(config, seed=3)
    X = np.random.default_rng(5).uniform(0, 2 * np.pi, size=(6, 4))
    states = run_circuit_batch(config, params, X)
    np.testing.assert_allclose(np.sum(np.abs(states) ** 2, axis=1), 1.0, atol=1e-12)


def test_batch_equals_single_runs():
    config = CircuitConfig(n_qubits=2, n_layers=2)
    params = ParameterSet.random(config, seed=9)
    X = np.random.default_rng(1).uniform(0, 2 * np.pi, size=(5, 2))
    batch = expectation_batch(config, params, X)
    singles = [expectation(config, params, x) for x in X]
    np.testing.assert_allclose(batch, singles, atol=1e-14)


def test_identity_blocks_give_cosine():
    config = CircuitConfig(n_qubits=1, n_layers=1)
    params = ParameterSet.zeros(config)
    xs = np.linspace(0, 2 * np.pi, 17)
    vals = expectation_batch(config, params, xs.reshape(-1, 1))
    np.testing.assert_allclose(vals, np.cos(xs), atol=1e-14)


# ---------------------------------------------------------------------------
# configuration validation
# ---------------------------------------------------------------------------


def test_config_validation():
    with pytest.raises(ValueError):
        CircuitConfig(n_qubits=0, n_layers=1)
    with pytest.raises(ValueError):
        CircuitConfig(n_qubits=2, n_layers=0)
    with pytest.raises(ValueError):
        CircuitConfig(n_qubits=2, n_layers=1, d_features=3)
    with pytest.raises(ValueError):
        CircuitConfig(n_qubits=2, n_layers=1, coupling_map=((0, 0),))
    with pytest.raises(ValueError):
        CircuitConfig(n_qubits=2, n_layers=1, coupling_map=((0, 2),))
    with pytest.raises(ValueError):
        CircuitConfig(n_qubits=2, n_layers=1, feature_assignment=(0,))
    with pytest.raises(ValueError):
        # feature 1 exists but is never assigned
        CircuitConfig(n_qubits=2, n_layers=1, d_features=2, feature_assignment=(0, 0))


def test_config_round_trips_through_json():
    config = CircuitConfig(n_qubits=3, n_layers=2, d_features=2)
    again = CircuitConfig.loads(config.dumps())
    assert again == config


def test_parameter_set_validation():
    config = CircuitConfig(n_qubits=2, n_layers=1)
    with pytest.raises(ValueError):
        ParameterSet(np.zeros((2, 2)))
    with pytest.raises(ValueError):
        ParameterSet(np.full((2, 2, 3), np.nan))
    wrong = ParameterSet(np.zeros((3, 2, 3)))
    with pytest.raises(ValueError):
        wrong.validate_for(config)
    assert ParameterSet.zeros(config).angles.shape == (2, 2, 3)
    p1 = ParameterSet.random(config, seed=4)
    p2 = ParameterSet.random(config, seed=4)
    np.testing.assert_array_equal(p1.angles, p2.angles)


def test_input_validation():
    config = CircuitConfig(n_qubits=2, n_layers=1)
    params = ParameterSet.zeros(config)
    with pytest.raises(ValueError):
        run_circuit_batch(config, params, np.zeros((3, 1)))
    with pytest.raises(ValueError):
        run_circuit_batch(config, params, np.array([[np.inf, 0.0]]))


# ---------------------------------------------------------------------------
# noise model
# ---------------------------------------------------------------------------


def test_depolarizing_shrinks_exact_expectation():
    config = CircuitConfig(n_qubits=2, n_layers=1)
    params = ParameterSet.random(config, seed=2)
    X = np.random.default_rng(0).uniform(0, 2 * np.pi, size=(4, 2))
    clean = expectation_batch(config, params, X)
    noisy = expectation_batch(config, params, X, noise=NoiseConfig(depolarizing_p=0.25))
    np.testing.assert_allclose(noisy, 0.75 * clean, atol=1e-14)


def test_shot_noise_is_seeded_and_unbiased():
    config = CircuitConfig(n_qubits=2, n_layers=1)
    params = ParameterSet.random(config, seed=6)
    X = np.random.default_rng(8).uniform(0, 2 * np.pi, size=(3, 2))
    exact = expectation_batch(config, params, X)
    a = expectation_batch(config, params, X, noise=NoiseConfig(shots=256, seed=1))
    b = expectation_batch(config, params, X, noise=NoiseConfig(shots=256, seed=1))
    np.testing.assert_array_equal(a, b)
    c = expectation_batch(config, params, X, noise=NoiseConfig(shots=256, seed=2))
    assert not np.array_equal(a, c)
    # estimates over many shots concentrate on the exact value
    big = expectation_batch(config, params, X, noise=NoiseConfig(shots=200_000, seed=3))
    np.testing.assert_allclose(big, exact, atol=0.01)


def test_shot_values_are_attainable_averages():
    config = CircuitConfig(n_qubits=1, n_layers=1)
    params = ParameterSet.zeros(config)
    vals = expectation_batch(
        config, params, np.array([[0.8]]), noise=NoiseConfig(shots=100, seed=5)
    )
    # mean over 100 single-qubit +-1 outcomes lands on a multiple of 2/100
    assert abs(vals[0] * 50 - round(vals[0] * 50)) < 1e-12


def test_noise_config_validation():
    with pytest.raises(ValueError):
        NoiseConfig(shots=0)
    with pytest.raises(ValueError):
        NoiseConfig(depolarizing_p=1.5)


def test_sample_bitstrings_counts_and_labels():
    # Rx(pi) on qubit 0 of two: state |10>, MSB-first label "10"
    state = np.zeros(4, dtype=complex)
    state[0] = 1.0
    state = apply_rotation(state, 0, "x", np.pi)
    counts = sample_bitstrings(state, shots=64, seed=0)
    assert counts == {"10": 64}
    with pytest.raises(ValueError):
        sample_bitstrings(state, shots=0, seed=0)
    with pytest.raises(ValueError):
        sample_bitstrings(np.array([1.0, 1.0]), shots=4, seed=0)


def test_sample_bitstrings_distribution():
    state = np.array([1.0, 1.0]) / np.sqrt(2)
    counts = sample_bitstrings(state, shots=10_000, seed=42)
    assert set(counts) == {"0", "1"}
    assert sum(counts.values()) == 10_000
    assert abs(counts["0"] - 5000) < 300
