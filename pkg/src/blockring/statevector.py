"""Dense statevector simulation.

Qubit ``j`` is bit ``j`` of the basis-state index (little-endian), so the
amplitude of ``|b_{n-1} ... b_1 b_0>`` sits at ``sum(b_j << j)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _kernels
from .circuit import CircuitTemplate, Gate, GateKind, bind_parameters, check_valid

MAX_QUBITS = 24

_CODES = {
    GateKind.RX: _kernels.RX,
    GateKind.RY: _kernels.RY,
    GateKind.RZ: _kernels.RZ,
    GateKind.CRX: _kernels.CRX,
    GateKind.CRZ: _kernels.CRZ,
}


@dataclass(frozen=True, eq=False)
class StateVector:
    n: int
    amps: np.ndarray

    def __post_init__(self):
        _check_qubits(self.n)
        amps = np.array(self.amps, dtype=np.complex128).reshape(-1)
        if amps.shape[0] != 1 << self.n:
            raise ValueError(f"expected {1 << self.n} amplitudes for {self.n} qubits, got {amps.shape[0]}")
        amps.flags.writeable = False
        object.__setattr__(self, "amps", amps)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def __len__(self) -> int:
        return self.amps.shape[0]


def _check_qubits(n: int) -> None:
    if not 1 <= n <= MAX_QUBITS:
        raise ValueError(f"qubit count must be in [1, {MAX_QUBITS}], got {n}")


def _check_index(j: int, n: int, what: str = "qubit") -> None:
    if not 0 <= j < n:
        raise ValueError(f"{what} index {j} out of range for {n} qubits")


def init_zero(n: int) -> StateVector:
    _check_qubits(n)
    amps = np.zeros(1 << n, dtype=np.complex128)
    amps[0] = 1.0
    return StateVector(n, amps)


def rotation_matrix(kind: GateKind, theta: float) -> np.ndarray:
    """2x2 matrix of exp(-i theta P / 2) for the rotation underlying ``kind``."""
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    base = kind.base
    if base is GateKind.RX:
        return np.array([[c, -1j * s], [-1j * s, c]], dtype=np.complex128)
    if base is GateKind.RY:
        return np.array([[c, -s], [s, c]], dtype=np.complex128)
    return np.array([[c - 1j * s, 0], [0, c + 1j * s]], dtype=np.complex128)


def apply_gate(state: StateVector, gate: Gate, angle: float) -> StateVector:
    n = state.n
    _check_index(gate.target, n, "target")
    if gate.kind.is_controlled:
        if gate.control is None:
            raise ValueError("controlled gate without control")
        _check_index(gate.control, n, "control")
        if gate.control == gate.target:
            raise ValueError("self-controlled gate")

    idx = np.arange(1 << n)
    sel = (idx >> gate.target) & 1 == 0
    if gate.kind.is_controlled:
        sel &= (idx >> gate.control) & 1 == 1
    i0 = idx[sel]
    i1 = i0 | (1 << gate.target)

    u = rotation_matrix(gate.kind, angle)
    amps = state.amps.copy()
    x, y = amps[i0], amps[i1]
    amps[i0] = u[0, 0] * x + u[0, 1] * y
    amps[i1] = u[1, 0] * x + u[1, 1] * y
    return StateVector(n, amps)


def run(template: CircuitTemplate, params: Sequence[float] | np.ndarray) -> StateVector:
    """Apply the template's gates to |0...0> one at a time."""
    check_valid(template)
    angles = bind_parameters(template, params)
    state = init_zero(template.n)
    for g in template.gates:
        state = apply_gate(state, g, angles[g.param_index])
    return state


def compile_template(template: CircuitTemplate) -> tuple[np.ndarray, ...]:
    """Flatten a template into the integer arrays consumed by the compiled kernel."""
    gates = template.gates
    codes = np.array([_CODES[g.kind] for g in gates], dtype=np.int64)
    targets = np.array([g.target for g in gates], dtype=np.int64)
    controls = np.array([-1 if g.control is None else g.control for g in gates], dtype=np.int64)
    pidx = np.array([g.param_index for g in gates], dtype=np.int64)
    return codes, targets, controls, pidx


def run_batch(template: CircuitTemplate, angles: np.ndarray, compiled: tuple[np.ndarray, ...] | None = None) -> np.ndarray:
    """Simulate one state per row of ``angles`` (shape ``(batch, param_count)``).

    Returns a ``(batch, 2**n)`` complex array. Rows are computed independently,
    so a row's amplitudes do not depend on which batch it was computed in.
    """
    _check_qubits(template.n)
    angles = np.ascontiguousarray(angles, dtype=np.float64)
    if angles.ndim != 2 or angles.shape[1] != template.param_count:
        raise ValueError(
            f"angles must have shape (batch, {template.param_count}), got {angles.shape}"
        )
    if compiled is None:
        check_valid(template)
        compiled = compile_template(template)
    return _kernels.simulate_batch(template.n, *compiled, angles)


def fidelity(a: StateVector, b: StateVector) -> float:
    if a.n != b.n:
        raise ValueError(f"size mismatch: {a.n} vs {b.n} qubits")
    f = abs(np.vdot(a.amps, b.amps)) ** 2
    return min(max(float(f), 0.0), 1.0)


def batch_fidelities(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Row-wise |<a_r|b_r>|^2, clamped to [0, 1]."""
    overlaps = np.sum(a.conj() * b, axis=1)
    return np.clip(overlaps.real ** 2 + overlaps.imag ** 2, 0.0, 1.0)


def _split(amps: np.ndarray, n: int, j: int) -> np.ndarray:
    # axis -2 of the result is the value of bit j
    return amps.reshape(amps.shape[:-1] + (1 << (n - j - 1), 2, 1 << j))


def project_drop(state: StateVector, j: int, b: int) -> np.ndarray:
    """Amplitudes with qubit ``j`` fixed to ``b``, re-indexed over the other n-1 qubits.

    The result is not renormalized.
    """
    _check_index(j, state.n)
    if b not in (0, 1):
        raise ValueError(f"b must be 0 or 1, got {b}")
    return _split(state.amps, state.n, j)[:, b, :].reshape(-1).copy()


def reduced_density_matrix(state: StateVector, j: int) -> np.ndarray:
    """Single-qubit marginal of qubit ``j`` by explicit partial trace."""
    _check_index(j, state.n)
    tensor = state.amps.reshape((2,) * state.n)
    # tensor axis 0 is the most significant qubit
    axis = state.n - 1 - j
    mat = np.moveaxis(tensor, axis, 0).reshape(2, -1)
    return mat @ mat.conj().T


def reduced_purity(state: StateVector, j: int) -> float:
    rho = reduced_density_matrix(state, j)
    return float(np.trace(rho @ rho).real)
