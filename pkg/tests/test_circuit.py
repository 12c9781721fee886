import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from blockring.circuit import (
    CircuitTemplate,
    Gate,
    GateKind,
    bind_parameters,
    repeat_layers,
    strip_entanglers,
    validate,
)
from blockring.topology import build_block_ring, build_line, build_ring

from conftest import random_template


def test_empty_circuit_is_valid():
    assert validate(CircuitTemplate(1, (), 0)) == []


def test_self_controlled_gate_reported():
    t = CircuitTemplate(2, (Gate(GateKind.CRX, 1, 1, 0),), 1)
    problems = validate(t)
    assert [p.gate_index for p in problems] == [0]
    assert "self-controlled gate" in problems[0].message


def test_parameter_reuse_reported():
    t = CircuitTemplate(2, (Gate(GateKind.RX, 0, None, 0), Gate(GateKind.RZ, 1, None, 0)), 2)
    messages = [str(p) for p in validate(t)]
    assert any("gate 1" in m and "parameter reused" in m for m in messages)


@pytest.mark.parametrize(
    "gate, fragment",
    [
        (Gate(GateKind.RX, 3, None, 0), "target 3 out of range"),
        (Gate(GateKind.CRZ, 0, 5, 0), "control 5 out of range"),
        (Gate(GateKind.CRX, 0, None, 0), "without control"),
        (Gate(GateKind.RY, 0, 1, 0), "with a control"),
        (Gate(GateKind.RZ, 0, None, 4), "param_index 4 out of range"),
    ],
)
def test_single_violations(gate, fragment):
    problems = validate(CircuitTemplate(3, (gate,), 1))
    assert any(fragment in p.message for p in problems), problems


def test_every_violation_reported_with_index():
    gates = (
        Gate(GateKind.CRX, 0, 0, 0),
        Gate(GateKind.RX, 9, None, 1),
        Gate(GateKind.RZ, 1, None, 1),
    )
    idx = {p.gate_index for p in validate(CircuitTemplate(2, gates, 3))}
    assert {0, 1, 2} <= idx
    assert None in idx  # parameter 2 never used


def test_repeat_one_is_identity():
    t = build_ring(4)
    r = repeat_layers(t, 1)
    assert r.gates == t.gates and r.param_count == t.param_count


def test_repeat_zero_layers():
    with pytest.raises(ValueError, match="zero layers"):
        repeat_layers(build_line(3), 0)


def test_repeat_block_ring_parameter_count():
    t = build_block_ring(9, 3)
    assert t.param_count == 63
    assert repeat_layers(t, 2).param_count == 126


def test_repeat_fresh_parameter_indices():
    gates = tuple(Gate(GateKind.RX, q % 2, None, q) for q in range(5))
    r = repeat_layers(CircuitTemplate(2, gates, 5), 3)
    assert len(r) == 15
    for c in range(3):
        for k in range(5):
            assert r.gates[c * 5 + k].param_index == c * 5 + k
    assert r.meta.layers == 3


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 5), size=st.integers(0, 12),
       a=st.integers(1, 4), b=st.integers(1, 4))
def test_repeat_composes_and_stays_valid(seed, n, size, a, b):
    t = random_template(np.random.default_rng(seed), n, size)
    assert repeat_layers(t, a * b).gates == repeat_layers(repeat_layers(t, a), b).gates
    assert validate(repeat_layers(t, a * b)) == []


def test_strip_entanglers_keeps_rotations_dense():
    t = strip_entanglers(build_block_ring(6, 3))
    assert all(not g.kind.is_controlled for g in t.gates)
    assert t.param_count == 24 and validate(t) == []


def test_bind_parameters_checks_length_and_finiteness():
    t = build_line(2)
    assert bind_parameters(t, np.zeros(t.param_count)).dtype == np.float64
    with pytest.raises(ValueError, match="mismatch"):
        bind_parameters(t, [0.0])
    bad = np.zeros(t.param_count)
    bad[0] = np.nan
    with pytest.raises(ValueError, match="finite"):
        bind_parameters(t, bad)
