import numpy as np
import pytest

from blockring.circuit import CircuitTemplate, Gate, GateKind

# filled by test_acceptance; printed once at the end of the session
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def random_template(rng: np.random.Generator, n: int, n_gates: int) -> CircuitTemplate:
    """A valid template with randomly chosen gate kinds and qubits."""
    kinds = list(GateKind) if n > 1 else [GateKind.RX, GateKind.RY, GateKind.RZ]
    gates = []
    for i in range(n_gates):
        kind = kinds[rng.integers(len(kinds))]
        if kind.is_controlled:
            c, t = rng.choice(n, size=2, replace=False)
            gates.append(Gate(kind, int(t), int(c), i))
        else:
            gates.append(Gate(kind, int(rng.integers(n)), None, i))
    return CircuitTemplate(n, tuple(gates), n_gates)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
