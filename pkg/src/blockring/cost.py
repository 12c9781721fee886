"""Resource cost of circuits: parameter count, two-qubit gate count and depth.

``analytic_cost`` evaluates closed-form costs for the stride ring
(circuit 5), all-to-all (circuit 7) and Block-Ring (circuit 9) circuits.
``measured_cost`` counts a constructed template and schedules it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

from .circuit import CircuitTemplate

Row = Literal["circuit5", "circuit7", "circuit9"]


@dataclass(frozen=True)
class CostReport:
    params: int
    two_qubit_gates: int
    depth: int
    source: Literal["analytic", "measured"]


def _row_name(row) -> str:
    name = str(row).lower().replace(" ", "")
    if name in ("5", "7", "9"):
        name = "circuit" + name
    if name not in ("circuit5", "circuit7", "circuit9"):
        raise ValueError(f"unknown cost row {row!r}; expected circuit5, circuit7 or circuit9")
    return name


def analytic_cost(row: Row | int, n: int, m: int | None = None, layers: int = 1) -> CostReport:
    row = _row_name(row)
    if n < 2:
        raise ValueError("need two qubits")
    if layers < 1:
        raise ValueError("zero layers")
    L = layers
    if row == "circuit5":
        s = n // math.gcd(n, 3)
        return CostReport((3 * n + s) * L, (n + s) * L, (n + 2 + s) * L, "analytic")
    if row == "circuit7":
        return CostReport((n * n + 3 * n) * L, (n * n - n) * L, (n * n - n + 4) * L, "analytic")
    if m is None:
        raise ValueError("circuit9 needs a block size m")
    if not 1 <= m <= n or n % m:
        raise ValueError("m must divide n")
    return CostReport((m + 4) * n * L, m * n * L, (n // m + m * m - m + 4) * L, "analytic")


def asap_depth(template: CircuitTemplate) -> int:
    """Makespan of an as-soon-as-possible schedule of unit-time gates.

    Gates are taken in emission order; each starts one step after the latest
    finish among the qubits it touches.
    """
    finish = [0] * template.n
    for g in template.gates:
        step = 1 + max(finish[q] for q in g.qubits)
        for q in g.qubits:
            finish[q] = step
    return max(finish, default=0)


def measured_cost(template: CircuitTemplate) -> CostReport:
    return CostReport(
        params=template.param_count,
        two_qubit_gates=sum(1 for g in template.gates if g.kind.is_controlled),
        depth=asap_depth(template),
        source="measured",
    )
