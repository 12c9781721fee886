"""OpenQASM 2.0 export (and a minimal reader for the subset we emit)."""
from __future__ import annotations

import re
from typing import Sequence

import numpy as np

from .circuit import CircuitTemplate, Gate, GateKind, bind_parameters

HEADER = 'OPENQASM 2.0;\ninclude "qelib1.inc";\n'

_LINE = re.compile(
    r"^(?P<name>rx|ry|rz|crx|crz)\((?P<angle>[^)]+)\)\s+"
    r"(?P<reg>\w+)\[(?P<a>\d+)\](?:\s*,\s*(?P=reg)\[(?P<b>\d+)\])?;$"
)


def export_qasm(template: CircuitTemplate, params: Sequence[float] | np.ndarray, register: str = "q") -> str:
    angles = bind_parameters(template, params)
    lines = [HEADER.rstrip("\n"), f"qreg {register}[{template.n}];"]
    for g in template.gates:
        theta = repr(float(angles[g.param_index]))
        if g.kind.is_controlled:
            lines.append(f"{g.kind.value}({theta}) {register}[{g.control}],{register}[{g.target}];")
        else:
            lines.append(f"{g.kind.value}({theta}) {register}[{g.target}];")
    return "\n".join(lines) + "\n"


def parse_qasm(text: str) -> tuple[int, list[tuple[Gate, float]]]:
    """Read back a program produced by :func:`export_qasm`.

    Returns the register size and ``(gate, angle)`` pairs in program order; the
    gates get sequential parameter indices.
    """
    n = None
    out: list[tuple[Gate, float]] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("//") or line.startswith("OPENQASM") or line.startswith("include"):
            continue
        if line.startswith("qreg"):
            m = re.match(r"qreg\s+\w+\[(\d+)\];", line)
            if m is None:
                raise ValueError(f"bad register declaration: {raw!r}")
            n = int(m.group(1))
            continue
        m = _LINE.match(line)
        if m is None:
            raise ValueError(f"unsupported statement: {raw!r}")
        kind = GateKind(m.group("name"))
        a, b = int(m.group("a")), m.group("b")
        if kind.is_controlled:
            if b is None:
                raise ValueError(f"{kind.value} needs two qubits: {raw!r}")
            gate = Gate(kind, int(b), a, len(out))
        else:
            if b is not None:
                raise ValueError(f"{kind.value} takes one qubit: {raw!r}")
            gate = Gate(kind, a, None, len(out))
        out.append((gate, float(m.group("angle"))))
    if n is None:
        raise ValueError("no qreg declaration")
    return n, out
