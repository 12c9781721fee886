"""Circuit intermediate representation.

A :class:`CircuitTemplate` is an ordered list of rotation gates, each bound to
its own slot in a flat parameter vector. Templates are immutable; helpers
return new templates.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

TWO_PI = 2.0 * math.pi


class GateKind(str, Enum):
    RX = "rx"
    RY = "ry"
    RZ = "rz"
    CRX = "crx"
    CRZ = "crz"

    @property
    def is_controlled(self) -> bool:
        return self in (GateKind.CRX, GateKind.CRZ)

    @property
    def base(self) -> "GateKind":
        """The single-qubit rotation applied to the target."""
        return {GateKind.CRX: GateKind.RX, GateKind.CRZ: GateKind.RZ}.get(self, self)


ENTANGLERS = (GateKind.CRX, GateKind.CRZ)


@dataclass(frozen=True)
class Gate:
    kind: GateKind
    target: int
    control: int | None = None
    param_index: int = 0

    @property
    def qubits(self) -> tuple[int, ...]:
        if self.control is None:
            return (self.target,)
        return (self.control, self.target)


@dataclass(frozen=True)
class CircuitMeta:
    topology: str = "custom"
    block_size: int | None = None
    layers: int = 1
    entangler: GateKind | None = None
    stride: int | None = None


@dataclass(frozen=True)
class Violation:
    gate_index: int | None
    message: str

    def __str__(self) -> str:
        where = "template" if self.gate_index is None else f"gate {self.gate_index}"
        return f"{where}: {self.message}"


@dataclass(frozen=True)
class CircuitTemplate:
    n: int
    gates: tuple[Gate, ...] = ()
    param_count: int = 0
    meta: CircuitMeta = field(default_factory=CircuitMeta)

    def __post_init__(self):
        # accept any sequence of gates but store a tuple so templates stay hashable
        object.__setattr__(self, "gates", tuple(self.gates))

    @classmethod
    def from_gates(cls, n: int, gates: Iterable[Gate], meta: CircuitMeta | None = None) -> "CircuitTemplate":
        """Build a template whose param_count is inferred from the gate list."""
        gates = tuple(gates)
        count = max((g.param_index for g in gates), default=-1) + 1
        return cls(n, gates, count, meta or CircuitMeta())

    @classmethod
    def empty(cls, n: int) -> "CircuitTemplate":
        return cls(n, (), 0, CircuitMeta(topology="idle"))

    def __len__(self) -> int:
        return len(self.gates)

    @property
    def two_qubit_gates(self) -> tuple[Gate, ...]:
        return tuple(g for g in self.gates if g.kind.is_controlled)

    def edges(self) -> list[tuple[int, int]]:
        """(control, target) pairs of the entangling gates, in emission order."""
        return [(g.control, g.target) for g in self.gates if g.kind.is_controlled]


def validate(template: CircuitTemplate) -> list[Violation]:
    """Check every template invariant; an empty list means the template is valid."""
    out: list[Violation] = []
    n = template.n
    if not isinstance(n, int) or n < 1:
        out.append(Violation(None, f"qubit count must be a positive integer, got {n!r}"))
    if template.param_count < 0:
        out.append(Violation(None, "negative param_count"))

    seen: dict[int, int] = {}
    for i, g in enumerate(template.gates):
        if not isinstance(g.kind, GateKind):
            out.append(Violation(i, f"unknown gate kind {g.kind!r}"))
            continue
        if not 0 <= g.target < n:
            out.append(Violation(i, f"target {g.target} out of range"))
        if g.kind.is_controlled:
            if g.control is None:
                out.append(Violation(i, "controlled gate without control"))
            elif g.control == g.target:
                out.append(Violation(i, "self-controlled gate"))
            elif not 0 <= g.control < n:
                out.append(Violation(i, f"control {g.control} out of range"))
        elif g.control is not None:
            out.append(Violation(i, "single-qubit gate with a control"))

        p = g.param_index
        if not 0 <= p < template.param_count:
            out.append(Violation(i, f"param_index {p} out of range"))
        elif p in seen:
            out.append(Violation(i, f"parameter reused (first used by gate {seen[p]})"))
        else:
            seen[p] = i

    if len(seen) != template.param_count:
        unused = sorted(set(range(template.param_count)) - set(seen))
        if unused:
            out.append(Violation(None, f"parameters never used: {unused[:8]}"))
    return out


def check_valid(template: CircuitTemplate) -> None:
    problems = validate(template)
    if problems:
        raise ValueError("invalid circuit template: " + "; ".join(map(str, problems)))


def repeat_layers(template: CircuitTemplate, layers: int) -> CircuitTemplate:
    """Concatenate ``layers`` copies of the template, each with fresh parameters.

    Gate ``k`` of copy ``c`` gets ``param_index = c * param_count + original``.
    """
    if layers < 1:
        raise ValueError("zero layers" if layers == 0 else f"layers must be >= 1, got {layers}")
    P = template.param_count
    gates = tuple(
        replace(g, param_index=c * P + g.param_index)
        for c in range(layers)
        for g in template.gates
    )
    meta = replace(template.meta, layers=template.meta.layers * layers)
    return CircuitTemplate(template.n, gates, P * layers, meta)


def strip_entanglers(template: CircuitTemplate) -> CircuitTemplate:
    """Drop all two-qubit gates and renumber the remaining parameters densely."""
    kept = [g for g in template.gates if not g.kind.is_controlled]
    order = sorted(range(len(kept)), key=lambda i: kept[i].param_index)
    renumber = {kept[i].param_index: new for new, i in enumerate(order)}
    gates = tuple(replace(g, param_index=renumber[g.param_index]) for g in kept)
    meta = replace(template.meta, entangler=None)
    return CircuitTemplate(template.n, gates, len(gates), meta)


def bind_parameters(template: CircuitTemplate, params: Sequence[float] | np.ndarray) -> np.ndarray:
    """Return ``params`` as a float64 vector after checking it fits the template."""
    arr = np.asarray(params, dtype=np.float64).reshape(-1)
    if arr.shape[0] != template.param_count:
        raise ValueError(
            f"parameter length mismatch: template needs {template.param_count}, got {arr.shape[0]}"
        )
    if not np.all(np.isfinite(arr)):
        raise ValueError("parameters must be finite")
    return arr

