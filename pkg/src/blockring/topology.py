"""Circuit builders for the line, ring, stride-ring, all-to-all and Block-Ring topologies.

Every builder wraps its entangling gates in the same rotation skeleton::

    Rx column, Rz column, <entangling gates>, Rx column, Rz column

so two templates over the same ``n`` differ only in their connectivity. Each
gate gets its own parameter, numbered in emission order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from .circuit import CircuitMeta, CircuitTemplate, Gate, GateKind, repeat_layers

Edge = tuple[int, int]

SUITE_STRIDE = 3


def _entangler(kind: GateKind | str) -> GateKind:
    kind = GateKind(kind)
    if not kind.is_controlled:
        raise ValueError(f"entangler must be crx or crz, got {kind.value}")
    return kind


def _assemble(n: int, edges: Iterable[Edge], entangler: GateKind, meta: CircuitMeta) -> CircuitTemplate:
    gates: list[Gate] = []

    def rotations() -> None:
        for kind in (GateKind.RX, GateKind.RZ):
            for q in range(n):
                gates.append(Gate(kind, q, None, len(gates)))

    rotations()
    for c, t in edges:
        gates.append(Gate(entangler, t, c, len(gates)))
    rotations()
    return CircuitTemplate(n, tuple(gates), len(gates), meta)


@dataclass(frozen=True)
class BlockLayout:
    m: int
    blocks: tuple[tuple[int, ...], ...]

    @property
    def t(self) -> int:
        return len(self.blocks)


def block_layout(n: int, m: int) -> BlockLayout:
    """Split qubits ``0..n-1`` into ``n/m`` consecutive blocks of ``m`` qubits."""
    if not 1 <= m <= n:
        raise ValueError(f"block size must satisfy 1 <= m <= n, got m={m}, n={n}")
    if n % m:
        raise ValueError("m must divide n")
    return BlockLayout(m, tuple(tuple(range(m * i, m * (i + 1))) for i in range(n // m)))


def line_edges(n: int) -> list[Edge]:
    return [(i, i + 1) for i in range(n - 1)]


def ring_edges(n: int, stride: int = 1) -> list[Edge]:
    return [(i, (i + stride) % n) for i in range(n)]


def all_to_all_edges(qubits: Iterable[int]) -> list[Edge]:
    qubits = list(qubits)
    return [(c, t) for c in qubits for t in qubits if c != t]


def block_ring_edges(n: int, m: int) -> list[Edge]:
    """Entangling edges of the Block-Ring topology, in construction order.

    Forward links join qubit ``j`` of block ``i`` to qubit ``j`` of block
    ``i + 1``; then each block is fully connected; then the last block links
    back to the first. With a single block there is no ring to close, so the
    wrap links (which would be self-edges) are omitted.
    """
    layout = block_layout(n, m)
    t = layout.t
    edges: list[Edge] = []
    for i in range(t - 1):
        edges.extend((m * i + j, m * (i + 1) + j) for j in range(m))
    for block in layout.blocks:
        edges.extend(all_to_all_edges(block))
    if t >= 2:
        edges.extend((n - m + j, j) for j in range(m))
    return edges


def build_line(n: int, entangler: GateKind | str = GateKind.CRX) -> CircuitTemplate:
    if n < 2:
        raise ValueError("need two qubits")
    ent = _entangler(entangler)
    return _assemble(n, line_edges(n), ent, CircuitMeta("line", None, 1, ent))


def build_ring(n: int, entangler: GateKind | str = GateKind.CRX) -> CircuitTemplate:
    if n < 3:
        raise ValueError("ring needs at least three qubits (two qubits would repeat an edge)")
    ent = _entangler(entangler)
    return _assemble(n, ring_edges(n), ent, CircuitMeta("ring", None, 1, ent))


def build_ring_stride(n: int, k: int, entangler: GateKind | str = GateKind.CRX) -> CircuitTemplate:
    """A ring followed by a second cycle whose edges jump ``k`` qubits."""
    if n < 3:
        raise ValueError("ring needs at least three qubits (two qubits would repeat an edge)")
    if k % n == 0:
        raise ValueError("self edge")
    if not 1 <= k < n:
        raise ValueError(f"stride must satisfy 1 <= k < n, got k={k}, n={n}")
    ent = _entangler(entangler)
    edges = ring_edges(n) + ring_edges(n, k)
    return _assemble(n, edges, ent, CircuitMeta("ring-stride", None, 1, ent, stride=k))


def build_all_to_all(n: int, entangler: GateKind | str = GateKind.CRX) -> CircuitTemplate:
    if n < 2:
        raise ValueError("need two qubits")
    ent = _entangler(entangler)
    return _assemble(n, all_to_all_edges(range(n)), ent, CircuitMeta("all-to-all", None, 1, ent))


def build_block_ring(n: int, m: int, entangler: GateKind | str = GateKind.CRX) -> CircuitTemplate:
    if n < 2:
        raise ValueError("need two qubits")
    ent = _entangler(entangler)
    return _assemble(n, block_ring_edges(n, m), ent, CircuitMeta("block-ring", m, 1, ent))


def default_block_size(n: int) -> int:
    """The divisor of ``n`` closest to sqrt(n); ties go to the smaller divisor."""
    root = math.sqrt(n)
    divisors = [d for d in range(1, n + 1) if n % d == 0]
    return min(divisors, key=lambda d: (abs(d - root), d))


TOPOLOGIES = ("line", "ring", "ring-stride", "all-to-all", "block-ring")


def build_topology(
    topology: str,
    n: int,
    entangler: GateKind | str = GateKind.CRX,
    *,
    block_size: int | None = None,
    stride: int = SUITE_STRIDE,
    layers: int = 1,
) -> CircuitTemplate:
    """Dispatch to the named builder and repeat the result ``layers`` times."""
    if topology == "line":
        t = build_line(n, entangler)
    elif topology == "ring":
        t = build_ring(n, entangler)
    elif topology == "ring-stride":
        t = build_ring_stride(n, stride, entangler)
    elif topology == "all-to-all":
        t = build_all_to_all(n, entangler)
    elif topology == "block-ring":
        if block_size is None:
            block_size = default_block_size(n)
        t = build_block_ring(n, block_size, entangler)
    else:
        raise ValueError(f"unknown topology {topology!r}; expected one of {', '.join(TOPOLOGIES)}")
    return repeat_layers(t, layers)


# (topology, entangler) for suite circuits 1..10
SUITE_LAYOUT: tuple[tuple[str, GateKind], ...] = tuple(
    (topo, ent)
    for topo in ("line", "ring", "ring-stride", "all-to-all", "block-ring")
    for ent in (GateKind.CRX, GateKind.CRZ)
)


def build_suite(n: int, block_size: int | None = None, layers: int = 1) -> list[tuple[int, CircuitTemplate]]:
    """The ten comparison circuits: line, ring, stride-3 ring, all-to-all and
    Block-Ring, each with a CRx entangler (odd ids) and a CRz entangler (even ids)."""
    if n < 3:
        raise ValueError("suite needs at least three qubits")
    m = default_block_size(n) if block_size is None else block_size
    return [
        (cid, build_topology(topo, n, ent, block_size=m, stride=SUITE_STRIDE, layers=layers))
        for cid, (topo, ent) in enumerate(SUITE_LAYOUT, start=1)
    ]
