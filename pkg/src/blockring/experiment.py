"""Experiment specs, report rows and their CSV / JSON serialization.

Every report embeds the :class:`ExperimentSpec` that produced it, and
:func:`execute` is a pure function of that spec, so a report can be
regenerated byte for byte from its own header.
"""
from __future__ import annotations

import csv
import io
import json
import logging
from dataclasses import asdict, dataclass, fields

from .circuit import CircuitTemplate, strip_entanglers
from .cost import analytic_cost, measured_cost
from .descriptors import SamplingConfig, describe, entangling_capability, expressibility
from .qasm import export_qasm
from .sampling import THETA, uniform_angles
from .statevector import MAX_QUBITS
from .topology import (
    SUITE_LAYOUT,
    SUITE_STRIDE,
    TOPOLOGIES,
    build_suite,
    build_topology,
    default_block_size,
)

log = logging.getLogger(__name__)

COMMANDS = ("build", "expr", "ent", "suite", "sweep-m")

SUITE_COLUMNS = (
    "circuit_id", "layers", "n", "m", "entangler",
    "params", "gates_2q", "depth", "expr_kl", "ent_q", "seed",
)
SWEEP_COLUMNS = (
    "m", "layers", "n", "entangler",
    "analytic_params", "analytic_gates_2q", "analytic_depth",
    "params", "gates_2q", "depth", "expr_kl", "ent_q", "seed",
)
DESCRIPTOR_COLUMNS = (
    "kind", "topology", "n", "m", "stride", "layers", "entangler",
    "samples", "bins", "seed", "repeats", "value",
)


@dataclass(frozen=True)
class ExperimentSpec:
    command: str
    qubits: int
    topology: str | None = None
    block_size: int | None = None
    stride: int = SUITE_STRIDE
    layers: tuple[int, ...] = (1,)
    entangler: str = "crx"
    samples: int = 20480
    bins: int = 75
    seed: int = 0
    repeats: int = 1
    idle: bool = False
    no_entanglers: bool = False
    format: str = "json"

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(int(x) for x in self.layers))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["layers"] = list(self.layers)
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentSpec":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown spec fields: {sorted(unknown)}")
        return cls(**data)

    @property
    def sampling(self) -> SamplingConfig:
        return SamplingConfig(self.samples, self.bins, self.seed, self.repeats)

    def check(self) -> None:
        """Reject bad specs before any simulation starts."""
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if not 1 <= self.qubits <= MAX_QUBITS:
            raise ValueError(f"--qubits must be in [1, {MAX_QUBITS}], got {self.qubits}")
        if not self.layers or any(L < 1 for L in self.layers):
            raise ValueError("zero layers")
        if self.command != "suite" and len(self.layers) != 1:
            raise ValueError(f"{self.command} takes a single --layers value")
        if self.entangler not in ("crx", "crz"):
            raise ValueError(f"--entangler must be crx or crz, got {self.entangler!r}")
        allowed = ("qasm",) if self.command == "build" else ("csv", "json")
        if self.format not in allowed:
            raise ValueError(f"{self.command} writes {' or '.join(allowed)}, not {self.format!r}")
        self.sampling  # validates samples/bins/seed/repeats
        if self.command in ("build", "expr", "ent") and not self.idle and self.topology not in TOPOLOGIES:
            raise ValueError(f"--topology must be one of {', '.join(TOPOLOGIES)} (or pass --idle)")
        if self.command == "sweep-m":
            inner = [d for d in range(2, self.qubits) if self.qubits % d == 0]
            if len(inner) < 2:
                raise ValueError(f"sweep-m needs n with at least two divisors strictly between 1 and n; {self.qubits} has {inner}")
        # building the templates runs every builder precondition (divisibility, ranges)
        if self.command == "suite":
            for L in self.layers:
                build_suite(self.qubits, self.block_size, L)
        elif self.command in ("build", "expr", "ent"):
            self.template()
        if self.command == "ent" and self.qubits < 2:
            raise ValueError("MW undefined for single qubit")

    def template(self) -> CircuitTemplate:
        if self.idle:
            return CircuitTemplate.empty(self.qubits)
        t = build_topology(
            self.topology, self.qubits, self.entangler,
            block_size=self.block_size, stride=self.stride, layers=self.layers[0],
        )
        return strip_entanglers(t) if self.no_entanglers else t


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def render(spec: ExperimentSpec, columns: tuple[str, ...], rows: list[dict], extra: dict | None = None) -> str:
    if spec.format == "json":
        doc = {"spec": spec.to_dict(), "columns": list(columns), "rows": rows}
        if extra:
            doc.update(extra)
        return json.dumps(doc, indent=2) + "\n"
    buf = io.StringIO()
    buf.write("# spec: " + json.dumps(spec.to_dict(), separators=(",", ":")) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_cell(row[c]) for c in columns])
    return buf.getvalue()


def read_report(text: str) -> tuple[ExperimentSpec, list[dict]]:
    """Parse a CSV or JSON report back into its spec and rows.

    CSV cells come back typed: empty -> None, integers -> int, other numbers -> float.
    """
    if text.lstrip().startswith("{"):
        doc = json.loads(text)
        return ExperimentSpec.from_dict(doc["spec"]), doc["rows"]
    first, _, body = text.partition("\n")
    if not first.startswith("# spec: "):
        raise ValueError("report has no embedded spec")
    spec = ExperimentSpec.from_dict(json.loads(first[len("# spec: "):]))
    rows = []
    for rec in csv.DictReader(io.StringIO(body)):
        rows.append({k: _parse_cell(v) for k, v in rec.items()})
    return spec, rows


def read_spec(text: str) -> ExperimentSpec:
    """Recover the ExperimentSpec embedded in any output this module writes."""
    if text.lstrip().startswith("{"):
        return ExperimentSpec.from_dict(json.loads(text)["spec"])
    for line in text.splitlines():
        for prefix in ("# spec: ", "// spec: "):
            if line.startswith(prefix):
                return ExperimentSpec.from_dict(json.loads(line[len(prefix):]))
    raise ValueError("no embedded spec found")


def _parse_cell(v: str):
    if v == "":
        return None
    for cast in (int, float):
        try:
            return cast(v)
        except ValueError:
            pass
    return v


def run_build(spec: ExperimentSpec) -> str:
    t = spec.template()
    params = uniform_angles(spec.seed, 0, THETA, 0, 1, t.param_count)[0]
    lines = export_qasm(t, params).splitlines(keepends=True)
    comment = "// spec: " + json.dumps(spec.to_dict(), separators=(",", ":")) + "\n"
    # keep the OPENQASM / include header first
    return "".join(lines[:2]) + comment + "".join(lines[2:])


def run_descriptor(spec: ExperimentSpec, workers: int = 1) -> str:
    t = spec.template()
    cfg = spec.sampling
    if spec.command == "expr":
        res = expressibility(t, cfg, workers=workers)
        value, extra = res.kl_nats, {"histogram": list(res.histogram.counts), "per_repeat": list(res.per_repeat)}
    else:
        res = entangling_capability(t, cfg, workers=workers)
        value, extra = res.mean_q, {"per_repeat": list(res.per_repeat)}
    row = {
        "kind": spec.command,
        "topology": "idle" if spec.idle else spec.topology,
        "n": spec.qubits,
        "m": t.meta.block_size,
        "stride": t.meta.stride,
        "layers": spec.layers[0],
        "entangler": None if spec.idle or spec.no_entanglers else spec.entangler,
        "samples": cfg.samples,
        "bins": cfg.bins,
        "seed": cfg.seed,
        "repeats": cfg.repeats,
        "value": value,
    }
    return render(spec, DESCRIPTOR_COLUMNS, [row], extra if spec.format == "json" else None)


def suite_rows(spec: ExperimentSpec, workers: int = 1) -> list[dict]:
    cfg = spec.sampling
    m = spec.block_size or default_block_size(spec.qubits)
    rows = []
    for L in spec.layers:
        for cid, t in build_suite(spec.qubits, m, L):
            log.info("suite circuit %d, %d layer(s): %d gates", cid, L, len(t))
            cost = measured_cost(t)
            expr, ent = describe(t, cfg, workers=workers)
            rows.append({
                "circuit_id": cid,
                "layers": L,
                "n": spec.qubits,
                "m": t.meta.block_size,
                "entangler": SUITE_LAYOUT[cid - 1][1].value,
                "params": cost.params,
                "gates_2q": cost.two_qubit_gates,
                "depth": cost.depth,
                "expr_kl": expr.kl_nats,
                "ent_q": ent.mean_q,
                "seed": cfg.seed,
            })
    return rows


def sweep_rows(spec: ExperimentSpec, workers: int = 1) -> list[dict]:
    cfg = spec.sampling
    n, L = spec.qubits, spec.layers[0]
    rows = []
    for m in [d for d in range(1, n + 1) if n % d == 0]:
        t = build_topology("block-ring", n, spec.entangler, block_size=m, layers=L)
        log.info("sweep m=%d: %d gates", m, len(t))
        a, c = analytic_cost("circuit9", n, m, L), measured_cost(t)
        expr, ent = describe(t, cfg, workers=workers)
        rows.append({
            "m": m, "layers": L, "n": n, "entangler": spec.entangler,
            "analytic_params": a.params, "analytic_gates_2q": a.two_qubit_gates, "analytic_depth": a.depth,
            "params": c.params, "gates_2q": c.two_qubit_gates, "depth": c.depth,
            "expr_kl": expr.kl_nats, "ent_q": ent.mean_q, "seed": cfg.seed,
        })
    return rows


def execute(spec: ExperimentSpec, workers: int = 1) -> str:
    """Run a validated spec and return the complete output document."""
    spec.check()
    if spec.command == "build":
        return run_build(spec)
    if spec.command in ("expr", "ent"):
        return run_descriptor(spec, workers)
    if spec.command == "suite":
        return render(spec, SUITE_COLUMNS, suite_rows(spec, workers))
    return render(spec, SWEEP_COLUMNS, sweep_rows(spec, workers))
