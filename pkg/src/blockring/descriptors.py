"""Expressibility and entangling capability of parameterized circuits.

Expressibility is the KL divergence (in nats) between the histogram of
fidelities ``|<psi_theta|psi_phi>|^2`` over random parameter pairs and the
fidelity law of Haar-random states, ``P(F) = (N - 1)(1 - F)^(N - 2)`` with
``N = 2**n``. Lower is more expressive.

Entangling capability is the mean Meyer-Wallach ``Q`` over random parameter
vectors.

Sampling is deterministic: parameter ``p`` of sample ``i`` is a hash of
``(seed, repeat, stream, i, p)`` (see :mod:`blockring.sampling`). The theta
stream feeding the expressibility pairs is the same stream entangling
capability draws from, so :func:`describe` can compute both from one set of
simulations and still match the standalone functions bit for bit.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import _kernels
from .circuit import CircuitTemplate, check_valid
from .sampling import PHI, THETA, check_seed, uniform_angles
from .statevector import StateVector, _split, batch_fidelities, compile_template, project_drop, run_batch

DEFAULT_SAMPLES = 20480
DEFAULT_BINS = 75
DEFAULT_CHUNK = 1024


@dataclass(frozen=True)
class SamplingConfig:
    samples: int = DEFAULT_SAMPLES
    bins: int = DEFAULT_BINS
    seed: int = 0
    repeats: int = 1

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError(f"samples must be >= 1, got {self.samples}")
        if self.bins < 2:
            raise ValueError(f"bins must be >= 2, got {self.bins}")
        if self.repeats < 1:
            raise ValueError(f"repeats must be >= 1, got {self.repeats}")
        check_seed(self.seed)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class FidelityHistogram:
    counts: tuple[int, ...]

    @property
    def bins(self) -> int:
        return len(self.counts)

    @property
    def total(self) -> int:
        return sum(self.counts)

    def probabilities(self) -> np.ndarray:
        c = np.asarray(self.counts, dtype=np.float64)
        return c / c.sum()

    def __add__(self, other: "FidelityHistogram") -> "FidelityHistogram":
        if self.bins != other.bins:
            raise ValueError("cannot merge histograms with different bin counts")
        return FidelityHistogram(tuple(a + b for a, b in zip(self.counts, other.counts)))


@dataclass(frozen=True)
class ExprResult:
    kl_nats: float
    histogram: FidelityHistogram
    config: SamplingConfig
    per_repeat: tuple[float, ...] = field(default=())


@dataclass(frozen=True)
class EntResult:
    mean_q: float
    samples: int
    config: SamplingConfig
    per_repeat: tuple[float, ...] = field(default=())


def histogram_fidelities(values, bins: int = DEFAULT_BINS) -> FidelityHistogram:
    """Count values into ``bins`` equal-width bins on [0, 1]; the last bin includes 1."""
    if bins < 2:
        raise ValueError(f"bins must be >= 2, got {bins}")
    v = np.asarray(values, dtype=np.float64).reshape(-1)
    if v.size and (np.any(~np.isfinite(v)) or v.min() < 0.0 or v.max() > 1.0):
        raise ValueError("fidelity values must lie in [0, 1]")
    idx = np.minimum((v * bins).astype(np.int64), bins - 1)
    return FidelityHistogram(tuple(int(c) for c in np.bincount(idx, minlength=bins)))


def haar_bin_mass(n: int, bin_index: int, bins: int = DEFAULT_BINS) -> float:
    """Haar probability of fidelity falling in bin ``bin_index``.

    Integrates ``(N-1)(1-F)^(N-2)`` over ``[lo, hi)``: ``(1-lo)^(N-1) - (1-hi)^(N-1)``.
    """
    if not 0 <= bin_index < bins:
        raise ValueError(f"bin index {bin_index} out of range for {bins} bins")
    k = (1 << n) - 1
    lo, hi = bin_index / bins, (bin_index + 1) / bins
    return (1.0 - lo) ** k - (1.0 - hi) ** k


def haar_bin_masses(n: int, bins: int = DEFAULT_BINS) -> np.ndarray:
    return np.array([haar_bin_mass(n, i, bins) for i in range(bins)])


def haar_log_bin_masses(n: int, bins: int = DEFAULT_BINS) -> np.ndarray:
    """Natural log of each Haar bin mass, accurate where the masses underflow.

    For n >= 7 the upper bins hold less than 1e-308 of the probability, so the
    log is taken analytically:
    ``log q = k log(1-lo) + log(1 - ((1-hi)/(1-lo))^k)`` with ``k = N - 1``.
    """
    k = float((1 << n) - 1)
    edges = np.arange(bins + 1) / bins
    lo, hi = edges[:-1], edges[1:]
    with np.errstate(divide="ignore"):
        log_ratio = np.log1p(-hi) - np.log1p(-lo)   # -inf in the last bin
        tail = np.log(-np.expm1(k * log_ratio))
    return k * np.log1p(-lo) + tail


def kl_divergence_log(p: FidelityHistogram, log_q: np.ndarray) -> float:
    """KL(p || q) in nats given ``log q`` per bin; empty bins of ``p`` contribute 0."""
    if p.total <= 0:
        raise ValueError("histogram is empty")
    log_q = np.asarray(log_q, dtype=np.float64)
    if log_q.shape != (p.bins,):
        raise ValueError(f"baseline has {log_q.shape} bins, histogram has {p.bins}")
    if not np.all(np.isfinite(log_q)):
        raise ValueError("baseline must be positive")
    ph = p.probabilities()
    nz = ph > 0
    kl = float(np.sum(ph[nz] * (np.log(ph[nz]) - log_q[nz])))
    # Gibbs' inequality; tiny negatives are rounding
    return max(kl, 0.0)


def kl_divergence(p: FidelityHistogram, q) -> float:
    q = np.asarray(q, dtype=np.float64)
    if np.any(q <= 0):
        raise ValueError("baseline must be positive")
    if abs(q.sum() - 1.0) > 1e-12:
        raise ValueError(f"baseline must sum to 1, sums to {q.sum()!r}")
    return kl_divergence_log(p, np.log(q))


def generalized_distance(u: np.ndarray, v: np.ndarray) -> float:
    """``D(u, v) = 1/2 sum_{i,j} |u_i v_j - u_j v_i|^2``.

    Evaluated term by term for vectors up to 2048 entries. Longer vectors use
    the equivalent closed form ``|u|^2 |v|^2 - |<u|v>|^2`` (Lagrange's identity),
    since the double sum needs ``len(u)**2`` memory.
    """
    u = np.asarray(u, dtype=np.complex128).reshape(-1)
    v = np.asarray(v, dtype=np.complex128).reshape(-1)
    if u.shape != v.shape:
        raise ValueError("vectors must have equal length")
    if u.shape[0] <= 2048:
        wedge = np.outer(u, v) - np.outer(v, u)
        return 0.5 * float(np.sum(wedge.real ** 2 + wedge.imag ** 2))
    return _distance_closed_form(u[None, :], v[None, :])[0]


def _distance_closed_form(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    uu = np.sum(u.real ** 2 + u.imag ** 2, axis=-1)
    vv = np.sum(v.real ** 2 + v.imag ** 2, axis=-1)
    uv = np.sum(u.conj() * v, axis=-1)
    return uu * vv - (uv.real ** 2 + uv.imag ** 2)


def mw_q(state: StateVector) -> float:
    """Meyer-Wallach entanglement of a pure state, in [0, 1]."""
    if state.n < 2:
        raise ValueError("MW undefined for single qubit")
    total = sum(
        generalized_distance(project_drop(state, j, 0), project_drop(state, j, 1))
        for j in range(state.n)
    )
    return min(max(4.0 * total / state.n, 0.0), 1.0)


def mw_q_batch(states: np.ndarray, n: int) -> np.ndarray:
    """Meyer-Wallach ``Q`` for each row of a ``(batch, 2**n)`` array.

    Uses the closed form of the generalized distance, evaluated in one compiled
    pass per state.
    """
    if n < 2:
        raise ValueError("MW undefined for single qubit")
    states = np.ascontiguousarray(states, dtype=np.complex128)
    if states.ndim != 2 or states.shape[1] != 1 << n:
        raise ValueError(f"states must have shape (batch, {1 << n}), got {states.shape}")
    return np.clip(4.0 * _kernels.mw_distance_sums(states, n) / n, 0.0, 1.0)


def _chunks(samples: int, size: int):
    return [(s, min(s + size, samples)) for s in range(0, samples, size)]


def _evaluate_chunk(args):
    template, compiled, seed, repeat, start, stop, want_fid, want_q = args
    P = template.param_count
    theta = run_batch(template, uniform_angles(seed, repeat, THETA, start, stop, P), compiled)
    fids = qs = None
    if want_fid:
        phi = run_batch(template, uniform_angles(seed, repeat, PHI, start, stop, P), compiled)
        fids = batch_fidelities(theta, phi)
    if want_q:
        qs = mw_q_batch(theta, template.n)
    return fids, qs


def _sample(template: CircuitTemplate, config: SamplingConfig, repeat: int, *, want_fid: bool, want_q: bool,
            workers: int = 1, chunk_size: int = DEFAULT_CHUNK):
    check_valid(template)
    compiled = compile_template(template)
    jobs = [
        (template, compiled, config.seed, repeat, a, b, want_fid, want_q)
        for a, b in _chunks(config.samples, chunk_size)
    ]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_evaluate_chunk, jobs))
    else:
        parts = [_evaluate_chunk(job) for job in jobs]
    # chunks are reassembled in sample order, so reductions see one fixed ordering
    fids = np.concatenate([p[0] for p in parts]) if want_fid else None
    qs = np.concatenate([p[1] for p in parts]) if want_q else None
    return fids, qs


def sample_fidelities(template: CircuitTemplate, config: SamplingConfig, *, repeat: int = 0,
                      workers: int = 1, chunk_size: int = DEFAULT_CHUNK) -> np.ndarray:
    """Fidelities between the states of ``config.samples`` independent parameter pairs."""
    fids, _ = _sample(template, config, repeat, want_fid=True, want_q=False,
                      workers=workers, chunk_size=chunk_size)
    return fids


def _has_entanglers(template: CircuitTemplate) -> bool:
    return any(g.kind.is_controlled for g in template.gates)


def describe(template: CircuitTemplate, config: SamplingConfig, *, workers: int = 1,
             chunk_size: int = DEFAULT_CHUNK) -> tuple[ExprResult, EntResult]:
    """Expressibility and entangling capability from one shared set of simulations."""
    return _describe(template, config, True, template.n >= 2, workers, chunk_size)


def _describe(template, config, want_expr, want_ent, workers, chunk_size):
    log_q = haar_log_bin_masses(template.n, config.bins)
    product_only = not _has_entanglers(template)
    kls, hists, ents = [], [], []
    for r in range(config.repeats):
        # circuits without two-qubit gates only make product states, whose Q is
        # exactly zero; the numeric route would only contribute rounding noise
        need_q = want_ent and not product_only
        fids, qs = _sample(template, config, r, want_fid=want_expr, want_q=need_q,
                           workers=workers, chunk_size=chunk_size)
        if want_expr:
            h = histogram_fidelities(fids, config.bins)
            hists.append(h)
            kls.append(kl_divergence_log(h, log_q))
        if want_ent:
            ents.append(float(np.mean(qs)) if need_q else 0.0)

    expr = ent = None
    if want_expr:
        pooled = hists[0]
        for h in hists[1:]:
            pooled = pooled + h
        expr = ExprResult(float(np.mean(kls)), pooled, config, tuple(kls))
    if want_ent:
        ent = EntResult(float(np.mean(ents)), config.samples * config.repeats, config, tuple(ents))
    return expr, ent


def expressibility(template: CircuitTemplate, config: SamplingConfig | None = None, *, workers: int = 1,
                   chunk_size: int = DEFAULT_CHUNK) -> ExprResult:
    """KL divergence from the Haar fidelity law; averaged over ``config.repeats``."""
    config = config or SamplingConfig()
    return _describe(template, config, True, False, workers, chunk_size)[0]


def entangling_capability(template: CircuitTemplate, config: SamplingConfig | None = None, *, workers: int = 1,
                          chunk_size: int = DEFAULT_CHUNK) -> EntResult:
    config = config or SamplingConfig()
    if template.n < 2:
        raise ValueError("MW undefined for single qubit")
    return _describe(template, config, False, True, workers, chunk_size)[1]


def haar_random_states(n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """``count`` Haar-random pure states: normalized complex Gaussian vectors."""
    N = 1 << n
    z = rng.standard_normal((count, N)) + 1j * rng.standard_normal((count, N))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def haar_expressibility(n: int, samples: int = DEFAULT_SAMPLES, bins: int = DEFAULT_BINS, seed: int = 0) -> float:
    """KL of Haar-vs-Haar fidelity samples against the closed-form law (should be ~0)."""
    rng = np.random.default_rng(seed)
    a = haar_random_states(n, samples, rng)
    b = haar_random_states(n, samples, rng)
    return kl_divergence_log(histogram_fidelities(batch_fidelities(a, b), bins), haar_log_bin_masses(n, bins))


__all__ = [
    "SamplingConfig", "FidelityHistogram", "ExprResult", "EntResult",
    "histogram_fidelities", "haar_bin_mass", "haar_bin_masses", "haar_log_bin_masses",
    "kl_divergence", "kl_divergence_log", "generalized_distance", "mw_q", "mw_q_batch",
    "sample_fidelities", "describe", "expressibility", "entangling_capability",
    "haar_random_states", "haar_expressibility",
]
