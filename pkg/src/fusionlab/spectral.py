"""Kazhdan constants of the regular representation for SU_q(2) and SO_q(3):
closed forms, per-generator spectral bounds and truncated-operator estimates."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eig_banded

from .fusion import FusionModel
from .models import SOModel, SUModel, o_plus_q, so_param_from_N
from .qarith import qnum

__all__ = [
    "chebyshev_p",
    "kazhdan_closed_form",
    "kazhdan_generator_bound",
    "TruncatedRegularOp",
    "truncated_operator",
    "KazhdanResult",
    "truncated_kazhdan_estimate",
    "o_plus_kazhdan",
    "s_plus_kazhdan",
    "so_from_su_embedding",
]


def chebyshev_p(m: int, x: float) -> float:
    """P_m(x) = U_m(x/2): P_0 = 1, P_1 = x, x P_n = P_(n+1) + P_(n-1)."""
    if m < 0:
        raise ValueError("degree must be nonnegative")
    prev, cur = 1.0, float(x)
    if m == 0:
        return prev
    for _ in range(m - 1):
        prev, cur = cur, x * cur - prev
    return cur


def _kind(model) -> str:
    if isinstance(model, SUModel) or model == "su":
        return "su"
    if isinstance(model, SOModel) or model == "so":
        return "so"
    raise ValueError(f"Kazhdan data available for SU and SO only, got {model!r}")


def kazhdan_closed_form(model, q: float) -> float:
    """1 - 2/[2]_q for SU_q(2); 1 - 3/[3]_q for SO_q(3)."""
    n = 2 if _kind(model) == "su" else 3
    return 1 - n / qnum(n, q)


def kazhdan_generator_bound(model, m: int, q: float) -> float:
    """Lower bound from a single generator m: 1 - d_1(m)/d_q(m)."""
    if m < 1:
        raise ValueError("generator index must be at least 1")
    n = m + 1 if _kind(model) == "su" else 2 * m + 1
    return 1 - n / qnum(n, q)


@dataclass
class TruncatedRegularOp:
    """ρ(generator) compressed to span(δ_0, ..., δ_(N-1)), in lower banded
    storage: ``band[k, j]`` is the entry at row j+k, column j."""

    N: int
    generator: int
    band: np.ndarray

    @property
    def bandwidth(self) -> int:
        return self.band.shape[0] - 1

    def dense(self) -> np.ndarray:
        A = np.zeros((self.N, self.N))
        for k in range(self.band.shape[0]):
            idx = np.arange(self.N - k)
            A[idx + k, idx] = self.band[k, : self.N - k]
            A[idx, idx + k] = self.band[k, : self.N - k]
        return A


def truncated_operator(model: FusionModel, m: int, N: int) -> TruncatedRegularOp:
    """Entries N^η_(β, conj m) for labels β, η < N."""
    if N < 1:
        raise ValueError("truncation size must be positive")
    cm = model.conj(m)
    rows = []
    width = 0
    for beta in range(N):
        for eta, mult in model.product(beta, cm).items():
            if eta < N:
                rows.append((eta, beta, mult))
                width = max(width, abs(eta - beta))
    band = np.zeros((width + 1, N))
    for eta, beta, mult in rows:
        if eta >= beta:
            band[eta - beta, beta] = mult
    return TruncatedRegularOp(N, m, band)


@dataclass
class KazhdanResult:
    generators: tuple[int, ...]
    closed_form: float | None
    generator_bounds: dict[int, float]
    estimate: float
    N: int
    trace: list[tuple[int, float]] = field(default_factory=list)
    flagged: bool = False

    def csv_rows(self):
        """(N, estimate, closed_form, gap)."""
        ref = self.closed_form if self.closed_form is not None else max(self.generator_bounds.values())
        for n, est in self.trace:
            yield (n, est, ref, est - ref)


def _estimate(model: FusionModel, m: int, N: int) -> float:
    op = truncated_operator(model, m, N)
    eig = eig_banded(op.band, lower=True, eigvals_only=True, check_finite=False)
    d = model.dim(m)
    # T is symmetric, so its singular values after the shift are |λ - d|.
    return float(np.min(np.abs(eig - d)) / d)


def truncated_kazhdan_estimate(model: FusionModel, m: int = 1, N: int = 2000, *, trace_start: int = 16) -> KazhdanResult:
    """min_k |λ_k(T) - d(m)| / d(m) for the N x N truncation T of ρ(m),
    with a trace over doubling sizes up to N."""
    if N < 10:
        raise ValueError("truncation size must be at least 10")
    kind = _kind(model)
    q = model.q
    sizes = []
    n = min(trace_start, N)
    while n < N:
        sizes.append(n)
        n *= 2
    sizes.append(N)
    trace = [(n, _estimate(model, m, n)) for n in sizes]
    bound = kazhdan_generator_bound(kind, m, q)
    closed = kazhdan_closed_form(kind, q) if m == 1 else None
    est = trace[-1][1]
    return KazhdanResult(
        generators=(m,),
        closed_form=closed,
        generator_bounds={m: bound},
        estimate=est,
        N=N,
        trace=trace,
        flagged=est > bound + 0.1,
    )


def so_from_su_embedding(m: int, q: float, N: int) -> np.ndarray:
    """SO truncation rebuilt from SU: ρ(2m) of SU_q(2) restricted to even labels.

    SO_q(3) sits inside SU_q(2) as the even spins, so this matrix must equal
    ``truncated_operator(SOModel(q), m, N).dense()``.
    """
    full = truncated_operator(SUModel(q), 2 * m, 2 * N - 1).dense()
    return full[::2, ::2]


def o_plus_kazhdan(N: int) -> float:
    """Kazhdan constant of the regular representation of O_N+ (N >= 3)."""
    return kazhdan_closed_form("su", o_plus_q(N))


def s_plus_kazhdan(N: int) -> float:
    """Kazhdan constant of the regular representation of S_N+ (N >= 4)."""
    return kazhdan_closed_form("so", so_param_from_N(N))
