"""Exponential growth rates: estimates from ball tables, the U_F+ rate as the
largest root of a cubic, the product rule and the lower bound from Γ."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .fusion import FusionModel, ProductModel
from .metric import BallTable, build_balls, generating_set
from .qarith import LaurentPoly, QContext, qint_exact, qnum

__all__ = [
    "GrowthEstimate",
    "growth_from_balls",
    "uf_sphere_sizes",
    "uf_sphere_sizes_exact",
    "uf_series_coefficients",
    "CubicSpec",
    "uf_cubic",
    "uf_rate",
    "uf_bounds",
    "ProductGrowthReport",
    "product_growth_check",
    "gamma_lower_bound",
    "growth_closed_form",
]

GUARD_TOLERANCE = 0.05


@dataclass
class GrowthEstimate:
    """Growth-rate estimate with the sequences it was derived from.

    ``ratios[n]`` is |S(n+1)|/|S(n)|.  ``extrapolated`` holds the ratios with
    the 1/n term removed, which is what a polynomial prefactor in |S(n)|
    contributes.
    """

    estimate: float
    method: str
    error: float = 0.0
    ball_roots: list[float] = field(default_factory=list)
    sphere_roots: list[float] = field(default_factory=list)
    ratios: list[float] = field(default_factory=list)
    extrapolated: list[float] = field(default_factory=list)
    guard: float | None = None
    flagged: bool = False
    subexponential: bool = False
    ratio_liminf: float | None = None
    ratio_limsup: float | None = None

    def csv_rows(self, table: BallTable):
        """(n, ball_size, sphere_size, nth_root, ratio)."""
        for n in range(table.depth + 1):
            root = self.ball_roots[n - 1] if n >= 1 and n - 1 < len(self.ball_roots) else None
            ratio = self.ratios[n] if n < len(self.ratios) else None
            yield (n, table.ball_sizes[n], table.sphere_sizes[n], root, ratio)


def growth_from_balls(table: BallTable, k: int = 5) -> GrowthEstimate:
    """ω_X from a ball table.

    The primary estimate is the sphere ratio |S(n+1)|/|S(n)|, taken raw,
    Aitken-accelerated or with a 1/n correction, whichever varies least over
    the last ``k`` steps.  The root (|B(N)|/|B(N/2)|)^(2/N) is a guard; a
    disagreement above 5% sets ``flagged``.
    """
    if table.finite:
        return GrowthEstimate(1.0, "finite")
    N = table.depth
    if N < 10:
        raise ValueError("growth estimate needs depth >= 10")
    Ls, Lb = table.log_sphere_sizes, table.log_ball_sizes
    ratios = [math.exp(Ls[n + 1] - Ls[n]) for n in range(N)]
    sphere_roots = [math.exp(Ls[n] / n) for n in range(1, N + 1)]
    ball_roots = [math.exp(Lb[n] / n) for n in range(1, N + 1)]
    extrap = [n * ratios[n] - (n - 1) * ratios[n - 1] for n in range(1, N)]
    aitken = [_aitken(ratios[n - 2 : n + 1]) for n in range(2, N)]
    # Geometric convergence favours Aitken, a polynomial prefactor favours the
    # 1/n correction; keep whichever sequence has settled best.
    candidates = [
        (_spread(ratios[-k:]), ratios[-1], "ratio"),
        (_spread(aitken[-k:]), aitken[-1], "ratio-aitken"),
        (_spread(extrap[-k:]), extrap[-1], "ratio-1/n"),
    ]
    error, best, method = min(candidates, key=lambda c: c[0])
    raw = ratios[-1]
    half = N // 2
    guard = math.exp((Lb[N] - Lb[half]) / (N - half))
    half_ratios = ratios[half:]
    est = GrowthEstimate(
        estimate=best,
        method=method,
        error=error,
        ball_roots=ball_roots,
        sphere_roots=sphere_roots,
        ratios=ratios,
        extrapolated=extrap,
        guard=guard,
        ratio_liminf=min(half_ratios),
        ratio_limsup=max(half_ratios),
    )
    # A rate within the size of the polynomial correction of 1 is not
    # resolvable from exponential growth; report 1.
    if best - 1 <= max(abs(raw - best), error):
        est.estimate = 1.0
        est.subexponential = True
    est.estimate = max(1.0, est.estimate)
    est.flagged = abs(guard - est.estimate) > GUARD_TOLERANCE * est.estimate
    return est


def _spread(values: Sequence[float]) -> float:
    return max(values) - min(values)


def _aitken(v: Sequence[float]) -> float:
    a, b, c = v
    den = (c - b) - (b - a)
    if den == 0:
        return c
    return c - (c - b) ** 2 / den


# ---------------------------------------------------------------- U_F+


def uf_sphere_sizes(q: float, N: int) -> list[float]:
    """|S(n)| for U_F+ with X = {a, A}, n = 0..N, by summing over block
    compositions: f(n) = sum_k [k+1]^2 f(n-k), |S(n)| = 2 f(n)."""
    if not 0 < q <= 1:
        raise ValueError("q must lie in (0, 1]")
    if N > 200 or N < 0:
        raise ValueError("depth must be in 0..200")
    w = [qnum(k + 1, q) ** 2 for k in range(N + 1)]
    f = [1.0]
    for n in range(1, N + 1):
        f.append(math.fsum(w[k] * f[n - k] for k in range(1, n + 1)))
    return [1.0] + [2 * v for v in f[1:]]


def uf_sphere_sizes_exact(N: int) -> list[LaurentPoly]:
    """Exact |S(n)| as Laurent polynomials in q^(1/2)."""
    w = [None] + [qint_exact(k + 1) ** 2 for k in range(1, N + 1)]
    f = [LaurentPoly.constant(1)]
    for n in range(1, N + 1):
        f.append(sum((w[k] * f[n - k] for k in range(1, n + 1)), LaurentPoly()))
    return [LaurentPoly.constant(1)] + [2 * v for v in f[1:]]


def uf_series_coefficients(N: int) -> list[LaurentPoly]:
    """First N+1 coefficients of (1+w) / (1 - a w + b w^2 - 2 w^3) at w = 0,
    a = 2q^-2 + 3 + 2q^2, b = 2(q^-2 + 1 + q^2).  With w = 1/z this is
    z^2 (1+z) / P_q(z) expanded at infinity."""
    a = LaurentPoly({-4: 2, 0: 3, 4: 2})
    b = LaurentPoly({-4: 2, 0: 2, 4: 2})
    c: list[LaurentPoly] = []
    for n in range(N + 1):
        v = LaurentPoly.constant(1 if n in (0, 1) else 0)
        if n >= 1:
            v = v + a * c[n - 1]
        if n >= 2:
            v = v - b * c[n - 2]
        if n >= 3:
            v = v + 2 * c[n - 3]
        c.append(v)
    return c


@dataclass(frozen=True)
class CubicSpec:
    q: float
    coefficients: tuple[float, float, float, float]
    root: float
    residual: float
    lower: float | None
    upper: float | None
    sandwich_ok: bool | None

    def __call__(self, z: float) -> float:
        c3, c2, c1, c0 = self.coefficients
        return ((c3 * z + c2) * z + c1) * z + c0


def uf_cubic(q: float) -> tuple[float, float, float, float]:
    """Coefficients of z^3 - (2q^-2 + 3 + 2q^2) z^2 + 2(q^-2 + 1 + q^2) z - 2."""
    return (1.0, -(2 / q**2 + 3 + 2 * q**2), 2 * (1 / q**2 + 1 + q**2), -2.0)


def uf_bounds(q: float) -> tuple[float, float | None]:
    """Lower and upper bounds on the U_F+ rate; no finite upper bound at q = 1."""
    lower = 2 / q**2 + 2 + q**2
    if q >= 1:
        return lower, None
    return lower, 2 / q**2 + 2 + q**2 * (3 - 2 * q**2) / (1 - q**2) ** 2


def uf_rate(q: float, tol: float = 1e-12) -> CubicSpec:
    """Largest real root of the U_F+ cubic, by bisection.

    P(1) = -2 and the roots multiply to 2, so exactly one root exceeds 1.
    """
    q = QContext(q).q
    coeffs = uf_cubic(q)
    c3, c2, c1, c0 = coeffs

    def P(z):
        return ((c3 * z + c2) * z + c1) * z + c0

    lower, upper = uf_bounds(q)
    hi = (upper if upper is not None else 1 + max(abs(c2), abs(c1), abs(c0))) + 1
    lo = 1 + 1e-9
    if not (P(lo) < 0 < P(hi)):
        raise ArithmeticError("bisection bracket does not change sign")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if P(mid) < 0:
            lo = mid
        else:
            hi = mid
    r = lo if abs(P(lo)) <= abs(P(hi)) else hi
    ok = lower <= r and (upper is None or r <= upper)
    return CubicSpec(q, coeffs, r, abs(P(r)), lower, upper, ok)


# ---------------------------------------------------------------- products and bounds


@dataclass
class ProductGrowthReport:
    product_estimate: GrowthEstimate
    factor_estimates: tuple[GrowthEstimate, GrowthEstimate]
    expected: float
    rel_error: float

    def within(self, tol: float) -> bool:
        return self.rel_error <= tol


def product_growth_check(m1: FusionModel, X1: Sequence, m2: FusionModel, X2: Sequence, depth: int = 40) -> ProductGrowthReport:
    """Compare the product algebra's rate against the larger factor rate."""
    pm = ProductModel(m1, m2)
    e1, e2 = m1.unit(), m2.unit()
    X = generating_set(pm, [(x, e2) for x in X1] + [(e1, y) for y in X2])
    est = growth_from_balls(build_balls(pm, X, depth))
    f1 = growth_from_balls(build_balls(m1, X1, depth))
    f2 = growth_from_balls(build_balls(m2, X2, depth))
    expected = max(f1.estimate, f2.estimate)
    return ProductGrowthReport(est, (f1, f2), expected, abs(est.estimate - expected) / expected)


def gamma_lower_bound(gammas: Sequence[float]) -> float:
    """C^2 with C the smallest Γ value above 1, or 1 when there is none."""
    gammas = list(gammas)
    if not gammas:
        raise ValueError("need at least one Γ value")
    above = [g for g in gammas if g > 1]
    return min(above) ** 2 if above else 1.0


def growth_closed_form(kind: str, q: float) -> float:
    """Uniform growth rate of the representation ring: ``su``, ``so`` or ``uf``."""
    if kind == "su":
        return q**-2
    if kind == "so":
        return q**-4
    if kind == "uf":
        return uf_rate(q).root
    raise ValueError(f"no closed form for {kind!r}")
