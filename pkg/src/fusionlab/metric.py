"""Word length, balls, spheres, boundaries and Følner-ratio scans."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence

from .fusion import FusionModel
from .models import SOModel, SUModel
from .qarith import log_sum_exp

__all__ = [
    "GeneratingSet",
    "generating_set",
    "BallTable",
    "build_balls",
    "boundary",
    "inner_boundary",
    "weight",
    "log_weight",
    "FolnerRow",
    "FolnerScan",
    "folner_scan",
    "CxResult",
    "c_x_constant",
    "folner_closed_form",
]

Label = Hashable


@dataclass(frozen=True)
class GeneratingSet:
    elements: tuple
    symmetric: bool = True

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)


def generating_set(model: FusionModel, elements: Iterable[Label], *, symmetric: bool | None = None) -> GeneratingSet:
    """Canonicalize ``elements``; symmetry is detected unless asserted, and an
    asserted symmetry is checked."""
    elems = model.sorted({model.check_label(x) for x in elements})
    if not elems:
        raise ValueError("generating set must be nonempty")
    closed = {model.conj(x) for x in elems} == set(elems)
    if symmetric and not closed:
        raise ValueError("generating set is not closed under conjugation")
    return GeneratingSet(tuple(elems), closed if symmetric is None else symmetric)


def _as_gen(model, X) -> GeneratingSet:
    return X if isinstance(X, GeneratingSet) else generating_set(model, X)


def weight(model: FusionModel, A: Iterable[Label]) -> float:
    """|A| = sum of d(alpha)^2; inf when it exceeds the double range."""
    lw = log_weight(model, A)
    if lw == -math.inf:
        return 0.0
    if lw > 690:
        return math.exp(lw) if lw < 709 else math.inf
    return math.fsum(model.dim(a) ** 2 for a in A)


def log_weight(model: FusionModel, A: Iterable[Label]) -> float:
    """log |A|, computed without overflow."""
    return log_sum_exp(2 * model.log_dim(a) for a in A)


@dataclass
class BallTable:
    """Spheres S(n) for n = 0..depth with cumulative sizes."""

    model: FusionModel
    generators: GeneratingSet
    spheres: list[list]
    lengths: dict
    sphere_sizes: list[float]
    ball_sizes: list[float]
    log_sphere_sizes: list[float]
    log_ball_sizes: list[float]
    counts: list[int]
    exact_ball_sizes: list | None = None
    exact_sphere_sizes: list | None = None

    @property
    def depth(self) -> int:
        return len(self.spheres) - 1

    @property
    def finite(self) -> bool:
        """True once a sphere came out empty, so the model has no more elements."""
        return any(not s for s in self.spheres[1:])

    def ball(self, n: int) -> set:
        return {a for k in range(min(n, self.depth) + 1) for a in self.spheres[k]}

    def submultiplicativity_violations(self, rel_tol: float = 1e-12) -> list[tuple[int, int]]:
        """Pairs (n, m) with |B(n+m)| > |B(n)| |B(m)|."""
        bad = []
        L = self.log_ball_sizes
        for n in range(self.depth + 1):
            for m in range(n, self.depth + 1 - n):
                if L[n + m] > L[n] + L[m] + rel_tol * max(1.0, abs(L[n + m])):
                    bad.append((n, m))
        return bad


def build_balls(model: FusionModel, X, N: int, *, exact: bool = False) -> BallTable:
    """Breadth-first enumeration of B_X(0), ..., B_X(N)."""
    if not model.enumerable:
        raise NotImplementedError(f"{model.name} cannot be enumerated from a generating set")
    X = _as_gen(model, X)
    if N < 0:
        raise ValueError("radius must be nonnegative")
    if exact and not model.has_exact:
        raise NotImplementedError(f"{model.name} has no exact dimensions")
    e = model.unit()
    spheres = [[e]]
    lengths = {e: 0}
    for n in range(N):
        frontier = set()
        for v in spheres[-1]:
            for x in X:
                for a in model.product(v, x):
                    if a not in lengths:
                        frontier.add(a)
        layer = model.sorted(frontier)
        for a in layer:
            lengths[a] = n + 1
        spheres.append(layer)

    s_sizes, s_logs, b_sizes, b_logs, counts = [], [], [], [], []
    ex_s, ex_b = ([], []) if exact else (None, None)
    total_logs: list[float] = []
    count = 0
    for layer in spheres:
        logs = [2 * model.log_dim(a) for a in layer]
        ls = log_sum_exp(logs)
        s_logs.append(ls)
        total_logs.append(ls)
        b_logs.append(log_sum_exp(total_logs))
        # past 1e300 the sizes come from the log-domain sums
        if ls < 690:
            s_sizes.append(math.fsum(model.dim(a) ** 2 for a in layer))
        else:
            s_sizes.append(math.exp(ls) if ls < 709 else math.inf)
        if b_logs[-1] < 690:
            b_sizes.append((b_sizes[-1] if b_sizes else 0.0) + s_sizes[-1])
        else:
            b_sizes.append(math.exp(b_logs[-1]) if b_logs[-1] < 709 else math.inf)
        count += len(layer)
        counts.append(count)
        if exact:
            es = sum((model.dim_exact(a) ** 2 for a in layer), 0)
            ex_s.append(es)
            ex_b.append((ex_b[-1] if ex_b else 0) + es)
    return BallTable(model, X, spheres, lengths, s_sizes, b_sizes, s_logs, b_logs, counts, ex_b, ex_s)


def inner_boundary(model: FusionModel, X, A: Iterable[Label]) -> set:
    """{alpha in A : supp(alpha x) leaves A for some x in X}."""
    A = set(A)
    X = _as_gen(model, X) if A else ()
    return {a for a in A if any(not set(model.product(a, x)) <= A for x in X)}


def boundary(model: FusionModel, X, A: Iterable[Label]) -> set:
    """Inner boundary together with the outside points alpha whose product with
    some generator meets A.  Outside candidates come from the one-step
    neighbourhood of A under conj(X), which reaches all of them by Frobenius
    reciprocity."""
    A = set(A)
    if not A:
        return set()
    X = _as_gen(model, X)
    out = inner_boundary(model, X, A)
    candidates = set()
    for b in A:
        for x in X:
            candidates.update(model.product(b, model.conj(x)))
    candidates -= A
    for a in candidates:
        if any(not A.isdisjoint(model.product(a, x)) for x in X):
            out.add(a)
    return out


@dataclass(frozen=True)
class FolnerRow:
    descriptor: str
    size: float
    boundary_size: float
    inner_boundary_size: float
    outer_ratio: float
    inner_ratio: float


@dataclass
class FolnerScan:
    strategy: str
    rows: list[FolnerRow] = field(default_factory=list)
    inf_outer: list[float] = field(default_factory=list)
    inf_inner: list[float] = field(default_factory=list)
    extrapolated_outer: float | None = None
    extrapolated_inner: float | None = None

    @property
    def last(self) -> FolnerRow:
        return self.rows[-1]

    @property
    def outer_infimum(self) -> float:
        return self.inf_outer[-1]

    @property
    def inner_infimum(self) -> float:
        return self.inf_inner[-1]

    def csv_rows(self):
        """(radius, size, boundary_size, inner_boundary_size, outer_ratio, inner_ratio)."""
        for k, r in enumerate(self.rows):
            yield (k if self.strategy != "exhaustive" else r.descriptor,
                   r.size, r.boundary_size, r.inner_boundary_size, r.outer_ratio, r.inner_ratio)


def _tail_limit(values: Sequence[float], theta: float | None) -> float | None:
    if len(values) < 3:
        return None
    a, b, c = values[-3:]
    if theta is not None and 0 < theta < 1:
        return (c - theta * b) / (1 - theta)
    den = (c - b) - (b - a)
    if den == 0:
        return c
    return c - (c - b) ** 2 / den


def _convergence_factor(model) -> float | None:
    if isinstance(model, SUModel):
        return model.q**2
    if isinstance(model, SOModel):
        return model.q**4
    return None


def folner_scan(model: FusionModel, X, strategy: str = "balls", maxSteps: int = 20, *, fragment: Sequence[Label] | None = None) -> FolnerScan:
    """Følner ratios |dA|/|A| and |d_inn A|/|A| along a family of finite sets.

    Strategies: ``balls`` uses A = B_X(n) for n <= maxSteps; ``intervals``
    uses A = {0..M} for M <= maxSteps (SU and SO only); ``exhaustive`` runs over
    every nonempty subset of ``fragment`` (at most 20 elements).
    """
    X = _as_gen(model, X)
    scan = FolnerScan(strategy)
    if strategy == "balls":
        table = build_balls(model, X, maxSteps)
        families = ((f"B({n})", table.ball(n)) for n in range(table.depth + 1))
    elif strategy == "intervals":
        if not isinstance(model, (SUModel, SOModel)):
            raise ValueError("interval strategy applies to SU and SO models only")
        families = ((f"0..{M}", set(range(M + 1))) for M in range(maxSteps + 1))
    elif strategy == "exhaustive":
        if fragment is None:
            raise ValueError("exhaustive strategy needs a fragment")
        frag = model.sorted({model.check_label(a) for a in fragment})
        if len(frag) > 20:
            raise ValueError(f"exhaustive search refused: fragment has {len(frag)} > 20 elements")

        def subsets():
            for mask in range(1, 1 << len(frag)):
                A = [frag[k] for k in range(len(frag)) if mask >> k & 1]
                yield "{" + ",".join(model.label_str(a) for a in A) + "}", set(A)

        families = subsets()
    else:
        raise ValueError(f"unknown strategy {strategy!r}")

    for desc, A in families:
        inner = inner_boundary(model, X, A)
        full = boundary(model, X, A)
        size, bs, ibs = weight(model, A), weight(model, full), weight(model, inner)
        if math.isinf(size) or math.isinf(bs):
            la, lb, li = (log_weight(model, S) for S in (A, full, inner))
            ratios = math.exp(lb - la), math.exp(li - la)
        else:
            ratios = bs / size, ibs / size
        row = FolnerRow(desc, size, bs, ibs, *ratios)
        scan.rows.append(row)
        scan.inf_outer.append(min(row.outer_ratio, scan.inf_outer[-1]) if scan.inf_outer else row.outer_ratio)
        scan.inf_inner.append(min(row.inner_ratio, scan.inf_inner[-1]) if scan.inf_inner else row.inner_ratio)

    if strategy != "exhaustive":
        theta = _convergence_factor(model) if strategy == "intervals" else None
        scan.extrapolated_outer = _tail_limit([r.outer_ratio for r in scan.rows], theta)
        scan.extrapolated_inner = _tail_limit([r.inner_ratio for r in scan.rows], theta)
    return scan


@dataclass
class CxResult:
    constant: float
    M_X: int
    X_size: float
    verified: bool
    checks: list[tuple[int, float, float]]


def c_x_constant(model: FusionModel, X, sampleRadius: int = 10) -> CxResult:
    """C_X = 1 + M_X |X| with M_X the largest support of v*x seen on the
    sampled ball; checks |dA| <= C_X |d_inn A| for A = B(n), n <= sampleRadius."""
    X = _as_gen(model, X)
    if not X.symmetric:
        raise ValueError("C_X needs a symmetric generating set")
    table = build_balls(model, X, sampleRadius)
    ball = table.ball(sampleRadius)
    mx = max(len(model.product(v, x)) for v in ball for x in X)
    xs = weight(model, X)
    C = 1 + mx * xs
    checks = []
    ok = True
    for n in range(table.depth + 1):
        A = table.ball(n)
        b = weight(model, boundary(model, X, A))
        ib = weight(model, inner_boundary(model, X, A))
        checks.append((n, b, ib))
        ok &= b <= C * ib * (1 + 1e-12)
    return CxResult(C, mx, xs, ok, checks)


def folner_closed_form(kind: str, q: float) -> tuple[float, float]:
    """(Føl, Føl_inn) of the representation ring: ``su`` or ``so``."""
    if kind == "su":
        return q**-2 - q**2, 1 - q**2
    if kind == "so":
        return q**-4 - q**4, 1 - q**4
    raise ValueError(f"no closed form for {kind!r}")
