"""Root systems of the simple Lie types, exact pairings with the Weyl vector,
quantum dimensions and growth rates of q-deformations."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, reduce
from typing import Iterable, Sequence

from .qarith import LaurentPoly, log_qnum, qint_exact, qnum

__all__ = [
    "RootSystem",
    "DominantWeight",
    "build_root_system",
    "fundamental",
    "quantum_dim",
    "quantum_dim_exact",
    "log_quantum_dim",
    "classical_dim",
    "gamma",
    "growth_for_set",
    "UniformGrowth",
    "uniform_growth",
    "growth_exponent",
    "canonical_generators",
    "SandwichReport",
    "dim_sandwich_check",
    "diagram_symmetry",
    "VALID_RANKS",
]

VALID_RANKS = {
    "A": lambda n: n >= 1,
    "B": lambda n: n >= 2,
    "C": lambda n: n >= 3,
    "D": lambda n: n >= 4,
    "E": lambda n: n in (6, 7, 8),
    "F": lambda n: n == 4,
    "G": lambda n: n == 2,
}


def _dynkin(kind: str, n: int) -> tuple[list[int], list[tuple[int, int]]]:
    """Half square-lengths d_i and edges (0-based, Bourbaki order).

    Short roots have square length 2.  For G2 the first simple root is short.
    """
    chain = [(i, i + 1) for i in range(n - 1)]
    if kind == "A":
        return [1] * n, chain
    if kind == "B":
        return [2] * (n - 1) + [1], chain
    if kind == "C":
        return [1] * (n - 1) + [2], chain
    if kind == "D":
        return [1] * n, [(i, i + 1) for i in range(n - 2)] + [(n - 3, n - 1)]
    if kind == "E":
        edges = [(0, 2), (2, 3), (3, 4), (1, 3)] + [(k, k + 1) for k in range(4, n - 1)]
        return [1] * n, edges
    if kind == "F":
        return [2, 2, 1, 1], chain
    if kind == "G":
        return [1, 3], chain
    raise ValueError(f"unknown type {kind!r}")


def _inverse(M: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(M)
    A = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for col in range(n):
        piv = next(r for r in range(col, n) if A[r][col] != 0)
        A[col], A[piv] = A[piv], A[col]
        p = A[col][col]
        A[col] = [v / p for v in A[col]]
        for r in range(n):
            if r != col and A[r][col] != 0:
                f = A[r][col]
                A[r] = [a - f * b for a, b in zip(A[r], A[col])]
    return [row[n:] for row in A]


@dataclass(frozen=True)
class DominantWeight:
    """Coordinates in the basis of fundamental weights."""

    coords: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(int(c) for c in self.coords))
        if any(c < 0 for c in self.coords):
            raise ValueError(f"dominant weight needs nonnegative coordinates, got {self.coords}")

    def __len__(self):
        return len(self.coords)

    def __str__(self):
        return "(" + ",".join(map(str, self.coords)) + ")"


class RootSystem:
    """Root system of type ``kind`` and rank ``rank``, all data exact."""

    def __init__(self, kind: str, rank: int):
        kind = kind.upper()
        if kind not in VALID_RANKS or not VALID_RANKS[kind](rank):
            raise ValueError(f"no simple Lie type {kind}{rank}")
        self.kind, self.rank = kind, rank
        d, edges = _dynkin(kind, rank)
        self.symmetrizers: tuple[int, ...] = tuple(d)
        B = [[0] * rank for _ in range(rank)]
        for i in range(rank):
            B[i][i] = 2 * d[i]
        for i, j in edges:
            B[i][j] = B[j][i] = -max(d[i], d[j])
        self.simple_gram: tuple[tuple[int, ...], ...] = tuple(map(tuple, B))
        self.cartan: tuple[tuple[int, ...], ...] = tuple(
            tuple(B[i][j] // d[i] for j in range(rank)) for i in range(rank)
        )
        self.positive_roots: tuple[tuple[int, ...], ...] = self._close_roots()
        Binv = _inverse([[Fraction(v) for v in row] for row in B])
        self.weight_gram: tuple[tuple[Fraction, ...], ...] = tuple(
            tuple(d[i] * Binv[i][j] * d[j] for j in range(rank)) for i in range(rank)
        )
        self.rho_pairings: tuple[Fraction, ...] = tuple(sum(row, Fraction(0)) for row in self.weight_gram)

    @property
    def name(self) -> str:
        return f"{self.kind}{self.rank}"

    @property
    def root_count(self) -> int:
        """s = #Φ."""
        return 2 * len(self.positive_roots)

    @cached_property
    def rho_norm(self) -> Fraction:
        """<ρ|ρ>."""
        return sum(self.rho_pairings, Fraction(0))

    def _coroot_pairing(self, beta: Sequence[int], i: int) -> int:
        s = sum(c * self.simple_gram[j][i] for j, c in enumerate(beta))
        return s // self.symmetrizers[i]

    def _close_roots(self) -> tuple[tuple[int, ...], ...]:
        r = self.rank
        simple = [tuple(int(i == j) for j in range(r)) for i in range(r)]
        roots = set(simple)
        layer = list(simple)
        while layer:
            nxt = set()
            for beta in layer:
                for i in range(r):
                    # length p of the downward alpha_i-string from beta
                    p, probe = 0, list(beta)
                    while True:
                        probe[i] -= 1
                        if tuple(probe) in roots:
                            p += 1
                        else:
                            break
                    if p - self._coroot_pairing(beta, i) > 0:
                        up = list(beta)
                        up[i] += 1
                        nxt.add(tuple(up))
            nxt -= roots
            roots |= nxt
            layer = sorted(nxt)
        return tuple(sorted(roots, key=lambda v: (sum(v), v)))

    def weight(self, coords: Iterable[int] | DominantWeight) -> DominantWeight:
        w = coords if isinstance(coords, DominantWeight) else DominantWeight(tuple(coords))
        if len(w) != self.rank:
            raise ValueError(f"{self.name} weights need {self.rank} coordinates")
        return w

    def pairing_with_rho(self, lam) -> Fraction:
        """<λ|ρ>."""
        lam = self.weight(lam)
        return sum((c * p for c, p in zip(lam.coords, self.rho_pairings)), Fraction(0))

    def shifted_pairings(self, lam) -> list[tuple[int, int]]:
        """(<λ+ρ|α>, <ρ|α>) for each positive root α; both are integers."""
        lam = self.weight(lam)
        d = self.symmetrizers
        out = []
        for alpha in self.positive_roots:
            num = sum((l + 1) * c * di for l, c, di in zip(lam.coords, alpha, d))
            den = sum(c * di for c, di in zip(alpha, d))
            out.append((num, den))
        return out

    def __repr__(self):
        return f"RootSystem({self.name})"


def build_root_system(kind: str, rank: int) -> RootSystem:
    return RootSystem(kind, rank)


def fundamental(rs: RootSystem, i: int, multiple: int = 1) -> DominantWeight:
    """``multiple`` times the i-th fundamental weight (1-based)."""
    if not 1 <= i <= rs.rank:
        raise ValueError(f"{rs.name} has fundamental weights 1..{rs.rank}")
    return DominantWeight(tuple(multiple if k == i - 1 else 0 for k in range(rs.rank)))


def quantum_dim(rs: RootSystem, lam, q: float) -> float:
    """Product over positive roots of [<λ+ρ|α>]_q / [<ρ|α>]_q."""
    return math.prod(qnum(a, q) / qnum(b, q) for a, b in rs.shifted_pairings(lam))


def log_quantum_dim(rs: RootSystem, lam, q: float) -> float:
    return math.fsum(log_qnum(a, q) - log_qnum(b, q) for a, b in rs.shifted_pairings(lam))


def quantum_dim_exact(rs: RootSystem, lam) -> LaurentPoly:
    pairs = rs.shifted_pairings(lam)
    num = reduce(lambda acc, p: acc * qint_exact(p[0]), pairs, LaurentPoly.constant(1))
    den = reduce(lambda acc, p: acc * qint_exact(p[1]), pairs, LaurentPoly.constant(1))
    return num.exact_div(den)


def classical_dim(rs: RootSystem, lam) -> int:
    """Weyl dimension formula at q = 1."""
    val = math.prod(Fraction(a, b) for a, b in rs.shifted_pairings(lam))
    if val.denominator != 1:
        raise ArithmeticError("Weyl dimension is not an integer")
    return int(val)


def gamma(rs: RootSystem, lam, q: float) -> float:
    """Γ(λ) = q^(-2<λ|ρ>)."""
    return q ** (-2 * float(rs.pairing_with_rho(lam)))


def growth_for_set(rs: RootSystem, Y: Iterable, q: float) -> float:
    """max over λ in Y of q^(-4<λ|ρ>)."""
    Y = list(Y)
    if not Y:
        raise ValueError("generating set must be nonempty")
    return max(q ** (-4 * float(rs.pairing_with_rho(lam))) for lam in Y)


_FIXED_EXPONENTS = {("E", 6): 32, ("E", 7): 54, ("E", 8): 116, ("F", 4): 44, ("G", 2): 20}
_FIXED_GENERATORS = {("E", 6): (1, 6), ("E", 7): (7,), ("E", 8): (8,), ("F", 4): (4,), ("G", 2): (1,)}


def growth_exponent(kind: str, rank: int) -> int:
    """Exponent c with uniform growth rate q^-c."""
    kind = kind.upper()
    if kind == "A":
        return 2 * rank
    if kind == "B":
        return 2 * rank * rank
    if kind == "C":
        return 4 * rank
    if kind == "D":
        return rank * (rank - 1)
    try:
        return _FIXED_EXPONENTS[(kind, rank)]
    except KeyError:
        raise ValueError(f"no simple Lie type {kind}{rank}") from None


def canonical_generators(rs: RootSystem) -> tuple[DominantWeight, ...]:
    """Generating set of fundamental weights realising the uniform growth rate."""
    n = rs.rank
    idx = {
        "A": (1, n),
        "B": (n,),
        "C": (1,),
        "D": (1, n - 1, n),
    }.get(rs.kind) or _FIXED_GENERATORS[(rs.kind, n)]
    return tuple(fundamental(rs, i) for i in sorted(set(idx)))


@dataclass(frozen=True)
class UniformGrowth:
    rate: float
    exponent: int
    generators: tuple[DominantWeight, ...]
    amenable: bool = False


def uniform_growth(rs: RootSystem, q: float) -> UniformGrowth:
    """Uniform growth rate q^-c of the q-deformation, with c from the type
    table, cross-checked against the canonical generating set."""
    if not 0 < q <= 1:
        raise ValueError("q must lie in (0, 1]")
    c = growth_exponent(rs.kind, rs.rank)
    gens = canonical_generators(rs)
    from_set = max(4 * rs.pairing_with_rho(lam) for lam in gens)
    if from_set != c:
        raise ArithmeticError(f"{rs.name}: table exponent {c} disagrees with generating set value {from_set}")
    if q == 1:
        return UniformGrowth(1.0, c, gens, amenable=True)
    return UniformGrowth(q ** (-c), c, gens)


@dataclass(frozen=True)
class SandwichReport:
    lower: float
    value: float
    upper: float
    log_lower: float
    log_value: float
    log_upper: float
    holds: bool


def dim_sandwich_check(rs: RootSystem, lam, q: float, rel_tol: float = 1e-12) -> SandwichReport:
    """q^-<λ|2ρ> <= d(λ) <= (q^-1 - q)^(-s/2) q^-<ρ|2ρ> q^-<λ|2ρ>, in log form."""
    if not 0 < q < 1:
        raise ValueError("the dimension bounds need 0 < q < 1")
    t = -math.log(q)
    lr = float(rs.pairing_with_rho(lam))
    lo = 2 * lr * t
    val = log_quantum_dim(rs, lam, q)
    hi = -(rs.root_count / 2) * math.log(1 / q - q) + 2 * float(rs.rho_norm) * t + 2 * lr * t
    slack = rel_tol * max(1.0, abs(val))
    ok = lo <= val + slack and val <= hi + slack

    def ex(v):
        return math.exp(v) if v < 709 else math.inf

    return SandwichReport(ex(lo), ex(val), ex(hi), lo, val, hi, ok)


def diagram_symmetry(rs: RootSystem) -> tuple[int, ...] | None:
    """Nontrivial Dynkin diagram automorphism as a 0-based permutation."""
    n = rs.rank
    if rs.kind == "A" and n > 1:
        return tuple(reversed(range(n)))
    if rs.kind == "D":
        return tuple(range(n - 2)) + (n - 1, n - 2)
    if rs.kind == "E" and n == 6:
        return (5, 1, 4, 3, 2, 0)
    return None
