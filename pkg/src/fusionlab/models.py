"""Built-in fusion models: SU_q(2), SO_q(3), the free unitary word model U_F+,
and maps from matrix or integer parameters to the deformation parameter q."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .fusion import FormalSum, FusionModel
from .qarith import LaurentPoly, QContext, log_qnum, qint_exact, qnum

__all__ = [
    "SUModel",
    "SOModel",
    "UFWord",
    "UFModel",
    "su_product",
    "so_product",
    "uf_product",
    "uf_dim",
    "q_from_trace",
    "q_from_F",
    "so_param_from_N",
    "o_plus_q",
]


def _ctx(q) -> QContext:
    return q if isinstance(q, QContext) else QContext(float(q))


def _nonneg_int(n) -> int:
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 0:
        raise ValueError(f"label must be a nonnegative integer, got {n!r}")
    return int(n)


def su_product(m: int, n: int) -> FormalSum:
    """m x n = |m-n| + (|m-n|+2) + ... + (m+n)."""
    m, n = _nonneg_int(m), _nonneg_int(n)
    return FormalSum({k: 1 for k in range(abs(m - n), m + n + 1, 2)})


def so_product(m: int, n: int) -> FormalSum:
    """m x n = |m-n| + (|m-n|+1) + ... + (m+n)."""
    m, n = _nonneg_int(m), _nonneg_int(n)
    return FormalSum({k: 1 for k in range(abs(m - n), m + n + 1)})


class _IntegerModel(FusionModel):
    has_exact = True
    _step = 1  # d(n) = [step*n + 1]

    def __init__(self, q: QContext | float = 1.0):
        super().__init__()
        self.ctx = _ctx(q)

    @property
    def q(self) -> float:
        return self.ctx.q

    def unit(self):
        return 0

    def conj(self, i):
        return _nonneg_int(i)

    def check_label(self, i):
        return _nonneg_int(i)

    def dim(self, i):
        return qnum(self._step * _nonneg_int(i) + 1, self.ctx)

    def log_dim(self, i):
        return log_qnum(self._step * _nonneg_int(i) + 1, self.ctx)

    def dim_exact(self, i):
        return qint_exact(self._step * _nonneg_int(i) + 1)

    def exact_kind(self):
        return ("laurent", self.q)


class SUModel(_IntegerModel):
    """Representation ring of SU_q(2): labels are spins n >= 0, d(n) = [n+1]."""

    _step = 1

    def __init__(self, q: QContext | float = 1.0):
        super().__init__(q)
        self.name = f"SU_{self.q:g}(2)"

    def _product(self, i, j):
        return su_product(i, j)


class SOModel(_IntegerModel):
    """Representation ring of SO_q(3): labels n >= 0, d(n) = [2n+1]."""

    _step = 2

    def __init__(self, q: QContext | float = 1.0):
        super().__init__(q)
        self.name = f"SO_{self.q:g}(3)"

    def _product(self, i, j):
        return so_product(i, j)


# ---------------------------------------------------------------- U_F+ words


@dataclass(frozen=True, order=True)
class UFWord:
    """Word over the letters ``a`` and ``A`` (the conjugate letter).

    The canonical block form splits the word wherever two equal letters are
    adjacent; each block is an alternating run.
    """

    letters: str = ""

    def __post_init__(self):
        if any(c not in "aA" for c in self.letters):
            raise ValueError(f"UF word letters must be 'a' or 'A', got {self.letters!r}")

    @classmethod
    def parse(cls, text: str) -> "UFWord":
        """Accepts ``e`` for the empty word, or a string over ``a``/``A``;
        the token ``abar`` is read as ``A``."""
        t = text.strip()
        if t in ("", "e"):
            return cls("")
        return cls(t.replace("abar", "A").replace(" ", "").replace(".", ""))

    def __len__(self):
        return len(self.letters)

    @property
    def blocks(self) -> list[tuple[int, int]]:
        """(length, leading sign) for each alternating block, sign +1 for ``a``."""
        out: list[tuple[int, int]] = []
        w = self.letters
        start = 0
        for k in range(1, len(w) + 1):
            if k == len(w) or w[k] == w[k - 1]:
                out.append((k - start, 1 if w[start] == "a" else -1))
                start = k
        return out

    @classmethod
    def from_blocks(cls, blocks) -> "UFWord":
        letters = []
        for k, eps in blocks:
            if k < 1:
                raise ValueError("block length must be positive")
            first, second = ("a", "A") if eps > 0 else ("A", "a")
            block = "".join(first if j % 2 == 0 else second for j in range(k))
            if letters and letters[-1][-1] != block[0]:
                raise ValueError("consecutive blocks must meet in equal letters")
            letters.append(block)
        return cls("".join(letters))

    def conj(self) -> "UFWord":
        return UFWord(self.letters[::-1].swapcase())

    def __add__(self, other: "UFWord") -> "UFWord":
        return UFWord(self.letters + other.letters)

    def __str__(self):
        return self.letters or "e"


def uf_product(x: UFWord, y: UFWord) -> FormalSum:
    """Sum of ``a b`` over splittings ``x = a c`` and ``y = conj(c) b``."""
    terms: dict[UFWord, int] = {}
    xs, ys = x.letters, y.letters
    for k in range(min(len(xs), len(ys)) + 1):
        c = xs[len(xs) - k:]
        if ys[:k] == c[::-1].swapcase():
            w = UFWord(xs[: len(xs) - k] + ys[k:])
            terms[w] = terms.get(w, 0) + 1
    return FormalSum(terms)


def uf_dim(x: UFWord, q: QContext | float, exact: bool = False):
    """Product of [k+1] over the block lengths k of ``x``."""
    if exact:
        return reduce(lambda acc, b: acc * qint_exact(b[0] + 1), x.blocks, LaurentPoly.constant(1))
    ctx = _ctx(q)
    return math.prod(qnum(k + 1, ctx) for k, _ in x.blocks)


class UFModel(FusionModel):
    """Fusion algebra of U_F+ with q given by the matrix F."""

    has_exact = True

    def __init__(self, q: QContext | float = 1.0):
        super().__init__()
        self.ctx = _ctx(q)
        self.name = f"U+_{self.q:g}"

    @property
    def q(self):
        return self.ctx.q

    def unit(self):
        return UFWord("")

    def conj(self, i):
        return self.check_label(i).conj()

    def check_label(self, i):
        if isinstance(i, UFWord):
            return i
        if isinstance(i, str):
            return UFWord.parse(i)
        raise ValueError(f"not a UF word: {i!r}")

    def _product(self, i, j):
        return uf_product(i, j)

    def dim(self, i):
        return uf_dim(self.check_label(i), self.ctx)

    def log_dim(self, i):
        return math.fsum(log_qnum(k + 1, self.ctx) for k, _ in self.check_label(i).blocks)

    def dim_exact(self, i):
        return uf_dim(self.check_label(i), self.ctx, exact=True)

    def exact_kind(self):
        return ("laurent", self.q)

    def sort_key(self, i):
        return (len(i.letters), i.letters)

    def generators(self) -> tuple[UFWord, UFWord]:
        return (UFWord("a"), UFWord("A"))


# ---------------------------------------------------------------- parameter maps


def q_from_trace(t: float) -> float:
    """The q in (0, 1] with q + 1/q = t."""
    t = float(t)
    if t < 2:
        raise ValueError(f"trace must be at least 2, got {t}")
    # (t - sqrt(t^2-4))/2 written as 2/(t + sqrt(t^2-4)) to avoid cancellation
    return 2.0 / (t + math.sqrt(t * t - 4.0))


def q_from_F(F, rtol: float = 1e-8) -> float:
    """q for U_F+ from an invertible matrix F normalized so that
    Tr(F*F) = Tr((F*F)^-1)."""
    F = np.asarray(F, dtype=complex)
    if F.ndim != 2 or F.shape[0] != F.shape[1] or F.shape[0] < 2:
        raise ValueError("F must be a square matrix of size at least 2")
    Q = F.conj().T @ F
    if np.linalg.matrix_rank(F) < F.shape[0]:
        raise ValueError("F is singular")
    t1 = float(np.trace(Q).real)
    t2 = float(np.trace(np.linalg.solve(Q, np.eye(Q.shape[0]))).real)
    if abs(t1 - t2) > rtol * max(abs(t1), abs(t2)):
        raise ValueError(
            f"F is not normalized: Tr(F*F) = {t1:.12g} but Tr((F*F)^-1) = {t2:.12g}; "
            "rescale F by (Tr((F*F)^-1)/Tr(F*F))^(1/4)"
        )
    return q_from_trace(t1)


def o_plus_q(N: int) -> float:
    """q for the free orthogonal quantum group O_N+ (q + 1/q = N)."""
    if N < 2:
        raise ValueError("O_N+ needs N >= 2")
    return q_from_trace(N)


def so_param_from_N(N: int) -> float:
    """q for the quantum permutation group S_N+, from q^2 + q^-2 = N - 2."""
    if N < 4:
        raise ValueError("S_N+ needs N >= 4")
    return math.sqrt(q_from_trace(N - 2))
