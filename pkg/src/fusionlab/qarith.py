"""q-numbers and Laurent polynomials in s = q^(1/2).

Exact values live in :class:`LaurentPoly`, a sparse map from integer powers of
``s`` to Python integers.  Floating values go through :func:`qnum`, which uses
the hyperbolic form ``sinh(x t) / sinh(t)`` with ``t = -log q`` so that q close
to 1 does not lose digits to cancellation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

__all__ = [
    "LaurentPoly",
    "QContext",
    "qint_exact",
    "qnum",
    "log_qnum",
    "laurent_eval",
    "log_sum_exp",
]

Number = Union[int, Fraction, float]


class LaurentPoly:
    """Element of Z[s, 1/s] with s = q^(1/2).

    Keys are exponents of ``s``; an exponent ``2k`` is ``q^k``.  Instances are
    immutable and hashable.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, int] | None = None):
        clean = {}
        if terms:
            for e, c in terms.items():
                if not isinstance(e, int) or not isinstance(c, int):
                    raise TypeError("exponents and coefficients must be integers")
                if c:
                    clean[e] = c
        self._terms = dict(sorted(clean.items()))
        self._hash = None

    @classmethod
    def constant(cls, c: int) -> "LaurentPoly":
        return cls({0: c})

    @classmethod
    def q_power(cls, k: int, coeff: int = 1) -> "LaurentPoly":
        """``coeff * q^k``."""
        return cls({2 * k: coeff})

    @property
    def terms(self) -> dict[int, int]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def min_exp(self) -> int:
        return next(iter(self._terms)) if self._terms else 0

    def max_exp(self) -> int:
        return next(reversed(self._terms)) if self._terms else 0

    def coefficient_sum(self) -> int:
        return sum(self._terms.values())

    @staticmethod
    def _coerce(other) -> "LaurentPoly | None":
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, int):
            return LaurentPoly.constant(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = dict(self._terms)
        for e, c in o._terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out: dict[int, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in o._terms.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers")
        result = LaurentPoly.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def exact_div(self, other: "LaurentPoly") -> "LaurentPoly":
        """Quotient when ``other`` divides ``self`` in Z[s, 1/s].

        Raises ValueError if the division leaves a remainder.
        """
        o = self._coerce(other)
        if o is None or o.is_zero():
            raise ZeroDivisionError("division by zero Laurent polynomial")
        if self.is_zero():
            return LaurentPoly()
        rem = dict(self._terms)
        d_lo, d_hi = o.min_exp(), o.max_exp()
        lead = o._terms[d_hi]
        quotient: dict[int, int] = {}
        floor = self.min_exp() - d_lo
        while rem:
            top = max(rem)
            shift = top - d_hi
            if shift < floor:
                break
            c, r = divmod(rem[top], lead)
            if r:
                raise ValueError("leading coefficient does not divide")
            quotient[shift] = c
            for e, dc in o._terms.items():
                k = e + shift
                v = rem.get(k, 0) - c * dc
                if v:
                    rem[k] = v
                else:
                    rem.pop(k, None)
        if rem:
            raise ValueError("Laurent polynomial division is not exact")
        return LaurentPoly(quotient)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._terms == o._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    def evaluate(self, q: float) -> float:
        return laurent_eval(self, q)

    def at_rational(self, q: Fraction | int) -> Fraction:
        """Exact value at a rational ``q``; needs integer powers of q only."""
        q = Fraction(q)
        if q <= 0:
            raise ValueError("q must be positive")
        total = Fraction(0)
        for e, c in self._terms.items():
            if e % 2:
                raise ValueError("odd power of q^(1/2) has no rational value")
            total += c * q ** (e // 2)
        return total

    def __repr__(self):
        if not self._terms:
            return "LaurentPoly(0)"
        parts = []
        for e, c in self._terms.items():
            if e == 0:
                parts.append(f"{c}")
            elif e % 2 == 0:
                parts.append(f"{c}*q^{e // 2}")
            else:
                parts.append(f"{c}*q^({e}/2)")
        return "LaurentPoly(" + " + ".join(parts) + ")"


@dataclass(frozen=True)
class QContext:
    """Deformation parameter with a flag for carrying exact values."""

    q: float
    exact_mode: bool = False

    def __post_init__(self):
        if not (0.0 < self.q <= 1.0):
            raise ValueError(f"q must lie in (0, 1], got {self.q!r}")


def _as_q(ctx: QContext | float) -> float:
    if isinstance(ctx, QContext):
        return ctx.q
    q = float(ctx)
    if not (0.0 < q <= 1.0):
        raise ValueError(f"q must lie in (0, 1], got {q!r}")
    return q


def qint_exact(n: int) -> LaurentPoly:
    """[n]_q = q^(n-1) + q^(n-3) + ... + q^(1-n) as a Laurent polynomial."""
    if not isinstance(n, int) or n <= 0:
        raise ValueError(f"q-integer needs n >= 1, got {n!r}")
    return LaurentPoly({2 * (n - 1 - 2 * j): 1 for j in range(n)})


def qnum(x: float, ctx: QContext | float) -> float:
    """[x]_q = (q^-x - q^x)/(q^-1 - q), and x itself at q = 1."""
    q = _as_q(ctx)
    if q == 1.0:
        return float(x)
    t = -math.log(q)
    try:
        return math.sinh(x * t) / math.sinh(t)
    except OverflowError:
        return math.copysign(math.inf, x)


def log_qnum(x: float, ctx: QContext | float) -> float:
    """log [x]_q for x > 0, safe where [x]_q overflows a double."""
    if x <= 0:
        raise ValueError("log_qnum needs x > 0")
    q = _as_q(ctx)
    if q == 1.0:
        return math.log(x)
    t = -math.log(q)
    # sinh(a) = e^a (1 - e^{-2a}) / 2
    return x * t + math.log1p(-math.exp(-2 * x * t)) - t - math.log1p(-math.exp(-2 * t))


def laurent_eval(p: LaurentPoly, q: float) -> float:
    """Evaluate ``p`` at q, summing terms from smallest to largest magnitude."""
    q = float(q)
    if q <= 0:
        raise ValueError(f"q must be positive, got {q!r}")
    if q == 1.0:
        return float(p.coefficient_sum())
    s = math.sqrt(q)
    terms = [c * s**e for e, c in p.terms.items()]
    terms.sort(key=abs)
    return math.fsum(terms)


def log_sum_exp(logs: Iterable[float]) -> float:
    """log(sum(exp(v))) without overflow; -inf for an empty input."""
    vals = list(logs)
    if not vals:
        return -math.inf
    top = max(vals)
    if top == -math.inf:
        return -math.inf
    return top + math.log(math.fsum(math.exp(v - top) for v in vals))
