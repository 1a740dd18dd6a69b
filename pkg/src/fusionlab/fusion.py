"""Fusion algebras: formal sums, the model interface, axiom checks, products
of algebras and user-supplied finite fragments."""
from __future__ import annotations

import json
import math
from abc import ABC, abstractmethod
from collections.abc import Hashable, Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any


__all__ = [
    "FormalSum",
    "FusionModel",
    "AxiomReport",
    "FragmentBoundaryError",
    "CustomModelError",
    "CyclicGroupModel",
    "ProductModel",
    "CustomModel",
    "product",
    "validate_axioms",
    "product_algebra",
    "load_custom",
    "parse_custom",
]

Label = Hashable


class FormalSum(Mapping):
    """Finite sum of irreducibles with positive integer multiplicities."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Label, int] | Iterable[tuple[Label, int]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean: dict[Label, int] = {}
        for k, m in items:
            if not isinstance(m, int) or isinstance(m, bool):
                raise TypeError(f"multiplicity of {k!r} must be an integer")
            if m < 0:
                raise ValueError(f"negative multiplicity for {k!r}")
            if m:
                clean[k] = clean.get(k, 0) + m
        self._terms = clean

    def __getitem__(self, key):
        return self._terms[key]

    def __iter__(self) -> Iterator[Label]:
        return iter(self._terms)

    def __len__(self):
        return len(self._terms)

    def get(self, key, default=0):
        return self._terms.get(key, default)

    def support(self) -> frozenset:
        return frozenset(self._terms)

    def __eq__(self, other):
        if isinstance(other, Mapping):
            return self._terms == dict(other)
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __repr__(self):
        return f"FormalSum({self._terms!r})"


class FragmentBoundaryError(LookupError):
    """A product leaves the finite fragment a custom model knows about."""


class FusionModel(ABC):
    """Abstract fusion algebra.

    Subclasses supply ``unit``, ``conj``, ``_product``, ``dim`` and
    ``check_label``.  Exact dimensions are optional: override
    ``dim_exact`` and set ``has_exact``.
    """

    enumerable: bool = True
    has_exact: bool = False
    name: str = "model"

    def __init__(self):
        self._cache: dict[tuple[Label, Label], FormalSum] = {}

    @abstractmethod
    def unit(self) -> Label: ...

    @abstractmethod
    def conj(self, i: Label) -> Label: ...

    @abstractmethod
    def _product(self, i: Label, j: Label) -> FormalSum: ...

    @abstractmethod
    def dim(self, i: Label) -> float: ...

    @abstractmethod
    def check_label(self, i: Label) -> Label:
        """Return the canonical label or raise ValueError."""

    def product(self, i: Label, j: Label) -> FormalSum:
        key = (i, j)
        hit = self._cache.get(key)
        if hit is None:
            hit = self._product(self.check_label(i), self.check_label(j))
            self._cache[key] = hit
        return hit

    def dim_exact(self, i: Label):
        raise NotImplementedError(f"{self.name} has no exact dimensions")

    def exact_kind(self) -> tuple | None:
        """Tag describing the ring exact dimensions live in, or None."""
        return None

    def log_dim(self, i: Label) -> float:
        return math.log(self.dim(i))

    def sort_key(self, i: Label):
        return i

    def sorted(self, labels: Iterable[Label]) -> list[Label]:
        return sorted(labels, key=self.sort_key)

    def label_str(self, i: Label) -> str:
        return str(i)


def product(model: FusionModel, i: Label, j: Label) -> FormalSum:
    """Decomposition of ``i * j`` in ``model``."""
    return model.product(i, j)


# ---------------------------------------------------------------- axioms


@dataclass
class AxiomReport:
    checked_triples: int = 0
    frobenius_failures: list[tuple] = field(default_factory=list)
    dim_failures: list[tuple] = field(default_factory=list)
    involution_failures: list[tuple] = field(default_factory=list)
    unit_failures: list[tuple] = field(default_factory=list)
    skipped: int = 0

    @property
    def ok(self) -> bool:
        return not (
            self.frobenius_failures
            or self.dim_failures
            or self.involution_failures
            or self.unit_failures
        )

    def summary(self) -> str:
        return (
            f"checked {self.checked_triples} triples; "
            f"frobenius {len(self.frobenius_failures)}, "
            f"dimension {len(self.dim_failures)}, "
            f"involution {len(self.involution_failures)}, "
            f"unit {len(self.unit_failures)} failures; "
            f"{self.skipped} skipped outside known fragment"
        )


def _close(a: float, b: float, rel: float) -> bool:
    return abs(a - b) <= rel * max(abs(a), abs(b), 1.0)


def validate_axioms(model: FusionModel, sample: Iterable[Label], *, exact: bool | None = None, rel_tol: float = 1e-9) -> AxiomReport:
    """Check the fusion-algebra axioms on ``sample`` and its pairwise products.

    Frobenius reciprocity is tested for every xi, eta in the sample and every
    alpha in the closure.  Failures are deduplicated up to the reciprocity
    symmetry, so a single wrong coefficient is named once.
    """
    rep = AxiomReport()
    use_exact = model.has_exact if exact is None else (exact and model.has_exact)
    sample = model.sorted({model.check_label(s) for s in sample})
    e = model.unit()

    def prod(a, b):
        try:
            return model.product(a, b)
        except FragmentBoundaryError:
            return None

    closure = set(sample)
    for x in sample:
        for y in sample:
            p = prod(x, y)
            if p is None:
                rep.skipped += 1
                continue
            closure.update(p)
    closure = model.sorted(closure)

    if model.conj(e) != e:
        rep.involution_failures.append(("conj(unit)", e))
    for a in closure:
        ca = model.conj(a)
        if model.conj(ca) != a:
            rep.involution_failures.append(("conj(conj)", a))
        if use_exact:
            if model.dim_exact(ca) != model.dim_exact(a):
                rep.dim_failures.append(("conj", a))
        elif not _close(model.dim(ca), model.dim(a), rel_tol):
            rep.dim_failures.append(("conj", a))
        if model.dim(a) < 1 - 1e-12:
            rep.dim_failures.append(("below one", a))
        for left, right in ((e, a), (a, e)):
            p = prod(left, right)
            if p is not None and dict(p) != {a: 1}:
                rep.unit_failures.append((left, right))

    for x in sample:
        for y in sample:
            p = prod(x, y)
            if p is None:
                continue
            if use_exact:
                lhs = sum((m * model.dim_exact(a) for a, m in p.items()), 0)
                if lhs != model.dim_exact(x) * model.dim_exact(y):
                    rep.dim_failures.append(("multiplicative", x, y))
            else:
                lhs = math.fsum(m * model.dim(a) for a, m in p.items())
                if not _close(lhs, model.dim(x) * model.dim(y), rel_tol):
                    rep.dim_failures.append(("multiplicative", x, y))
            q = prod(model.conj(y), model.conj(x))
            if q is not None:
                conj_p = {}
                for a, m in p.items():
                    conj_p[model.conj(a)] = conj_p.get(model.conj(a), 0) + m
                if conj_p != dict(q):
                    rep.involution_failures.append(("antimultiplicative", x, y))

    seen: set[frozenset] = set()
    for x in sample:
        cx = model.conj(x)
        for y in sample:
            cy = model.conj(y)
            p = prod(x, y)
            if p is None:
                continue
            for a in closure:
                p2 = prod(a, cy)
                p3 = prod(cx, a)
                if p2 is None or p3 is None:
                    rep.skipped += 1
                    continue
                rep.checked_triples += 1
                n1, n2, n3 = p.get(a, 0), p2.get(x, 0), p3.get(y, 0)
                if n1 == n2 == n3:
                    continue
                orbit = frozenset({(x, y, a), (a, cy, x), (cx, a, y)})
                if orbit in seen:
                    continue
                seen.add(orbit)
                rep.frobenius_failures.append((x, y, a))
    return rep


# ---------------------------------------------------------------- simple models


class CyclicGroupModel(FusionModel):
    """Group ring of Z/n; n = 1 gives the trivial fusion algebra."""

    has_exact = True

    def __init__(self, n: int = 1):
        super().__init__()
        if n < 1:
            raise ValueError("n must be positive")
        self.n = n
        self.name = f"Z/{n}" if n > 1 else "trivial"

    def unit(self):
        return 0

    def conj(self, i):
        return (-i) % self.n

    def check_label(self, i):
        if not isinstance(i, int) or isinstance(i, bool) or not 0 <= i < self.n:
            raise ValueError(f"label {i!r} is not in Z/{self.n}")
        return i

    def _product(self, i, j):
        return FormalSum({(i + j) % self.n: 1})

    def dim(self, i):
        return 1.0

    def dim_exact(self, i):
        return 1

    def exact_kind(self):
        return ("integer",)


def _kinds_compatible(k1, k2):
    if k1 is None or k2 is None:
        return None
    if k1 == ("integer",):
        return k2
    if k2 == ("integer",):
        return k1
    return k1 if k1 == k2 else None


class ProductModel(FusionModel):
    """Product of two fusion algebras; irreducibles are pairs."""

    def __init__(self, m1: FusionModel, m2: FusionModel):
        super().__init__()
        self.m1, self.m2 = m1, m2
        self.name = f"{m1.name} x {m2.name}"
        self.enumerable = m1.enumerable and m2.enumerable
        self._kind = _kinds_compatible(m1.exact_kind(), m2.exact_kind())
        self.has_exact = self._kind is not None

    def unit(self):
        return (self.m1.unit(), self.m2.unit())

    def conj(self, i):
        return (self.m1.conj(i[0]), self.m2.conj(i[1]))

    def check_label(self, i):
        if not isinstance(i, tuple) or len(i) != 2:
            raise ValueError(f"product label must be a pair, got {i!r}")
        return (self.m1.check_label(i[0]), self.m2.check_label(i[1]))

    def _product(self, i, j):
        p1 = self.m1.product(i[0], j[0])
        p2 = self.m2.product(i[1], j[1])
        return FormalSum({(a, b): m * n for a, m in p1.items() for b, n in p2.items()})

    def dim(self, i):
        return self.m1.dim(i[0]) * self.m2.dim(i[1])

    def log_dim(self, i):
        return self.m1.log_dim(i[0]) + self.m2.log_dim(i[1])

    def dim_exact(self, i):
        if not self.has_exact:
            raise NotImplementedError("factors carry incompatible exact dimensions")
        return self.m1.dim_exact(i[0]) * self.m2.dim_exact(i[1])

    def exact_kind(self):
        return self._kind

    def sort_key(self, i):
        return (self.m1.sort_key(i[0]), self.m2.sort_key(i[1]))

    def label_str(self, i):
        return f"({self.m1.label_str(i[0])},{self.m2.label_str(i[1])})"


def product_algebra(m1: FusionModel, m2: FusionModel) -> ProductModel:
    return ProductModel(m1, m2)


# ---------------------------------------------------------------- custom fragments


class CustomModelError(ValueError):
    """Rejected custom fusion document.  ``problems`` lists every issue found;
    ``report`` holds the axiom report when the structural checks passed."""

    def __init__(self, problems: list[str], report: AxiomReport | None = None):
        self.problems = list(problems)
        self.report = report
        super().__init__("invalid fusion document: " + "; ".join(self.problems))


class CustomModel(FusionModel):
    """Finite fragment given by an explicit product table.

    A table entry of ``None`` marks a product that leaves the fragment;
    asking for it raises :class:`FragmentBoundaryError`.
    """

    has_exact = True

    def __init__(self, irreducibles, unit, conjugate, dims, table, name="custom"):
        super().__init__()
        self.irreducibles = tuple(irreducibles)
        self._index = {a: k for k, a in enumerate(self.irreducibles)}
        self._unit = unit
        self._conj = dict(conjugate)
        self._dims = {a: Fraction(v) for a, v in dims.items()}
        self._table = dict(table)
        self.name = name

    def unit(self):
        return self._unit

    def conj(self, i):
        return self._conj[self.check_label(i)]

    def check_label(self, i):
        if i not in self._index:
            raise ValueError(f"unknown irreducible {i!r}")
        return i

    def _product(self, i, j):
        entry = self._table[(i, j)]
        if entry is None:
            raise FragmentBoundaryError(f"product {i}*{j} leaves the known fragment")
        return entry

    def dim(self, i):
        return float(self._dims[self.check_label(i)])

    def dim_exact(self, i):
        return self._dims[self.check_label(i)]

    def exact_kind(self):
        return ("rational",)

    def sort_key(self, i):
        return self._index[i]


def _parse_dim(value) -> Fraction:
    if isinstance(value, bool):
        raise ValueError("boolean is not a dimension")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    return Fraction(str(value).strip())


def parse_custom(doc: Mapping[str, Any], *, validate: bool = True, name: str = "custom") -> CustomModel:
    """Build a :class:`CustomModel` from an already-parsed document."""
    problems: list[str] = []
    if not isinstance(doc, Mapping):
        raise CustomModelError(["document must be a mapping"])
    irr = doc.get("irreducibles")
    if not isinstance(irr, list) or not irr:
        raise CustomModelError(["'irreducibles' must be a nonempty list"])
    irr = [str(a) for a in irr]
    if len(set(irr)) != len(irr):
        problems.append("duplicate irreducible names")
    names = set(irr)

    unit = doc.get("unit")
    if unit is None:
        problems.append("missing unit")
    elif str(unit) not in names:
        problems.append(f"unit {unit!r} is not an irreducible")
    unit = None if unit is None else str(unit)

    conj_raw = doc.get("conjugate") or {}
    conj = {str(k): str(v) for k, v in conj_raw.items()}
    for a in irr:
        if a not in conj:
            problems.append(f"conjugate of {a!r} missing")
        elif conj[a] not in names:
            problems.append(f"conjugate of {a!r} is unknown name {conj[a]!r}")
    for a in irr:
        b = conj.get(a)
        if b in names and conj.get(b) != a:
            problems.append(f"conjugation is not involutive at {a!r}")

    dims: dict[str, Fraction] = {}
    dim_raw = {str(k): v for k, v in (doc.get("dim") or {}).items()}
    for a in irr:
        raw = dim_raw.get(a)
        if raw is None:
            problems.append(f"dimension of {a!r} missing")
            continue
        try:
            d = _parse_dim(raw)
        except (ValueError, ZeroDivisionError):
            problems.append(f"dimension of {a!r} is not a number: {raw!r}")
            continue
        if d < 1:
            problems.append(f"dimension of {a!r} is {raw} < 1")
        dims[a] = d

    table: dict[tuple[str, str], FormalSum | None] = {}
    raw_table = doc.get("product") or {}
    parsed_keys = {}
    for key, val in raw_table.items():
        parts = [p.strip() for p in str(key).split(",")]
        if len(parts) != 2 or not all(p in names for p in parts):
            problems.append(f"bad product key {key!r}")
            continue
        parsed_keys[tuple(parts)] = val
    for a in irr:
        for b in irr:
            if (a, b) not in parsed_keys:
                problems.append(f"product {a},{b} missing")
                continue
            val = parsed_keys[(a, b)]
            if val is None:
                table[(a, b)] = None
                continue
            if not isinstance(val, Mapping):
                problems.append(f"product {a},{b} must map names to multiplicities")
                continue
            terms = {}
            for c, m in val.items():
                c = str(c)
                if c not in names:
                    problems.append(f"product {a},{b} names unknown irreducible {c!r}")
                elif not isinstance(m, int) or isinstance(m, bool) or m < 1:
                    problems.append(f"product {a},{b} has bad multiplicity {m!r} for {c!r}")
                else:
                    terms[c] = m
            table[(a, b)] = FormalSum(terms)
    if problems:
        raise CustomModelError(problems)

    model = CustomModel(irr, unit, conj, dims, table, name=name)
    if validate:
        report = validate_axioms(model, irr)
        if not report.ok:
            raise CustomModelError(["fusion axioms violated: " + report.summary()], report)
    return model


def load_custom(source: str | Path | Mapping, *, validate: bool = True) -> CustomModel:
    """Load a custom fusion document from a mapping, a path, or JSON/YAML text."""
    if isinstance(source, Mapping):
        return parse_custom(source, validate=validate)
    text = None
    name = "custom"
    if isinstance(source, Path) or (isinstance(source, str) and "\n" not in source and Path(source).is_file()):
        path = Path(source)
        text = path.read_text(encoding="utf-8")
        name = path.stem
    else:
        text = str(source)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError:
        import yaml

        try:
            doc = yaml.safe_load(text)
        except yaml.YAMLError as exc:
            raise CustomModelError([f"document is neither JSON nor YAML: {exc}"]) from exc
    return parse_custom(doc, validate=validate, name=name)
