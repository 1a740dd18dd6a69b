from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fusionlab.lie import (
    DominantWeight,
    build_root_system,
    canonical_generators,
    classical_dim,
    diagram_symmetry,
    dim_sandwich_check,
    fundamental,
    gamma,
    growth_for_set,
    quantum_dim,
    quantum_dim_exact,
    growth_exponent,
    uniform_growth,
)
from fusionlab.qarith import qint_exact, qnum

from oracles import CLASSICAL_DIMS, PAIRING_CASES, exponent, positive_root_count, rho_pairings


@pytest.mark.parametrize("kind, n", PAIRING_CASES)
def test_rho_pairings(kind, n):
    rs = build_root_system(kind, n)
    assert list(rs.rho_pairings) == rho_pairings(kind, n)
    assert all(isinstance(p, Fraction) for p in rs.rho_pairings)


@pytest.mark.parametrize("kind, n", PAIRING_CASES + [("A", 8), ("B", 7), ("D", 8)])
def test_root_system_invariants(kind, n):
    rs = build_root_system(kind, n)
    assert len(rs.positive_roots) == positive_root_count(kind, n)
    assert rs.root_count == 2 * len(rs.positive_roots)
    assert all(p > 0 for p in rs.rho_pairings)
    for _, den in rs.shifted_pairings(DominantWeight((0,) * n)):
        assert den >= 1
    # Cartan entries from the Gram matrix of simple roots
    for i in range(n):
        assert rs.cartan[i][i] == 2
        for j in range(n):
            assert rs.cartan[i][j] * rs.symmetrizers[i] == rs.simple_gram[i][j]


def test_g2_convention():
    rs = build_root_system("G", 2)
    assert tuple(rs.symmetrizers) == (1, 3)
    assert len(rs.positive_roots) == 6


@pytest.mark.parametrize("kind, n", PAIRING_CASES)
def test_growth_exponents(kind, n):
    rs = build_root_system(kind, n)
    assert growth_exponent(kind, n) == exponent(kind, n)
    ug = uniform_growth(rs, 0.5)
    assert ug.exponent == exponent(kind, n)
    assert max(4 * rs.pairing_with_rho(g) for g in ug.generators) == ug.exponent


@pytest.mark.parametrize("kind, rank", [("A", 0), ("B", 1), ("C", 2), ("D", 3), ("E", 5), ("E", 9), ("F", 3), ("G", 3), ("H", 3)])
def test_invalid_ranks(kind, rank):
    with pytest.raises(ValueError):
        build_root_system(kind, rank)


def test_negative_weight_rejected():
    with pytest.raises(ValueError):
        DominantWeight((1, -1))
    with pytest.raises(ValueError):
        build_root_system("A", 2).weight((1,))


@pytest.mark.parametrize("n", range(0, 21))
def test_a1_quantum_dims_are_q_integers(n):
    rs = build_root_system("A", 1)
    assert quantum_dim_exact(rs, (n,)) == qint_exact(n + 1)
    assert quantum_dim(rs, (n,), 0.5) == pytest.approx(qnum(n + 1, 0.5), rel=1e-12)


@pytest.mark.parametrize("kind, n, lam, dim", CLASSICAL_DIMS)
def test_classical_dimensions(kind, n, lam, dim):
    rs = build_root_system(kind, n)
    assert classical_dim(rs, lam) == dim
    assert quantum_dim(rs, lam, 1.0) == pytest.approx(dim, rel=1e-12)
    assert quantum_dim_exact(rs, lam).coefficient_sum() == dim


def test_trivial_weight():
    for kind, n in PAIRING_CASES:
        rs = build_root_system(kind, n)
        zero = (0,) * n
        assert quantum_dim(rs, zero, 0.4) == pytest.approx(1.0)
        assert gamma(rs, zero, 0.4) == 1


def test_gamma_examples():
    assert gamma(build_root_system("A", 1), (1,), 0.5) == pytest.approx(2.0)
    # <ϖ2|ρ> = 2 for B2, so Γ = 0.5^-4
    assert gamma(build_root_system("B", 2), (0, 1), 0.5) == pytest.approx(16.0)


def test_growth_for_set_examples():
    a1 = build_root_system("A", 1)
    assert growth_for_set(a1, [(1,)], 0.5) == pytest.approx(4.0)
    e8 = build_root_system("E", 8)
    assert growth_for_set(e8, [fundamental(e8, 8)], 0.9) == pytest.approx(0.9**-116, rel=1e-12)
    assert growth_for_set(e8, [fundamental(e8, 1)], 1.0) == 1
    with pytest.raises(ValueError):
        growth_for_set(a1, [], 0.5)


def test_uniform_growth_examples():
    assert uniform_growth(build_root_system("A", 3), 0.5).rate == pytest.approx(64)
    ug = uniform_growth(build_root_system("D", 4), 0.5)
    assert ug.rate == pytest.approx(4096) and ug.exponent == 12
    assert uniform_growth(build_root_system("F", 4), 0.9).rate == pytest.approx(0.9**-44, rel=1e-12)
    ug = uniform_growth(build_root_system("C", 3), 1.0)
    assert ug.rate == 1 and ug.amenable


def test_canonical_generators():
    rs = build_root_system("D", 5)
    assert canonical_generators(rs) == tuple(fundamental(rs, i) for i in (1, 4, 5))
    rs = build_root_system("E", 6)
    assert canonical_generators(rs) == (fundamental(rs, 1), fundamental(rs, 6))


@pytest.mark.parametrize("q", [0.3, 0.5, 0.9])
def test_canonical_set_realises_uniform_rate(q):
    cases = [(k, n) for k in "ABCD" for n in range(1, 9) if (k, n) not in {("B", 1), ("C", 1), ("C", 2), ("D", 1), ("D", 2), ("D", 3)}]
    cases += [("E", 6), ("E", 7), ("E", 8), ("F", 4), ("G", 2)]
    for kind, n in cases:
        rs = build_root_system(kind, n)
        ug = uniform_growth(rs, q)
        assert growth_for_set(rs, ug.generators, q) == pytest.approx(ug.rate, rel=1e-12)


def test_sandwich_examples():
    a1 = build_root_system("A", 1)
    rep = dim_sandwich_check(a1, (3,), 0.5)
    assert rep.holds
    assert rep.lower == pytest.approx(8) and rep.value == pytest.approx(10.625)
    assert rep.upper == pytest.approx(2 / 1.5 * 8)
    assert dim_sandwich_check(a1, (0,), 0.5).holds
    assert dim_sandwich_check(build_root_system("G", 2), (1, 0), 0.7).holds
    with pytest.raises(ValueError):
        dim_sandwich_check(a1, (1,), 1.0)


@st.composite
def weights(draw):
    kind, n = draw(st.sampled_from([("A", 2), ("A", 4), ("B", 3), ("C", 3), ("D", 4), ("E", 6), ("F", 4), ("G", 2)]))
    lam = tuple(draw(st.lists(st.integers(0, 6), min_size=n, max_size=n)))
    return build_root_system(kind, n), lam


@settings(max_examples=30, deadline=None)
@given(weights(), st.floats(0.05, 0.99))
def test_sandwich_property(case, q):
    rs, lam = case
    assert dim_sandwich_check(rs, lam, q).holds


@settings(max_examples=40, deadline=None)
@given(weights(), st.floats(0.2, 1.0))
def test_diagram_symmetry_preserves_dimension(case, q):
    rs, lam = case
    perm = diagram_symmetry(rs)
    if perm is None:
        return
    image = tuple(lam[perm[i]] for i in range(rs.rank))
    assert quantum_dim(rs, image, q) == pytest.approx(quantum_dim(rs, lam, q), rel=1e-10)


@settings(max_examples=30, deadline=None)
@given(weights())
def test_exact_dimension_evaluates_to_float(case):
    rs, lam = case
    if sum(lam) > 8:
        return
    exact = quantum_dim_exact(rs, lam)
    assert exact.evaluate(0.8) == pytest.approx(quantum_dim(rs, lam, 0.8), rel=1e-9)
    assert exact.coefficient_sum() == classical_dim(rs, lam)


def test_e8_large_weight_stays_finite_in_log_domain():
    rs = build_root_system("E", 8)
    rep = dim_sandwich_check(rs, (0, 0, 0, 0, 0, 0, 0, 40), 0.05)
    assert rep.holds and math.isfinite(rep.log_value)
