from __future__ import annotations

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fusionlab.fusion import load_custom
from fusionlab.metric import (
    boundary,
    build_balls,
    c_x_constant,
    folner_scan,
    generating_set,
    inner_boundary,
    weight,
)
from fusionlab.models import SOModel, SUModel, UFModel, UFWord

from test_fusion import z2_doc


def brute_boundary(model, X, A, window):
    """Scan every label below ``window`` directly, no Frobenius shortcut."""
    A = set(A)
    out = set()
    for a in range(window):
        supports = [set(model.product(a, x)) for x in X]
        if a in A and any(not s <= A for s in supports):
            out.add(a)
        if a not in A and any(s & A for s in supports):
            out.add(a)
    return out


def test_su_spheres_are_singletons():
    t = build_balls(SUModel(0.5), [1], 25)
    assert t.spheres == [[n] for n in range(26)]
    assert t.ball_sizes[0] == 1 and t.spheres[0] == [0]


def test_uf_sphere_counts():
    uf = UFModel(0.5)
    t = build_balls(uf, uf.generators(), 5)
    assert [len(s) for s in t.spheres] == [1, 2, 4, 8, 16, 32]
    assert t.spheres[0] == [UFWord("")]


def test_generating_set_symmetry():
    uf = UFModel(0.5)
    assert generating_set(uf, ["a", "A"]).symmetric
    assert not generating_set(uf, ["a"]).symmetric
    with pytest.raises(ValueError):
        generating_set(uf, ["a"], symmetric=True)


@pytest.mark.parametrize("model", [SUModel(0.5), SOModel(0.5)])
@pytest.mark.parametrize("M", [0, 1, 4, 9])
def test_interval_boundaries(model, M):
    A = set(range(M + 1))
    assert boundary(model, [1], A) == {M, M + 1}
    assert inner_boundary(model, [1], A) == {M}


def test_empty_set():
    assert boundary(SUModel(0.5), [1], set()) == set()
    assert inner_boundary(SUModel(0.5), [1], set()) == set()


def test_closed_fragment_has_no_inner_boundary():
    m = load_custom(z2_doc())
    assert inner_boundary(m, ["g"], {"e", "g"}) == set()


def test_uf_inner_boundary_of_ball_is_sphere():
    uf = UFModel(0.5)
    t = build_balls(uf, uf.generators(), 3)
    assert inner_boundary(uf, uf.generators(), t.ball(2)) == set(t.spheres[2])


subsets = st.sets(st.integers(0, 14), min_size=1, max_size=10)


@given(subsets, st.sampled_from([1, 2, 3]))
def test_boundary_matches_brute_force(A, x):
    for model in (SUModel(0.5), SOModel(0.5)):
        assert boundary(model, [x], A) == brute_boundary(model, [x], A, 40)


@given(subsets)
def test_inner_boundary_inside_boundary_and_additivity(A):
    for model in (SUModel(0.7), SOModel(0.3)):
        inner, full = inner_boundary(model, [1], A), boundary(model, [1], A)
        assert inner <= full
        outer = full - inner
        assert weight(model, full) == pytest.approx(weight(model, inner) + weight(model, outer), rel=1e-12)


@pytest.mark.parametrize("model", [SUModel(0.5), SOModel(0.6), UFModel(0.5)])
def test_inner_boundary_of_ball_within_sphere(model):
    X = model.generators() if isinstance(model, UFModel) else [1]
    t = build_balls(model, X, 5)
    for n in range(2, 6):
        assert inner_boundary(model, X, t.ball(n)) <= set(t.spheres[n])


@pytest.mark.parametrize("model", [SUModel(0.5), SOModel(0.9), UFModel(0.6)])
def test_submultiplicativity(model):
    X = model.generators() if isinstance(model, UFModel) else [1]
    assert build_balls(model, X, 7 if isinstance(model, UFModel) else 40).submultiplicativity_violations() == []


def test_interval_scan_su():
    s = folner_scan(SUModel(0.5), [1], "intervals", 40)
    assert abs(s.last.inner_ratio - 0.75) < 1e-9
    assert abs(s.last.outer_ratio - 3.75) < 1e-9
    inner = [r.inner_ratio for r in s.rows]
    assert all(b < a + 1e-14 for a, b in zip(inner, inner[1:]))
    assert all(b < a for a, b in zip(inner[:20], inner[1:20]))
    assert all(r.inner_ratio <= r.outer_ratio for r in s.rows)


def test_interval_scan_so():
    s = folner_scan(SOModel(0.5), [1], "intervals", 40)
    assert abs(s.last.inner_ratio - 0.9375) < 1e-9
    assert abs(s.last.outer_ratio - 15.9375) < 1e-9


def test_extrapolation_beats_raw_when_converging_slowly():
    q = 0.9
    s = folner_scan(SUModel(q), [1], "intervals", 60)
    raw = abs(s.last.inner_ratio - (1 - q * q))
    assert abs(s.extrapolated_inner - (1 - q * q)) < raw


@pytest.mark.parametrize("model, step", [(SUModel(1.0), 1), (SOModel(1.0), 2)])
def test_amenable_ratios_go_to_zero(model, step):
    s = folner_scan(model, [1], "intervals", 60)
    for M, row in enumerate(s.rows):
        dims = [step * n + 1 for n in range(M + 2)]
        size = sum(d * d for d in dims[:-1])
        assert row.inner_ratio == pytest.approx(dims[M] ** 2 / size, rel=1e-14)
        assert row.outer_ratio == pytest.approx((dims[M] ** 2 + dims[M + 1] ** 2) / size, rel=1e-14)
    # the inner ratio decays like 3/M and the outer like 6/M
    assert s.rows[20].inner_ratio < 0.2
    assert s.rows[40].outer_ratio < 0.2
    assert s.last.outer_ratio < 0.11


def test_ball_scan_agrees_with_intervals_for_su():
    a = folner_scan(SUModel(0.5), [1], "balls", 15)
    b = folner_scan(SUModel(0.5), [1], "intervals", 15)
    assert [r.inner_ratio for r in a.rows] == pytest.approx([r.inner_ratio for r in b.rows], rel=1e-13)


def test_interval_minimizes_inner_ratio_on_small_fragment():
    su = SUModel(0.5)
    s = folner_scan(su, [1], "exhaustive", fragment=range(9))
    assert len(s.rows) == 2**9 - 1
    by_set = {}
    for row in s.rows:
        A = frozenset(int(v) for v in row.descriptor.strip("{}").split(","))
        by_set[A] = row.inner_ratio
    for A, ratio in by_set.items():
        assert ratio >= by_set[frozenset(range(max(A) + 1))] * (1 - 1e-12)


def test_exhaustive_refuses_large_fragment():
    with pytest.raises(ValueError, match="refused"):
        folner_scan(SUModel(0.5), [1], "exhaustive", fragment=range(21))


def test_interval_strategy_needs_su_or_so():
    with pytest.raises(ValueError):
        folner_scan(UFModel(0.5), ["a", "A"], "intervals", 5)


def test_c_x_constant():
    r = c_x_constant(SUModel(0.5), [1], 15)
    assert r.M_X == 2 and r.X_size == pytest.approx(6.25)
    assert r.constant == pytest.approx(13.5)
    assert r.verified
    r = c_x_constant(SOModel(0.5), [1], 15)
    assert r.M_X == 3 and r.constant == pytest.approx(83.6875)
    assert r.verified


def test_c_x_constant_uf():
    uf = UFModel(0.5)
    r = c_x_constant(uf, uf.generators(), 5)
    assert r.M_X == 2 and r.verified


def test_sizes_past_double_range():
    t = build_balls(SOModel(0.05), [1], 120)
    assert math.isinf(t.ball_sizes[-1])
    assert math.isfinite(t.log_ball_sizes[-1])
    s = folner_scan(SOModel(0.05), [1], "intervals", 120)
    assert s.last.inner_ratio == pytest.approx(1 - 0.05**4, rel=1e-12)


@settings(max_examples=25)
@given(st.floats(0.2, 0.95))
def test_exact_ball_sizes_match_float(q):
    t = build_balls(SUModel(q), [1], 20, exact=True)
    for e, f in zip(t.exact_ball_sizes, t.ball_sizes):
        assert e.evaluate(q) == pytest.approx(f, rel=1e-11)
