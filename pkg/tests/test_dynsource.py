import itertools
import math
import random
from fractions import Fraction as F

import pytest

from vlmc import errors
from vlmc.dynsource import (
    Iv,
    accumulation_derivatives,
    build_map,
    build_subdivision,
    merge_intervals,
    orbit_letters,
    monte_carlo_prefix_frequency,
    same_endpoints,
    seed_interval,
)
from vlmc.families import ConstantFamily
from vlmc.presets import (
    bamboo_constant,
    bernoulli_tree,
    comb_constant,
    comb_indifferent,
    four_flower_bamboo,
    order1_tree,
)
from vlmc.stationary import StationaryMeasure, solve, solve_comb


def words_upto(n):
    for ell in range(1, n + 1):
        yield from ("".join(t) for t in itertools.product("01", repeat=ell))


@pytest.fixture(scope="module")
def comb_map():
    t = comb_constant(F(1, 2))
    m = solve(t)
    return m, build_map(t, m, 12)


@pytest.fixture(scope="module")
def flower_map():
    t = four_flower_bamboo()
    m = solve(t)
    return m, build_map(t, m, 9)


@pytest.fixture(scope="module")
def bamboo_map():
    t = bamboo_constant(F(3, 10), F(4, 5))
    m = solve(t)
    return m, build_map(t, m, 12)


# --- subdivision ------------------------------------------------------------


def test_subdivision_lengths_and_order():
    m = solve(comb_constant(F(1, 2)))
    sub = build_subdivision(m, 3)
    assert sub.interval("1").length == F(1, 2)
    assert sub.interval("10").length == m.measure_of("01") == F(1, 4)
    # alphabetical order = left-to-right order
    prev_hi = 0
    for w in sub.words(3):
        iv = sub.interval(w)
        assert iv.lo == prev_hi
        prev_hi = iv.hi
    assert prev_hi == 1


def test_subdivision_nesting_and_partition():
    m = solve(four_flower_bamboo())
    sub = build_subdivision(m, 5)
    for w in words_upto(4):
        iv = sub.interval(w)
        i0, i1 = sub.interval(w + "0"), sub.interval(w + "1")
        assert iv.lo == i0.lo and i0.hi == i1.lo and i1.hi == iv.hi
        assert iv.length == i0.length + i1.length
    assert sum(sub.interval(w).length for w in sub.words(5)) == 1


def test_subdivision_order1_coding_split():
    m = solve(order1_tree(F(2, 5), F(7, 10)))
    sub = build_subdivision(m, 2)
    assert sub.interval("0").length == m.measure_of("0") == F(7, 13)


def test_compact_convention():
    m = solve(comb_constant(F(1, 2)))
    sub = build_subdivision(m, 4)
    assert sub.interval("0000").lo_closed and sub.interval("0000").contains(F(0))
    assert not sub.interval("0001").lo_closed
    assert sub.interval("1").hi_closed and not sub.interval("1").lo_closed


# --- the map ----------------------------------------------------------------


def test_slopes_are_inverse_probabilities(flower_map):
    m, tmap = flower_map
    p = next(p for p in tmap.pieces if p.word == "000")
    assert 1 / p.q == F(5, 2)  # 1/q_00(0) with q_00(0) = 2/5
    for p in tmap.pieces:
        q0, q1 = m.tree.context_q(p.context)
        assert p.q == (q0 if p.letter == "0" else q1)
        assert p.source.length == p.q * p.target.length


def test_bernoulli_two_full_branches():
    t = bernoulli_tree(F(13, 20))  # P(1) = p = 13/20
    m = solve(t)
    tmap = build_map(t, m, 4)
    # T is linear on each coding interval onto [0, 1]
    split = m.measure_of("0")
    assert split == F(7, 20)
    for x in (F(1, 10), F(3, 10), split):
        assert tmap.apply(x) == x / split
    for x in (F(1, 2), F(9, 10), F(1)):
        assert tmap.apply(x) == (x - split) / (1 - split)


def test_map_identity_lemma(comb_map, flower_map, bamboo_map):
    for m, tmap in (comb_map, flower_map, bamboo_map):
        for w in [""] + list(words_upto(7)):
            for a in "01":
                img = tmap.image(tmap.sub.interval(a + w))
                assert same_endpoints(img, tmap.sub.interval(w)), (a, w)


def test_preimage_of_word_intervals(flower_map):
    m, tmap = flower_map
    # T^-1 I_w = I_0w union I_1w
    for w in words_upto(5):
        pre = tmap.preimage(tmap.sub.interval(w))
        expect = merge_intervals([tmap.sub.interval("0" + w), tmap.sub.interval("1" + w)])
        assert [(i.lo, i.hi) for i in pre] == [(i.lo, i.hi) for i in expect]


def test_apply_examples(comb_map):
    m, tmap = comb_map
    assert tmap.apply(F(1)) == 1
    # midpoints map to midpoints under the affine pieces
    p = tmap.pieces[3]
    mid = (p.source.lo + p.source.hi) / 2
    assert tmap.apply(mid) == (p.target.lo + p.target.hi) / 2


def test_apply_zone_unresolved(comb_map):
    _, tmap = comb_map
    z = tmap.zones[0]
    with pytest.raises(errors.UnresolvedPoint):
        tmap.apply(z.source.hi / 2)


def test_preimage_length_invariance(comb_map, flower_map, bamboo_map):
    rng = random.Random(31)
    for m, tmap in (comb_map, flower_map, bamboo_map):
        done = 0
        while done < 100:
            a, b = sorted(F(rng.randrange(0, 1 << 20), 1 << 20) for _ in range(2))
            if a == b:
                continue
            try:
                L = tmap.preimage_length(Iv(a, b))
            except errors.UnresolvedRegion:
                continue
            assert L == b - a
            done += 1


def test_preimage_length_bounds_on_residual(comb_map):
    _, tmap = comb_map
    z = tmap.zones[0]
    with pytest.raises(errors.UnresolvedRegion) as exc:
        tmap.preimage_length(Iv(F(0), z.target.hi / 2, lo_closed=True))
    assert exc.value.lower is not None and exc.value.upper is not None
    assert exc.value.lower <= exc.value.upper


def test_full_interval_preimage(flower_map):
    _, tmap = flower_map
    assert tmap.preimage_length(Iv(F(0), F(1), lo_closed=True)) == 1


def test_zero_mass_tree_refused():
    t = comb_constant(F(1), F(1))
    sol = solve_comb(ConstantFamily(F(1)), F(1))
    m = StationaryMeasure(t, sol)
    with pytest.raises(errors.ZeroMassTree):
        build_map(t, m, 6)


# --- orbits and seed sets ----------------------------------------------------


def test_orbit_letters_match_interval(comb_map, flower_map):
    for m, tmap in (comb_map, flower_map):
        for w in ("010", "1101", "00110"):
            iv = tmap.sub.interval(w)
            x = (iv.lo + iv.hi) / 2
            assert orbit_letters(tmap, x, len(w)) == w


def test_seed_interval_identity(comb_map, flower_map, bamboo_map):
    for m, tmap in (comb_map, flower_map, bamboo_map):
        for w in words_upto(8):
            got = seed_interval(tmap, w)
            want = tmap.sub.interval(w)
            assert same_endpoints(got, want)
            assert got[0].length == m.measure_of(w[::-1])


def test_monte_carlo_prefix_frequency(comb_map):
    m, tmap = comb_map
    freq = monte_carlo_prefix_frequency(tmap, "10", 100000, seed=12)
    p = float(m.measure_of("01"))
    sigma = (p * (1 - p) / 100000) ** 0.5
    assert abs(freq - p) <= 3 * sigma


# --- continuity and monotonicity ---------------------------------------------


def test_monotone_and_continuous_on_coding_blocks(flower_map):
    _, tmap = flower_map
    for prev, cur in zip(tmap.pieces, tmap.pieces[1:]):
        if prev.letter == cur.letter and prev.source.hi == cur.source.lo:
            assert prev.target.hi == cur.target.lo  # continuity at the junction
        assert prev.source.lo < cur.source.lo  # increasing layout


# --- accumulation derivatives -------------------------------------------------


def test_comb_constant_derivatives(comb_map):
    _, tmap = comb_map
    rep = accumulation_derivatives(tmap)
    at0 = next(e for e in rep["points"] if e["point"] == 0)
    assert at0["derivative"] == 2 and not at0["indifferent"]


def test_indifferent_derivatives():
    t = comb_indifferent(1.5)
    m = solve(t)
    tmap = build_map(t, m, 8)
    rep = accumulation_derivatives(tmap)
    at0 = next(e for e in rep["points"] if e["point"] == 0)
    atpi0 = next(e for e in rep["points"] if e["point"] != 0)
    assert at0["derivative"] == 1.0 and at0["indifferent"]
    assert atpi0["derivative"] == math.inf
    # slope on the piece over I_{0 . 0^n 1} is 1/q_{0^n 1}(0) -> 1, monotone
    fam = m.backend.fam
    slopes = [1 / fam.q0(n) for n in range(1001)]
    assert all(s > 1 for s in slopes)
    assert all(b < a + 1e-6 for a, b in zip(slopes, slopes[1:]))


def test_bamboo_derivatives():
    t = bamboo_constant()
    m = solve(t)
    tmap = build_map(t, m, 9)
    rep = accumulation_derivatives(tmap)
    assert [e["derivative"] for e in rep["points"]] == [2, 2, 2, 2]
    a0 = rep["points"][0]["point"]
    a1 = rep["points"][2]["point"]
    assert a0 == F(1, 6) and a1 == F(2, 3)
    # the accumulation points sit inside the truncation zones
    zones = sorted(tmap.zones, key=lambda z: z.source.lo)
    assert zones[0].source.lo < a0 < zones[0].source.hi
    assert zones[1].source.lo < a1 < zones[1].source.hi


def test_limit_undefined_for_oscillating_family():
    from vlmc.presets import comb_alternating

    t = comb_alternating()
    m = solve(t)
    tmap = build_map(t, m, 8)
    with pytest.raises(errors.LimitUndefined):
        accumulation_derivatives(tmap)
