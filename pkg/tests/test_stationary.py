import math
import random
from fractions import Fraction as F

import pytest

from vlmc import errors
from vlmc.context_tree import build_comb, build_finite_tree
from vlmc.families import ConstantFamily, PeriodicFamily, TableThenConstantFamily
from vlmc.presets import (
    bamboo_constant,
    comb_constant,
    finite_comb,
    four_flower_bamboo,
    intro_tree,
    order1_tree,
)
from vlmc.stationary import (
    StationaryMeasure,
    check_palindrome_identity,
    solve,
    solve_bamboo,
    solve_comb,
    solve_finite_tree,
)


# --- comb: Prop-level case analysis ----------------------------------------


def test_comb_memoryless_identity():
    # constant family a: geometric c_n, S(1) = 1/(1-a), pi(1) = 1 - a
    for a in (F(3, 10), F(1, 2), F(4, 5)):
        sol = solve_comb(ConstantFamily(a), F(1, 2))
        assert sol.case_tag == "irreducible"
        assert sol.S1 == 1 / (1 - a)
        assert sol.pi1 == 1 - a


def test_comb_trivial_when_q1_is_zero():
    sol = solve_comb(ConstantFamily(F(0)), F(1, 2))
    assert sol.S1 == 1 and sol.pi1 == 1
    m = StationaryMeasure(build_comb(ConstantFamily(F(0)), F(1, 2)), sol)
    assert m.measure_of("111") == 1 and m.measure_of("0") == 0


def test_comb_irreducible_divergent_has_no_measure():
    with pytest.raises(errors.NoStationaryMeasure):
        solve_comb(ConstantFamily(F(1)), F(1, 2))


def test_comb_reducible_divergent_is_dirac():
    sol = solve_comb(ConstantFamily(F(1)), F(1))
    assert sol.case_tag == "reducible-divergent" and sol.pi1 == 0
    m = StationaryMeasure(build_comb(ConstantFamily(F(1)), F(1)), sol)
    assert m.measure_of("0000") == 1 and m.measure_of("1") == 0


def test_comb_reducible_convergent_one_parameter():
    with pytest.raises(errors.MissingParameter):
        solve_comb(ConstantFamily(F(1, 2)), F(1))
    sol = solve_comb(ConstantFamily(F(1, 2)), F(1), a=F(1, 3))
    assert sol.case_tag == "reducible-family"
    assert sol.pi1 == (1 - F(1, 3)) / 2
    with pytest.raises(errors.BadParams):
        solve_comb(ConstantFamily(F(1, 2)), F(1), a=F(3, 2))


def test_comb_cylinder_probabilities():
    m = solve(comb_constant(F(1, 2)))
    for n in range(11):
        assert m.measure_of("1" + "0" * n) == F(1, 2 ** (n + 1))
    assert m.measure_of("") == 1


def test_comb_node_formula_vs_product():
    # pi(0^n) = 1 - pi(1) sum_{k<n} c_k equals the product-formula value
    m = solve(comb_constant(F(3, 10)))
    sol = m.backend
    for n in range(12):
        assert m.measure_of("0" * n) == sol.pi_zeros(n)


def test_additivity_random_words():
    rng = random.Random(5)
    for tree in (comb_constant(F(3, 10)), bamboo_constant(F(3, 10), F(4, 5)), intro_tree()):
        m = solve(tree)
        for _ in range(60):
            w = "".join(rng.choice("01") for _ in range(rng.randrange(0, 10)))
            assert m.measure_of(w + "0") + m.measure_of(w + "1") == m.measure_of(w)


# --- bamboo ------------------------------------------------------------------


def test_bamboo_half_half():
    sol = solve_bamboo(ConstantFamily(F(1, 2)), ConstantFamily(F(1, 2)))
    assert sol.S1 == F(4, 3) and sol.S00 == F(4, 3)
    assert sol.case_tag == "generic"
    assert sol.pi1 == F(1, 2) and sol.pi00 == F(1, 4)
    # both equations of the linear system hold exactly
    assert sol.S1 * sol.pi1 + sol.S00 * sol.pi00 == 1
    assert (1 + sol.q1_0) * sol.pi1 + sol.pi00 == 1


def test_bamboo_S1_inequality_random_families():
    rng = random.Random(7)
    for _ in range(50):
        def rand_fam():
            k = rng.randrange(0, 3)
            vals = [F(rng.randrange(1, 20), 20) for _ in range(k + 1)]
            return TableThenConstantFamily(vals, F(rng.randrange(1, 20), 20))

        fam1, fam00 = rand_fam(), rand_fam()
        sol = solve_bamboo(fam1, fam00)
        assert 1 <= sol.S1 <= 1 + sol.q1_0
        assert sol.S00 >= 1
        assert sol.S1 * sol.pi1 + sol.S00 * sol.pi00 == 1
        assert (1 + sol.q1_0) * sol.pi1 + sol.pi00 == 1


def test_bamboo_dirac_mixture():
    # q_1(0) = 1 and S(00) infinite: half/half mixture on the two tails
    sol = solve_bamboo(ConstantFamily(F(1)), ConstantFamily(F(0)))
    assert sol.case_tag == "dirac-mixture"
    assert sol.pi1 == F(1, 2) and sol.pi00 == 0 and sol.pi_infty == F(1, 2)
    m = StationaryMeasure(
        __import__("vlmc.context_tree", fromlist=["build_bamboo"]).build_bamboo(
            ConstantFamily(F(1)), ConstantFamily(F(0)), F(0)
        ),
        sol,
    )
    # pi((10)^n) = 1/2 for n >= 1, pi(11) = 0
    assert m.measure_of("1010") == F(1, 2)
    assert m.measure_of("11") == 0


def test_bamboo_one_parameter_case():
    # q_1(0) = 1 with S(00) finite needs the tail mass parameter
    fam1 = ConstantFamily(F(1))
    fam00 = ConstantFamily(F(1, 2))  # c_n(00) = (1/2)^n, S(00) = 2
    with pytest.raises(errors.MissingParameter):
        solve_bamboo(fam1, fam00)
    sol = solve_bamboo(fam1, fam00, a=F(1, 4))
    assert sol.case_tag == "one-parameter" and sol.pi_infty == F(1, 4)
    assert sol.pi1 + sol.S00 * sol.pi00 == 1 - F(1, 4)
    assert 2 * sol.pi1 + sol.pi00 == 1


def test_bamboo_degenerate_determinant():
    # q_1(0) = 0 forces S(1) = 1, S(00) = 1, determinant 0
    fam1 = ConstantFamily(F(0))
    fam00 = ConstantFamily(F(1, 2))
    with pytest.raises(errors.MissingParameter):
        solve_bamboo(fam1, fam00)
    sol = solve_bamboo(fam1, fam00, a=F(1, 3))
    assert sol.case_tag == "degenerate-determinant-family"
    assert (1 + sol.q1_0) * sol.pi1 + sol.pi00 == 1


def test_bamboo_internal_node_identities():
    m = solve(bamboo_constant(F(3, 10), F(4, 5)))
    sol = m.backend
    for n in range(11):
        assert m.measure_of("0" + "10" * n) == sol.pi_0_10n(n)
        assert m.measure_of("10" * n) == sol.pi_10n(n)


def test_bamboo_partition_identity():
    sol = solve(bamboo_constant(F(3, 10), F(4, 5))).backend
    for N in range(1, 12):
        partial = sum(sol.pi1 * sol.c1(n) + sol.pi00 * sol.c00(n) for n in range(N + 1))
        assert partial == 1 - sol.pi_10n(N + 1)


# --- finite trees -----------------------------------------------------------


def test_order1_stationary_vector():
    m = solve(order1_tree(F(2, 5), F(7, 10)))
    assert m.measure_of("0") == F(7, 13)
    assert m.measure_of("1") == F(6, 13)


def test_finite_tree_fixed_point_exact():
    m = solve(four_flower_bamboo())
    sol = m.backend
    # one-step stationarity on the length-h marginals:
    # pi(w) = sum over v with v[1:] == w[:-1] of pi(v) q_{pref(v)}(w[-1])
    tree = m.tree
    for w in sol.vector:
        inflow = sum(
            sol.vector[v] * tree.context_q(tree.pref_context(v))[0 if w[-1] == "0" else 1]
            for v in sol.vector
            if v[1:] == w[:-1]
        )
        assert inflow == sol.vector[w]


def test_four_flower_determinant_and_uniqueness():
    t = four_flower_bamboo()
    q00, q010, q011, q1 = (t.context_q(c) for c in ("00", "010", "011", "1"))
    det = q00[1] * (1 + q1[0]) + q1[0] ** 2 * q010[0] + q1[0] * q1[1] * q011[0]
    assert det != 0
    m = solve(t)  # unique: no NonUnique raised
    assert m.measure_of("") == 1


def test_nonunique_detection():
    # two absorbing letters: the fixed space is two dimensional
    with pytest.raises(errors.NonUnique) as exc:
        solve(build_finite_tree({"0": F(1), "1": F(0)}))
    assert exc.value.dimension == 2


def test_height_too_large_exact():
    table = {w: F(1, 2) for w in ("".join(t) for t in __import__("itertools").product("01", repeat=9))}
    with pytest.raises(errors.HeightTooLarge):
        solve(build_finite_tree(table))


def test_finite_comb_matches_teeth_system():
    # the (n+1)-teeth comb linear system, n = 2:
    #   pi(0^{n+1}) + S_n pi(1) = 1
    #   q_{0^{n+1}}(1) pi(0^{n+1}) = q_{0^n 1}(0) c_n pi(1)
    qs = [F(1, 2), F(1, 3), F(2, 5)]
    handle = F(1, 4)
    t = finite_comb(3, qs, handle)
    m = solve(t)
    c = [F(1)]
    for q in qs:
        c.append(c[-1] * q)
    S_n = sum(c[:3])
    pi1 = m.measure_of("1")
    pi_handle = m.measure_of("000")
    assert pi_handle + S_n * pi1 == 1
    assert (1 - handle) * pi_handle == qs[2] * c[2] * pi1


def test_cross_backend_comb_truncation():
    # constant family: the truncated comb with the tail probability on the
    # handle reproduces the infinite solution exactly
    a = F(2, 5)
    inf = solve(comb_constant(a))
    for d in (3, 5):
        fin = solve(finite_comb(d, [a] * d, a))
        assert fin.measure_of("1") == inf.measure_of("1")
        for n in range(d):
            assert fin.measure_of("0" * n) == inf.measure_of("0" * n)
    # table-then-constant: discrepancy bounded by pi(1) R_d
    fam = TableThenConstantFamily([F(1, 3), F(3, 5)], F(2, 5))
    from vlmc.stationary import comb_R

    infsol = solve_comb(fam, F(1, 2))
    for d in (4, 6):
        fin = solve(finite_comb(d, [fam.q0(k) for k in range(d)], F(2, 5)))
        gap = abs(fin.measure_of("1") - infsol.pi1)
        assert gap <= infsol.pi1 * comb_R(fam, d)


# --- palindrome identity ----------------------------------------------------


def test_palindrome_identity_models():
    for tree in (
        comb_constant(F(1, 2)),
        comb_constant(F(3, 10)),
        bamboo_constant(F(3, 10), F(4, 5)),
        four_flower_bamboo(),
        intro_tree(),
    ):
        rep = check_palindrome_identity(solve(tree), 10)
        assert rep["max_discrepancy"] == 0


def test_palindrome_identity_random_finite_trees():
    rng = random.Random(99)
    for _ in range(20):
        table = _random_tree_table(rng, max_height=6)
        m = solve(build_finite_tree(table))
        assert check_palindrome_identity(m, 10)["max_discrepancy"] == 0


def _random_tree_table(rng, max_height):
    """Random saturated tree with strictly positive rational q's."""
    leaves = {}

    def grow(node):
        if len(node) >= max_height or (node and rng.random() < 0.55):
            leaves[node] = F(rng.randrange(1, 10), 10)
            return
        grow(node + "0")
        grow(node + "1")

    grow("0")
    grow("1")
    return leaves


def test_comb_partition_identity_truncated():
    # sum over contexts to depth N of pi(reversed context) = 1 - pi(1) R_{N+1}
    from vlmc.stationary import comb_R

    sol = solve_comb(ConstantFamily(F(2, 5)), F(1, 2))
    m = StationaryMeasure(comb_constant(F(2, 5)), sol)
    for N in (0, 3, 8):
        partial = sum(m.measure_of("1" + "0" * n) for n in range(N + 1))
        assert partial == 1 - sol.pi1 * comb_R(sol.fam, N + 1)


def test_periodic_family_solution():
    sol = solve_comb(PeriodicFamily([F(3, 10), F(7, 10)]), F(1, 2))
    # c: 1, 3/10, 21/100, ... S = (1 + 3/10)/(1 - 21/100)
    assert sol.S1 == (1 + F(3, 10)) / (1 - F(21, 100))
    assert sol.pi1 == 1 / sol.S1
