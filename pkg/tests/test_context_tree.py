import json
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as hst

from vlmc import errors
from vlmc.context_tree import build_comb, loads, validate
from vlmc.families import ConstantFamily
from vlmc.presets import bamboo_constant, comb_constant, four_flower_bamboo, intro_tree


def test_intro_tree_accepted_height_4():
    t = intro_tree()
    assert t.height == 4
    assert sorted(t.finite_q) == ["00", "0100", "0101", "011", "1"]


def test_single_leaf_not_saturated():
    with pytest.raises(errors.NotSaturated):
        validate({"finite_contexts": [{"word": "0", "q0": "0.5"}]})


def test_infinite_comb_accepted():
    t = comb_constant(F(1, 2))
    assert t.height is None
    assert t.kind == "comb"
    assert t.is_context("0001") and t.is_internal("000") and not t.is_context("000")


def test_missing_child_not_saturated():
    with pytest.raises(errors.NotSaturated):
        validate(
            {
                "finite_contexts": [
                    {"word": "1", "q0": "0.5"},
                    {"word": "01", "q0": "0.5"},
                    # 00 missing
                ]
            }
        )


def test_prefix_free_violation():
    with pytest.raises(errors.NotPrefixFree):
        validate(
            {
                "finite_contexts": [
                    {"word": "1", "q0": "0.5"},
                    {"word": "0", "q0": "0.5"},
                    {"word": "01", "q0": "0.5"},
                ]
            }
        )


def test_bad_probability():
    with pytest.raises(errors.BadProbability):
        validate({"finite_contexts": [{"word": "0", "q0": "0.7", "q1": "0.7"}]})
    with pytest.raises(errors.BadProbability):
        validate({"finite_contexts": [{"word": "0", "q0": "1.5"}]})


def test_dangling_branch():
    with pytest.raises(errors.DanglingBranch):
        validate(
            {
                "finite_contexts": [{"word": "00", "q0": "0.5"}],
                "infinite_branches": [
                    {"period": "0", "family": {"kind": "constant", "p": "0.5"}}
                ],
            }
        )


def test_leaf_extending_generated_context_rejected():
    with pytest.raises(errors.NotPrefixFree):
        validate(
            {
                "finite_contexts": [{"word": "11", "q0": "0.5"}],
                "infinite_branches": [
                    {"period": "0", "family": {"kind": "constant", "p": "0.5"}}
                ],
            }
        )


def test_two_branches_rejected():
    br = {"period": "0", "family": {"kind": "constant", "p": "0.5"}}
    br2 = {"period": "01", "families": [{"kind": "constant", "p": "0.5"}] * 2}
    with pytest.raises(errors.UnsupportedTree):
        validate({"infinite_branches": [br, br2]})


def test_rational_mode_rejects_bare_floats():
    with pytest.raises(ValueError):
        validate(
            {"finite_contexts": [{"word": "0", "q0": 0.5}, {"word": "1", "q0": 0.5}]},
            exact=True,
        )


# --- prefix function -------------------------------------------------------


def test_pref_intro_worked_example():
    t = intro_tree()
    assert t.pref("0101110").word == "011"
    assert t.pref("0101110").is_context


def test_pref_comb_examples():
    t = comb_constant(F(1, 2))
    res = t.pref("1000")
    assert res.is_context and res.word == "0001"
    res = t.pref("0")
    assert not res.is_context and res.word == "0"
    with pytest.raises(errors.InsufficientHistory):
        t.pref_context("0")


def test_pref_bamboo():
    t = bamboo_constant()
    assert t.pref("110").word == "011"
    assert t.pref("0011010").word == "01011"
    assert t.pref("00").word == "00"
    assert t.pref("10").kind == "internal" and t.pref("10").word == "01"


def test_cutset_property_random_prefixes():
    rng = random.Random(2024)
    trees = [intro_tree(), comb_constant(F(1, 2)), bamboo_constant(), four_flower_bamboo()]
    for t in trees:
        for _ in range(250):
            s = "".join(rng.choice("01") for _ in range(64))
            res = t.pref(s)
            # either exactly one context, or all 64 letters consumed inside
            # the infinite branch
            if not res.is_context:
                assert len(res.word) == 64 and t.branch is not None
                assert t.branch.is_path_node(res.word)


# --- minimal contexts and enumeration --------------------------------------


def test_minimal_contexts():
    assert comb_constant(F(1, 2)).minimal_contexts() == ["1"]
    assert bamboo_constant().minimal_contexts() == ["00", "1"]
    assert four_flower_bamboo().minimal_contexts() == ["00", "1"]


def test_leaves_to_depth():
    t = comb_constant(F(1, 2))
    assert t.leaves_to_depth(3) == ["001", "01", "1"]
    assert intro_tree().leaves_to_depth(4) == ["00", "0100", "0101", "011", "1"]
    assert intro_tree().leaves_to_depth(0) == []


def test_serialize_roundtrip_identity():
    for t in (intro_tree(), comb_constant(F(3, 10)), bamboo_constant(F(3, 10), F(4, 5))):
        doc = t.dumps()
        t2 = loads(doc)
        assert t2.dumps() == doc
        assert sorted(t2.finite_q.items()) == sorted(t.finite_q.items())


def test_generated_context_q_values():
    fam = ConstantFamily(F(3, 10))
    t = build_comb(fam, F(1, 2))
    assert t.context_q("0001") == (F(3, 10), F(7, 10))


@settings(max_examples=60, deadline=None)
@given(hst.text(alphabet="01", min_size=0, max_size=40))
def test_reversal_involution(w):
    assert w[::-1][::-1] == w


@settings(max_examples=60, deadline=None)
@given(hst.text(alphabet="01", min_size=1, max_size=12))
def test_pref_returns_suffix_of_input(w):
    t = bamboo_constant()
    res = t.pref(w)
    if res.is_context:
        # reversed context is a suffix of the queried word, and no proper
        # ancestor of it is a leaf
        assert w.endswith(res.word[::-1])
        for i in range(1, len(res.word)):
            assert not t.is_context(res.word[:i])
