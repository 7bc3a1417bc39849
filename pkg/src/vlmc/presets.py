"""Ready-made trees: the worked finite example, the comb and bamboo
families, the four flower bamboo, and finite comb truncations."""

from __future__ import annotations

from fractions import Fraction

from .context_tree import ContextTree, build_bamboo, build_comb, build_finite_tree
from .families import ConstantFamily, IndifferentFamily, PeriodicFamily, QFamily, ZetaFamily


def intro_tree() -> ContextTree:
    """Height-4 tree with contexts {1, 00, 011, 0100, 0101}."""
    return build_finite_tree(
        {
            "1": Fraction(2, 5),
            "00": Fraction(1, 2),
            "011": Fraction(3, 10),
            "0100": Fraction(1, 4),
            "0101": Fraction(3, 5),
        }
    )


def four_flower_bamboo(
    q00_0="0.4", q010_0="0.6", q011_0="0.8", q1_0="0.3"
) -> ContextTree:
    """Finite tree with contexts {00, 010, 011, 1} (defaults: the standard
    drawing values)."""
    return build_finite_tree(
        {
            "00": Fraction(q00_0),
            "010": Fraction(q010_0),
            "011": Fraction(q011_0),
            "1": Fraction(q1_0),
        }
    )


def order1_tree(q0_0=Fraction(2, 5), q1_0=Fraction(7, 10)) -> ContextTree:
    """Contexts {0, 1}: an order-1 Markov chain with rows (q0), (q1)."""
    return build_finite_tree({"0": q0_0, "1": q1_0})


def bernoulli_tree(p1=Fraction(1, 2)) -> ContextTree:
    """Memoryless source as an order-1 tree with identical rows."""
    return build_finite_tree({"0": 1 - p1, "1": 1 - p1})


def comb_constant(a=Fraction(1, 2), q_inf0=Fraction(1, 2)) -> ContextTree:
    """Infinite comb with q_{0^n 1}(0) = a for every n (memoryless source)."""
    return build_comb(ConstantFamily(a), q_inf0)


def comb_alternating(a=Fraction(3, 10), b=Fraction(7, 10), q_inf0=Fraction(1, 2)) -> ContextTree:
    """Comb with q_{0^n 1}(0) alternating a (n even) / b (n odd)."""
    return build_comb(PeriodicFamily([a, b]), q_inf0)


def comb_zeta(alpha=3.0, q_inf0=0.5) -> ContextTree:
    return build_comb(ZetaFamily(alpha), q_inf0)


def comb_indifferent(alpha=1.5, q_inf0=0.5) -> ContextTree:
    return build_comb(IndifferentFamily(alpha), q_inf0)


def bamboo_constant(u0=Fraction(1, 2), v0=Fraction(1, 2), q_inf0=Fraction(1, 2)) -> ContextTree:
    """Bamboo blossom with constant families: q_{(01)^n 1}(0) = u0,
    q_{(01)^n 00}(0) = v0."""
    return build_bamboo(ConstantFamily(u0), ConstantFamily(v0), q_inf0)


def bamboo(fam1: QFamily, fam00: QFamily, q_inf0=Fraction(1, 2)) -> ContextTree:
    return build_bamboo(fam1, fam00, q_inf0)


def finite_comb(n_teeth: int, qs, handle_q0) -> ContextTree:
    """Comb truncated to contexts {0^k 1 : k < n_teeth} plus the handle 0^n_teeth.

    qs[k] is q_{0^k 1}(0); handle_q0 is q_{0^n_teeth}(0).
    """
    table = {"0" * k + "1": qs[k] for k in range(n_teeth)}
    table["0" * n_teeth] = handle_q0
    return build_finite_tree(table)
