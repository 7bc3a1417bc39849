"""Stationary measures of VLMCs.

Three solver backends:

* `solve_comb`: closed forms on the infinite comb.  With c_0 = 1 and
  c_n = prod_{k<n} q_{0^k 1}(0), a stationary measure exists in the
  irreducible case (q_{0^inf}(0) != 1) iff S(1) = sum c_n converges, and
  then pi(1) = 1/S(1), pi(1 0^n) = pi(1) c_n, pi(0^n) = 1 - pi(1)
  sum_{k<n} c_k.  The reducible case q_{0^inf}(0) = 1 yields the Dirac
  measure on 0^inf (divergent series) or a one-parameter family pi_a
  with pi_a(1) = (1-a)/S(1).

* `solve_bamboo`: the bamboo blossom.  With c_n(1), c_n(00) the context
  cylinder coefficients, (pi(1), pi(00)) solves
      S(1) pi(1) + S(00) pi(00) = 1,
      (1 + q_1(0)) pi(1) + pi(00) = 1,
  unique iff the determinant S(1) - S(00)(1 + q_1(0)) is nonzero; the
  q_1(0) = 1 cases give the half-half Dirac mixture on the two
  alternating tails (S(00) infinite) or a one-parameter family indexed
  by the mass a of the alternating tail.

* `solve_finite_tree`: the letter process of a finite tree of height h
  is an order-h Markov chain on words of length h; its stationary vector
  is solved exactly (rational mode) or numerically.

`StationaryMeasure` wraps a backend and evaluates pi on arbitrary
cylinders through the product formula
    pi(w) = prod_k q_{pref(w_1..w_k)}(w_{k+1}),
with internal-node conditionals q_u(alpha) = pi(u~ alpha)/pi(u~)
(defined as 0 when the denominator vanishes).
"""

from __future__ import annotations

import math
from fractions import Fraction

from . import words as W
from .context_tree import ContextTree, build_bamboo, build_comb
from .errors import (
    BadParams,
    HeightTooLarge,
    MissingParameter,
    NonUnique,
    NoStationaryMeasure,
    SeriesUndecided,
    SolverError,
    UnsupportedTree,
)
from .families import (
    ConstantFamily,
    IndifferentFamily,
    PeriodicFamily,
    QFamily,
    TableThenConstantFamily,
    TableThenGeometricFamily,
    ZetaFamily,
)
from .numeric import Number

_EXACT_CAP = 8  # max height for exact dense elimination
_DENSE_CAP = 12  # max height for dense float solving
_HEIGHT_CAP = 20


# --------------------------------------------------------------------------
# comb
# --------------------------------------------------------------------------


def comb_S1(fam: QFamily):
    """sum_{n>=0} c_n in closed form where the family allows, else numerically.

    Returns math.inf when the series diverges.
    """
    if not fam.series_c_converges():
        return math.inf
    if isinstance(fam, ConstantFamily):
        return 1 / (1 - fam.p)
    if isinstance(fam, TableThenConstantFamily):
        h = len(fam.values)
        head = sum(fam.c(n) for n in range(h))
        ch = fam.c(h)
        if ch == 0:
            return head
        return head + ch / (1 - fam.tail)
    if isinstance(fam, PeriodicFamily):
        p = len(fam.values)
        rho = fam.period_product()
        return sum(fam.c(n) for n in range(p)) / (1 - rho)
    if isinstance(fam, ZetaFamily):
        return 1.0 + fam.hurwitz(fam.alpha - 1, 1) / fam.hurwitz(fam.alpha, 1)
    if isinstance(fam, IndifferentFamily):
        import mpmath

        return float(mpmath.zeta(fam.alpha))
    # table-then-geometric: q_n -> 0, sum numerically with a vanishing tail
    total, n = 0.0, 0
    while True:
        cn = fam.c(n)
        total += cn
        if n > len(getattr(fam, "values", [])) and cn <= 1e-25 * max(total, 1.0):
            q = fam.q0(n)
            return total + cn * q / (1 - q)
        n += 1
        if n > 100000:
            raise SeriesUndecided("comb series did not settle numerically")


def comb_R(fam: QFamily, n: int):
    """Rest R_n = sum_{k>=n} c_k."""
    if isinstance(fam, ConstantFamily):
        if fam.p == 1:
            return math.inf
        return fam.c(n) / (1 - fam.p)
    if isinstance(fam, TableThenConstantFamily):
        h = len(fam.values)
        if n >= h:
            cn = fam.c(n)
            return cn / (1 - fam.tail) if cn != 0 else cn
        return sum(fam.c(k) for k in range(n, h)) + comb_R(fam, h)
    if isinstance(fam, PeriodicFamily):
        p = len(fam.values)
        rho = fam.period_product()
        return sum(fam.c(n + i) for i in range(p)) / (1 - rho)
    if isinstance(fam, ZetaFamily):
        if n == 0:
            return comb_S1(fam)
        za = fam.hurwitz(fam.alpha, 1)
        return (fam.hurwitz(fam.alpha - 1, n) - (n - 1) * fam.hurwitz(fam.alpha, n)) / za
    if isinstance(fam, IndifferentFamily):
        return fam.hurwitz_tail(n)
    # numeric tail
    total, k = 0.0, n
    while True:
        ck = fam.c(k)
        total += ck
        if ck <= 1e-25 * max(total, 1e-300):
            return total
        k += 1
        if k - n > 100000:
            raise SeriesUndecided("rest series did not settle numerically")


def _indifferent_hurwitz_tail(self, n):
    import mpmath

    return float(mpmath.zeta(self.alpha, n + 1))


IndifferentFamily.hurwitz_tail = _indifferent_hurwitz_tail


class CombSolution:
    """Solved infinite comb.

    case_tag: "irreducible" | "reducible-divergent" | "reducible-family".
    In the reducible-family case, `a` = pi_a(0^inf).
    """

    def __init__(self, fam, q_inf0, case_tag, pi1, S1, a=None):
        self.fam = fam
        self.q_inf0 = q_inf0
        self.case_tag = case_tag
        self.pi1 = pi1
        self.S1 = S1
        self.a = a
        zero = pi1 - pi1
        self._csum = [zero]  # sum_{k<n} c_k

    def c(self, n: int) -> Number:
        return self.fam.c(n)

    def R(self, n: int):
        return comb_R(self.fam, n)

    def sum_c_below(self, n: int) -> Number:
        cs = self._csum
        while len(cs) <= n:
            cs.append(cs[-1] + self.fam.c(len(cs) - 1))
        return cs[n]

    def pi_zeros(self, n: int) -> Number:
        """pi(0^n) = 1 - pi(1) sum_{k<n} c_k."""
        return 1 - self.pi1 * self.sum_c_below(n)

    def is_trivial(self) -> bool:
        return self.pi1 in (0, 1) or float(self.pi1) in (0.0, 1.0)


def solve_comb(fam: QFamily, q_inf0: Number, a=None) -> CombSolution:
    """Existence/unicity case analysis for the infinite comb."""
    converges = fam.series_c_converges()
    if q_inf0 != 1:
        if not converges:
            raise NoStationaryMeasure(
                "irreducible comb: sum c_n diverges, no stationary probability measure"
            )
        S1 = comb_S1(fam)
        return CombSolution(fam, q_inf0, "irreducible", pi1=1 / S1, S1=S1)
    if not converges:
        zero = 0 if fam.exact else 0.0
        return CombSolution(fam, q_inf0, "reducible-divergent", pi1=zero, S1=math.inf, a=1)
    if a is None:
        raise MissingParameter(
            "reducible comb with convergent series: a one-parameter family; "
            "pass a = pi_a(0^inf) in [0, 1]"
        )
    if not (0 <= a <= 1):
        raise BadParams(f"parameter a must lie in [0, 1], got {a}")
    S1 = comb_S1(fam)
    return CombSolution(fam, q_inf0, "reducible-family", pi1=(1 - a) / S1, S1=S1, a=a)


# --------------------------------------------------------------------------
# bamboo blossom
# --------------------------------------------------------------------------


class BambooSolution:
    """Solved bamboo blossom.

    case_tag: "generic" | "degenerate-determinant-family" | "dirac-mixture"
    | "one-parameter".  pi_infty is the stationary mass of the alternating
    tail (10)^inf (split evenly with its 1-extension in the mixture case).
    """

    def __init__(self, fam1, fam00, q_inf0, case_tag, pi1, pi00, S1, S00, pi_infty, a=None):
        self.fam1 = fam1
        self.fam00 = fam00
        self.q_inf0 = q_inf0
        self.case_tag = case_tag
        self.pi1 = pi1
        self.pi00 = pi00
        self.S1 = S1
        self.S00 = S00
        self.pi_infty = pi_infty
        self.a = a
        self.q1_0 = fam1.q0(0)
        self.q00_0 = fam00.q0(0)
        one = pi1 - pi1 + 1
        self._c1 = [one]
        self._c00 = [one]
        self._a1 = [pi1]
        self._b1 = []
        self._a0 = [pi00]
        self._b0 = []

    # context cylinder coefficients: pi(1 (10)^n) = pi(1) c_n(1), etc.
    def c1(self, n: int) -> Number:
        cs = self._c1
        while len(cs) <= n:
            m = len(cs) - 1
            cs.append(cs[-1] * self.q1_0 * self.fam1.q1(m))
        return cs[n]

    def c00(self, n: int) -> Number:
        cs = self._c00
        while len(cs) <= n:
            m = len(cs) - 1
            cs.append(cs[-1] * self.q1_0 * self.fam00.q1(m))
        return cs[n]

    def S1_partial(self, n: int) -> Number:
        """S_n(1) = sum_{k<=n} c_k(1); S_{-1} = 0."""
        return sum(self.c1(k) for k in range(n + 1)) if n >= 0 else self.pi1 - self.pi1

    def S00_partial(self, n: int) -> Number:
        return sum(self.c00(k) for k in range(n + 1)) if n >= 0 else self.pi1 - self.pi1

    # internal node cylinders
    def pi_10n(self, n: int) -> Number:
        """pi((10)^n) = 1 - pi(1) S_{n-1}(1) - pi(00) S_{n-1}(00)."""
        return 1 - self.pi1 * self.S1_partial(n - 1) - self.pi00 * self.S00_partial(n - 1)

    def pi_0_10n(self, n: int) -> Number:
        """pi(0 (10)^n) = 1 - pi(1) S_n(1) - pi(00) S_{n-1}(00)."""
        return 1 - self.pi1 * self.S1_partial(n) - self.pi00 * self.S00_partial(n - 1)

    # cylinders of internal nodes extended by a final 1, by double recursion
    def a1(self, n: int) -> Number:
        """pi((10)^n 1)."""
        seq = self._a1
        while len(seq) <= n:
            m = len(seq) - 1
            seq.append(self.b1(m) - self.pi00 * self.c00(m) * self.fam00.q1(m))
        return seq[n]

    def b1(self, n: int) -> Number:
        """pi(0 (10)^n 1) = pi((10)^n 1) - pi(1 (10)^n 1)."""
        seq = self._b1
        while len(seq) <= n:
            m = len(seq)
            seq.append(self.a1(m) - self.pi1 * self.c1(m) * self.fam1.q1(m))
        return seq[n]

    def a0(self, n: int) -> Number:
        """pi((10)^n 00)."""
        seq = self._a0
        while len(seq) <= n:
            m = len(seq) - 1
            seq.append(self.b0(m) - self.pi00 * self.c00(m) * self.fam00.q0(m) * self.q00_0)
        return seq[n]

    def b0(self, n: int) -> Number:
        """pi(0 (10)^n 00); base pi(000) = pi(00) q_00(0)."""
        seq = self._b0
        while len(seq) <= n:
            m = len(seq)
            if m == 0:
                seq.append(self.pi00 * self.q00_0)
            else:
                seq.append(
                    self.a0(m) - self.pi1 * self.c1(m) * self.fam1.q0(m) * self.q00_0
                )
        return seq[n]

    def is_trivial(self) -> bool:
        return self.case_tag == "dirac-mixture"


def _bamboo_S(fam: QFamily, q1_0: Number, which: str, exact: bool):
    """S(1) or S(00): sum of products q_1(0)^n prod_{k<n} fam.q1(k)."""
    ec = fam.eventually_constant()
    # c ratio beyond the horizon: r = q1_0 * (1 - tail)
    def c(n):
        out = 1 if exact else 1.0
        for k in range(n):
            out *= q1_0 * fam.q1(k)
        return out

    if ec is not None:
        h, tail = ec
        r = q1_0 * (1 - tail)
        ch = c(h)
        head = sum(c(n) for n in range(h))
        if ch == 0:
            return head
        if r >= 1:
            return math.inf
        return head + ch / (1 - r)
    if exact:
        raise SeriesUndecided(
            f"bamboo series S({which}) has no exact closed form for a "
            f"{fam.kind} family; use float mode"
        )
    total, n, cn = 0.0, 0, 1.0
    while True:
        total += cn
        cn = cn * q1_0 * float(fam.q1(n))
        n += 1
        if cn <= 1e-25 * max(total, 1.0):
            return total + cn / max(1e-12, 1 - q1_0 * float(fam.q1(n)))
        if n > 100000:
            return math.inf


def solve_bamboo(fam1: QFamily, fam00: QFamily, q_inf0: Number = 1, a=None) -> BambooSolution:
    """Existence/unicity case analysis for the bamboo blossom."""
    exact = fam1.exact and fam00.exact
    q1_0 = fam1.q0(0)
    S1 = _bamboo_S(fam1, q1_0, "1", exact)
    S00 = _bamboo_S(fam00, q1_0, "00", exact)
    zero = q1_0 - q1_0

    if q1_0 != 1:
        if S00 is math.inf or S1 is math.inf:
            raise SolverError("S(1), S(00) must be finite when q_1(0) != 1")
        det = S1 - S00 * (1 + q1_0)
        if det != 0:
            pi1 = (1 - S00) / det
            pi00 = (S1 - (1 + q1_0)) / det
            return BambooSolution(
                fam1, fam00, q_inf0, "generic", pi1, pi00, S1, S00, pi_infty=zero
            )
        if a is None:
            raise MissingParameter(
                "degenerate determinant S(1) = S(00)(1+q_1(0)): one-parameter "
                "family; pass a = pi(1) in [0, 1/(1+q_1(0))]"
            )
        if not (0 <= a <= 1 / (1 + q1_0)):
            raise BadParams(f"a = pi(1) must lie in [0, {1 / (1 + q1_0)}], got {a}")
        pi1 = a
        pi00 = 1 - (1 + q1_0) * a
        return BambooSolution(
            fam1,
            fam00,
            q_inf0,
            "degenerate-determinant-family",
            pi1,
            pi00,
            S1,
            S00,
            pi_infty=zero,
            a=a,
        )

    # q_1(0) = 1: S(1) = 1
    if S00 is math.inf:
        half = Fraction(1, 2) if exact else 0.5
        return BambooSolution(
            fam1, fam00, q_inf0, "dirac-mixture", half, zero, S1, math.inf, pi_infty=half
        )
    if a is None:
        raise MissingParameter(
            "q_1(0) = 1 with S(00) finite: one-parameter family; pass "
            "a = pi((10)^inf) in [0, 1]"
        )
    if not (0 <= a <= 1):
        raise BadParams(f"a must lie in [0, 1], got {a}")
    det = 1 - 2 * S00
    pi1 = (1 - a - S00) / det
    pi00 = (2 * a - 1) / det
    if not (0 <= pi1 <= 1 and 0 <= pi00 <= 1):
        raise BadParams(f"a = {a} gives no probability solution (pi1={pi1}, pi00={pi00})")
    return BambooSolution(
        fam1, fam00, q_inf0, "one-parameter", pi1, pi00, S1, S00, pi_infty=a, a=a
    )


# --------------------------------------------------------------------------
# finite trees
# --------------------------------------------------------------------------


class FiniteTreeSolution:
    """Stationary vector of the order-h letter chain of a finite tree."""

    def __init__(self, tree: ContextTree, vector: dict):
        self.tree = tree
        self.h = tree.height
        self.vector = vector  # word of length h -> probability
        self._node_cache = {}

    def node_prob(self, u: str) -> Number:
        """pi(u) for |u| <= h, by marginalizing the length-h law."""
        if u in self._node_cache:
            return self._node_cache[u]
        gap = self.h - len(u)
        if gap == 0:
            val = self.vector[u]
        else:
            val = sum(self.vector[x + u] for x in W.all_words(gap))
        self._node_cache[u] = val
        return val


def _pref_context_of_state(tree: ContextTree, w: str) -> str:
    return tree.pref_context(w)


def _exact_stationary(states, P_rows):
    """Left fixed vector(s) of a row-stochastic matrix, exact arithmetic.

    Returns the unique normalized stationary vector, or raises NonUnique
    with a basis when the fixed space has dimension > 1.
    """
    n = len(states)
    # Solve x (P - I) = 0  <=>  (P - I)^T x^T = 0; append normalization.
    A = [[P_rows[j][i] - (1 if i == j else 0) for j in range(n)] for i in range(n)]
    # Gaussian elimination to reduced row echelon form over Fractions
    rows = [list(map(Fraction, row)) for row in A]
    pivots = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, n) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][col]
        rows[r] = [x / inv for x in rows[r]]
        for i in range(n):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == n:
            break
    free = [c for c in range(n) if c not in pivots]
    dim = len(free)
    if dim == 0:
        raise SolverError("stochastic matrix with trivial fixed space (bug)")
    basis = []
    for fc in free:
        v = [Fraction(0)] * n
        v[fc] = Fraction(1)
        for ri, pc in enumerate(pivots):
            v[pc] = -rows[ri][fc]
        basis.append(v)
    if dim > 1:
        raise NonUnique(
            f"stationary vector not unique: fixed space has dimension {dim}",
            basis=[dict(zip(states, v)) for v in basis],
            dimension=dim,
        )
    v = basis[0]
    total = sum(v)
    if total == 0:
        raise SolverError("degenerate fixed vector")
    return [x / total for x in v]


def solve_finite_tree(tree: ContextTree) -> FiniteTreeSolution:
    """Stationary law of the order-h chain on words of length h."""
    if not tree.is_finite:
        raise UnsupportedTree("finite-tree solver needs a finite tree")
    h = tree.height
    if h > _HEIGHT_CAP:
        raise HeightTooLarge(f"height {h} > {_HEIGHT_CAP}")
    if tree.exact and h > _EXACT_CAP:
        raise HeightTooLarge(
            f"height {h} too large for exact solving (cap {_EXACT_CAP}); use float mode"
        )
    states = list(W.all_words(h))
    index = {w: i for i, w in enumerate(states)}
    n = len(states)

    if tree.exact:
        P = [[Fraction(0)] * n for _ in range(n)]
        for i, w in enumerate(states):
            q0, q1 = tree.context_q(_pref_context_of_state(tree, w))
            P[i][index[w[1:] + "0"]] += q0
            P[i][index[w[1:] + "1"]] += q1
        vec = _exact_stationary(states, P)
        sol = FiniteTreeSolution(tree, dict(zip(states, vec)))
        # fixed-point residual is zero by construction; assert cheaply
        return sol

    import numpy as np

    if h <= _DENSE_CAP:
        P = np.zeros((n, n))
        for i, w in enumerate(states):
            q0, q1 = tree.context_q(_pref_context_of_state(tree, w))
            P[i, index[w[1:] + "0"]] += float(q0)
            P[i, index[w[1:] + "1"]] += float(q1)
        A = P.T - np.eye(n)
        # uniqueness check via rank of the fixed space
        svals = np.linalg.svd(A, compute_uv=False)
        nullity = int(np.sum(svals < 1e-10 * max(1.0, svals[0])))
        if nullity > 1:
            raise NonUnique(
                f"stationary vector not unique: fixed space has dimension {nullity}",
                dimension=nullity,
            )
        M = np.vstack([A, np.ones((1, n))])
        rhs = np.zeros(n + 1)
        rhs[n] = 1.0
        vec, *_ = np.linalg.lstsq(M, rhs, rcond=None)
        resid = float(np.max(np.abs(vec @ P - vec)))
        if resid > 1e-12:
            raise SolverError(f"stationary residual {resid} > 1e-12")
        return FiniteTreeSolution(tree, {w: float(v) for w, v in zip(states, vec)})

    # large float case: sparse power iteration
    rows0 = np.empty(n, dtype=np.int64)
    rows1 = np.empty(n, dtype=np.int64)
    p0s = np.empty(n)
    for i, w in enumerate(states):
        q0, _ = tree.context_q(_pref_context_of_state(tree, w))
        rows0[i] = index[w[1:] + "0"]
        rows1[i] = index[w[1:] + "1"]
        p0s[i] = float(q0)
    x = np.full(n, 1.0 / n)
    for _ in range(200000):
        nxt = np.zeros(n)
        np.add.at(nxt, rows0, x * p0s)
        np.add.at(nxt, rows1, x * (1.0 - p0s))
        if np.max(np.abs(nxt - x)) < 1e-14:
            x = nxt
            break
        x = nxt
    resid = float(np.max(np.abs(_apply_sparse(x, rows0, rows1, p0s) - x)))
    if resid > 1e-12:
        raise SolverError(f"power iteration residual {resid} > 1e-12")
    return FiniteTreeSolution(tree, {w: float(v) for w, v in zip(states, x)})


def _apply_sparse(x, rows0, rows1, p0s):
    import numpy as np

    nxt = np.zeros_like(x)
    np.add.at(nxt, rows0, x * p0s)
    np.add.at(nxt, rows1, x * (1.0 - p0s))
    return nxt


# --------------------------------------------------------------------------
# the measure
# --------------------------------------------------------------------------


class StationaryMeasure:
    """Computable assignment w -> pi(w) on cylinders, backed by a solved
    comb / bamboo / finite-tree family."""

    def __init__(self, tree: ContextTree, backend):
        self.tree = tree
        self.backend = backend
        self._cache = {"": 1 if tree.exact else 1.0}

    @property
    def kind(self) -> str:
        if isinstance(self.backend, CombSolution):
            return "comb"
        if isinstance(self.backend, BambooSolution):
            return "bamboo"
        return "finite"

    # -- core evaluation ---------------------------------------------------

    def measure_of(self, w: str) -> Number:
        """pi(w) by the stationary product formula, exact in rational mode."""
        W.check_word(w)
        if w in self._cache:
            return self._cache[w]
        val = self._measure_uncached(w)
        if len(w) <= 64:
            self._cache[w] = val
        return val

    __call__ = measure_of

    def _measure_uncached(self, w):
        b = self.backend
        if isinstance(b, FiniteTreeSolution):
            h = b.h
            if len(w) <= h:
                return b.node_prob(w)
            val = b.node_prob(w[:h])
            for k in range(h, len(w)):
                if val == 0:
                    return val
                q0, q1 = self.tree.context_q(self.tree.pref_context(w[:k]))
                val *= q0 if w[k] == "0" else q1
            return val
        if isinstance(b, CombSolution):
            return self._measure_comb(w)
        return self._measure_bamboo(w)

    def _measure_comb(self, w):
        b = self.backend
        one = 1 if self.tree.exact else 1.0
        val = one
        zeros_prefix = True  # current prefix of w is all zeros
        run = 0  # length of the trailing zero run of the prefix
        for k, ch in enumerate(w):
            if val == 0:
                return val
            if zeros_prefix:
                den = b.pi_zeros(k)
                if den == 0:
                    return den
                num = b.pi_zeros(k + 1) if ch == "0" else den - b.pi_zeros(k + 1)
                val *= num / den
            else:
                fam = b.fam
                val *= fam.q0(run) if ch == "0" else fam.q1(run)
            if ch == "0":
                run += 1
            else:
                zeros_prefix = False
                run = 0
        return val

    def _measure_bamboo(self, w):
        b = self.backend
        val = 1 if self.tree.exact else 1.0
        for k in range(len(w)):
            if val == 0:
                return val
            u, ch = w[:k], w[k]
            if u == "" or (W.is_alternating(u) and u[-1] == "0"):
                if u == "":
                    val *= b.pi1 if ch == "1" else 1 - b.pi1
                    continue
                if u[0] == "1":  # u = (10)^m
                    m = len(u) // 2
                    den = b.pi_10n(m)
                    num1 = b.a1(m)
                else:  # u = 0 (10)^m
                    m = (len(u) - 1) // 2
                    den = b.pi_0_10n(m)
                    num1 = b.b1(m)
                if den == 0:
                    return den * val
                val *= (num1 if ch == "1" else den - num1) / den
            else:
                c = self.tree.pref_context(u)
                q0, q1 = self.tree.context_q(c)
                val *= q0 if ch == "0" else q1
        return val

    # -- suffix states (shared by simulation and occurrence DPs) -----------

    def canonical_suffix(self, s: str) -> str:
        """Shortest suffix of s that determines the whole future law.

        Finite tree: the last h letters.  Comb: everything from the last
        '1' (pref never reads past a 1).  Bamboo: from the left element
        of the last adjacent equal pair (pref resolves at that pair).
        Shorter / breakerless suffixes are kept whole; transition
        probabilities then marginalize the unknown deeper past.
        """
        b = self.backend
        if isinstance(b, FiniteTreeSolution):
            return s[-b.h :] if len(s) > b.h else s
        if isinstance(b, CombSolution):
            i = s.rfind("1")
            return s if i < 0 else s[i:]
        i = W.last_equal_pair(s)
        return s if i < 0 else s[i:]

    def step_probs(self, state: str):
        """(p0, p1): the exact next-letter law given the suffix `state`,
        p_alpha = pi(state + alpha) / pi(state)."""
        den = self.measure_of(state)
        if den == 0:
            raise SolverError(f"state {state!r} has zero stationary mass")
        p0 = self.measure_of(state + "0") / den
        return (p0, 1 - p0)

    def next_state(self, state: str, letter: str) -> str:
        return self.canonical_suffix(state + letter)

    # -- context distribution (for stationary starts) -----------------------

    def folded_context_distribution(self, min_depth: int = 0):
        """Exact stationary context law with the infinite tail folded into
        the deepest kept context of each family.

        Beyond an eventually-constant family's horizon the chain behaves
        identically from every deeper context, so folding the tail mass
        onto the deepest kept context keeps the letter process law exact;
        for analytic families the fold is a <= 1e-15 total-variation
        truncation.  Returns ([(context, mass)], leftover_atom_mass).
        """
        b = self.backend
        zero = 0 if self.tree.exact else 0.0
        if isinstance(b, FiniteTreeSolution):
            items = [
                (c, self.measure_of(W.reverse(c)))
                for c in sorted(self.tree.finite_q)
            ]
            return [(c, p) for c, p in items if p != 0], zero
        if isinstance(b, CombSolution):
            ec = b.fam.eventually_constant()
            J = max(min_depth, (ec[0] + 2) if ec else 0)
            if ec is None:
                J = max(J, _float_fold_depth(lambda n: b.pi1 * b.c(n)))
            items = [("0" * n + "1", b.pi1 * b.c(n)) for n in range(J)]
            fold = b.pi1 * (comb_R(b.fam, J) if b.pi1 != 0 else zero)
            items.append(("0" * J + "1", fold))
            total = sum(p for _, p in items)
            return [(c, p) for c, p in items if p != 0], 1 - total
        ec1 = b.fam1.eventually_constant()
        ec0 = b.fam00.eventually_constant()
        J = max(
            min_depth,
            (ec1[0] + 2) if ec1 else _float_fold_depth(lambda n: b.pi1 * b.c1(n)),
            (ec0[0] + 2) if ec0 else _float_fold_depth(lambda n: b.pi00 * b.c00(n)),
        )
        items = []
        for n in range(J):
            items.append(("01" * n + "1", b.pi1 * b.c1(n)))
            items.append(("01" * n + "00", b.pi00 * b.c00(n)))
        items.append(("01" * J + "1", b.pi1 * (b.S1 - b.S1_partial(J - 1))))
        if b.S00 is not math.inf:
            items.append(("01" * J + "00", b.pi00 * (b.S00 - b.S00_partial(J - 1))))
        total = sum(p for _, p in items)
        return [(c, p) for c, p in items if p != 0], 1 - total

    def context_distribution(self, tail_eps=None, max_depth: int = 200):
        """[(context, mass)] plus the leftover mass (infinite leaves and
        truncated tail).  For infinite trees the enumeration stops once
        the remaining context mass is <= tail_eps (default: exact 0 is
        never reached, so 1e-15-ish for floats, 2^-120 for rationals).
        """
        if tail_eps is None:
            tail_eps = Fraction(1, 2 ** 120) if self.tree.exact else 1e-15
        items = []
        if isinstance(self.backend, FiniteTreeSolution):
            for c in sorted(self.tree.finite_q):
                mass = self.measure_of(W.reverse(c))
                if mass != 0:
                    items.append((c, mass))
            return items, 0 if self.tree.exact else 0.0
        total = 0
        depth = 0
        branch = self.tree.branch
        while depth < max_depth:
            c = branch.context_at(depth)
            mass = self.measure_of(W.reverse(c))
            if mass != 0:
                items.append((c, mass))
                total += mass
            if 1 - total <= tail_eps:
                break
            depth += 1
        return items, 1 - total


def _float_fold_depth(term, eps: float = 1e-16) -> int:
    n = 8
    while n < 4000 and float(term(n)) > eps:
        n += 1
    return n + 2


def solve(tree: ContextTree, a=None) -> StationaryMeasure:
    """Dispatch to the right backend for this tree."""
    if tree.is_finite:
        return StationaryMeasure(tree, solve_finite_tree(tree))
    period = tree.branch.period
    if period == "0":
        sol = solve_comb(tree.branch.families[0], tree.branch.q_inf0, a=a)
        return StationaryMeasure(tree, sol)
    if period == "01":
        sol = solve_bamboo(
            tree.branch.families[0], tree.branch.families[1], tree.branch.q_inf0, a=a
        )
        return StationaryMeasure(tree, sol)
    raise UnsupportedTree(
        f"no solver for branch period {period!r} (supported: '0' comb, '01' bamboo)"
    )


def measure_of(word: str, m: StationaryMeasure) -> Number:
    return m.measure_of(word)


def check_palindrome_identity(m: StationaryMeasure, nmax: int) -> dict:
    """Verify pi(1 0^n) = pi(0^n 1) and pi(0 1^n) = pi(1^n 0) for n <= nmax."""
    worst = 0 if m.tree.exact else 0.0
    for n in range(nmax + 1):
        d1 = abs(m.measure_of("1" + "0" * n) - m.measure_of("0" * n + "1"))
        d2 = abs(m.measure_of("0" + "1" * n) - m.measure_of("1" * n + "0"))
        worst = max(worst, d1, d2)
    return {"nmax": nmax, "max_discrepancy": worst}
