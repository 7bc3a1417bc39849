"""Dirichlet series Lambda(s) = sum_w pi(w)^s of comb and bamboo sources.

Comb: with c_n, S(1) and the rests R_n = sum_{k>=n} c_k,

    Lambda(s) = S(1)^-s [ sum R_n^s + (sum c_n^s)^2 / (1 - sum (c_n - c_{n+1})^s) ]

(the sum runs over all finite words including the empty one).  The
denominator vanishes at s = 1, always a singularity.

Bamboo: splitting words by the reversed-suffix structure gives

    Lambda = A + Lambda_00 * sum c_n(00)^s + Lambda_1 * sum c_n(1)^s,

where A sums the internal-node cylinders pi((10)^n), pi(0(10)^n), and
(Lambda_00, Lambda_1) solve the linear system obtained from the same
splitting applied to words ending in 00 (via the auxiliary Lambda_100)
and in 1:

    Lambda_00 (1 - B_00 - C_00) - Lambda_1 (B_1 + C_1) = A_00 + A_100
    -E_00 Lambda_00 + (1 - E_1) Lambda_1 = A_1

with
    B_00 = q_00(0)^s sum_{n>=0} [c_n(00) q_{(01)^n 00}(0)]^s
    B_1  = q_00(0)^s sum_{n>=1} [c_n(1)  q_{(01)^n 1}(0)]^s
    C_00 = sum_{n>=0} [c_{n+1}(00) q_{(01)^{n+1} 00}(0)]^s   (and C_1 alike)
    E_00 = sum_{n>=0} [c_n(00) q_{(01)^n 00}(1)]^s           (and E_1 alike)
    A_00, A_1, A_100 from the exact recursions for pi((10)^n 00),
    pi((10)^n 1) and pi((10)^{n+1} 0).

All sequences here are eventually linear combinations of geometrics for
eventually-constant families, so integer s evaluates exactly; otherwise
sums are truncated with geometric envelope tail bounds.  Everything is
cross-checked against `brute_force_dirichlet`, a pruned enumeration of
all words up to a length.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement

import mpmath

from .errors import BadParams, DivergentAt, PoleAt, SingularSystem, Undefined
from .families import (
    ConstantFamily,
    IndifferentFamily,
    PeriodicFamily,
    QFamily,
    TableThenConstantFamily,
    ZetaFamily,
)
from .numeric import power
from .stationary import BambooSolution, CombSolution, StationaryMeasure, comb_R


def _is_int(s) -> bool:
    return isinstance(s, int) or (isinstance(s, float) and s.is_integer()) or (
        isinstance(s, Fraction) and s.denominator == 1
    )


def _re(s):
    return s.real if isinstance(s, complex) else float(s)


@dataclass
class DirichletEvaluation:
    s: object
    value: object
    tail_bound: object
    parts: dict = field(default_factory=dict)


# --------------------------------------------------------------------------
# geometric-tail sequences
# --------------------------------------------------------------------------


class GeomSeq:
    """t_0, t_1, ...: explicit head then t_n = sum_i a_i r_i^(n - n0) for
    n >= n0, with every |r_i| < 1.  Supports the exact power sums needed
    by the bamboo pipeline."""

    def __init__(self, head, comps, n0=None):
        self.head = list(head)
        self.n0 = len(self.head) if n0 is None else n0
        assert self.n0 == len(self.head)
        self.comps = [(a, r) for a, r in comps if a != 0]

    def term(self, n):
        if n < self.n0:
            return self.head[n]
        out = 0
        for a, r in self.comps:
            out += a * _pow_int(r, n - self.n0)
        return out

    def shift(self, k: int) -> "GeomSeq":
        """The sequence n -> t(n + k)."""
        n0 = max(self.n0 - k, 0)
        head = [self.term(i + k) for i in range(n0)]
        comps = [(a * _pow_int(r, n0 + k - self.n0), r) for a, r in self.comps]
        return GeomSeq(head, comps, n0)

    def __sub__(self, other: "GeomSeq") -> "GeomSeq":
        n0 = max(self.n0, other.n0)
        head = [self.term(i) - other.term(i) for i in range(n0)]
        comps = {}
        for a, r in self._anchor(n0):
            comps[r] = comps.get(r, 0) + a
        for a, r in other._anchor(n0):
            comps[r] = comps.get(r, 0) - a
        return GeomSeq(head, [(v, r) for r, v in comps.items() if v != 0], n0)

    def _anchor(self, n0):
        """comps rebased so the tail formula starts at n0 >= self.n0."""
        return [(a * _pow_int(r, n0 - self.n0), r) for a, r in self.comps]

    def envelope(self):
        """(M, rho): |t_n| <= M rho^(n-n0) for n >= n0."""
        if not self.comps:
            return (0, 0)
        M = sum(abs(a) for a, _ in self.comps)
        rho = max(abs(r) for _, r in self.comps)
        return (M, rho)

    def power_sum(self, s, trunc: int):
        """(value, tail_bound) for sum_{n>=0} t_n^s, t_n >= 0.

        Integer s >= 1: exact via multinomial expansion of the geometric
        tail (tail_bound 0).  Otherwise: truncation at `trunc` plus a
        geometric envelope bound.
        """
        if _is_int(s) and int(s) >= 1:
            si = int(s)
            total = sum(_pow_int(t, si) for t in self.head)
            m = len(self.comps)
            if m:
                for combo in combinations_with_replacement(range(m), si):
                    coef = _multinomial(si, combo, m)
                    prod_a = 1
                    prod_r = 1
                    for i in combo:
                        prod_a *= self.comps[i][0]
                        prod_r *= self.comps[i][1]
                    if prod_r >= 1:
                        raise DivergentAt(s, "geometric tail")
                    total += coef * prod_a / (1 - prod_r)
            return total, 0 * total
        if _re(s) <= 0:
            raise DivergentAt(s, "power sum needs Re(s) > 0")
        n = max(trunc, self.n0 + 4)
        total = 0.0
        for k in range(n):
            t = self.term(k)
            if t < 0:
                raise ValueError(f"negative term t_{k} = {t}")
            total += power(t, s) if t != 0 else 0.0
        M, rho = self.envelope()
        if M == 0:
            return total, 0.0
        rho_s = float(rho) ** _re(s)
        tail = (float(M) * float(rho) ** (n - self.n0)) ** _re(s) / (1 - rho_s)
        return total, tail


def _pow_int(x, k: int):
    return x ** k


def _multinomial(s, combo, m):
    # number of orderings of the multiset `combo` of size s
    from math import factorial

    counts = [0] * m
    for i in combo:
        counts[i] += 1
    out = factorial(s)
    for c in counts:
        out //= factorial(c)
    return out


# --------------------------------------------------------------------------
# comb closed forms
# --------------------------------------------------------------------------


def _comb_component_sums(fam: QFamily, s, trunc: int):
    """(sum c_n^s, sum R_n^s, sum (c_n - c_{n+1})^s) with tail bounds.

    Returns dict {name: (value, tail)}; raises DivergentAt when a
    component diverges at Re(s).
    """
    sr = _re(s)
    if isinstance(fam, ConstantFamily):
        a = fam.p
        if sr <= 0:
            raise DivergentAt(s, "sum c^s")
        if a == 0:
            one = 1 if fam.exact else 1.0
            return {"c": (one, 0), "R": (one, 0), "dc": (one, 0)}
        as_ = power(a, s)
        sc = 1 / (1 - as_)
        return {
            "c": (sc, 0),
            "R": (power(1 - a, -s) * sc, 0),
            "dc": (power(1 - a, s) * sc, 0),
        }
    if isinstance(fam, TableThenConstantFamily):
        if sr <= 0:
            raise DivergentAt(s, "sum c^s")
        h = len(fam.values)
        p = fam.tail
        ch = fam.c(h)
        ps = power(p, s) if p != 0 else 0
        if p != 0 and abs(ps) >= 1:
            raise DivergentAt(s, "geometric tail")
        def geom_from(vh):
            if vh == 0 or p == 0:
                return power(vh, s) if vh != 0 else 0
            return power(vh, s) / (1 - ps)
        sc = sum(power(fam.c(n), s) for n in range(h) if fam.c(n) != 0) + geom_from(ch)
        sR = sum(power(comb_R(fam, n), s) for n in range(h) if comb_R(fam, n) != 0)
        sR += geom_from(comb_R(fam, h))
        sdc = sum(
            power(fam.c(n) - fam.c(n + 1), s)
            for n in range(h)
            if fam.c(n) - fam.c(n + 1) != 0
        ) + geom_from(ch * (1 - p))
        return {"c": (sc, 0), "R": (sR, 0), "dc": (sdc, 0)}
    if isinstance(fam, PeriodicFamily):
        if sr <= 0:
            raise DivergentAt(s, "sum c^s")
        P = len(fam.values)
        rho = fam.period_product()
        if rho == 0:
            # c dies within the first zero period; sum directly
            terms_c = terms_R = terms_dc = 0
            n = 0
            while fam.c(n) != 0 or n <= 2 * P:
                cn = fam.c(n)
                if cn != 0:
                    terms_c += power(cn, s)
                rn = comb_R(fam, n)
                if rn != 0:
                    terms_R += power(rn, s)
                d = cn - fam.c(n + 1)
                if d != 0:
                    terms_dc += power(d, s)
                n += 1
            return {"c": (terms_c, 0), "R": (terms_R, 0), "dc": (terms_dc, 0)}
        rs = power(rho, s)
        if abs(rs) >= 1:
            raise DivergentAt(s, "periodic tail")
        den = 1 - rs
        sc = sum(power(fam.c(i), s) for i in range(P)) / den
        sR = sum(power(comb_R(fam, i), s) for i in range(P)) / den
        sdc_terms = [fam.c(i) - fam.c(i + 1) for i in range(P)]
        sdc = sum(power(d, s) for d in sdc_terms if d != 0) / den
        return {"c": (sc, 0), "R": (sR, 0), "dc": (sdc, 0)}
    if isinstance(fam, ZetaFamily):
        al = fam.alpha
        za = fam.hurwitz(al, 1)
        out = {}
        if (al - 1) * sr <= 1:
            raise DivergentAt(s, "sum c^s")
        if (al - 2) * sr <= 1:
            raise DivergentAt(s, "sum R^s")
        if al * sr <= 1:
            raise DivergentAt(s, "sum dc^s")
        # c and R satisfy the exact recursions c_{n+1} = c_n - n^-alpha/za
        # (n >= 1) and R_{n+1} = R_n - c_n; accumulate their power sums.
        N = max(trunc, 512)
        Kc = al / ((al - 1) * za)
        KR = (al - 1) / ((al - 2) * za)
        sum_c = power(1.0, s) * 0
        sum_R = sum_c
        cn = 1.0  # c_0
        Rn = 1.0 + fam.hurwitz(al - 1, 1) / za  # R_0 = S(1)
        for n in range(N):
            sum_c += power(cn, s)
            sum_R += power(Rn, s)
            Rn -= cn
            cn = 1.0 if n == 0 else cn - n ** (-al) / za
        out["c"] = (sum_c, _poly_tail(Kc, al - 1, N, sr))
        out["R"] = (sum_R, _poly_tail(KR, al - 2, N, sr))
        sdc = _mp(mpmath.zeta(al * s) / mpmath.zeta(al) ** s, s)
        out["dc"] = (sdc, 0.0)
        return out
    if isinstance(fam, IndifferentFamily):
        al = fam.alpha
        out = {}
        if al * sr <= 1:
            raise DivergentAt(s, "sum c^s")
        if (al - 1) * sr <= 1:
            raise DivergentAt(s, "sum R^s")
        if (al + 1) * sr <= 1:
            raise DivergentAt(s, "sum dc^s")
        out["c"] = (_mp(mpmath.zeta(al * s), s), 0.0)
        N = max(trunc, 512)
        sum_R = power(1.0, s) * 0
        sum_dc = sum_R
        Rn = float(mpmath.zeta(al))  # R_0 = sum (1+k)^-alpha
        for n in range(N):
            cn = (1.0 + n) ** (-al)
            sum_R += power(Rn, s)
            d = cn - (2.0 + n) ** (-al)
            sum_dc += power(d, s)
            Rn -= cn
        out["R"] = (sum_R, _poly_tail(al / (al - 1), al - 1, N, sr))
        out["dc"] = (sum_dc, _poly_tail(al, al + 1, N, sr))
        return out
    # table-then-geometric: superexponential decay, numeric with crude tail
    if sr <= 0:
        raise DivergentAt(s, "sum c^s")
    def trio(term):
        total, n = 0.0, 0
        while True:
            t = term(n)
            if t != 0:
                total += float(t) ** sr
            if n > 8 and (t == 0 or float(t) ** sr <= 1e-22 * max(total, 1e-300)):
                return (total, float(t) ** sr * 2)
            n += 1
    return {
        "c": trio(fam.c),
        "R": trio(lambda n: comb_R(fam, n)),
        "dc": trio(lambda n: fam.c(n) - fam.c(n + 1)),
    }


def _poly_tail(K, beta, N, sr):
    """Integral bound on sum_{n>=N} (K n^-beta)^sr, for beta*sr > 1."""
    return (K ** sr) * N ** (1 - beta * sr) / (beta * sr - 1)


def _mp(x, s):
    return complex(x) if isinstance(s, complex) else float(x)


def comb_dirichlet(sol: CombSolution, s, trunc: int = 64) -> DirichletEvaluation:
    """Lambda(s) for a stationary infinite comb; the empty word counts."""
    if sol.case_tag == "reducible-divergent":
        raise Undefined("Dirac comb measure: Lambda(s) is never defined")
    if sol.is_trivial():
        raise Undefined("trivial comb measure: Lambda(s) diverges on the pure words")
    if not isinstance(s, complex) and float(s) == 1.0:
        raise PoleAt(s)
    comps = _comb_component_sums(sol.fam, s, trunc)
    (sc, tc), (sR, tR), (sdc, tdc) = comps["c"], comps["R"], comps["dc"]
    den = 1 - sdc
    scale = abs(sc) + 1
    if abs(den) <= max(1e-12 * scale, float(tdc) * 2):
        raise PoleAt(s)
    s1_inv = power(sol.S1, -s)
    lam1 = s1_inv * sc / den
    value = s1_inv * (sR + sc * sc / den)
    if tc == tR == tdc == 0:
        tail = value - value
    else:
        hi_den = 1 - (sdc + tdc)
        hi = abs(s1_inv) * ((abs(sR) + tR) + (abs(sc) + tc) ** 2 / abs(hi_den))
        tail = hi - abs(value)
    return DirichletEvaluation(
        s,
        value,
        tail,
        parts={
            "S1": sol.S1,
            "sum_c_pow": sc,
            "sum_R_pow": sR,
            "sum_dc_pow": sdc,
            "Lambda_1": lam1,
        },
    )


def comb_example_closed_forms(example_id: int, params: dict, s):
    """The four printed comb examples, evaluated directly.

    1: memoryless, q = a constant;  2: alternating a/b;
    3: c_n = zeta(n, alpha), alpha > 2;  4: the indifferent family,
    c_n = (1+n)^-alpha with 1 < alpha < 2.
    """
    if not isinstance(s, complex) and float(s) == 1.0:
        raise PoleAt(s)
    if example_id == 1:
        a = params["a"]
        if not 0 < a < 1:
            raise BadParams(f"need a in (0,1), got {a}")
        den = 1 - (power(a, s) + power(1 - a, s))
        if abs(den) < 1e-13:
            raise PoleAt(s)
        return 1 / den
    if example_id == 2:
        a, b = params["a"], params["b"]
        if not (0 < a < 1 and 0 < b < 1):
            raise BadParams(f"need a, b in (0,1), got {a}, {b}")
        ab_s = power(a * b, s)
        if abs(1 - ab_s) < 1e-13:
            raise DivergentAt(s, "1/(1-(ab)^s)")
        big_den = 1 - ab_s - power(1 - a, s) - power(a, s) * power(1 - b, s)
        if abs(big_den) < 1e-13:
            raise PoleAt(s)
        return (
            1
            / (1 - ab_s)
            * (
                1
                + power((a + a * b) / (1 + a), s)
                + power((1 - a * b) / (1 + a), s) * (1 + power(a, s)) ** 2 / big_den
            )
        )
    if example_id == 3:
        al = params["alpha"]
        if not al > 2:
            raise BadParams(f"need alpha > 2, got {al}")
        sr = _re(s)
        if (al - 2) * sr <= 1:
            raise DivergentAt(s, "sum R^s")
        za = float(mpmath.zeta(al))
        S1 = 1 + float(mpmath.zeta(al - 1)) / za
        N = 4000
        # c_1 = 1, c_{n+1} = c_n - n^-alpha/za; R given by the printed
        # formula, accumulated through R_{n+1} = R_n - c_n
        sum_R, sum_c = 0.0, 0.0
        cn, Rn = 1.0, S1
        for n in range(N):
            sum_c += cn ** sr
            sum_R += Rn ** sr
            Rn -= cn
            cn = 1.0 if n == 0 else cn - n ** (-al) / za
        den = 1 - float(mpmath.zeta(al * s)) / za ** sr
        if abs(den) < 1e-13:
            raise PoleAt(s)
        return S1 ** (-sr) * (sum_R + sum_c ** 2 / den)
    if example_id == 4:
        al = params["alpha"]
        if not 1 < al < 2:
            raise BadParams(f"need 1 < alpha < 2, got {al}")
        sr = _re(s)
        if (al - 1) * sr <= 1:
            raise DivergentAt(s, "sum R^s")
        za = float(mpmath.zeta(al))
        N = 4000
        # first term: sum_{n>=1} of the normalized rests sum_{k>=n} k^-alpha / za
        first = 0.0
        Rn = za
        for n in range(1, N):
            first += (Rn / za) ** sr
            Rn -= float(n) ** (-al)
        den = 1 - sum(
            n ** (-al * sr) * (1 - (1 - 1 / (n + 1)) ** al) ** sr for n in range(1, N)
        )
        if abs(den) < 1e-13:
            raise PoleAt(s)
        return first + (float(mpmath.zeta(al * s)) ** 2 / za ** sr) / den
    raise BadParams(f"unknown example id {example_id}")


# --------------------------------------------------------------------------
# bamboo pipeline
# --------------------------------------------------------------------------


def _bamboo_geom_seqs(sol: BambooSolution):
    """Exact GeomSeq forms of every sequence the pipeline sums.

    Requires eventually-constant families (otherwise the pure numeric
    fallback in power sums is used through giant heads)."""
    ec1 = sol.fam1.eventually_constant()
    ec0 = sol.fam00.eventually_constant()
    if ec1 is None or ec0 is None:
        raise BadParams(
            "bamboo Dirichlet pipeline needs eventually-constant families "
            "(constant or table-then-constant)"
        )
    H = max(ec1[0], ec0[0], 1)
    ut, vt = ec1[1], ec0[1]
    q = sol.q1_0
    r1 = q * (1 - ut)
    r0 = q * (1 - vt)
    if not (abs(r1) < 1 and abs(r0) < 1):
        raise DivergentAt(None, "context coefficient ratios reach 1")
    c1H, c0H = sol.c1(H), sol.c00(H)
    pi1, pi00 = sol.pi1, sol.pi00
    q00 = sol.q00_0

    def seq(term_fn, comps):
        g = GeomSeq([term_fn(n) for n in range(H)], comps, H)
        # sanity: the closed tail must reproduce the recursion
        for n in (H, H + 1, H + 2):
            lhs, rhs = term_fn(n), g.term(n)
            if lhs != rhs and abs(float(lhs) - float(rhs)) > 1e-9 * (abs(float(lhs)) + 1e-30):
                raise AssertionError(f"geometric tail mismatch at n={n}: {lhs} vs {rhs}")
        return g

    C1 = seq(sol.c1, [(c1H, r1)])
    C00 = seq(sol.c00, [(c0H, r0)])
    CQ0_1 = seq(lambda n: sol.c1(n) * sol.fam1.q0(n), [(c1H * ut, r1)])
    CQ0_00 = seq(lambda n: sol.c00(n) * sol.fam00.q0(n), [(c0H * vt, r0)])
    CQ1_1 = seq(lambda n: sol.c1(n) * sol.fam1.q1(n), [(c1H * (1 - ut), r1)])
    CQ1_00 = seq(lambda n: sol.c00(n) * sol.fam00.q1(n), [(c0H * (1 - vt), r0)])

    def safe_div(x, r):
        return x / (1 - r)

    IN0 = seq(sol.pi_10n, [(pi1 * safe_div(c1H, r1), r1), (pi00 * safe_div(c0H, r0), r0)])
    IN1 = seq(
        sol.pi_0_10n,
        [(pi1 * safe_div(c1H * r1, r1), r1), (pi00 * safe_div(c0H, r0), r0)],
    )
    A1 = seq(
        sol.a1,
        [
            (pi1 * (1 - ut) * safe_div(c1H, r1), r1),
            (pi00 * (1 - vt) * safe_div(c0H, r0), r0),
        ],
    )
    B1 = seq(
        sol.b1,
        [
            (pi1 * (1 - ut) * safe_div(c1H, r1) - pi1 * c1H * (1 - ut), r1),
            (pi00 * (1 - vt) * safe_div(c0H, r0), r0),
        ],
    )
    A0 = seq(
        sol.a0,
        [
            (q00 * pi1 * ut * safe_div(c1H, r1), r1),
            (q00 * pi00 * vt * safe_div(c0H, r0), r0),
        ],
    )
    B0 = seq(
        sol.b0,
        [
            (q00 * pi1 * ut * safe_div(c1H, r1) - q00 * pi1 * c1H * ut, r1),
            (q00 * pi00 * vt * safe_div(c0H, r0), r0),
        ],
    )
    return {
        "C1": C1,
        "C00": C00,
        "CQ0_1": CQ0_1,
        "CQ0_00": CQ0_00,
        "CQ1_1": CQ1_1,
        "CQ1_00": CQ1_00,
        "IN0": IN0,
        "IN1": IN1,
        "A1": A1,
        "B1": B1,
        "A0": A0,
        "B0": B0,
    }


def bamboo_dirichlet(sol: BambooSolution, s, trunc: int = 64) -> DirichletEvaluation:
    """Lambda(s) for a stationary bamboo blossom (generic case)."""
    if sol.case_tag == "dirac-mixture":
        raise Undefined("Dirac bamboo mixture: Lambda(s) is never defined")
    if sol.pi_infty != 0:
        raise Undefined("positive mass on the alternating tail: Lambda diverges")
    if not isinstance(s, complex) and float(s) == 1.0:
        raise PoleAt(s)
    seqs = _bamboo_geom_seqs(sol)
    q00_s = power(sol.q00_0, s)

    def ps(g: GeomSeq):
        return g.power_sum(s, trunc)

    D1, tD1 = ps(seqs["C1"])
    D00, tD00 = ps(seqs["C00"])
    A_a, tA_a = ps(seqs["IN0"])
    A_b, tA_b = ps(seqs["IN1"])
    A = A_a + A_b
    A00_a, t00a = ps(seqs["A0"])
    A00_b, t00b = ps(seqs["B0"])
    A_00 = A00_a + A00_b
    A1_a, t1a = ps(seqs["A1"])
    A1_b, t1b = ps(seqs["B1"])
    A_1 = A1_a + A1_b
    A100_a, t100a = ps(seqs["IN0"].shift(1) - seqs["A1"].shift(1))
    A100_b, t100b = ps(seqs["IN1"].shift(1) - seqs["B1"].shift(1))
    A_100 = A100_a + A100_b
    B_00 = q00_s * ps(seqs["CQ0_00"])[0]
    B_1 = q00_s * ps(seqs["CQ0_1"].shift(1))[0]
    C_00, _ = ps(seqs["CQ0_00"].shift(1))
    C_1, _ = ps(seqs["CQ0_1"].shift(1))
    E_00, _ = ps(seqs["CQ1_00"])
    E_1, _ = ps(seqs["CQ1_1"])

    m00, m01 = 1 - B_00 - C_00, -(B_1 + C_1)
    m10, m11 = -E_00, 1 - E_1
    det = m00 * m11 - m01 * m10
    if abs(det) < 1e-12:
        raise SingularSystem(f"system for (Lambda_00, Lambda_1) singular at s={s}")
    rhs0 = A_00 + A_100
    rhs1 = A_1
    lam00 = (rhs0 * m11 - m01 * rhs1) / det
    lam1 = (m00 * rhs1 - rhs0 * m10) / det
    value = A + lam00 * D00 + lam1 * D1

    tails = [tD1, tD00, tA_a, tA_b, t00a, t00b, t1a, t1b, t100a, t100b]
    if all(t == 0 for t in tails):
        tail = 0 * value
    else:
        # crude amplification of component truncation errors
        tail = sum(float(t) for t in tails) * (
            2 + abs(float(lam00)) + abs(float(lam1)) + abs(float(D00)) + abs(float(D1))
        )
    return DirichletEvaluation(
        s,
        value,
        tail,
        parts={
            "A": A,
            "A_00": A_00,
            "A_1": A_1,
            "A_100": A_100,
            "B_00": B_00,
            "B_1": B_1,
            "C_00": C_00,
            "C_1": C_1,
            "E_00": E_00,
            "E_1": E_1,
            "Lambda_00": lam00,
            "Lambda_1": lam1,
            "sum_c1_pow": D1,
            "sum_c00_pow": D00,
        },
    )


# --------------------------------------------------------------------------
# brute force oracle
# --------------------------------------------------------------------------


def brute_force_dirichlet(m: StationaryMeasure, s, maxlen: int):
    """sum over 1 <= |w| <= maxlen of pi(w)^s, by pruned tree walk.

    Exact for integer s in rational mode.  The closed forms above include
    the empty word, so they compare as value - 1 against this sum.
    """
    if maxlen > 24:
        raise BadParams("maxlen capped at 24")
    exact_s = _is_int(s) and m.tree.exact
    total = 0 if exact_s else 0.0

    def walk(w, pi_w, depth):
        nonlocal total
        if depth > 0:
            total += power(pi_w, s) if exact_s else power(float(pi_w), s)
        if depth == maxlen:
            return
        for ch in "01":
            pi_c = m.measure_of(w + ch)
            if pi_c != 0:
                walk(w + ch, pi_c, depth + 1)

    walk("", m.measure_of(""), 0)
    return total


def oracle_gap_bound(m: StationaryMeasure, s, maxlen: int):
    """Upper bound on sum_{|w| > maxlen} pi(w)^s via the contraction
    gamma = sup_w sum_alpha (pi(w alpha)/pi(w))^s, taken over all nodes to
    depth maxlen plus the family limit ratios; requires gamma < 1 (true
    for eventually-constant families at Re(s) > 1).  Exact in rational
    mode with integer s (and then tight for memoryless sources)."""
    exact = _is_int(s) and m.tree.exact
    pw = (lambda x: power(x, int(s))) if exact else (lambda x: float(x) ** _re(s))
    gamma = 0 if exact else 0.0
    m_L = 0 if exact else 0.0

    def walk(w, pi_w, depth):
        nonlocal gamma, m_L
        if depth == maxlen:
            m_L += pw(pi_w)
            return
        kids = []
        for ch in "01":
            pi_c = m.measure_of(w + ch)
            if pi_c != 0:
                kids.append((ch, pi_c))
        gamma = max(gamma, sum(pw(p / pi_w if exact else float(p) / float(pi_w)) for _, p in kids))
        for ch, p in kids:
            walk(w + ch, p, depth + 1)

    walk("", m.measure_of(""), 0)
    # limit ratio pairs along the infinite families
    if not m.tree.is_finite:
        from .errors import LimitUndefined

        for fam in m.tree.branch.families:
            try:
                lims = [fam.limit_q0()]
            except LimitUndefined:
                lims = [fam.q0(n) for n in range(64)]
            for lim in lims:
                if 0 < lim < 1:
                    gamma = max(gamma, pw(lim) + pw(1 - lim))
                else:
                    return _no_contraction()
    if gamma >= 1:
        return _no_contraction()
    return m_L * gamma / (1 - gamma)


def _no_contraction():
    raise BadParams("no contraction: cannot bound the enumeration gap")
