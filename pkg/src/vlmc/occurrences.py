"""Exact distribution of word occurrence times in the letter process.

For a word w of length k whose reversal is not an internal node, the
generating function of the first occurrence position is

    Phi_w^(1)(x) = x^k pi(w) / ((1 - x) S_w(x)),
    S_w(x) = C_w(x) + sum_{j>=k} q_c^(j)(w) x^j,
    C_w(x) = 1 + sum_{j=1}^{k-1} [suffix_j-overlap] q_c^(j)(suffix_j(w)) x^j,

and the r-th occurrence satisfies
Phi_w^(r) = Phi_w^(1) (1 - 1/S_w)^(r-1).  The conditioning word c is the
renewal suffix of w: for the comb, pref(w) (w read from its last 1); for
the bamboo, the suffix from the last adjacent equal pair, which is
either pref(w) (shapes *00(10)^l and *11(01)^l 0) or the composite
suffixes 00(10)^l 1 / 11(01)^l (shapes *00(10)^l 1 and *11(01)^l, where
pref(w) = 1 carries too little history for renewal).

The conditional kernels q_c^(j)(u) = P(last |u| of the next j letters
equal u | history ends with c~) are cylinder ratios when j = |u| and are
otherwise computed by an exact forward DP over (suffix state, match
automaton state).  `oracle_occurrence_pmf` is an independent check: the
same DP run from the stationary context law with an occurrence counter,
never touching the formulas above.

Series are truncated polynomials with exact coefficients in rational
mode; division uses the standard recurrence (S_w(0) = 1).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import words as W
from .errors import (
    InternalNodeWord,
    OutOfRange,
    StateSpaceTooLarge,
    UnclassifiableWord,
    Undefined,
)
from .stationary import BambooSolution, CombSolution, StationaryMeasure


# --------------------------------------------------------------------------
# truncated polynomial helpers (dense coefficient lists, index = degree)
# --------------------------------------------------------------------------


def poly_mul(a, b, nmax):
    out = [0] * (nmax + 1)
    for i, ai in enumerate(a):
        if ai == 0 or i > nmax:
            continue
        for j, bj in enumerate(b):
            if i + j > nmax:
                break
            if bj != 0:
                out[i + j] += ai * bj
    return out


def poly_inv(a, nmax):
    """1/a(x) mod x^(nmax+1); needs a[0] == 1."""
    assert a[0] == 1
    inv = [0] * (nmax + 1)
    inv[0] = 1
    for n in range(1, nmax + 1):
        s = 0
        for i in range(1, min(n, len(a) - 1) + 1):
            if a[i] != 0:
                s += a[i] * inv[n - i]
        inv[n] = -s
    return inv


# --------------------------------------------------------------------------
# match automaton (prefix function / failure links)
# --------------------------------------------------------------------------


def match_automaton(w: str):
    """delta[state][letter] -> state over 0..|w|; state = length of the
    longest suffix of the stream that is a prefix of w."""
    k = len(w)
    fail = [0] * (k + 1)
    for i in range(1, k):
        j = fail[i]
        while j and w[i] != w[j]:
            j = fail[j]
        fail[i + 1] = j + 1 if w[i] == w[j] else 0
    delta = []
    for state in range(k + 1):
        row = {}
        for ch in W.ALPHABET:
            j = state
            if j == k:
                j = fail[j]
            while True:
                if j < k and w[j] == ch:
                    row[ch] = j + 1
                    break
                if j == 0:
                    row[ch] = 0
                    break
                j = fail[j]
        delta.append(row)
    return delta


# --------------------------------------------------------------------------
# conditional kernels
# --------------------------------------------------------------------------


def kernel_series(m: StationaryMeasure, suffix: str, u: str, nmax: int):
    """[q^(j)(u) for j = 0..nmax] conditioned on the history ending with
    `suffix`: the probability that letters j-|u|+1..j equal u (0 for
    j < |u|).  Exact DP over (canonical suffix state, automaton state)."""
    zero = 0 if m.tree.exact else 0.0
    out = [zero] * (nmax + 1)
    delta = match_automaton(u)
    full = len(u)
    start = m.canonical_suffix(suffix)
    dist = {(start, 0): zero + 1}
    for j in range(1, nmax + 1):
        nxt = {}
        hit = zero
        for (state, ms), p in dist.items():
            p0, p1 = m.step_probs(state)
            for ch, pc in (("0", p0), ("1", p1)):
                if pc == 0:
                    continue
                key = (m.next_state(state, ch), delta[ms][ch])
                w = p * pc
                nxt[key] = nxt.get(key, zero) + w
                if key[1] == full:
                    hit += w
        out[j] = hit
        dist = nxt
        if len(dist) > 200000:
            raise StateSpaceTooLarge(f"kernel DP exceeded budget at step {j}")
    return out


def conditional_kernel(m: StationaryMeasure, c: str, u: str, n: int):
    """q_c^(n)(u) for a conditioning tree word c (a finite context, or a
    composite renewal word whose reversal is the conditioning suffix)."""
    if n < len(u):
        raise OutOfRange(f"horizon n={n} shorter than |u|={len(u)}")
    suffix = W.reverse(c)
    if m.measure_of(suffix) == 0:
        raise Undefined(f"conditioning suffix {suffix!r} has zero mass")
    if n == len(u):
        return m.measure_of(suffix + u) / m.measure_of(suffix)
    return kernel_series(m, suffix, u, n)[n]


# --------------------------------------------------------------------------
# occurrence generating functions
# --------------------------------------------------------------------------


@dataclass
class OccurrenceGF:
    word: str
    r: int
    nmax: int
    conditioning: str  # tree-word form of the renewal suffix
    shape: str
    S_coeffs: list
    C_coeffs: list
    phi_coeffs: list = field(repr=False)
    phi1_coeffs: list = field(repr=False)

    def pmf(self, n: int):
        if not 0 <= n <= self.nmax:
            raise OutOfRange(f"n = {n} outside 0..{self.nmax}")
        return self.phi_coeffs[n]


def occurrence_pmf(gf: OccurrenceGF, n: int):
    return gf.pmf(n)


def _build_gf(m, w, r, nmax, suffix, shape):
    k = len(w)
    if r < 1:
        raise OutOfRange("r must be >= 1")
    zero = 0 if m.tree.exact else 0.0
    pi_w = m.measure_of(w)
    den = m.measure_of(suffix)
    if den == 0:
        raise Undefined(f"renewal suffix {suffix!r} has zero stationary mass")
    # correlation term: overlap indicator times the length-j suffix kernel
    C = [zero] * (nmax + 1)
    C[0] = zero + 1
    for j in range(1, k):
        if w[j:] == w[: k - j]:
            C[j] = m.measure_of(suffix + w[k - j :]) / den
    S = list(C)
    if nmax >= k:
        tail = kernel_series(m, suffix, w, nmax)
        for j in range(k, nmax + 1):
            S[j] = tail[j]
    # Phi1 = x^k pi(w) / ((1-x) S)
    H = [zero] * (nmax + 1)
    H[0] = zero + 1
    for j in range(1, nmax + 1):
        H[j] = S[j] - S[j - 1]
    G = poly_inv(H, nmax)
    phi1 = [zero] * (nmax + 1)
    for n in range(k, nmax + 1):
        phi1[n] = pi_w * G[n - k]
    if r == 1:
        phi = phi1
    else:
        s_inv = poly_inv(S, nmax)
        psi = [-x for x in s_inv]
        psi[0] = 1 + psi[0]  # 1 - 1/S, constant term 0
        phi = phi1
        for _ in range(r - 1):
            phi = poly_mul(phi, psi, nmax)
    return OccurrenceGF(
        word=w,
        r=r,
        nmax=nmax,
        conditioning=W.reverse(suffix),
        shape=shape,
        S_coeffs=S,
        C_coeffs=C[:k],
        phi_coeffs=phi,
        phi1_coeffs=phi1,
    )


def occurrence_gf_comb(m: StationaryMeasure, w: str, r: int, nmax: int) -> OccurrenceGF:
    """Occurrence GF for a comb source; w must contain a 1 (otherwise its
    reversal is an internal node and the renewal argument fails)."""
    if not isinstance(m.backend, CombSolution):
        raise Undefined("comb backend required")
    W.check_word(w)
    if "1" not in w or len(w) == 0:
        raise InternalNodeWord(f"word {w!r} reversed is an internal comb node")
    suffix = w[w.rfind("1") :]  # = reversed pref(w)
    return _build_gf(m, w, r, nmax, suffix, shape="comb")


def classify_bamboo_word(w: str):
    """(shape, renewal suffix) for the bamboo: the suffix from the last
    adjacent equal pair.  Shapes: '*00(10)^l' and '*11(01)^l0' condition
    on pref(w); '*00(10)^l1' and '*11(01)^l' need the composite suffix."""
    k = len(w)
    if k <= 1:
        raise UnclassifiableWord(f"word {w!r} too short for the shape rules", attempted=w)
    if W.is_alternating(w):
        if w[0] == "1" and w[-1] == "0" or w[0] == "0" and w[-1] == "0":
            # (10)^m or 0(10)^m: reversed internal node
            raise InternalNodeWord(f"word {w!r} reversed is an internal bamboo node")
        raise UnclassifiableWord(
            f"word {w!r} is purely alternating: no renewal pair", attempted=w
        )
    i = W.last_equal_pair(w)
    tail = w[i:]
    ell = (len(tail) - 2) // 2
    pair = w[i] * 2
    trailing = tail[2:]
    if pair == "00":
        shape = f"*00(10)^{{{ell}}}" + (" 1" if len(trailing) % 2 else "")
        expected = "00" + W.alternating("1", len(trailing))
    else:
        shape = f"*11(01)^{{{ell}}}" + (" 0" if len(trailing) % 2 else "")
        expected = "11" + W.alternating("0", len(trailing))
    if tail != expected:
        raise UnclassifiableWord(
            f"shape decomposition failed for {w!r}: tail {tail!r} != {expected!r}",
            attempted=shape,
        )
    return shape, tail


def occurrence_gf_bamboo(m: StationaryMeasure, w: str, r: int, nmax: int) -> OccurrenceGF:
    """Occurrence GF for a bamboo source; the word must carry an adjacent
    equal pair (the renewal anchor)."""
    if not isinstance(m.backend, BambooSolution):
        raise Undefined("bamboo backend required")
    W.check_word(w)
    shape, suffix = classify_bamboo_word(w)
    return _build_gf(m, w, r, nmax, suffix, shape=shape)


# --------------------------------------------------------------------------
# brute-force oracle
# --------------------------------------------------------------------------


def oracle_occurrence_pmf(m: StationaryMeasure, w: str, r: int, nmax: int):
    """P(T_w^(r) = n) for n = 0..nmax by direct DP from the stationary
    context law: (suffix state, automaton state, hits so far), occurrences
    counted from letter 1 on.  Uses none of the generating function
    machinery; exact in rational mode for eventually-constant families."""
    W.check_word(w)
    if r < 1:
        raise OutOfRange("r must be >= 1")
    zero = 0 if m.tree.exact else 0.0
    items, leftover = m.folded_context_distribution()
    if not items:
        raise Undefined("Dirac measure: no context ever occurs")
    delta = match_automaton(w)
    full = len(w)
    dist = {}
    for c, mass in items:
        key = (m.canonical_suffix(W.reverse(c)), 0, 0)
        dist[key] = dist.get(key, zero) + mass
    # leftover = mass of infinite-leaf atoms; for the irreducible cases it
    # is zero, otherwise those histories emit the frozen tail forever and
    # never meet a finite context, so w containing both letters never
    # occurs; fold as a dead state.
    out = [zero] * (nmax + 1)
    for n in range(1, nmax + 1):
        nxt = {}
        for (state, ms, hits), p in dist.items():
            p0, p1 = m.step_probs(state)
            for ch, pc in (("0", p0), ("1", p1)):
                if pc == 0:
                    continue
                ms2 = delta[ms][ch]
                hits2 = hits
                weight = p * pc
                if ms2 == full:
                    hits2 += 1
                    if hits2 == r:
                        out[n] += weight
                        hits2 = r  # absorb counting; keep propagating
                key = (m.next_state(state, ch), ms2, min(hits2, r))
                nxt[key] = nxt.get(key, zero) + weight
        dist = nxt
        if len(dist) > 500000:
            raise StateSpaceTooLarge(f"oracle DP exceeded budget at step {n}")
    return out
