"""Compile a stationary VLMC into its interval dynamical source.

The subdivision assigns to every word w the interval I_w with
|I_w| = pi(w~) (w~ the reversed word), nested by prefix and ordered
alphabetically.  The map T is the unique left-continuous function that
is affine increasing on each horizontal piece I_{alpha c} with
T(I_{alpha c}) = I_c; its slope there is 1/q_c(alpha).

Intervals are left-open right-closed except those of the form I_{0^n},
which are compact; the interval algebra below carries those endpoint
flags so the structural identities (T(I_{alpha w}) = I_w, Lebesgue
invariance, seed sets B_w = I_w) can be checked bit-exactly in rational
mode.

Infinite trees are truncated at a depth: contexts deeper than that leave
residual "zones" around the accumulation points of the piece family
(0 and pi(0) for the comb, a_0 in I_0 and a_1 in I_1 for the bamboo).
Each zone is kept as a monotone meta-piece (source gap -> target gap);
set operations accept a zone only entirely inside or entirely outside
the queried set, and report bounds otherwise.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass

from . import words as W
from .errors import (
    LimitUndefined,
    UnresolvedPoint,
    UnresolvedRegion,
    ZeroMassTree,
)
from .stationary import BambooSolution, CombSolution, StationaryMeasure


# --------------------------------------------------------------------------
# interval algebra with endpoint flags
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Iv:
    """Interval with explicit endpoint membership (default: (lo, hi])."""

    lo: object
    hi: object
    lo_closed: bool = False
    hi_closed: bool = True

    @property
    def length(self):
        return self.hi - self.lo

    def is_empty(self) -> bool:
        if self.lo > self.hi:
            return True
        return self.lo == self.hi and not (self.lo_closed and self.hi_closed)

    def contains(self, x) -> bool:
        if x < self.lo or x > self.hi:
            return False
        if x == self.lo and not self.lo_closed:
            return False
        if x == self.hi and not self.hi_closed:
            return False
        return True

    def intersect(self, other: "Iv"):
        if self.lo > other.lo:
            lo, lo_closed = self.lo, self.lo_closed
        elif other.lo > self.lo:
            lo, lo_closed = other.lo, other.lo_closed
        else:
            lo, lo_closed = self.lo, self.lo_closed and other.lo_closed
        if self.hi < other.hi:
            hi, hi_closed = self.hi, self.hi_closed
        elif other.hi < self.hi:
            hi, hi_closed = other.hi, other.hi_closed
        else:
            hi, hi_closed = self.hi, self.hi_closed and other.hi_closed
        out = Iv(lo, hi, lo_closed, hi_closed)
        return None if out.is_empty() else out

    def covers(self, other: "Iv") -> bool:
        """Whether other is a subset of self."""
        if other.is_empty():
            return True
        lo_ok = self.lo < other.lo or (
            self.lo == other.lo and (self.lo_closed or not other.lo_closed)
        )
        hi_ok = self.hi > other.hi or (
            self.hi == other.hi and (self.hi_closed or not other.hi_closed)
        )
        return lo_ok and hi_ok

    def disjoint(self, other: "Iv") -> bool:
        return self.intersect(other) is None


def same_endpoints(parts, iv: Iv) -> bool:
    """A single interval with the endpoints of iv (membership of the two
    boundary points themselves is convention, not measure)."""
    return len(parts) == 1 and parts[0].lo == iv.lo and parts[0].hi == iv.hi


def merge_intervals(ivs):
    """Union of pairwise-disjoint intervals, coalescing touching ones."""
    out = []
    for iv in sorted((i for i in ivs if not i.is_empty()), key=lambda i: (i.lo, i.hi)):
        if out and out[-1].hi == iv.lo and (out[-1].hi_closed or iv.lo_closed):
            prev = out.pop()
            out.append(Iv(prev.lo, iv.hi, prev.lo_closed, iv.hi_closed))
        else:
            out.append(iv)
    return out


# --------------------------------------------------------------------------
# subdivision
# --------------------------------------------------------------------------


class AdicSubdivision:
    """Nested interval family {I_w}, |I_w| = pi(w~), alphabetical order."""

    def __init__(self, m: StationaryMeasure, depth: int):
        if depth < 1:
            raise ValueError("depth must be >= 1")
        self.measure = m
        self.depth = depth
        zero = 0 if m.tree.exact else 0.0
        one = zero + 1
        self._iv = {"": Iv(zero, one, lo_closed=True)}
        for ell in range(1, depth + 1):
            acc = zero
            for w in W.all_words(ell):
                mass = m.measure_of(W.reverse(w))
                lo, hi = acc, acc + mass
                self._iv[w] = Iv(lo, hi, lo_closed=(w == "0" * ell))
                acc = hi
            # float accumulation can drift off 1; the last hi is left as computed

    def interval(self, w: str) -> Iv:
        if len(w) > self.depth:
            raise KeyError(f"word {w!r} deeper than subdivision depth {self.depth}")
        return self._iv[w]

    def words(self, length: int):
        return list(W.all_words(length))


def build_subdivision(m: StationaryMeasure, depth: int) -> AdicSubdivision:
    return AdicSubdivision(m, depth)


# --------------------------------------------------------------------------
# the map
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Piece:
    """Affine increasing bijection source -> target; slope = 1/q_c(alpha)."""

    word: str  # alpha + c
    letter: str
    context: str
    source: Iv
    target: Iv
    q: object  # q_c(alpha); slope is 1/q

    def forward(self, x):
        return self.target.lo + (x - self.source.lo) / self.q

    def backward(self, y):
        return self.source.lo + (y - self.target.lo) * self.q

    def map_iv(self, iv: Iv):
        """Image of a source subset; clamped into the target's endpoint
        conventions (the open boundary of a piece is never attained)."""
        raw = Iv(self.forward(iv.lo), self.forward(iv.hi), iv.lo_closed, iv.hi_closed)
        return raw.intersect(self.target)

    def unmap_iv(self, iv: Iv):
        raw = Iv(self.backward(iv.lo), self.backward(iv.hi), iv.lo_closed, iv.hi_closed)
        return raw.intersect(self.source)


@dataclass(frozen=True)
class Zone:
    """Truncation residual around an accumulation point: T maps the source
    gap monotonically onto the target gap through the dropped pieces."""

    source: Iv
    target: Iv


class IntervalMap:
    """Piecewise-affine left-continuous map of [0, 1] compiled from a
    stationary VLMC, truncated at a context depth for infinite trees."""

    def __init__(self, m: StationaryMeasure, depth: int):
        tree = m.tree
        self.measure = m
        self.depth = depth
        self.sub = AdicSubdivision(m, depth)
        zero = 0 if tree.exact else 0.0
        self.split = m.measure_of("0")  # I_0 = [0, split], I_1 = (split, 1]

        contexts = [c for c in tree.leaves_to_depth(depth - 1)]
        pieces = []
        self.discontinuities = []
        for c in contexts:
            c_iv = self.sub.interval(c)
            if c_iv.length == 0:
                continue
            for alpha in W.ALPHABET:
                q = tree.context_q(c)[0 if alpha == "0" else 1]
                src = self.sub.interval(alpha + c)
                if q == 0:
                    self.discontinuities.append(src.hi)
                    continue
                pieces.append(
                    Piece(alpha + c, alpha, c, src, self.sub.interval(c), q)
                )
        pieces.sort(key=lambda p: p.source.lo)
        self.pieces = pieces
        self._src_los = [p.source.lo for p in pieces]

        # zones: gaps in the source cover, one block per coding letter
        one = zero + 1
        blocks = {"0": Iv(zero, self.split, lo_closed=True), "1": Iv(self.split, one)}
        zones = []
        for letter, block in blocks.items():
            inside = [p for p in pieces if p.letter == letter]
            cursor = block.lo
            prev = None
            for p in inside:
                gap = Iv(cursor, p.source.lo, lo_closed=block.lo_closed and prev is None,
                         hi_closed=not p.source.lo_closed)
                if not gap.is_empty() and gap.length > 0:
                    t_lo = prev.target.hi if prev is not None else zero
                    t_hi = p.target.lo
                    zones.append(
                        Zone(gap, Iv(t_lo, t_hi, lo_closed=(prev is None),
                                     hi_closed=not p.target.lo_closed))
                    )
                cursor = p.source.hi
                prev = p
            if prev is not None and cursor < block.hi:
                zones.append(
                    Zone(Iv(cursor, block.hi), Iv(prev.target.hi, one))
                )
        self.zones = zones
        self.residual = sum((z.source.length for z in zones), zero)

    # -- point evaluation ---------------------------------------------------

    def piece_at(self, x):
        i = bisect.bisect_right(self._src_los, x)
        # a point equal to some piece's open lo belongs to the previous piece
        for j in (i - 1, i - 2):
            if 0 <= j < len(self.pieces) and self.pieces[j].source.contains(x):
                return self.pieces[j]
        return None

    def apply(self, x):
        """T(x); raises UnresolvedPoint inside a truncation zone."""
        if x < 0 or x > 1:
            raise ValueError(f"x = {x} outside [0, 1]")
        p = self.piece_at(x)
        if p is not None:
            return p.forward(x)
        for z in self.zones:
            if z.source.contains(x):
                raise UnresolvedPoint(
                    f"x = {x} lies in the truncation residual {z.source}"
                )
        raise UnresolvedPoint(f"x = {x} not covered (discontinuity atom?)")

    def coding(self, x) -> str:
        return "0" if x <= self.split else "1"

    # -- set operations -----------------------------------------------------

    def image(self, iv: Iv):
        """T(iv) as a merged interval list; zones must be in or out."""
        parts = []
        for p in self.pieces:
            got = p.source.intersect(iv)
            if got is not None and (img := p.map_iv(got)) is not None:
                parts.append(img)
        for z in self.zones:
            if iv.covers(z.source):
                parts.append(z.target)
            elif not z.source.disjoint(iv):
                raise UnresolvedRegion(
                    f"query {iv} partially overlaps the residual {z.source}"
                )
        return merge_intervals(parts)

    def preimage(self, iv: Iv):
        """T^-1(iv) as a merged interval list; zones must be in or out."""
        parts = []
        for p in self.pieces:
            got = p.target.intersect(iv)
            if got is not None and (pre := p.unmap_iv(got)) is not None:
                parts.append(pre)
        for z in self.zones:
            if iv.covers(z.target):
                parts.append(z.source)
            elif not z.target.disjoint(iv):
                raise UnresolvedRegion(
                    f"query {iv} partially overlaps the residual image {z.target}"
                )
        return merge_intervals(parts)

    def preimage_length(self, iv: Iv):
        """|T^-1(iv)| exactly, or (lower, upper) bounds when the query cuts
        through a truncation residual."""
        zero = iv.lo - iv.lo
        definite = zero
        slack = zero
        for p in self.pieces:
            got = p.target.intersect(iv)
            if got is not None:
                definite += got.length * p.q
        for z in self.zones:
            if iv.covers(z.target):
                definite += z.source.length
            elif not z.target.disjoint(iv):
                slack += z.source.length
        if slack == 0:
            return definite
        raise UnresolvedRegion(
            "query cuts a truncation residual; returning bounds",
            lower=definite,
            upper=definite + slack,
        )


def build_map(tree, m: StationaryMeasure, depth: int) -> IntervalMap:
    """Compile the map, truncating infinite trees at `depth`.

    Finite trees get their natural full depth (height + 1) when the
    requested depth is smaller.  Dirac measures are refused: the pieces
    would all be empty.
    """
    if tree is not m.tree:
        raise ValueError("tree and measure disagree")
    b = m.backend
    if isinstance(b, CombSolution) and b.pi1 == 0:
        raise ZeroMassTree("Dirac comb measure; map construction refused")
    if isinstance(b, BambooSolution) and b.case_tag == "dirac-mixture":
        raise ZeroMassTree("Dirac bamboo mixture; map construction refused")
    if tree.is_finite:
        depth = max(depth, tree.height + 1)
    return IntervalMap(m, depth)


# --------------------------------------------------------------------------
# orbits and seed sets
# --------------------------------------------------------------------------


def apply_map(tmap: IntervalMap, x):
    return tmap.apply(x)


def orbit_letters(tmap: IntervalMap, x, n: int) -> str:
    """Y_0 ... Y_{n-1} with Y_k the coding letter of T^k(x)."""
    out = []
    for _ in range(n):
        out.append(tmap.coding(x))
        x = tmap.apply(x)
    return "".join(out)


def seed_interval(tmap: IntervalMap, w: str):
    """The set of seeds whose emitted word starts with w, computed from the
    map alone: B_w = I_{w_0} cap T^-1(B_{w_1...}).  Returns an interval
    list (a single interval when the structure theorem holds)."""
    zero = 0 if tmap.measure.tree.exact else 0.0
    one = zero + 1
    current = [Iv(zero, one, lo_closed=True)]
    for ch in reversed(w):
        coding_iv = (
            Iv(zero, tmap.split, lo_closed=True)
            if ch == "0"
            else Iv(tmap.split, one)
        )
        pulled = []
        for iv in current:
            pulled.extend(tmap.preimage(iv))
        current = merge_intervals(
            [got for iv in pulled if (got := coding_iv.intersect(iv)) is not None]
        )
    return current


def monte_carlo_prefix_frequency(tmap: IntervalMap, w: str, n_seeds: int, seed: int):
    """Fraction of uniform seeds emitting prefix w (float arithmetic)."""
    import numpy as np

    rng = np.random.default_rng(seed)
    xs = rng.random(n_seeds)
    los = np.array([float(p.source.lo) for p in tmap.pieces])
    his = np.array([float(p.source.hi) for p in tmap.pieces])
    slopes = np.array([1.0 / float(p.q) for p in tmap.pieces])
    tlos = np.array([float(p.target.lo) for p in tmap.pieces])
    split = float(tmap.split)
    alive = np.ones(n_seeds, dtype=bool)
    for ch in w:
        emitted0 = xs <= split
        alive &= emitted0 if ch == "0" else ~emitted0
        idx = np.searchsorted(los, xs, side="right") - 1
        idx = np.clip(idx, 0, len(los) - 1)
        # seeds falling into a truncation zone are dropped (tiny mass)
        alive &= (xs > los[idx]) & (xs <= his[idx])
        xs = tlos[idx] + (xs - los[idx]) * slopes[idx]
    return float(np.mean(alive))


# --------------------------------------------------------------------------
# derivatives at accumulation points
# --------------------------------------------------------------------------


def accumulation_derivatives(tmap: IntervalMap) -> dict:
    """One-sided derivative limits of T at the accumulation points of the
    horizontal partition (infinite trees only).

    Comb: T'_r(0) = lim 1/q_{0^n 1}(0) and T'_r(pi(0)) = lim 1/q_{0^n 1}(1);
    the limit 1 at 0 flags an indifferent fixed point.  Bamboo: four
    one-sided limits at a_0 (inside I_0) and a_1 (inside I_1).
    """
    m = tmap.measure
    b = m.backend
    if isinstance(b, CombSolution):
        fam = b.fam
        lim0 = fam.limit_q0()
        lim1 = 1 - lim0
        d0 = math.inf if lim0 == 0 else 1 / lim0
        d1 = math.inf if lim1 == 0 else 1 / lim1
        return {
            "model": "comb",
            "points": [
                {
                    "point": 0,
                    "side": "right",
                    "derivative": d0,
                    "indifferent": d0 == 1,
                },
                {"point": b.pi_zeros(1), "side": "right", "derivative": d1},
            ],
        }
    if isinstance(b, BambooSolution):
        lim1_q0 = b.fam1.limit_q0()
        lim00_q0 = b.fam00.limit_q0()
        a0, a1 = bamboo_accumulation_points(b)
        entries = []
        for point, side, lim in (
            (a0, "left", lim00_q0),
            (a0, "right", lim1_q0),
            (a1, "left", 1 - lim00_q0),
            (a1, "right", 1 - lim1_q0),
        ):
            entries.append(
                {
                    "point": point,
                    "side": side,
                    "derivative": math.inf if lim == 0 else 1 / lim,
                }
            )
        return {"model": "bamboo", "points": entries}
    return {"model": "finite", "points": []}


def bamboo_accumulation_points(b: BambooSolution):
    """a_0 = sup of the 00-side pieces in I_0, a_1 likewise in I_1.

    a_0 = sum_n |I_{0 (01)^n 00}| = sum_n pi(00) c_n(00) q_{(01)^n 00}(0)
    and a_1 = pi(0) + sum_n pi(00) c_n(00) q_{(01)^n 00}(1); exact
    geometric tails for eventually-constant families, numeric otherwise.
    """
    ec = b.fam00.eventually_constant()

    def tail_sum(term, ratio_from):
        # sum_{n>=0} term(n) where term(n+1) = term(n) * r for n >= ratio_from
        if ec is not None:
            h = max(ratio_from, 1)
            head = sum(term(n) for n in range(h))
            t = term(h)
            if t == 0:
                return head
            r = term(h + 1) / t if term(h) != 0 else 0
            return head + t / (1 - r)
        total, n = 0.0, 0
        while True:
            t = float(term(n))
            total += t
            if t <= 1e-22 * max(total, 1e-300) and n > 4:
                return total
            n += 1
            if n > 200000:
                raise LimitUndefined("accumulation point sum did not settle")

    if ec is not None:
        h0, _ = ec
        a0 = tail_sum(lambda n: b.pi00 * b.c00(n) * b.fam00.q0(n), h0)
        a1_off = tail_sum(lambda n: b.pi00 * b.c00(n) * b.fam00.q1(n), h0)
    else:
        a0 = tail_sum(lambda n: b.pi00 * b.c00(n) * b.fam00.q0(n), 0)
        a1_off = tail_sum(lambda n: b.pi00 * b.c00(n) * b.fam00.q1(n), 0)
    pi0 = 1 - b.pi1
    return a0, pi0 + a1_off
