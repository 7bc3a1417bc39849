"""Direct simulation of the letter process from its stationary start.

The chain state is the canonical suffix of the emitted history (finite
tree: last h letters; comb: from the last 1; bamboo: from the last
adjacent equal pair).  Each step draws the next letter from the exact
stationary conditional pi(state + letter)/pi(state), which marginalizes
whatever deeper past the state does not determine, so the letter process
is exactly stationary (up to the documented fold of the initial context
law for infinite trees).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .stationary import BambooSolution, CombSolution, StationaryMeasure
from . import words as W


class RandomStream:
    """Deterministic, splittable random source (PCG64 behind a SeedSequence)."""

    def __init__(self, seed, _ss=None):
        self.seed = seed
        self._ss = _ss if _ss is not None else np.random.SeedSequence(seed)
        self.rng = np.random.default_rng(self._ss)

    def spawn(self, k: int):
        return [RandomStream(None, ss) for ss in self._ss.spawn(k)]

    def u01(self) -> float:
        return float(self.rng.random())


@dataclass
class ChainState:
    """Current resolved suffix; `dirac` tags histories absorbed in an
    infinite-leaf atom (frozen periodic tail)."""

    measure: StationaryMeasure
    suffix: str = ""
    dirac: bool = False
    atom_tail: str = ""  # last letters of the frozen tail, most recent last
    warning: str = ""

    @property
    def context(self) -> str:
        """The current context in tree-word form, when determined."""
        res = self.measure.tree.pref(self.suffix)
        return res.word if res.is_context else ""


def sample_initial(m: StationaryMeasure, rng: RandomStream, min_depth: int = 24) -> ChainState:
    """Draw the starting context from the stationary context law (tail
    folded into the deepest kept contexts; atoms on infinite leaves become
    dirac-tagged states).  The default fold depth keeps every individual
    context frequency within ~1e-7 of pi(c~) while the letter process law
    itself stays exact for eventually-constant families."""
    items, leftover = m.folded_context_distribution(min_depth=min_depth)
    if not items:
        return ChainState(m, dirac=True, atom_tail=_atom_tail(m), warning="DiracState")
    u = rng.u01()
    acc = 0.0
    for c, mass in items:
        acc += float(mass)
        if u <= acc:
            return ChainState(m, suffix=m.canonical_suffix(W.reverse(c)))
    return ChainState(m, dirac=True, atom_tail=_atom_tail(m), warning="atom start")


def _atom_tail(m: StationaryMeasure) -> str:
    return "10" if isinstance(m.backend, BambooSolution) else "00"


def step(state: ChainState, rng: RandomStream):
    """Emit one letter and resolve the next state."""
    if state.dirac:
        # frozen tails: the comb atom emits 0 forever; the bamboo mixture
        # alternates deterministically between its two atoms
        if isinstance(state.measure.backend, BambooSolution):
            letter = "1" if state.atom_tail.endswith("0") else "0"
        else:
            letter = "0"
        return letter, ChainState(
            state.measure,
            dirac=True,
            atom_tail=(state.atom_tail + letter)[-2:],
            warning=state.warning,
        )
    m = state.measure
    p0, _ = m.step_probs(state.suffix)
    letter = "0" if rng.u01() <= float(p0) else "1"
    return letter, ChainState(m, suffix=m.next_state(state.suffix, letter))


def generate(m: StationaryMeasure, n_letters: int, seed: int, word_cb=None) -> str:
    """n letters from a stationary start, deterministically from `seed`.

    Uses a compiled float transition table keyed by canonical state, so
    long runs stay fast even in rational mode.
    """
    rng = RandomStream(seed)
    state = sample_initial(m, rng)
    if state.dirac:
        out = []
        for _ in range(n_letters):
            letter, state = step(state, rng)
            out.append(letter)
        return "".join(out)
    table = {}
    suffix = state.suffix
    us = rng.rng.random(n_letters)
    out = []
    for i in range(n_letters):
        entry = table.get(suffix)
        if entry is None:
            p0, _ = m.step_probs(suffix)
            entry = (
                float(p0),
                m.next_state(suffix, "0"),
                m.next_state(suffix, "1"),
            )
            table[suffix] = entry
        if us[i] <= entry[0]:
            out.append("0")
            suffix = entry[1]
        else:
            out.append("1")
            suffix = entry[2]
    return "".join(out)


def state_closure_report(m: StationaryMeasure, depth: int = 30) -> dict:
    """Check whether the next state is a function of (state, letter) on the
    canonical state space, enumerating states to the given depth.

    For the comb the canonical states are exactly the reversed contexts
    1 0^k and closure holds; for the bamboo it holds on the refined
    states 00(10)^k, 00(10)^k 1, 11(01)^k, 11(01)^k 0 (the bare context
    "1" alone does not determine the successor after emitting 0)."""
    b = m.backend
    states = []
    if isinstance(b, CombSolution):
        states = ["1" + "0" * k for k in range(depth + 1)]
    elif isinstance(b, BambooSolution):
        for k in range((depth - 1) // 2 + 1):
            states += [
                "00" + "10" * k,
                "00" + "10" * k + "1",
                "11" + "01" * k,
                "11" + "01" * k + "0",
            ]
    else:
        states = [w for ell in range(1, m.tree.height + 1) for w in W.all_words(ell)]
    def in_family(word: str) -> bool:
        if isinstance(b, CombSolution):
            return word[:1] == "1" and set(word[1:]) <= {"0"}
        if isinstance(b, BambooSolution):
            i = W.last_equal_pair(word)
            return i == 0 and len(word) >= 2
        return len(word) <= m.tree.height

    closed = True
    rows = []
    for s in states:
        if m.measure_of(s) == 0:
            continue
        for ch in W.ALPHABET:
            nxt = m.next_state(s, ch)
            ok = in_family(nxt)
            rows.append((s, ch, nxt, ok))
            closed &= ok
    return {"closed": closed, "transitions": rows}


def window_sigma(m: StationaryMeasure, w: str, n_windows: int) -> float:
    """Standard deviation of the empirical frequency of w over sliding
    windows, including the short-range covariances between overlapping
    windows (exact for memoryless sources; the dominant correction
    otherwise): two windows shifted by j < |w| can both match only when
    w overlaps itself at shift j, with joint mass pi(w + w[-j:])."""
    p = float(m.measure_of(w))
    ell = len(w)
    var = p * (1 - p)
    for j in range(1, ell):
        if w[j:] == w[: ell - j]:
            joint = float(m.measure_of(w + w[ell - j :]))
        else:
            joint = 0.0
        var += 2 * (1 - j / n_windows) * (joint - p * p)
    return (max(var, 0.0) / n_windows) ** 0.5


def empirical_report(
    tree,
    m: StationaryMeasure,
    n_letters: int,
    seed: int,
    word: str = None,
    max_len: int = 6,
) -> dict:
    """Word frequencies up to max_len against the solved measure, plus the
    empirical first-occurrence law of `word` against its generating
    function, with CLT tolerances."""
    if n_letters < 10 ** 3:
        raise ValueError("need at least 10^3 letters")
    seq = generate(m, n_letters, seed)
    rows = []
    for ell in range(1, max_len + 1):
        counts = Counter(seq[i : i + ell] for i in range(n_letters - ell + 1))
        n_windows = n_letters - ell + 1
        for w in W.all_words(ell):
            p = float(m.measure_of(w))
            freq = counts.get(w, 0) / n_windows
            sigma = window_sigma(m, w, n_windows)
            rows.append(
                {
                    "word": w,
                    "expected": p,
                    "observed": freq,
                    "z": (freq - p) / sigma if sigma > 0 else 0.0,
                }
            )
    report = {"n_letters": n_letters, "seed": seed, "frequencies": rows}
    if word:
        from .occurrences import occurrence_gf_bamboo, occurrence_gf_comb, oracle_occurrence_pmf

        horizon = max(4 * len(word), 30)
        reps = 3000
        streams = RandomStream(seed + 1).spawn(reps)
        counts = Counter()
        for st_ in streams:
            s = generate(m, horizon, int(st_.rng.integers(0, 2 ** 62)))
            pos = s.find(word)
            counts[pos + len(word) if pos >= 0 else -1] += 1
        backend = m.backend
        if isinstance(backend, CombSolution):
            gf = occurrence_gf_comb(m, word, 1, horizon)
            pmf = [float(x) for x in gf.phi_coeffs]
        elif isinstance(backend, BambooSolution):
            gf = occurrence_gf_bamboo(m, word, 1, horizon)
            pmf = [float(x) for x in gf.phi_coeffs]
        else:
            pmf = [float(x) for x in oracle_occurrence_pmf(m, word, 1, horizon)]
        occ = []
        for n in range(len(word), min(horizon, len(word) + 12)):
            p = pmf[n]
            freq = counts.get(n, 0) / reps
            sigma = (p * (1 - p) / reps) ** 0.5
            occ.append(
                {"n": n, "expected": p, "observed": freq,
                 "z": (freq - p) / sigma if sigma > 0 else 0.0}
            )
        report["occurrence"] = {"word": word, "rows": occ}
    return report
