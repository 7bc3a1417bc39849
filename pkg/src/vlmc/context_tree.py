"""Probabilized context trees over the binary alphabet.

A context tree is a saturated prefix-closed set of binary words; its
leaves (the "contexts") form a cutset: every right-infinite word has
exactly one leaf as a prefix.  Each context carries a probability pair
(q_c(0), q_c(1)).  A left-infinite history selects its context by being
read right to left down the tree (the prefix function).

Representable trees are either fully finite, or a single infinite branch
whose path is a periodic word anchored at the root, with the off-branch
child at each path node being a context whose probabilities come from a
QFamily.  Period "0" gives the comb (contexts 0^n 1), period "01" the
bamboo blossom (contexts (01)^n 1 and (01)^n 00).  Two distinct
root-anchored periodic branches always collide (the off-child of one is
the spine of the other), so at most one branch is accepted.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import words as W
from .errors import (
    BadProbability,
    DanglingBranch,
    InsufficientHistory,
    NotPrefixFree,
    NotSaturated,
    UnsupportedTree,
    ValidationError,
)
from .families import QFamily, family_from_json
from .numeric import FLOAT_TOL, Number, format_scalar, parse_scalar


@dataclass(frozen=True)
class InfiniteBranch:
    """Root-anchored periodic infinite branch with per-offset context families."""

    period: str
    families: tuple  # one QFamily per offset within the period
    q_inf0: Number = 1  # q of the infinite leaf itself, letter 0

    def path_letter(self, depth: int) -> str:
        return self.period[depth % len(self.period)]

    def is_path_node(self, u: str) -> bool:
        return all(u[i] == self.path_letter(i) for i in range(len(u)))

    def off_letter(self, depth: int) -> str:
        return "1" if self.path_letter(depth) == "0" else "0"

    def context_at(self, depth: int) -> str:
        """The generated context hanging off the path node of given depth."""
        path = "".join(self.path_letter(i) for i in range(depth))
        return path + self.off_letter(depth)

    def family_index(self, depth: int):
        """(family, index) feeding the context generated at `depth`."""
        return self.families[depth % len(self.period)], depth // len(self.period)

    def context_q(self, depth: int):
        fam, n = self.family_index(depth)
        q0 = fam.q0(n)
        return (q0, 1 - q0)


@dataclass(frozen=True)
class PrefResult:
    """Outcome of the prefix function: a context, or an internal node when
    the whole queried suffix was consumed inside the tree."""

    kind: str  # "context" | "internal"
    word: str  # tree node (root-first spelling)

    @property
    def is_context(self) -> bool:
        return self.kind == "context"


class ContextTree:
    """Validated, immutable probabilized context tree."""

    def __init__(self, finite_q: dict, branch: Optional[InfiniteBranch], exact: bool):
        self.finite_q = dict(finite_q)  # declared context -> (q0, q1)
        self.branch = branch
        self.exact = exact
        self._internal = set()
        for w in self.finite_q:
            for i in range(len(w)):
                self._internal.add(w[:i])
        if branch is None and self.finite_q:
            self._internal.add("")
        self._height = max((len(w) for w in self.finite_q), default=0)

    # -- structure queries -------------------------------------------------

    @property
    def height(self):
        """Tree height: an int for finite trees, None for infinite ones."""
        return None if self.branch is not None else self._height

    @property
    def is_finite(self) -> bool:
        return self.branch is None

    @property
    def kind(self) -> str:
        if self.branch is None:
            return "finite"
        if self.branch.period in ("0", "1"):
            return "comb"
        if self.branch.period in ("01", "10"):
            return "bamboo"
        return "branch"

    def is_generated_context(self, u: str) -> bool:
        b = self.branch
        return (
            b is not None
            and len(u) >= 1
            and b.is_path_node(u[:-1])
            and u[-1] == b.off_letter(len(u) - 1)
        )

    def is_context(self, u: str) -> bool:
        return u in self.finite_q or self.is_generated_context(u)

    def is_internal(self, u: str) -> bool:
        if u in self._internal:
            return True
        b = self.branch
        return b is not None and b.is_path_node(u)

    def in_tree(self, u: str) -> bool:
        return self.is_internal(u) or self.is_context(u)

    def context_q(self, c: str):
        """Probability pair (q_c(0), q_c(1)) of a context."""
        if c in self.finite_q:
            return self.finite_q[c]
        if self.is_generated_context(c):
            return self.branch.context_q(len(c) - 1)
        raise KeyError(f"{c!r} is not a context of this tree")

    # -- prefix function ---------------------------------------------------

    def pref(self, suffix: str) -> PrefResult:
        """Read the suffix right to left down the tree.

        Returns context(c) once a leaf is reached; if the whole suffix is
        consumed at an internal node u (= reversed suffix), returns
        internal(u).
        """
        W.check_word(suffix)
        node = ""
        for ch in reversed(suffix):
            node += ch
            if self.is_context(node):
                return PrefResult("context", node)
            if not self.is_internal(node):
                raise ValidationError(
                    f"suffix {suffix!r} escapes the tree at node {node!r}"
                )
        return PrefResult("internal", node)

    def pref_context(self, suffix: str) -> str:
        """pref restricted to the context case; internal outcomes are errors."""
        res = self.pref(suffix)
        if not res.is_context:
            raise InsufficientHistory(
                f"suffix {suffix!r} ends at internal node {res.word!r}; "
                "a longer history is needed to determine the context"
            )
        return res.word

    # -- enumeration -------------------------------------------------------

    def leaves_to_depth(self, depth: int):
        """All finite contexts of length <= depth, alphabetical order."""
        out = [w for w in self.finite_q if len(w) <= depth]
        if self.branch is not None:
            d = 0
            while d + 1 <= depth:
                out.append(self.branch.context_at(d))
                d += 1
        return sorted(out)

    def minimal_contexts(self):
        """Finite contexts minimal for the subword partial order.

        Along a branch, the context generated one period deeper contains
        its precursor as a suffix, so only the first-period generated
        contexts can be minimal; with the declared leaves this gives a
        finite candidate set, checked against every context short enough
        to fit inside a candidate.
        """
        candidates = list(self.finite_q)
        if self.branch is not None:
            candidates.extend(
                self.branch.context_at(d) for d in range(len(self.branch.period))
            )
        out = []
        for c in candidates:
            others = [u for u in self.finite_q if u != c and len(u) <= len(c)]
            if self.branch is not None:
                d = 0
                while d + 1 <= len(c):
                    g = self.branch.context_at(d)
                    if g != c and len(g) <= len(c):
                        others.append(g)
                    d += 1
            if not any(W.is_subword(u, c) for u in others):
                out.append(c)
        return sorted(out)

    # -- serialization -----------------------------------------------------

    def to_json(self) -> dict:
        enc = (lambda x: format_scalar(x)) if self.exact else (lambda x: float(x))
        doc = {
            "numeric_mode": "rational" if self.exact else "float",
            "finite_contexts": [
                {"word": w, "q0": enc(q0)} for w, (q0, _) in sorted(self.finite_q.items())
            ],
        }
        if self.branch is not None:
            doc["infinite_branches"] = [
                {
                    "period": self.branch.period,
                    "families": [f.to_json() for f in self.branch.families],
                    "q_infinite_leaf_0": enc(self.branch.q_inf0),
                }
            ]
        return doc

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


# --- validation -----------------------------------------------------------


def _parse_prob_pair(entry: dict, exact: bool):
    q0 = parse_scalar(entry["q0"], exact)
    if "q1" in entry:
        q1 = parse_scalar(entry["q1"], exact)
    else:
        q1 = 1 - q0
    for q in (q0, q1):
        if not (0 <= q <= 1):
            raise BadProbability(f"probability {q} outside [0, 1] for {entry}")
    s = q0 + q1
    if exact:
        if s != 1:
            raise BadProbability(f"q0 + q1 = {s} != 1 for {entry}")
    elif abs(float(s) - 1.0) > FLOAT_TOL:
        raise BadProbability(f"q0 + q1 = {s} deviates from 1 for {entry}")
    return (q0, q1)


def _resolve_mode(spec: dict, exact: Optional[bool]) -> bool:
    if exact is not None:
        return exact
    mode = spec.get("numeric_mode")
    if mode is not None:
        if mode not in ("rational", "float"):
            raise ValidationError(f"numeric_mode must be 'rational' or 'float', got {mode!r}")
        return mode == "rational"
    # infer: exact iff every literal is exact and no analytic family is used
    def scalars():
        for entry in spec.get("finite_contexts", []):
            yield entry.get("q0")
            if "q1" in entry:
                yield entry.get("q1")
        for br in spec.get("infinite_branches", []):
            yield br.get("q_infinite_leaf_0", 1)
            fams = br.get("families") or [br.get("family")]
            for f in fams:
                if f and f.get("kind") in ("zeta", "indifferent", "table-then-geometric"):
                    yield 0.5  # forces float
                elif f:
                    yield from f.get("values", [])
                    for key in ("p", "tail"):
                        if key in f:
                            yield f[key]

    return all(isinstance(x, (int, str, Fraction)) for x in scalars())


def validate(spec: dict, exact: Optional[bool] = None) -> ContextTree:
    """Check a raw tree description and build the ContextTree.

    Raises NotSaturated, NotPrefixFree, BadProbability or DanglingBranch
    on structural defects, UnsupportedTree for shapes outside the
    representable class (multiple branches, leaves next to a branch).
    """
    exact = _resolve_mode(spec, exact)

    finite_q = {}
    for entry in spec.get("finite_contexts", []):
        w = W.check_word(entry["word"])
        if w == "":
            raise NotSaturated("the empty word cannot be a context")
        if w in finite_q:
            raise NotPrefixFree(f"context {w!r} declared twice")
        finite_q[w] = _parse_prob_pair(entry, exact)

    raw_branches = spec.get("infinite_branches", [])
    if len(raw_branches) > 1:
        raise UnsupportedTree(
            "at most one root-anchored periodic branch is representable "
            "(two distinct periodic spines collide)"
        )
    branch = None
    if raw_branches:
        rb = raw_branches[0]
        period = W.check_word(rb["period"])
        if period == "":
            raise DanglingBranch("branch period must be nonempty")
        fams = rb.get("families")
        if fams is None:
            if "family" not in rb:
                raise ValidationError("branch needs 'family' or 'families'")
            fams = [rb["family"]]
        if len(fams) != len(period):
            raise ValidationError(
                f"branch with period {period!r} needs {len(period)} families, got {len(fams)}"
            )
        families = tuple(family_from_json(f, exact) for f in fams)
        q_inf0 = parse_scalar(rb.get("q_infinite_leaf_0", 1 if exact else 1.0), exact)
        if not (0 <= q_inf0 <= 1):
            raise BadProbability(f"q_infinite_leaf_0 = {q_inf0} outside [0, 1]")
        branch = InfiniteBranch(period, families, q_inf0)

        for w in finite_q:
            if branch.is_path_node(w):
                raise DanglingBranch(
                    f"declared context {w!r} lies on the infinite branch path"
                )
            # any other declared leaf extends (or equals) a generated context
            for i in range(len(w)):
                if branch.is_path_node(w[:i]) and w[i] == branch.off_letter(i):
                    g = w[: i + 1]
                    raise NotPrefixFree(
                        f"declared context {w!r} duplicates or extends the "
                        f"branch-generated context {g!r}"
                    )

    if branch is None and not finite_q:
        raise NotSaturated("empty tree")

    # prefix-freeness among declared leaves
    leaves = sorted(finite_q)
    for i, u in enumerate(leaves):
        for v in leaves[i + 1 :]:
            if v.startswith(u):
                raise NotPrefixFree(f"context {u!r} is a prefix of context {v!r}")

    tree = ContextTree(finite_q, branch, exact)

    # saturation of the finite part (branch nodes are saturated by construction)
    for u in sorted(tree._internal):
        for ch in W.ALPHABET:
            if not tree.in_tree(u + ch):
                raise NotSaturated(
                    f"internal node {u!r} is missing its child {u + ch!r}"
                )
    return tree


def load(path: str, exact: Optional[bool] = None) -> ContextTree:
    with open(path) as fh:
        return validate(json.load(fh), exact=exact)


def loads(text: str, exact: Optional[bool] = None) -> ContextTree:
    return validate(json.loads(text), exact=exact)


# --- convenience builders ---------------------------------------------------


def build_finite_tree(q_table: dict, exact: Optional[bool] = None) -> ContextTree:
    """Finite tree from {context word: q0} (q1 derived)."""
    spec = {"finite_contexts": [{"word": w, "q0": q} for w, q in q_table.items()]}
    return validate(spec, exact=exact)


def build_comb(family: QFamily, q_inf0: Number = 1, exact: Optional[bool] = None) -> ContextTree:
    """Infinite comb: branch 0^inf, contexts 0^n 1 fed by `family`."""
    if exact is None:
        exact = family.exact and isinstance(q_inf0, (int, Fraction))
    branch = InfiniteBranch("0", (family,), q_inf0)
    return ContextTree({}, branch, exact)


def build_bamboo(
    family_1: QFamily, family_00: QFamily, q_inf0: Number = 1, exact: Optional[bool] = None
) -> ContextTree:
    """Bamboo blossom: branch (01)^inf, contexts (01)^n 1 and (01)^n 00."""
    if exact is None:
        exact = family_1.exact and family_00.exact and isinstance(q_inf0, (int, Fraction))
    branch = InfiniteBranch("01", (family_1, family_00), q_inf0)
    return ContextTree({}, branch, exact)
