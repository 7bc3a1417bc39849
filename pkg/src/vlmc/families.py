"""Probability families for the contexts hanging off an infinite branch.

A family produces q_n(0), the probability of emitting 0 from the n-th
context along the branch (q_n(1) = 1 - q_n(0)).  Closed-form series used
by the solvers key off the family kind:

* constant / table-then-constant / periodic have exact rational series
  and therefore support rational mode;
* table-then-geometric, zeta and indifferent are float-only.

The zeta family fixes the cumulative products directly,
c_n = (1/zeta(alpha)) * sum_{k>=n} k^-alpha, and the indifferent family
q_n(0) = (1 - 1/(n+2))^alpha gives c_n = (1+n)^-alpha, the intermittent
(Wang-map-like) source.
"""

from __future__ import annotations

from fractions import Fraction

import mpmath

from .errors import BadParams, LimitUndefined
from .numeric import Number, one_minus, parse_scalar

mpmath.mp.dps = 30


def _check_prob(p: Number, what: str) -> Number:
    if not (0 <= p <= 1):
        raise BadParams(f"{what} must lie in [0, 1], got {p}")
    return p


class QFamily:
    """Base class; subclasses define q0(n) and series capabilities."""

    kind: str = ""
    exact: bool = False

    def q0(self, n: int) -> Number:
        raise NotImplementedError

    def q1(self, n: int) -> Number:
        return one_minus(self.q0(n))

    def limit_q0(self) -> Number:
        """lim_n q_n(0); raises LimitUndefined when it does not exist."""
        raise NotImplementedError

    def eventually_constant(self):
        """(H, p) with q_n(0) = p for all n >= H, or None."""
        return None

    def c(self, n: int) -> Number:
        """Cumulative product c_n = prod_{k<n} q_k(0) (c_0 = 1)."""
        if not hasattr(self, "_c_cache"):
            self._c_cache = [1 if self.exact else 1.0]
        cache = self._c_cache
        while len(cache) <= n:
            m = len(cache) - 1
            cache.append(cache[-1] * self.q0(m))
        return cache[n]

    def series_c_converges(self) -> bool:
        """Whether sum_n c_n is finite."""
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError


class ConstantFamily(QFamily):
    kind = "constant"

    def __init__(self, p: Number):
        self.p = _check_prob(p, "constant family p")
        self.exact = isinstance(p, (Fraction, int))

    def q0(self, n):
        return self.p

    def limit_q0(self):
        return self.p

    def eventually_constant(self):
        return (0, self.p)

    def series_c_converges(self):
        return self.p < 1

    def to_json(self):
        from .numeric import format_scalar

        return {"kind": "constant", "p": format_scalar(self.p) if self.exact else float(self.p)}


class TableThenConstantFamily(QFamily):
    kind = "table-then-constant"

    def __init__(self, values, tail: Number):
        if not values:
            raise BadParams("table-then-constant needs at least one table value")
        self.values = [_check_prob(v, "table value") for v in values]
        self.tail = _check_prob(tail, "tail probability")
        self.exact = all(isinstance(v, (Fraction, int)) for v in values) and isinstance(
            tail, (Fraction, int)
        )

    def q0(self, n):
        return self.values[n] if n < len(self.values) else self.tail

    def limit_q0(self):
        return self.tail

    def eventually_constant(self):
        return (len(self.values), self.tail)

    def series_c_converges(self):
        return self.tail < 1 or self.c(len(self.values)) == 0

    def to_json(self):
        from .numeric import format_scalar

        enc = format_scalar if self.exact else float
        return {
            "kind": "table-then-constant",
            "values": [enc(v) for v in self.values],
            "tail": enc(self.tail),
        }


class TableThenGeometricFamily(QFamily):
    """q_n = values[n] for n <= m, then values[m] * ratio^(n-m).

    The q's decay to 0, so sum c_n always converges; no rational closed
    form exists for the sums, hence float mode only.
    """

    kind = "table-then-geometric"

    def __init__(self, values, ratio):
        if not values:
            raise BadParams("table-then-geometric needs at least one table value")
        if not (0 < ratio < 1):
            raise BadParams(f"ratio must lie in (0, 1), got {ratio}")
        self.values = [float(_check_prob(v, "table value")) for v in values]
        self.ratio = float(ratio)
        self.exact = False

    def q0(self, n):
        m = len(self.values) - 1
        if n <= m:
            return self.values[n]
        return self.values[m] * self.ratio ** (n - m)

    def limit_q0(self):
        return 0.0

    def series_c_converges(self):
        return True

    def to_json(self):
        return {"kind": "table-then-geometric", "values": self.values, "ratio": self.ratio}


class PeriodicFamily(QFamily):
    """q_n = values[n mod len(values)]; realizes alternating combs."""

    kind = "periodic"

    def __init__(self, values):
        if not values:
            raise BadParams("periodic family needs at least one value")
        self.values = [_check_prob(v, "periodic value") for v in values]
        self.exact = all(isinstance(v, (Fraction, int)) for v in values)

    def q0(self, n):
        return self.values[n % len(self.values)]

    def limit_q0(self):
        if all(v == self.values[0] for v in self.values):
            return self.values[0]
        raise LimitUndefined(f"periodic family {self.values} oscillates")

    def eventually_constant(self):
        if all(v == self.values[0] for v in self.values):
            return (0, self.values[0])
        return None

    def period_product(self) -> Number:
        out = 1 if self.exact else 1.0
        for v in self.values:
            out = out * v
        return out

    def series_c_converges(self):
        return self.period_product() < 1

    def to_json(self):
        from .numeric import format_scalar

        enc = format_scalar if self.exact else float
        return {"kind": "periodic", "values": [enc(v) for v in self.values]}


class ZetaFamily(QFamily):
    """c_n = (1/zeta(alpha)) sum_{k>=n} k^-alpha for n >= 1, alpha > 2."""

    kind = "zeta"

    def __init__(self, alpha: float):
        if not alpha > 2:
            raise BadParams(f"zeta family needs alpha > 2, got {alpha}")
        self.alpha = float(alpha)
        self.exact = False
        self._zeta_alpha = float(mpmath.zeta(self.alpha))
        self._hur = {}
        # c_1 = 1 and c_{n+1} = c_n - n^-alpha / zeta(alpha) for n >= 1
        self._c = [1.0, 1.0]

    def hurwitz(self, s: float, n: int) -> float:
        """sum_{k>=n} k^-s."""
        key = (s, n)
        if key not in self._hur:
            self._hur[key] = float(mpmath.zeta(s, n))
        return self._hur[key]

    def c(self, n):
        cs = self._c
        while len(cs) <= n:
            m = len(cs) - 1
            cs.append(cs[-1] - m ** (-self.alpha) / self._zeta_alpha)
        return cs[n]

    def q0(self, n):
        return self.c(n + 1) / self.c(n)

    def limit_q0(self):
        # c_n ~ const * n^(1-alpha), so the ratio tends to 1.
        return 1.0

    def series_c_converges(self):
        return True

    def to_json(self):
        return {"kind": "zeta", "alpha": self.alpha}


class IndifferentFamily(QFamily):
    """q_n(0) = (1 - 1/(n+2))^alpha with 1 < alpha < 2, so c_n = (1+n)^-alpha.

    The compiled interval map has slope -> 1 at 0: an indifferent fixed
    point (intermittent source).
    """

    kind = "indifferent"

    def __init__(self, alpha: float):
        if not 1 < alpha < 2:
            raise BadParams(f"indifferent family needs 1 < alpha < 2, got {alpha}")
        self.alpha = float(alpha)
        self.exact = False

    def q0(self, n):
        return (1.0 - 1.0 / (n + 2)) ** self.alpha

    def c(self, n):
        return (1.0 + n) ** (-self.alpha)

    def limit_q0(self):
        return 1.0

    def series_c_converges(self):
        return True

    def to_json(self):
        return {"kind": "indifferent", "alpha": self.alpha}


_KINDS = {
    "constant": ConstantFamily,
    "table-then-constant": TableThenConstantFamily,
    "table-then-geometric": TableThenGeometricFamily,
    "periodic": PeriodicFamily,
    "zeta": ZetaFamily,
    "indifferent": IndifferentFamily,
}


def family_from_json(spec: dict, exact: bool) -> QFamily:
    kind = spec.get("kind")
    if kind not in _KINDS:
        raise BadParams(f"unknown family kind {kind!r}; known: {sorted(_KINDS)}")
    if kind == "constant":
        return ConstantFamily(parse_scalar(spec["p"], exact))
    if kind == "table-then-constant":
        return TableThenConstantFamily(
            [parse_scalar(v, exact) for v in spec["values"]],
            parse_scalar(spec["tail"], exact),
        )
    if kind == "table-then-geometric":
        if exact:
            raise BadParams("table-then-geometric has no exact series; use float mode")
        return TableThenGeometricFamily(
            [parse_scalar(v, False) for v in spec["values"]], float(spec["ratio"])
        )
    if kind == "periodic":
        return PeriodicFamily([parse_scalar(v, exact) for v in spec["values"]])
    if exact:
        raise BadParams(f"{kind} family is analytic (irrational q's); use float mode")
    if kind == "zeta":
        return ZetaFamily(float(spec["alpha"]))
    return IndifferentFamily(float(spec["alpha"]))
