"""Truncated formal power series and a contraction fixed-point solver.

A :class:`TruncatedSeries` stores coefficients 0..N of a formal power
series in one of two scalar modes: exact rationals (arithmetic never
rounds) or mpmath big floats at the caller's working precision.  Binary
operations truncate to the shorter operand, so every stored coefficient
of a result is reliable.

Values are immutable; operations are pure functions.
"""

from __future__ import annotations

import math
from typing import Callable, Optional, Sequence

from mpmath import mp

from .errors import (
    ConvergenceDomainError,
    DivergenceError,
    NonUnitDivisorError,
    SeriesDomainError,
)
from .scalars import is_rational, rational, to_mpf

RATIONAL = "rational"
FLOAT = "float"


class TruncatedSeries:
    """A power series known exactly up to and including z**order."""

    __slots__ = ("coeffs", "mode")

    def __init__(self, coeffs: Sequence, mode: str = RATIONAL):
        if mode not in (RATIONAL, FLOAT):
            raise SeriesDomainError(f"unknown scalar mode {mode!r}")
        coeffs = tuple(coeffs)
        if not coeffs:
            raise SeriesDomainError("a series needs at least its constant coefficient")
        self.coeffs = coeffs
        self.mode = mode

    # ------------------------------------------------------------------
    # construction
    # ------------------------------------------------------------------
    @classmethod
    def from_values(cls, values: Sequence, order: Optional[int] = None,
                    mode: str = RATIONAL) -> "TruncatedSeries":
        """Coerce `values` (ints, rationals, floats) into a series.

        Missing high-order coefficients are taken to be zero when `order`
        exceeds len(values)-1.
        """
        conv = rational if mode == RATIONAL else to_mpf
        cs = [conv(v) for v in values]
        if order is not None:
            if order + 1 < len(cs):
                cs = cs[: order + 1]
            else:
                cs.extend(_zeros(order + 1 - len(cs), mode))
        return cls(cs, mode)

    @classmethod
    def zero(cls, order: int, mode: str = RATIONAL) -> "TruncatedSeries":
        return cls(_zeros(order + 1, mode), mode)

    @classmethod
    def one(cls, order: int, mode: str = RATIONAL) -> "TruncatedSeries":
        return cls.from_values([1], order, mode)

    @classmethod
    def variable(cls, order: int, mode: str = RATIONAL) -> "TruncatedSeries":
        """The series z (truncated, so just [0] at order 0)."""
        return cls.from_values([0, 1], order, mode)

    # ------------------------------------------------------------------
    # basics
    # ------------------------------------------------------------------
    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def coefficient(self, n: int):
        return self.coeffs[n]

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        head = ", ".join(str(c) for c in self.coeffs[:8])
        tail = ", ..." if self.order > 7 else ""
        return f"TruncatedSeries([{head}{tail}], order={self.order}, mode={self.mode})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.mode == other.mode and self.coeffs == other.coeffs

    __hash__ = None  # type: ignore[assignment]

    def first_difference(self, other: "TruncatedSeries") -> Optional[int]:
        """Index of the first differing coefficient within the common order."""
        self._check_mode(other)
        n = min(self.order, other.order)
        for i in range(n + 1):
            if self.coeffs[i] != other.coeffs[i]:
                return i
        return None

    def _check_mode(self, other: "TruncatedSeries") -> None:
        if self.mode != other.mode:
            raise SeriesDomainError("operands use different scalar modes")

    def _zero_scalar(self):
        return rational(0) if self.mode == RATIONAL else mp.zero

    def _coerce(self, c):
        return rational(c) if self.mode == RATIONAL else to_mpf(c)

    # ------------------------------------------------------------------
    # ring operations (truncate to the shorter operand)
    # ------------------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        self._check_mode(other)
        n = min(self.order, other.order)
        return TruncatedSeries(
            [self.coeffs[i] + other.coeffs[i] for i in range(n + 1)], self.mode)

    def __sub__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        self._check_mode(other)
        n = min(self.order, other.order)
        return TruncatedSeries(
            [self.coeffs[i] - other.coeffs[i] for i in range(n + 1)], self.mode)

    def __neg__(self):
        return TruncatedSeries([-c for c in self.coeffs], self.mode)

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            self._check_mode(other)
            n = min(self.order, other.order)
            a, b = self.coeffs, other.coeffs
            out = _zeros(n + 1, self.mode)
            for i in range(n + 1):
                ai = a[i]
                if ai:
                    for j in range(n + 1 - i):
                        bj = b[j]
                        if bj:
                            out[i + j] += ai * bj
            return TruncatedSeries(out, self.mode)
        return self.scaled(other)

    def __rmul__(self, other):
        return self.scaled(other)

    def scaled(self, c) -> "TruncatedSeries":
        c = self._coerce(c)
        return TruncatedSeries([c * x for x in self.coeffs], self.mode)

    def __truediv__(self, other):
        if isinstance(other, TruncatedSeries):
            return self.divide(other)
        c = self._coerce(other)
        if not c:
            raise ZeroDivisionError("scalar division by zero")
        return TruncatedSeries([x / c for x in self.coeffs], self.mode)

    def divide(self, other: "TruncatedSeries") -> "TruncatedSeries":
        """Long division; `other` must be a unit (nonzero constant term)."""
        self._check_mode(other)
        b0 = other.coeffs[0]
        if not b0:
            raise NonUnitDivisorError("divisor has zero constant term")
        n = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        out = []
        for k in range(n + 1):
            acc = a[k]
            for j in range(1, k + 1):
                bj = b[j]
                if bj:
                    acc = acc - bj * out[k - j]
            out.append(acc / b0)
        return TruncatedSeries(out, self.mode)

    def power(self, j: int) -> "TruncatedSeries":
        if j < 0:
            raise SeriesDomainError("negative series powers are not supported")
        result = TruncatedSeries.one(self.order, self.mode)
        for _ in range(j):
            result = result * self
        return result

    # ------------------------------------------------------------------
    # structural operations
    # ------------------------------------------------------------------
    def substitute_power(self, i: int) -> "TruncatedSeries":
        """Return f(z**i) at the same truncation order; requires i >= 2."""
        if i < 2:
            raise SeriesDomainError("substitution exponent must be at least 2")
        out = _zeros(self.order + 1, self.mode)
        for m in range(self.order // i + 1):
            out[m * i] = self.coeffs[m]
        return TruncatedSeries(out, self.mode)

    def exp(self) -> "TruncatedSeries":
        """exp(f) via the differential recurrence g' = f'.g.

        Exact in rational mode; requires a vanishing constant term.
        """
        if self.coeffs[0]:
            raise SeriesDomainError("series exp needs zero constant term")
        n = self.order
        f = self.coeffs
        g = [self._coerce(1)]
        for m in range(1, n + 1):
            acc = self._zero_scalar()
            for j in range(1, m + 1):
                fj = f[j]
                if fj:
                    acc += (j * fj) * g[m - j]
            g.append(acc / m)
        return TruncatedSeries(g, self.mode)

    def derivative(self) -> "TruncatedSeries":
        """Termwise derivative; the truncation order drops by one."""
        if self.order == 0:
            return TruncatedSeries([self._zero_scalar()], self.mode)
        return TruncatedSeries(
            [j * self.coeffs[j] for j in range(1, self.order + 1)], self.mode)

    def shift_up(self, m: int = 1) -> "TruncatedSeries":
        """Multiply by z**m, keeping the truncation order."""
        if m < 0:
            raise SeriesDomainError("shift_up needs m >= 0")
        out = _zeros(self.order + 1, self.mode)
        for i in range(self.order + 1 - m):
            out[i + m] = self.coeffs[i]
        return TruncatedSeries(out, self.mode)

    def shift_down(self, m: int = 1) -> "TruncatedSeries":
        """Divide by z**m; the first m coefficients must vanish."""
        if m < 0:
            raise SeriesDomainError("shift_down needs m >= 0")
        if m == 0:
            return self
        if m > self.order:
            raise SeriesDomainError("shift_down beyond the truncation order")
        if any(self.coeffs[:m]):
            raise SeriesDomainError("shift_down requires vanishing low-order coefficients")
        return TruncatedSeries(self.coeffs[m:], self.mode)

    def truncated(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise SeriesDomainError("cannot truncate to a larger order; use extended()")
        return TruncatedSeries(self.coeffs[: order + 1], self.mode)

    def extended(self, order: int) -> "TruncatedSeries":
        """Zero-pad to a larger order.

        The padding is an assumption, not knowledge; only callers that can
        prove the tail (like the fixed-point solver) should rely on it.
        """
        if order < self.order:
            raise SeriesDomainError("cannot extend to a smaller order")
        return TruncatedSeries(
            self.coeffs + tuple(_zeros(order - self.order, self.mode)), self.mode)

    def to_float(self) -> "TruncatedSeries":
        """Convert to float mode at the current working precision."""
        if self.mode == FLOAT:
            return self
        return TruncatedSeries([to_mpf(c) for c in self.coeffs], FLOAT)

    # ------------------------------------------------------------------
    # evaluation
    # ------------------------------------------------------------------
    def evaluate(self, x, rho=None, coeff_bound=None):
        """Horner evaluation of the truncated polynomial at x.

        Returns (value, tail_bound).  With `rho` supplied the second entry
        bounds the dropped tail sum_{n>N} |c_n| |x|**n under the geometric
        coefficient bound |c_n| <= C rho**-n, where C defaults to the
        largest |c_n| rho**n among stored coefficients; this requires
        |x| < rho.  Without `rho` the result is the plain partial sum and
        the flag is None.
        """
        xv = to_mpf(x)
        acc = mp.zero
        if self.mode == FLOAT:
            for c in reversed(self.coeffs):
                acc = acc * xv + c
        else:
            for c in reversed(self.coeffs):
                acc = acc * xv + to_mpf(c)
        if rho is None:
            return acc, None
        rv = to_mpf(rho)
        if rv <= 0:
            raise ConvergenceDomainError("tail bound needs a positive radius")
        ratio = abs(xv) / rv
        if ratio >= 1:
            raise ConvergenceDomainError(
                "tail guarantee requested outside the open convergence disc")
        if coeff_bound is None:
            c_bound = mp.zero
            p = mp.one
            for c in self.coeffs:
                cv = abs(c) if self.mode == FLOAT else abs(to_mpf(c))
                c_bound = max(c_bound, cv * p)
                p *= rv
        else:
            c_bound = to_mpf(coeff_bound)
        tail = c_bound * ratio ** (self.order + 1) / (1 - ratio)
        return acc, tail

    def serializable_coefficients(self) -> list:
        """Coefficients as exact 'p/q' strings (rational) or repr floats."""
        from .scalars import rational_str

        if self.mode == RATIONAL:
            return [rational_str(c) for c in self.coeffs]
        return [mp.nstr(c, mp.dps + 3) for c in self.coeffs]


def _zeros(n: int, mode: str) -> list:
    z = rational(0) if mode == RATIONAL else mp.zero
    return [z] * n


# ----------------------------------------------------------------------
# fixed points of formal contractions
# ----------------------------------------------------------------------
def solve_fixed_point(
    operator: Callable[[TruncatedSeries], TruncatedSeries],
    order: int,
    mode: str = RATIONAL,
    progressive: bool = False,
) -> TruncatedSeries:
    """Unique fixed point of a formal contraction, truncated at `order`.

    `operator` must strictly increase the index of the first coefficient
    on which two inputs differ, and must map an order-w input to an
    order-w output (operators built from ring operations, with constants
    derived from the input's order, do this automatically).

    Iteration starts from the zero series and stops once one application
    changes no coefficient; a contraction needs at most order+2
    applications.  `progressive=True` grows the working order one step per
    application, which cuts the cost by ~3x for operators that extend the
    agreement prefix by exactly one index per application (the tree
    functional equations).  Operators that at least double the prefix (the
    protected-vertex equations) converge in O(log order) applications
    without it.
    """
    if order < 0:
        raise SeriesDomainError("order must be nonnegative")
    applications = 0
    budget = order + 2

    if progressive:
        y = TruncatedSeries.zero(0, mode)
        for w in range(0, order + 1):
            y = operator(y.extended(w))
            applications += 1
            if y.order != w:
                raise SeriesDomainError("operator changed the truncation order")
        # stabilization pass at full order
        while applications <= budget:
            y_next = operator(y)
            applications += 1
            if y_next.first_difference(y) is None:
                return y_next
            y = y_next
        raise DivergenceError(
            f"no fixed point within {budget} applications at order {order}")

    y = TruncatedSeries.zero(order, mode)
    last_agreement = -1
    while applications <= budget:
        y_next = operator(y)
        applications += 1
        if y_next.order != order:
            raise SeriesDomainError("operator changed the truncation order")
        d = y_next.first_difference(y)
        if d is None:
            return y_next
        if d <= last_agreement:
            raise DivergenceError(
                "operator is not contracting: agreement prefix stalled at "
                f"index {d} after {applications} applications")
        last_agreement = d
        y = y_next
    raise DivergenceError(
        f"no fixed point within {budget} applications at order {order}")
