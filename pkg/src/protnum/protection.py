"""Limiting protection-number statistics.

For every family this module computes the values T_k(rho), the limiting
probabilities P(X >= k) (root protection) and P(Y >= k) (protection of a
random vertex, random internal vertex for the binary kinds), and the
limiting mean and variance of both quantities, to a user-chosen number of
decimal digits with explicit tail bounds.

The k-sums are truncated through a geometric majorant: once the bound on
everything dropped falls below 10**-(precision+2) the report is closed.
Scalar recurrences run in mpf arithmetic with guard digits; every series
ingredient (T_k, S_k) is computed in exact rational arithmetic first.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Optional, Tuple

from mpmath import mp

from .enumeration import tk_coefficients, tk_step
from .errors import (
    InternalConsistencyError,
    PrecisionError,
    SeriesDomainError,
)
from .families import (
    COMPLETE_BINARY,
    DEFAULT_PRECISION,
    DEFAULT_TRUNCATION,
    NON_PLANE_BINARY,
    POLYA,
    SIMPLY_GENERATED,
    FamilySpec,
    PolyaAuxiliary,
    SingularityData,
    find_singularity,
    make_family,
    polya_base_values,
    tree_series,
)
from .powerseries import RATIONAL, TruncatedSeries, solve_fixed_point
from .scalars import (
    GUARD_DIGITS,
    decimal_to_mpf,
    is_rational,
    mpf_to_decimal,
    quantize,
    rational,
    to_mpf,
)

ROOT = "root"
VERTEX = "vertex"


@dataclass(frozen=True)
class ProtectionReport:
    """Limiting distribution summary for one family and one mode.

    probabilities[k-1] holds the limit of P(protection >= k); mean and
    variance carry an absolute error at most tail_bound (and its (2k-1)-
    weighted analogue), both far below 10**-precision.
    """

    family: str
    mode: str
    probabilities: Tuple
    mean: object
    variance: object
    k_max: int
    tail_bound: object
    precision: int

    def probability(self, k: int):
        if k < 1:
            raise ValueError("k must be at least 1")
        if k <= self.k_max:
            return self.probabilities[k - 1]
        return mp.zero

    def to_dict(self) -> dict:
        p = self.precision
        return {
            "family": self.family,
            "mode": self.mode,
            "precision": p,
            "k_max": self.k_max,
            "mean": mpf_to_decimal(self.mean, p),
            "variance": mpf_to_decimal(self.variance, p),
            "tail_bound": mpf_to_decimal(self.tail_bound, p),
            "probabilities": [mpf_to_decimal(x, p) for x in self.probabilities],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ProtectionReport":
        p = int(d["precision"])
        return cls(
            family=d["family"],
            mode=d["mode"],
            probabilities=tuple(decimal_to_mpf(s, p) for s in d["probabilities"]),
            mean=decimal_to_mpf(d["mean"], p),
            variance=decimal_to_mpf(d["variance"], p),
            k_max=int(d["k_max"]),
            tail_bound=decimal_to_mpf(d["tail_bound"], p),
            precision=p,
        )


# ----------------------------------------------------------------------
# T_k(rho) scalar recurrences
# ----------------------------------------------------------------------
def _eval_length(rho, exponent: int, digits: int, order: int) -> int:
    """Series length so the geometric tail bound of an evaluation at
    rho**exponent sits below 10**-digits.

    Coefficients obey |c_n| <= C rho**-n, so the bound decays like
    rho**((exponent-1) n): the -1 matters, the bound is much weaker than
    the terms themselves.
    """
    rate = max(exponent - 1, 1) * (-mp.log(rho))
    length = int(mp.ceil((digits + 4) * mp.log(10) / rate)) + 6
    return max(1, min(length, order))


class _UnorderedScalarEngine:
    """T_k(rho) and Q_k(rho) for the polya family, extended on demand.

    Follows the direct recurrence: T_k(rho) is never read off a truncated
    series at rho itself (convergence there is far too slow); the series
    only ever gets evaluated strictly inside the disc, at rho**i, i >= 2.
    """

    def __init__(self, family: FamilySpec, precision: int, trunc: int):
        self.family = family
        self.dps = precision + GUARD_DIGITS
        with mp.workdps(self.dps):
            rho, b, e_rho, e_prime = polya_base_values(precision, trunc)
            self.rho, self.b = rho, b
            self.e_at_rho, self.e_prime_at_rho = e_rho, e_prime
            base_order = _eval_length(rho, 2, self.dps - 3, trunc)
            if base_order < 8:
                raise PrecisionError("truncation order too small for the Polya sums")
            base = tree_series(family, trunc).truncated(base_order).to_float()
            self.series = [base]      # float T_k series, index k
            self.t_at_rho = [mp.one]  # T_k(rho), index k (tau = 1)
            self.q_at_rho = []        # Q_k(rho), index k
            self.slop = mp.zero       # accumulated evaluation-tail slack

    def _point_sum(self, s: TruncatedSeries):
        """sum_{i>=2} s(rho**i)/i with a truncation-tail bound.

        Coefficients of every T_k satisfy t_{k,n} rho**n <= tau = 1, which
        is the rigorous bound fed to the evaluator.
        """
        with mp.workdps(self.dps):
            total = mp.zero
            tiny = mp.mpf(10) ** (-(self.dps + 8))
            x = self.rho * self.rho
            i = 2
            tails = mp.zero
            while True:
                L = _eval_length(self.rho, i, self.dps - 3, s.order)
                val, tail = s.truncated(L).evaluate(x, rho=self.rho, coeff_bound=1)
                total += val / i
                tails += tail / i
                if x < tiny:
                    tails += x
                    break
                i += 1
                x *= self.rho
            return total, tails

    def extend(self, k: int) -> None:
        with mp.workdps(self.dps):
            while len(self.t_at_rho) <= k:
                prev_series = self.series[-1]
                prev_value = self.t_at_rho[-1]
                inner, tail = self._point_sum(prev_series)
                q = mp.exp(inner)
                t_next = self.rho * mp.exp(prev_value) * q - self.rho
                self.q_at_rho.append(q)
                self.t_at_rho.append(t_next)
                self.series.append(tk_step(self.family, prev_series))
                self.slop += 4 * tail

    def t_value(self, k: int):
        self.extend(k)
        return self.t_at_rho[k]

    def q_value(self, k: int):
        self.extend(k + 1)
        return self.q_at_rho[k]


class _NpbScalarEngine:
    """T_k(rho) for non-plane binary trees, with T_{k-1}(rho**2) read off
    the exact T_{k-1} series strictly inside the disc."""

    def __init__(self, family: FamilySpec, precision: int, trunc: int):
        self.family = family
        self.dps = precision + GUARD_DIGITS
        sing = find_singularity(family, precision, trunc)
        with mp.workdps(self.dps):
            self.rho = sing.rho
            self.a = sing.puiseux1
            order = _eval_length(self.rho, 2, self.dps - 3, trunc)
            if order < 8:
                raise PrecisionError("truncation order too small for the square sums")
            base = tree_series(family, trunc).truncated(order).to_float()
            self.series = [base]
            self.t_at_rho = [1 / self.rho]
            self.slop = mp.zero

    def extend(self, k: int) -> None:
        with mp.workdps(self.dps):
            while len(self.t_at_rho) <= k:
                prev_series = self.series[-1]
                prev_value = self.t_at_rho[-1]
                at_sq, tail = prev_series.evaluate(
                    self.rho ** 2, rho=self.rho, coeff_bound=1 / self.rho)
                t_next = self.rho * (prev_value ** 2 + at_sq) / 2
                self.t_at_rho.append(t_next)
                self.series.append(tk_step(self.family, prev_series))
                self.slop += tail

    def t_value(self, k: int):
        self.extend(k)
        return self.t_at_rho[k]


@lru_cache(maxsize=None)
def _polya_engine(family: FamilySpec, precision: int, trunc: int) -> _UnorderedScalarEngine:
    return _UnorderedScalarEngine(family, precision, trunc)


@lru_cache(maxsize=None)
def _npb_engine(family: FamilySpec, precision: int, trunc: int) -> _NpbScalarEngine:
    return _NpbScalarEngine(family, precision, trunc)


def protected_root_values(
    family: FamilySpec,
    k_max: int,
    sing: Optional[SingularityData] = None,
    precision: int = DEFAULT_PRECISION,
    trunc: int = DEFAULT_TRUNCATION,
) -> list:
    """[T_0(rho), ..., T_{k_max}(rho)] as mpf values."""
    family = make_family(family)
    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    if sing is None:
        sing = find_singularity(family, precision, trunc)
    dps = precision + GUARD_DIGITS
    with mp.workdps(dps):
        kind = family.kind
        if kind == SIMPLY_GENERATED:
            phi = family.phi
            rho, tau = sing.rho, sing.tau
            phi0 = to_mpf(phi.phi0)
            values = [tau]
            for _ in range(k_max):
                values.append(rho * (phi.value(values[-1]) - phi0))
            return values
        if kind == COMPLETE_BINARY:
            rho = sing.rho
            values = [sing.tau]
            for _ in range(k_max):
                values.append(rho * values[-1] ** 2)
            return values
        if kind == POLYA:
            eng = _polya_engine(family, precision, trunc)
            eng.extend(k_max)
            return list(eng.t_at_rho[: k_max + 1])
        if kind == NON_PLANE_BINARY:
            eng = _npb_engine(family, precision, trunc)
            eng.extend(k_max)
            return list(eng.t_at_rho[: k_max + 1])
    raise SeriesDomainError(f"unknown family kind {family.kind!r}")  # pragma: no cover


def protected_root_values_exact(family: FamilySpec, k_max: int) -> list:
    """T_k(rho) as exact rationals, for families whose singularity is rational."""
    family = make_family(family)
    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    if family.exact_rho is None or family.exact_tau is None:
        raise SeriesDomainError(
            f"{family.name} has no rational closed singularity; use the float route")
    rho, tau = family.exact_rho, family.exact_tau
    values = [tau]
    if family.kind == COMPLETE_BINARY:
        for _ in range(k_max):
            values.append(rho * values[-1] ** 2)
        return values
    phi = family.phi
    if phi.kind == "exponential":  # pragma: no cover - no such built-in
        raise SeriesDomainError("exponential weights have no rational recurrence")
    phi0 = phi.phi0
    for _ in range(k_max):
        values.append(rho * (phi.value(values[-1]) - phi0))
    return values


# ----------------------------------------------------------------------
# limiting probabilities
# ----------------------------------------------------------------------
def _root_probability_terms(family: FamilySpec, precision: int, trunc: int):
    """Yield (k, p_k, ratio_bound) with p_{k+j} <= p_k * ratio_bound**j."""
    sing = find_singularity(family, precision, trunc)
    kind = family.kind
    if kind == SIMPLY_GENERATED:
        phi = family.phi
        rho = sing.rho
        t_prev = rho * (phi.value(sing.tau) - to_mpf(phi.phi0))  # T_1(rho)
        p = mp.one
        k = 1
        while True:
            yield k, p, rho * phi.prime(t_prev)
            p = p * rho * phi.prime(t_prev)
            t_prev = rho * (phi.value(t_prev) - to_mpf(phi.phi0))
            k += 1
    elif kind == COMPLETE_BINARY:
        rho = sing.rho
        t_prev = rho * sing.tau ** 2  # T_1(rho)
        p = mp.one
        k = 1
        while True:
            yield k, p, 2 * rho * t_prev
            p = p * 2 * rho * t_prev
            t_prev = rho * t_prev ** 2
            k += 1
    elif kind == POLYA:
        eng = _polya_engine(family, precision, trunc)
        p = mp.one
        k = 1
        while True:
            p = p * (eng.t_value(k) + eng.rho)
            yield k, p, eng.t_value(k) + eng.rho
            k += 1
    elif kind == NON_PLANE_BINARY:
        eng = _npb_engine(family, precision, trunc)
        p = mp.one
        k = 1
        while True:
            yield k, p, eng.rho * eng.t_value(k)
            p = p * eng.rho * eng.t_value(k)
            k += 1
    else:  # pragma: no cover
        raise SeriesDomainError(f"unknown family kind {kind!r}")


def root_limit_probability(family: FamilySpec, k: int,
                           precision: int = DEFAULT_PRECISION,
                           trunc: int = DEFAULT_TRUNCATION):
    """Limit of P(X_n >= k): asymptotic probability of root protection >= k."""
    family = make_family(family)
    if k < 1:
        raise ValueError("k must be at least 1")
    dps = precision + GUARD_DIGITS
    with mp.workdps(dps):
        for kk, p, _ in _root_probability_terms(family, precision, trunc):
            if kk == k:
                return quantize(p, precision)


def root_limit_probability_exact(family: FamilySpec, k: int):
    """Exact rational limit of P(X_n >= k) for rational-singularity families."""
    family = make_family(family)
    if k < 1:
        raise ValueError("k must be at least 1")
    values = protected_root_values_exact(family, max(k, 1))
    rho = family.exact_rho
    p = rational(1)
    if family.kind == COMPLETE_BINARY:
        for i in range(1, k):
            p *= 2 * rho * values[i]
        return p
    phi = family.phi
    for i in range(1, k):
        p *= rho * phi.prime(values[i])
    return p


# ----------------------------------------------------------------------
# S_k series (total number of k-protected vertices)
# ----------------------------------------------------------------------
def sk_min_index(family: FamilySpec, k: int) -> int:
    """Size of the smallest tree containing a k-protected vertex."""
    family = make_family(family)
    if family.kind in (COMPLETE_BINARY, NON_PLANE_BINARY):
        return 2 ** k - 1
    return k + 1


@lru_cache(maxsize=None)
def _sk_unit_inverse(family: FamilySpec, order: int) -> TruncatedSeries:
    """1/(1-T) for polya, 1/(1-zT) for non-plane binary (exact)."""
    t = tree_series(family, order)
    one = TruncatedSeries.one(order)
    if family.kind == POLYA:
        return one.divide(one - t)
    return one.divide(one - t.shift_up(1))


def _sk_operator(family: FamilySpec, k: int, order: int):
    """The contraction whose fixed point is S_k (unordered kinds).

    Coinciding inputs up to index m coincide up to 2m+2 after one
    application, so the solver needs only O(log order) steps.
    """
    tk = tk_coefficients(family, k, order)
    inv = _sk_unit_inverse(family, order)
    if family.kind == POLYA:
        t = tree_series(family, order)

        def op(f: TruncatedSeries) -> TruncatedSeries:
            acc = TruncatedSeries.zero(f.order, f.mode)
            i = 2
            while i <= f.order:
                acc = acc + f.substitute_power(i)
                i += 1
            return (t * acc + tk) * inv

        return op

    def op(f: TruncatedSeries) -> TruncatedSeries:
        return (f.substitute_power(2).shift_up(1) + tk) * inv

    return op


@lru_cache(maxsize=None)
def sk_series(family: FamilySpec, k: int, order: int) -> TruncatedSeries:
    """Exact coefficients of S_k up to `order`.

    [z^n] S_k is the total number of k-protected vertices over all trees
    of size n (counted per isomorphism class for the unordered kinds).
    """
    family = make_family(family)
    if k < 1:
        raise ValueError("k must be at least 1")
    if order < sk_min_index(family, k):
        raise SeriesDomainError(
            f"order {order} ends before the first nonzero coefficient of S_{k} "
            f"({sk_min_index(family, k)}) for {family.name}")
    kind = family.kind
    if kind == SIMPLY_GENERATED:
        # point at a leaf, remove it, attach a protected tree:
        # S_k = T_k * T' * z * phi_0 / T, with T/z the unit divisor
        t = tree_series(family, order + 1)
        tk = tk_coefficients(family, k, order + 1)
        pointed = t.derivative() * family.phi.phi0
        return (tk * pointed).divide(t.shift_down(1))
    if kind == COMPLETE_BINARY:
        # removing a leaf keeps the size, so no z**-1; the pointed-leaf
        # series is 1/(1 - 2 z B)
        b = tree_series(family, order)
        tk = tk_coefficients(family, k, order)
        one = TruncatedSeries.one(order)
        pointed = one.divide(one - b.shift_up(1).scaled(2))
        return tk * pointed
    if kind in (POLYA, NON_PLANE_BINARY):
        return solve_fixed_point(_sk_operator(family, k, order), order, RATIONAL)
    raise SeriesDomainError(f"unknown family kind {kind!r}")  # pragma: no cover


def sk_functional_residual(family: FamilySpec, k: int, order: int) -> TruncatedSeries:
    """Residual of the defining S_k equation (exact; zero iff satisfied).

    polya:  T(z) * sum_{i>=1} S_k(z**i) - S_k(z) + T_k(z)
    npb:    z T(z) S_k(z) + z S_k(z**2) - S_k(z) + T_k(z)
    """
    family = make_family(family)
    s = sk_series(family, k, order)
    t = tree_series(family, order)
    tk = tk_coefficients(family, k, order)
    if family.kind == POLYA:
        acc = s
        i = 2
        while i <= order:
            acc = acc + s.substitute_power(i)
            i += 1
        return t * acc - s + tk
    if family.kind == NON_PLANE_BINARY:
        return (t * s).shift_up(1) + s.substitute_power(2).shift_up(1) - s + tk
    raise SeriesDomainError("functional residual applies to the unordered kinds")


# ----------------------------------------------------------------------
# vertex-mode probability terms
# ----------------------------------------------------------------------
def _sk_tail_bound(tau, ratio, order: int):
    """Bound on sum_{n>order} s_n x**n using s_n <= n tau rho**-n, with
    ratio = x/rho < 1."""
    return tau * (order + 1) * ratio ** (order + 1) / (1 - ratio) ** 2


def _vertex_probability_terms(family: FamilySpec, precision: int, trunc: int):
    """Yield (k, q_k, ratio_bound or None)."""
    sing = find_singularity(family, precision, trunc)
    kind = family.kind
    if kind == SIMPLY_GENERATED:
        phi = family.phi
        rho, tau = sing.rho, sing.tau
        phi0 = to_mpf(phi.phi0)
        t_k = rho * (phi.value(tau) - phi0)  # T_1
        k = 1
        while True:
            t_next = rho * (phi.value(t_k) - phi0)
            yield k, phi0 * t_k / tau, t_next / t_k
            t_k = t_next
            k += 1
    elif kind == COMPLETE_BINARY:
        rho = sing.rho
        t_k = rho * sing.tau ** 2
        k = 1
        while True:
            yield k, t_k, rho * t_k
            t_k = rho * t_k ** 2
            k += 1
    elif kind == POLYA:
        eng = _polya_engine(family, precision, trunc)
        dps = precision + GUARD_DIGITS
        rho, b = eng.rho, eng.b
        sk_order = _eval_length(rho, 2, dps - 3, trunc) + 24
        if sk_order > trunc:
            raise PrecisionError(
                f"precision {precision} needs truncation order {sk_order}; "
                f"raise trunc above {trunc}")
        k = 1
        prev_q = None
        ratio_cap = None
        while True:
            total = mp.zero
            if sk_min_index(family, k) <= sk_order:
                s_float = sk_series(family, k, sk_order).to_float()
                tiny = mp.mpf(10) ** (-(dps + 8))
                x = rho * rho
                i = 2
                while True:
                    val, _ = s_float.truncated(
                        _eval_length(rho, i, dps - 3, sk_order)).evaluate(x)
                    total += val
                    if x < tiny:
                        break
                    i += 1
                    x *= rho
            eng.slop += 2 * _sk_tail_bound(mp.one, rho, sk_order)
            q = (2 / b ** 2) * (total + eng.t_value(k))
            if prev_q is not None:
                r = q / prev_q
                ratio_cap = r if ratio_cap is None else max(ratio_cap, r)
            yield k, q, ratio_cap
            prev_q = q
            k += 1
    elif kind == NON_PLANE_BINARY:
        eng = _npb_engine(family, precision, trunc)
        dps = precision + GUARD_DIGITS
        rho, a = eng.rho, eng.a
        sk_order = _eval_length(rho, 2, dps - 3, trunc) + 24
        if sk_order > trunc:
            raise PrecisionError(
                f"precision {precision} needs truncation order {sk_order}; "
                f"raise trunc above {trunc}")
        k = 1
        prev_q = None
        ratio_cap = None
        while True:
            val = mp.zero
            if sk_min_index(family, k) <= sk_order:
                val, _ = sk_series(family, k, sk_order).to_float().evaluate(rho ** 2)
            eng.slop += _sk_tail_bound(1 / rho, rho, sk_order)
            q = (2 / (a ** 2 * rho)) * (rho * val + eng.t_value(k))
            if prev_q is not None:
                r = q / prev_q
                ratio_cap = r if ratio_cap is None else max(ratio_cap, r)
            yield k, q, ratio_cap
            prev_q = q
            k += 1
    else:  # pragma: no cover
        raise SeriesDomainError(f"unknown family kind {kind!r}")


# ----------------------------------------------------------------------
# report assembly
# ----------------------------------------------------------------------
def _assemble_report(family: FamilySpec, mode: str, term_iter, precision: int,
                     slop_fn=None) -> ProtectionReport:
    dps = precision + GUARD_DIGITS
    with mp.workdps(dps):
        threshold = mp.mpf(10) ** (-(precision + 2))
        probs = []
        mean = mp.zero
        second = mp.zero
        tail = None
        cap = 400 + 30 * precision
        for k, p, ratio in term_iter:
            probs.append(p)
            mean += p
            second += (2 * k - 1) * p
            if ratio is not None and k >= 2:
                if ratio >= 1:
                    raise InternalConsistencyError(
                        f"{family.name}: probability ratio {mp.nstr(ratio, 8)} >= 1")
                r = ratio
                geo = p * r / (1 - r)
                geo_var = p * ((2 * k - 1) * r / (1 - r) + 2 * r / (1 - r) ** 2)
                if geo_var < threshold and geo < threshold:
                    tail = geo
                    break
            if k > cap:
                raise PrecisionError(
                    f"{family.name}: k-sum did not close within {cap} terms; "
                    "raise the truncation order or lower the precision")
        if slop_fn is not None:
            tail = tail + slop_fn()
        variance = second - mean ** 2
        if variance < 0:
            if variance > -(mp.mpf(10) ** (-(precision - 5))):
                variance = mp.zero
            else:
                raise InternalConsistencyError(
                    f"{family.name} {mode}: variance {mp.nstr(variance, 8)} "
                    "is negative beyond numerical tolerance")
        report = ProtectionReport(
            family=family.name,
            mode=mode,
            probabilities=tuple(quantize(p, precision) for p in probs),
            mean=quantize(mean, precision),
            variance=quantize(variance, precision),
            k_max=len(probs),
            tail_bound=quantize(tail, precision),
            precision=precision,
        )
    _validate_report(report)
    return report


def _validate_report(report: ProtectionReport) -> None:
    last = None
    for p in report.probabilities:
        if p < 0 or p > 1:
            raise InternalConsistencyError(
                f"{report.family} {report.mode}: probability outside [0, 1]")
        if last is not None and p > last:
            raise InternalConsistencyError(
                f"{report.family} {report.mode}: probabilities not weakly decreasing")
        last = p


def _slop_reader(family: FamilySpec, precision: int, trunc: int):
    """Late-bound accumulated evaluation slack; read once the k-loop ends."""
    if family.kind not in (POLYA, NON_PLANE_BINARY):
        return None
    maker = _polya_engine if family.kind == POLYA else _npb_engine

    def read():
        return maker(family, precision, trunc).slop

    return read


@lru_cache(maxsize=None)
def root_limits(family: FamilySpec, precision: int = DEFAULT_PRECISION,
                trunc: int = DEFAULT_TRUNCATION) -> ProtectionReport:
    """Limiting mean and variance of the root protection number."""
    family = make_family(family)
    return _assemble_report(
        family, ROOT, _root_probability_terms(family, precision, trunc),
        precision, slop_fn=_slop_reader(family, precision, trunc))


@lru_cache(maxsize=None)
def vertex_limits(family: FamilySpec, precision: int = DEFAULT_PRECISION,
                  trunc: int = DEFAULT_TRUNCATION) -> ProtectionReport:
    """Limiting mean and variance of a random vertex's protection number."""
    family = make_family(family)
    return _assemble_report(
        family, VERTEX, _vertex_probability_terms(family, precision, trunc),
        precision, slop_fn=_slop_reader(family, precision, trunc))


def limits(family: FamilySpec, mode: str, precision: int = DEFAULT_PRECISION,
           trunc: int = DEFAULT_TRUNCATION) -> ProtectionReport:
    if mode == ROOT:
        return root_limits(make_family(family), precision, trunc)
    if mode == VERTEX:
        return vertex_limits(make_family(family), precision, trunc)
    raise ValueError(f"unknown mode {mode!r}")


# ----------------------------------------------------------------------
# polya extras
# ----------------------------------------------------------------------
def polya_auxiliary(family: FamilySpec, k_max: int,
                    precision: int = DEFAULT_PRECISION,
                    trunc: int = DEFAULT_TRUNCATION) -> PolyaAuxiliary:
    """E(rho), E'(rho) and the Q_k(rho) values, k = 0..k_max-1."""
    family = make_family(family)
    if family.kind != POLYA:
        raise SeriesDomainError("the auxiliary sums are specific to the polya kind")
    eng = _polya_engine(family, precision, trunc)
    eng.extend(k_max)
    return PolyaAuxiliary(
        e_at_rho=eng.e_at_rho,
        e_prime_at_rho=eng.e_prime_at_rho,
        q_values=tuple(eng.q_at_rho[:k_max]),
    )


def polya_root_mean_forms(precision: int = DEFAULT_PRECISION,
                          trunc: int = DEFAULT_TRUNCATION):
    """The limiting root mean assembled two ways.

    Conditional-product form: sum_k prod_{i<=k} (T_i(rho) + rho).
    Ratio form:               sum_k rho**(k-1) prod_{i<k} Q_i(rho) e**T_i(rho).
    Both are returned (they agree analytically; the pair is a cross-check).
    """
    family = make_family("polya")
    eng = _polya_engine(family, precision, trunc)
    dps = precision + GUARD_DIGITS
    with mp.workdps(dps):
        threshold = mp.mpf(10) ** (-(precision + 4))

        def tail_after(k, term):
            # future factors are at most T_{k+1}(rho) + rho < 1
            r = eng.t_value(k + 1) + eng.rho
            return term * r / (1 - r)

        cond = mp.zero
        prod = mp.one
        k = 1
        while True:
            prod *= eng.t_value(k) + eng.rho
            cond += prod
            if tail_after(k, prod) < threshold:
                break
            k += 1
        ratio_sum = mp.zero
        prod = mp.one  # prod_{i=1}^{k-1} Q_i e^{T_i}; empty for k = 1
        k = 1
        rho_pow = mp.one
        while True:
            term = rho_pow * prod
            ratio_sum += term
            if tail_after(k, term) < threshold:
                break
            prod *= eng.q_value(k) * mp.exp(eng.t_value(k))
            rho_pow *= eng.rho
            k += 1
        return quantize(cond, precision), quantize(ratio_sum, precision)
