"""Tree families: weight series, functional equations, dominant singularities.

Seven built-in families are supported:

* simply generated (all vertices counted): plane, motzkin,
  incomplete-binary, cayley, plus user-supplied finite weight lists;
* complete-binary (only internal vertices counted), kept as its own kind;
* polya (rooted unordered unlabelled trees);
* non-plane-binary (unordered complete binary, internal vertices counted).

Coefficient series are exact rationals; singularity data are big floats
at the caller's requested precision (guard digits are carried internally
and retained in the returned values).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Tuple

from mpmath import mp

from .errors import FamilyValidationError, SingularitySearchError
from .powerseries import RATIONAL, TruncatedSeries, solve_fixed_point
from .scalars import (
    GUARD_DIGITS,
    is_rational,
    parse_rational,
    rational,
    rational_str,
    to_mpf,
)

SIMPLY_GENERATED = "simply-generated"
POLYA = "polya"
NON_PLANE_BINARY = "non-plane-binary"
COMPLETE_BINARY = "complete-binary"

DEFAULT_PRECISION = 64
DEFAULT_TRUNCATION = 256

BUILTIN_NAMES = (
    "plane",
    "motzkin",
    "incomplete-binary",
    "cayley",
    "complete-binary",
    "polya",
    "non-plane-binary",
)


@dataclass(frozen=True)
class WeightSeries:
    """The degree-weight series phi(t) of a simply generated family."""

    kind: str  # "polynomial" | "geometric" | "exponential"
    coeffs: Tuple = ()

    @property
    def phi0(self):
        if self.kind == "polynomial":
            return self.coeffs[0]
        return rational(1)

    @property
    def radius(self) -> Optional[int]:
        """Radius of convergence (None means entire)."""
        return 1 if self.kind == "geometric" else None

    # scalar evaluations; work on rationals (polynomial/geometric) and mpf
    def value(self, t):
        if self.kind == "polynomial":
            acc = 0 * t
            for c in reversed(self.coeffs):
                acc = acc * t + c
            return acc
        if self.kind == "geometric":
            return 1 / (1 - t)
        return mp.exp(t)

    def prime(self, t):
        if self.kind == "polynomial":
            acc = 0 * t
            for j in range(len(self.coeffs) - 1, 0, -1):
                acc = acc * t + j * self.coeffs[j]
            return acc
        if self.kind == "geometric":
            return 1 / (1 - t) ** 2
        return mp.exp(t)

    def second(self, t):
        if self.kind == "polynomial":
            acc = 0 * t
            for j in range(len(self.coeffs) - 1, 1, -1):
                acc = acc * t + j * (j - 1) * self.coeffs[j]
            return acc
        if self.kind == "geometric":
            return 2 / (1 - t) ** 3
        return mp.exp(t)

    def apply_to_series(self, y: TruncatedSeries) -> TruncatedSeries:
        """phi(y) as a truncated series (exact in rational mode)."""
        if self.kind == "polynomial":
            acc = TruncatedSeries.zero(y.order, y.mode)
            for c in reversed(self.coeffs):
                acc = acc * y
                acc = acc + TruncatedSeries.from_values([c], y.order, y.mode)
            return acc
        if self.kind == "geometric":
            one = TruncatedSeries.one(y.order, y.mode)
            return one.divide(one - y)
        return y.exp()


@dataclass(frozen=True)
class FamilySpec:
    """A validated tree family."""

    kind: str
    name: str
    phi: Optional[WeightSeries] = None
    exact_rho: Optional[object] = None  # rational, when the closed form is rational
    exact_tau: Optional[object] = None

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.name

    @property
    def counts_internal_vertices(self) -> bool:
        return self.kind in (COMPLETE_BINARY, NON_PLANE_BINARY)


@dataclass(frozen=True)
class SingularityData:
    """Dominant singularity rho, tree value tau = T(rho), and the leading
    square-root Puiseux coefficient magnitude."""

    rho: object
    tau: object
    puiseux1: object
    precision: int


@dataclass(frozen=True)
class PolyaAuxiliary:
    """Auxiliary values for the unordered-family recurrences.

    e_at_rho is sum_{i>=2} T(rho**i)/i, e_prime_at_rho its derivative in
    rho, and q_values maps k to Q_k(rho) = exp(sum_{i>=2} T_k(rho**i)/i).
    """

    e_at_rho: object
    e_prime_at_rho: object
    q_values: Tuple  # tuple of Q_k(rho), index k = 0..k_max-1


# shifted weight series of complete binary trees: B - 1 = z (1 + (B-1))**2
_CB_SHIFTED_PHI = WeightSeries("polynomial", (rational(1), rational(2), rational(1)))


def _validate_phi_coeffs(coeffs) -> Tuple:
    cs = tuple(rational(c) for c in coeffs)
    if not cs or any(c < 0 for c in cs):
        raise FamilyValidationError("phi coefficients must be nonnegative rationals")
    if cs[0] <= 0:
        raise FamilyValidationError("phi_0 must be positive (a family needs leaves)")
    support = [j for j, c in enumerate(cs) if c > 0]
    if not any(j >= 2 for j in support):
        raise FamilyValidationError(
            "some phi_j with j >= 2 must be positive (branching is required)")
    g = 0
    for j in support:
        g = math.gcd(g, j)
    if g != 1:
        raise FamilyValidationError(
            f"phi is periodic with period {g}; only aperiodic weight sequences are supported")
    while len(cs) > 1 and cs[-1] == 0:
        cs = cs[:-1]
    return cs


def _builtin(name: str) -> FamilySpec:
    if name == "plane":
        return FamilySpec(SIMPLY_GENERATED, "plane", WeightSeries("geometric"),
                          exact_rho=rational(1, 4), exact_tau=rational(1, 2))
    if name == "motzkin":
        phi = WeightSeries("polynomial", (rational(1), rational(1), rational(1)))
        return FamilySpec(SIMPLY_GENERATED, "motzkin", phi,
                          exact_rho=rational(1, 3), exact_tau=rational(1))
    if name == "incomplete-binary":
        phi = WeightSeries("polynomial", (rational(1), rational(2), rational(1)))
        return FamilySpec(SIMPLY_GENERATED, "incomplete-binary", phi,
                          exact_rho=rational(1, 4), exact_tau=rational(1))
    if name == "cayley":
        return FamilySpec(SIMPLY_GENERATED, "cayley", WeightSeries("exponential"),
                          exact_tau=rational(1))
    if name == "complete-binary":
        return FamilySpec(COMPLETE_BINARY, "complete-binary",
                          exact_rho=rational(1, 4), exact_tau=rational(2))
    if name == "polya":
        return FamilySpec(POLYA, "polya")
    if name == "non-plane-binary":
        return FamilySpec(NON_PLANE_BINARY, "non-plane-binary")
    raise FamilyValidationError(f"unknown family {name!r}")


@lru_cache(maxsize=None)
def _make_family_cached(spec: str) -> FamilySpec:
    s = spec.strip().lower()
    if s in BUILTIN_NAMES:
        return _builtin(s)
    if "," in s or s.lstrip("+-").replace("/", "").isdigit():
        try:
            coeffs = [parse_rational(p) for p in s.split(",")]
        except (ValueError, ZeroDivisionError) as exc:
            raise FamilyValidationError(f"cannot parse phi coefficients from {spec!r}") from exc
        cs = _validate_phi_coeffs(coeffs)
        name = "phi(" + ",".join(rational_str(c) for c in cs) + ")"
        return FamilySpec(SIMPLY_GENERATED, name, WeightSeries("polynomial", cs))
    raise FamilyValidationError(
        f"unknown family {spec!r}; use one of {', '.join(BUILTIN_NAMES)} "
        "or a comma-separated list of rational phi coefficients")


def make_family(spec: str) -> FamilySpec:
    """Resolve a family name or an explicit phi coefficient list."""
    if isinstance(spec, FamilySpec):
        return spec
    return _make_family_cached(spec)


def all_builtin_families() -> Tuple[FamilySpec, ...]:
    return tuple(make_family(n) for n in BUILTIN_NAMES)


# ----------------------------------------------------------------------
# coefficient series of the tree generating functions
# ----------------------------------------------------------------------
def tree_operator(family: FamilySpec):
    """The series map whose fixed point is the family's tree series.

    Operators derive all constants from the input's order, so they can be
    applied at any truncation.
    """
    kind = family.kind
    if kind == SIMPLY_GENERATED:
        phi = family.phi

        def op(y: TruncatedSeries) -> TruncatedSeries:
            z = TruncatedSeries.variable(y.order, y.mode)
            return z * phi.apply_to_series(y)

    elif kind == COMPLETE_BINARY:

        def op(y: TruncatedSeries) -> TruncatedSeries:
            z = TruncatedSeries.variable(y.order, y.mode)
            return TruncatedSeries.one(y.order, y.mode) + z * (y * y)

    elif kind == NON_PLANE_BINARY:

        def op(y: TruncatedSeries) -> TruncatedSeries:
            z = TruncatedSeries.variable(y.order, y.mode)
            sym = (y * y + y.substitute_power(2)).scaled(rational(1, 2))
            return TruncatedSeries.one(y.order, y.mode) + z * sym

    elif kind == POLYA:

        def op(y: TruncatedSeries) -> TruncatedSeries:
            z = TruncatedSeries.variable(y.order, y.mode)
            arg = y
            i = 2
            while i <= y.order:
                arg = arg + y.substitute_power(i).scaled(rational(1, i))
                i += 1
            return z * arg.exp()

    else:  # pragma: no cover
        raise FamilyValidationError(f"unknown family kind {kind!r}")
    return op


@lru_cache(maxsize=64)
def tree_series(family: FamilySpec, order: int) -> TruncatedSeries:
    """Exact rational coefficients of the family's tree series up to `order`."""
    if order < 1:
        raise FamilyValidationError("truncation order must be at least 1")
    return solve_fixed_point(tree_operator(family), order, RATIONAL, progressive=True)


def functional_equation_residual(family: FamilySpec, order: int) -> TruncatedSeries:
    """T - (defining equation right side), exact; zero iff T solves it."""
    t = tree_series(family, order)
    return t - tree_operator(family)(t)


# ----------------------------------------------------------------------
# singularity search
# ----------------------------------------------------------------------
def _newton_bracketed(g, gprime, lo, hi, dps) -> object:
    """Root of increasing g on (lo, hi) with g(lo) < 0 < g(hi)."""
    glo, ghi = g(lo), g(hi)
    if not (glo < 0 < ghi):
        raise SingularitySearchError("Newton bracket endpoints do not straddle the root")
    x = (lo + hi) / 2
    tol = mp.mpf(10) ** (-(dps - 2))
    for _ in range(40 + 4 * dps):
        gx = g(x)
        if gx < 0:
            lo = x
        else:
            hi = x
        dgx = gprime(x)
        step_ok = False
        if dgx != 0:
            x_new = x - gx / dgx
            if lo < x_new < hi:
                step_ok = True
        if not step_ok:
            x_new = (lo + hi) / 2
        if abs(x_new - x) <= tol * max(abs(x), mp.mpf(1)):
            return x_new
        x = x_new
    raise SingularitySearchError("Newton iteration did not converge")


def _sg_singularity(phi: WeightSeries, dps: int):
    """(tau, rho, puiseux1) for T = z phi(T).

    tau solves tau phi'(tau) = phi(tau); the left side minus the right is
    strictly increasing (its derivative is tau phi''(tau) > 0), so the
    positive solution is unique whenever it exists.
    """

    def g(t):
        return t * phi.prime(t) - phi.value(t)

    def gp(t):
        return t * phi.second(t)

    lo = mp.mpf(0)
    if phi.radius is None:
        hi = mp.mpf(1)
        for _ in range(200):
            if g(hi) > 0:
                break
            hi *= 2
        else:
            raise SingularitySearchError("failed to bracket tau phi'(tau) = phi(tau)")
    else:
        hi = mp.mpf(3) / 4
        for _ in range(40 + 4 * dps):
            if g(hi) > 0:
                break
            hi = 1 - (1 - hi) / 2
        else:
            raise SingularitySearchError("failed to bracket the root inside the phi disc")
    tau = _newton_bracketed(g, gp, lo, hi, dps)
    rho = tau / phi.value(tau)
    puiseux1 = mp.sqrt(2 * phi.value(tau) / phi.second(tau))
    return tau, rho, puiseux1


def series_slices(series_float: TruncatedSeries, rho_est, dps: int):
    """Slices of a float series keyed by exponent i >= 2, long enough that
    evaluation at x with |x| <= rho_est**i drops a tail below 10**-(dps+4).

    Valid for series whose coefficients satisfy |c_n| <= C rho_est**-n with
    C of order one (all tree-type series here); the dropped tail then
    decays like rho_est**((i-1) n).
    """
    log_inv = -mp.log(rho_est)
    need = (dps + 8) * mp.log(10)
    tiny = mp.mpf(10) ** (-(dps + 8))
    slices = {}
    i = 2
    while True:
        L = int(mp.ceil(need / (max(i - 1, 1) * log_inv))) + 6
        slices[i] = series_float.truncated(min(L, series_float.order))
        if rho_est ** i < tiny:
            break
        i += 1
    return slices


def power_point_sum(series_float: TruncatedSeries, rho, weight_fn, dps: int,
                    slices=None, coeff_bound=None):
    """sum_{i>=2} weight_fn(i) * f(rho**i), truncated when rho**i is negligible.

    `series_float` must be in float mode; `slices` (from series_slices) may
    be supplied to shorten the Horner loops.  Returns (value, tail bound
    covering both the dropped exponents and the series truncation).
    """
    total = mp.zero
    tails = mp.zero
    tiny = mp.mpf(10) ** (-(dps + 8))
    i = 2
    x = rho * rho
    while True:
        f = slices[i] if slices is not None and i in slices else series_float
        val, tail = f.evaluate(x, rho=rho, coeff_bound=coeff_bound)
        w = weight_fn(i)
        total += w * val
        tails += abs(w) * tail
        if x < tiny:
            # remaining exponents contribute below a short geometric tail
            tails += abs(w) * x * 2
            break
        i += 1
        x = x * rho
    return total, tails


def _polya_singularity(order: int, dps: int):
    """Self-consistent rho for T(rho)=1, plus b = sqrt(2 (1 + rho E'(rho)))."""
    t_float = tree_series(make_family("polya"), order).to_float()
    t_prime = t_float.derivative()
    rho_est = mp.mpf("0.35")
    slices = series_slices(t_float, rho_est, dps)
    prime_slices = series_slices(t_prime, rho_est, dps)

    def e_value(r):
        total = mp.zero
        x = r * r
        for i in sorted(slices):
            total += slices[i].evaluate(x)[0] / i
            x *= r
        return total

    rho = mp.mpf(1) / 3
    tol = mp.mpf(10) ** (-(dps - 2))
    for _ in range(80 + 6 * dps):
        new = mp.exp(-1 - e_value(rho))
        if abs(new - rho) <= tol * rho:
            rho = new
            break
        rho = new
    else:
        raise SingularitySearchError("self-consistent iteration for rho did not converge")
    # E'(rho) = sum_{i>=2} rho**(i-1) T'(rho**i)
    e_prime = mp.zero
    x = rho * rho
    p = rho
    for i in sorted(prime_slices):
        e_prime += p * prime_slices[i].evaluate(x)[0]
        x *= rho
        p *= rho
    b = mp.sqrt(2 * (1 + rho * e_prime))
    return rho, b, e_value(rho), e_prime


def _npb_singularity(order: int, dps: int):
    """Self-consistent rho for rho T(rho) = 1, plus the Puiseux magnitude a."""
    t_float = tree_series(make_family("non-plane-binary"), order).to_float()
    t_prime = t_float.derivative()
    rho_est = mp.mpf("0.41")
    t_slice = series_slices(t_float, rho_est, dps)[2]
    rho = mp.mpf(2) / 5
    tol = mp.mpf(10) ** (-(dps - 2))
    for _ in range(120 + 8 * dps):
        u = t_slice.evaluate(rho * rho)[0]
        new = (1 - rho * rho * u) / 2
        if abs(new - rho) <= tol * rho:
            rho = new
            break
        rho = new
    else:
        raise SingularitySearchError("self-consistent iteration for rho did not converge")
    u, _ = t_float.evaluate(rho * rho, rho=rho)
    up, _ = t_prime.evaluate(rho * rho, rho=rho)
    a = mp.sqrt(1 / rho ** 2 + u + 2 * rho ** 2 * up)
    return rho, a


@lru_cache(maxsize=None)
def find_singularity(family: FamilySpec, precision: int = DEFAULT_PRECISION,
                     trunc: int = DEFAULT_TRUNCATION) -> SingularityData:
    """Dominant singularity data at `precision` decimal digits.

    Returned mpf values carry guard digits beyond the requested precision.
    """
    if precision < 1:
        raise SingularitySearchError("precision must be a positive digit count")
    dps = precision + GUARD_DIGITS
    with mp.workdps(dps):
        if family.kind == SIMPLY_GENERATED:
            tau, rho, p1 = _sg_singularity(family.phi, dps)
        elif family.kind == COMPLETE_BINARY:
            tau_s, rho, p1 = _sg_singularity(_CB_SHIFTED_PHI, dps)
            tau = 1 + tau_s
        elif family.kind == POLYA:
            rho, p1, _, _ = _polya_singularity(trunc, dps)
            tau = mp.one
        elif family.kind == NON_PLANE_BINARY:
            rho, p1 = _npb_singularity(trunc, dps)
            tau = 1 / rho
        else:  # pragma: no cover
            raise FamilyValidationError(f"unknown family kind {family.kind!r}")
        return SingularityData(rho=rho, tau=tau, puiseux1=p1, precision=precision)


@lru_cache(maxsize=None)
def polya_base_values(precision: int = DEFAULT_PRECISION,
                      trunc: int = DEFAULT_TRUNCATION):
    """(rho, b, E(rho), E'(rho)) for the unordered-tree family."""
    dps = precision + GUARD_DIGITS
    with mp.workdps(dps):
        return _polya_singularity(trunc, dps)
