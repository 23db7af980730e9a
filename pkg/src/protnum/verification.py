"""Named verification checks backing `protnum verify` and the acceptance tests.

Every check returns a CheckResult; the CLI prints one PASS/FAIL line per
check and exits nonzero if anything failed.  The checks mirror the
package's acceptance gate:

1. root-limit constants          5. oracle equivalence (exact)
2. random-vertex constants       6. functional-equation residuals (exact)
3. singularity constants         7. the two unordered-mean assemblies agree
4. closed-form identities        8. seeded statistical runs
                                 9. finite-n convergence improvement
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Optional, Tuple

from mpmath import mp

from .enumeration import (
    Tree,
    brute_force_stats,
    protected_count,
    protection_number,
    tk_coefficients,
)
from .families import (
    FamilySpec,
    find_singularity,
    functional_equation_residual,
    make_family,
    tree_series,
)
from .protection import (
    polya_root_mean_forms,
    protected_root_values_exact,
    root_limit_probability_exact,
    root_limits,
    sk_functional_residual,
    sk_min_index,
    sk_series,
    vertex_limits,
)
from .reference import ROOT_LIMITS, SINGULARITY, VERTEX_LIMITS
from .sampling import SampleConfig, empirical_protection
from .scalars import rational

VERIFY_PRECISION = 30
RESIDUAL_ORDER = 256
STAT_SEED = 20260809

ORACLE_RANGES = {
    "plane": 10,
    "motzkin": 10,
    "incomplete-binary": 10,
    "complete-binary": 10,
    "polya": 12,
    "non-plane-binary": 12,
}
ORACLE_K = 6


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"{tag} {self.name}" + (f"  [{self.detail}]" if self.detail else "")


def _agree_digits(value, reference: str) -> int:
    ref = mp.mpf(reference)
    err = abs(value - ref)
    if err == 0:
        return 99
    return int(mp.floor(-mp.log10(err / abs(ref))))


def example_tree() -> Tree:
    """The 13-vertex worked example: root protection 1, six 1-protected
    vertices, one 2-protected vertex."""
    leaf = Tree()
    b = Tree((
        Tree((leaf,)),
        Tree((leaf, leaf)),
        Tree((leaf,)),
    ))
    h = Tree((leaf, leaf))
    return Tree((leaf, b, h))


# ----------------------------------------------------------------------
# criterion checks
# ----------------------------------------------------------------------
def check_root_constants(precision: int, trunc: int,
                         families: Iterable[str]) -> List[CheckResult]:
    out = []
    with mp.workdps(precision + 10):
        tol = mp.mpf("1e-12")
        for name in families:
            mean_ref, var_ref = ROOT_LIMITS[name]
            rep = root_limits(make_family(name), precision, trunc)
            dm = abs(rep.mean - mp.mpf(mean_ref))
            dv = abs(rep.variance - mp.mpf(var_ref))
            out.append(CheckResult(
                f"root-constants-{name}", dm < tol and dv < tol,
                f"|dmean|={mp.nstr(dm, 3)} |dvar|={mp.nstr(dv, 3)} tol=1e-12"))
    return out


def check_vertex_constants(precision: int, trunc: int,
                           families: Iterable[str]) -> List[CheckResult]:
    out = []
    with mp.workdps(precision + 10):
        for name in families:
            mean_ref, var_ref, tol_s = VERTEX_LIMITS[name]
            tol = mp.mpf(tol_s)
            rep = vertex_limits(make_family(name), precision, trunc)
            dm = abs(rep.mean - mp.mpf(mean_ref))
            dv = abs(rep.variance - mp.mpf(var_ref))
            out.append(CheckResult(
                f"vertex-constants-{name}", dm < tol and dv < tol,
                f"|dmean|={mp.nstr(dm, 3)} |dvar|={mp.nstr(dv, 3)} tol={tol_s}"))
    return out


def check_singularities(precision: int, trunc: int,
                        families: Iterable[str]) -> List[CheckResult]:
    out = []
    with mp.workdps(precision + 10):
        for name in families:
            if name not in SINGULARITY:
                continue
            ref = SINGULARITY[name]
            sing = find_singularity(make_family(name), precision, trunc)
            d_rho = _agree_digits(sing.rho, ref["rho"])
            d_p1 = _agree_digits(sing.puiseux1, ref["puiseux1"])
            out.append(CheckResult(
                f"singularity-{name}", d_rho >= 20 and d_p1 >= 20,
                f"rho agrees to {d_rho} digits, sqrt-coefficient to {d_p1} (need 20)"))
    return out


def check_closed_forms(families: Iterable[str]) -> List[CheckResult]:
    out = []
    if "plane" in families:
        values = protected_root_values_exact(make_family("plane"), 20)
        ok = all(values[i] == rational(3, 2 * (4 ** i + 2)) for i in range(1, 21))
        out.append(CheckResult(
            "closed-form-plane-protected-values", ok,
            "T_i(rho) = 3/(2(4^i+2)) exactly, i = 1..20"))
    if "complete-binary" in families:
        fam = make_family("complete-binary")
        values = protected_root_values_exact(fam, 5)
        ok = all(values[k] == rational(2) ** (2 - 2 ** k) for k in range(0, 6))
        ok = ok and all(
            root_limit_probability_exact(fam, k) == rational(2) ** (k + 1 - 2 ** k)
            for k in range(1, 6))
        out.append(CheckResult(
            "closed-form-complete-binary", ok,
            "T_k(rho) = 2^(2-2^k) and P(X>=k) = 2^(k+1-2^k) exactly, k <= 5"))
    return out


def check_oracle(families: Iterable[str]) -> List[CheckResult]:
    out = []
    for name in families:
        if name not in ORACLE_RANGES:
            continue
        fam = make_family(name)
        n_max = ORACLE_RANGES[name]
        bad = None
        for n in range(1, n_max + 1):
            stats = brute_force_stats(fam, n, k_max=ORACLE_K)
            for k in range(0, ORACLE_K + 1):
                want_trees, want_protected = stats[k]
                got_trees = int(tk_coefficients(fam, k, n).coefficient(n))
                if got_trees != want_trees:
                    bad = f"T_{k} at n={n}: series {got_trees} != brute {want_trees}"
                    break
                if k >= 1:
                    if sk_min_index(fam, k) > n:
                        got_protected = 0
                    else:
                        got_protected = int(sk_series(fam, k, n).coefficient(n))
                    if got_protected != want_protected:
                        bad = (f"S_{k} at n={n}: series {got_protected} != "
                               f"brute {want_protected}")
                        break
            if bad:
                break
        out.append(CheckResult(
            f"oracle-{name}", bad is None,
            bad or f"exact match, n <= {n_max}, k <= {ORACLE_K}"))
    return out


def check_example_tree() -> List[CheckResult]:
    t = example_tree()
    ok = (protection_number(t) == 1
          and protected_count(t, 0) == 13
          and protected_count(t, 1) == 6
          and protected_count(t, 2) == 1)
    return [CheckResult(
        "oracle-example-tree", ok,
        "13 vertices: root protection 1, six 1-protected, one 2-protected")]


def check_residuals(families: Iterable[str], order: int = RESIDUAL_ORDER) -> List[CheckResult]:
    out = []
    for name in families:
        res = functional_equation_residual(make_family(name), order)
        out.append(CheckResult(
            f"residual-{name}", res.is_zero(),
            f"T - equation(T) = 0 exactly to order {order}"))
    if "polya" in families:
        ok = all(
            sk_functional_residual(make_family("polya"), k, order).is_zero()
            for k in (1, 2, 3))
        out.append(CheckResult(
            "residual-polya-sk", ok,
            f"S_k equation residual = 0 exactly to order {order}, k = 1..3"))
    return out


def check_mean_forms(precision: int, trunc: int) -> List[CheckResult]:
    with mp.workdps(precision + 10):
        a, b = polya_root_mean_forms(precision, trunc)
        diff = abs(a - b)
        return [CheckResult(
            "polya-mean-forms", diff < mp.mpf("1e-25"),
            f"conditional vs ratio assembly differ by {mp.nstr(diff, 3)} (tol 1e-25)")]


def check_statistical(precision: int, trunc: int) -> List[CheckResult]:
    out = []
    with mp.workdps(precision + 10):
        s = empirical_protection(SampleConfig("plane", 1000, 10_000, STAT_SEED))
        target = float(root_limits(make_family("plane"), precision, trunc).mean)
        dev = abs(s.root_mean - target) / s.root_se
        out.append(CheckResult(
            "statistical-plane-root", dev <= 4,
            f"n=1000, 10^4 trials: {dev:.2f} standard errors from the limit"))
        s = empirical_protection(SampleConfig("polya", 500, 10_000, STAT_SEED))
        target = float(vertex_limits(make_family("polya"), precision, trunc).mean)
        dev = abs(s.vertex_mean - target) / s.vertex_se
        out.append(CheckResult(
            "statistical-polya-vertex", dev <= 4,
            f"n=500, 10^4 trials: {dev:.2f} standard errors from the limit"))
    return out


def finite_moments(family: FamilySpec, n: int, mode: str) -> Tuple:
    """Exact E and V of the protection number at size n, as mpf values."""
    family = make_family(family)
    t_n = tree_series(family, n).coefficient(n)
    mean = mp.zero
    second = mp.zero
    k = 1
    while True:
        if mode == "root":
            c = tk_coefficients(family, k, n).coefficient(n)
            if not c:
                break
            p = mp.mpf(int(c)) / int(t_n)
        else:
            if sk_min_index(family, k) > n:
                break
            c = sk_series(family, k, n).coefficient(n)
            if not c:
                break
            p = mp.mpf(int(c)) / (n * int(t_n))
        mean += p
        second += (2 * k - 1) * p
        k += 1
    return mean, second - mean ** 2


def check_finite_n_improvement(precision: int, trunc: int,
                               families: Iterable[str]) -> List[CheckResult]:
    """|finite-n moment - limit| must shrink from n = 40 to n = 80."""
    out = []
    with mp.workdps(precision + 10):
        for name in families:
            fam = make_family(name)
            improved = []
            for mode in ("root", "vertex"):
                rep = root_limits(fam, precision, trunc) if mode == "root" \
                    else vertex_limits(fam, precision, trunc)
                m40, v40 = finite_moments(fam, 40, mode)
                m80, v80 = finite_moments(fam, 80, mode)
                improved.append(abs(m80 - rep.mean) < abs(m40 - rep.mean))
                improved.append(abs(v80 - rep.variance) < abs(v40 - rep.variance))
            out.append(CheckResult(
                f"finite-n-improvement-{name}", all(improved),
                "mean and variance closer to the limit at n=80 than at n=40, both modes"))
    return out


# ----------------------------------------------------------------------
# driver
# ----------------------------------------------------------------------
ALL_FAMILIES = tuple(ROOT_LIMITS)


def run_verification(precision: int = VERIFY_PRECISION, trunc: int = RESIDUAL_ORDER,
                     families: Optional[Iterable[str]] = None,
                     statistical: bool = True) -> List[CheckResult]:
    fams = tuple(families) if families else ALL_FAMILIES
    results: List[CheckResult] = []
    results += check_root_constants(precision, trunc, fams)
    results += check_vertex_constants(precision, trunc, fams)
    results += check_singularities(precision, trunc, fams)
    results += check_closed_forms(fams)
    results += check_oracle(fams)
    results += check_example_tree()
    results += check_residuals(fams)
    if "polya" in fams:
        results += check_mean_forms(precision, trunc)
    if statistical and {"plane", "polya"} <= set(fams):
        results += check_statistical(precision, trunc)
    results += check_finite_n_improvement(precision, trunc, fams)
    return results
