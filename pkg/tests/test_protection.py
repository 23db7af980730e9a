import pytest
from mpmath import mp

from protnum.enumeration import tk_coefficients
from protnum.errors import PrecisionError, SeriesDomainError
from protnum.families import find_singularity, make_family, tree_series
from protnum.protection import (
    ProtectionReport,
    polya_auxiliary,
    polya_root_mean_forms,
    protected_root_values,
    protected_root_values_exact,
    root_limit_probability,
    root_limit_probability_exact,
    root_limits,
    sk_functional_residual,
    sk_min_index,
    sk_series,
    vertex_limits,
)
from protnum.scalars import rational

PRECISION = 30


def test_plane_protected_values_closed_form():
    values = protected_root_values_exact(make_family("plane"), 20)
    assert values[0] == rational(1, 2)
    for i in range(1, 21):
        assert values[i] == rational(3, 2 * (4 ** i + 2))


def test_motzkin_protected_values():
    values = protected_root_values_exact(make_family("motzkin"), 2)
    assert values[1] == rational(2, 3)
    assert values[2] == rational(10, 27)


def test_complete_binary_closed_forms():
    fam = make_family("complete-binary")
    values = protected_root_values_exact(fam, 5)
    for k in range(0, 6):
        assert values[k] == rational(2) ** (2 - 2 ** k)
    for k in range(1, 6):
        assert root_limit_probability_exact(fam, k) == rational(2) ** (k + 1 - 2 ** k)


def test_root_probability_examples():
    assert root_limit_probability_exact(make_family("plane"), 1) == 1
    assert root_limit_probability_exact(make_family("plane"), 2) == rational(4, 9)
    assert root_limit_probability_exact(make_family("complete-binary"), 2) == rational(1, 2)
    with mp.workdps(40):
        p = root_limit_probability(make_family("plane"), 2, PRECISION)
        assert abs(p - mp.mpf(4) / 9) < mp.mpf("1e-28")
        assert root_limit_probability(make_family("polya"), 1, PRECISION) == 1


def test_float_values_match_exact():
    fam = make_family("plane")
    exact = protected_root_values_exact(fam, 8)
    approx = protected_root_values(fam, 8, precision=PRECISION)
    with mp.workdps(40):
        for e, a in zip(exact, approx):
            assert abs(a - mp.mpf(int(e.numerator)) / int(e.denominator)) < mp.mpf("1e-28")


@pytest.mark.parametrize("name", ["polya", "non-plane-binary", "cayley"])
def test_protected_values_decreasing_positive(name):
    values = protected_root_values(make_family(name), 10, precision=PRECISION)
    for k in range(1, len(values)):
        assert 0 < values[k] < values[k - 1]


def test_protected_values_argument_errors():
    with pytest.raises(ValueError):
        protected_root_values(make_family("plane"), 0)
    with pytest.raises(SeriesDomainError):
        protected_root_values_exact(make_family("cayley"), 3)


def test_sk_series_plane():
    s1 = sk_series(make_family("plane"), 1, 8)
    assert int(s1.coefficient(2)) == 1
    assert int(s1.coefficient(3)) == 3
    assert s1.coefficient(0) == 0 and s1.coefficient(1) == 0


def test_sk_series_min_index():
    for name in ("plane", "polya"):
        fam = make_family(name)
        for k in (1, 2, 4):
            s = sk_series(fam, k, k + 6)
            for n in range(0, k + 1):
                assert s.coefficient(n) == 0
            if name == "polya":
                assert s.coefficient(k + 1) == 1  # the path is the only witness
    with pytest.raises(SeriesDomainError):
        sk_series(make_family("plane"), 9, 8)
    with pytest.raises(ValueError):
        sk_series(make_family("plane"), 0, 8)


def test_sk_convolution_identity_simply_generated():
    # S_k(z) T(z) = T_k(z) T'(z) z phi_0, exact to the shared order
    for name in ("plane", "motzkin", "incomplete-binary", "cayley"):
        fam = make_family(name)
        n = 40
        t = tree_series(fam, n + 1)
        for k in (1, 2, 3):
            s = sk_series(fam, k, n)
            lhs = s * t
            rhs = (tk_coefficients(fam, k, n + 1) * t.derivative()
                   * fam.phi.phi0).shift_up(1)
            assert lhs.coeffs == rhs.truncated(lhs.order).coeffs, (name, k)


def test_sk_complete_binary_pointing_identity():
    # S_k (1 - 2 z B) = T_k: the pointed-leaf series is 1/(1 - 2 z B)
    fam = make_family("complete-binary")
    b = tree_series(fam, 40)
    one = tree_series(fam, 40).one(40)
    for k in (1, 2, 3):
        s = sk_series(fam, k, 40)
        lhs = s * (one - b.shift_up(1).scaled(2))
        assert lhs.coeffs == tk_coefficients(fam, k, 40).coeffs


@pytest.mark.parametrize("name", ["polya", "non-plane-binary"])
def test_sk_functional_residual(name):
    for k in (1, 2):
        assert sk_functional_residual(make_family(name), k, 64).is_zero()


@pytest.mark.parametrize("name,mode", [
    (n, m) for n in ("plane", "cayley", "polya", "non-plane-binary")
    for m in ("root", "vertex")])
def test_report_structure(name, mode):
    fam = make_family(name)
    rep = (root_limits if mode == "root" else vertex_limits)(fam, PRECISION)
    with mp.workdps(40):
        assert rep.tail_bound < mp.mpf(10) ** (-PRECISION)
        assert rep.variance >= 0
        assert rep.k_max == len(rep.probabilities)
        last = None
        for p in rep.probabilities:
            assert 0 <= p <= 1
            if last is not None:
                assert p <= last
            last = p


def test_geometric_majorant_bound_plane():
    # P(X >= k) <= (rho phi'(T_1(rho)))^(k-1), the truncation majorant
    fam = make_family("plane")
    rep = root_limits(fam, PRECISION)
    sing = find_singularity(fam, PRECISION)
    with mp.workdps(40):
        t1 = protected_root_values(fam, 1, precision=PRECISION)[1]
        r = sing.rho * fam.phi.prime(t1)
        for k, p in enumerate(rep.probabilities, start=1):
            assert p <= r ** (k - 1) * (1 + mp.mpf("1e-25"))


def test_report_roundtrip():
    rep = root_limits(make_family("plane"), PRECISION)
    back = ProtectionReport.from_dict(rep.to_dict())
    assert back == rep
    assert back.to_dict() == rep.to_dict()


def test_polya_mean_form_equivalence():
    a, b = polya_root_mean_forms(PRECISION)
    with mp.workdps(45):
        assert abs(a - b) < mp.mpf("1e-25")


def test_polya_auxiliary():
    aux = polya_auxiliary(make_family("polya"), 4, PRECISION)
    with mp.workdps(40):
        assert abs(aux.q_values[0] - mp.exp(aux.e_at_rho)) < mp.mpf("1e-30")
        for q in aux.q_values:
            assert q > 1  # the sums are positive
        assert aux.e_prime_at_rho > 0
    with pytest.raises(SeriesDomainError):
        polya_auxiliary(make_family("plane"), 2, PRECISION)


def test_precision_error_on_small_truncation():
    with pytest.raises(PrecisionError):
        vertex_limits(make_family("polya"), 30, 32)


def test_probability_accessor():
    rep = root_limits(make_family("plane"), PRECISION)
    assert rep.probability(1) == 1
    assert rep.probability(rep.k_max + 5) == 0
    with pytest.raises(ValueError):
        rep.probability(0)


def test_sk_min_index():
    assert sk_min_index(make_family("plane"), 3) == 4
    assert sk_min_index(make_family("polya"), 3) == 4
    assert sk_min_index(make_family("complete-binary"), 3) == 7
    assert sk_min_index(make_family("non-plane-binary"), 4) == 15
