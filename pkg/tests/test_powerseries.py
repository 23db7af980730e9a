import random

import pytest
from mpmath import mp

from protnum.errors import (
    ConvergenceDomainError,
    DivergenceError,
    NonUnitDivisorError,
    SeriesDomainError,
)
from protnum.powerseries import FLOAT, RATIONAL, TruncatedSeries, solve_fixed_point
from protnum.scalars import rational


def S(values, order=None, mode=RATIONAL):
    return TruncatedSeries.from_values(values, order, mode)


def test_ring_ops_basic():
    one_plus = S([1, 1], 3)
    one_minus = S([1, -1], 3)
    assert (one_plus * one_minus).coeffs == S([1, 0, -1, 0]).coeffs

    a = S([2, 3, 5], 4)
    assert (a + TruncatedSeries.zero(4)).coeffs == a.coeffs

    geom = TruncatedSeries.one(4).divide(S([1, -1], 4))
    assert geom.coeffs == S([1, 1, 1, 1, 1]).coeffs


def test_mul_truncates_to_shorter_operand():
    a = S([1, 1, 1, 1, 1])
    b = S([1, 1])
    assert (a * b).order == 1
    assert (a - b).order == 1


def test_divide_requires_unit():
    with pytest.raises(NonUnitDivisorError):
        S([1, 1], 3).divide(S([0, 1], 3))


def test_ring_laws_on_random_series():
    rng = random.Random(20260809)
    for _ in range(25):
        order = rng.randrange(1, 7)
        def rand_series():
            return S([rational(rng.randrange(-6, 7), rng.randrange(1, 5))
                      for _ in range(order + 1)])
        a, b, c = rand_series(), rand_series(), rand_series()
        assert ((a * b) * c).coeffs == (a * (b * c)).coeffs
        assert (a * (b + c)).coeffs == (a * b + a * c).coeffs
        assert (a * b).coeffs == (b * a).coeffs
        assert (a + b).coeffs == (b + a).coeffs


def test_substitute_power():
    assert S([0, 1], 5).substitute_power(2).coeffs == S([0, 0, 1], 5).coeffs
    f = S([1, 1, 2], 5)
    assert f.substitute_power(2).coeffs == S([1, 0, 1, 0, 2], 5).coeffs
    assert TruncatedSeries.zero(4).substitute_power(3).is_zero()
    with pytest.raises(SeriesDomainError):
        f.substitute_power(1)


def test_substitute_power_readback():
    rng = random.Random(7)
    f = S([rational(rng.randrange(-5, 6)) for _ in range(13)])
    for i in (2, 3, 4):
        g = f.substitute_power(i)
        for m in range(f.order // i + 1):
            assert g.coefficient(m * i) == f.coefficient(m)


def test_series_exp():
    assert TruncatedSeries.zero(4).exp().coeffs == TruncatedSeries.one(4).coeffs
    e = S([0, 1], 4).exp()
    assert list(e.coeffs) == [1, 1, rational(1, 2), rational(1, 6), rational(1, 24)]
    # exp(z + z^2): multiply out (1 + z + z^2/2)(1 + z^2) by hand for z^2
    assert S([0, 1, 1], 4).exp().coefficient(2) == rational(3, 2)
    with pytest.raises(SeriesDomainError):
        S([1, 1], 3).exp()


def test_exp_inverse_property():
    rng = random.Random(99)
    for _ in range(10):
        f = S([0] + [rational(rng.randrange(-4, 5), rng.randrange(1, 4))
                     for _ in range(8)])
        prod = f.exp() * (-f).exp()
        assert prod.coeffs == TruncatedSeries.one(8).coeffs


def test_derivative_and_shifts():
    f = S([5, 1, 2, 7])
    assert f.derivative().coeffs == S([1, 4, 21]).coeffs
    assert f.shift_up(1).coeffs == S([0, 5, 1, 2]).coeffs
    assert S([0, 0, 3, 4]).shift_down(2).coeffs == S([3, 4]).coeffs
    with pytest.raises(SeriesDomainError):
        f.shift_down(1)


def _plane_operator(y):
    z = TruncatedSeries.variable(y.order, y.mode)
    one = TruncatedSeries.one(y.order, y.mode)
    return z * one.divide(one - y)


def test_solve_fixed_point_examples():
    # counts confirmed by the exhaustive enumerator in the oracle suite
    plane = solve_fixed_point(_plane_operator, 5)
    assert [int(c) for c in plane.coeffs] == [0, 1, 1, 2, 5, 14]

    def motzkin_op(y):
        z = TruncatedSeries.variable(y.order, y.mode)
        one = TruncatedSeries.one(y.order, y.mode)
        return z * (one + y + y * y)

    motzkin = solve_fixed_point(motzkin_op, 5)
    assert [int(c) for c in motzkin.coeffs] == [0, 1, 1, 2, 4, 9]

    def npb_op(y):
        z = TruncatedSeries.variable(y.order, y.mode)
        one = TruncatedSeries.one(y.order, y.mode)
        sym = (y * y + y.substitute_power(2)).scaled(rational(1, 2))
        return one + z * sym

    npb = solve_fixed_point(npb_op, 5)
    assert [int(c) for c in npb.coeffs] == [1, 1, 1, 2, 3, 6]


def test_solve_fixed_point_progressive_matches_plain():
    for op in (_plane_operator,):
        assert (solve_fixed_point(op, 9, progressive=True).coeffs
                == solve_fixed_point(op, 9).coeffs)


def test_solve_fixed_point_residual_property():
    y = solve_fixed_point(_plane_operator, 12)
    assert _plane_operator(y).coeffs == y.coeffs


def test_solve_fixed_point_divergence():
    def shift_op(y):
        return y + TruncatedSeries.one(y.order, y.mode)

    with pytest.raises(DivergenceError):
        solve_fixed_point(shift_op, 5)


def test_solve_fixed_point_float_mode():
    exact = solve_fixed_point(_plane_operator, 8)
    with mp.workdps(30):
        approx = solve_fixed_point(_plane_operator, 8, FLOAT)
        for c_exact, c_float in zip(exact.coeffs, approx.coeffs):
            assert abs(c_float - int(c_exact)) < mp.mpf("1e-25")


def test_evaluate_plain_and_constant():
    f = S([7, 1, 1])
    val, tail = f.evaluate(0)
    assert val == 7 and tail is None
    val, tail = S([0, 1], 6).exp().evaluate(1)
    assert tail is None  # plain partial sum, no guarantee requested


def test_evaluate_tail_bound_against_closed_form():
    with mp.workdps(40):
        plane = solve_fixed_point(_plane_operator, 48)
        x = mp.mpf(1) / 8
        val, tail = plane.evaluate(x, rho=mp.mpf(1) / 4)
        closed = mp.mpf(1) / 2 - mp.sqrt(mp.mpf(1) / 4 - x)
        assert abs(val - closed) <= tail
        assert tail < mp.mpf("1e-10")
        assert mp.nstr(val, 7) == "0.1464466"


def test_evaluate_convergence_domain_error():
    plane = solve_fixed_point(_plane_operator, 16)
    with pytest.raises(ConvergenceDomainError):
        plane.evaluate(mp.mpf("0.3"), rho=mp.mpf(1) / 4)


def test_mode_mixing_rejected():
    with pytest.raises(SeriesDomainError):
        S([1, 2]) + S([1, 2], mode=FLOAT)
