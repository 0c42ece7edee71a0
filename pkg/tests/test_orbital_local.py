import math
from fractions import Fraction

import pytest

from rtfverify import orbital_local as ol
from rtfverify.errors import MissingOracle
from rtfverify.formal import FormalLog


def pt(ordb, ordb1=None, unit_eta=1):
    if ordb1 is None:
        ordb1 = 0 if ordb > 0 else (ordb if ordb < 0 else 0)
    return ol.LocalPoint(ordb, ordb1, unit_eta)


def test_local_point_consistency():
    with pytest.raises(ValueError):
        ol.LocalPoint(-2, 0)
    with pytest.raises(ValueError):
        ol.LocalPoint(2, 1)
    with pytest.raises(ValueError):
        ol.LocalPoint(0, -1)
    assert ol.LocalPoint(0, 5).ord_bb1 == 5


def test_lambda_examples():
    assert ol.lambda_v(pt(1)) == 2          # b = varpi
    assert ol.lambda_v(pt(-3)) == 0         # b not integral
    assert ol.lambda_v(pt(0, 0)) == 1       # b, b+1 both units


def test_tau_rational():
    # b = 2: tau = number of divisors of 2*3 = 4
    assert ol.tau_S_rational(Fraction(2), 1) == 4
    # with the support {2} the factor at 2 is only an indicator
    assert ol.tau_S_rational(Fraction(1, 2), 2) == 2
    assert ol.tau_S_rational(Fraction(1, 4), 2) == 0
    assert ol.tau_S_rational(Fraction(1, 3), 2) == 0
    with pytest.raises(ValueError):
        ol.tau_S_rational(Fraction(-1), 1)


def test_tilde_delta_examples():
    # split side: minus the triangular number
    assert ol.tilde_delta(0, pt(2), 1) == -3
    # depth-one coefficient at a unit
    assert ol.tilde_delta(1, pt(0, 0), -1) == 1
    # inert side, order two: the shell sum gives -1 (its sign-flipped
    # variant +1 is rejected by the oracle below)
    assert ol.tilde_delta(0, pt(2), -1) == -1
    assert ol.tilde_delta_displayed(0, pt(2), -1) == 1


def test_tilde_delta_against_shell_oracle():
    for eta in (-1, 1):
        for n in range(0, 5):
            for point in ol.enumerate_points(9):
                got = ol.tilde_delta(n, point, eta)
                want = ol.tilde_delta_oracle(n, point, eta)
                assert got == want, (n, point, eta)


def test_shell_sum_values():
    assert ol.shell_sum(1, 1, 3) == 6
    assert ol.shell_sum(-1, 0, 2) == 1
    assert ol.shell_sum(-1, -2, -1) == -1   # k=-2 even -> -2; k=-1 odd -> +1
    assert ol.shell_sum(-1, 5, 4) == 0


def test_tilde_I_plus_m1_example():
    # only the l = 0 term survives for m = 1 at integral b
    q = 3
    for eta in (-1, 1):
        point = pt(2)
        got = ol.tilde_I_plus_scaled(1, point, q, eta)
        want = -ol.tilde_delta(1, point, eta) + (0 * q - 2) * ol.tilde_delta(0, point, eta)
        assert got == want


def test_tilde_I_plus_oracle_grid():
    for q in (2, 3):
        for eta in (-1, 1):
            for m in range(1, 6):
                for point in ol.enumerate_points(8):
                    assert ol.tilde_I_plus_scaled(m, point, q, eta) == \
                        ol.tilde_I_plus_oracle_scaled(m, point, q, eta)


def test_bullet_integral_example():
    # level-one shell at a unit: eta(varpi b) (l + ord b) with a sign
    assert ol.tilde_delta_oracle(1, pt(0, 0), -1) == 1


def test_w_hecke_m0_self_contained():
    for q in (2, 3):
        for eta in (-1, 1):
            for point in ol.enumerate_points(6):
                val = ol.w_hecke_scaled(0, point, q, eta)
                assert isinstance(val, Fraction)
    # m > 0 demands the injected integral
    with pytest.raises(MissingOracle):
        ol.w_hecke_scaled(2, pt(1), 3, -1)


def test_w_hecke_assembly_with_injected_oracle():
    fake = {(1, 0): Fraction(5, 7), (1, 1): Fraction(-2, 3), (1, -1): Fraction(0)}

    def iplus(m, point):
        return fake.get((m, point.ordb), Fraction(1, 9))

    q, eta = 3, -1
    for point in ol.enumerate_points(4):
        shifted = ol.shift_point(point)
        got = ol.w_hecke_scaled(1, point, q, eta, iplus)
        want = (ol.tilde_I_plus_scaled(1, point, q, eta)
                + eta * (iplus(1, shifted) - ol.tilde_I_plus_scaled(1, shifted, q, eta)))
        assert got == want


def test_w_hecke_bound_envelope():
    # the computable parts sit inside the level-m envelope with a modest
    # fitted constant
    worst = 0.0
    for q in (2, 3, 5):
        for eta in (-1, 1):
            for m in range(0, 6):
                for point in ol.enumerate_points(8):
                    val = ol.w_hecke_bound_parts(m, point, q, eta)
                    env = ol.w_hecke_gq_bound(m, point, q)
                    if env == 0:
                        assert val == 0.0
                    elif val:
                        worst = max(worst, val / env)
    assert worst < 3.0


def test_w_unramified_examples():
    # both units: vanishes
    assert ol.w_unramified(pt(0, 0), 3, 1).is_zero()
    # split side at depth two
    assert ol.w_unramified(pt(2), 3, 1) == FormalLog.symbol("log@3", -3)
    # shifted branch: |b+1| < 1
    got = ol.w_unramified(pt(0, 2), 3, 1)
    assert got == FormalLog.symbol("log@3", 3)


def test_w_unramified_matches_oracle():
    for q in (2, 3, 5):
        for eta in (-1, 1):
            for point in ol.enumerate_points(12):
                assert ol.w_unramified(point, q, eta) == ol.w_unramified_oracle(point, q, eta)


def test_w_level_examples():
    assert ol.w_level(pt(0, 0), 1, 3, 1).is_zero()     # b outside the level
    got = ol.w_level(pt(2), 1, 3, 1)
    assert got == FormalLog.symbol("log@3", -3)
    got = ol.w_level(pt(2), 1, 3, -1)
    assert got == FormalLog.symbol("log@3", -1)


def test_w_level_matches_oracle():
    for q in (2, 3, 5):
        for eta in (-1, 1):
            for ordn in range(1, 7):
                for point in ol.enumerate_points(12):
                    assert ol.w_level(point, ordn, q, eta) == \
                        ol.w_level_oracle(point, ordn, q, eta)


def test_w_ramified_example():
    # unit b with unit b+1 at conductor exponent one
    val = ol.w_ramified(pt(0, 0), 1, 3, eta_minus1=1, eta_bb1=1)
    assert val == pytest.approx(-1.0)
    val = ol.w_ramified(pt(0, 0), 1, 3, eta_minus1=-1, eta_bb1=1)
    assert val == pytest.approx(1.0)
    # support cut
    assert ol.w_ramified(pt(-2, -2), 1, 3, 1, 1) == 0.0


def test_w_ramified_bound():
    for q in (2, 3, 5):
        for f in (1, 2, 3):
            for d_v in (0, 1):
                for em1 in (-1, 1):
                    for ebb in (-1, 1):
                        for point in ol.enumerate_points(8):
                            val = abs(ol.w_ramified(point, f, q, em1, ebb, d_v))
                            assert val <= ol.w_ramified_bound(point, f, q) + 1e-12


def test_delta0_plain():
    assert ol.delta0_plain(-1, 1) == 0
    assert ol.delta0_plain(3, 1) == 4
    assert ol.delta0_plain(3, -1) == 0
    assert ol.delta0_plain(4, -1) == 1


def test_w_unramified_stated_bound():
    # |W| <= C log q (ord(b(b+1)) + 1)^2 on the support |b(b+1)| < 1, C fitted
    worst = 0.0
    for q in (2, 3, 5):
        for eta in (-1, 1):
            for point in ol.enumerate_points(12):
                w = abs(ol.w_unramified(point, q, eta).evaluate())
                if point.ord_bb1 <= 0 or point.ordb < 0:
                    assert w == 0.0
                    continue
                env = (point.ord_bb1 + 1) ** 2
                worst = max(worst, w / (env * math.log(q)))
    assert worst <= 1.0


def test_w_level_stated_bound():
    # |W| <= log q (ord(b) + ord(n) + 1)^2 on b in the level
    for q in (2, 3, 5):
        for eta in (-1, 1):
            for ordn in range(1, 7):
                for point in ol.enumerate_points(12):
                    w = abs(ol.w_level(point, ordn, q, eta).evaluate())
                    if point.ordb < ordn:
                        assert w == 0.0
                        continue
                    env = (point.ordb + ordn + 1) ** 2
                    assert w <= env * math.log(q) + 1e-12
