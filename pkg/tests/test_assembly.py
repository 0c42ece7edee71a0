import math
import random
from fractions import Fraction

import pytest

from rtfverify import assembly as asm
from rtfverify import ntransform as nt
from rtfverify import verify
from rtfverify.errors import SignClassError
from rtfverify.formal import FRAKC, LOG_DF, LPL, FormalLog
from rtfverify.ideals import Ideal, Prime, QuadCharData

P3 = Prime("p", 3)
Q2 = Prime("q", 2)
R5 = Prime("r", 5)

ETA_MINUS = QuadCharData.build(1, [-1], unram={P3: -1, Q2: -1, R5: -1})
ETA_PLUS_CLASS = QuadCharData.build(0, [1], unram={P3: -1, Q2: -1, R5: -1})


def test_c_l_examples():
    assert asm.c_l(asm.WeightData((6,))) == pytest.approx(12 * math.pi)
    assert asm.c_l(asm.WeightData((4,))) == pytest.approx(4 * math.pi)
    assert asm.c_l(asm.WeightData((6, 6))) == pytest.approx(144 * math.pi ** 2)
    big = asm.c_l(asm.WeightData((400,)))
    assert math.isfinite(big) and big > 0


def test_frak_c_examples():
    eta = QuadCharData.build(0, [1])
    assert asm.frak_c(asm.WeightData((6,)), eta) == pytest.approx(0.6390273, abs=1e-6)
    eta_neg = QuadCharData.build(1, [-1])
    assert asm.frak_c(asm.WeightData((6,)), eta_neg) == pytest.approx(0.6390273 - math.log(2), abs=1e-6)
    assert asm.frak_c(asm.WeightData((4,)), eta) == pytest.approx(
        1 - 0.5 * math.log(math.pi) - 0.5 * asm.EULER_GAMMA)


def test_nu_and_x_examples():
    assert asm.nu_of_n(Ideal.of({P3: 1})) == 1
    assert asm.nu_of_n(Ideal.of({P3: 2})) == Fraction(5, 6)
    x = asm.x_of_n(Ideal.of({Q2: 2, P3: 1}))
    assert x == FormalLog.symbol("log@2", Fraction(1, 2) + Fraction(1, 1)) \
        + FormalLog.symbol("log@3", Fraction(1, 3) + Fraction(1, 4))


def test_nu_agrees_with_transform_of_one():
    rng = random.Random(2)
    for _ in range(40):
        n = Ideal.of({p: rng.randint(0, 6) for p in (P3, Q2, R5)})
        assert asm.nu_of_n(n) == nt.closed_power(n, 0)


CONSTS = asm.AnalyticConsts(D_F=4.0, L1_eta=0.7, Lp_over_L=0.25)
W6 = asm.WeightData((6,))


def test_main_AL_examples():
    n = Ideal.of({P3: 2})
    base = asm.main_AL(n, Ideal.unit(), ETA_PLUS_CLASS, CONSTS, W6)
    assert base == pytest.approx(4 * 4.0 ** 1.5 * 0.7 * float(Fraction(5, 6)))
    # odd inert exponent in the test ideal kills the term
    assert asm.main_AL(n, Ideal.of({Q2: 1}), ETA_PLUS_CLASS, CONSTS, W6) == 0.0
    # even inert exponent contributes norm(a)^(-1/2)
    with_a = asm.main_AL(n, Ideal.of({Q2: 2}), ETA_PLUS_CLASS, CONSTS, W6)
    assert with_a == pytest.approx(base / 2)


def test_main_AL_sign_guard():
    with pytest.raises(SignClassError):
        asm.main_AL(Ideal.of({P3: 2}), Ideal.unit(), ETA_MINUS, CONSTS, W6)
    with pytest.raises(SignClassError):
        # level and test ideal must be coprime
        asm.main_AL(Ideal.of({P3: 2}), Ideal.of({P3: 1}), ETA_PLUS_CLASS, CONSTS, W6)


def test_main_ADL_bracket_example():
    n = Ideal.of({P3: 2})
    bracket = asm.main_ADL_bracket(n, Ideal.unit(), ETA_MINUS)
    want = (FormalLog.symbol("log@3", 1)
            + FormalLog.symbol(LOG_DF, Fraction(5, 6))
            + FormalLog.symbol(LPL, Fraction(5, 6))
            + FormalLog.symbol(FRAKC, Fraction(5, 6)))
    assert bracket == want


def test_main_ADL_refuses_plus_class():
    with pytest.raises(SignClassError):
        asm.main_ADL_bracket(Ideal.of({P3: 2}), Ideal.unit(), ETA_PLUS_CLASS)


def test_main_ADL_correction_term():
    # one odd inert exponent on the test ideal: only the correction survives,
    # with coefficient (n_v + 1)/2 log q_v (the n_v + 1/2 variant breaks the
    # kernel identity below)
    n = Ideal.of({P3: 2})
    a = Ideal.of({Q2: 1})
    bracket = asm.main_ADL_bracket(n, a, ETA_MINUS)
    assert bracket == FormalLog.symbol("log@2", Fraction(5, 6) * Fraction(1))
    a3 = Ideal.of({Q2: 3})
    assert asm.main_ADL_bracket(n, a3, ETA_MINUS) == FormalLog.symbol("log@2", Fraction(5, 6) * 2)
    # two odd inert exponents: everything dies
    eta = QuadCharData.build(1, [-1], unram={P3: -1, Q2: -1, R5: -1})
    a2 = Ideal.of({Q2: 1, R5: 1})
    assert asm.main_ADL_bracket(n, a2, eta).is_zero()


def test_geom_kernel_equals_main_ADL_fixed_cases():
    cases = [
        (Ideal.of({P3: 2}), Ideal.unit()),
        (Ideal.of({P3: 2}), Ideal.of({Q2: 2})),
        (Ideal.of({P3: 4, Q2: 1}), Ideal.of({R5: 3})),
        (Ideal.of({P3: 2}), Ideal.of({Q2: 1, R5: 2})),
    ]
    for n, a in cases:
        sign = (-1) ** ETA_MINUS.eps * ETA_MINUS.tilde_eta_ideal(n)
        if sign != -1:
            n = n * Ideal.of({n.support[0]: 1})
        assert asm.geom_kernel_bracket(n, a, ETA_MINUS) == asm.main_ADL_bracket(n, a, ETA_MINUS)


def test_identity_at_unit_level():
    # with eps odd the unit ideal itself sits in the minus class; the
    # non-degenerate kernel bracket still matches the displayed main term
    n = Ideal.unit()
    for a in (Ideal.unit(), Ideal.of({Q2: 2}), Ideal.of({Q2: 1, R5: 2})):
        assert asm.geom_kernel_bracket(n, a, ETA_MINUS) == asm.main_ADL_bracket(n, a, ETA_MINUS)


def test_geom_kernel_reduces_to_plus_shape_at_unit_a():
    # with a = O the bracket is nu(n) times the scalar core
    n = Ideal.of({P3: 2})
    bracket = asm.geom_kernel_bracket(n, Ideal.unit(), ETA_MINUS)
    nu = asm.nu_of_n(n)
    assert bracket.coeffs[LPL] == nu
    assert bracket.coeffs[FRAKC] == nu


def test_main_term_value_evaluation():
    n = Ideal.of({P3: 2})
    val = asm.main_ADL_value(n, Ideal.unit(), ETA_MINUS, CONSTS, W6)
    bracket = asm.main_ADL_bracket(n, Ideal.unit(), ETA_MINUS)
    scale = 4 * 4.0 ** 1.5 * 0.7
    assert val == pytest.approx(scale * bracket.evaluate(CONSTS.bindings(W6, ETA_MINUS)))


def test_degenerate_terms():
    w = asm.WeightData((6,))
    ndlog, nd = asm.degenerate_D(Ideal.of({P3: 1}), ETA_MINUS, w)
    assert ndlog.is_zero() and nd == 0
    ndlog, nd = asm.degenerate_D(Ideal.of({P3: 2}), ETA_MINUS, w)
    assert ndlog.is_zero()
    assert abs(nd) == pytest.approx(1 / 6)
    # i^(l tilde) defaults to i^(sum l): purely real here
    assert nd.imag == pytest.approx(0.0)
    _, nd_unit = asm.degenerate_D(Ideal.unit(), ETA_MINUS, w, i_l_tilde=1j)
    assert nd_unit == pytest.approx(-1j)


def test_prefactor_cancellation():
    for n_s in range(4):
        for eps in range(3):
            pref = asm.geom_prefactor(n_s, eps)
            assert pref.rational == Fraction(4 * (-1) ** n_s)
            assert pref.d_pow == Fraction(3, 2)
            assert pref.g_pow == 0


def test_error_bound_audit():
    n = Ideal.of({P3: 4, Q2: 1})
    rep = asm.error_bound_audit(n, c=2.0, eps=0.1)
    assert rep["pairs"] == len(asm.enumerate_bu_pairs(n))
    assert rep["zeta_ok"]
    assert rep["sum_cl12_3"] <= 3.0 * rep["zeta_prefactor"] * rep["x_n"]
    # squarefree level times one extra place: small exact enumeration
    small = asm.enumerate_bu_pairs(Ideal.of({P3: 1, Q2: 1}))
    assert {(str(b), u.id) for b, u in small} == {("O", "p"), ("O", "q")}


def test_error_bound_sweep_bounded():
    for q in (2, 3):
        p = Prime("p", q)
        fits = []
        for k in range(1, 7):
            n = Ideal.of({p: 2 * k})
            rep = asm.error_bound_audit(n, c=1.0, eps=0.05)
            fits.append(rep["fit_cl12_2"])
        assert max(fits) <= 4 * min(fits) + 4


def test_weight_and_consts_validation():
    with pytest.raises(ValueError):
        asm.WeightData((5,))
    with pytest.raises(ValueError):
        asm.WeightData(())
    with pytest.raises(ValueError):
        asm.AnalyticConsts(D_F=0.5)
    with pytest.raises(ValueError):
        asm.AnalyticConsts(L1_eta=0.0)
    assert asm.WeightData((6, 8)).c_exponent == pytest.approx(1.0)


def test_henkei_wiring_small_instance():
    eta = QuadCharData.build(0, [1], unram={P3: -1})
    n = Ideal.of({P3: 2})
    al_star = nt.ArithFn(lambda m: Fraction(3))
    al_dw = nt.ArithFn(lambda m: Fraction(1, 2))
    adl_star = nt.ArithFn(lambda m: Fraction(5, 4))
    G, D, n_s = Fraction(2), Fraction(3), 1
    pref = Fraction(2 * (-1) ** (n_s + eta.eps)) * D / G

    def w_geom(m):
        tot = (asm._to_formal(nt.convolve_omega(adl_star, m))
               + nt.convolve_omega(asm.adl_w_plus_weight(al_star, eta), m)
               + FormalLog.symbol(LOG_DF, nt.convolve_omega(al_star, m))
               + asm._to_formal(al_dw(m)))
        return tot * (1 / pref)

    got = asm.henkei_adl_star(n, nt.ArithFn(w_geom), al_star, al_dw, eta, G, D, n_s)
    assert got == FormalLog.of_const(Fraction(5, 4))


def test_random_minus_config_wellformed():
    rng = random.Random(9)
    for _ in range(30):
        eta, n, a = verify.random_minus_config(rng)
        assert (-1) ** eta.eps * eta.tilde_eta_ideal(n) == -1
        assert not (set(n.support) & set(a.support))
