import math
import random
from fractions import Fraction

import pytest

from rtfverify import spectral as sp
from rtfverify.errors import InertViolation, SingularTau
from rtfverify.formal import FormalLog
from rtfverify.ideals import Ideal, Prime, QuadCharData

P3 = Prime("p", 3)
Q2 = Prime("q", 2)

REP0 = sp.LocalRepData(q=3, c=0, Q=Fraction(1, 3))
REP1 = sp.LocalRepData(q=3, c=1, chi=1)
REP2 = sp.LocalRepData(q=3, c=2)


def test_q_poly_examples():
    X = Fraction(2, 7)
    assert sp.q_poly(0, REP2, -1, X) == 1
    assert sp.q_poly(1, REP2, -1, X) == -X
    assert sp.q_poly(1, REP0, -1, X) == -X - Fraction(1, 3)
    assert sp.q_poly(1, REP0, 1, X) == X - Fraction(1, 3)


def test_tau_examples():
    assert sp.tau_jj(0, REP0) == 1
    assert sp.tau_jj(3, REP1) == 1 - Fraction(1, 9)
    assert sp.tau_jj(2, REP0) == (1 - Fraction(1, 9)) * (1 - Fraction(1, 9))


def test_rz_examples():
    X = Fraction(5, 8)
    # degree-two polynomial branch
    assert sp.r_z(REP2, -1, 2, X) == 1 - X + X * X
    assert sp.r_z(REP2, -1, 2, X, "sum") == 1 - X + X * X
    # central vanishing at odd depth
    assert sp.r_z(REP2, -1, 1, Fraction(1)) == 0
    # unramified central value at even depth
    assert sp.r_z(REP0, -1, 2, Fraction(1)) == Fraction(3 + 1, 3 - 1)
    assert sp.r_at_center(REP0, -1, 2) == 2
    assert sp.r_at_center(REP0, -1, 3) == 0


def test_rz_closed_equals_sum_randomised():
    rng = random.Random(3)
    for c in (0, 1, 2, 3):
        for eta in (-1, 1):
            for k in range(1, 9):
                if c == 0:
                    rep = sp.LocalRepData(q=5, c=0, Q=Fraction(rng.randint(-9, 9), 10))
                elif c == 1:
                    rep = sp.LocalRepData(q=5, c=1, chi=rng.choice((1, -1)))
                else:
                    rep = sp.LocalRepData(q=5, c=c)
                for _ in range(5):
                    X = Fraction(rng.randint(-40, 40), rng.randint(1, 20))
                    if X == -1:
                        continue
                    assert sp.r_z(rep, eta, k, X, "closed") == sp.r_z(rep, eta, k, X, "sum")


def test_partial_r_examples():
    assert sp.partial_r(REP2, -1, 2) == 1
    assert sp.partial_r(REP2, 1, 2) == 3
    assert sp.partial_r(REP0, -1, 2) == Fraction(3 + 1, 3 - 1)


def test_partial_r_matches_sum_derivative_and_fd():
    for rep in (REP0, REP1, REP2, sp.LocalRepData(q=2, c=1, chi=-1)):
        for eta in (-1, 1):
            for k in range(1, 9):
                exact = sp.partial_r(rep, eta, k)
                assert exact == sp.partial_r_sum(rep, eta, k)
                h = 1e-6
                q = rep.q
                fd = (sp.r_z(rep, eta, k, float(q) ** -h, "sum")
                      - sp.r_z(rep, eta, k, float(q) ** h, "sum")) / (2 * h) * (-1 / math.log(q))
                assert fd == pytest.approx(float(exact), rel=1e-7, abs=1e-9)


def test_c1_plus_closed_form_regression():
    # the inner sum must run over X^(j-1); the X^j variant breaks against the
    # defining sum already at k = 1
    rep = sp.LocalRepData(q=3, c=1, chi=1)
    X = Fraction(2)
    cq = Fraction(1, 3)
    wrong = 1 + (X - cq) / (1 + cq) * sum(X ** j for j in range(1, 2))
    right = sp.r_z(rep, 1, 1, X, "sum")
    assert sp.r_z(rep, 1, 1, X, "closed") == right
    assert wrong != right


def test_singular_tau_rejected():
    rep = sp.LocalRepData(q=3, c=0, Q=Fraction(1))
    with pytest.raises(SingularTau):
        sp.r_z(rep, -1, 2, Fraction(1, 2))
    with pytest.raises(SingularTau):
        sp.partial_r(rep, -1, 1)


ETA = QuadCharData.build(0, [1], unram={P3: -1, Q2: -1})


def test_w_dw_examples():
    # level equals conductor: empty product
    reps = {P3: sp.LocalRepData(q=3, c=2)}
    w, dw = sp.w_and_dw(reps, Ideal.of({P3: 2}), ETA)
    assert (w, dw) == (1, FormalLog.zero())
    # odd excess: w vanishes, dw survives
    w, dw = sp.w_and_dw(reps, Ideal.of({P3: 3}), ETA)
    assert w == 0 and dw == FormalLog.symbol("log@3", 1)
    # even excess of one square at a deep place
    w, dw = sp.w_and_dw(reps, Ideal.of({P3: 4}), ETA)
    assert w == 1 and dw == FormalLog.symbol("log@3", -1)


def test_w_dw_against_product_rule():
    rng = random.Random(11)
    for _ in range(40):
        reps = {}
        exps = {}
        for p in (P3, Q2):
            c = rng.choice((0, 1, 2))
            if c == 0:
                reps[p] = sp.LocalRepData(q=p.q, c=0, Q=Fraction(rng.randint(-7, 7), 10))
            elif c == 1:
                reps[p] = sp.LocalRepData(q=p.q, c=1, chi=rng.choice((1, -1)))
            else:
                reps[p] = sp.LocalRepData(q=p.q, c=2)
            exps[p] = c + rng.randint(0, 4)
        n = Ideal.of(exps)
        assert sp.w_and_dw(reps, n, ETA) == sp.w_and_dw_oracle(reps, n, ETA)


def test_w_dw_inert_guard():
    eta_bad = QuadCharData.build(0, [1], unram={P3: 1})
    reps = {P3: sp.LocalRepData(q=3, c=0, Q=Fraction(0))}
    with pytest.raises(InertViolation):
        sp.w_and_dw(reps, Ideal.of({P3: 2}), eta_bad)


def test_adl_plus_factor_examples():
    eta_triv = QuadCharData.build(0, [1])
    fl = sp.adl_plus_factor(Ideal.unit(), eta_triv)
    assert fl == FormalLog.symbol("logDF", -1)
    assert fl.evaluate({"logDF": 0.0}) == 0.0
    fl = sp.adl_plus_factor(Ideal.of({P3: 2}), eta_triv)
    assert fl == FormalLog.symbol("log@3", -1) + FormalLog.symbol("logDF", -1)


def test_satake_conversion():
    rep = sp.LocalRepData.from_satake(4, complex(math.cos(1.0), math.sin(1.0)))
    assert rep.c == 0
    assert abs(rep.Q) < 1
    # unit-circle parameter gives a real Q
    assert isinstance(rep.Q, float)


def test_rep_validation_and_k_cap():
    with pytest.raises(ValueError):
        sp.LocalRepData(q=3, c=0)
    with pytest.raises(ValueError):
        sp.LocalRepData(q=3, c=1, Q=Fraction(1, 2))
    with pytest.raises(ValueError):
        sp.r_z(REP2, -1, sp.MAX_K + 1, Fraction(1, 2))
