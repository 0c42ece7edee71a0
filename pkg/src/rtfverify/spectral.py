"""Local spectral weight polynomials and their central z-derivatives.

The defining data at a finite place is a conductor exponent c and, for c <= 1,
a Satake-type parameter: Q in (-1, 1) when c = 0 (rational Q keeps every test
exact; a unit-modulus Satake number a gives Q = (a + 1/a)/(q^[1/2] + q^[-1/2])),
or the unramified sign chi(varpi) = +-1 when c = 1.

Two independent evaluation paths are maintained for r^(z): the defining sum of
weight-polynomial ratios, and per-case closed forms.  The (c=1, eta=+1) closed
form and its derivative are implemented with the corrected inner sum
sum_[j=1..k] X^(j-1); the variant with X^j fails against the defining sum.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .errors import InertViolation, SingularTau
from .formal import FormalLog
from .ideals import Ideal, Prime, QuadCharData, omega_pair, square_decompose

MAX_K = 64

Num = Fraction | float | complex


@dataclass(frozen=True)
class LocalRepData:
    """Local representation datum at a place of residue cardinality q."""

    q: int
    c: int
    Q: Fraction | float | None = None   # c = 0
    chi: int | None = None              # c = 1

    def __post_init__(self):
        if self.c < 0 or self.q < 2:
            raise ValueError("need c >= 0 and q >= 2")
        if self.c == 0:
            if self.Q is None or self.chi is not None:
                raise ValueError("c=0 wants Q and no chi")
        elif self.c == 1:
            if self.chi not in (1, -1) or self.Q is not None:
                raise ValueError("c=1 wants chi=+-1 and no Q")
        else:
            if self.Q is not None or self.chi is not None:
                raise ValueError("c>=2 carries no parameter")

    @classmethod
    def from_satake(cls, q: int, a: complex) -> "LocalRepData":
        Q = (a + 1 / a) / (q ** 0.5 + q ** -0.5)
        return cls(q=q, c=0, Q=Q.real if abs(Q.imag) < 1e-14 else Q)


def _check_k(k: int):
    if not 0 <= k <= MAX_K:
        raise ValueError(f"k must lie in [0, {MAX_K}]")


def q_poly(j: int, rep: LocalRepData, eta_val: int, X: Num) -> Num:
    """The weight polynomial Q_j(eta, X) of the local datum, evaluated at X."""
    if j < 0:
        raise ValueError("j >= 0 required")
    q, c = rep.q, rep.c
    if j == 0:
        return _one_like(X)
    if c == 0 and j == 1:
        return eta_val * X - rep.Q
    if c == 1:
        return eta_val ** (j - 1) * X ** (j - 1) * (eta_val * X - Fraction(rep.chi, q))
    if c == 0:
        # (a q^(1/2) eta X - 1)(a^(-1) q^(1/2) eta X - 1), rational in Q
        quad = q * X * X - eta_val * rep.Q * (q + 1) * X + 1
        return Fraction(1, q) * eta_val ** (j - 2) * X ** (j - 2) * quad
    return eta_val ** j * X ** j


def q_poly_one(j: int, rep: LocalRepData) -> Num:
    """Q_j evaluated for the trivial character at X = 1 (always real)."""
    return q_poly(j, rep, 1, _one_like(rep.Q if rep.Q is not None else Fraction(1)))


def _one_like(X: Num):
    return Fraction(1) if isinstance(X, (int, Fraction)) else 1.0


def tau_jj(j: int, rep: LocalRepData) -> Num:
    if j < 0:
        raise ValueError("j >= 0 required")
    if j == 0 or rep.c >= 2:
        return Fraction(1)
    if rep.c == 1:
        return 1 - Fraction(1, rep.q ** 2)
    if j == 1:
        return 1 - rep.Q * rep.Q
    return (1 - rep.Q * rep.Q) * (1 - Fraction(1, rep.q ** 2))


def _guard_tau(rep: LocalRepData, k: int):
    if rep.c == 0 and k >= 1:
        t = 1 - rep.Q * rep.Q
        if t == 0:
            raise SingularTau("1 - Q^2 vanishes; boundary Satake parameter rejected")


def r_z(rep: LocalRepData, eta_val: int, k: int, X: Num, path: str = "closed") -> Num:
    """r^(z) at X = q^(1/2 - z), with k = ord_v(n f_pi^-1) >= 1.

    path="sum" evaluates the defining sum of polynomial ratios; path="closed"
    the per-case rational expressions.  Both agree identically.
    """
    _check_k(k)
    if k < 1:
        raise ValueError("k >= 1 required")
    if eta_val not in (1, -1):
        raise ValueError("eta_val must be +-1")
    _guard_tau(rep, k)
    if path == "sum":
        return sum(
            (q_poly_one(j, rep) * q_poly(j, rep, eta_val, X)) / tau_jj(j, rep)
            for j in range(k + 1)
        )
    if path != "closed":
        raise ValueError(f"unknown path {path!r}")
    q = rep.q
    if rep.c == 0:
        Q = rep.Q
        if eta_val == -1:
            quad = 1 + Q * (q + 1) * X + q * X * X
            return (1 - X) / (1 + Q) + quad * (1 - (-X) ** (k - 1)) / ((q - 1) * (1 + Q) * (1 + X))
        quad = 1 - Q * (q + 1) * X + q * X * X
        geo = sum(X ** (j - 2) for j in range(2, k + 1)) if k >= 2 else 0
        return (1 + X) / (1 + Q) + quad * geo / ((q - 1) * (1 + Q))
    if rep.c == 1:
        cq = Fraction(rep.chi, q)
        if eta_val == -1:
            return 1 - (X + cq) / (1 + cq) * (1 - (-1) ** k * X ** k) / (1 + X)
        # corrected inner sum: j runs 1..k with X^(j-1)
        return 1 + (X - cq) / (1 + cq) * sum(X ** (j - 1) for j in range(1, k + 1))
    if eta_val == -1:
        return (1 + (-1) ** k * X ** (k + 1)) / (1 + X)
    return sum(X ** j for j in range(k + 1))


def r_at_center(rep: LocalRepData, eta_val: int, k: int) -> Fraction:
    """r^(z) at the center z = 1/2 (so X = 1); vanishes for odd k when
    eta(varpi) = -1."""
    if eta_val == -1:
        half = Fraction(1 + (-1) ** k, 2)
        if rep.c >= 1:
            return half
        _guard_tau(rep, k)
        return half * Fraction(rep.q + 1, rep.q - 1)
    return r_z(rep, eta_val, k, Fraction(1), path="sum")


def partial_r(rep: LocalRepData, eta_val: int, k: int) -> Num:
    """-(1/log q) d/dz r^(z) at z = 1/2; equals dr/dX at X = 1."""
    _check_k(k)
    if k < 1:
        raise ValueError("k >= 1 required")
    _guard_tau(rep, k)
    q, c = rep.q, rep.c
    sgn = (-1) ** k
    if eta_val == -1:
        if c == 0:
            Q = rep.Q
            return (
                -1 / (1 + Q)
                + Fraction(1 + sgn, 2) * (2 * q + (q + 1) * Q) / ((q - 1) * (1 + Q))
                + Fraction(sgn * (2 * k - 3) - 1, 4) * Fraction(q + 1, q - 1)
            )
        if c == 1:
            cq = Fraction(rep.chi, q)
            return -Fraction(1 - sgn, 2) / (1 + cq) + Fraction(1 + sgn * (2 * k - 1), 4)
        return Fraction(sgn * (2 * k + 1) - 1, 4)
    if c == 0:
        Q = rep.Q
        return (
            1 / (1 + Q)
            + (k - 1) * (2 * q - (q + 1) * Q) / ((q - 1) * (1 + Q))
            + Fraction((k - 2) * (k - 1), 2) * (q + 1) * (1 - Q) / ((q - 1) * (1 + Q))
        )
    if c == 1:
        # corrected from the defining sum; the k(k+1)/2 variant fails it
        cq = Fraction(rep.chi, q)
        return k / (1 + cq) + (1 - cq) / (1 + cq) * Fraction(k * (k - 1), 2)
    return Fraction(k * (k + 1), 2)


def partial_r_sum(rep: LocalRepData, eta_val: int, k: int) -> Num:
    """Independent exact derivative: term-by-term d/dX of the defining sum."""
    _check_k(k)
    _guard_tau(rep, k)
    total: Num = Fraction(0)
    for j in range(1, k + 1):
        dq = _dq_poly_at_one(j, rep, eta_val)
        total = total + q_poly_one(j, rep) * dq / tau_jj(j, rep)
    return total


def _dq_poly_at_one(j: int, rep: LocalRepData, eta_val: int) -> Num:
    """d/dX Q_j(eta, X) at X = 1, from the explicit polynomial cases."""
    q, c = rep.q, rep.c
    e = eta_val
    if c == 0 and j == 1:
        return Fraction(e)
    if c == 1:
        cq = Fraction(rep.chi, q)
        return e ** (j - 1) * ((j - 1) * (e - cq) + e)
    if c == 0:
        quad_at_1 = q - e * rep.Q * (q + 1) + 1
        dquad_at_1 = 2 * q - e * rep.Q * (q + 1)
        return Fraction(1, q) * e ** (j - 2) * ((j - 2) * quad_at_1 + dquad_at_1)
    return Fraction(j) * e ** j


# ---------------------------------------------------------------------------
# global w and its derivative


def w_and_dw(reps: Mapping[Prime, LocalRepData], n: Ideal, eta: QuadCharData) -> tuple[Fraction, FormalLog]:
    """(w, dw) for a representation of conductor f_pi = prod p^c dividing n.

    Requires the totally inert condition tilde_eta = -1 on S(n).  w vanishes
    unless n f_pi^-1 is a square; dw follows the two vanishing cases.
    """
    for p in n.support:
        if eta.tilde_eta(p) != -1:
            raise InertViolation(f"tilde_eta({p.id}) != -1 on the level support")
    f_pi = Ideal.of({p: rep.c for p, rep in reps.items() if rep.c > 0})
    if not f_pi.divides(n):
        raise ValueError("conductor of the representation must divide the level")
    m = n.divide(f_pi)
    for p in m.support:
        if p not in reps:
            raise ValueError(f"missing local datum at {p.id}")
    m0, b = square_decompose(m)
    odd = m0.support
    w_val = omega_pair(n, m)
    if len(odd) == 0:
        dw = FormalLog.zero()
        for p in b.support:
            dw = dw + FormalLog.log_integer(p.q, -b.ord(p))
        return w_val, dw * w_val
    if len(odd) == 1:
        u = odd[0]
        rep = reps[u]
        ordb = b.ord(u)
        if rep.c == 0:
            extra = (rep.q - 1) / ((rep.q + 1) * (1 + rep.Q))
        elif rep.c == 1:
            extra = Fraction(rep.q, rep.q + rep.chi)
        else:
            extra = Fraction(1)
        return Fraction(0), FormalLog.log_integer(u.q, (ordb + extra) * w_val)
    return Fraction(0), FormalLog.zero()


def w_and_dw_oracle(reps: Mapping[Prime, LocalRepData], n: Ideal, eta: QuadCharData) -> tuple[Fraction, FormalLog]:
    """Product/product-rule evaluation over the places, via r and partial_r."""
    for p in n.support:
        if eta.tilde_eta(p) != -1:
            raise InertViolation(f"tilde_eta({p.id}) != -1 on the level support")
    f_pi = Ideal.of({p: rep.c for p, rep in reps.items() if rep.c > 0})
    m = n.divide(f_pi)
    places = [(p, reps[p], m.ord(p)) for p in m.support]
    r_vals = {p: r_at_center(rep, -1, k) for p, rep, k in places}
    w_val = Fraction(1)
    for p, _, _ in places:
        w_val *= r_vals[p]
    dw = FormalLog.zero()
    for p, rep, k in places:
        rest = Fraction(1)
        for p2, _, _ in places:
            if p2 != p:
                rest *= r_vals[p2]
        # d/dz r = -log q * partial_r
        dw = dw + FormalLog.log_integer(p.q, -partial_r(rep, -1, k) * rest)
    return w_val, dw


def adl_plus_factor(f_pi: Ideal, eta: QuadCharData) -> FormalLog:
    """The derivative factor the functional equation forces on the plus part:
    -(1/2) log(norm(f_pi) norm(f_eta)^2 D_F^2)."""
    out = FormalLog.zero()
    if f_pi.norm > 1:
        out = out + FormalLog.log_integer(f_pi.norm, Fraction(-1, 2))
    feta = eta.conductor
    if feta.norm > 1:
        out = out + FormalLog.log_integer(feta.norm, -1)
    return out + FormalLog.symbol("logDF", -1)
