"""Chebyshev/Hecke test functions, unipotent period integrals and measures.

All displayed closed forms here are backed by a numeric contour oracle: the
integrands are periodic in Im(s) with period 4*pi/log q, so the vertical-line
integrals are evaluated over one full period (where the trapezoid rule
converges geometrically).  Per-place moment values carrying the irrational
factor q^(-n/2) are also exposed in a scaled, exactly-rational form for the
main-term assembly.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable

import numpy as np

from .errors import ConvergenceError
from .formal import FormalLog


def chebyshev(n: int, x):
    """X_n(x) = sin((n+1) theta)/sin theta at x = 2 cos theta, extended off
    [-2, 2] by the three-term recurrence (exact for Fraction input)."""
    if n < 0:
        raise ValueError("n >= 0 required")
    a, b = 1, x
    if n == 0:
        return x * 0 + 1 if not isinstance(x, (int, Fraction)) else Fraction(1)
    for _ in range(n - 1):
        a, b = b, x * b - a
    return b


def decompose_alpha(n: int) -> tuple[list[int], int]:
    """alpha_[p^n] = sum_m alpha^(m) over the listed m, plus the constant.

    Returns (ms, const) with ms = [n, n-2, ..., (1 or 2)] and const =
    -delta(n even); alpha^(m)(s) = q^(ms/2) + q^(-ms/2).
    """
    if n < 0:
        raise ValueError("n >= 0 required")
    ms = [n - 2 * m for m in range(n // 2 + 1)]
    const = -1 if n % 2 == 0 else 0
    return ms, const


def laurent_alpha_pn(n: int) -> dict[int, int]:
    """Exponent dict of X_n(z + 1/z) as a Laurent polynomial in z."""
    return {n - 2 * j: 1 for j in range(n + 1)}


def laurent_decomposition(n: int) -> dict[int, int]:
    """Exponent dict of sum_m alpha^(m) + const from decompose_alpha."""
    ms, const = decompose_alpha(n)
    out: dict[int, int] = {}
    for m in ms:
        out[m] = out.get(m, 0) + 1
        out[-m] = out.get(-m, 0) + 1
    out[0] = out.get(0, 0) + const
    return {e: c for e, c in out.items() if c}


# ---------------------------------------------------------------------------
# unipotent moments: closed forms


def unip_u_scaled(eta_val: int, n: int) -> Fraction:
    """q^(n/2) * U-moment of alpha_[p^n]: exactly rational."""
    if eta_val == -1:
        return Fraction(-1) if n % 2 == 0 else Fraction(0)
    return Fraction(-(n + 1))


def unip_du_scaled(eta_val: int, n: int) -> Fraction:
    """q^(n/2) / log q * dU-moment of alpha_[p^n]: exactly rational."""
    if eta_val == -1:
        return Fraction((-1) ** n * ((n + 1) // 2))
    return Fraction(n * (n + 1), 2)


def unip_moments(q: int, eta_val: int, n: int) -> tuple[float, FormalLog]:
    """(U, dU) for alpha_[p^n]; dU is a FormalLog in log q (its coefficient
    q^(-n/2) * integer is exact only for even n, otherwise a float Fraction)."""
    scale = Fraction(1, q ** (n // 2)) if n % 2 == 0 else Fraction(q ** (-n / 2))
    u = float(unip_u_scaled(eta_val, n)) * q ** (-n / 2)
    du = FormalLog.log_integer(q, scale * unip_du_scaled(eta_val, n))
    return u, du


def dunip_scaled(eta_val: int, m: int) -> Callable[[int], Fraction]:
    """q^(m/2)/log q * dU-moment of the basis function alpha^(m), as a
    function of q (rational)."""
    def val(q: int) -> Fraction:
        if m == 0:
            return Fraction(0)
        if eta_val == -1:
            inner = Fraction(q - 1, 2) * m * (-1) ** m - Fraction(3 * q + 1, 4) * (-1) ** m + Fraction(1 - q, 4)
        else:
            inner = Fraction((m - 1) * (m - 2), 2) * q - Fraction(m * (m + 1), 2)
        return -inner
    return val


def dunip(q: int, eta_val: int, m: int) -> FormalLog:
    """Closed form of the dU-moment of alpha^(m) (zero at m = 0)."""
    scale = Fraction(1, q ** (m // 2)) if m % 2 == 0 else Fraction(q ** (-m / 2))
    return FormalLog.log_integer(q, scale * dunip_scaled(eta_val, m)(q))


# ---------------------------------------------------------------------------
# kernels and the period-contour oracle


def upsilon_kernel(q: int, eta_val: int, s: complex) -> complex:
    return 1.0 / ((1 - eta_val * q ** (-(1 + s) / 2)) * (1 - q ** ((1 + s) / 2)))


def dunip_kernel(q: int, eta_val: int, s: complex) -> complex:
    return (
        eta_val * math.log(q) * q ** (-(s + 1))
        / ((1 - eta_val * q ** (-(s + 1) / 2)) ** 2 * (1 - q ** (-(s + 1) / 2)))
    )


def upsilon_over_unip_kernel(q: int, eta_val: int, s: complex) -> complex:
    return upsilon_kernel(q, eta_val, s) * math.log(q) / (1 - eta_val * q ** ((s + 1) / 2))


def kernel_identity_lhs(q: int, eta_val: int, Y: Fraction) -> Fraction:
    """Upsilon/(1 - eta Y) as an exact rational function of Y = q^((s+1)/2)."""
    ups = Fraction(1) / ((1 - Fraction(eta_val) / Y) * (1 - Y))
    return ups / (1 - eta_val * Y)


def kernel_identity_rhs(q: int, eta_val: int, Y: Fraction) -> Fraction:
    """eta * Y^-2 (1 - eta/Y)^-2 (1 - 1/Y)^-1, the second unipotent integrand."""
    return Fraction(eta_val) / (Y * Y * (1 - Fraction(eta_val) / Y) ** 2 * (1 - Fraction(1) / Y))


_KERNELS = {
    "upsilon": upsilon_kernel,
    "dunip_kernel": dunip_kernel,
    "upsilon_over_unip": upsilon_over_unip_kernel,
}


def alpha_pn_at(q: int, n: int) -> Callable[[complex], complex]:
    def f(s):
        z = q ** (s / 2)
        return chebyshev(n, z + 1 / z)
    return f


def alpha_basis_at(q: int, m: int) -> Callable[[complex], complex]:
    def f(s: complex) -> complex:
        z = q ** (s / 2)
        return z ** m + z ** (-m)
    return f


def period_integral(kernel: str, q: int, eta_val: int,
                    alpha: Callable[[complex], complex],
                    sigma: float = 0.7, steps: int = 4096) -> complex:
    """(1/2 pi i) integral of kernel * alpha * dmu over one vertical period.

    dmu(s) = (log q / 2)(q^((1+s)/2) - q^((1-s)/2)) ds; the result is compared
    across a doubled refinement and must agree to 1e-9.
    """
    if sigma <= 0:
        raise ValueError("sigma > 0 required")
    if steps < 2 ** 10:
        raise ValueError("steps >= 1024 required")
    kern = _KERNELS[kernel]
    v1 = _period_pass(kern, q, eta_val, alpha, sigma, steps)
    v2 = _period_pass(kern, q, eta_val, alpha, sigma, 2 * steps)
    if abs(v1 - v2) > 1e-9:
        raise ConvergenceError(f"period integral refinement gap {abs(v1 - v2):.3e}")
    return v2


def _period_pass(kern, q, eta_val, alpha, sigma, steps) -> complex:
    T = 4 * math.pi / math.log(q)
    s = sigma + 1j * T * (np.arange(steps) + 0.5) / steps
    terms = kern(q, eta_val, s) * alpha(s) * (math.log(q) / 2) * (q ** ((1 + s) / 2) - q ** ((1 - s) / 2))
    # numpy pairwise summation over the fixed grid order: deterministic to the
    # last bit for a given step count
    acc = complex(np.sum(terms))
    return acc * (1j * T / steps) / (2j * math.pi)


# ---------------------------------------------------------------------------
# measures on [-2, 2]


def st_density(x: np.ndarray) -> np.ndarray:
    """Semicircle density of d mu^ST on [-2, 2]."""
    return np.sqrt(np.maximum(4 - x * x, 0.0)) / (2 * math.pi)


def plancherel_factor(q: int, eta_val: int, x: np.ndarray) -> np.ndarray:
    A = q ** 0.5 + q ** -0.5
    if eta_val == 1:
        return (q - 1) / (A - x) ** 2
    return (q + 1) / (A * A - x * x)


def st_moment(q: int, eta_val: int, n: int, steps: int = 20001) -> float:
    """Moment of X_n against the local measure, by theta-substitution
    quadrature (x = 2 cos theta kills the endpoint singularity)."""
    v1 = _st_pass(q, eta_val, n, steps)
    v2 = _st_pass(q, eta_val, n, 2 * steps + 1)
    if abs(v1 - v2) > 1e-9:
        raise ConvergenceError(f"measure moment refinement gap {abs(v1 - v2):.3e}")
    return v2


def _st_pass(q: int, eta_val: int, n: int, steps: int) -> float:
    theta = np.linspace(0.0, math.pi, steps)
    x = 2 * np.cos(theta)
    # X_n(2 cos t) = sin((n+1)t)/sin t; finite limits at the endpoints
    num = np.sin((n + 1) * theta)
    den = np.sin(theta)
    Xn = np.where(den > 1e-12, num / np.where(den > 1e-12, den, 1.0), (n + 1) * np.cos(theta) ** n)
    # d mu^ST = (2/pi) sin^2 theta d theta
    integrand = Xn * plancherel_factor(q, eta_val, x) * (2 / math.pi) * np.sin(theta) ** 2
    return float(np.trapezoid(integrand, theta))


def st_moment_expected(q: int, eta_val: int, n: int) -> float:
    """Derived closed values (asserted only through the quadrature oracle)."""
    if eta_val == -1:
        return q ** (-n / 2) if n % 2 == 0 else 0.0
    return (n + 1) * q ** (-n / 2)


def measure_weight(q: int, eta_val: int, chi: Callable[[np.ndarray], np.ndarray],
                   steps: int = 200001) -> float:
    """integral of chi d mu_(v, eta_v), for normalising bump test functions."""
    theta = np.linspace(0.0, math.pi, steps)
    x = 2 * np.cos(theta)
    integrand = chi(x) * plancherel_factor(q, eta_val, x) * (2 / math.pi) * np.sin(theta) ** 2
    return float(np.trapezoid(integrand, theta))


def cheb_coefficients(chi: Callable[[np.ndarray], np.ndarray], M: int,
                      steps: int = 1 << 15) -> np.ndarray:
    """hat c(n) = integral chi X_n d mu^ST for n = 0..M (orthonormal basis)."""
    theta = np.linspace(0.0, math.pi, steps + 1)
    x = 2 * np.cos(theta)
    vals = chi(x) * (2 / math.pi) * np.sin(theta)
    ns = np.arange(M + 1)
    # sin((n+1) theta) sin(theta) folded into vals: one matrix product
    sines = np.sin(np.outer(ns + 1, theta))
    integrand = sines * vals[None, :]
    return np.trapezoid(integrand, theta, axis=1)


def cheb_truncate(chi: Callable[[np.ndarray], np.ndarray], M: int,
                  grid: int = 2001) -> tuple[np.ndarray, float]:
    """Coefficients hat c(0..M) and the sup-norm of chi - chi^M on a grid."""
    coef = cheb_coefficients(chi, M)
    xs = np.linspace(-2.0, 2.0, grid)
    theta = np.arccos(np.clip(xs / 2, -1, 1))
    approx = np.zeros_like(xs)
    den = np.sin(theta)
    safe = den > 1e-9
    for n in range(M + 1):
        Xn = np.where(safe, np.sin((n + 1) * theta) / np.where(safe, den, 1.0),
                      (n + 1) * np.sign(np.cos(theta)) ** n)
        approx += coef[n] * Xn
    sup_err = float(np.max(np.abs(chi(xs) - approx)))
    return coef, sup_err


def smooth_bump(center: float = 0.0, halfwidth: float = 1.5) -> Callable[[np.ndarray], np.ndarray]:
    """C-infinity bump supported in (center - hw, center + hw) subset (-2, 2)."""
    def f(x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        u = (x - center) / halfwidth
        inside = np.abs(u) < 1
        out = np.zeros_like(x)
        uu = np.where(inside, u, 0.0)
        out[inside] = np.exp(-1.0 / (1.0 - uu[inside] ** 2))
        return out
    return f
