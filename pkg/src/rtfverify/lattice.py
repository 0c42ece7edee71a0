"""Lattice sums over embedded fractional ideals of Q and real quadratic fields.

theta(Lambda) sums prod_j (1 + |x_j|)^(-l_j/2) over nonzero lattice points.
Enumeration is exact over integer coefficient boxes; truncation tails carry a
rigorous ball-packing bound (every lattice point owns a disjoint ball of
radius r(Lambda)) plus, in rank one, a sharper integral estimate.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy import integrate

from .errors import ConvergenceError, DomainError, TailTooLarge, UnsupportedField
from .orbital_arch import j_arch
from .orbital_local import tau_S_rational


@dataclass(frozen=True)
class EmbeddedLattice:
    """Full-rank lattice in R^d; rows of basis are the generators.

    sqrt_disc records the covolume of the ambient maximal order: the
    covolume of an embedded ideal is its norm times this factor, so the
    norm-based sandwich constants must absorb it.
    """

    basis: tuple[tuple[float, ...], ...]
    provenance: str
    d: int
    sqrt_disc: float = 1.0

    def __post_init__(self):
        if np.abs(np.linalg.det(self.matrix)) < 1e-300:
            raise ValueError("basis is singular")

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.basis, dtype=float)

    @property
    def covolume(self) -> float:
        return abs(float(np.linalg.det(self.matrix)))


def embed_ideal(field: str, descriptor, m: int | None = None) -> EmbeddedLattice:
    """Embed a fractional-ideal descriptor as a lattice under the real places.

    field "Q": descriptor is a rational number g; the lattice g*Z.
    field "real_quadratic": descriptor is "O", an integer N (the ideal N*O),
    or a pair (x, y) for the principal ideal generated by x + y*omega, with
    omega = sqrt(m) or (1+sqrt(m))/2 by the discriminant parity of m.
    """
    if field == "Q":
        g = float(Fraction(descriptor))
        if g == 0:
            raise ValueError("zero ideal")
        return EmbeddedLattice(((abs(g),),), f"({descriptor})Z", 1)
    if field != "real_quadratic":
        raise UnsupportedField(f"field {field!r}; only Q and real quadratic supported")
    if m is None or m <= 1:
        raise UnsupportedField("real quadratic field needs squarefree m > 1")
    root = math.sqrt(m)
    if m % 4 == 1:
        w1, w2 = (1 + root) / 2, (1 - root) / 2
        sq_disc = root
    else:
        w1, w2 = root, -root
        sq_disc = 2 * root
    if descriptor == "O":
        basis = ((1.0, 1.0), (w1, w2))
        return EmbeddedLattice(basis, f"O_Q(sqrt{m})", 2, sq_disc)
    if isinstance(descriptor, int):
        n = descriptor
        basis = ((float(n), float(n)), (n * w1, n * w2))
        return EmbeddedLattice(basis, f"({n})O_Q(sqrt{m})", 2, sq_disc)
    x, y = descriptor
    g1, g2 = x + y * w1, x + y * w2           # the two embeddings of the generator
    basis = ((g1, g2), (g1 * w1, g2 * w2))    # gamma * (1, omega)
    return EmbeddedLattice(basis, f"({x}+{y}w)O_Q(sqrt{m})", 2, sq_disc)


def lattice_points(lat: EmbeddedLattice, R: float) -> np.ndarray:
    """All nonzero lattice points of Euclidean norm <= R (exact integer
    coefficient box, then filter)."""
    B = lat.matrix
    Binv = np.linalg.inv(B)
    bounds = [int(math.floor(R * float(np.linalg.norm(Binv[:, i])))) for i in range(lat.d)]
    ranges = [np.arange(-b, b + 1) for b in bounds]
    if lat.d == 1:
        coefs = ranges[0].reshape(-1, 1)
    elif lat.d == 2:
        A, Bc = np.meshgrid(ranges[0], ranges[1], indexing="ij")
        coefs = np.stack([A.ravel(), Bc.ravel()], axis=1)
    else:
        raise UnsupportedField("enumeration restricted to d <= 2")
    pts = coefs @ B
    norms = np.linalg.norm(pts, axis=1)
    keep = (norms <= R + 1e-12) & (norms > 0)
    return pts[keep]


def min_vector_radius(lat: EmbeddedLattice) -> float:
    """r(Lambda) = half the length of a shortest nonzero vector."""
    R = lat.covolume ** (1.0 / lat.d)
    for _ in range(60):
        pts = lattice_points(lat, R)
        if len(pts):
            return float(np.min(np.linalg.norm(pts, axis=1))) / 2
        R *= 2
    raise ConvergenceError("no lattice point found; basis badly scaled")


def _f_values(pts: np.ndarray, l: Sequence[float]) -> np.ndarray:
    out = np.ones(len(pts))
    for j, lj in enumerate(l):
        out *= (1.0 + np.abs(pts[:, j])) ** (-lj / 2)
    return out


def theta(lat: EmbeddedLattice, l: Sequence[float], R: float,
          tol: float | None = None) -> dict:
    """Truncated lattice sum with rigorous tail bound and a tail estimate.

    Returns {"value", "tail_bound", "tail_estimate", "count"}.  Raises
    TailTooLarge when a tolerance is requested and the bound exceeds it.
    """
    l = list(l)
    if len(l) != lat.d:
        raise ValueError("one weight per coordinate required")
    if min(l) < 4:
        raise DomainError("weights below 4 leave non-summable tails")
    pts = lattice_points(lat, R)
    vals = np.sort(_f_values(pts, l))     # deterministic, small-first sum
    value = float(np.sum(vals))
    bound = _tail_bound(lat, min(l), R)
    estimate = _tail_estimate(lat, l, R, fallback=bound)
    if tol is not None and bound > tol:
        raise TailTooLarge(f"tail bound {bound:.3e} exceeds tolerance {tol:.3e}")
    return {"value": value, "tail_bound": bound, "tail_estimate": estimate, "count": len(pts)}


def _tail_bound(lat: EmbeddedLattice, lmin: float, R: float) -> float:
    """Ball-packing shell bound: points in the shell [k, k+1) number at most
    vol(inflated shell)/vol(packing ball), and f there is <= (1+k)^(-lmin/2).

    Needs lmin/2 > d for the sup-based shells to be summable (the weights in
    use are >= 4 in rank one and >= 6 in rank two, which suffices).
    """
    r = min_vector_radius(lat)
    d = lat.d
    s = lmin / 2
    if s <= d:
        raise DomainError(f"shell tail bound needs min(l)/2 > d (= {d})")
    vball = 2 * r if d == 1 else math.pi * r * r

    def shell_count(k: float) -> float:
        hi, lo = k + 1 + r, max(0.0, k - r)
        vol = (2 * (hi - lo)) if d == 1 else math.pi * (hi * hi - lo * lo)
        return vol / vball

    k0 = int(math.floor(R))
    k1 = k0 + int(math.ceil(r)) + 2          # beyond k1 the shells are clean
    total = 0.0
    for k in range(k0, k1):
        total += shell_count(k) * (1 + k) ** -s
    # for k >= k1 > r: count(k) <= c_d (1+k)^(d-1) with the constants below,
    # and sum_(k>=k1) (1+k)^(d-1-s) <= (1+k1)^(d-1-s) + integral comparison
    c_d = (1 + 2 * r) / r if d == 1 else 2 * (1 + 2 * r) / (r * r)
    head = c_d * (1 + k1) ** (d - 1 - s)
    integral = c_d * (1 + k1) ** (d - s) / (s - d)
    return total + head + integral


def _tail_estimate(lat: EmbeddedLattice, l: Sequence[float], R: float, fallback: float) -> float:
    if lat.d == 1:
        # density 1/covol of points per unit length, integral of f beyond R
        a = lat.covolume
        lj = l[0]
        return (2 / a) * (1 + R) ** (1 - lj / 2) / (lj / 2 - 1)
    return fallback


# ---------------------------------------------------------------------------
# the sphere integral


def sphere_I(lam: Sequence[float], mode: str = "closed", mc_samples: int = 10 ** 7,
             seed: int = 0) -> float:
    """I(lambda) = integral over S^(d-1) of prod |omega_j|^(-lambda_j).

    closed: 2 Gamma(sum (1-lambda_j)/2)^(-1) prod Gamma((1-lambda_j)/2);
    quad: angular quadrature (d = 2); mc: Monte Carlo (any d).
    """
    lam = list(lam)
    if any(x >= 1 for x in lam):
        raise DomainError("lambda_j < 1 required")
    d = len(lam)
    if mode == "closed":
        s = sum((1 - x) / 2 for x in lam)
        out = 2 / math.gamma(s)
        for x in lam:
            out *= math.gamma((1 - x) / 2)
        return out
    if mode == "quad":
        if d != 2:
            raise DomainError("angular quadrature implemented for d = 2")
        def f(t):
            return abs(math.cos(t)) ** (-lam[0]) * abs(math.sin(t)) ** (-lam[1])
        val, err = integrate.quad(f, 0, math.pi / 2, epsabs=1e-12, epsrel=1e-12, limit=400)
        if err > 1e-7:
            raise ConvergenceError(f"sphere quadrature error {err:.2e}")
        return 4 * val
    if mode == "mc":
        rng = np.random.default_rng(seed)
        total = 0.0
        done = 0
        while done < mc_samples:
            chunk = min(10 ** 6, mc_samples - done)
            x = rng.standard_normal((chunk, d))
            x /= np.linalg.norm(x, axis=1, keepdims=True)
            w = np.ones(chunk)
            for j, lj in enumerate(lam):
                w *= np.abs(x[:, j]) ** (-lj)
            total += float(np.sum(w))
            done += chunk
        area = 2 * math.pi ** (d / 2) / math.gamma(d / 2)
        return total / mc_samples * area
    raise ValueError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------------------
# the hyperbolic-term lattice sum over Q


def fI_rational(l: int, n_norm: int, bset_norm: int, eps: float, K: int = 400,
                eta_arch: str = "one", tol: float | None = None) -> dict:
    """The tau-weighted J-sum over b in (n/bset)Z - {0, -1}, truncated at
    |index| <= K, for the rational field.

    Requires gcd(n, bset) = 1.  Returns value plus a fitted-envelope tail
    report (TailTooLarge if a tolerance is requested and not met); the
    divisor-count weights grow slower than any power, so the (1+|b|)^(-l/2)
    decay of J dominates.
    """
    if math.gcd(n_norm, bset_norm) != 1:
        raise ValueError("n and bset must be relatively prime")
    step = Fraction(n_norm, bset_norm)
    total = 0.0
    largest_term = 0.0
    for k in range(1, K + 1):
        for s in (1, -1):
            b = step * s * k
            if b == -1:
                continue
            tau = tau_S_rational(b, bset_norm)
            if tau == 0:
                continue
            bf = float(b)
            term = tau ** 2 * abs(bf * (bf + 1)) ** eps * abs(j_arch(l, bf, eta_arch))
            total += term
            if k == K:
                largest_term = max(largest_term, term)
    # crude geometric-style tail report from the last ring of terms
    decay = (1 + float(step) * K) ** (-l / 2 + 2 * eps + 0.5)
    tail = largest_term * 4 * K * decay / max(1e-300, 1 - decay) if largest_term else 0.0
    if tol is not None and tail > tol:
        raise TailTooLarge(f"tail report {tail:.3e} exceeds tolerance {tol:.3e}")
    return {"value": total, "tail_report": tail, "K": K}


def w_hyp_arch_audit(l: int, ns: Sequence[int] = (10, 100, 1000, 10000),
                     K: int = 40, eps_minus1: int = 1) -> dict:
    """Empirical decay audit of the log-weighted hyperbolic sum over Q:
    the tau-weighted sum of |W^eps(b)| over b in N Z decays at least like
    N^(-l/2+1) (up to epsilon), mirroring the plain J-weighted sum."""
    from .orbital_arch import w_plus_quad

    vals = []
    for N in ns:
        total = 0.0
        for k in range(1, K + 1):
            for s in (1, -1):
                b = N * k * s
                if b == -1:
                    continue
                tau = tau_S_rational(Fraction(b), 1)
                if tau == 0:
                    continue
                wp = w_plus_quad(l, float(b))
                w_eps_val = abs(wp + eps_minus1 * wp.conjugate())
                total += tau ** 2 * w_eps_val
        vals.append(total)
    slope = float(np.polyfit(np.log(list(ns)), np.log(vals), 1)[0])
    return {"values": vals, "slope": slope, "target": -(l / 2 - 1) + 0.1}


# ---------------------------------------------------------------------------
# audits


def ball_integral(lat_r: float, l: Sequence[float], outside: bool = False) -> float:
    """integral of f over the ball ||x|| <= r (or its complement), d <= 2."""
    d = len(l)
    if d == 1:
        lj = l[0]
        inner = 2 * (1 - (1 + lat_r) ** (1 - lj / 2)) / (lj / 2 - 1)
        if not outside:
            return inner
        return 2 * (1 + lat_r) ** (1 - lj / 2) / (lj / 2 - 1)

    def radial(rho):
        def ang(t):
            return ((1 + rho * abs(math.cos(t))) ** (-l[0] / 2)
                    * (1 + rho * abs(math.sin(t))) ** (-l[1] / 2))
        val, _ = integrate.quad(ang, 0, math.pi / 2, epsabs=1e-10, limit=200)
        return 4 * val * rho

    if outside:
        val, _ = integrate.quad(radial, lat_r, np.inf, epsabs=1e-10, limit=200)
    else:
        val, _ = integrate.quad(radial, 0, lat_r, epsabs=1e-10, limit=200)
    return val


def minkowski_constants(d: int) -> tuple[float, float]:
    """(C_d, C'_d) with C_d r^d <= D(Lambda) <= C'_d sqrt(disc) r^d for ideal
    lattices: the lower constant from Minkowski's convex body theorem, the
    upper from |norm(b)| >= norm(Lambda) via AM-GM (the covolume carries the
    extra sqrt(disc) of the maximal order)."""
    vball = 2.0 if d == 1 else math.pi
    return vball, (2 / math.sqrt(d)) ** d


def minkowski_sandwich_ok(lat: EmbeddedLattice) -> bool:
    r = min_vector_radius(lat)
    D = lat.covolume
    c_lo, c_hi = minkowski_constants(lat.d)
    return (c_lo * r ** lat.d <= D * (1 + 1e-9)
            and D <= c_hi * lat.sqrt_disc * r ** lat.d * (1 + 1e-9))


def bound_audits(lat: EmbeddedLattice, lat0: EmbeddedLattice, l: Sequence[float],
                 R: float, rng: np.random.Generator | None = None) -> dict:
    """Containment-based audits: the theta-estimate ratio, the covering
    inequality, submultiplicativity of f, the Minkowski sandwich."""
    rng = rng or np.random.default_rng(0)
    d = lat.d
    l = list(l)
    th = theta(lat, l, R)
    r0, r1 = min_vector_radius(lat0), min_vector_radius(lat)
    D0, D1 = lat0.covolume, lat.covolume
    envelope = (1 + r0) ** (d * max(l) / 2) / D0 * D1 ** ((1 - min(l) / 2) / d)
    covering_rhs = ball_integral(r0, l) ** -1 * ball_integral(r1, l, outside=True)
    xs = rng.uniform(-5, 5, size=(10_000, d))
    ys = rng.uniform(-5, 5, size=(10_000, d))
    fx = _f_values(xs, l) * _f_values(ys, l)
    fxy = _f_values(xs + ys, l)
    submult_ok = bool(np.all(fxy >= fx - 1e-15))
    sandwich_ok = minkowski_sandwich_ok(lat)
    return {
        "theta": th["value"],
        "theta_ratio": th["value"] / envelope,
        "covering_ok": th["value"] <= covering_rhs * (1 + 1e-9),
        "covering_rhs": covering_rhs,
        "submultiplicative_ok": submult_ok,
        "minkowski_ok": sandwich_ok,
        "r": r1,
        "covolume": D1,
    }


def phi_sphere(l: Sequence[float], t: float) -> float:
    """phi(t, ..., t) = integral over the sphere of f(t omega)."""
    d = len(l)
    if d == 1:
        return 2 * (1 + t) ** (-l[0] / 2)

    def ang(th):
        return ((1 + t * abs(math.cos(th))) ** (-l[0] / 2)
                * (1 + t * abs(math.sin(th))) ** (-l[1] / 2))

    # at large t the mass sits in O(1/t) spikes at the axes; flag them
    brk = sorted({min(max(x, 1e-12), math.pi / 2 - 1e-12)
                  for x in (1 / t, 10 / t, math.pi / 2 - 10 / t, math.pi / 2 - 1 / t)})
    val, _ = integrate.quad(ang, 0, math.pi / 2, epsabs=1e-14, epsrel=1e-12,
                            limit=500, points=brk)
    return 4 * val


def phi_mellin_audit(l: Sequence[float], t_grid: Sequence[float]) -> dict:
    """phi(t) t^(d - 1 + l_min/2) boundedness plus the log-log slope check."""
    d = len(l)
    expo = d - 1 + min(l) / 2
    ratios = [phi_sphere(l, t) * t ** expo for t in t_grid]
    ts = np.log(np.array(t_grid, dtype=float))
    vs = np.log([phi_sphere(l, t) for t in t_grid])
    slope = float(np.polyfit(ts, vs, 1)[0])
    return {"ratios": ratios, "bounded": max(ratios) < float("inf"),
            "slope": slope, "expected_slope": -expo}
