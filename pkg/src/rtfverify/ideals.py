"""Abstract ideal-monoid arithmetic over a declared finite set of places.

Places are opaque labels carrying a residue cardinality q; ideals are finite
exponent maps over them.  Nothing here factors ideals of an actual number
field: norms, the index iota, character values and the omega combinatorics
depend only on (q_v, ord_v), which is all the transforms downstream need.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

from .errors import CoprimalityError


@dataclass(frozen=True, order=True)
class Prime:
    """A finite place: opaque id plus residue field cardinality q >= 2."""

    id: str
    q: int

    def __post_init__(self):
        if self.q < 2:
            raise ValueError(f"residue cardinality must be >= 2, got {self.q}")


@dataclass(frozen=True)
class Ideal:
    """An integral ideal as a finite exponent map; the empty map is O."""

    exps: tuple[tuple[Prime, int], ...]

    @classmethod
    def unit(cls) -> "Ideal":
        return cls(())

    @classmethod
    def of(cls, exps: Mapping[Prime, int]) -> "Ideal":
        items = tuple(sorted(((p, e) for p, e in exps.items() if e != 0)))
        for p, e in items:
            if e < 0:
                raise ValueError(f"negative exponent {e} at {p.id}")
        ids = [p.id for p, _ in items]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate prime ids in exponent map")
        return cls(items)

    def as_dict(self) -> dict[Prime, int]:
        return dict(self.exps)

    def ord(self, p: Prime) -> int:
        for q, e in self.exps:
            if q == p:
                return e
        return 0

    @property
    def support(self) -> tuple[Prime, ...]:
        return tuple(p for p, _ in self.exps)

    @property
    def is_unit(self) -> bool:
        return not self.exps

    @property
    def norm(self) -> int:
        n = 1
        for p, e in self.exps:
            n *= p.q ** e
        return n

    def __mul__(self, other: "Ideal") -> "Ideal":
        d = self.as_dict()
        for p, e in other.exps:
            d[p] = d.get(p, 0) + e
        return Ideal.of(d)

    def divide(self, other: "Ideal") -> "Ideal":
        """Exact quotient self * other^-1; raises if not integral."""
        d = self.as_dict()
        for p, e in other.exps:
            r = d.get(p, 0) - e
            if r < 0:
                raise ValueError(f"{other} does not divide {self}")
            d[p] = r
        return Ideal.of(d)

    def divides(self, other: "Ideal") -> bool:
        return all(other.ord(p) >= e for p, e in self.exps)

    def contains(self, other: "Ideal") -> bool:
        """Ideal containment: self contains other iff self | other."""
        return self.divides(other)

    def pow(self, k: int) -> "Ideal":
        return Ideal.of({p: e * k for p, e in self.exps})

    def gcd(self, other: "Ideal") -> "Ideal":
        return Ideal.of({p: min(e, other.ord(p)) for p, e in self.exps})

    def coprime_to(self, primes: Iterable[Prime]) -> bool:
        sup = set(self.support)
        return not (sup & set(primes))

    def divisors(self) -> Iterator["Ideal"]:
        primes = [p for p, _ in self.exps]
        ranges = [range(e + 1) for _, e in self.exps]
        for combo in itertools.product(*ranges):
            yield Ideal.of(dict(zip(primes, combo)))

    def __str__(self):
        if not self.exps:
            return "O"
        return "*".join(p.id if e == 1 else f"{p.id}^{e}" for p, e in self.exps)


@dataclass(frozen=True)
class QuadCharData:
    """Combinatorial presentation of a quadratic idele-class character.

    eps is the number of infinite places with sign -1; ram maps ramified
    primes to conductor exponents f(eta_v) >= 1; unram records eta_v(varpi_v)
    at declared unramified primes.  The two prime supports must be disjoint.
    """

    eps: int
    arch_signs: tuple[int, ...]
    ram: tuple[tuple[Prime, int], ...] = ()
    unram: tuple[tuple[Prime, int], ...] = ()

    def __post_init__(self):
        if self.eps != sum(1 for s in self.arch_signs if s == -1):
            raise ValueError("eps must count the arch places with sign -1")
        if any(s not in (1, -1) for s in self.arch_signs):
            raise ValueError("arch signs must be +-1")
        if any(f < 1 for _, f in self.ram):
            raise ValueError("conductor exponents must be >= 1")
        if any(v not in (1, -1) for _, v in self.unram):
            raise ValueError("unramified values must be +-1")
        ram_ids = {p.id for p, _ in self.ram}
        unram_ids = {p.id for p, _ in self.unram}
        if ram_ids & unram_ids:
            raise ValueError("ram and unram prime supports must be disjoint")

    @classmethod
    def build(cls, eps: int, arch_signs: Iterable[int],
              ram: Mapping[Prime, int] | None = None,
              unram: Mapping[Prime, int] | None = None) -> "QuadCharData":
        return cls(eps, tuple(arch_signs),
                   tuple(sorted((ram or {}).items())),
                   tuple(sorted((unram or {}).items())))

    @property
    def ram_primes(self) -> tuple[Prime, ...]:
        return tuple(p for p, _ in self.ram)

    @property
    def conductor(self) -> Ideal:
        return Ideal.of({p: f for p, f in self.ram})

    def tilde_eta(self, p: Prime) -> int:
        for q, v in self.unram:
            if q == p:
                return v
        if p in self.ram_primes:
            raise CoprimalityError(f"tilde eta undefined at ramified prime {p.id}")
        raise CoprimalityError(f"no declared eta value at prime {p.id}")

    def tilde_eta_ideal(self, n: Ideal) -> int:
        """Completely multiplicative extension to ideals prime to the conductor."""
        val = 1
        for p, e in n.exps:
            if self.tilde_eta(p) == -1 and e % 2 == 1:
                val = -val
        return val


# ---------------------------------------------------------------------------
# support strata, square decomposition, iota


def support_strata(m: Ideal) -> tuple[tuple[Prime, ...], dict[int, tuple[Prime, ...]]]:
    """(S(m), {k: S_k(m)}): partition of the support by exponent."""
    strata: dict[int, list[Prime]] = {}
    for p, e in m.exps:
        strata.setdefault(e, []).append(p)
    return m.support, {k: tuple(v) for k, v in sorted(strata.items())}


def stratum(m: Ideal, k: int) -> tuple[Prime, ...]:
    return tuple(p for p, e in m.exps if e == k)


def square_decompose(n: Ideal) -> tuple[Ideal, Ideal]:
    """n = n0 * n1^2 with n0 the largest squarefree divisor of that shape."""
    n0 = {p: e % 2 for p, e in n.exps}
    n1 = {p: e // 2 for p, e in n.exps}
    return Ideal.of(n0), Ideal.of(n1)


def iota(m: Ideal) -> Fraction:
    """Index of the level-m congruence subgroup: prod (1+q) q^(ord-1)."""
    out = Fraction(1)
    for p, e in m.exps:
        out *= (1 + p.q) * p.q ** (e - 1)
    return out


def sign_class(n: Ideal, eta: QuadCharData, excluded: Iterable[Prime] = ()) -> dict:
    """Sign (-1)^eps(eta) * tilde_eta(n) and the inert-monoid membership flags.

    Membership in the inert monoid requires every prime of n to avoid the
    conductor and the excluded set and to satisfy tilde_eta(p) = -1.
    """
    excluded = set(excluded)
    bad = set(n.support) & (set(eta.ram_primes) | excluded)
    if bad:
        raise CoprimalityError(f"ideal meets excluded primes: {sorted(p.id for p in bad)}")
    value = (-1) ** eta.eps * eta.tilde_eta_ideal(n)
    inert = all(eta.tilde_eta(p) == -1 for p in n.support)
    return {
        "sign": value,
        "in_I": inert,
        "in_I_plus": inert and value == 1,
        "in_I_minus": inert and value == -1,
    }


def omega_v(p: Prime, c: Ideal) -> Fraction:
    return Fraction(1) if c.ord(p) > 0 else Fraction(p.q + 1, p.q - 1)


def omega_pair(m: Ideal, b: Ideal) -> Fraction:
    """omega(m, b) = delta(m subset b) prod_{v in S(b)} omega_v(m b^-1)."""
    if not b.divides(m):
        return Fraction(0)
    quot = m.divide(b)
    out = Fraction(1)
    for p in b.support:
        out *= omega_v(p, quot)
    return out


# ---------------------------------------------------------------------------
# JSON configuration

CONFIG_SCHEMA = 1


def config_from_json(obj: dict) -> tuple[dict[str, Prime], QuadCharData]:
    """Parse the versioned config: primes plus the quadratic character."""
    if obj.get("schema", CONFIG_SCHEMA) != CONFIG_SCHEMA:
        raise ValueError(f"unsupported config schema {obj.get('schema')}")
    primes = {d["id"]: Prime(d["id"], int(d["q"])) for d in obj["primes"]}
    eta_obj = obj.get("eta", {"eps": 0, "arch_signs": [1]})
    eta = QuadCharData.build(
        eps=int(eta_obj.get("eps", 0)),
        arch_signs=[int(s) for s in eta_obj.get("arch_signs", [1])],
        ram={primes[k]: int(v) for k, v in eta_obj.get("ram", {}).items()},
        unram={primes[k]: int(v) for k, v in eta_obj.get("unram", {}).items()},
    )
    return primes, eta


def load_config(path: str) -> tuple[dict[str, Prime], QuadCharData, dict]:
    with open(path) as fh:
        obj = json.load(fh)
    primes, eta = config_from_json(obj)
    return primes, eta, obj


def parse_ideal(text: str, primes: Mapping[str, Prime]) -> Ideal:
    """Parse "p^2*q" style ideal strings; "O" (or "1") is the unit ideal."""
    text = text.strip()
    if text in ("O", "o", "1", ""):
        return Ideal.unit()
    exps: dict[Prime, int] = {}
    for part in text.split("*"):
        part = part.strip()
        if "^" in part:
            name, _, e = part.partition("^")
            exps[primes[name.strip()]] = exps.get(primes[name.strip()], 0) + int(e)
        else:
            exps[primes[part]] = exps.get(primes[part], 0) + 1
    return Ideal.of(exps)
