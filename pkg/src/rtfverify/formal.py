"""Exact Q-linear combinations of transcendental symbols.

A FormalLog is  const + sum_i  c_i * sym_i  with rational coefficients.  All
main-term identities in this package are checked by exact cancellation of
these coefficients, never by floating comparison.

Symbols in use:
    log@<p>   natural log of a rational prime p (residue cardinalities q = p^f
              are canonicalised to f * log@p, so relabelling places with equal
              q cannot break an identity)
    logDF     log of the base-field discriminant
    LpL       L'/L(1, eta)
    frakC     the archimedean constant attached to the weight
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping

LOG_DF = "logDF"
LPL = "LpL"
FRAKC = "frakC"

Rat = Fraction | int


def _factor_small(n: int) -> list[tuple[int, int]]:
    # trial division; residue cardinalities are desk-scale
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1 if d == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


class FormalLog:
    __slots__ = ("const", "coeffs")

    def __init__(self, const: Rat = 0, coeffs: Mapping[str, Rat] | None = None):
        self.const = Fraction(const)
        self.coeffs: dict[str, Fraction] = {}
        if coeffs:
            for sym, c in coeffs.items():
                c = Fraction(c)
                if c:
                    self.coeffs[sym] = c

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls) -> "FormalLog":
        return cls(0)

    @classmethod
    def of_const(cls, c: Rat) -> "FormalLog":
        return cls(c)

    @classmethod
    def symbol(cls, sym: str, coeff: Rat = 1) -> "FormalLog":
        return cls(0, {sym: coeff})

    @classmethod
    def log_integer(cls, n: int, coeff: Rat = 1) -> "FormalLog":
        """log n for an integer n >= 1, canonicalised into prime symbols."""
        if n < 1:
            raise ValueError("log_integer wants n >= 1")
        coeff = Fraction(coeff)
        out: dict[str, Fraction] = {}
        for p, e in _factor_small(n):
            out[f"log@{p}"] = out.get(f"log@{p}", Fraction(0)) + coeff * e
        return cls(0, out)

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: "FormalLog | Rat") -> "FormalLog":
        other = _promote(other)
        coeffs = dict(self.coeffs)
        for sym, c in other.coeffs.items():
            coeffs[sym] = coeffs.get(sym, Fraction(0)) + c
        return FormalLog(self.const + other.const, coeffs)

    __radd__ = __add__

    def __neg__(self) -> "FormalLog":
        return FormalLog(-self.const, {s: -c for s, c in self.coeffs.items()})

    def __sub__(self, other: "FormalLog | Rat") -> "FormalLog":
        return self + (-_promote(other))

    def __rsub__(self, other: "FormalLog | Rat") -> "FormalLog":
        return _promote(other) + (-self)

    def __mul__(self, scalar: Rat) -> "FormalLog":
        scalar = Fraction(scalar)
        return FormalLog(self.const * scalar, {s: c * scalar for s, c in self.coeffs.items()})

    __rmul__ = __mul__

    def __truediv__(self, scalar: Rat) -> "FormalLog":
        return self * (Fraction(1) / Fraction(scalar))

    def __eq__(self, other) -> bool:
        if not isinstance(other, (FormalLog, Fraction, int)):
            return NotImplemented
        other = _promote(other)
        return self.const == other.const and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.const, tuple(sorted(self.coeffs.items()))))

    def is_zero(self) -> bool:
        return self.const == 0 and not self.coeffs

    # -- evaluation / serialisation -----------------------------------------

    def evaluate(self, bindings: Mapping[str, float] | None = None) -> float:
        """Numeric value; log@p symbols default to math.log(p)."""
        bindings = bindings or {}
        total = float(self.const)
        for sym, c in self.coeffs.items():
            if sym in bindings:
                v = bindings[sym]
            elif sym.startswith("log@"):
                v = math.log(int(sym[4:]))
            else:
                raise KeyError(f"unbound symbol {sym!r}")
            total += float(c) * v
        return total

    def to_json(self) -> dict:
        return {
            "const": str(self.const),
            "coeffs": {s: str(c) for s, c in sorted(self.coeffs.items())},
        }

    @classmethod
    def from_json(cls, obj: dict) -> "FormalLog":
        return cls(Fraction(obj["const"]), {s: Fraction(c) for s, c in obj.get("coeffs", {}).items()})

    def __repr__(self):
        parts = [str(self.const)] if self.const or not self.coeffs else []
        parts += [f"{c}*{s}" for s, c in sorted(self.coeffs.items())]
        return "FormalLog(" + " + ".join(parts or ["0"]) + ")"


def _promote(x: "FormalLog | Rat") -> FormalLog:
    if isinstance(x, FormalLog):
        return x
    return FormalLog(x)


def formal_sum(terms: Iterable[FormalLog]) -> FormalLog:
    total = FormalLog.zero()
    for t in terms:
        total = total + t
    return total
