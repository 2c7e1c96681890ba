"""Truncated integer power series in the hyperplane class ``h``.

Used for the total class ``w`` attached to ``f(x) = 1 + x^(p-1)``, the class
``w(-T_X)`` of a split quadric, the Rost numbers derived from it and the
degree-formula congruence.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .fp_core import FpScalar, as_prime
from .steenrod_ops import ParseError

QUADRIC_TOP_DEGREE = 2  # deg(h^n) on an n-dimensional split quadric
PROJECTIVE_TOP_DEGREE = 1


@dataclass(frozen=True)
class TruncSeries:
    """``sum coeffs[i] h^i`` modulo ``h^(trunc+1)``, with exact integer coefficients."""

    coeffs: tuple
    trunc: int

    def __post_init__(self):
        if self.trunc < 0:
            raise ValueError("truncation must be >= 0")
        c = tuple(int(x) for x in self.coeffs[: self.trunc + 1])
        c = c + (0,) * (self.trunc + 1 - len(c))
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def one(cls, trunc: int) -> "TruncSeries":
        return cls((1,), trunc)

    @classmethod
    def linear(cls, a: int, trunc: int, degree: int = 1) -> "TruncSeries":
        """``1 + a h^degree``."""
        c = [0] * (trunc + 1)
        c[0] = 1
        if degree <= trunc:
            c[degree] += a
        return cls(tuple(c), trunc)

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i <= self.trunc else 0

    def _match(self, other: "TruncSeries"):
        if other.trunc != self.trunc:
            raise ValueError(f"truncation mismatch: {self.trunc} vs {other.trunc}")

    def __add__(self, other):
        self._match(other)
        return TruncSeries(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)), self.trunc)

    def __sub__(self, other):
        self._match(other)
        return TruncSeries(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)), self.trunc)

    def __mul__(self, other):
        if isinstance(other, int):
            return TruncSeries(tuple(other * a for a in self.coeffs), self.trunc)
        return series_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        return series_pow(self, e)

    def reduce(self, m: int) -> tuple:
        return tuple(c % m for c in self.coeffs)

    def __str__(self):
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if i == 0 else ("h" if i == 1 else f"h^{i}")
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(("+ " if c > 0 else "- ") + body)
        return " ".join(parts) or "0"


def series_mul(s: TruncSeries, t: TruncSeries) -> TruncSeries:
    s._match(t)
    n = s.trunc
    out = [0] * (n + 1)
    for i, a in enumerate(s.coeffs):
        if a:
            for j in range(n + 1 - i):
                out[i + j] += a * t.coeffs[j]
    return TruncSeries(tuple(out), n)


def series_inv(s: TruncSeries) -> TruncSeries:
    c0 = s.coeffs[0]
    if c0 not in (1, -1):
        raise ValueError(f"series with constant term {c0} is not a unit over the integers")
    n = s.trunc
    out = [0] * (n + 1)
    out[0] = c0  # 1/c0 == c0 for c0 = +-1
    for k in range(1, n + 1):
        acc = sum(s.coeffs[i] * out[k - i] for i in range(1, k + 1))
        out[k] = -c0 * acc
    return TruncSeries(tuple(out), n)


def series_pow(s: TruncSeries, e: int) -> TruncSeries:
    if e < 0:
        return series_pow(series_inv(s), -e)
    result = TruncSeries.one(s.trunc)
    base = s
    while e:
        if e & 1:
            result = series_mul(result, base)
        base = series_mul(base, base)
        e >>= 1
    return result


@dataclass(frozen=True)
class VirtualBundleSpec:
    """A virtual bundle whose total Chern class is ``prod (1 + a h)^e``."""

    factors: tuple  # ((a, e), ...)

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple((int(a), int(e)) for a, e in self.factors))

    def __add__(self, other: "VirtualBundleSpec") -> "VirtualBundleSpec":
        # direct sum: Whitney product of the factor lists
        return VirtualBundleSpec(self.factors + other.factors)

    def __neg__(self):
        return VirtualBundleSpec(tuple((a, -e) for a, e in self.factors))

    def chern_series(self, trunc: int) -> TruncSeries:
        out = TruncSeries.one(trunc)
        for a, e in self.factors:
            out = out * series_pow(TruncSeries.linear(a, trunc), e)
        return out

    def __str__(self):
        return " ".join(f"({_linear_text(a)})^{e}" for a, e in self.factors) or "1"

    @classmethod
    def parse(cls, text: str) -> "VirtualBundleSpec":
        """Parse ``"(1+2h)^1 (1+h)^-4"``."""
        factors = []
        pos = 0
        pattern = re.compile(r"\s*\(\s*1\s*([+-])\s*(\d*)\s*\*?\s*h\s*\)\s*(?:\^\s*(-?\d+))?")
        while pos < len(text.rstrip()):
            m = pattern.match(text, pos)
            if not m:
                raise ParseError("expected a factor like (1+2h)^-3", text, pos)
            a = int(m.group(2) or 1) * (-1 if m.group(1) == "-" else 1)
            factors.append((a, int(m.group(3) or 1)))
            pos = m.end()
        return cls(tuple(factors))


def _linear_text(a: int) -> str:
    sign = "-" if a < 0 else "+"
    mag = "" if abs(a) == 1 else str(abs(a))
    return f"1{sign}{mag}h"


def quadric_minus_tangent(n: int) -> VirtualBundleSpec:
    """``-T_X`` for an ``n``-dimensional quadric: ``O(2) - (n+2) O(1)`` in K-theory."""
    if n < 1:
        raise ValueError("quadric dimension must be >= 1")
    return VirtualBundleSpec(((2, 1), (1, -(n + 2))))


def projective_minus_tangent(n: int) -> VirtualBundleSpec:
    """``-T_{P^n} = 1 - (n+1) O(1)`` in K-theory."""
    return VirtualBundleSpec(((1, -(n + 1)),))


def w_class(spec: VirtualBundleSpec, p, trunc: int) -> TruncSeries:
    """Total class with ``w(L) = 1 + c_1(L)^(p-1)``, extended multiplicatively."""
    q = as_prime(p).p - 1
    out = TruncSeries.one(trunc)
    for a, e in spec.factors:
        out = out * series_pow(TruncSeries.linear(a**q, trunc, degree=q), e)
    return out


@dataclass(frozen=True)
class RostNumber:
    deg: int
    quotient: FpScalar

    def __iter__(self):
        return iter((self.deg, self.quotient))


def rost_number(n: int, p) -> RostNumber:
    """``deg w_n(-T_X)`` for the split ``n``-dimensional quadric and its quotient by ``p``.

    Raises ``AssertionError`` if ``p`` does not divide the degree.
    """
    prime = as_prime(p)
    series = w_class(quadric_minus_tangent(n), prime, n)
    deg = QUADRIC_TOP_DEGREE * series[n]
    assert deg % prime.p == 0, f"{prime.p} does not divide deg w_{n}(-T_X) = {deg}"
    return RostNumber(deg, FpScalar(deg // prime.p, prime))


def degree_formula_check(deg_wx: int, deg_wy: int, deg_f: int, n_y: int, p) -> bool:
    """Whether ``deg_wx/p == deg_f * deg_wy/p (mod n_y)``."""
    q = as_prime(p).p
    if deg_wx % q or deg_wy % q:
        raise ValueError(f"both degrees must be divisible by p={q}")
    if n_y < 1:
        raise ValueError("n_Y must be a positive integer")
    return (deg_wx // q - deg_f * (deg_wy // q)) % n_y == 0
