"""Prime-field arithmetic shared by the rest of the package.

Everything here is a plain value: a :class:`Prime`, an :class:`FpScalar`
reduced into ``[0, p)``, Lucas-theorem binomials and p-adic valuations.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True, order=True)
class Prime:
    """A rational prime; composites are rejected at construction."""

    p: int

    def __post_init__(self):
        if isinstance(self.p, bool) or not isinstance(self.p, int):
            raise TypeError(f"prime must be an int, got {self.p!r}")
        if not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    def __int__(self):
        return self.p

    def __index__(self):
        return self.p

    def __str__(self):
        return str(self.p)


def as_prime(p) -> Prime:
    return p if isinstance(p, Prime) else Prime(int(p))


@dataclass(frozen=True)
class FpScalar:
    """An element of F_p, stored as its least nonnegative residue."""

    value: int
    prime: Prime

    def __post_init__(self):
        object.__setattr__(self, "prime", as_prime(self.prime))
        object.__setattr__(self, "value", self.value % self.prime.p)

    def _coerce(self, other) -> int:
        if isinstance(other, FpScalar):
            if other.prime != self.prime:
                raise ValueError(f"cannot mix F_{self.prime} and F_{other.prime}")
            return other.value
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FpScalar(self.value + o, self.prime)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FpScalar(self.value - o, self.prime)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FpScalar(o - self.value, self.prime)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FpScalar(self.value * o, self.prime)

    __rmul__ = __mul__

    def __neg__(self):
        return FpScalar(-self.value, self.prime)

    def __pow__(self, e: int):
        return FpScalar(pow(self.value, e, self.prime.p), self.prime)

    def inverse(self) -> "FpScalar":
        if self.value == 0:
            raise ZeroDivisionError("0 has no inverse in F_p")
        return FpScalar(pow(self.value, -1, self.prime.p), self.prime)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * FpScalar(o, self.prime).inverse()

    def __eq__(self, other):
        if isinstance(other, FpScalar):
            return self.prime == other.prime and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.prime.p
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.prime.p))

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"FpScalar({self.value}, p={self.prime.p})"

    def __str__(self):
        return str(self.value)


@lru_cache(maxsize=None)
def _small_binom_table(p: int) -> tuple:
    rows = [[1]]
    for n in range(1, p):
        prev = rows[-1]
        rows.append([1] + [(prev[k - 1] + prev[k]) % p for k in range(1, n)] + [1])
    return tuple(tuple(r) for r in rows)


def binom_mod_p_int(n: int, k: int, p: int) -> int:
    """``C(n, k) mod p`` as a plain int, via Lucas' theorem.

    Out-of-range ``k`` (negative or larger than ``n``) gives 0.
    """
    if n < 0:
        raise ValueError(f"binom_mod_p needs n >= 0, got {n}")
    if k < 0 or k > n:
        return 0
    table = _small_binom_table(p)
    result = 1
    while n or k:
        nd, kd = n % p, k % p
        if kd > nd:
            return 0
        result = (result * table[nd][kd]) % p
        n //= p
        k //= p
    return result


def binom_mod_p(n: int, k: int, p) -> FpScalar:
    prime = as_prime(p)
    return FpScalar(binom_mod_p_int(n, k, prime.p), prime)


def vp(n: int, p) -> int:
    """Exponent of the largest power of ``p`` dividing ``n``."""
    p = int(as_prime(p))
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    n = abs(n)
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def v2(n: int) -> int:
    return vp(n, 2)
