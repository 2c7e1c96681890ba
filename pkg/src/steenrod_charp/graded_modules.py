"""Cellular modules for the operations: split quadrics and projective spaces.

``CH*(X)/2`` of a split quadric of dimension ``n`` has the basis ``h^i`` and
``l_i`` for ``0 <= i <= d = n // 2``: ``h^i`` is the ``i``-th power of the
hyperplane class (codimension ``i``) and ``l_i`` the class of an
``i``-dimensional linear subspace, with ``h * l_i = l_{i-1}``.  Mod 2,
``h^(d+1) = 0`` because integrally it is twice a linear class.
``CH*(P^n)/p`` is ``F_p[h]/(h^(n+1))``.

Basis keys are ``("h", i)`` and ``("l", i)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping

from .char_classes import VirtualBundleSpec
from .dual_algebra import BmuElement, bockstein_from_coaction, steenrod_from_coaction
from .fp_core import Prime, as_prime, binom_mod_p_int
from .steenrod_ops import BOCKSTEIN, Mode, ModeError, ParseError, SteenrodElement


@dataclass(frozen=True)
class QuadricRing:
    """Mod-2 Chow ring of a split quadric of dimension ``dim``."""

    dim: int

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("quadric dimension must be >= 1")

    @property
    def d(self) -> int:
        return self.dim // 2

    @property
    def prime(self) -> Prime:
        return Prime(2)

    def basis(self) -> list:
        return [("h", i) for i in range(self.d + 1)] + [("l", i) for i in range(self.d + 1)]

    def codim(self, key) -> int:
        gen, i = key
        return i if gen == "h" else self.dim - i

    def h_power(self, i: int) -> dict:
        if i < 0:
            raise ValueError("negative power of h")
        return {("h", i): 1} if i <= self.d else {}

    def linear(self, i: int) -> dict:
        return {("l", i): 1} if 0 <= i <= self.d else {}

    def mul_basis(self, a, b) -> dict:
        (ga, i), (gb, j) = a, b
        if ga == "h" and gb == "h":
            return self.h_power(i + j)
        if ga == "h" or gb == "h":
            hi, li = (i, j) if ga == "h" else (j, i)
            return self.linear(li - hi)
        # two linear classes meet only in the middle of an even-dimensional quadric
        if self.dim % 2 == 0 and i == j == self.d:
            return {("l", 0): 1} if self.dim % 4 == 0 else {}
        return {}

    def power_basis(self, j: int, key) -> dict:
        """``Sq^{2j}`` on a basis element."""
        gen, i = key
        if gen == "h":
            c = binom_mod_p_int(i, j, 2)
            return {k: c for k in self.h_power(i + j)} if c else {}
        c = binom_mod_p_int(self.dim + 1 - i, j, 2)
        return {k: c for k in self.linear(i - j)} if c else {}

    def key_text(self, key) -> str:
        gen, i = key
        if gen == "l":
            return f"l_{i}"
        return "1" if i == 0 else ("h" if i == 1 else f"h^{i}")

    def describe(self) -> dict:
        return {"kind": "quadric", "dimX": self.dim}


@dataclass(frozen=True)
class ProjSpaceRing:
    """``CH*(P^n)/p``."""

    n: int
    prime: Prime

    def __post_init__(self):
        object.__setattr__(self, "prime", as_prime(self.prime))
        if self.n < 1:
            raise ValueError("projective space dimension must be >= 1")

    @property
    def dim(self) -> int:
        return self.n

    def basis(self) -> list:
        return [("h", i) for i in range(self.n + 1)]

    def codim(self, key) -> int:
        return key[1]

    def h_power(self, i: int) -> dict:
        return {("h", i): 1} if 0 <= i <= self.n else {}

    def mul_basis(self, a, b) -> dict:
        return self.h_power(a[1] + b[1])

    def power_basis(self, j: int, key) -> dict:
        """``P^j(h^i) = C(i, j) h^(i + (p-1) j)``."""
        p = self.prime.p
        i = key[1]
        c = binom_mod_p_int(i, j, p)
        return {k: c for k in self.h_power(i + (p - 1) * j)} if c else {}

    def key_text(self, key) -> str:
        i = key[1]
        return "1" if i == 0 else ("h" if i == 1 else f"h^{i}")

    def describe(self) -> dict:
        return {"kind": "projspace", "n": self.n, "prime": self.prime.p}


class ChowClass:
    """An element of one of the rings above, as ``{basis key: residue}``."""

    __slots__ = ("ring", "_coeffs")

    def __init__(self, ring, coeffs: Mapping | None = None):
        self.ring = ring
        p = ring.prime.p
        valid = set(ring.basis())
        clean = {}
        for key, c in (coeffs or {}).items():
            key = (key[0], int(key[1]))
            if key not in valid:
                raise ValueError(f"{key} is not a basis element of {ring}")
            c = (clean.get(key, 0) + int(c)) % p
            if c:
                clean[key] = c
            else:
                clean.pop(key, None)
        self._coeffs = clean

    @classmethod
    def basis_element(cls, ring, key) -> "ChowClass":
        return cls(ring, {key: 1})

    @classmethod
    def one(cls, ring) -> "ChowClass":
        return cls(ring, {("h", 0): 1})

    @property
    def coeffs(self) -> dict:
        return dict(self._coeffs)

    @property
    def prime(self) -> Prime:
        return self.ring.prime

    def is_zero(self) -> bool:
        return not self._coeffs

    def codims(self) -> set:
        return {self.ring.codim(k) for k in self._coeffs}

    def is_homogeneous(self) -> bool:
        return len(self.codims()) <= 1

    def _check(self, other):
        if not isinstance(other, ChowClass) or other.ring != self.ring:
            raise ValueError("classes live in different rings")

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        self._check(other)
        out = dict(self._coeffs)
        for k, c in other._coeffs.items():
            out[k] = out.get(k, 0) + c
        return ChowClass(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return ChowClass(self.ring, {k: -c for k, c in self._coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return ChowClass(self.ring, {k: c * other for k, c in self._coeffs.items()})
        self._check(other)
        out: dict = {}
        for a, ca in self._coeffs.items():
            for b, cb in other._coeffs.items():
                for k, c in self.ring.mul_basis(a, b).items():
                    out[k] = out.get(k, 0) + ca * cb * c
        return ChowClass(self.ring, out)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self * other
        return NotImplemented

    def __pow__(self, e: int):
        out = ChowClass.one(self.ring)
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return self.is_zero()
        if not isinstance(other, ChowClass):
            return NotImplemented
        return self.ring == other.ring and self._coeffs == other._coeffs

    def __hash__(self):
        return hash((self.ring, frozenset(self._coeffs.items())))

    def items(self):
        return sorted(self._coeffs.items(), key=lambda kv: (self.ring.codim(kv[0]), kv[0]))

    def to_text(self) -> str:
        if not self._coeffs:
            return "0"
        parts = []
        for key, c in self.items():
            mono = self.ring.key_text(key)
            if c == 1:
                parts.append(mono)
            elif mono == "1":
                parts.append(str(c))
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts)

    __str__ = to_text

    def __repr__(self):
        return f"ChowClass({self.ring}, {self.to_text()!r})"

    def to_record(self) -> dict:
        rec = dict(self.ring.describe())
        rec["terms"] = [{"gen": g, "idx": i, "coeff": c} for (g, i), c in self.items()]
        return rec

    @classmethod
    def from_record(cls, record: Mapping) -> "ChowClass":
        ring = ring_from_record(record)
        coeffs: dict = {}
        for t in record["terms"]:
            key = (t["gen"], int(t["idx"]))
            coeffs[key] = coeffs.get(key, 0) + int(t["coeff"])
        return cls(ring, coeffs)

    @classmethod
    def parse(cls, text: str, ring) -> "ChowClass":
        return _parse_class(text, ring)


QuadricClass = ChowClass


def ring_from_record(record: Mapping):
    kind = record.get("kind", "quadric" if "dimX" in record else "projspace")
    if kind == "quadric":
        return QuadricRing(int(record["dimX"]))
    return ProjSpaceRing(int(record["n"]), int(record["prime"]))


_CLASS_TOKEN = re.compile(r"l_(\d+)|(h)|(\d+)|([+\-*^])")


def _parse_class(text: str, ring) -> ChowClass:
    toks = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _CLASS_TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
        toks.append((m, pos))
        pos = m.end()
    if not toks:
        raise ParseError("empty expression", text, 0)
    i = 0
    total = ChowClass(ring)
    sign = 1
    expect_term = True
    current = None
    while i < len(toks):
        m, at = toks[i]
        tok = m.group()
        if tok in ("+", "-"):
            if current is not None:
                total = total + current * sign
                current = None
            elif not (expect_term and i == 0):
                raise ParseError(f"unexpected {tok!r}", text, at)
            sign = -1 if tok == "-" else 1
            expect_term = True
            i += 1
            continue
        if tok == "*":
            if current is None:
                raise ParseError("'*' without a left factor", text, at)
            expect_term = True
            i += 1
            continue
        if not expect_term:
            raise ParseError(f"expected an operator before {tok!r}", text, at)
        if m.group(1) is not None:
            idx = int(m.group(1))
            if idx > getattr(ring, "d", -1) or not isinstance(ring, QuadricRing):
                raise ParseError(f"l_{idx} is not a basis class of {ring}", text, at)
            factor = ChowClass(ring, {("l", idx): 1})
        elif m.group(2):
            exp = 1
            if i + 1 < len(toks) and toks[i + 1][0].group() == "^":
                if i + 2 >= len(toks) or toks[i + 2][0].group(3) is None:
                    raise ParseError("expected integer exponent", text, toks[i + 1][1])
                exp = int(toks[i + 2][0].group())
                i += 2
            factor = ChowClass(ring, ring.h_power(exp))
        else:
            factor = ChowClass.one(ring) * int(tok)
        current = factor if current is None else current * factor
        expect_term = False
        i += 1
    if current is None:
        raise ParseError("expression ends with an operator", text, len(text))
    return total + current * sign


# ---------------------------------------------------------------------------
# operations


def _apply_power(j: int, x: ChowClass) -> ChowClass:
    out: dict = {}
    for key, c in x.coeffs.items():
        for k, v in x.ring.power_basis(j, key).items():
            out[k] = out.get(k, 0) + c * v
    return ChowClass(x.ring, out)


def sq_on_quadric(j: int, x: ChowClass) -> ChowClass:
    """``Sq^{2j}`` on the mod-2 Chow ring of a split quadric."""
    if not isinstance(x.ring, QuadricRing):
        raise TypeError("sq_on_quadric needs a quadric class")
    if j < 0:
        raise ValueError("j must be nonnegative")
    return _apply_power(j, x)


def p_on_projspace(j: int, x: ChowClass) -> ChowClass:
    """``P^j`` on ``CH*(P^n)/p``."""
    if not isinstance(x.ring, ProjSpaceRing):
        raise TypeError("p_on_projspace needs a projective-space class")
    if j < 0:
        raise ValueError("j must be nonnegative")
    return _apply_power(j, x)


def total_power(x: ChowClass) -> ChowClass:
    """``P^0 + P^1 + ...``; finitely many terms are nonzero."""
    out = ChowClass(x.ring)
    for j in range(x.ring.dim + 1):
        out = out + _apply_power(j, x)
    return out


def total_sq(x: ChowClass) -> ChowClass:
    if not isinstance(x.ring, QuadricRing):
        raise TypeError("total_sq needs a quadric class")
    return total_power(x)


total_p = total_power


@lru_cache(maxsize=4096)
def _bmu_basis_op(p: int, n: int, e: int, k: int, token: int) -> BmuElement:
    x = BmuElement(p, n, {(e, k): 1})
    if token == BOCKSTEIN:
        return bockstein_from_coaction(x)
    return steenrod_from_coaction(x, token)


def _act_bmu(e: SteenrodElement, x: BmuElement) -> BmuElement:
    if e.mode is not Mode.CHAR0_MOTIVIC or e.prime.p == 2:
        raise ModeError("Bmu_p modules take char0 operations at odd p")
    p, n = x.prime.p, x.truncation
    total = BmuElement(p, n)
    for (mono, _, _), c in e.flat_terms.items():
        y = x
        for tok in reversed(mono.word):
            z = BmuElement(p, n)
            for (ue, vk), yc in y.terms.items():
                z = z + _bmu_basis_op(p, n, ue, vk, tok) * yc
            y = z
            if y.is_zero():
                break
        total = total + y * c
    return total


def act(e: SteenrodElement, x):
    """Apply ``e`` to ``x`` (compositions act right to left)."""
    if isinstance(x, BmuElement):
        if e.prime != x.prime:
            raise ModeError(f"operation at p={e.prime} on a module at p={x.prime}")
        return _act_bmu(e, x)
    if not isinstance(x, ChowClass):
        raise TypeError(f"cannot act on {type(x).__name__}")
    if e.mode is not Mode.CHAR_P_CHOW:
        raise ModeError("Chow modules take CHAR_P_CHOW operations")
    if e.prime != x.prime:
        raise ModeError(f"operation at p={e.prime} on a module at p={x.prime}")
    total = ChowClass(x.ring)
    for (mono, _, _), c in e.flat_terms.items():
        y = x
        for s in reversed(mono.powers):
            y = _apply_power(s, y)
            if y.is_zero():
                break
        total = total + y * c
    return total


def degree(x: ChowClass) -> int:
    """Degree mod 2 of a zero-cycle on a split quadric (the ``l_0`` coefficient)."""
    if not isinstance(x.ring, QuadricRing):
        raise TypeError("degree is defined here for quadric classes")
    if any(x.ring.codim(k) != x.ring.dim for k in x.coeffs):
        raise ValueError(f"{x} is not concentrated in dimension 0")
    return x.coeffs.get(("l", 0), 0)


def wu_oracle_sq_l(i: int, ring: QuadricRing) -> ChowClass:
    """Total square of ``l_i`` from the normal bundle of ``P^i`` inside the quadric.

    ``N = (n + 1 - i) O(1) - O(2)``, so ``c(N) = (1+H)^(n+1-i) / (1+2H)``;
    the pushforward sends ``H^j`` to ``l_{i-j}``.
    """
    if not 0 <= i <= ring.d:
        raise ValueError(f"l_{i} is not a basis class of a {ring.dim}-dimensional quadric")
    normal = VirtualBundleSpec(((1, ring.dim + 1 - i), (2, -1)))
    c = normal.chern_series(i)
    return ChowClass(ring, {("l", i - j): c[j] for j in range(i + 1)})
