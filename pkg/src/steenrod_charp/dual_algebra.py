"""Monomials of the dual Steenrod algebra and the coaction on Bmu_p.

Generators are ``t_i`` (exterior, first degree ``2p^i - 1``) and ``x_j``
(polynomial, first degree ``2p^j - 2``).  A :class:`DualMonomial` is written
in the canonical order ``t0 x1^r1 t1 x2^r2 t2 ...``; products carry the Koszul
sign of the first grading, so only the exterior generators ever contribute.

The cohomology of ``Bmu_p`` is modelled as ``F_p[[v]][u]/(u^2)`` cut off at a
finite power ``v^N`` (:class:`BmuElement`), and :func:`bmu_coaction` extends

    u -> u + sum_i t_i @ v^(p^i)
    v -> v + sum_j x_j @ v^(p^j)

multiplicatively.  Pairing the coaction against the duals of ``x1^n`` and
``t0`` recovers ``P^n`` and the Bockstein on this module.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping

from .fp_core import FpScalar, Prime, as_prime
from .steenrod_ops import ParseError

DEFAULT_TRUNCATION = 64
TRUNCATION_ENV = "STEENROD_CHARP_TRUNCATION"


def default_truncation() -> int:
    raw = os.environ.get(TRUNCATION_ENV)
    if raw is None or not raw.strip():
        return DEFAULT_TRUNCATION
    n = int(raw)
    if n < 1:
        raise ValueError(f"{TRUNCATION_ENV} must be a positive integer, got {raw!r}")
    return n


@dataclass(frozen=True)
class DualMonomial:
    """``prod t_i^{eps_i} prod x_j^{r_j}`` in canonical order."""

    eps: frozenset
    xi: tuple  # sorted ((j, r_j), ...) with r_j > 0
    prime: Prime

    def __post_init__(self):
        object.__setattr__(self, "prime", as_prime(self.prime))
        eps = frozenset(int(i) for i in self.eps)
        if any(i < 0 for i in eps):
            raise ValueError("t indices start at 0")
        xi = dict(self.xi)
        if any(j < 1 for j in xi):
            raise ValueError("x indices start at 1")
        if any(r < 0 for r in xi.values()):
            raise ValueError("x exponents must be nonnegative")
        object.__setattr__(self, "eps", eps)
        object.__setattr__(self, "xi", tuple(sorted((j, r) for j, r in xi.items() if r)))

    @classmethod
    def one(cls, prime) -> "DualMonomial":
        return cls(frozenset(), (), prime)

    @classmethod
    def tau(cls, i: int, prime) -> "DualMonomial":
        return cls(frozenset([i]), (), prime)

    @classmethod
    def xi_power(cls, j: int, r: int, prime) -> "DualMonomial":
        return cls(frozenset(), ((j, r),), prime)

    @property
    def xi_map(self) -> dict:
        return dict(self.xi)

    def is_one(self) -> bool:
        return not self.eps and not self.xi

    def odd_degree(self) -> int:
        """Parity of the first degree (the number of ``t`` factors mod 2)."""
        return len(self.eps) % 2

    def bidegree(self) -> tuple:
        p = self.prime.p
        d = sum(2 * p**i - 1 for i in self.eps) + sum(r * (2 * p**j - 2) for j, r in self.xi)
        w = sum(p**i - 1 for i in self.eps) + sum(r * (p**j - 1) for j, r in self.xi)
        return (d, w)

    def sort_key(self):
        top = max([*self.eps, *(j for j, _ in self.xi), -1])
        xi = self.xi_map
        return tuple(
            x for i in range(top + 1) for x in (xi.get(i, 0), 1 if i in self.eps else 0)
        )

    def to_text(self) -> str:
        if self.is_one():
            return "1"
        xi = self.xi_map
        top = max([*self.eps, *xi, 0])
        parts = []
        for i in range(top + 1):
            r = xi.get(i, 0)
            if r == 1:
                parts.append(f"x{i}")
            elif r > 1:
                parts.append(f"x{i}^{r}")
            if i in self.eps:
                parts.append(f"t{i}")
        return " ".join(parts)

    __str__ = to_text

    def to_record(self) -> dict:
        return {
            "eps": sorted(self.eps),
            "xi": {str(j): r for j, r in self.xi},
            "prime": self.prime.p,
        }

    @classmethod
    def from_record(cls, record: Mapping) -> "DualMonomial":
        return cls(
            frozenset(record.get("eps", ())),
            tuple((int(j), int(r)) for j, r in record.get("xi", {}).items()),
            record["prime"],
        )

    @classmethod
    def parse(cls, text: str, prime) -> "DualMonomial":
        """Parse ``"t0 x1^3 t2"``; a repeated ``t`` raises, since ``t_i^2 = 0``."""
        text = text.strip()
        if text in ("", "1"):
            return cls.one(prime)
        eps = []
        xi: dict = {}
        pos = 0
        for m in re.finditer(r"\S+", text):
            g = re.fullmatch(r"([tx])(\d+)(?:\^(\d+))?", m.group())
            if not g:
                raise ParseError(f"bad dual generator {m.group()!r}", text, m.start())
            kind, idx, exp = g.group(1), int(g.group(2)), int(g.group(3) or 1)
            if kind == "t":
                if exp > 1 or idx in eps:
                    raise ParseError("t_i squares to zero", text, m.start())
                eps.append(idx)
            else:
                if idx < 1:
                    raise ParseError("x indices start at 1", text, m.start())
                xi[idx] = xi.get(idx, 0) + exp
            pos = m.end()
        mono = cls(frozenset(eps), tuple(xi.items()), prime)
        sign = _tau_sign(eps, prime)
        if sign != 1:
            raise ParseError("t generators must be written in increasing order", text, pos)
        return mono


def _inversions(seq) -> int:
    return sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j])


def _tau_sign(order, prime) -> int:
    p = as_prime(prime).p
    if p == 2:
        return 1
    return -1 if _inversions(list(order)) % 2 else 1


def dual_mul(m1: DualMonomial, m2: DualMonomial):
    """``m1 * m2`` as ``(sign, monomial)``, or ``None`` when some ``t_i`` repeats."""
    if m1.prime != m2.prime:
        raise ValueError("dual monomials over different primes")
    if m1.eps & m2.eps:
        return None
    sign = _tau_sign(sorted(m1.eps) + sorted(m2.eps), m1.prime)
    xi = m1.xi_map
    for j, r in m2.xi:
        xi[j] = xi.get(j, 0) + r
    return sign, DualMonomial(m1.eps | m2.eps, tuple(xi.items()), m1.prime)


def pair_with_Pn(m: DualMonomial, n: int) -> FpScalar:
    """``<m, P^n>``: 1 exactly when ``m = x1^n``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    hit = not m.eps and (m.xi == (((1, n),) if n else ()))
    return FpScalar(1 if hit else 0, m.prime)


def pair_with_bockstein(m: DualMonomial) -> FpScalar:
    """``<m, b>``: 1 exactly when ``m = t0``."""
    return FpScalar(1 if (m.eps == frozenset([0]) and not m.xi) else 0, m.prime)


# ---------------------------------------------------------------------------
# H(Bmu_p) truncated at v^N


class BmuElement:
    """Element of ``F_p[v]/(v^{N+1}) [u]/(u^2)``; keys are ``(u_exp, v_exp)``."""

    __slots__ = ("prime", "truncation", "_terms")

    def __init__(self, prime, truncation: int, terms: Mapping | None = None):
        self.prime = as_prime(prime)
        if truncation < 1:
            raise ValueError("truncation must be positive")
        self.truncation = int(truncation)
        p = self.prime.p
        clean = {}
        for (e, k), c in (terms or {}).items():
            if e > 1 or k > self.truncation:
                continue
            if e < 0 or k < 0:
                raise ValueError(f"negative exponent in u^{e} v^{k}")
            c = (clean.get((e, k), 0) + int(c)) % p
            if c:
                clean[(e, k)] = c
            else:
                clean.pop((e, k), None)
        self._terms = clean

    @classmethod
    def u(cls, prime, truncation: int):
        return cls(prime, truncation, {(1, 0): 1})

    @classmethod
    def v(cls, prime, truncation: int, k: int = 1):
        return cls(prime, truncation, {(0, k): 1})

    @classmethod
    def one(cls, prime, truncation: int):
        return cls(prime, truncation, {(0, 0): 1})

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def _check(self, other):
        if not isinstance(other, BmuElement):
            raise TypeError(f"expected BmuElement, got {type(other).__name__}")
        if other.prime != self.prime or other.truncation != self.truncation:
            raise ValueError("Bmu elements with different prime or truncation")

    def _new(self, terms):
        return BmuElement(self.prime, self.truncation, terms)

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        self._check(other)
        terms = dict(self._terms)
        for k, c in other._terms.items():
            terms[k] = terms.get(k, 0) + c
        return self._new(terms)

    __radd__ = __add__

    def __neg__(self):
        return self._new({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return self._new({k: c * other for k, c in self._terms.items()})
        self._check(other)
        terms: dict = {}
        for (e1, k1), c1 in self._terms.items():
            for (e2, k2), c2 in other._terms.items():
                if e1 + e2 > 1 or k1 + k2 > self.truncation:
                    continue
                key = (e1 + e2, k1 + k2)
                terms[key] = terms.get(key, 0) + c1 * c2
        return self._new(terms)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self * other
        return NotImplemented

    def __pow__(self, n: int):
        out = BmuElement.one(self.prime, self.truncation)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return self.is_zero()
        if not isinstance(other, BmuElement):
            return NotImplemented
        return (self.prime, self.truncation, self._terms) == (
            other.prime,
            other.truncation,
            other._terms,
        )

    def __hash__(self):
        return hash((self.prime.p, self.truncation, frozenset(self._terms.items())))

    def bidegree_of(self, key) -> tuple:
        e, k = key
        return (e + 2 * k, e + k)

    def to_text(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for key in sorted(self._terms, key=lambda ek: (ek[1], ek[0])):
            c = self._terms[key]
            mono = _bmu_monomial_text(*key)
            if mono == "1":
                parts.append(str(c))
            else:
                parts.append(mono if c == 1 else f"{c}*{mono}")
        return " + ".join(parts)

    __str__ = to_text

    def __repr__(self):
        return f"BmuElement(p={self.prime.p}, N={self.truncation}, {self.to_text()!r})"

    def to_record(self) -> dict:
        return {
            "prime": self.prime.p,
            "truncation": self.truncation,
            "terms": [
                {"u": e, "v": k, "coeff": c} for (e, k), c in sorted(self._terms.items())
            ],
        }

    @classmethod
    def from_record(cls, record: Mapping) -> "BmuElement":
        terms: dict = {}
        for t in record["terms"]:
            key = (int(t["u"]), int(t["v"]))
            terms[key] = terms.get(key, 0) + int(t["coeff"])
        return cls(record["prime"], int(record["truncation"]), terms)

    @classmethod
    def parse(cls, text: str, prime, truncation: int) -> "BmuElement":
        return _parse_poly(text, "uv", lambda sym: _bmu_gen(sym, prime, truncation),
                           cls.one(prime, truncation))


def _bmu_gen(sym, prime, truncation):
    return BmuElement.u(prime, truncation) if sym == "u" else BmuElement.v(prime, truncation)


def _bmu_monomial_text(e: int, k: int) -> str:
    parts = []
    if e:
        parts.append("u")
    if k == 1:
        parts.append("v")
    elif k > 1:
        parts.append(f"v^{k}")
    return "*".join(parts) or "1"


_POLY_TOKEN = re.compile(r"(\d+)|([A-Za-z])|([+\-*^()])")


def _parse_poly(text: str, symbols: str, make_gen, one):
    """Tiny recursive-descent parser for polynomials in single-letter symbols."""
    toks = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _POLY_TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
        toks.append((m.group(), pos))
        pos = m.end()
    toks.append(("", len(text)))
    if len(toks) == 1:
        raise ParseError("empty expression", text, 0)
    i = 0

    def peek():
        return toks[i]

    def take():
        nonlocal i
        tok = toks[i]
        i += 1
        return tok

    def expr():
        sign = 1
        if peek()[0] in ("+", "-"):
            sign = -1 if take()[0] == "-" else 1
        total = term() * sign
        while peek()[0] in ("+", "-"):
            sign = -1 if take()[0] == "-" else 1
            total = total + term() * sign
        return total

    def term():
        value = power()
        while peek()[0] == "*":
            take()
            value = value * power()
        return value

    def power():
        base = atom()
        if peek()[0] == "^":
            take()
            tok = take()
            if not tok[0].isdigit():
                raise ParseError("expected integer exponent", text, tok[1])
            base = base ** int(tok[0])
        return base

    def atom():
        tok, at = take()
        if tok.isdigit():
            return one * int(tok)
        if tok == "(":
            value = expr()
            if take()[0] != ")":
                raise ParseError("expected ')'", text, toks[i - 1][1])
            return value
        if len(tok) == 1 and tok.isalpha():
            if tok not in symbols:
                raise ParseError(f"unknown symbol {tok!r}", text, at)
            return make_gen(tok)
        raise ParseError(f"unexpected {tok or 'end of input'!r}", text, at)

    result = expr()
    if peek()[0] != "":
        raise ParseError(f"unexpected {peek()[0]!r}", text, peek()[1])
    return result


# ---------------------------------------------------------------------------
# coaction


class CoactionElement:
    """Element of ``A (x) H(Bmu_p)``; keys are ``(DualMonomial, u_exp, v_exp)``."""

    __slots__ = ("prime", "truncation", "_terms")

    def __init__(self, prime, truncation: int, terms: Mapping | None = None):
        self.prime = as_prime(prime)
        self.truncation = int(truncation)
        p = self.prime.p
        clean = {}
        for (m, e, k), c in (terms or {}).items():
            if e > 1 or k > self.truncation:
                continue
            c = (clean.get((m, e, k), 0) + int(c)) % p
            if c:
                clean[(m, e, k)] = c
            else:
                clean.pop((m, e, k), None)
        self._terms = clean

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def _check(self, other):
        if not isinstance(other, CoactionElement):
            raise TypeError(f"expected CoactionElement, got {type(other).__name__}")
        if other.prime != self.prime or other.truncation != self.truncation:
            raise ValueError("coaction elements with different prime or truncation")

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        self._check(other)
        terms = dict(self._terms)
        for k, c in other._terms.items():
            terms[k] = terms.get(k, 0) + c
        return CoactionElement(self.prime, self.truncation, terms)

    __radd__ = __add__

    def scale(self, c: int) -> "CoactionElement":
        return CoactionElement(
            self.prime, self.truncation, {k: c * v for k, v in self._terms.items()}
        )

    def __mul__(self, other):
        """Product in the tensor algebra with the Koszul sign of the first grading."""
        if isinstance(other, int):
            return self.scale(other)
        self._check(other)
        terms: dict = {}
        n = self.truncation
        for (m1, e1, k1), c1 in self._terms.items():
            for (m2, e2, k2), c2 in other._terms.items():
                if e1 + e2 > 1 or k1 + k2 > n:
                    continue
                prod = dual_mul(m1, m2)
                if prod is None:
                    continue
                sign, m = prod
                if e1 and m2.odd_degree():
                    sign = -sign
                key = (m, e1 + e2, k1 + k2)
                terms[key] = terms.get(key, 0) + sign * c1 * c2
        return CoactionElement(self.prime, n, terms)

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return self.is_zero()
        if not isinstance(other, CoactionElement):
            return NotImplemented
        return (self.prime, self.truncation, self._terms) == (
            other.prime,
            other.truncation,
            other._terms,
        )

    def __hash__(self):
        return hash((self.prime.p, self.truncation, frozenset(self._terms.items())))

    def coefficient(self, u_exp: int, v_exp: int) -> dict:
        """Dual-algebra coefficient ``{DualMonomial: c}`` of ``u^u_exp v^v_exp``."""
        return {
            m: c for (m, e, k), c in self._terms.items() if e == u_exp and k == v_exp
        }

    def items(self):
        return sorted(self._terms.items(), key=lambda kv: (kv[0][2], kv[0][1], kv[0][0].sort_key()))

    def to_text(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for (m, e, k), c in self.items():
            right = _bmu_monomial_text(e, k)
            if m.is_one():
                body = right
            else:
                body = f"{m.to_text()}@{right}"
            if c != 1:
                body = f"{c}*{body}"
            parts.append(body)
        return " + ".join(parts)

    __str__ = to_text

    def __repr__(self):
        return f"CoactionElement(p={self.prime.p}, N={self.truncation}, {self.to_text()!r})"

    def to_record(self) -> dict:
        return {
            "prime": self.prime.p,
            "truncation": self.truncation,
            "terms": [
                {
                    "dual": {"eps": sorted(m.eps), "xi": {str(j): r for j, r in m.xi}},
                    "u": e,
                    "v": k,
                    "coeff": c,
                }
                for (m, e, k), c in self.items()
            ],
        }

    @classmethod
    def from_record(cls, record: Mapping) -> "CoactionElement":
        prime = as_prime(record["prime"])
        terms: dict = {}
        for t in record["terms"]:
            m = DualMonomial.from_record({**t["dual"], "prime": prime.p})
            key = (m, int(t["u"]), int(t["v"]))
            terms[key] = terms.get(key, 0) + int(t["coeff"])
        return cls(prime, int(record["truncation"]), terms)

    @classmethod
    def parse(cls, text: str, prime, truncation: int) -> "CoactionElement":
        """Parse the rendered form, e.g. ``"u + t0@v + 2*x1 t1@u*v^3"``."""
        prime = as_prime(prime)
        terms: dict = {}
        if text.strip() == "0":
            return cls(prime, truncation)
        offset = 0
        for chunk in text.split("+"):
            body = chunk.strip()
            start = offset + (len(chunk) - len(chunk.lstrip()))
            offset += len(chunk) + 1
            if not body:
                raise ParseError("empty term", text, start)
            c = 1
            m = re.match(r"(\d+)\*", body)
            if m:
                c = int(m.group(1))
                body = body[m.end():]
            if "@" in body:
                left, right = body.split("@", 1)
                mono = DualMonomial.parse(left, prime)
            else:
                mono, right = DualMonomial.one(prime), body
            bmu = BmuElement.parse(right, prime, truncation)
            for (e, k), bc in bmu.terms.items():
                key = (mono, e, k)
                terms[key] = terms.get(key, 0) + c * bc
        return cls(prime, truncation, terms)


def _generator_images(prime: Prime, truncation: int) -> tuple:
    p = prime.p
    n = truncation
    u_img = {(DualMonomial.one(prime), 1, 0): 1}
    i = 0
    while p**i <= n:
        u_img[(DualMonomial.tau(i, prime), 0, p**i)] = 1
        i += 1
    v_img = {(DualMonomial.one(prime), 0, 1): 1}
    j = 1
    while p**j <= n:
        v_img[(DualMonomial.xi_power(j, 1, prime), 0, p**j)] = 1
        j += 1
    return CoactionElement(prime, n, u_img), CoactionElement(prime, n, v_img)


@lru_cache(maxsize=256)
def _v_power_image(p: int, truncation: int, k: int) -> CoactionElement:
    prime = as_prime(p)
    if k == 0:
        return CoactionElement(prime, truncation, {(DualMonomial.one(prime), 0, 0): 1})
    _, v_img = _generator_images(prime, truncation)
    return _v_power_image(p, truncation, k - 1) * v_img


def bmu_coaction(x: BmuElement) -> CoactionElement:
    """Ring-homomorphic extension of the coaction on ``u`` and ``v``."""
    p, n = x.prime.p, x.truncation
    u_img, _ = _generator_images(x.prime, n)
    total = CoactionElement(x.prime, n)
    for (e, k), c in x.terms.items():
        img = _v_power_image(p, n, k)
        if e:
            img = u_img * img
        total = total + img.scale(c)
    return total


def steenrod_from_coaction(x: BmuElement, n: int) -> BmuElement:
    """``P^n(x) = sum <y_i, P^n> x_i`` where the coaction of ``x`` is ``sum y_i @ x_i``."""
    terms: dict = {}
    for (m, e, k), c in bmu_coaction(x).terms.items():
        if pair_with_Pn(m, n):
            terms[(e, k)] = terms.get((e, k), 0) + c
    return BmuElement(x.prime, x.truncation, terms)


def bockstein_from_coaction(x: BmuElement) -> BmuElement:
    terms: dict = {}
    for (m, e, k), c in bmu_coaction(x).terms.items():
        if pair_with_bockstein(m):
            terms[(e, k)] = terms.get((e, k), 0) + c
    return BmuElement(x.prime, x.truncation, terms)
