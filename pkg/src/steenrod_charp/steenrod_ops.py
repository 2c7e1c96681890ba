"""The algebra of reduced power operations and its Adem normal form.

A monomial ``b^e0 P^s1 b^e1 P^s2 ... P^sm b^em`` is stored as an
:class:`OpMonomial` (``eps`` has one more entry than ``powers``) and read
left to right as a composition, so ``P3.P1`` means ``P^3`` applied after
``P^1``.  At ``p = 2`` the same data is displayed with squares:
``Sq^{2n} = P^n`` and ``Sq^{2n+1} = b P^n``.

Two coefficient regimes are supported:

``Mode.CHAR_P_CHOW``
    Operations over a field of characteristic ``p`` acting on mod-p Chow
    groups.  The Bockstein acts by zero there, so every monomial carrying a
    ``b`` is discarded and only the relation for ``P^a P^b`` is used.  Normal
    forms in this mode are only claimed to be valid on Chow-type modules.

``Mode.CHAR0_MOTIVIC``
    Characteristic-zero motivic operations.  At odd ``p`` both relations
    (``P^a P^b`` and ``P^a b P^b``) are used; at ``p = 2`` coefficients live in
    ``F_2[t, r]`` where ``t`` (bidegree (0,1)) and ``r`` (bidegree (1,1))
    stand for the classes of ``-1`` in weights 1.  Coefficients are written on
    the left.  ``r`` is central; ``t`` is not, since ``Sq^1(t) = r``, and
    composition moves it to the left through the motivic Cartan formula.

Elements keep a flat map ``(monomial, t_exp, r_exp) -> c`` with ``c`` a
nonzero residue mod ``p``; outside ``CHAR0_MOTIVIC`` at ``p = 2`` both
exponents are always zero.
"""

from __future__ import annotations

import enum
import heapq
import re
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping

from .fp_core import Prime, as_prime, binom_mod_p_int

BOCKSTEIN = 0  # token for b in a word; positive tokens n mean P^n


class Mode(enum.Enum):
    CHAR_P_CHOW = "charp"
    CHAR0_MOTIVIC = "char0"

    @classmethod
    def parse(cls, value) -> "Mode":
        if isinstance(value, Mode):
            return value
        key = str(value).strip().lower()
        aliases = {
            "charp": cls.CHAR_P_CHOW,
            "charpchow": cls.CHAR_P_CHOW,
            "char_p_chow": cls.CHAR_P_CHOW,
            "char0": cls.CHAR0_MOTIVIC,
            "char0motivic": cls.CHAR0_MOTIVIC,
            "char0_motivic": cls.CHAR0_MOTIVIC,
        }
        if key not in aliases:
            raise ValueError(f"unknown mode {value!r} (expected 'charp' or 'char0')")
        return aliases[key]


class ModeError(ValueError):
    """Operands disagree on prime or mode, or the mode forbids the request."""


class ParseError(ValueError):
    def __init__(self, message: str, text: str = "", pos: int = 0):
        self.pos = pos
        self.text = text
        super().__init__(f"{message} at position {pos}" + (f" in {text!r}" if text else ""))


@dataclass(frozen=True)
class OpMonomial:
    """``b^eps[0] P^powers[0] b^eps[1] ... P^powers[-1] b^eps[-1]``."""

    eps: tuple
    powers: tuple
    prime: Prime

    def __post_init__(self):
        object.__setattr__(self, "prime", as_prime(self.prime))
        powers = tuple(int(s) for s in self.powers)
        eps = tuple(int(e) for e in self.eps)
        if len(eps) < len(powers) + 1:
            eps = eps + (0,) * (len(powers) + 1 - len(eps))
        if len(eps) != len(powers) + 1:
            raise ValueError("eps must have exactly one more entry than powers")
        if any(s <= 0 for s in powers):
            raise ValueError(f"powers must be positive, got {powers}")
        if any(e not in (0, 1) for e in eps):
            raise ValueError(f"Bockstein flags must be 0 or 1, got {eps}")
        object.__setattr__(self, "powers", powers)
        object.__setattr__(self, "eps", eps)

    @classmethod
    def identity(cls, prime) -> "OpMonomial":
        return cls((0,), (), prime)

    @classmethod
    def from_word(cls, word: Iterable[int], prime) -> "OpMonomial | None":
        """Build from tokens (``0`` = b, ``n > 0`` = P^n); ``None`` if ``b b`` occurs."""
        eps = [0]
        powers = []
        for tok in word:
            if tok == BOCKSTEIN:
                if eps[-1]:
                    return None
                eps[-1] = 1
            elif tok > 0:
                powers.append(tok)
                eps.append(0)
            else:
                raise ValueError(f"bad token {tok}")
        return cls(tuple(eps), tuple(powers), prime)

    @classmethod
    def from_sq_word(cls, sqs: Iterable[int]) -> "OpMonomial | None":
        word = []
        for a in sqs:
            if a < 0:
                raise ValueError(f"negative square Sq^{a}")
            if a % 2:
                word.append(BOCKSTEIN)
            if a // 2:
                word.append(a // 2)
        return cls.from_word(word, 2)

    @property
    def word(self) -> tuple:
        out = []
        for i, s in enumerate(self.powers):
            if self.eps[i]:
                out.append(BOCKSTEIN)
            out.append(s)
        if self.eps[-1]:
            out.append(BOCKSTEIN)
        return tuple(out)

    @property
    def sq_word(self) -> tuple:
        """Square indices of the monomial (only meaningful at p = 2)."""
        out = [2 * s + self.eps[i] for i, s in enumerate(self.powers)]
        if self.eps[-1]:
            out.append(1)
        return tuple(out)

    @property
    def has_bockstein(self) -> bool:
        return any(self.eps)

    @property
    def length(self) -> int:
        return len(self.word)

    def is_identity(self) -> bool:
        return not self.powers and not self.eps[0]

    def is_admissible(self) -> bool:
        p = self.prime.p
        s, e = self.powers, self.eps
        return all(s[i] >= p * s[i + 1] + e[i + 1] for i in range(len(s) - 1))

    def inadmissible_positions(self) -> list:
        p = self.prime.p
        s, e = self.powers, self.eps
        return [i for i in range(len(s) - 1) if s[i] < p * s[i + 1] + e[i + 1]]

    def bidegree(self) -> tuple:
        return bidegree(self)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def sort_key(self):
        # length-then-lexicographic on the token word
        return (self.length, self.word)

    def to_text(self) -> str:
        if self.is_identity():
            return "1"
        if self.prime.p == 2:
            return ".".join(f"Sq{a}" for a in self.sq_word)
        return ".".join("b" if t == BOCKSTEIN else f"P{t}" for t in self.word)

    __str__ = to_text

    def to_record(self) -> dict:
        return {"eps": list(self.eps), "powers": list(self.powers)}


def bidegree(m: OpMonomial) -> tuple:
    """Bidegree: ``P^n`` contributes ``(2n(p-1), n(p-1))`` and ``b`` contributes (1, 0)."""
    p = m.prime.p
    n = sum(m.powers)
    beta = sum(m.eps)
    return (2 * n * (p - 1) + beta, n * (p - 1))


TAU_BIDEGREE = (0, 1)
RHO_BIDEGREE = (1, 1)


def _key_bidegree(key) -> tuple:
    mono, t, r = key
    d, w = bidegree(mono)
    return (d + r, w + t + r)


class SteenrodElement:
    """A finite linear combination of operation monomials.

    Immutable in practice: every arithmetic method returns a new element.
    Construct through :meth:`P`, :meth:`Sq`, :meth:`parse` or arithmetic rather than
    by hand; ``terms`` keys are ``(OpMonomial, t_exp, r_exp)``.
    """

    __slots__ = ("prime", "mode", "_terms")

    def __init__(self, prime, mode=Mode.CHAR_P_CHOW, terms: Mapping | None = None):
        self.prime = as_prime(prime)
        self.mode = Mode.parse(mode)
        p = self.prime.p
        clean = {}
        for key, c in (terms or {}).items():
            mono, t, r = key
            if mono.prime != self.prime:
                raise ModeError(f"monomial at p={mono.prime} in element at p={p}")
            if (t or r) and not self.allows_tau_rho:
                # t and r vanish over a field of characteristic p
                continue
            if self.mode is Mode.CHAR_P_CHOW and mono.has_bockstein:
                continue
            c = (clean.get(key, 0) + int(c)) % p
            if c:
                clean[key] = c
            else:
                clean.pop(key, None)
        self._terms = clean

    @property
    def allows_tau_rho(self) -> bool:
        return self.mode is Mode.CHAR0_MOTIVIC and self.prime.p == 2

    # construction helpers

    @classmethod
    def zero(cls, prime, mode=Mode.CHAR_P_CHOW):
        return cls(prime, mode)

    @classmethod
    def identity(cls, prime, mode=Mode.CHAR_P_CHOW):
        return cls(prime, mode, {(OpMonomial.identity(prime), 0, 0): 1})

    @classmethod
    def from_monomial(cls, mono: OpMonomial, mode=Mode.CHAR_P_CHOW, coeff: int = 1, tau=0, rho=0):
        return cls(mono.prime, mode, {(mono, tau, rho): coeff})

    @classmethod
    def P(cls, n: int, prime, mode=Mode.CHAR_P_CHOW):
        if n < 0:
            raise ValueError("P^n needs n >= 0")
        if n == 0:
            return cls.identity(prime, mode)
        return cls.from_monomial(OpMonomial((0, 0), (n,), prime), mode)

    @classmethod
    def beta(cls, prime, mode=Mode.CHAR0_MOTIVIC):
        return cls.from_monomial(OpMonomial((1,), (), prime), mode)

    @classmethod
    def Sq(cls, n: int, mode=Mode.CHAR_P_CHOW):
        mono = OpMonomial.from_sq_word([n] if n else [])
        return cls.from_monomial(mono, mode)

    @classmethod
    def tau(cls, mode=Mode.CHAR0_MOTIVIC):
        return cls(2, mode, {(OpMonomial.identity(2), 1, 0): 1})

    @classmethod
    def rho(cls, mode=Mode.CHAR0_MOTIVIC):
        return cls(2, mode, {(OpMonomial.identity(2), 0, 1): 1})

    @classmethod
    def parse(cls, text: str, prime, mode=Mode.CHAR_P_CHOW) -> "SteenrodElement":
        return _parse_element(text, as_prime(prime), Mode.parse(mode))

    # views

    @property
    def flat_terms(self) -> dict:
        return dict(self._terms)

    @property
    def terms(self) -> dict:
        """Grouped view ``OpMonomial -> {(t_exp, r_exp): c}``."""
        out = {}
        for (mono, t, r), c in self._terms.items():
            out.setdefault(mono, {})[(t, r)] = c
        return out

    def items(self):
        return sorted(self._terms.items(), key=lambda kv: _term_sort_key(kv[0]))

    def __iter__(self):
        return iter(self.items())

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def is_admissible(self) -> bool:
        return all(mono.is_admissible() for mono, _, _ in self._terms)

    def bidegrees(self) -> set:
        return {_key_bidegree(k) for k in self._terms}

    def bidegree(self) -> tuple:
        degs = self.bidegrees()
        if len(degs) != 1:
            raise ValueError(f"element is not homogeneous: bidegrees {sorted(degs)}")
        return degs.pop()

    def coefficient(self, mono: OpMonomial, tau: int = 0, rho: int = 0) -> int:
        return self._terms.get((mono, tau, rho), 0)

    # arithmetic

    def _check(self, other: "SteenrodElement"):
        if not isinstance(other, SteenrodElement):
            raise TypeError(f"expected SteenrodElement, got {type(other).__name__}")
        if other.prime != self.prime or other.mode is not self.mode:
            raise ModeError(
                f"cannot combine p={self.prime},{self.mode.value} with p={other.prime},{other.mode.value}"
            )

    def _new(self, terms) -> "SteenrodElement":
        return SteenrodElement(self.prime, self.mode, terms)

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

    def scale(self, c: int) -> "SteenrodElement":
        return self._new({k: c * v for k, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return compose(self, other)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return NotImplemented

    def __matmul__(self, other):
        return compose(self, other)

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return self.is_zero()
        if not isinstance(other, SteenrodElement):
            return NotImplemented
        return (
            self.prime == other.prime
            and self.mode is other.mode
            and self._terms == other._terms
        )

    def __hash__(self):
        return hash((self.prime.p, self.mode, frozenset(self._terms.items())))

    # serialization

    def to_text(self) -> str:
        if not self._terms:
            return "0"
        return " + ".join(_render_term(k, c) for k, c in self.items())

    __str__ = to_text

    def __repr__(self):
        return f"SteenrodElement(p={self.prime.p}, {self.mode.value}, {self.to_text()!r})"

    def to_record(self) -> dict:
        return {
            "prime": self.prime.p,
            "mode": self.mode.value,
            "terms": [
                {**mono.to_record(), "coeff": c, "tau": t, "rho": r}
                for (mono, t, r), c in self.items()
            ],
        }

    @classmethod
    def from_record(cls, record: Mapping) -> "SteenrodElement":
        prime = as_prime(record["prime"])
        mode = Mode.parse(record["mode"])
        terms = {}
        for term in record["terms"]:
            mono = OpMonomial(tuple(term["eps"]), tuple(term["powers"]), prime)
            key = (mono, int(term.get("tau", 0)), int(term.get("rho", 0)))
            terms[key] = terms.get(key, 0) + int(term["coeff"])
        return cls(prime, mode, terms)


def _term_sort_key(key):
    mono, t, r = key
    return (mono.sort_key(), t, r)


def _render_term(key, c: int) -> str:
    mono, t, r = key
    parts = []
    if c != 1:
        parts.append(str(c))
    for sym, e in (("t", t), ("r", r)):
        if e == 1:
            parts.append(sym)
        elif e > 1:
            parts.append(f"{sym}^{e}")
    if not mono.is_identity() or not parts:
        parts.append(mono.to_text())
    return "*".join(parts)


# ---------------------------------------------------------------------------
# composition


def _concat(m1: OpMonomial, m2: OpMonomial) -> OpMonomial | None:
    return OpMonomial.from_word(m1.word + m2.word, m1.prime)


def compose_raw(e1: SteenrodElement, e2: SteenrodElement) -> SteenrodElement:
    """Formal concatenation ``e1 . e2`` without Adem reduction.

    Only ``b b = 0`` is applied, since a word with two adjacent Bocksteins has
    no monomial representative.  A ``tau`` coming from ``e2`` is moved to the
    left through ``e1`` (it is not central, see :func:`_tau_past`).
    """
    e1._check(e2)
    terms = {}
    for (m1, t1, r1), c1 in e1._terms.items():
        for (m2, t2, r2), c2 in e2._terms.items():
            if t2:
                moved = [(OpMonomial.from_sq_word(w), dt, dr) for w, dt, dr in _tau_power_past(m1.sq_word, t2)]
            else:
                moved = [(m1, 0, 0)]
            for left, dt, dr in moved:
                m = None if left is None else _concat(left, m2)
                if m is None:
                    continue
                key = (m, t1 + dt, r1 + r2 + dr)
                terms[key] = terms.get(key, 0) + c1 * c2
    return SteenrodElement(e1.prime, e1.mode, terms)


def _tau_past_one(s: int) -> list:
    """``Sq^s . tau`` as ``[(word, dt, dr), ...]`` meaning ``sum tau^dt rho^dr Sq^word``.

    From the motivic Cartan formula with ``Sq^1(tau) = rho`` and ``Sq^k(tau) = 0`` for k > 1.
    """
    if s % 2 == 0:
        return [((s,), 1, 0), ((s - 1,), 1, 1)]
    out = [((s,), 1, 0), (((s - 1,) if s > 1 else ()), 0, 1)]
    if s >= 3:
        out.append(((s - 2,), 0, 2))
    return out


@lru_cache(maxsize=65536)
def _tau_past(sqs: tuple) -> tuple:
    """``Sq^sqs . tau`` rewritten with ``tau`` on the left, as in :func:`_tau_past_one`."""
    if not sqs:
        return (((), 1, 0),)
    head, s = sqs[:-1], sqs[-1]
    out = []
    for a, dt, dr in _tau_past_one(s):
        if dt:
            out.extend((w + a, t, r + dr) for w, t, r in _tau_past(head))
        else:
            out.append((head + a, 0, dr))
    return tuple(out)


def _tau_power_past(sqs: tuple, t: int) -> list:
    """``Sq^sqs . tau^t`` with the tau's moved to the left; repeated terms cancel mod 2."""
    state = [(sqs, 0, 0)]
    for _ in range(t):
        counts = Counter(k for w, tt, rr in state for k in ((w2, tt + dt, rr + dr) for w2, dt, dr in _tau_past(w)))
        state = [k for k, n in counts.items() if n % 2]
    return state


def compose(e1: SteenrodElement, e2: SteenrodElement) -> SteenrodElement:
    """``e1`` after ``e2``, in admissible normal form."""
    return adem_reduce(compose_raw(e1, e2))


# ---------------------------------------------------------------------------
# Adem relations


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


def _adem_pp(a: int, b: int, p: int) -> list:
    """``P^a P^b`` for ``a < p b`` as ``[(coeff, tokens)]``."""
    out = []
    for j in range(a // p + 1):
        c = _sign(a + j) * binom_mod_p_int((p - 1) * (b - j) - 1, a - p * j, p)
        if c % p:
            out.append((c, _tokens(a + b - j, j)))
    return out


def _adem_pbp(a: int, b: int, p: int) -> list:
    """``P^a b P^b`` for ``a <= p b`` as ``[(coeff, tokens)]``."""
    out = []
    for j in range(a // p + 1):
        c = _sign(a + j) * binom_mod_p_int((p - 1) * (b - j), a - p * j, p)
        if c % p:
            out.append((c, (BOCKSTEIN,) + _tokens(a + b - j, j)))
    for j in range((a - 1) // p + 1):
        c = _sign(a + j + 1) * binom_mod_p_int((p - 1) * (b - j) - 1, a - p * j - 1, p)
        if c % p:
            out.append((c, (a + b - j, BOCKSTEIN) + ((j,) if j else ())))
    return out


def _tokens(*powers: int) -> tuple:
    return tuple(s for s in powers if s)


def _adem_sq_motivic(a: int, b: int) -> list:
    """``Sq^a Sq^b`` for ``a < 2b`` over characteristic 0, as ``[(t, r, sqs)]``.

    Coefficients are in F_2, so only the surviving (odd) binomials are listed.
    """
    out = []
    for j in range(a // 2 + 1):
        if a % 2 == 0 and b % 2 == 1:
            if binom_mod_p_int(b - 1 - j, a - 2 * j, 2):
                out.append((0, 0, (a + b - j, j)))
                if j % 2:
                    out.append((0, 1, (a + b - j - 1, j)))
        elif a % 2 == 1 and b % 2 == 1:
            if j % 2 and binom_mod_p_int(b - 1 - j, a - 2 * j, 2):
                out.append((0, 0, (a + b - j, j)))
        elif a % 2 == 0 and b % 2 == 0:
            if binom_mod_p_int(b - 1 - j, a - 2 * j, 2):
                out.append((j % 2, 0, (a + b - j, j)))
        else:
            if j % 2 == 0 and binom_mod_p_int(b - 1 - j, a - 2 * j, 2):
                out.append((0, 0, (a + b - j, j)))
            if j % 2 and binom_mod_p_int(b - 1 - j, a - 1 - 2 * j, 2):
                out.append((0, 1, (a + b - j - 1, j)))
    return out


def _sq_pair_inadmissible(sqs: tuple) -> list:
    return [i for i in range(len(sqs) - 1) if sqs[i] < 2 * sqs[i + 1]]


def _step_terms(mono: OpMonomial, mode: Mode, position: str) -> dict:
    """One rewrite of an inadmissible pair; returns ``{(mono, t, r): c}``."""
    p = mono.prime.p
    pick = (lambda xs: xs[0]) if position == "leftmost" else (lambda xs: xs[-1])
    out: dict = {}

    def add(key, c):
        out[key] = out.get(key, 0) + c

    if p == 2 and mode is Mode.CHAR0_MOTIVIC:
        sqs = mono.sq_word
        bad = _sq_pair_inadmissible(sqs)
        if not bad:
            raise ValueError(f"{mono} is already admissible")
        i = pick(bad)
        for t, r, pair in _adem_sq_motivic(sqs[i], sqs[i + 1]):
            tail = tuple(x for x in pair if x) + sqs[i + 2:]
            # a tau produced in the middle of the word is moved to the front
            for head, dt, dr in _tau_power_past(sqs[:i], t):
                new = OpMonomial.from_sq_word(head + tail)
                if new is not None:
                    add((new, dt, r + dr), 1)
        return out

    bad = mono.inadmissible_positions()
    if not bad:
        raise ValueError(f"{mono} is already admissible")
    i = pick(bad)
    s, e = mono.powers, mono.eps
    a, b = s[i], s[i + 1]
    if e[i + 1]:
        if mode is Mode.CHAR_P_CHOW:
            # b acts by zero on Chow groups; such monomials are never stored
            raise ModeError("Bockstein monomials do not exist in CHAR_P_CHOW mode")
        rel = _adem_pbp(a, b, p)
    else:
        rel = _adem_pp(a, b, p)
    prefix = OpMonomial(e[: i + 1], s[:i], mono.prime).word
    # the prefix word ends with the b (if any) that precedes P^a
    suffix = OpMonomial(e[i + 2:], s[i + 2:], mono.prime).word
    for c, mid in rel:
        new = OpMonomial.from_word(prefix + mid + suffix, mono.prime)
        if new is not None:
            add((new, 0, 0), c)
    return out


def adem_step(m: OpMonomial, mode=Mode.CHAR_P_CHOW, position: str = "leftmost") -> SteenrodElement:
    """Rewrite the leftmost (or rightmost) inadmissible pair of ``m`` once."""
    mode = Mode.parse(mode)
    if mode is Mode.CHAR_P_CHOW and m.has_bockstein:
        return SteenrodElement.zero(m.prime, mode)
    if m.is_admissible():
        raise ValueError(f"{m} is already admissible")
    return SteenrodElement(m.prime, mode, _step_terms(m, mode, position))


def _moment(mono: OpMonomial) -> int:
    p = mono.prime.p
    total = 0
    for i, tok in enumerate(mono.word):
        deg = 1 if tok == BOCKSTEIN else 2 * tok * (p - 1)
        total += (i + 1) * deg
    return total


def reduce_counted(e: SteenrodElement, position: str = "leftmost") -> tuple:
    """Reduce to admissible form, returning ``(normal_form, steps)``.

    Terms are grouped by monomial, the tau/rho part riding along as a
    polynomial coefficient, so one step rewrites one monomial.  Inadmissible
    monomials are expanded in order of decreasing moment (a weighted position
    sum that every Adem rewrite lowers), hence each at most once.
    """
    p = e.prime.p
    polys: dict = {}
    for (mono, t, r), c in e._terms.items():
        polys.setdefault(mono, {})[(t, r)] = c
    heap = [(-_moment(m), m.sort_key(), m) for m in polys if not m.is_admissible()]
    heapq.heapify(heap)
    steps = 0
    while heap:
        _, _, mono = heapq.heappop(heap)
        poly = {k: c for k, c in polys.pop(mono).items() if c % p}
        if not poly:
            continue
        steps += 1
        for (nm, nt, nr), nc in _step_terms(mono, e.mode, position).items():
            if e.mode is Mode.CHAR_P_CHOW and nm.has_bockstein:
                continue
            if nm not in polys:
                polys[nm] = {}
                if not nm.is_admissible():
                    heapq.heappush(heap, (-_moment(nm), nm.sort_key(), nm))
            target = polys[nm]
            for (t, r), c in poly.items():
                key = (t + nt, r + nr)
                target[key] = (target.get(key, 0) + c * nc) % p
    terms = {(m, t, r): c for m, poly in polys.items() for (t, r), c in poly.items()}
    return SteenrodElement(e.prime, e.mode, terms), steps


@lru_cache(maxsize=65536)
def _normal_form(mono: OpMonomial, mode: Mode, position: str) -> tuple:
    nf, _ = reduce_counted(SteenrodElement.from_monomial(mono, mode), position)
    return tuple(nf._terms.items())


def adem_reduce(e: SteenrodElement, position: str = "leftmost") -> SteenrodElement:
    """Admissible normal form of ``e`` (idempotent)."""
    if position not in ("leftmost", "rightmost"):
        raise ValueError(f"unknown strategy {position!r}")
    terms: dict = {}
    for (mono, t, r), c in e._terms.items():
        if mono.is_admissible():
            terms[(mono, t, r)] = terms.get((mono, t, r), 0) + c
            continue
        for (nm, nt, nr), nc in _normal_form(mono, e.mode, position):
            key = (nm, t + nt, r + nr)
            terms[key] = terms.get(key, 0) + c * nc
    return SteenrodElement(e.prime, e.mode, terms)


def cartan_expand(n: int) -> list:
    """Index pairs ``(j, n - j)`` of the Cartan sum for ``P^n(xy)``."""
    if n < 0:
        raise ValueError("cartan_expand needs n >= 0")
    return [(j, n - j) for j in range(n + 1)]


# ---------------------------------------------------------------------------
# text parsing

_TOKEN = re.compile(r"Sq(\d+)|P(\d+)|(\d+)|([btr+\-*.^])")


def _tokenize(text: str) -> list:
    pos = 0
    out = []
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
        if m.group(1) is not None:
            out.append(("SQ", int(m.group(1)), pos))
        elif m.group(2) is not None:
            out.append(("P", int(m.group(2)), pos))
        elif m.group(3) is not None:
            out.append(("INT", int(m.group(3)), pos))
        else:
            out.append((m.group(4), None, pos))
        pos = m.end()
    out.append(("END", None, n))
    return out


class _Parser:
    def __init__(self, text: str, prime: Prime, mode: Mode):
        self.text = text
        self.prime = prime
        self.mode = mode
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, self.text, tok[2])

    def parse(self) -> SteenrodElement:
        total = SteenrodElement.zero(self.prime, self.mode)
        sign = 1
        if self.peek()[0] in ("+", "-"):
            sign = -1 if self.take()[0] == "-" else 1
        while True:
            total = total + self.term().scale(sign)
            kind = self.peek()[0]
            if kind == "END":
                return total
            if kind not in ("+", "-"):
                self.error(f"expected '+', '-' or end, found {kind!r}")
            sign = -1 if self.take()[0] == "-" else 1

    def term(self) -> SteenrodElement:
        value = self.factor()
        while self.peek()[0] == "*":
            self.take()
            value = compose_raw(value, self.factor())
        return value

    def factor(self) -> SteenrodElement:
        tok = self.peek()
        kind = tok[0]
        if kind == "INT":
            self.take()
            return SteenrodElement.identity(self.prime, self.mode).scale(tok[1])
        if kind in ("t", "r"):
            self.take()
            exp = self._exponent()
            if self.prime.p != 2 or self.mode is not Mode.CHAR0_MOTIVIC:
                if self.mode is Mode.CHAR_P_CHOW and self.prime.p == 2:
                    return SteenrodElement.zero(self.prime, self.mode)
                self.error(f"'{kind}' is only defined at p=2 in char0 mode", tok)
            base = SteenrodElement.tau() if kind == "t" else SteenrodElement.rho()
            out = SteenrodElement.identity(2, self.mode)
            for _ in range(exp):
                out = compose_raw(out, base)
            return out
        if kind in ("SQ", "P", "b"):
            word = self.word()
            return word
        self.error(f"unexpected {kind if kind != 'END' else 'end of input'}")

    def _exponent(self) -> int:
        if self.peek()[0] == "^":
            self.take()
            tok = self.peek()
            if tok[0] != "INT":
                self.error("expected integer exponent")
            self.take()
            return tok[1]
        return 1

    def word(self) -> SteenrodElement:
        tokens = [self.generator()]
        while self.peek()[0] == ".":
            self.take()
            tokens.append(self.generator())
        word = []
        for t in tokens:
            word.extend(t)
        mono = OpMonomial.from_word(word, self.prime)
        if mono is None:
            return SteenrodElement.zero(self.prime, self.mode)
        return SteenrodElement.from_monomial(mono, self.mode)

    def generator(self) -> tuple:
        tok = self.peek()
        kind = tok[0]
        if kind == "SQ":
            if self.prime.p != 2:
                self.error("Sq generators require p=2", tok)
            self.take()
            a = tok[1]
            return ((BOCKSTEIN,) if a % 2 else ()) + ((a // 2,) if a // 2 else ())
        if kind == "P":
            self.take()
            return (tok[1],) if tok[1] else ()
        if kind == "b":
            self.take()
            return (BOCKSTEIN,)
        self.error("expected an operation generator (SqN, PN or b)", tok)


def _parse_element(text: str, prime: Prime, mode: Mode) -> SteenrodElement:
    if not text.strip():
        raise ParseError("empty expression", text, 0)
    return _Parser(text, prime, mode).parse()
