"""The acceptance sweep, shared by ``steenrod-charp verify`` and the test suite.

Each check returns a :class:`CheckResult`; a check never raises on a failed
comparison, it reports the first few mismatches in ``detail``.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .char_classes import rost_number
from .dual_algebra import BmuElement, CoactionElement, bmu_coaction
from .fp_core import binom_mod_p_int
from .graded_modules import (
    ChowClass,
    ProjSpaceRing,
    QuadricRing,
    act,
    p_on_projspace,
    sq_on_quadric,
    total_power,
    total_sq,
    wu_oracle_sq_l,
)
from .qform_bounds import chain_sweep, hoffmann_feasible_i1, inq_allowed_dims
from .steenrod_ops import Mode, OpMonomial, SteenrodElement, adem_reduce, compose_raw

QUADRIC_DIMS = range(1, 13)
PROJ_PRIMES = (2, 3, 5)
PROJ_MAX_N = 25
CHAIN_MAX_DIM = 32
MAX_REPORTED = 5


@dataclass
class CheckResult:
    number: int
    name: str
    passed: bool
    detail: str = ""
    failures: list = field(default_factory=list)
    # sub-results, for criteria made of several independent parts
    parts: dict = field(default_factory=dict)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        tail = f": {self.detail}" if self.detail else ""
        return f"[{status}] criterion {self.number} ({self.name}){tail}"


def _result(number, name, failures, checked, what="cases") -> CheckResult:
    if failures:
        shown = "; ".join(failures[:MAX_REPORTED])
        return CheckResult(number, name, False, f"{len(failures)}/{checked} {what} failed: {shown}", failures)
    return CheckResult(number, name, True, f"{checked} {what} agree")


def _chow_modules():
    for n in QUADRIC_DIMS:
        yield QuadricRing(n)
    for p in PROJ_PRIMES:
        for n in range(1, PROJ_MAX_N + 1):
            yield ProjSpaceRing(n, p)


def _pair(a: int, b: int, p: int, mode: Mode) -> SteenrodElement:
    return SteenrodElement.from_monomial(OpMonomial((0, 0, 0), (a, b), p), mode)


def _power(j: int, x: ChowClass) -> ChowClass:
    if isinstance(x.ring, QuadricRing):
        return sq_on_quadric(j, x)
    return p_on_projspace(j, x)


def _adem_on_module(ring, pairs, number, name) -> tuple:
    p = ring.prime.p
    failures, checked = [], 0
    for a, b in pairs:
        reduced = adem_reduce(_pair(a, b, p, Mode.CHAR_P_CHOW))
        for key in ring.basis():
            x = ChowClass.basis_element(ring, key)
            lhs = _power(a, _power(b, x))
            rhs = act(reduced, x)
            checked += 1
            if lhs != rhs:
                failures.append(f"{ring}: P{a}.P{b} on {x}: {lhs} vs {rhs}")
    return failures, checked


def check_adem_quadrics() -> CheckResult:
    name = "Adem/action consistency on quadrics"
    pairs = [(a, b) for b in range(1, 13) for a in range(1, 2 * b) if a + b <= 12]
    failures, checked = [], 0
    for n in QUADRIC_DIMS:
        f, c = _adem_on_module(QuadricRing(n), pairs, 1, name)
        failures += f
        checked += c
    return _result(1, name, failures, checked)


def check_adem_odd_projspace() -> CheckResult:
    name = "odd-p Adem consistency on P^25"
    failures, checked = [], 0
    for p in (3, 5):
        pairs = [(a, b) for b in range(1, 9) for a in range(1, p * b) if a + b <= 8]
        f, c = _adem_on_module(ProjSpaceRing(PROJ_MAX_N, p), pairs, 2, name)
        failures += f
        checked += c
    return _result(2, name, failures, checked)


def check_cartan() -> CheckResult:
    name = "Cartan formula"
    failures, checked = [], 0
    for ring in _chow_modules():
        basis = ring.basis()
        images = {k: total_power(ChowClass.basis_element(ring, k)) for k in basis}
        for i, a in enumerate(basis):
            for b in basis[i:]:
                x, y = ChowClass.basis_element(ring, a), ChowClass.basis_element(ring, b)
                checked += 1
                if total_power(x * y) != images[a] * images[b]:
                    failures.append(f"{ring}: {x} * {y}")
    return _result(3, name, failures, checked, "basis pairs")


def check_power_and_instability() -> CheckResult:
    name = "p-th power and instability"
    failures, checked = [], 0
    for ring in _chow_modules():
        p = ring.prime.p
        by_codim: dict = {}
        for key in ring.basis():
            by_codim.setdefault(ring.codim(key), []).append(ChowClass.basis_element(ring, key))
        for m, xs in by_codim.items():
            xs = xs + [sum(xs[1:], xs[0])] if len(xs) > 1 else xs
            for x in xs:
                for n in range(m, ring.dim + 1):
                    # n == 0 is the identity and is covered by the p-th power case only for m == 0
                    if n == 0 and m == 0:
                        continue
                    out = act(SteenrodElement.P(n, p, Mode.CHAR_P_CHOW), x)
                    want = x**p if n == m else ChowClass(ring)
                    checked += 1
                    if out != want:
                        failures.append(f"{ring}: P{n} on {x} (codim {m}) gave {out}, want {want}")
    return _result(4, name, failures, checked)


def check_wu_oracle() -> CheckResult:
    name = "Wu oracle"
    failures, checked = [], 0
    for n in QUADRIC_DIMS:
        ring = QuadricRing(n)
        for i in range(ring.d + 1):
            checked += 1
            oracle = wu_oracle_sq_l(i, ring)
            direct = total_sq(ChowClass.basis_element(ring, ("l", i)))
            if oracle != direct:
                failures.append(f"dimX={n} l_{i}: oracle {oracle} vs {direct}")
    return _result(5, name, failures, checked)


def check_tau_square() -> CheckResult:
    name = "tau_i^2 = 0 via the coaction"
    trunc = 64
    u = BmuElement.u(2, trunc)
    cu = bmu_coaction(u)
    square = cu * cu
    failures, checked = [], 0
    for i in range(6):
        k = 2 ** (i + 1)
        checked += 1
        if square.coefficient(0, k):
            failures.append(f"v^{k} coefficient {square.coefficient(0, k)}")
    checked += 1
    if not square.is_zero() or bmu_coaction(u * u) != CoactionElement(2, trunc):
        failures.append(f"coaction(u)^2 = {square.to_text()}")
    return _result(6, name, failures, checked, "coefficients")


def check_rost() -> CheckResult:
    name = "Rost divisibility"
    failures, checked = [], 0
    for p in PROJ_PRIMES:
        for n in range(1, 31):
            checked += 1
            try:
                deg, _ = rost_number(n, p)
            except AssertionError as exc:
                failures.append(str(exc))
                continue
            if deg % p:
                failures.append(f"n={n} p={p}: deg {deg}")
    checked += 1
    pinned = tuple(int(v) for v in rost_number(1, 2))
    if pinned != (-2, 1):
        failures.append(f"rost_number(1, 2) = {pinned}")
    return _result(7, name, failures, checked)


def _classical_sq(word, k: int, top: int) -> int:
    """Apply a word of classical squares to ``x^k`` in ``F_2[x]/(x^(top+1))``.

    Returns the exponent of the result or -1 for zero.
    """
    for s in reversed(word):
        if k > top or not binom_mod_p_int(k, s, 2):
            return -1
        k += s
    return k if k <= top else -1


def _classical_eval(e: SteenrodElement, k: int, top: int) -> dict:
    """``tau = 1, rho = 0`` specialization acting on ``x^k``."""
    out: dict = {}
    for (mono, t, r), c in e.flat_terms.items():
        if r:
            continue
        res = _classical_sq(mono.sq_word, k, top)
        if res >= 0:
            out[res] = (out.get(res, 0) + c) % 2
    return {j: c for j, c in out.items() if c}


def check_pinned_forms() -> CheckResult:
    name = "pinned reduced forms"
    failures, checked = [], 0

    def expect(got, want, label):
        nonlocal checked
        checked += 1
        if got != want:
            failures.append(f"{label}: {got} != {want}")

    sq22 = SteenrodElement.parse("Sq2.Sq2", 2, Mode.CHAR_P_CHOW)
    expect(adem_reduce(sq22).to_text(), "0", "charp Sq2.Sq2")
    sq22m = SteenrodElement.parse("Sq2.Sq2", 2, Mode.CHAR0_MOTIVIC)
    expect(adem_reduce(sq22m).to_text(), "t*Sq3.Sq1", "char0 Sq2.Sq2")
    for p in (3, 5, 7):
        for mode in Mode:
            e = SteenrodElement.parse("P1.P1", p, mode)
            expect(adem_reduce(e).to_text(), "2*P2", f"p={p} {mode.value} P1.P1")

    # module re-verification
    for n in QUADRIC_DIMS:
        ring = QuadricRing(n)
        for key in ring.basis():
            x = ChowClass.basis_element(ring, key)
            expect(sq_on_quadric(1, sq_on_quadric(1, x)).to_text(), "0", f"Sq2Sq2 on {x} (dimX={n})")
    reduced = adem_reduce(sq22m)
    raw = compose_raw(SteenrodElement.Sq(2, Mode.CHAR0_MOTIVIC), SteenrodElement.Sq(2, Mode.CHAR0_MOTIVIC))
    for k in range(0, 40):
        expect(_classical_eval(reduced, k, 60), _classical_eval(raw, k, 60), f"tau=1 Sq2Sq2 on x^{k}")
    for p in (3, 5):
        ring = ProjSpaceRing(PROJ_MAX_N, p)
        two_p2 = SteenrodElement.P(2, p, Mode.CHAR_P_CHOW) * 2
        for key in ring.basis():
            x = ChowClass.basis_element(ring, key)
            expect(p_on_projspace(1, p_on_projspace(1, x)), act(two_p2, x), f"P1P1 on {x} mod {p}")
        trunc = 40
        p1 = SteenrodElement.P(1, p, Mode.CHAR0_MOTIVIC)
        p2 = SteenrodElement.P(2, p, Mode.CHAR0_MOTIVIC) * 2
        for e_u in (0, 1):
            for k in range(trunc + 1):
                x = BmuElement(p, trunc, {(e_u, k): 1})
                expect(act(p1, act(p1, x)), act(p2, x), f"P1P1 on {x} in Bmu_{p}")
    return _result(8, name, failures, checked)


def _brute_hoffmann(dim: int) -> list:
    out = []
    for i in range(1, dim // 2 + 1):
        m, power = dim - i, 1
        while m % 2 == 0:
            m //= 2
            power *= 2
        if i <= power:
            out.append(i)
    return out


def check_qforms() -> CheckResult:
    name = "quadratic-form combinatorics"
    parts = {}
    bad = [d for d in range(2, 65) if hoffmann_feasible_i1(d) != _brute_hoffmann(d)]
    parts["hoffmann"] = (not bad, f"dims 2..64 {'agree' if not bad else f'disagree at {bad}'}")
    bad_n = []
    for n in range(1, 11):
        closed = {2 ** (n + 1) - 2 ** (i + 1) for i in range(n + 1)}
        if inq_allowed_dims(n) != closed:
            bad_n.append(n)
    parts["inq"] = (not bad_n, f"n=1..10 {'agree' if not bad_n else f'disagree at {bad_n}'}")
    checked, counter = chain_sweep(CHAIN_MAX_DIM)
    shown = ", ".join(f"dim {c.dim} {c.indices}" for c in counter[:MAX_REPORTED])
    parts["chains"] = (
        not counter,
        f"{checked} generated chains, {len(counter)} violate the 2-adic bound"
        + (f" (finding against the generation recursion: {shown})" if counter else ""),
    )
    passed = all(ok for ok, _ in parts.values())
    detail = "; ".join(f"{k}: {msg}" for k, (_, msg) in parts.items())
    return CheckResult(9, name, passed, detail, [c for c in counter], parts)


ALL_CHECKS = (
    check_adem_quadrics,
    check_adem_odd_projspace,
    check_cartan,
    check_power_and_instability,
    check_wu_oracle,
    check_tau_square,
    check_rost,
    check_pinned_forms,
    check_qforms,
)


def run_all(workers: int = 4) -> list:
    """Run every check; results come back in criterion order."""
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda f: f(), ALL_CHECKS))
