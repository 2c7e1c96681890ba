"""Combinatorial bounds on Witt indices of quadratic forms.

These are necessary conditions only: a chain passing every check need not be
realized by any form.
"""

from __future__ import annotations

from dataclasses import dataclass

from .fp_core import v2


def hoffmann_feasible_i1(dim: int) -> list:
    """Values ``i1`` in ``[1, dim // 2]`` with ``i1 <= 2^v2(dim - i1)``.

    A superset of the first Witt indices that actually occur in dimension ``dim``.
    """
    if dim < 2:
        raise ValueError("dimension must be >= 2")
    return [i for i in range(1, dim // 2 + 1) if i <= 1 << v2(dim - i)]


@dataclass(frozen=True)
class WittChain:
    """Dimension of an anisotropic form and its relative higher Witt indices."""

    dim: int
    indices: tuple

    def __post_init__(self):
        object.__setattr__(self, "indices", tuple(int(i) for i in self.indices))
        if self.dim < 1:
            raise ValueError("dimension must be positive")
        if any(i < 1 for i in self.indices):
            raise ValueError("Witt indices must be positive")
        if 2 * sum(self.indices) > self.dim + 1:
            raise ValueError(f"indices {self.indices} exhaust more than dimension {self.dim}")

    @property
    def height(self) -> int:
        return len(self.indices)

    def running_dims(self) -> list:
        """Anisotropic dimension before each step."""
        out, cur = [], self.dim
        for i in self.indices:
            out.append(cur)
            cur -= 2 * i
        return out


def v2_chain_ok(chain: WittChain) -> bool:
    """``v2(i_1) >= min_{j >= 2} v2(i_j) - 1``; needs height at least 2."""
    if chain.height <= 1:
        raise ValueError("the valuation bound needs a chain of height > 1")
    first, *rest = chain.indices
    return v2(first) >= min(v2(i) for i in rest) - 1


def inq_allowed_dims(n: int) -> set:
    """Possible dimensions below ``2^(n+1)`` of anisotropic forms in ``I^n``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return {(1 << (n + 1)) - (1 << (i + 1)) for i in range(n + 1)}


def hoffmann_chains(dim: int):
    """Every chain in which each index is Hoffmann-feasible for the running dimension.

    The recursion stops once the anisotropic part has dimension at most 1.
    """
    if dim <= 1:
        yield ()
        return
    for i in hoffmann_feasible_i1(dim):
        for rest in hoffmann_chains(dim - 2 * i):
            yield (i,) + rest


def chain_sweep(max_dim: int) -> tuple:
    """Run ``v2_chain_ok`` over all generated chains of height > 1.

    Returns ``(checked, counterexamples)``; each counterexample is a ``WittChain``.
    """
    checked = 0
    bad = []
    for dim in range(2, max_dim + 1):
        for idx in hoffmann_chains(dim):
            if len(idx) < 2:
                continue
            chain = WittChain(dim, idx)
            checked += 1
            if not v2_chain_ok(chain):
                bad.append(chain)
    return checked, bad
