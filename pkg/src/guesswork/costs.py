"""Cost functions over guess positions, and permutation (numbering) utilities.

A numbering is a bijection of {1..M} stored as a tuple ``n`` with
``n[t - 1] = n(t)``.  The same representation serves as a guessing order, a
permutation acting on ensembles or costs, and a QAP assignment.

A cost function gamma over positions {1..M} is *balanced* when some
permutation sigma pairs every value gamma(t) with a partner 2*mean - gamma(t);
the identity cost (1, 2, ..., M) is balanced by the reversal.  Balancedness is
what allows the optimal measurement to use only two outcomes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

BALANCE_TOL = 1e-10

Numbering = tuple[int, ...]


def require_numbering(n, size: int | None = None) -> Numbering:
    """Validate a 1-based bijection of {1..M} and return it as a tuple."""
    mapping = tuple(int(x) for x in n)
    m = len(mapping)
    if size is not None and m != size:
        raise ValueError(f"numbering has length {m}, expected {size}")
    if sorted(mapping) != list(range(1, m + 1)):
        raise ValueError(f"not a bijection of {{1..{m}}}: {mapping}")
    return mapping


def identity_numbering(m: int) -> Numbering:
    return tuple(range(1, m + 1))


def apply(n, t: int) -> int:
    """Evaluate n(t)."""
    mapping = require_numbering(n)
    if not 1 <= t <= len(mapping):
        raise ValueError(f"position {t} out of range 1..{len(mapping)}")
    return mapping[t - 1]


def compose(a, b) -> Numbering:
    """Composition (a o b)(t) = a(b(t))."""
    left = require_numbering(a)
    right = require_numbering(b, size=len(left))
    return tuple(left[x - 1] for x in right)


def invert(n) -> Numbering:
    mapping = require_numbering(n)
    inverse = [0] * len(mapping)
    for t, value in enumerate(mapping, start=1):
        inverse[value - 1] = t
    return tuple(inverse)


@dataclass(frozen=True)
class CostFunction:
    """A real cost vector over guess positions {1..M} with cached structure.

    ``balancing_permutation`` is a certificate sigma with
    gamma(sigma^-1(t)) = 2*mean - gamma(t) for every t, or None when gamma is
    not balanced.  ``sorting_permutation`` is a stable sigma_1 such that
    gamma o sigma_1 is non-decreasing.
    """

    values: tuple[float, ...]
    mean: float
    balancing_permutation: Numbering | None
    sorting_permutation: Numbering

    @property
    def size(self) -> int:
        return len(self.values)

    @property
    def is_balanced(self) -> bool:
        return self.balancing_permutation is not None


def balance_certificate(values, tol: float = BALANCE_TOL) -> Numbering | None:
    """Find sigma with gamma(sigma^-1(t)) = 2*mean - gamma(t), or None.

    Exists iff the multiset of gamma equals the multiset of its reflection
    about the mean.  Deterministic construction: both sequences are matched
    in sorted order (stable on ties), then the pairing is verified pointwise
    within ``tol``.
    """
    gamma = np.asarray(values, dtype=float)
    m = gamma.size
    if m < 1:
        raise ValueError("cost function must have at least one value")
    mean = float(gamma.mean())
    target = 2 * mean - gamma
    gamma_order = np.argsort(gamma, kind="stable")
    target_order = np.argsort(target, kind="stable")
    # sigma_inverse sends t to the position holding the reflected value of t
    sigma_inverse = [0] * m
    for g_idx, t_idx in zip(gamma_order, target_order):
        sigma_inverse[t_idx] = int(g_idx) + 1
    for t in range(m):
        if abs(gamma[sigma_inverse[t] - 1] - target[t]) > tol:
            return None
    return invert(sigma_inverse)


def cost_function(values, tol: float = BALANCE_TOL) -> CostFunction:
    """Build a cost function, computing its mean and permutation caches."""
    gamma = tuple(float(x) for x in values)
    if len(gamma) < 1:
        raise ValueError("cost function must have at least one value")
    arr = np.asarray(gamma)
    sorting = tuple(int(i) + 1 for i in np.argsort(arr, kind="stable"))
    return CostFunction(
        values=gamma,
        mean=float(arr.mean()),
        balancing_permutation=balance_certificate(gamma, tol=tol),
        sorting_permutation=sorting,
    )


def identity_cost(m: int) -> CostFunction:
    """The cost gamma(t) = t, balanced by the reversal permutation."""
    if m < 1:
        raise ValueError("m must be >= 1")
    return cost_function(range(1, m + 1))


def cost_gram(c: CostFunction, shift: float = 0.0) -> np.ndarray:
    """Rank-1 Gram matrix G_ij = (gamma(i) - mean + shift)(gamma(j) - mean + shift)."""
    centered = np.asarray(c.values) - c.mean + shift
    return np.outer(centered, centered)


def monotone_shift(c: CostFunction) -> float:
    """Smallest shift k making gamma - mean + k non-negative (k = mean - min gamma)."""
    return c.mean - min(c.values)
