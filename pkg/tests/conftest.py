"""Shared test helpers: independent oracles and random problem generators."""

from __future__ import annotations

import itertools

import numpy as np

from guesswork import cost_function
from guesswork.engine import NumberingMeasurement
from guesswork.operators import spectral_parts


def oracle_min_guesswork(e, c) -> float:
    """Independent enumeration oracle: mean - max_n ||E(n)||_1 / 2.

    Deliberately avoids the QAP/Gram route so it can certify it: the effective
    operator is assembled inline and its trace norm taken from eigenvalues.
    """
    coefficients = np.asarray(c.values) - c.mean
    best = -np.inf
    for perm in itertools.permutations(range(e.size)):
        operator = 2 * sum(
            coefficients[t] * e.states[perm[t]] for t in range(e.size)
        )
        best = max(best, float(np.abs(np.linalg.eigvalsh(operator)).sum()))
    return c.mean - best / 2


def oracle_qap_max(cost_gram, bloch_gram) -> float:
    """Independent exhaustive maximum of the double-sum objective."""
    m = cost_gram.shape[0]
    best = -np.inf
    for perm in itertools.permutations(range(m)):
        total = 0.0
        for t in range(m):
            for s in range(m):
                total += cost_gram[t, s] * bloch_gram[perm[t], perm[s]]
        best = max(best, total)
    return best


def random_balanced_values(rng, m: int, span: float = 5.0) -> list[float]:
    """Random balanced cost: deviations mirrored about a random mean, shuffled."""
    base = float(rng.uniform(-span, span))
    half = m // 2
    devs = rng.uniform(0.0, span, size=half)
    values = [base + d for d in devs] + [base - d for d in devs]
    if m % 2 == 1:
        values.append(base)
    rng.shuffle(values)
    return values


def random_balanced_cost(rng, m: int, span: float = 5.0):
    c = cost_function(random_balanced_values(rng, m, span))
    assert c.is_balanced
    return c


def random_numbering(rng, m: int) -> tuple[int, ...]:
    return tuple(int(x) + 1 for x in rng.permutation(m))


def random_two_outcome_measurement(rng, e, c) -> NumberingMeasurement:
    """A valid measurement on a random pair (n, n o sigma) for the spot-checks.

    Elements come from the spectral parts of a random traceless Hermitian
    operator, so they are PSD and complete by construction.
    """
    n = random_numbering(rng, e.size)
    partner = tuple(n[s - 1] for s in c.balancing_permutation)
    raw = rng.normal(size=(e.dim, e.dim)) + 1j * rng.normal(size=(e.dim, e.dim))
    herm = (raw + raw.conj().T) / 2
    herm -= np.trace(herm) / e.dim * np.eye(e.dim)
    if partner == n:
        return NumberingMeasurement(dim=e.dim, elements={n: np.eye(e.dim, dtype=complex)})
    parts = spectral_parts(herm)
    return NumberingMeasurement(
        dim=e.dim,
        elements={
            n: parts.negative_projector + parts.null_projector / 2,
            partner: parts.positive_projector + parts.null_projector / 2,
        },
    )
