"""The guesswork engine.

Minimum guesswork of an ensemble under a balanced cost: effective operators,
the optimal two-outcome measurement built from their spectral projectors, the
sufficient optimality condition, the closed-form qubit solver (via the QAP
reduction), and a Monte Carlo simulator of the single-measurement strategy.

The central object is the effective operator

    E(n) = 2 * sum_t (gamma(t) - mean) * rho(n(t))

for a numbering n.  For a balanced cost, E(n o sigma) = -E(n) with sigma the
balancing permutation, and the measurement supported on {n*, n* o sigma} with
elements built from the negative and null projectors of E attains guesswork
mean - ||E(n*)||_1 / 2 whenever |E(n*)| >= E(n) for every numbering n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .costs import (
    CostFunction,
    Numbering,
    compose,
    cost_function,
    cost_gram,
    invert,
    require_numbering,
)
from .ensembles import Ensemble, is_uniform_prior, validate
from .errors import FactorialCapError, NumericalCheckError
from .operators import (
    EIGEN_TOL,
    abs_operator,
    pauli_vector,
    require_hermitian,
    spectral_parts,
    trace_norm,
)
from .qap import (
    DEFAULT_FACTORIAL_CAP,
    BenevolenceReport,
    QapInstance,
    _permutation_blocks,
    benevolent_solve,
    bloch_gram,
    brute_force_solve,
    is_benevolent,
    zigzag_numbering,
)

ALGEBRAIC_TOL = 1e-12
VALUE_TOL = 1e-10
CROSS_METHOD_TOL = 1e-9


@dataclass(frozen=True)
class NumberingMeasurement:
    """A measurement whose outcomes are numberings; only nonzero elements stored."""

    dim: int
    elements: dict[Numbering, np.ndarray]

    def validated(self, tol: float = EIGEN_TOL) -> "NumberingMeasurement":
        """Raise unless every element is PSD and the elements sum to the identity."""
        if not self.elements:
            raise ValueError("measurement has no elements")
        total = np.zeros((self.dim, self.dim), dtype=complex)
        size = None
        for numbering, element in self.elements.items():
            mat = require_hermitian(element, name=f"element {numbering}")
            if mat.shape[0] != self.dim:
                raise ValueError(
                    f"element {numbering} has dim {mat.shape[0]}, expected {self.dim}"
                )
            if size is None:
                size = len(numbering)
            require_numbering(numbering, size=size)
            low = float(np.linalg.eigvalsh(mat)[0])
            if low < -tol:
                raise ValueError(
                    f"element {numbering} is not PSD (min eigenvalue {low:.3e})"
                )
            total += mat
        gap = float(np.max(np.abs(np.linalg.eigvalsh(total - np.eye(self.dim)))))
        if gap > tol:
            raise ValueError(f"elements do not sum to the identity (gap {gap:.3e})")
        return self


@dataclass(frozen=True)
class GuessworkReport:
    """Solver output: the minimum value, its certificate, and diagnostics."""

    value: float
    optimal_numbering: Numbering
    measurement: NumberingMeasurement
    method: str  # brute_force | benevolent | condition_check_only
    condition_verified: bool
    mean_cost: float
    trace_norm_term: float
    diagnostics: BenevolenceReport | None = None


def effective_operator(e: Ensemble, c: CostFunction, n) -> np.ndarray:
    """E(n) = 2 sum_t (gamma(t) - mean) rho(n(t))."""
    numbering = require_numbering(n, size=e.size)
    if c.size != e.size:
        raise ValueError(f"cost has {c.size} values but the ensemble has {e.size} states")
    coefficients = np.asarray(c.values) - c.mean
    result = np.zeros((e.dim, e.dim), dtype=complex)
    for coefficient, label in zip(coefficients, numbering):
        result += coefficient * e.states[label - 1]
    return 2 * result


def guesswork_value(
    e: Ensemble, c: CostFunction, m: NumberingMeasurement, tol: float = EIGEN_TOL
) -> float:
    """Expected cost of the guessing strategy induced by measurement ``m``.

    Computed directly as sum_t gamma(t) sum_n Tr[pi(n) rho(n(t))] and
    cross-checked against the equivalent form
    mean + (1/2) sum_n Tr[pi(n) E(n)].
    """
    m.validated(tol)
    if c.size != e.size:
        raise ValueError(f"cost has {c.size} values but the ensemble has {e.size} states")
    direct = 0.0
    shifted = c.mean
    for numbering, element in m.elements.items():
        require_numbering(numbering, size=e.size)
        for t, label in enumerate(numbering, start=1):
            direct += c.values[t - 1] * float(np.trace(element @ e.states[label - 1]).real)
        shifted += 0.5 * float(
            np.trace(element @ effective_operator(e, c, numbering)).real
        )
    if abs(direct - shifted) > VALUE_TOL:
        raise NumericalCheckError(
            f"guesswork evaluations disagree: direct {direct!r} vs shifted {shifted!r}"
        )
    return direct


def optimal_two_outcome_measurement(
    e: Ensemble, c: CostFunction, n_star, tol: float = EIGEN_TOL
) -> NumberingMeasurement:
    """Measurement on {n*, n* o sigma} from the spectral parts of E(n*).

    The n* element is the negative projector plus half the null projector of
    E(n*); the partner element is the mirror image (positive plus half null).
    When sigma is the identity (constant cost) the two outcomes coincide and
    the measurement degenerates to the identity on n*.
    """
    if not c.is_balanced:
        raise ValueError("the two-outcome construction requires a balanced cost")
    n_star = require_numbering(n_star, size=e.size)
    partner = compose(n_star, c.balancing_permutation)
    if partner == n_star:
        return NumberingMeasurement(
            dim=e.dim, elements={n_star: np.eye(e.dim, dtype=complex)}
        ).validated(tol)
    e_star = effective_operator(e, c, n_star)
    e_partner = effective_operator(e, c, partner)
    antisymmetry = float(np.max(np.abs(e_star + e_partner)))
    if antisymmetry > ALGEBRAIC_TOL:
        raise NumericalCheckError(
            f"effective operators are not antisymmetric under the balancing "
            f"permutation (gap {antisymmetry:.3e}); is the cost certificate valid?"
        )
    parts = spectral_parts(e_star, tol)
    elements = {
        n_star: parts.negative_projector + parts.null_projector / 2,
        partner: parts.positive_projector + parts.null_projector / 2,
    }
    measurement = NumberingMeasurement(dim=e.dim, elements=elements)
    try:
        return measurement.validated(tol)
    except ValueError as exc:  # construction guarantees validity; failure is numerical
        raise NumericalCheckError(f"constructed measurement failed validation: {exc}") from exc


def _effective_operator_batch(
    e: Ensemble, c: CostFunction, block: np.ndarray
) -> np.ndarray:
    states = np.stack(e.states)
    coefficients = np.asarray(c.values) - c.mean
    return 2 * np.einsum("t,ktij->kij", coefficients, states[block])


def condition_check(
    e: Ensemble,
    c: CostFunction,
    n_star,
    tol: float = EIGEN_TOL,
    cap: int = DEFAULT_FACTORIAL_CAP,
) -> bool:
    """True iff |E(n*)| - E(n) is PSD within tol for every numbering n.

    Sweeps all M! numberings (refused above the cap), so a True result
    certifies that the two-outcome measurement at n* attains the minimum.
    """
    n_star = require_numbering(n_star, size=e.size)
    if e.size > cap:
        raise FactorialCapError(
            f"condition check sweeps {e.size}! numberings, above the cap {cap}"
        )
    magnitude = abs_operator(effective_operator(e, c, n_star))
    for block in _permutation_blocks(e.size):
        difference = magnitude[None, :, :] - _effective_operator_batch(e, c, block)
        lowest = np.linalg.eigvalsh(difference)[:, 0]
        if float(lowest.min()) < -tol:
            return False
    return True


def zigzag_candidate(e: Ensemble, c: CostFunction) -> tuple[Numbering, float]:
    """Uncertified zig-zag heuristic and its achievable trace-norm value.

    The zig-zag numbering composed with the cost's sorting permutation, i.e.
    the closed-form solution without the benevolence certificate.  Needs no
    enumeration, so it is available above the factorial cap; the value
    mean - ||E(n)||_1 / 2 is achievable but not certified optimal.
    """
    n = compose(zigzag_numbering(e.size), invert(c.sorting_permutation))
    return n, trace_norm(effective_operator(e, c, n))


def tracenorm_argmax(
    e: Ensemble, c: CostFunction, cap: int = DEFAULT_FACTORIAL_CAP
) -> tuple[Numbering, float]:
    """Numbering maximizing ||E(n)||_1, by exhaustive enumeration.

    Ties resolve to the lexicographically smallest numbering (first hit in
    lexicographic block order).
    """
    if e.size > cap:
        raise FactorialCapError(
            f"trace-norm search sweeps {e.size}! numberings, above the cap {cap}"
        )
    best_norm = -math.inf
    best_perm = None
    for block in _permutation_blocks(e.size):
        operators = _effective_operator_batch(e, c, block)
        norms = np.abs(np.linalg.eigvalsh(operators)).sum(axis=1)
        k = int(np.argmax(norms))
        if norms[k] > best_norm:
            best_norm = float(norms[k])
            best_perm = block[k]
    return tuple(int(x) + 1 for x in best_perm), best_norm


def min_guesswork_qubit(
    e: Ensemble,
    c: CostFunction,
    method: str = "auto",
    tol: float = EIGEN_TOL,
    cap: int = DEFAULT_FACTORIAL_CAP,
) -> GuessworkReport:
    """Minimum guesswork of a uniform-prior qubit ensemble under a balanced cost.

    Solves the equivalent quadratic assignment problem over Gram matrices and
    returns mean - |v(E(n*))|_2 / 2 together with the optimal two-outcome
    measurement.  ``method``:

    * "brute"      — exhaustive enumeration (M <= cap);
    * "benevolent" — closed form, error when no benevolent structure is found;
    * "auto"       — benevolent first (cross-checked against enumeration when
      M <= cap), falling back to brute force.

    The sufficient optimality condition is additionally swept when M <= cap
    and recorded in ``condition_verified``.
    """
    if e.dim != 2:
        raise ValueError(f"qubit solver requires dim = 2, got {e.dim}")
    if not is_uniform_prior(e, tol):
        raise ValueError("qubit solver requires a uniform prior")
    if not c.is_balanced:
        raise ValueError("cost function is not balanced: no certificate permutation exists")
    if c.size != e.size:
        raise ValueError(f"cost has {c.size} values but the ensemble has {e.size} states")
    if method not in ("auto", "brute", "benevolent"):
        raise ValueError(f"unknown method {method!r}")

    gram = bloch_gram(e)
    inst = QapInstance(cost_gram(c), gram)
    diagnostics = is_benevolent(-gram, tol)

    n_star = None
    method_used = None
    if method in ("auto", "benevolent"):
        fast = benevolent_solve(c, gram, tol=tol, cap=cap)
        if fast is not None:
            n_star, objective = fast
            method_used = "benevolent"
            if method == "auto" and e.size <= cap:
                _, objective_bf = brute_force_solve(inst, cap=cap)
                if abs(objective_bf - objective) > CROSS_METHOD_TOL:
                    raise NumericalCheckError(
                        f"fast path objective {objective!r} disagrees with "
                        f"enumeration {objective_bf!r}"
                    )
        elif method == "benevolent":
            raise ValueError(
                "no benevolent structure found in -bloch_gram; use method='brute' or 'auto'"
            )
    if n_star is None:
        if method == "auto" and e.size > cap:
            raise FactorialCapError(
                f"M = {e.size} exceeds the enumeration cap {cap} and no benevolent "
                "structure was found"
            )
        n_star, objective = brute_force_solve(inst, cap=cap)
        method_used = "brute_force"

    e_star = effective_operator(e, c, n_star)
    value = c.mean - float(np.linalg.norm(pauli_vector(e_star))) / 2
    measurement = optimal_two_outcome_measurement(e, c, n_star, tol=tol)
    verified = condition_check(e, c, n_star, tol=tol, cap=cap) if e.size <= cap else False
    return GuessworkReport(
        value=value,
        optimal_numbering=n_star,
        measurement=measurement,
        method=method_used,
        condition_verified=verified,
        mean_cost=c.mean,
        trace_norm_term=trace_norm(e_star) / 2,
        diagnostics=diagnostics,
    )


def min_guesswork_general(
    e: Ensemble,
    c: CostFunction,
    candidate=None,
    tol: float = EIGEN_TOL,
    cap: int = DEFAULT_FACTORIAL_CAP,
) -> GuessworkReport | None:
    """Certified minimum guesswork in arbitrary dimension, or None.

    Takes the trace-norm-maximizing numbering (or a provided candidate),
    checks the sufficient condition |E(n*)| >= E(n) against every numbering,
    and returns the report only when the condition holds.  None means the
    condition failed at this candidate; the minimum may be smaller than the
    candidate's achievable value (the condition is sufficient, not necessary).
    """
    if not c.is_balanced:
        raise ValueError("cost function is not balanced: no certificate permutation exists")
    if c.size != e.size:
        raise ValueError(f"cost has {c.size} values but the ensemble has {e.size} states")
    if candidate is None:
        candidate, norm_value = tracenorm_argmax(e, c, cap=cap)
    else:
        candidate = require_numbering(candidate, size=e.size)
        norm_value = trace_norm(effective_operator(e, c, candidate))
    if not condition_check(e, c, candidate, tol=tol, cap=cap):
        return None
    measurement = optimal_two_outcome_measurement(e, c, candidate, tol=tol)
    return GuessworkReport(
        value=c.mean - norm_value / 2,
        optimal_numbering=candidate,
        measurement=measurement,
        method="condition_check_only",
        condition_verified=True,
        mean_cost=c.mean,
        trace_norm_term=norm_value / 2,
        diagnostics=None,
    )


def permute_problem(
    e: Ensemble, c: CostFunction, sigma1, sigma2
) -> tuple[Ensemble, CostFunction]:
    """Relabel the problem: (rho o sigma2, gamma o sigma1).

    The minimum guesswork is invariant under any such relabeling, and optimal
    numberings map as n -> sigma2^-1 o n o sigma1.
    """
    sigma1 = require_numbering(sigma1, size=c.size)
    sigma2 = require_numbering(sigma2, size=e.size)
    permuted_states = [e.states[label - 1] for label in sigma2]
    permuted_values = [c.values[t - 1] for t in sigma1]
    return validate(permuted_states), cost_function(permuted_values)


def simulate(
    e: Ensemble,
    c: CostFunction,
    m: NumberingMeasurement,
    samples: int,
    seed: int,
    tol: float = EIGEN_TOL,
) -> tuple[float, float]:
    """Monte Carlo estimate of the guesswork of measurement ``m``.

    Each round draws a state label from the prior, draws a numbering outcome
    with probability Tr[pi(n) rho] / Tr[rho], and pays gamma(n^-1(label)).
    Returns (sample mean, standard error); the standard error is NaN for a
    single sample.  Fully deterministic for a fixed seed.
    """
    m.validated(tol)
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if c.size != e.size:
        raise ValueError(f"cost has {c.size} values but the ensemble has {e.size} states")
    rng = np.random.default_rng(seed)
    size = e.size

    prior = np.clip(e.prior, 0.0, None)
    prior = prior / prior.sum()
    outcomes = list(m.elements.items())
    # joint[j, label] = Tr[pi_j rho(label)]; tiny negatives are numerical noise
    joint = np.array(
        [
            [float(np.trace(element @ state).real) for state in e.states]
            for _, element in outcomes
        ]
    )
    joint = np.clip(joint, 0.0, None)
    # a zero column belongs to a zero-trace state, which is never drawn
    column_totals = joint.sum(axis=0, keepdims=True)
    conditional = joint / np.where(column_totals > 0, column_totals, 1.0)
    # cost_table[j, label] = gamma(n_j^-1(label))
    cost_table = np.array(
        [[c.values[invert(numbering)[label] - 1] for label in range(size)]
         for numbering, _ in outcomes]
    )

    labels = rng.choice(size, size=samples, p=prior)
    drawn = np.empty(samples, dtype=np.intp)
    for label in range(size):
        hits = np.flatnonzero(labels == label)
        if hits.size:
            drawn[hits] = rng.choice(len(outcomes), size=hits.size, p=conditional[:, label])
    costs = cost_table[drawn, labels]
    estimate = float(costs.mean())
    if samples < 2:
        return estimate, math.nan
    return estimate, float(costs.std(ddof=1) / math.sqrt(samples))
