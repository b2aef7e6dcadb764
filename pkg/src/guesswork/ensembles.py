"""Ensembles of subnormalized quantum states, and generators for standard families.

An ensemble is a list of PSD operators rho(1..M) whose traces form the prior
distribution (they sum to 1).  For qubits the polygon / anti-prism family
places Bloch vectors at

    v(rho(m)) = lambda * (cos(2 pi (m-1) / M), sin(2 pi (m-1) / M), (-1)^(m-1) h)

so h = 0 is a regular polygon in the equatorial plane and even M with h > 0 is
an anti-prism.  The qubit SIC (tetrahedron, M = 4) and MUB (octahedron, M = 6)
ensembles are the pure anti-prisms with h = 1/sqrt(2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .operators import EIGEN_TOL, from_bloch, pauli_vector, require_hermitian

TRACE_TOL = 1e-10


@dataclass(frozen=True)
class Ensemble:
    """Validated ensemble with cached prior, average state and Bloch vectors.

    ``prior[m-1] = Tr[rho(m)]``; ``average_state`` is the arithmetic mean of
    the stored (subnormalized) states; ``bloch`` stacks the Pauli vectors of
    the states and is present only for dim = 2.
    """

    dim: int
    states: tuple[np.ndarray, ...]
    prior: np.ndarray
    average_state: np.ndarray
    bloch: np.ndarray | None

    @property
    def size(self) -> int:
        return len(self.states)


def validate(raw_states, psd_tol: float = EIGEN_TOL, trace_tol: float = TRACE_TOL) -> Ensemble:
    """Check PSD and total-trace invariants and build the cached Ensemble."""
    if len(raw_states) == 0:
        raise ValueError("ensemble must contain at least one state")
    states = []
    dim = None
    for index, raw in enumerate(raw_states):
        mat = require_hermitian(raw, name=f"state {index}")
        if dim is None:
            dim = mat.shape[0]
        elif mat.shape[0] != dim:
            raise ValueError(
                f"mixed dimensions: state {index} is {mat.shape[0]}x{mat.shape[0]}, expected {dim}"
            )
        low = float(np.linalg.eigvalsh(mat)[0])
        if low < -psd_tol:
            raise ValueError(f"state {index} is not PSD (min eigenvalue {low:.3e})")
        mat.setflags(write=False)
        states.append(mat)
    prior = np.array([float(np.trace(s).real) for s in states])
    total = float(prior.sum())
    if abs(total - 1.0) > trace_tol:
        raise ValueError(f"total trace is {total!r}, must be 1 within {trace_tol:.1e}")
    average = sum(states) / len(states)
    average.setflags(write=False)
    prior.setflags(write=False)
    bloch = None
    if dim == 2:
        bloch = np.stack([pauli_vector(s) for s in states])
        bloch.setflags(write=False)
    return Ensemble(
        dim=dim, states=tuple(states), prior=prior, average_state=average, bloch=bloch
    )


def antiprism_h_bound(m: int) -> float:
    """Largest anti-prism height (Bloch units) admitting the zig-zag solution.

    0 for odd M; sqrt((1 - cos(2 pi / M)) / 2) when M/2 is even;
    sqrt((cos(2 pi / M) - cos(4 pi / M)) / 2) when M/2 is odd.
    """
    if m < 2:
        raise ValueError("m must be >= 2")
    if m == 2:
        # the two vertices are antipodal whatever the height, and the
        # monotonicity constraint is vacuous at M = 2
        return math.inf
    if m % 2 == 1:
        return 0.0
    if (m // 2) % 2 == 0:
        return math.sqrt((1.0 - math.cos(2 * math.pi / m)) / 2.0)
    return math.sqrt((math.cos(2 * math.pi / m) - math.cos(4 * math.pi / m)) / 2.0)


def generate_polygon_antiprism(m: int, h: float = 0.0, lam: float | str = "pure") -> Ensemble:
    """Uniform-prior qubit ensemble on a regular polygon (h = 0) or anti-prism.

    ``lam`` is the Bloch radius scale; the sentinel "pure" selects
    lambda = 1 / (M sqrt(1 + h^2)), making every state pure.  States have
    trace 1/M, so PSD requires lambda * sqrt(1 + h^2) <= 1/M.

    Odd M is rejected for h > 0: the alternating z-sign wraps inconsistently
    around an odd cycle, the vertex sum no longer vanishes, and the height
    bound for odd M is 0.
    """
    if m < 2:
        raise ValueError("m must be >= 2")
    if h < 0:
        raise ValueError("h must be >= 0")
    if m % 2 == 1 and h > 0:
        raise ValueError(
            f"h = {h} not allowed for odd M = {m}: the anti-prism height bound is 0 for odd M"
        )
    slant = math.sqrt(1.0 + h * h)
    if lam == "pure":
        scale = 1.0 / (m * slant)
    else:
        scale = float(lam)
        if scale <= 0:
            raise ValueError("lambda must be positive or the string 'pure'")
        if scale * slant > 1.0 / m + 1e-12:
            raise ValueError(
                f"lambda = {scale} violates PSD: lambda*sqrt(1+h^2) = {scale * slant:.6g} "
                f"exceeds 1/M = {1.0 / m:.6g}"
            )
    states = []
    for index in range(m):
        angle = 2 * math.pi * index / m
        v = scale * np.array([math.cos(angle), math.sin(angle), (-1.0) ** index * h])
        states.append(from_bloch(1.0 / m, v))
    return validate(states)


def generate_sic() -> Ensemble:
    """Qubit SIC ensemble: the pure M = 4 anti-prism at h = 1/sqrt(2) (tetrahedron)."""
    return generate_polygon_antiprism(4, h=antiprism_h_bound(4), lam="pure")


def generate_mub() -> Ensemble:
    """Qubit MUB ensemble: the pure M = 6 anti-prism at h = 1/sqrt(2) (octahedron)."""
    return generate_polygon_antiprism(6, h=antiprism_h_bound(6), lam="pure")


def generate_random_uniform_prior(m: int, dim: int, seed: int) -> Ensemble:
    """Reproducible random ensemble of M states, each PSD with trace exactly 1/M.

    dim = 2: uniform Bloch directions with radius uniform in [0, 1/M].
    dim > 2: normalized Ginibre states (G G^dag scaled to trace 1/M).
    """
    if m < 2:
        raise ValueError("m must be >= 2")
    if dim < 2:
        raise ValueError("dim must be >= 2")
    rng = np.random.default_rng(seed)
    states = []
    for _ in range(m):
        if dim == 2:
            direction = rng.normal(size=3)
            norm = float(np.linalg.norm(direction))
            while norm < 1e-12:
                direction = rng.normal(size=3)
                norm = float(np.linalg.norm(direction))
            radius = rng.uniform(0.0, 1.0 / m)
            states.append(from_bloch(1.0 / m, radius * direction / norm))
        else:
            ginibre = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
            wishart = ginibre @ ginibre.conj().T
            states.append(wishart / (m * float(np.trace(wishart).real)))
    return validate(states)


def is_uniform_prior(e: Ensemble, tol: float = TRACE_TOL) -> bool:
    """True iff every prior weight is within tol of 1/M."""
    return bool(np.max(np.abs(e.prior - 1.0 / e.size)) <= tol)


def constant_overlap_check(e: Ensemble, tol: float = TRACE_TOL) -> bool:
    """True iff v(average state) . v(rho(m)) is constant over m (dim = 2 only)."""
    if e.dim != 2:
        raise ValueError(f"constant_overlap_check requires dim = 2, got {e.dim}")
    center = pauli_vector(e.average_state)
    dots = e.bloch @ center
    return bool(np.max(np.abs(dots - dots.mean())) <= tol)


@dataclass(frozen=True)
class EnsembleFamilySpec:
    """Generator configuration: which family, and its parameters."""

    family: str
    m: int = 0
    h: float = 0.0
    lam: float | str = "pure"
    dim: int = 2
    seed: int = 0

    def build(self) -> Ensemble:
        if self.family == "polygon_antiprism":
            return generate_polygon_antiprism(self.m, h=self.h, lam=self.lam)
        if self.family == "sic":
            return generate_sic()
        if self.family == "mub":
            return generate_mub()
        if self.family == "random":
            return generate_random_uniform_prior(self.m, self.dim, self.seed)
        raise ValueError(f"unknown ensemble family {self.family!r}")

    @classmethod
    def from_dict(cls, doc: dict) -> "EnsembleFamilySpec":
        if "family" not in doc:
            raise ValueError("family spec requires a 'family' key")
        lam = doc.get("lambda", "pure")
        if lam != "pure":
            lam = float(lam)
        return cls(
            family=str(doc["family"]),
            m=int(doc.get("M", doc.get("m", 0))),
            h=float(doc.get("h", 0.0)),
            lam=lam,
            dim=int(doc.get("dim", 2)),
            seed=int(doc.get("seed", 0)),
        )
