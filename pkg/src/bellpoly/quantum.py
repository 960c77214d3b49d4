"""Quantum violations, GHZ realizations, and a dense qubit cross-check layer.

The maximal quantum value of an inequality reduces to maximizing
|sum_s beta(s) prod_k e^(i phi_k s_k)| over one angle per site.  Every
extreme point of the quantum body has the cosine form
xi(s) = cos(phi0 + sum_k phi_k s_k) and is realized by the generalized GHZ
state with observables in the x-y plane of the Bloch sphere.  A dense
simulator, an operator-norm cross-check and partial-transpose utilities
keep the variational formula honest.
"""

from __future__ import annotations

import math
import operator
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence, Union

import numpy as np
from scipy.optimize import minimize

from .classical import CorrelationVector
from .inequality import BellTable
from .transform import MAX_SITES, DimensionMismatchError

__all__ = [
    "DensityMatrix",
    "NormCrossCheckError",
    "ObservableSpec",
    "PhaseVector",
    "ViolationResult",
    "bell_operator_norm_exact",
    "extreme_point_q",
    "ghz_observables",
    "ghz_state",
    "max_violation",
    "mermin_bound",
    "partial_transpose",
    "sample_separable",
    "simulate_correlations",
    "squared_modulus_and_gradient",
    "violation_value",
    "xy_observable",
]

TWO_PI = 2.0 * math.pi
MAX_SIMULATOR_QUBITS = 12
_MAX_NORM_QUBITS = 10
_HERMITIAN_TOL = 1e-12
_TRACE_TOL = 1e-12
_EIGENVALUE_TOL = 1e-10

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)


class NormCrossCheckError(RuntimeError):
    """The two norm routes disagree; signals an implementation bug."""


@dataclass(frozen=True)
class PhaseVector:
    """A global phase and one angle per site, reduced to [0, 2pi)."""

    phi0: float
    phi: tuple[float, ...]

    def __post_init__(self) -> None:
        phi = tuple(float(v) % TWO_PI for v in self.phi)
        if not 1 <= len(phi) <= MAX_SITES:
            raise ValueError(f"need 1..{MAX_SITES} site angles, got {len(phi)}")
        object.__setattr__(self, "phi0", float(self.phi0) % TWO_PI)
        object.__setattr__(self, "phi", phi)

    @property
    def n(self) -> int:
        return len(self.phi)


def xy_observable(theta: float) -> np.ndarray:
    """cos(theta) sigma_x + sin(theta) sigma_y; Hermitian and squares to 1."""
    return math.cos(theta) * SIGMA_X + math.sin(theta) * SIGMA_Y


@dataclass(frozen=True)
class ObservableSpec:
    """Two x-y-plane observables per site, given by their azimuth angles."""

    angles: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        angles = tuple((float(a), float(b)) for a, b in self.angles)
        if not 1 <= len(angles) <= MAX_SITES:
            raise ValueError(f"need 1..{MAX_SITES} sites, got {len(angles)}")
        object.__setattr__(self, "angles", angles)

    @property
    def n(self) -> int:
        return len(self.angles)

    def matrix(self, site: int, choice: int) -> np.ndarray:
        """The 2x2 observable of one site (1-based) and choice (0 or 1)."""
        if not 1 <= site <= self.n:
            raise IndexError(f"site {site} out of range 1..{self.n}")
        if choice not in (0, 1):
            raise ValueError("choice must be 0 or 1")
        return xy_observable(self.angles[site - 1][choice])

    def matrix_pairs(self) -> list[tuple[np.ndarray, np.ndarray]]:
        return [
            (xy_observable(a), xy_observable(b)) for a, b in self.angles
        ]


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A validated n-qubit state: Hermitian, unit trace, positive."""

    n: int
    entries: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        n = operator.index(self.n)
        if not 1 <= n <= MAX_SIMULATOR_QUBITS:
            raise ValueError(f"qubit count must be 1..{MAX_SIMULATOR_QUBITS}, got {n}")
        rho = np.array(self.entries, dtype=complex)
        dim = 1 << n
        if rho.shape != (dim, dim):
            raise DimensionMismatchError(f"expected a {dim}x{dim} matrix for n={n}")
        if np.abs(rho - rho.conj().T).max() > _HERMITIAN_TOL:
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(rho).real - 1.0) > _TRACE_TOL or abs(np.trace(rho).imag) > _TRACE_TOL:
            raise ValueError("density matrix trace is not 1")
        if np.linalg.eigvalsh(rho).min() < -_EIGENVALUE_TOL:
            raise ValueError("density matrix has a negative eigenvalue")
        rho.flags.writeable = False
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "entries", rho)


@lru_cache(maxsize=16)
def _bit_matrix(n: int) -> np.ndarray:
    """(2^n, n) matrix of choice bits: row s holds (s_1, ..., s_n)."""
    s = np.arange(1 << n)
    return ((s[:, None] >> np.arange(n)[None, :]) & 1).astype(float)


def _coefficient_array(beta: BellTable) -> np.ndarray:
    c = beta.coefficients
    return np.asarray(c.numerators, dtype=float) / (1 << c.log_denominator)


def violation_value(beta: BellTable, phases: PhaseVector) -> float:
    """|sum_s beta(s) prod_k e^(i phi_k s_k)|; the global phase drops out."""
    if phases.n != beta.n:
        raise DimensionMismatchError(f"site counts differ: {phases.n} vs {beta.n}")
    coeffs = _coefficient_array(beta)
    total = coeffs @ np.exp(1j * (_bit_matrix(beta.n) @ np.asarray(phases.phi)))
    return float(abs(total))


def squared_modulus_and_gradient(
    beta: BellTable, phi: Sequence[float]
) -> tuple[float, np.ndarray]:
    """Value and analytic gradient of |T(phi)|^2, T = sum_s beta(s) e^(i phi.s)."""
    bit_matrix = _bit_matrix(beta.n)
    weighted = _coefficient_array(beta) * np.exp(1j * (bit_matrix @ np.asarray(phi, float)))
    total = weighted.sum()
    partials = bit_matrix.T @ weighted  # dT/dphi_k = i * partials[k]
    value = float((total * total.conjugate()).real)
    grad = -2.0 * (total.conjugate() * partials).imag
    return value, grad


@dataclass(frozen=True)
class ViolationResult:
    value: float
    phases: PhaseVector
    converged: bool
    gradient_norm: float


def mermin_bound(n: int) -> float:
    """2^((n-1)/2), the overall maximum over all inequalities."""
    if n < 1:
        raise ValueError(f"site count must be positive, got {n}")
    return 2.0 ** ((n - 1) / 2)


def _start_points(n: int, seed: int, random_starts: int) -> np.ndarray:
    axes = [np.array([0.0, 0.5 * math.pi, math.pi, 1.5 * math.pi])] * n
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, n)
    rng = np.random.default_rng(seed)
    extra = rng.uniform(0.0, TWO_PI, size=(random_starts, n))
    return np.vstack([grid, extra])


def max_violation(
    beta: BellTable,
    *,
    seed: int = 0,
    random_starts: int = 32,
    max_iterations: int = 500,
    gradient_tol: float = 1e-12,
) -> ViolationResult:
    """Global maximum of violation_value over the torus of site angles.

    Multi-start ascent on the smooth squared modulus: starts on the grid
    {0, pi/2, pi, 3pi/2}^n plus `random_starts` seeded random points, each
    polished with gradient-based local optimization.  Deterministic for a
    given seed.  Nonconvergence is reported via the flag, never raised.
    """
    if not any(beta.coefficients.numerators):
        raise ValueError("the zero table has no violation to maximize")

    def negated(phi: np.ndarray) -> tuple[float, np.ndarray]:
        value, grad = squared_modulus_and_gradient(beta, phi)
        return -value, -grad

    best_value = -1.0
    best_phi = None
    for start in _start_points(beta.n, seed, random_starts):
        res = minimize(
            negated,
            start,
            jac=True,
            method="L-BFGS-B",
            options={"maxiter": max_iterations, "gtol": gradient_tol, "ftol": 0.0},
        )
        if -res.fun > best_value:
            best_value = -res.fun
            best_phi = res.x
    _, grad = squared_modulus_and_gradient(beta, best_phi)
    gradient_norm = float(np.linalg.norm(grad))
    return ViolationResult(
        value=float(math.sqrt(max(best_value, 0.0))),
        phases=PhaseVector(0.0, tuple(best_phi)),
        converged=bool(gradient_norm <= 1e-8),
        gradient_norm=gradient_norm,
    )


def extreme_point_q(phases: PhaseVector) -> CorrelationVector:
    """The quantum-body extreme point xi(s) = cos(phi0 + sum_k phi_k s_k)."""
    angles = phases.phi0 + _bit_matrix(phases.n) @ np.asarray(phases.phi)
    return CorrelationVector(phases.n, tuple(np.cos(angles)))


def ghz_observables(phases: PhaseVector) -> ObservableSpec:
    """Observable angles realizing extreme_point_q(phases) on the GHZ state.

    With alpha = phi0/n, site k measures azimuth alpha for choice 0 and
    phi_k + alpha for choice 1.
    """
    alpha = phases.phi0 / phases.n
    return ObservableSpec(tuple((alpha, phi_k + alpha) for phi_k in phases.phi))


def ghz_state(n: int) -> np.ndarray:
    """(|0...0> + |1...1>)/sqrt(2) in the computational basis."""
    if not 1 <= n <= MAX_SIMULATOR_QUBITS:
        raise ValueError(f"qubit count must be 1..{MAX_SIMULATOR_QUBITS}, got {n}")
    psi = np.zeros(1 << n, dtype=complex)
    psi[0] = psi[-1] = 1.0 / math.sqrt(2.0)
    return psi


def _apply_site_gate(tensor: np.ndarray, gate: np.ndarray, axis: int) -> np.ndarray:
    moved = np.tensordot(gate, tensor, axes=([1], [axis]))
    return np.moveaxis(moved, 0, axis)


def simulate_correlations(
    state: Union[np.ndarray, DensityMatrix], obs: ObservableSpec
) -> CorrelationVector:
    """xi(s) = <prod_k A_k(s_k)> by dense tensor contraction.

    Site k is tensor factor k (site 1 leftmost, i.e. most significant bit of
    the basis index).  Accepts a state vector or a density matrix.
    """
    n = obs.n
    if n > MAX_SIMULATOR_QUBITS:
        raise ValueError(f"simulator is limited to {MAX_SIMULATOR_QUBITS} qubits")
    pairs = obs.matrix_pairs()
    dim = 1 << n

    if isinstance(state, DensityMatrix):
        if state.n != n:
            raise DimensionMismatchError(f"state has {state.n} qubits, spec {n} sites")
        rho = state.entries
        values = []
        for s in range(dim):
            acted = rho.reshape((2,) * n + (dim,))
            for k in range(n):
                acted = _apply_site_gate(acted, pairs[k][(s >> k) & 1], k)
            values.append(np.trace(acted.reshape(dim, dim)))
    else:
        psi = np.asarray(state, dtype=complex)
        if psi.shape != (dim,):
            raise DimensionMismatchError(
                f"state vector has shape {psi.shape}, expected ({dim},)"
            )
        values = []
        for s in range(dim):
            acted = psi.reshape((2,) * n)
            for k in range(n):
                acted = _apply_site_gate(acted, pairs[k][(s >> k) & 1], k)
            values.append(np.vdot(psi, acted.reshape(dim)))
    values = np.asarray(values)
    if np.abs(values.imag).max() > 1e-9:
        raise ValueError("expectations came out complex; observables not Hermitian?")
    if np.abs(values.real).max() > 1.0 + 1e-9:
        raise ValueError("expectation outside [-1, 1]; state not normalized?")
    xi = np.clip(values.real, -1.0, 1.0)
    return CorrelationVector(n, tuple(xi))


def _dense_bell_operator(
    coeffs: np.ndarray, pairs: Sequence[tuple[np.ndarray, np.ndarray]]
) -> np.ndarray:
    """sum_s beta(s) A_1(s_1) x ... x A_n(s_n), built by halving recursion."""
    if len(pairs) == 1:
        return coeffs[0] * pairs[0][0] + coeffs[1] * pairs[0][1]
    half = len(coeffs) // 2
    low = _dense_bell_operator(coeffs[:half], pairs[:-1])
    high = _dense_bell_operator(coeffs[half:], pairs[:-1])
    # the last site is the most significant coefficient bit; kron keeps the
    # first factor most significant, so the last site goes in front
    return np.kron(pairs[-1][0], low) + np.kron(pairs[-1][1], high)


def bell_operator_norm_exact(
    beta: BellTable,
    observables: Union[ObservableSpec, Sequence[tuple[np.ndarray, np.ndarray]]],
) -> float:
    """Operator norm of the Bell operator, computed two ways and cross-checked.

    Route (a): largest singular value of the dense operator.  Route (b):
    maximum over the eigenvalue tuples of C_k = A_k(1) A_k(0) of
    |sum_s beta(s) prod_k gamma_k^(s_k)|.  Disagreement beyond 1e-8 raises
    NormCrossCheckError.
    """
    if isinstance(observables, ObservableSpec):
        pairs = observables.matrix_pairs()
    else:
        pairs = [(np.asarray(a, complex), np.asarray(b, complex)) for a, b in observables]
    n = beta.n
    if len(pairs) != n:
        raise DimensionMismatchError(f"{len(pairs)} observable pairs for {n} sites")
    if n > _MAX_NORM_QUBITS:
        raise ValueError(f"dense norm check is limited to {_MAX_NORM_QUBITS} qubits")

    coeffs = _coefficient_array(beta)
    dense = _dense_bell_operator(coeffs, pairs)
    norm_dense = float(np.linalg.svd(dense, compute_uv=False)[0])

    eigenvalues = [np.linalg.eigvals(b @ a) for a, b in pairs]
    best = 0.0
    bits = _bit_matrix(n).astype(int)
    for pick in range(1 << n):
        gammas = np.array(
            [eigenvalues[k][(pick >> k) & 1] for k in range(n)], dtype=complex
        )
        factors = np.prod(
            np.where(bits.astype(bool), gammas[None, :], 1.0), axis=1
        )
        best = max(best, float(abs(coeffs @ factors)))

    if abs(best - norm_dense) > 1e-8:
        raise NormCrossCheckError(
            f"eigenvalue route {best!r} vs dense route {norm_dense!r}"
        )
    return norm_dense


def partial_transpose(
    rho: Union[np.ndarray, DensityMatrix], sites: Iterable[int]
) -> np.ndarray:
    """Transpose the tensor factors in `sites` (1-based) in place of the basis.

    Involutive and trace-preserving; accepts any square 2^n x 2^n matrix.
    """
    mat = rho.entries if isinstance(rho, DensityMatrix) else np.asarray(rho, complex)
    dim = mat.shape[0]
    if mat.shape != (dim, dim) or dim & (dim - 1):
        raise DimensionMismatchError(f"expected a 2^n x 2^n matrix, got {mat.shape}")
    n = dim.bit_length() - 1
    subset = sorted(set(int(k) for k in sites))
    if subset and not (1 <= subset[0] and subset[-1] <= n):
        raise ValueError(f"sites {subset} out of range 1..{n}")
    tensor = mat.reshape((2,) * (2 * n))
    axes = list(range(2 * n))
    for k in subset:
        axes[k - 1], axes[n + k - 1] = axes[n + k - 1], axes[k - 1]
    return tensor.transpose(axes).reshape(dim, dim).copy()


def sample_separable(
    n: int, terms: int, seed: int | np.random.Generator = 0
) -> DensityMatrix:
    """A random convex mixture of random pure product states (PPT for all tau)."""
    if terms < 1:
        raise ValueError(f"need at least one term, got {terms}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    weights = rng.dirichlet(np.ones(terms))
    dim = 1 << n
    rho = np.zeros((dim, dim), dtype=complex)
    for w in weights:
        psi = np.ones(1, dtype=complex)
        for _ in range(n):
            amp = rng.normal(size=2) + 1j * rng.normal(size=2)
            amp /= np.linalg.norm(amp)
            psi = np.kron(psi, amp)
        rho += w * np.outer(psi, psi.conj())
    return DensityMatrix(n, rho)
