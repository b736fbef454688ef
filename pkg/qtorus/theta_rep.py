"""
Theta Representation

The finite-dimensional θ-sector picture at h = 1/N. On the sector
ℋ_ℏ(θ) the generators act on the position basis φ_0 ... φ_{N-1} as

    U φ_m = e^{2πi(θ1 + m)/N} φ_m,    V φ_m = e^{2πiθ2/N} φ_{m+1},

with φ_N ≡ φ_0 (wrap phase 1), so that U^N = e^{2πiθ1} and V^N = e^{2πiθ2}
are scalars. Averaging the normalized matrix trace over θ recovers τ_ℏ.
"""

import cmath
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, Iterator, List, Mapping, Optional, Tuple

import numpy as np

from .errors import ArgumentError, DimensionMismatchError, NonUnitaryError
from .operation_logger import get_logger
from .weyl_algebra import AlgebraElement, PlanckParameter, adjoint, multiply, reduce_unit_interval

UNITARITY_TOLERANCE = 1e-10


@dataclass(frozen=True)
class ThetaPoint:
    """Quasi-momentum θ = (θ1, θ2) on the torus, reduced to [0, 1)²."""
    theta1: float = 0.0
    theta2: float = 0.0

    def __post_init__(self):
        for name in ('theta1', 'theta2'):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ArgumentError(f"{name} must be finite, got {value}")
            object.__setattr__(self, name, reduce_unit_interval(value))


@dataclass(frozen=True, eq=False)
class SectorMatrix:
    """Dense N×N complex matrix acting on ℋ_ℏ(θ)."""
    entries: np.ndarray

    def __post_init__(self):
        entries = np.array(self.entries, dtype=complex)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1] or entries.shape[0] < 1:
            raise DimensionMismatchError(f"Sector matrix must be square and non-empty, got shape {entries.shape}")
        entries.setflags(write=False)
        object.__setattr__(self, 'entries', entries)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def dagger(self) -> 'SectorMatrix':
        return SectorMatrix(self.entries.conj().T)

    def __matmul__(self, other: 'SectorMatrix') -> 'SectorMatrix':
        _check_dims(self, other)
        return SectorMatrix(self.entries @ other.entries)

    def allclose(self, other: 'SectorMatrix', atol: float = 1e-12) -> bool:
        _check_dims(self, other)
        return bool(np.allclose(self.entries, other.entries, rtol=0.0, atol=atol))

    def to_document(self) -> Dict:
        """{"dim": N, "entries": [re, im, re, im, ...]} in row-major order."""
        flat = self.entries.reshape(-1)
        interleaved: List[float] = []
        for value in flat:
            interleaved.extend((float(value.real), float(value.imag)))
        return {"dim": self.dim, "entries": interleaved}

    @classmethod
    def from_document(cls, document: Mapping) -> 'SectorMatrix':
        try:
            dim = int(document["dim"])
            values = np.asarray(document["entries"], dtype=float)
        except (KeyError, TypeError, ValueError) as e:
            raise ArgumentError(f"Malformed sector matrix document: {e}") from e
        if dim < 1 or values.size != 2 * dim * dim:
            raise DimensionMismatchError(
                f"Sector matrix document declares dim {dim} but carries {values.size // 2} entries",
                expected=dim * dim,
                actual=values.size // 2
            )
        return cls((values[0::2] + 1j * values[1::2]).reshape(dim, dim))

    def csv_rows(self) -> Iterator[Tuple[int, int, float, float]]:
        """(row, col, re, im) in row-major order."""
        for row in range(self.dim):
            for col in range(self.dim):
                value = self.entries[row, col]
                yield row, col, float(value.real), float(value.imag)


def _check_dims(x: SectorMatrix, y: SectorMatrix) -> None:
    if x.dim != y.dim:
        raise DimensionMismatchError(
            f"Sector dimensions differ: {x.dim} vs {y.dim}", expected=x.dim, actual=y.dim
        )


def identity_matrix(n: int) -> SectorMatrix:
    return SectorMatrix(np.eye(n, dtype=complex))


def _clock_diagonal(m: int, n: int, theta: ThetaPoint) -> np.ndarray:
    """Diagonal of U^m: e^{2πi m(θ1 + j)/N}, with the integer part m·j reduced mod N."""
    j = np.arange(n)
    integer_turns = ((m * j) % n) / n
    return np.exp(2j * np.pi * (integer_turns + m * theta.theta1 / n))


def sector_generators(planck: PlanckParameter, theta: ThetaPoint) -> Tuple[SectorMatrix, SectorMatrix]:
    """
    Clock and shift matrices of U and V on ℋ_ℏ(θ).

    Args:
        planck: Planck parameter (the sector dimension is N)
        theta: Sector label

    Returns:
        (uMat, vMat)
    """
    n = planck.n
    u_mat = np.diag(_clock_diagonal(1, n, theta))
    v_mat = np.zeros((n, n), dtype=complex)
    j = np.arange(n)
    v_mat[(j + 1) % n, j] = cmath.exp(2j * math.pi * theta.theta2 / n)
    return SectorMatrix(u_mat), SectorMatrix(v_mat)


def represent(a: AlgebraElement, theta: ThetaPoint, dim: Optional[int] = None) -> SectorMatrix:
    """
    Image of an algebra element on ℋ_ℏ(θ).

    Each monomial is expanded as W(m, k) = e^{-iλmk/2} U^m V^k; the matrix
    of U^m V^k sends e_j to e^{2πiθ2 k/N} e^{2πi m(θ1 + j + k)/N} e_{j+k}.

    Args:
        a: Algebra element
        theta: Sector label
        dim: Intended sector dimension, checked against N when given

    Returns:
        Sector matrix

    Raises:
        DimensionMismatchError: If dim is given and differs from N
    """
    n = a.planck.n
    if dim is not None and dim != n:
        raise DimensionMismatchError(
            f"Element lives at N={n} but a {dim}-dimensional sector was requested", expected=dim, actual=n
        )
    result = np.zeros((n, n), dtype=complex)
    cols = np.arange(n)
    for v, c in a.terms.items():
        # V^k moves column j to row j + k mod N
        rows = (cols + v.k) % n
        # clock phase of U^m is taken at the target row
        diagonal = _clock_diagonal(v.m, n, theta)
        # wrap phase 1: only θ2 enters the shift
        shift_phase = cmath.exp(2j * math.pi * ((v.k * theta.theta2 / n) % 1.0))
        weight = c * a.planck.half_phase(-v.m * v.k) * shift_phase
        result[rows, cols] += weight * diagonal[rows]
    return SectorMatrix(result)


def sector_trace(m: SectorMatrix) -> complex:
    """Normalized trace (1/N)Tr."""
    return complex(np.trace(m.entries)) / m.dim


def center_scalars(theta: ThetaPoint) -> Tuple[complex, complex]:
    """Values (e^{2πiθ1}, e^{2πiθ2}) taken by X = U^N and Y = V^N on the sector."""
    return cmath.exp(2j * math.pi * theta.theta1), cmath.exp(2j * math.pi * theta.theta2)


def theta_grid(grid: int) -> List[ThetaPoint]:
    """Uniform Q×Q grid {(i/Q, j/Q)} in row-major order."""
    if isinstance(grid, bool) or not isinstance(grid, (int, np.integer)) or grid < 1:
        raise ArgumentError(f"Theta grid size must be a positive integer, got {grid!r}")
    return [ThetaPoint(i / grid, j / grid) for i in range(grid) for j in range(grid)]


def exact_grid_size(a: AlgebraElement) -> int:
    """Smallest Q with Q > max(|m|, |k|)/N over the support of a."""
    return a.max_degree() // a.planck.n + 1


def theta_averaged_trace(a: AlgebraElement, grid: int, workers: int = 1) -> complex:
    """
    ∫_{T²} sector_trace(represent(a, θ)) d²θ on a uniform Q×Q grid.

    Sector traces of monomials are trigonometric polynomials in θ of degree
    max(|m|, |k|)/N, so the grid average equals τ_ℏ(a) exactly once
    Q > max(|m|, |k|)/N.

    Raises:
        ArgumentError: If grid < 1
    """
    points = theta_grid(grid)

    def point_trace(theta: ThetaPoint) -> complex:
        return sector_trace(represent(a, theta))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            traces = list(executor.map(point_trace, points))
    else:
        traces = [point_trace(theta) for theta in points]
    get_logger().debug(f"Theta-averaged trace on a {grid}x{grid} grid at N={a.planck.n}")
    return complex(np.sum(np.asarray(traces))) / len(points)


def theta_averaged_norm_squared(a: AlgebraElement, grid: int) -> float:
    """∫ (1/N)‖represent(a, θ)‖_F² d²θ on the uniform grid."""
    total = 0.0
    points = theta_grid(grid)
    for theta in points:
        total += float(np.linalg.norm(represent(a, theta).entries) ** 2) / a.planck.n
    return total / len(points)


def dft_matrix(n: int) -> SectorMatrix:
    """Unitary DFT ℱ_{mn} = e^{-2πimn/N}/√N."""
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
        raise ArgumentError(f"DFT size must be a positive integer, got {n!r}")
    j = np.arange(n)
    phases = (np.outer(j, j) % n) / n
    return SectorMatrix(np.exp(-2j * np.pi * phases) / math.sqrt(n))


def unitarity_defect(m: SectorMatrix) -> float:
    """Frobenius norm ‖M†M - I‖."""
    return float(np.linalg.norm(m.entries.conj().T @ m.entries - np.eye(m.dim)))


def is_unitary(m: SectorMatrix, tol: float = UNITARITY_TOLERANCE) -> bool:
    return unitarity_defect(m) <= tol


def conjugate_evolve(f: SectorMatrix, a: SectorMatrix, n: int) -> SectorMatrix:
    """
    Sector-level dynamics α_n(a) = F^{-n} a F^{n} for a unitary propagator F.

    Raises:
        DimensionMismatchError: If F and a differ in size
        NonUnitaryError: If ‖F†F - I‖ exceeds the unitarity tolerance
    """
    _check_dims(f, a)
    defect = unitarity_defect(f)
    if defect > UNITARITY_TOLERANCE:
        raise NonUnitaryError(f"Propagator is not unitary: ||F^dagger F - I|| = {defect:.3e}", defect=defect)
    forward = np.linalg.matrix_power(f.entries, abs(n))
    if n < 0:
        forward = forward.conj().T
    return SectorMatrix(forward.conj().T @ a.entries @ forward)


def homomorphism_defect(a: AlgebraElement, b: AlgebraElement, theta: ThetaPoint) -> float:
    """‖represent(ab) - represent(a)represent(b)‖_F."""
    lhs = represent(multiply(a, b), theta).entries
    rhs = represent(a, theta).entries @ represent(b, theta).entries
    return float(np.linalg.norm(lhs - rhs))


def adjoint_defect(a: AlgebraElement, theta: ThetaPoint) -> float:
    """‖represent(a†) - represent(a)†‖_F."""
    return float(np.linalg.norm(represent(adjoint(a), theta).entries - represent(a, theta).entries.conj().T))
