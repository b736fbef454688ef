"""
Bargmann Space Numerics

Entire functions ψ(z) with ∫|ψ|² dμ_ℏ < ∞, dμ_ℏ = (πℏ)⁻¹e^{-|z|²/ℏ} d²z.
Phase space is embedded as z = (x + ip)/√2, so the unit cell
D = [0, 1]² in (x, p) has d²z = dx dp / 2 and the lattice translations

    X = U(-i/√2),  Y = U(1/√2),  U = U(-iℏπ√2),  V = U(ℏπ√2)

act on the θ-sector basis φ_m^(θ) exactly like the clock and shift
matrices of theta_rep (wrap phase 1: φ_{m+N} = φ_m).

Position and momentum images of the basis are δ-combs, kept symbolic as
(location, amplitude) pairs and paired analytically with Gaussians or with
the diffraction kernel g.
"""

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Sequence, Tuple

import numpy as np
from numpy.polynomial import hermite, polynomial

from .errors import ArgumentError, ParameterMismatchError, ThetaConvergenceError, ThetaDomainError
from .operation_logger import get_logger
from .theta_rep import SectorMatrix, ThetaPoint, dft_matrix
from .weyl_algebra import PlanckParameter

Samples = Callable[[np.ndarray], np.ndarray]

POSITION = "position"
MOMENTUM = "momentum"
COMB_KINDS = (POSITION, MOMENTUM)

# log(float max) with a margin
_LOG_OVERFLOW = 700.0


@dataclass(frozen=True)
class ThetaSeriesParams:
    """Truncation control for the Jacobi θ-series (absolute tail tolerance)."""
    tolerance: float = 1e-15
    max_terms: int = 1000

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ArgumentError(f"Theta tolerance must be positive, got {self.tolerance}")
        if self.max_terms < 1:
            raise ArgumentError(f"Theta max_terms must be at least 1, got {self.max_terms}")


DEFAULT_SERIES = ThetaSeriesParams()


def _tail_bound(K: int, a: float, b: float) -> float:
    """Bound on Σ_{|k|>K} e^{-ak² + b|k|}; inf while the tail is not yet decreasing."""
    log_first = -a * (K + 1) ** 2 + b * (K + 1)
    log_ratio = -a * (2 * K + 3) + b
    if log_ratio >= 0 or log_first > _LOG_OVERFLOW:
        return math.inf
    return 2.0 * math.exp(log_first) / (1.0 - math.exp(log_ratio))


def theta_truncation(omega, tau: complex, params: ThetaSeriesParams = DEFAULT_SERIES) -> Tuple[int, float]:
    """
    Smallest K such that the terms |k| > K of ϑ(ω, τ) sum to less than the tolerance.

    The k-th term has modulus e^{-πk² Im τ - 2πk Im ω}, bounded by
    e^{-ak² + b|k|} with a = π Im τ and b = 2π max|Im ω|.

    Returns:
        (K, tail bound)

    Raises:
        ThetaDomainError: If Im τ <= 0
        ThetaConvergenceError: If 2K + 1 would exceed max_terms
    """
    tau = complex(tau)
    if not tau.imag > 0:
        raise ThetaDomainError(f"Theta series needs Im(tau) > 0, got tau = {tau}")
    a = math.pi * tau.imag
    b = 2.0 * math.pi * float(np.max(np.abs(np.imag(omega)), initial=0.0))
    # start past the peak of e^{-ak² + bk}
    K = max(0, math.ceil(b / (2.0 * a)))
    bound = _tail_bound(K, a, b)
    while bound >= params.tolerance:
        # budget counts all 2K + 1 terms
        if 2 * (K + 1) + 1 > params.max_terms:
            raise ThetaConvergenceError(
                f"Theta series did not reach tolerance {params.tolerance:.1e} within {params.max_terms} terms",
                achieved_bound=bound,
                max_terms=params.max_terms
            )
        K += 1
        bound = _tail_bound(K, a, b)
    return K, bound


def jacobi_theta(omega, tau: complex, params: ThetaSeriesParams = DEFAULT_SERIES):
    """
    ϑ(ω, τ) = Σ_k e^{iπk²τ + 2πikω}, vectorized over ω.

    Args:
        omega: Complex scalar or array
        tau: Modular parameter with Im τ > 0
        params: Truncation control

    Returns:
        complex for scalar ω, ndarray otherwise
    """
    omega_arr = np.asarray(omega, dtype=complex)
    tau = complex(tau)
    K, bound = theta_truncation(omega_arr, tau, params)
    k = np.arange(-K, K + 1)
    exponents = 1j * np.pi * k ** 2 * tau + 2j * np.pi * k * omega_arr[..., None]
    values = np.exp(exponents).sum(axis=-1)
    get_logger().debug(f"Theta series truncated at |k| <= {K}, tail bound {bound:.2e}")
    if omega_arr.ndim == 0:
        return complex(values)
    return values


@dataclass(frozen=True)
class BasisWavefunction:
    """Sector basis vector φ_m^(θ) at h = 1/N."""
    m: int
    theta: ThetaPoint
    planck: PlanckParameter

    def __post_init__(self):
        if not 0 <= self.m < self.planck.n:
            raise ArgumentError(f"Basis index must lie in [0, {self.planck.n}), got {self.m}")

    @property
    def normalization(self) -> complex:
        return _normalization(self.m, self.theta, self.planck)


def _normalization(m: int, theta: ThetaPoint, planck: PlanckParameter) -> complex:
    n = planck.n
    shift = theta.theta1 + m
    return (2.0 / n) ** 0.25 * cmath.exp(-math.pi * shift ** 2 / n - 2j * math.pi * theta.theta2 * m / n)


def _basis_samples(m: int, theta: ThetaPoint, planck: PlanckParameter, z, params: ThetaSeriesParams) -> np.ndarray:
    """φ_m^(θ)(z) for any integer m (no range check)."""
    n = planck.n
    z = np.asarray(z, dtype=complex)
    shift = theta.theta1 + m
    prefactor = np.exp(-n * math.pi * z ** 2 + 2.0 * math.sqrt(2.0) * math.pi * shift * z)
    omega = -1j * math.sqrt(2.0) * n * z + 1j * (shift + 1j * theta.theta2)
    return _normalization(m, theta, planck) * prefactor * jacobi_theta(omega, 1j * n, params)


def basis_value(b: BasisWavefunction, z, params: ThetaSeriesParams = DEFAULT_SERIES):
    """
    φ_m^(θ)(z) = C_m(θ) e^{-Nπz² + 2√2π(θ1+m)z} ϑ(-i√2Nz + i(θ1 + iθ2 + m), iN),
    C_m(θ) = (2/N)^{1/4} e^{-π(θ1+m)²/N - 2πiθ2 m/N}.
    """
    values = _basis_samples(b.m, b.theta, b.planck, z, params)
    if values.ndim == 0:
        return complex(values)
    return values


def gaussian_weight(z, planck: PlanckParameter) -> np.ndarray:
    """Density (πℏ)⁻¹e^{-|z|²/ℏ} of dμ_ℏ against d²z."""
    hbar = planck.hbar
    return np.exp(-np.abs(z) ** 2 / hbar) / (math.pi * hbar)


def cell_nodes(grid: int, planck: PlanckParameter) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """
    Tensor-product midpoint rule on the unit cell.

    Returns:
        (x, p, z, weights) flattened over the grid², weights include dμ_ℏ
    """
    if grid < 2:
        raise ArgumentError(f"Quadrature grid must be at least 2, got {grid}")
    nodes = (np.arange(grid) + 0.5) / grid
    x, p = np.meshgrid(nodes, nodes, indexing='ij')
    x = x.reshape(-1)
    p = p.reshape(-1)
    z = (x + 1j * p) / math.sqrt(2.0)
    weights = gaussian_weight(z, planck) / (2.0 * grid * grid)
    return x, p, z, weights


def _check_same_sector(b1: BasisWavefunction, b2: BasisWavefunction) -> None:
    if b1.planck != b2.planck or b1.theta != b2.theta:
        raise ParameterMismatchError(
            f"Basis functions live in different sectors: N={b1.planck.n}, θ={b1.theta} vs "
            f"N={b2.planck.n}, θ={b2.theta}"
        )


def quadrature_inner_product(
    b1: BasisWavefunction,
    b2: BasisWavefunction,
    grid: int,
    params: ThetaSeriesParams = DEFAULT_SERIES
) -> complex:
    """
    ∫_D conj(φ1) φ2 dμ_ℏ by the midpoint rule.

    Raises:
        ParameterMismatchError: If b1, b2 differ in N or θ
        ArgumentError: If grid < 2
    """
    _check_same_sector(b1, b2)
    _, _, z, weights = cell_nodes(grid, b1.planck)
    values1 = _basis_samples(b1.m, b1.theta, b1.planck, z, params)
    values2 = _basis_samples(b2.m, b2.theta, b2.planck, z, params)
    return complex(np.sum(np.conj(values1) * values2 * weights))


def sector_basis_samples(
    planck: PlanckParameter,
    theta: ThetaPoint,
    z,
    params: ThetaSeriesParams = DEFAULT_SERIES
) -> np.ndarray:
    """Rows φ_0 ... φ_{N-1} sampled at z."""
    return np.stack([_basis_samples(m, theta, planck, z, params) for m in range(planck.n)])


def basis_gram_matrix(
    planck: PlanckParameter,
    theta: ThetaPoint,
    grid: int,
    params: ThetaSeriesParams = DEFAULT_SERIES
) -> SectorMatrix:
    _, _, z, weights = cell_nodes(grid, planck)
    samples = sector_basis_samples(planck, theta, z, params)
    get_logger().debug(f"Gram matrix at N={planck.n}, θ={theta}, grid {grid}x{grid}")
    return SectorMatrix((np.conj(samples) * weights) @ samples.T)


def translation_apply(a: complex, samples: Samples, planck: PlanckParameter) -> Samples:
    """
    U(a)ψ(z) = exp((conj(a)z - |a|²/2)/ℏ) ψ(z - a).

    Args:
        a: Translation in the z-plane
        samples: Evaluator z -> ψ(z) on complex arrays
        planck: Planck parameter

    Returns:
        Evaluator of the translated function
    """
    a = complex(a)
    hbar = planck.hbar

    def translated(z):
        z = np.asarray(z, dtype=complex)
        return np.exp((a.conjugate() * z - abs(a) ** 2 / 2.0) / hbar) * samples(z - a)

    return translated


def generator_translations(planck: PlanckParameter) -> Dict[str, complex]:
    """Translation parameters of U, V and of the center X = U^N, Y = V^N."""
    step = planck.hbar * math.pi * math.sqrt(2.0)
    return {
        "U": -1j * step,
        "V": complex(step),
        "X": -1j / math.sqrt(2.0),
        "Y": complex(1.0 / math.sqrt(2.0)),
    }


def projective_phase(a: complex, b: complex, planck: PlanckParameter) -> complex:
    """e^{i Im(conj(a) b)/ℏ}, the cocycle in U(a)U(b) = e^{i Im(conj(a) b)/ℏ} U(a + b)."""
    return cmath.exp(1j * (complex(a).conjugate() * complex(b)).imag / planck.hbar)


@dataclass(frozen=True)
class DeltaComb:
    """Symbolic δ-comb: Σ amplitude·δ(· - location) over k ∈ [-K, K]."""
    kind: str
    base_index: int
    theta: ThetaPoint
    n: int
    truncation: int
    spikes: Tuple[Tuple[float, complex], ...]

    @property
    def locations(self) -> np.ndarray:
        return np.array([location for location, _ in self.spikes], dtype=float)

    @property
    def amplitudes(self) -> np.ndarray:
        return np.array([amplitude for _, amplitude in self.spikes], dtype=complex)


def build_comb(kind: str, m: int, theta: ThetaPoint, planck: PlanckParameter, truncation: int) -> DeltaComb:
    """
    Position comb Φ_m^(θ): spikes at (m + θ1)/N + k with amplitude e^{2πiθ2(m/N + k)}/√N.
    Momentum comb Φ̃_m^(θ): spikes at (θ2 + m)/N + k with amplitude e^{-2πiθ1(m/N + k)}/√N.
    """
    if kind not in COMB_KINDS:
        raise ArgumentError(f"Comb kind must be one of {COMB_KINDS}, got {kind!r}")
    n = planck.n
    if not 0 <= m < n:
        raise ArgumentError(f"Comb index must lie in [0, {n}), got {m}")
    if truncation < 0:
        raise ArgumentError(f"Comb truncation must be non-negative, got {truncation}")
    norm = 1.0 / math.sqrt(n)
    spikes = []
    for k in range(-truncation, truncation + 1):
        if kind == POSITION:
            location = (m + theta.theta1) / n + k
            turns = (theta.theta2 * (m + n * k) / n) % 1.0
        else:
            location = (theta.theta2 + m) / n + k
            turns = (-theta.theta1 * (m + n * k) / n) % 1.0
        spikes.append((location, norm * cmath.exp(2j * math.pi * turns)))
    return DeltaComb(kind, m, theta, n, truncation, tuple(spikes))


def _pair_with_gaussian(comb: DeltaComb, center: float, width: float) -> complex:
    """
    ∫ g(x) Φ(x) dx for g(x) = e^{-(x - center)²/(2 width²)}.

    A momentum spike at p contributes the plane wave √N e^{2πiNpx}, whose
    Gaussian pairing is closed-form.
    """
    locations = comb.locations
    amplitudes = comb.amplitudes
    if comb.kind == POSITION:
        # spikes sample the Gaussian directly
        return complex(np.sum(amplitudes * np.exp(-(locations - center) ** 2 / (2.0 * width ** 2))))
    # Fourier transform of the Gaussian at frequency Np
    q = comb.n * locations
    transforms = width * math.sqrt(2.0 * math.pi) * np.exp(
        2j * np.pi * q * center - 2.0 * np.pi ** 2 * q ** 2 * width ** 2
    )
    return complex(math.sqrt(comb.n) * np.sum(amplitudes * transforms))


def _test_centers(n: int) -> np.ndarray:
    return (np.arange(n * n) + 0.5) / (n * n)


def _comb_pairings(theta: ThetaPoint, planck: PlanckParameter, truncation: int) -> Tuple[np.ndarray, np.ndarray]:
    """N²×N pairing tables of position and momentum combs with Gaussians of width √ℏ."""
    if truncation < 1:
        raise ArgumentError(f"Comb truncation must be at least 1, got {truncation}")
    n = planck.n
    width = math.sqrt(planck.hbar)
    centers = _test_centers(n)
    position = [build_comb(POSITION, m, theta, planck, truncation) for m in range(n)]
    momentum = [build_comb(MOMENTUM, m, theta, planck, truncation) for m in range(n)]
    position_table = np.array([[_pair_with_gaussian(c, x0, width) for c in position] for x0 in centers])
    momentum_table = np.array([[_pair_with_gaussian(c, x0, width) for c in momentum] for x0 in centers])
    return position_table, momentum_table


def expected_change_of_basis(theta: ThetaPoint, planck: PlanckParameter) -> SectorMatrix:
    """e^{-2πiθ1θ2/N}·ℱ."""
    phase = cmath.exp(-2j * math.pi * theta.theta1 * theta.theta2 / planck.n)
    return SectorMatrix(phase * dft_matrix(planck.n).entries)


def verify_dft_lemma(theta: ThetaPoint, planck: PlanckParameter, truncation: int) -> float:
    """
    Max deviation between the Gaussian pairings of Φ_m^(θ) and of
    e^{-2πiθ1θ2/N} Σ_n ℱ_{mn} Φ̃_n^(θ).

    Raises:
        ArgumentError: If truncation < 1
    """
    position_table, momentum_table = _comb_pairings(theta, planck, truncation)
    predicted = momentum_table @ expected_change_of_basis(theta, planck).entries.T
    deviation = float(np.max(np.abs(position_table - predicted)))
    get_logger().debug(f"DFT lemma at N={planck.n}, θ={theta}, K={truncation}: deviation {deviation:.3e}")
    return deviation


def recover_change_of_basis(theta: ThetaPoint, planck: PlanckParameter, truncation: int) -> SectorMatrix:
    """Least-squares M with Φ_m = Σ_n M_mn Φ̃_n on the Gaussian pairings."""
    position_table, momentum_table = _comb_pairings(theta, planck, truncation)
    solution, _, _, _ = np.linalg.lstsq(momentum_table, position_table, rcond=None)
    return SectorMatrix(solution.T)


def _kernel_g(r, hbar: float):
    r = np.asarray(r, dtype=float)
    # np.sinc(r/π) = sin(r)/r with the removable singularity filled in
    values = np.exp(-hbar * r ** 2 + 1j * r) * np.sinc(r / np.pi) / (2.0 * np.pi * hbar)
    if values.ndim == 0:
        return complex(values)
    return values


def kernel_g(r, planck: PlanckParameter):
    """g(r) = (1/2πℏ) e^{-ℏr² + ir} sin(r)/r, g(0) = 1/(2πℏ)."""
    return _kernel_g(r, planck.hbar)


def comb_inner_product(c1: DeltaComb, c2: DeltaComb) -> complex:
    """
    (Φ1, Φ2) = Σ conj(a_x) a_y g((x - y)/2ℏ) over spikes x of Φ1 in [0, 1)
    and all spikes y of Φ2.

    Raises:
        ArgumentError: If either comb is not a position comb
        ParameterMismatchError: If the combs differ in N or θ
    """
    if c1.kind != POSITION or c2.kind != POSITION:
        raise ArgumentError("Comb pairing is defined for position combs only")
    if c1.n != c2.n or c1.theta != c2.theta:
        raise ParameterMismatchError(
            f"Combs live in different sectors: N={c1.n}, θ={c1.theta} vs N={c2.n}, θ={c2.theta}"
        )
    hbar = 1.0 / (2.0 * math.pi * c1.n)
    x = c1.locations
    inside = (x >= 0.0) & (x < 1.0)
    x = x[inside]
    a = c1.amplitudes[inside]
    y = c2.locations
    b = c2.amplitudes
    kernel = _kernel_g((x[:, None] - y[None, :]) / (2.0 * hbar), hbar)
    return complex(np.sum(np.conj(a)[:, None] * b[None, :] * kernel))


def diffraction_profile(
    h: float,
    figure_convention: bool,
    points: int = 501,
    r_max: float = 5.0
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Samples of |g(r/2ℏ)|² on r ∈ [-r_max, r_max].

    With figure_convention the plotted curves set ℏ := h; otherwise ℏ = h/2π.

    Returns:
        (r, g_abs2)
    """
    if not h > 0:
        raise ArgumentError(f"h must be positive, got {h}")
    if points < 2:
        raise ArgumentError(f"Need at least 2 sample points, got {points}")
    hbar = h if figure_convention else h / (2.0 * math.pi)
    r = np.linspace(-r_max, r_max, points)
    return r, np.abs(_kernel_g(r / (2.0 * hbar), hbar)) ** 2


def kernel_fwhm(hbar: float, samples: int = 200001) -> float:
    """Full width at half maximum of |g((x - y)/2ℏ)|² in x - y, by a dense scan."""
    if not hbar > 0:
        raise ArgumentError(f"hbar must be positive, got {hbar}")
    s = np.linspace(0.0, np.pi, samples)
    relative = np.exp(-2.0 * hbar * s ** 2) * np.sinc(s / np.pi) ** 2
    # relative[0] = 1 and relative vanishes at s = π, so the crossing is interior
    below = int(np.argmax(relative < 0.5))
    f0, f1 = relative[below - 1], relative[below]
    s_half = s[below - 1] + (f0 - 0.5) * (s[below] - s[below - 1]) / (f0 - f1)
    return float(2.0 * (2.0 * hbar * s_half))


def _hermite_plane(planck: PlanckParameter, nodes: int) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes w and weights for ∫ F(w) dμ_ℏ(w) ≈ Σ weight·F(w) (Gauss–Hermite in each axis)."""
    if nodes < 1:
        raise ArgumentError(f"Need at least one Hermite node, got {nodes}")
    t, weights = hermite.hermgauss(nodes)
    scale = math.sqrt(planck.hbar)
    w = scale * (t[:, None] + 1j * t[None, :])
    return w.reshape(-1), (weights[:, None] * weights[None, :]).reshape(-1) / math.pi


def monomial_norms(max_degree: int, planck: PlanckParameter, nodes: int = 60) -> List[Tuple[int, float, float]]:
    """
    ‖zⁿ‖² in Bargmann space, measured by quadrature.

    Returns:
        (n, measured, ℏⁿ·n!) for n = 0 ... max_degree
    """
    w, weights = _hermite_plane(planck, nodes)
    rows = []
    for n in range(max_degree + 1):
        measured = float(np.sum(weights * np.abs(w) ** (2 * n)))
        rows.append((n, measured, planck.hbar ** n * math.factorial(n)))
    return rows


def reproducing_kernel_defect(
    poly_coeffs: Sequence[complex],
    z_points,
    planck: PlanckParameter,
    nodes: int = 60
) -> float:
    """max_z |∫ e^{z conj(w)/ℏ} p(w) dμ_ℏ(w) - p(z)| for p(w) = Σ c_j w^j."""
    w, weights = _hermite_plane(planck, nodes)
    coeffs = np.asarray(poly_coeffs, dtype=complex)
    z = np.atleast_1d(np.asarray(z_points, dtype=complex))
    integrand = np.exp(z[:, None] * np.conj(w)[None, :] / planck.hbar) * polynomial.polyval(w, coeffs)[None, :]
    reproduced = integrand @ weights
    return float(np.max(np.abs(reproduced - polynomial.polyval(z, coeffs))))


def measure_wrap_identity(
    m: int,
    theta: ThetaPoint,
    planck: PlanckParameter,
    z,
    params: ThetaSeriesParams = DEFAULT_SERIES
) -> float:
    """max_z e^{-|z|²/2ℏ}|φ_{m+N}(z) - φ_m(z)|."""
    z = np.asarray(z, dtype=complex)
    shifted = _basis_samples(m + planck.n, theta, planck, z, params)
    base = _basis_samples(m, theta, planck, z, params)
    damping = np.exp(-np.abs(z) ** 2 / (2.0 * planck.hbar))
    return float(np.max(np.abs(shifted - base) * damping))
