"""
Quantize

Toeplitz (anti-Wick) quantization of trigonometric symbols on the torus.

Writing U(a) for the Bargmann translations, the Toeplitz image of the
exponential e^{(conj(a)z - a conj(z))/ℏ} is its antinormally ordered word,
which differs from U(a) by the BCH factor e^{-|a|²/2ℏ} of [A, A†] = ℏ.
With z = (x + ip)/√2 the Fourier mode e^{2πi(mx + kp)} is that exponential for
a = m·a_U + k·a_V, where U(a_U) = U and U(a_V) = V, and
U(m·a_U + k·a_V) = W(m, k). Hence the mode rule

    c_{mk} e^{2πi(mx + kp)}  ->  c_{mk} γ_ℏ(m, k) W(m, k),
    γ_ℏ(m, k) = e^{-|a|²/2ℏ} = e^{-π²ℏ(m² + k²)}.

toeplitz_sector_matrix evaluates the Toeplitz integral directly on the
sector basis and is the independent check of γ_ℏ.
"""

import math
from typing import Tuple

import numpy as np

from .bargmann import DEFAULT_SERIES, ThetaSeriesParams, cell_nodes, sector_basis_samples
from .dynamics import ToralAutomorphism, apply_automorphism, classical_pushforward
from .errors import ArgumentError
from .operation_logger import get_logger
from .symbols import TorusSymbol, constant, from_modes, mode, random_symbol
from .theta_rep import SectorMatrix, ThetaPoint
from .weyl_algebra import AlgebraElement, PlanckParameter, WeylIndex, koopman_norm

__all__ = [
    "TorusSymbol",
    "anti_wick_monomial",
    "constant",
    "damping",
    "egorov_defect",
    "from_modes",
    "mode",
    "quantize",
    "random_symbol",
    "symbol_integral",
    "toeplitz_sector_matrix",
]


def damping(v: Tuple[int, int], planck: PlanckParameter) -> float:
    """γ_ℏ(m, k) = e^{-π²ℏ(m² + k²)}."""
    m, k = v
    return math.exp(-math.pi ** 2 * planck.hbar * (m * m + k * k))


def quantize(f: TorusSymbol, planck: PlanckParameter) -> AlgebraElement:
    """Toeplitz operator of f as an element of the Weyl algebra."""
    return AlgebraElement(
        {WeylIndex(m, k): c * damping((m, k), planck) for (m, k), c in f.modes.items()},
        planck
    )


def symbol_integral(f: TorusSymbol) -> complex:
    """∫_{T²} f dx dp."""
    return f.coefficient(0, 0)


def egorov_defect(f: TorusSymbol, alpha: ToralAutomorphism, planck: PlanckParameter) -> float:
    """
    Koopman distance between α_1(Q_ℏ(f)) and Q_ℏ(f∘T).

    For a Kronecker map both sides carry the same phase and the defect is 0;
    for a cat map it compares γ_ℏ at v and at the image of v.
    """
    evolved = apply_automorphism(alpha, quantize(f, planck), 1)
    pushed = quantize(classical_pushforward(f, alpha, 1), planck)
    defect = koopman_norm(evolved - pushed)
    get_logger().debug(f"Egorov defect for {alpha.describe()} at N={planck.n}: {defect:.3e}")
    return defect


def anti_wick_monomial(m: int, n: int) -> str:
    """Ladder word for the Toeplitz image of z^m conj(z)^n: A^n (A†)^m, annihilators left."""
    if m < 0 or n < 0:
        raise ArgumentError(f"Monomial exponents must be non-negative, got {m}, {n}")
    factors = []
    if n:
        factors.append("A" if n == 1 else f"A^{n}")
    if m:
        factors.append("A†" if m == 1 else f"A†^{m}")
    return " ".join(factors) or "I"


def toeplitz_sector_matrix(
    f: TorusSymbol,
    planck: PlanckParameter,
    theta: ThetaPoint,
    grid: int = 200,
    params: ThetaSeriesParams = DEFAULT_SERIES
) -> SectorMatrix:
    """
    Matrix elements ∫_D conj(φ_m) f φ_n dμ_ℏ of the Toeplitz operator on ℋ_ℏ(θ).

    Args:
        f: Symbol, evaluated at the cell nodes
        planck: Planck parameter
        theta: Sector label
        grid: Midpoint nodes per axis
        params: θ-series truncation

    Returns:
        Sector matrix, comparable with represent(quantize(f, planck), theta)
    """
    x, p, z, weights = cell_nodes(grid, planck)
    samples = sector_basis_samples(planck, theta, z, params)
    symbol_values = f.evaluate(x, p)
    return SectorMatrix((np.conj(samples) * weights) @ (samples * symbol_values).T)
