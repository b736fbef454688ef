"""
Dynamics

Quantum toral maps as ℤ-actions α_n on the Weyl algebra, with Cesàro time
averages, the ergodicity defect, mixing correlations and the classical
Koopman oracle used for the limit checks.

Two families are supported:

    CatMap(a, b, c, d)    W(v) -> W(A^n v), A = [[a, b], [c, d]] in SL(2, ℤ)
    KroneckerMap(t1, t2)  W(v) -> e^{2πin(v·t)} W(v)

Both preserve σ (det A = 1, resp. pure phases), so they are algebra
automorphisms, commute with the adjoint and leave τ_ℏ invariant exactly.
The classical map quantized by CatMap(A) is the point map T(ξ) = A^T ξ mod 1,
whose Koopman action f -> f∘T^n relabels Fourier modes by A^n, the same
index map the quantum action applies to Weyl monomials.
"""

import cmath
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple, Union

import numpy as np

from .errors import ArgumentError
from .operation_logger import get_logger
from .symbols import TorusSymbol
from .weyl_algebra import (
    AlgebraElement,
    WeylIndex,
    check_same_planck,
    koopman_norm,
    reduce_unit_interval,
    scale,
    trace,
)

Matrix2 = Tuple[int, int, int, int]

# |phase - 1| below this counts as invariant
INVARIANCE_TOLERANCE = 1e-9


def _matmul(x: Matrix2, y: Matrix2) -> Matrix2:
    a, b, c, d = x
    e, f, g, h = y
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


@dataclass(frozen=True)
class CatMap:
    """Linear toral automorphism given by an integer matrix of determinant 1."""
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        for name in ('a', 'b', 'c', 'd'):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
                raise ArgumentError(f"Cat map entries must be integers, got {name}={value!r}")
            object.__setattr__(self, name, int(value))
        if self.determinant != 1:
            raise ArgumentError(
                f"cat map determinant must be 1, got {self.a}*{self.d} - {self.b}*{self.c} = {self.determinant}"
            )

    @property
    def determinant(self) -> int:
        return self.a * self.d - self.b * self.c

    @property
    def matrix(self) -> Matrix2:
        return (self.a, self.b, self.c, self.d)

    def is_hyperbolic(self) -> bool:
        return abs(self.a + self.d) > 2

    def power(self, n: int) -> Matrix2:
        """A^n in exact integer arithmetic (negative n uses the integer inverse)."""
        base = self.matrix if n >= 0 else (self.d, -self.b, -self.c, self.a)
        result: Matrix2 = (1, 0, 0, 1)
        exponent = abs(n)
        while exponent:
            if exponent & 1:
                result = _matmul(result, base)
            base = _matmul(base, base)
            exponent >>= 1
        return result

    def describe(self) -> str:
        return f"cat:{self.a},{self.b},{self.c},{self.d}"


@dataclass(frozen=True)
class KroneckerMap:
    """Rigid translation of the torus by (t1, t2), stored mod 1."""
    t1: float
    t2: float

    def __post_init__(self):
        for name in ('t1', 't2'):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ArgumentError(f"Kronecker shift must be finite, got {name}={value}")
            object.__setattr__(self, name, reduce_unit_interval(value))

    def phase(self, v: Tuple[int, int], n: int) -> complex:
        """e^{2πin(v·t)} with the angle reduced mod 1 before exponentiating."""
        turns = (n * (v[0] * self.t1 + v[1] * self.t2)) % 1.0
        return cmath.exp(2j * math.pi * turns)

    def describe(self) -> str:
        return f"kronecker:{self.t1!r},{self.t2!r}"


ToralAutomorphism = Union[CatMap, KroneckerMap]


def cat_map(a: int, b: int, c: int, d: int) -> CatMap:
    return CatMap(a, b, c, d)


def kronecker_map(t1: float, t2: float) -> KroneckerMap:
    return KroneckerMap(t1, t2)


@dataclass
class DiagnosticsReport:
    """A diagnostic sequence together with the value τ predicts in the limit."""
    steps: List[int]
    values: List[complex]
    limit_reference: complex = 0j
    label: str = field(default="", compare=False)

    def __post_init__(self):
        if len(self.steps) != len(self.values):
            raise ArgumentError(
                f"Report needs one value per step, got {len(self.values)} values for {len(self.steps)} steps"
            )
        self.steps = [int(s) for s in self.steps]
        self.values = [complex(v) for v in self.values]
        self.limit_reference = complex(self.limit_reference)

    def deviations(self) -> List[float]:
        """|value - limit_reference| per step."""
        return [abs(v - self.limit_reference) for v in self.values]


def _require_steps(M: int, name: str = "M") -> int:
    if isinstance(M, bool) or not isinstance(M, (int, np.integer)) or M < 1:
        raise ArgumentError(f"{name} must be a positive integer, got {M!r}")
    return int(M)


def apply_automorphism(alpha: ToralAutomorphism, a: AlgebraElement, n: int) -> AlgebraElement:
    """
    Apply α_n to an algebra element.

    Args:
        alpha: Cat map or Kronecker map
        a: Element to evolve
        n: Number of steps, may be negative

    Returns:
        α_n(a)
    """
    if isinstance(alpha, CatMap):
        p, q, r, s = alpha.power(n)
        return AlgebraElement(
            {WeylIndex(p * v.m + q * v.k, r * v.m + s * v.k): c for v, c in a.terms.items()},
            a.planck
        )
    return AlgebraElement({v: c * alpha.phase(v, n) for v, c in a.terms.items()}, a.planck)


def cesaro_average(alpha: ToralAutomorphism, a: AlgebraElement, M: int) -> AlgebraElement:
    """
    Time average ⟨a⟩_M = (1/M) Σ_{m=0}^{M-1} α_m(a).

    Raises:
        ArgumentError: If M < 1
    """
    M = _require_steps(M)
    running: Dict[WeylIndex, complex] = {}
    current = a
    for _ in range(M):
        for v, c in current.terms.items():
            running[v] = running.get(v, 0j) + c
        current = apply_automorphism(alpha, current, 1)
    return scale(AlgebraElement(running, a.planck), 1.0 / M)


def _distance_to_scalar(terms: Dict[WeylIndex, complex], scalar: complex) -> float:
    total = 0.0
    for v, c in terms.items():
        if v == (0, 0):
            c = c - scalar
        total += abs(c) ** 2
    if (0, 0) not in terms:
        total += abs(scalar) ** 2
    return math.sqrt(total)


def ergodicity_defect(alpha: ToralAutomorphism, a: AlgebraElement, M: int) -> float:
    """Koopman-norm distance ‖⟨a⟩_M - τ_ℏ(a)·I‖."""
    average = cesaro_average(alpha, a, M)
    return _distance_to_scalar(dict(average.terms), trace(a))


def mixing_correlation(alpha: ToralAutomorphism, a: AlgebraElement, b: AlgebraElement, n: int) -> complex:
    """
    τ_ℏ(α_n(a)·b).

    Only pairs with v + w = 0 reach the trace, and σ(v, -v) = 0, so the
    product is never formed: the value is Σ_v α_n(a)_v b_{-v}.
    """
    check_same_planck(a, b)
    evolved = apply_automorphism(alpha, a, n)
    return sum(
        (c * b.terms[WeylIndex(-v.m, -v.k)] for v, c in evolved.terms.items()
         if WeylIndex(-v.m, -v.k) in b.terms),
        0j
    )


def time_average_invariance(alpha: ToralAutomorphism, a: AlgebraElement, M: int) -> float:
    """‖α_1(⟨a⟩_M) - ⟨a⟩_M‖, bounded by 2‖a‖/M."""
    average = cesaro_average(alpha, a, M)
    return koopman_norm(apply_automorphism(alpha, average, 1) - average)


def ergodicity_sweep(alpha: ToralAutomorphism, a: AlgebraElement, steps: Sequence[int]) -> DiagnosticsReport:
    """
    Ergodicity defect for every requested averaging length.

    The orbit is walked once up to max(steps) and the running sum is
    sampled, so a sweep costs about as much as its longest average.
    """
    logger = get_logger()
    requested = sorted({_require_steps(M, "step") for M in steps})
    reference = trace(a)
    values: Dict[int, float] = {}
    running: Dict[WeylIndex, complex] = {}
    current = a
    wanted = set(requested)
    # one pass over the orbit, sampled at the requested lengths
    for M in range(1, requested[-1] + 1 if requested else 1):
        for v, c in current.terms.items():
            running[v] = running.get(v, 0j) + c
        current = apply_automorphism(alpha, current, 1)
        if M in wanted:
            averaged = {v: c / M for v, c in running.items()}
            values[M] = _distance_to_scalar(averaged, reference)
    logger.debug(f"Ergodicity sweep for {alpha.describe()} over {len(requested)} lengths")
    return DiagnosticsReport(
        steps=requested,
        values=[values[M] for M in requested],
        limit_reference=0j,
        label="ergodicity_defect"
    )


def mixing_sweep(
    alpha: ToralAutomorphism,
    a: AlgebraElement,
    b: AlgebraElement,
    steps: Sequence[int],
    workers: int = 1
) -> DiagnosticsReport:
    """
    Mixing correlations τ(α_n(a)b) for each n, referenced to τ(a)τ(b).

    With workers > 1 the steps are evaluated on a thread pool; results are
    collected in step order either way.
    """
    check_same_planck(a, b)
    steps = [int(n) for n in steps]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            values = list(executor.map(lambda n: mixing_correlation(alpha, a, b, n), steps))
    else:
        values = [mixing_correlation(alpha, a, b, n) for n in steps]
    get_logger().debug(f"Mixing sweep for {alpha.describe()} over {len(steps)} steps ({workers} workers)")
    return DiagnosticsReport(
        steps=steps,
        values=values,
        limit_reference=trace(a) * trace(b),
        label="mixing_correlation"
    )


def classical_pushforward(f: TorusSymbol, alpha: ToralAutomorphism, n: int) -> TorusSymbol:
    """
    Koopman action f -> f∘T^n on a trigonometric polynomial.

    For T(ξ) = A^T ξ mod 1, e^{2πi v·((A^T)^n ξ)} = e^{2πi (A^n v)·ξ}, so modes
    move exactly like Weyl indices under apply_automorphism; for the
    translation T(ξ) = ξ + t the mode v picks up e^{2πin(v·t)}.
    """
    if isinstance(alpha, CatMap):
        p, q, r, s = alpha.power(n)
        return TorusSymbol({(p * m + q * k, r * m + s * k): c for (m, k), c in f.modes.items()})
    return TorusSymbol({v: c * alpha.phase(v, n) for v, c in f.modes.items()})


def apply_point_map(alpha: ToralAutomorphism, x, p, n: int = 1) -> Tuple[np.ndarray, np.ndarray]:
    """T^n on arrays of torus points, reduced to [0, 1)²; a cat map moves points by (A^T)^n."""
    x = np.asarray(x, dtype=float)
    p = np.asarray(p, dtype=float)
    if isinstance(alpha, CatMap):
        a, b, c, d = alpha.power(n)
        # transpose of A^n
        return np.mod(a * x + c * p, 1.0), np.mod(b * x + d * p, 1.0)
    return np.mod(x + n * alpha.t1, 1.0), np.mod(p + n * alpha.t2, 1.0)


def classical_mixing_correlation(f: TorusSymbol, g: TorusSymbol, alpha: ToralAutomorphism, n: int) -> complex:
    """∫(f∘T^n)·g - ∫f·∫g, the classical mixing correlation."""
    evolved = classical_pushforward(f, alpha, n)
    overlap = sum((c * g.modes.get((-m, -k), 0j) for (m, k), c in evolved.modes.items()), 0j)
    return overlap - f.coefficient(0, 0) * g.coefficient(0, 0)


def classical_time_average(f: TorusSymbol, alpha: ToralAutomorphism, M: int) -> TorusSymbol:
    """(1/M) Σ_{m<M} f∘T^m."""
    M = _require_steps(M)
    running: Dict[Tuple[int, int], complex] = {}
    for m in range(M):
        for v, c in classical_pushforward(f, alpha, m).modes.items():
            running[v] = running.get(v, 0j) + c / M
    return TorusSymbol(running)


def find_invariant_monomials(alpha: ToralAutomorphism, degree_bound: int, n_max: int) -> List[WeylIndex]:
    """
    Monomials W(v), |m|, |k| <= degree_bound, with α_n(W(v)) = W(v) for some 1 <= n <= n_max.

    This is a finite window, not a proof of ergodicity: an ergodic action
    returns only (0, 0) here, a non-ergodic one may still need a larger window.
    """
    if isinstance(degree_bound, bool) or degree_bound < 0:
        raise ArgumentError(f"degree_bound must be non-negative, got {degree_bound}")
    n_max = _require_steps(n_max, "n_max")
    invariant: List[WeylIndex] = []
    powers = [alpha.power(n) for n in range(1, n_max + 1)] if isinstance(alpha, CatMap) else []
    for m in range(-degree_bound, degree_bound + 1):
        for k in range(-degree_bound, degree_bound + 1):
            if isinstance(alpha, CatMap):
                fixed = any(p * m + q * k == m and r * m + s * k == k for p, q, r, s in powers)
            else:
                fixed = any(abs(alpha.phase((m, k), n) - 1) < INVARIANCE_TOLERANCE for n in range(1, n_max + 1))
            if fixed:
                invariant.append(WeylIndex(m, k))
    return invariant
