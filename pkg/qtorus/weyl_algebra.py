"""
Weyl Algebra

Exact arithmetic in the algebra generated by U, V, U^-1, V^-1 with
UV = e^{iλ}VU, λ = 4π²ℏ = 2π/N, together with the trace τ_ℏ and the
quantum Koopman inner product (A, B) = τ_ℏ(A†B).

Elements are stored in the symmetrized Weyl basis

    W(m, k) = e^{-iλmk/2} U^m V^k.

Product rule. Moving V^k past U^m costs V^k U^m = e^{-iλmk} U^m V^k, so for
v = (m1, k1), w = (m2, k2)

    W(v)W(w) = e^{-iλ(m1k1 + m2k2)/2} U^{m1} V^{k1} U^{m2} V^{k2}
             = e^{-iλ(m1k1 + m2k2)/2 - iλk1m2} U^{m1+m2} V^{k1+k2}
             = e^{iλ[(m1+m2)(k1+k2) - m1k1 - m2k2 - 2k1m2]/2} W(v + w)
             = e^{iλσ(v, w)/2} W(v + w),

with σ(v, w) = m1k2 - k1m2. In particular W(v)† = W(-v), W(v)W(-v) = I and
τ_ℏ(W(v)) = δ_{v,0}, which makes the monomials orthonormal for (·,·).
"""

import cmath
import math
from dataclasses import dataclass
from types import MappingProxyType
from typing import Dict, Iterable, Mapping, NamedTuple, Optional, Tuple, Union

import numpy as np

from .errors import ArgumentError, ParameterMismatchError

Number = Union[int, float, complex]

# e^{iπq/4} for q = 0..7, exact on the axes
_EIGHTH_TURNS = (
    1 + 0j,
    complex(math.sqrt(0.5), math.sqrt(0.5)),
    1j,
    complex(-math.sqrt(0.5), math.sqrt(0.5)),
    -1 + 0j,
    complex(-math.sqrt(0.5), -math.sqrt(0.5)),
    -1j,
    complex(math.sqrt(0.5), -math.sqrt(0.5)),
)


def unit_phase(numerator: int, denominator: int) -> complex:
    """
    Return e^{iπ·numerator/denominator} from the rational angle.

    The numerator is reduced mod 2·denominator in exact integer arithmetic
    first, so huge exponents (long cat-map orbits) do not lose precision.
    Multiples of π/4 come back exact.

    Args:
        numerator: Integer numerator of the angle in units of π
        denominator: Positive integer denominator

    Returns:
        Unit complex number
    """
    reduced = numerator % (2 * denominator)
    if (8 * reduced) % (2 * denominator) == 0:
        return _EIGHTH_TURNS[(4 * reduced) // denominator]
    return cmath.exp(1j * math.pi * reduced / denominator)


def reduce_unit_interval(value: float) -> float:
    """Reduce a real number mod 1 into [0, 1)."""
    reduced = value % 1.0
    # tiny negatives round up to exactly 1.0
    return 0.0 if reduced >= 1.0 else reduced


@dataclass(frozen=True)
class PlanckParameter:
    """Planck's constant at the integrality point h = 1/N."""
    n: int

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, (int, np.integer)):
            raise ArgumentError(f"N must be an integer, got {self.n!r}")
        if self.n < 1:
            raise ArgumentError(f"N must be at least 1, got {self.n}")
        object.__setattr__(self, 'n', int(self.n))

    @property
    def h(self) -> float:
        return 1.0 / self.n

    @property
    def hbar(self) -> float:
        return 1.0 / (2.0 * math.pi * self.n)

    @property
    def lam(self) -> float:
        """Commutation phase λ = 4π²ℏ = 2π/N."""
        return 2.0 * math.pi / self.n

    def half_phase(self, s: int) -> complex:
        """e^{iλs/2} = e^{iπs/N} for integer s."""
        return unit_phase(s, self.n)


class WeylIndex(NamedTuple):
    """Exponents (m, k) of the monomial W(m, k)."""
    m: int
    k: int


def symplectic_form(v: Tuple[int, int], w: Tuple[int, int]) -> int:
    """σ(v, w) = m_v k_w - k_v m_w."""
    return v[0] * w[1] - v[1] * w[0]


@dataclass(frozen=True)
class AlgebraElement:
    """
    Finite combination Σ c_v W(v) of Weyl monomials.

    Instances are immutable; arithmetic returns new elements. Operators
    +, -, * (element or scalar) and unary - are provided for convenience
    and route through the module functions.
    """
    terms: Mapping[WeylIndex, complex]
    planck: PlanckParameter

    def __post_init__(self):
        normalized: Dict[WeylIndex, complex] = {}
        for index, coefficient in self.terms.items():
            key = WeylIndex(int(index[0]), int(index[1]))
            normalized[key] = normalized.get(key, 0j) + complex(coefficient)
        object.__setattr__(self, "terms", MappingProxyType(normalized))

    def coefficient(self, m: int, k: int) -> complex:
        return self.terms.get(WeylIndex(m, k), 0j)

    def support(self) -> Tuple[WeylIndex, ...]:
        return tuple(sorted(self.terms))

    def max_degree(self) -> int:
        """Largest |m| or |k| over the support (0 for the empty element)."""
        return max((max(abs(v.m), abs(v.k)) for v in self.terms), default=0)

    def allclose(self, other: 'AlgebraElement', atol: float = 1e-12) -> bool:
        """Coefficient-wise comparison, missing coefficients count as 0."""
        check_same_planck(self, other)
        keys = set(self.terms) | set(other.terms)
        return all(abs(self.terms.get(v, 0j) - other.terms.get(v, 0j)) <= atol for v in keys)

    def to_document(self) -> Dict:
        """JSON-ready mapping with terms sorted by (m, k)."""
        return {
            "n": self.planck.n,
            "terms": [
                {"m": v.m, "k": v.k, "re": c.real, "im": c.imag}
                for v, c in sorted(self.terms.items())
            ],
        }

    @classmethod
    def from_document(cls, document: Mapping) -> 'AlgebraElement':
        try:
            planck = PlanckParameter(int(document["n"]))
            terms: Dict[WeylIndex, complex] = {}
            for term in document["terms"]:
                key = WeylIndex(int(term["m"]), int(term["k"]))
                terms[key] = terms.get(key, 0j) + complex(float(term["re"]), float(term["im"]))
        except (KeyError, TypeError, ValueError) as e:
            raise ArgumentError(f"Malformed algebra element document: {e}") from e
        return cls(terms, planck)

    def __add__(self, other: 'AlgebraElement') -> 'AlgebraElement':
        return add(self, other)

    def __sub__(self, other: 'AlgebraElement') -> 'AlgebraElement':
        return subtract(self, other)

    def __neg__(self) -> 'AlgebraElement':
        return scale(self, -1)

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return multiply(self, other)
        if isinstance(other, (int, float, complex, np.number)):
            return scale(self, other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return scale(self, other)
        return NotImplemented


def check_same_planck(a: AlgebraElement, b: AlgebraElement) -> None:
    if a.planck != b.planck:
        raise ParameterMismatchError(
            f"Algebra elements live at different Planck parameters: N={a.planck.n} vs N={b.planck.n}"
        )


def weyl_monomial(v: Tuple[int, int], planck: PlanckParameter) -> AlgebraElement:
    """Return W(v) with unit coefficient; W(0, 0) is the identity."""
    return AlgebraElement({WeylIndex(int(v[0]), int(v[1])): 1 + 0j}, planck)


def identity(planck: PlanckParameter) -> AlgebraElement:
    return weyl_monomial((0, 0), planck)


def generator_u(planck: PlanckParameter) -> AlgebraElement:
    return weyl_monomial((1, 0), planck)


def generator_v(planck: PlanckParameter) -> AlgebraElement:
    return weyl_monomial((0, 1), planck)


def center_x(planck: PlanckParameter) -> AlgebraElement:
    """X = U^N, central at h = 1/N."""
    return weyl_monomial((planck.n, 0), planck)


def center_y(planck: PlanckParameter) -> AlgebraElement:
    """Y = V^N, central at h = 1/N."""
    return weyl_monomial((0, planck.n), planck)


def from_terms(terms: Iterable[Tuple[Tuple[int, int], Number]], planck: PlanckParameter) -> AlgebraElement:
    """Build an element from ((m, k), coefficient) pairs, summing repeats."""
    collected: Dict[WeylIndex, complex] = {}
    for v, c in terms:
        key = WeylIndex(int(v[0]), int(v[1]))
        collected[key] = collected.get(key, 0j) + complex(c)
    return AlgebraElement(collected, planck)


def scale(a: AlgebraElement, c: Number) -> AlgebraElement:
    c = complex(c)
    return AlgebraElement({v: c * coefficient for v, coefficient in a.terms.items()}, a.planck)


def add(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    check_same_planck(a, b)
    summed = dict(a.terms)
    for v, c in b.terms.items():
        summed[v] = summed.get(v, 0j) + c
    return AlgebraElement(summed, a.planck)


def subtract(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    return add(a, scale(b, -1))


def prune(a: AlgebraElement, threshold: float) -> AlgebraElement:
    """Drop coefficients with modulus below threshold (threshold 0 keeps all)."""
    if threshold < 0:
        raise ArgumentError(f"Prune threshold must be non-negative, got {threshold}")
    if threshold == 0:
        return a
    return AlgebraElement({v: c for v, c in a.terms.items() if abs(c) >= threshold}, a.planck)


def multiply(a: AlgebraElement, b: AlgebraElement, prune_threshold: float = 0.0) -> AlgebraElement:
    """
    Bilinear product using W(v)W(w) = e^{iλσ(v,w)/2} W(v + w).

    Args:
        a: Left factor
        b: Right factor
        prune_threshold: Optional modulus below which result coefficients are dropped

    Returns:
        The product ab

    Raises:
        ParameterMismatchError: If a and b have different Planck parameters
    """
    check_same_planck(a, b)
    planck = a.planck
    product: Dict[WeylIndex, complex] = {}
    for v, cv in a.terms.items():
        for w, cw in b.terms.items():
            key = WeylIndex(v.m + w.m, v.k + w.k)
            product[key] = product.get(key, 0j) + cv * cw * planck.half_phase(symplectic_form(v, w))
    return prune(AlgebraElement(product, planck), prune_threshold)


def commutator(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    return multiply(a, b) - multiply(b, a)


def adjoint(a: AlgebraElement) -> AlgebraElement:
    """W(v)† = W(-v) with conjugated coefficients."""
    return AlgebraElement(
        {WeylIndex(-v.m, -v.k): c.conjugate() for v, c in a.terms.items()},
        a.planck
    )


def trace(a: AlgebraElement) -> complex:
    """τ_ℏ(a): the coefficient of W(0, 0)."""
    return a.terms.get(WeylIndex(0, 0), 0j)


def inner_product(a: AlgebraElement, b: AlgebraElement) -> complex:
    """
    Koopman inner product (a, b) = τ_ℏ(a†b).

    Only equal indices survive the trace and σ(-v, v) = 0, so this is
    Σ conj(a_v) b_v.
    """
    check_same_planck(a, b)
    return sum((a.terms[v].conjugate() * b.terms[v] for v in a.terms if v in b.terms), 0j)


def koopman_norm(a: AlgebraElement) -> float:
    return math.sqrt(sum(abs(c) ** 2 for c in a.terms.values()))


def to_normal_order(a: AlgebraElement) -> Dict[WeylIndex, complex]:
    """Coefficients in the normal-ordered basis U^m V^k (factor e^{-iλmk/2})."""
    return {v: c * a.planck.half_phase(-v.m * v.k) for v, c in a.terms.items()}


def from_normal_order(coefficients: Mapping[Tuple[int, int], Number], planck: PlanckParameter) -> AlgebraElement:
    """Inverse of to_normal_order: Σ c U^m V^k rewritten in the Weyl basis."""
    return from_terms(
        ((v, complex(c) * planck.half_phase(int(v[0]) * int(v[1]))) for v, c in coefficients.items()),
        planck
    )


def random_element(
    planck: PlanckParameter,
    rng: np.random.Generator,
    terms: int = 4,
    degree: int = 3,
    spread: float = 1.0
) -> AlgebraElement:
    """
    Sparse random element for property sweeps.

    Args:
        planck: Planck parameter of the result
        rng: numpy random generator
        terms: Number of monomials drawn (repeats are merged)
        degree: Indices are drawn from [-degree, degree]²
        spread: Standard deviation of the real and imaginary parts

    Returns:
        Random algebra element
    """
    if terms < 1 or degree < 0:
        raise ArgumentError(f"Need terms >= 1 and degree >= 0, got {terms}, {degree}")
    indices = rng.integers(-degree, degree + 1, size=(terms, 2))
    values = spread * (rng.standard_normal(terms) + 1j * rng.standard_normal(terms))
    return from_terms(((tuple(v), c) for v, c in zip(indices.tolist(), values)), planck)


def is_central(a: AlgebraElement, atol: float = 1e-12) -> bool:
    """True when a commutes with both generators."""
    planck = a.planck
    zero = AlgebraElement({}, planck)
    return (commutator(a, generator_u(planck)).allclose(zero, atol)
            and commutator(a, generator_v(planck)).allclose(zero, atol))


def as_scalar(a: AlgebraElement, atol: float = 0.0) -> Optional[complex]:
    """Return c if a = c·I (within atol on the other coefficients), else None."""
    for v, c in a.terms.items():
        if v != (0, 0) and abs(c) > atol:
            return None
    return trace(a)
