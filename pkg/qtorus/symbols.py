"""
Torus Symbols

Classical observables on the 2-torus as finite Fourier series
f(x, p) = Σ c_{mk} e^{2πi(mx + kp)}.
"""

import math
from dataclasses import dataclass
from types import MappingProxyType
from typing import Dict, Iterable, Mapping, Tuple, Union

import numpy as np

from .errors import ArgumentError

Number = Union[int, float, complex]
Mode = Tuple[int, int]


@dataclass(frozen=True)
class TorusSymbol:
    """Fourier coefficients of a trigonometric polynomial on the torus."""
    modes: Mapping[Mode, complex]

    def __post_init__(self):
        normalized: Dict[Mode, complex] = {}
        for index, coefficient in self.modes.items():
            key = (int(index[0]), int(index[1]))
            normalized[key] = normalized.get(key, 0j) + complex(coefficient)
        object.__setattr__(self, "modes", MappingProxyType(normalized))

    def coefficient(self, m: int, k: int) -> complex:
        return self.modes.get((m, k), 0j)

    def conjugate(self) -> 'TorusSymbol':
        """Complex conjugate function: c_{mk} -> conj(c_{-m,-k})."""
        return TorusSymbol({(-m, -k): c.conjugate() for (m, k), c in self.modes.items()})

    def is_real(self, atol: float = 1e-12) -> bool:
        """Check c_{-m,-k} = conj(c_{mk}); not enforced at construction."""
        keys = set(self.modes) | {(-m, -k) for (m, k) in self.modes}
        return all(
            abs(self.coefficient(-m, -k) - self.coefficient(m, k).conjugate()) <= atol
            for (m, k) in keys
        )

    def evaluate(self, x, p) -> np.ndarray:
        """Pointwise values on arrays of x and p (broadcast together)."""
        x = np.asarray(x, dtype=float)
        p = np.asarray(p, dtype=float)
        values = np.zeros(np.broadcast(x, p).shape, dtype=complex)
        for (m, k), c in self.modes.items():
            values = values + c * np.exp(2j * np.pi * (m * x + k * p))
        return values

    def l2_norm(self) -> float:
        return math.sqrt(sum(abs(c) ** 2 for c in self.modes.values()))

    def to_document(self) -> Dict:
        return {
            "modes": [
                {"m": m, "k": k, "re": c.real, "im": c.imag}
                for (m, k), c in sorted(self.modes.items())
            ]
        }

    @classmethod
    def from_document(cls, document: Mapping) -> 'TorusSymbol':
        try:
            return from_modes(
                ((int(entry["m"]), int(entry["k"])), complex(float(entry["re"]), float(entry["im"])))
                for entry in document["modes"]
            )
        except (KeyError, TypeError, ValueError) as e:
            raise ArgumentError(f"Malformed torus symbol document: {e}") from e


def from_modes(modes: Iterable[Tuple[Mode, Number]]) -> TorusSymbol:
    collected: Dict[Mode, complex] = {}
    for (m, k), c in modes:
        collected[(int(m), int(k))] = collected.get((int(m), int(k)), 0j) + complex(c)
    return TorusSymbol(collected)


def constant(c: Number) -> TorusSymbol:
    return TorusSymbol({(0, 0): c})


def mode(m: int, k: int, c: Number = 1.0) -> TorusSymbol:
    """c·e^{2πi(mx + kp)}."""
    return TorusSymbol({(m, k): c})


def add(f: TorusSymbol, g: TorusSymbol) -> TorusSymbol:
    return from_modes(list(f.modes.items()) + list(g.modes.items()))


def multiply(f: TorusSymbol, g: TorusSymbol) -> TorusSymbol:
    """Pointwise product, i.e. convolution of the Fourier coefficients."""
    return from_modes(
        ((mf + mg, kf + kg), cf * cg)
        for (mf, kf), cf in f.modes.items()
        for (mg, kg), cg in g.modes.items()
    )


def random_symbol(rng: np.random.Generator, terms: int = 4, degree: int = 3) -> TorusSymbol:
    if terms < 1 or degree < 0:
        raise ArgumentError(f"Need terms >= 1 and degree >= 0, got {terms}, {degree}")
    indices = rng.integers(-degree, degree + 1, size=(terms, 2))
    values = rng.standard_normal(terms) + 1j * rng.standard_normal(terms)
    return from_modes(((tuple(v), c) for v, c in zip(indices.tolist(), values)))
