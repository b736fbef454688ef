import math

import numpy as np
import pytest

from qtorus.dynamics import CatMap, KroneckerMap
from qtorus.errors import ArgumentError
from qtorus.quantize import (
    anti_wick_monomial,
    constant,
    damping,
    egorov_defect,
    mode,
    quantize,
    random_symbol,
    symbol_integral,
    toeplitz_sector_matrix,
)
from qtorus.symbols import TorusSymbol, add, multiply
from qtorus.theta_rep import ThetaPoint, represent
from qtorus.weyl_algebra import PlanckParameter, adjoint, identity, koopman_norm, trace

ARNOLD = CatMap(2, 1, 1, 1)


def egorov_closed_form(n: int) -> float:
    hbar = PlanckParameter(n).hbar
    return abs(math.exp(-math.pi ** 2 * hbar) - math.exp(-5 * math.pi ** 2 * hbar))


def test_constant_quantizes_to_identity():
    planck = PlanckParameter(4)
    assert quantize(constant(1), planck) == identity(planck)


@pytest.mark.parametrize("n", [1, 4, 16])
def test_single_mode_is_damped(n):
    planck = PlanckParameter(n)
    q = quantize(mode(1, 0), planck)
    assert q.support() == ((1, 0),)
    assert q.coefficient(1, 0) == pytest.approx(math.exp(-math.pi ** 2 * planck.hbar))
    assert damping((1, 2), planck) == pytest.approx(math.exp(-5 * math.pi ** 2 * planck.hbar))


def test_symbol_integral_examples():
    assert symbol_integral(mode(1, 0)) == 0
    assert symbol_integral(add(constant(3), mode(2, -1, 5j))) == 3


@pytest.mark.parametrize("n", [1, 3, 10])
def test_trace_matches_integral_exactly(n, rng):
    planck = PlanckParameter(n)
    for _ in range(100):
        f = random_symbol(rng, terms=6, degree=3)
        assert trace(quantize(f, planck)) == symbol_integral(f)


def test_real_symbols_quantize_to_self_adjoint_elements(rng):
    planck = PlanckParameter(5)
    g = random_symbol(rng)
    f = add(g, g.conjugate())
    assert f.is_real()
    q = quantize(f, planck)
    assert adjoint(q).allclose(q, atol=1e-15)


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("f", [mode(1, 0), mode(0, 1), mode(1, 1), mode(-2, 1, 0.5 - 1j)])
def test_toeplitz_integral_matches_damping(n, f, random_thetas):
    planck = PlanckParameter(n)
    for theta in random_thetas(2):
        direct = toeplitz_sector_matrix(f, planck, theta, grid=120)
        assert direct.allclose(represent(quantize(f, planck), theta), atol=1e-6)


@pytest.mark.parametrize("n", [1, 2, 4, 8])
def test_nonnegative_symbols_give_nonnegative_operators(n, rng, random_thetas):
    planck = PlanckParameter(n)
    for _ in range(5):
        g = random_symbol(rng, terms=3, degree=2)
        f = multiply(g, g.conjugate())
        for theta in random_thetas(3):
            matrix = represent(quantize(f, planck), theta).entries
            assert np.linalg.eigvalsh(matrix).min() >= -1e-8


def test_norm_increases_towards_symbol_norm(rng):
    f = random_symbol(rng, terms=5, degree=3)
    norms = [koopman_norm(quantize(f, PlanckParameter(n))) for n in (1, 2, 4, 8, 16, 64, 1024)]
    assert norms == sorted(norms)
    assert norms[-1] == pytest.approx(f.l2_norm(), rel=0.1)
    assert all(value <= f.l2_norm() for value in norms)


def test_egorov_is_exact_for_translations(rng):
    alpha = KroneckerMap(math.sqrt(2) - 1, 0.3)
    for n in (2, 7):
        f = random_symbol(rng)
        assert egorov_defect(f, alpha, PlanckParameter(n)) == pytest.approx(0, abs=1e-14)


def test_egorov_for_constant_symbol():
    assert egorov_defect(constant(2), ARNOLD, PlanckParameter(4)) == 0


@pytest.mark.parametrize("n", [4, 8, 16, 32, 64])
def test_egorov_defect_closed_form(n):
    defect = egorov_defect(mode(1, 0), ARNOLD, PlanckParameter(n))
    assert defect == pytest.approx(egorov_closed_form(n), rel=1e-12)


def test_egorov_defect_shrinks_with_n():
    defects = [egorov_defect(mode(1, 0), ARNOLD, PlanckParameter(n)) for n in (4, 8, 16, 32, 64)]
    assert all(later < earlier for earlier, later in zip(defects, defects[1:]))


@pytest.mark.parametrize("n", [16, 32, 64])
def test_egorov_defect_halves_on_doubling(n):
    ratio = egorov_defect(mode(1, 0), ARNOLD, PlanckParameter(2 * n)) / egorov_defect(mode(1, 0), ARNOLD, PlanckParameter(n))
    assert ratio == pytest.approx(0.5, rel=0.2)


@pytest.mark.parametrize(
    ["alpha", "f", "image"],
    (
        (CatMap(2, 1, 3, 2), mode(1, 0), (2, 3)),
        (CatMap(1, 1, 0, 1), mode(0, 1), (1, 1)),
        (CatMap(3, 2, 4, 3), mode(0, 1), (2, 3)),
    ),
)
@pytest.mark.parametrize("n", [16, 256, 4096, 65536])
def test_egorov_defect_vanishes_for_non_symmetric_maps(alpha, f, image, n):
    planck = PlanckParameter(n)
    (v, _), = f.modes.items()
    expected = abs(damping(v, planck) - damping(image, planck))
    defect = egorov_defect(f, alpha, planck)
    assert defect == pytest.approx(expected, rel=1e-9)
    assert defect < 13 * math.pi ** 2 * planck.hbar


def test_egorov_defect_shrinks_for_non_symmetric_random_symbols(rng):
    alpha = CatMap(2, 1, 3, 2)
    for _ in range(5):
        f = random_symbol(rng, terms=6, degree=3)
        defects = [egorov_defect(f, alpha, PlanckParameter(n)) for n in (1024, 16384, 262144)]
        assert defects == sorted(defects, reverse=True)
        assert defects[-1] < 1e-2 * f.l2_norm()


def test_egorov_defect_halves_for_generic_symbols(rng):
    for _ in range(5):
        f = random_symbol(rng, terms=6, degree=3)
        defects = [egorov_defect(f, ARNOLD, PlanckParameter(n)) for n in (1024, 2048, 4096)]
        for earlier, later in zip(defects, defects[1:]):
            assert later / earlier == pytest.approx(0.5, rel=0.2)


@pytest.mark.parametrize(
    ["m", "n", "word"],
    (
        (0, 0, "I"),
        (1, 0, "A†"),
        (0, 1, "A"),
        (1, 2, "A^2 A†"),
        (3, 1, "A A†^3"),
    ),
)
def test_anti_wick_words(m, n, word):
    assert anti_wick_monomial(m, n) == word


def test_anti_wick_rejects_negative_exponents():
    with pytest.raises(ArgumentError):
        anti_wick_monomial(-1, 0)


def test_symbol_document_round_trip(rng):
    f = random_symbol(rng)
    assert TorusSymbol.from_document(f.to_document()) == f
