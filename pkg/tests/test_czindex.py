import math
import random
from fractions import Fraction

import numpy as np
import pytest

from reebspec.czindex import (
    RotationPath,
    SymplecticMatrix,
    SymplecticPath,
    crossing_form,
    cz_index,
    cz_rotation_analytic,
    direct_sum,
    find_crossings,
    standard_j,
    symplectic_defect,
)
from helpers import random_rotation_pair
from reebspec.errors import (
    DegenerateCrossingError,
    FlatCrossingError,
    NonIsolatedCrossingError,
    NotACrossingError,
)

TWO_PI = 2.0 * math.pi


def rot(theta):
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def random_noninteger_pair(rng, margin=1e-3):
    """(alpha, T) with alpha, T in [0.1, 10] and dist(T*alpha, Z) > margin."""
    while True:
        alpha = rng.uniform(0.1, 10.0)
        big_t = rng.uniform(0.1, 10.0)
        prod = alpha * big_t
        if abs(prod - round(prod)) > margin:
            return alpha, big_t


# ---------------------------------------------------------------------------
# structure: J, symplecticity
# ---------------------------------------------------------------------------

def test_standard_j_squares_to_minus_one():
    for n in (1, 2, 3):
        j = standard_j(n)
        assert np.allclose(j @ j, -np.eye(2 * n))
        assert np.allclose(j.T, -j)


def test_symplectic_defect_and_matrix():
    assert symplectic_defect(rot(0.7)) < 1e-15
    m = SymplecticMatrix(np.diag([2.0, 0.5]))
    assert m.n == 1
    with pytest.raises(ValueError):
        SymplecticMatrix(np.diag([2.0, 2.0]))


def test_path_samples_are_symplectic():
    path = RotationPath([1.0, 3.0], 5.0)
    for t in np.linspace(0, 5, 50):
        assert symplectic_defect(path.evaluate(t)) <= 1e-9
    path.matrix_at(1.234)  # validates on construction


def test_non_symplectic_path_rejected():
    bad = SymplecticPath(0.0, 1.0, lambda t: np.diag([1.0 + t, 1.0 + t]))
    with pytest.raises(ValueError, match="leaves Sp"):
        find_crossings(bad)


# ---------------------------------------------------------------------------
# crossings
# ---------------------------------------------------------------------------

def test_crossings_of_one_and_a_half_turns():
    crossings = find_crossings(RotationPath([1.0], TWO_PI * 1.5))
    assert [round(c.t, 8) for c in crossings] == [0.0, round(TWO_PI, 8)]
    assert all(c.signature == 2 for c in crossings)
    assert all(c.kernel_dim == 2 for c in crossings)
    assert not any(c.degenerate for c in crossings)


def test_half_turn_crosses_only_at_start():
    crossings = find_crossings(RotationPath([1.0], math.pi))
    assert [c.t for c in crossings] == [0.0]


def test_identity_path_is_non_isolated():
    ident = SymplecticPath(0.0, 1.0, lambda t: np.eye(2))
    with pytest.raises(NonIsolatedCrossingError):
        find_crossings(ident)


def test_kernel_basis_is_orthonormal():
    crossings = find_crossings(RotationPath([1.0, 2.0], TWO_PI * 1.2))
    for c in crossings:
        z = c.kernel_basis
        assert np.allclose(z.T @ z, np.eye(z.shape[1]), atol=1e-10)


# ---------------------------------------------------------------------------
# crossing form
# ---------------------------------------------------------------------------

def test_form_is_alpha_identity():
    path = RotationPath([2.0], TWO_PI)
    f0 = crossing_form(path, 0.0)
    assert np.allclose(f0, 2.0 * np.eye(2), atol=1e-9)
    # any interior crossing looks the same
    f_mid = crossing_form(path, math.pi)
    assert np.allclose(np.linalg.eigvalsh(f_mid), [2.0, 2.0], atol=1e-9)


def test_form_block_diagonal_at_identity():
    path = RotationPath([1.0, 3.0], 1.0)
    f0 = crossing_form(path, 0.0)
    assert np.allclose(sorted(np.linalg.eigvalsh(f0)), [1.0, 1.0, 3.0, 3.0],
                       atol=1e-9)


def test_form_requires_a_crossing():
    path = RotationPath([1.0], TWO_PI)
    with pytest.raises(NotACrossingError):
        crossing_form(path, 1.0)


# ---------------------------------------------------------------------------
# the index
# ---------------------------------------------------------------------------

def test_index_basic_values():
    assert cz_index(RotationPath([1.0], TWO_PI * 1.5)) == 3
    assert cz_index(RotationPath([1.0], TWO_PI)) == 2
    const = SymplecticPath(0.0, 1.0, lambda t: np.diag([2.0, 0.5]))
    assert cz_index(const) == 0


def test_analytic_values():
    assert cz_rotation_analytic([1.0], 3 * math.pi) == 3
    assert cz_rotation_analytic([1.0, 1.0], math.pi) == 2
    assert cz_rotation_analytic([1.0], TWO_PI) == 2


def test_numeric_matches_analytic_on_random_rotations():
    rng = random.Random(1729)
    for _ in range(40):
        alpha, big_t = random_noninteger_pair(rng)
        path = RotationPath([alpha], TWO_PI * big_t)
        assert cz_index(path) == cz_rotation_analytic([alpha], TWO_PI * big_t)


def test_integer_rotation_number_gives_twice():
    for k in (1, 2, 3):
        assert cz_index(RotationPath([1.0], TWO_PI * k)) == 2 * k


def test_index_is_integer_on_rotation_paths():
    rng = random.Random(55)
    for _ in range(20):
        alpha, big_t = random_noninteger_pair(rng)
        value = cz_index(RotationPath([alpha], TWO_PI * big_t))
        assert isinstance(value, Fraction) and value.denominator == 1


def test_multifrequency_index():
    # freqs (1, 2) over 1.3 turns of the slow block
    duration = TWO_PI * 1.3
    expected = (1 + 2 * 1) + (1 + 2 * 2)
    assert cz_index(RotationPath([1.0, 2.0], duration)) == expected
    assert cz_rotation_analytic([1.0, 2.0], duration) == expected


# ---------------------------------------------------------------------------
# direct sums
# ---------------------------------------------------------------------------

def test_direct_sum_matches_rotation_path():
    p = direct_sum(RotationPath([1.0], math.pi), RotationPath([2.0], math.pi))
    q = RotationPath([1.0, 2.0], math.pi)
    for t in np.linspace(0, math.pi, 17):
        assert np.allclose(p.evaluate(t), q.evaluate(t), atol=1e-14)
        assert np.allclose(p.derivative_at(t), q.derivative_at(t), atol=1e-12)


def test_direct_sum_domain_mismatch():
    with pytest.raises(ValueError, match="domain"):
        direct_sum(RotationPath([1.0], 1.0), RotationPath([1.0], 2.0))


def test_direct_sum_additivity():
    rng = random.Random(4321)
    for _ in range(25):
        a1, a2, duration = random_rotation_pair(rng)
        p1 = RotationPath([a1], duration)
        p2 = RotationPath([a2], duration)
        assert cz_index(direct_sum(p1, p2)) == cz_index(p1) + cz_index(p2)


def test_direct_sum_with_constant_factor_adds_zero():
    p = RotationPath([1.0], TWO_PI * 1.5)
    const = SymplecticPath(p.a, p.b, lambda t: np.diag([2.0, 0.5]))
    assert cz_index(direct_sum(p, const)) == cz_index(p) == 3


def test_direct_sum_with_identity_factor_is_non_isolated():
    # a constant identity block makes every t a crossing for the numeric
    # engine; the analytic engine handles the rotation factor alone
    p = RotationPath([1.0], TWO_PI * 1.5)
    ident = SymplecticPath(p.a, p.b, lambda t: np.eye(2))
    with pytest.raises(NonIsolatedCrossingError):
        cz_index(direct_sum(p, ident))
    assert cz_rotation_analytic([1.0], TWO_PI * 1.5) == 3


# ---------------------------------------------------------------------------
# reparametrization invariance
# ---------------------------------------------------------------------------

def reparametrized_rotation(alpha, duration, with_derivative):
    """R(alpha * phi(s)) on [0, 1] with phi monotone, phi' > 0."""
    def phi(s):
        return duration * (s * s + s) / 2.0

    def dphi(s):
        return duration * (2.0 * s + 1.0) / 2.0

    k = np.array([[0.0, -1.0], [1.0, 0.0]])
    evaluator = lambda s: rot(alpha * phi(s))
    derivative = None
    if with_derivative:
        derivative = lambda s: alpha * dphi(s) * (k @ rot(alpha * phi(s)))
    return SymplecticPath(0.0, 1.0, evaluator, derivative=derivative)


@pytest.mark.parametrize("with_derivative", [True, False])
def test_reparametrization_invariance(with_derivative):
    rng = random.Random(86)
    for _ in range(8):
        alpha, big_t = random_noninteger_pair(rng, margin=5e-3)
        duration = TWO_PI * big_t
        straight = cz_index(RotationPath([alpha], duration))
        bent = cz_index(reparametrized_rotation(alpha, duration, with_derivative))
        assert bent == straight


# ---------------------------------------------------------------------------
# failure modes
# ---------------------------------------------------------------------------

def test_degenerate_crossing_raises():
    # R(t^2) has zero derivative at its t = 0 crossing
    k = np.array([[0.0, -1.0], [1.0, 0.0]])
    path = SymplecticPath(
        0.0, 1.0,
        lambda t: rot(t * t),
        derivative=lambda t: 2.0 * t * (k @ rot(t * t)),
    )
    crossings = find_crossings(path)
    assert len(crossings) == 1 and crossings[0].degenerate
    with pytest.raises(DegenerateCrossingError):
        cz_index(path)


def test_flat_crossing_raises():
    # rotation stops just short of a full turn: sigma_min dips to ~2e-4
    delta = 2e-4
    k = np.array([[0.0, -1.0], [1.0, 0.0]])

    def f(t):
        return (TWO_PI - delta) * math.sin(t)

    def df(t):
        return (TWO_PI - delta) * math.cos(t)

    path = SymplecticPath(
        0.0, math.pi,
        lambda t: rot(f(t)),
        derivative=lambda t: df(t) * (k @ rot(f(t))),
    )
    with pytest.raises(FlatCrossingError):
        find_crossings(path)


def test_short_of_crossing_at_endpoint_is_flat():
    # T*alpha = 0.99998: the missing crossing sits just beyond b
    path = RotationPath([1.0], TWO_PI * 0.99998)
    with pytest.raises(FlatCrossingError):
        cz_index(path)


def test_near_endpoint_interior_crossing_is_clean():
    # T*alpha = 1.00002: the crossing is interior, close to b; the small
    # endpoint sigma must not be mistaken for an ambiguous crossing
    path = RotationPath([1.0], TWO_PI * 1.00002)
    assert cz_index(path) == 3
