import itertools
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cyclet.errors import DomainError
from cyclet.oscillator import (
    QuantumNumbers,
    cospi,
    enumerate_levels,
    ground_state_energy,
    ground_state_quadratic_form,
    lambda_coefficients,
    mode_coefficients,
    oscillator_energy,
    q_values_up_to_quanta,
    sinpi,
    size_parameters_exact,
    transform_matrix,
)

SQ3 = math.sqrt(3.0)


def test_sinpi_cospi_reduction():
    for n in range(1, 30):
        for k in range(-3 * n, 3 * n + 1):
            assert sinpi(k, n) == pytest.approx(math.sin(k * math.pi / n), abs=1e-14)
            assert cospi(k, n) == pytest.approx(math.cos(k * math.pi / n), abs=1e-14)
    assert sinpi(7, 7) == 0.0
    assert sinpi(1, 2) == 1.0


@pytest.mark.parametrize("N,expected", [(2, [4, 0]), (3, [3, 3, 0]), (4, [2, 4, 2, 0])])
def test_lambda_small(N, expected):
    np.testing.assert_allclose(lambda_coefficients(N), expected, atol=1e-14)
    assert lambda_coefficients(N)[-1] == 0.0


@pytest.mark.parametrize("N", [2, 3, 5, 8, 13, 50, 199, 200])
def test_lambda_invariants(N):
    lam = lambda_coefficients(N)
    assert lam[-1] == 0.0
    for i in range(1, N):
        assert lam[i - 1] == lam[N - i - 1]
    assert lam.sum() == pytest.approx(2 * N, rel=1e-13)


def test_lambda_are_eigenvalues_of_cyclic_matrix():
    for N in range(3, 12):
        M = 2 * np.eye(N) - np.roll(np.eye(N), 1, axis=1) - np.roll(np.eye(N), -1, axis=1)
        np.testing.assert_allclose(np.sort(np.linalg.eigvalsh(M)), np.sort(lambda_coefficients(N)), atol=1e-12)


@pytest.mark.parametrize("N", [1, 0, -3])
def test_bad_N(N):
    with pytest.raises(DomainError):
        lambda_coefficients(N)
    with pytest.raises(DomainError):
        transform_matrix(N)
    with pytest.raises(DomainError):
        ground_state_quadratic_form(N)


def test_transform_N2():
    np.testing.assert_allclose(transform_matrix(2), np.array([[-1, 1], [1, 1]]) / math.sqrt(2), atol=1e-15)


@pytest.mark.parametrize("N", range(2, 25))
def test_transform_invariants(N):
    U = transform_matrix(N)
    np.testing.assert_allclose(U, U.T, atol=0)
    np.testing.assert_allclose(U @ U, np.eye(N), atol=1e-12)
    np.testing.assert_allclose(U[-1], 1 / math.sqrt(N), atol=1e-15)


@pytest.mark.parametrize("N", range(2, 20))
def test_transform_diagonalises_potential(N):
    # r M r^t = sum lambda_i x_i^2 with x = U r
    M = 2 * np.eye(N) - np.roll(np.eye(N), 1, axis=1) - np.roll(np.eye(N), -1, axis=1)
    if N == 2:
        M = np.array([[2.0, -2.0], [-2.0, 2.0]])
    U = transform_matrix(N)
    np.testing.assert_allclose(U @ M @ U, np.diag(lambda_coefficients(N)), atol=1e-12)


def z_from_transform(N):
    U = transform_matrix(N)
    root = np.sqrt(lambda_coefficients(N))
    root[-1] = 0.0
    return U @ np.diag(root) @ U


def test_Z_small():
    np.testing.assert_allclose(ground_state_quadratic_form(2), [[1, -1], [-1, 1]], atol=1e-14)
    Z3 = ground_state_quadratic_form(3)
    np.testing.assert_allclose(np.diag(Z3), 2 * SQ3 / 3, atol=1e-14)
    np.testing.assert_allclose(Z3[~np.eye(3, dtype=bool)], -SQ3 / 3, atol=1e-14)


@pytest.mark.parametrize("N", range(2, 31))
def test_Z_matches_transform_construction(N):
    Z = ground_state_quadratic_form(N)
    np.testing.assert_allclose(Z, z_from_transform(N), atol=1e-10, rtol=0)
    np.testing.assert_allclose(Z.sum(axis=1), 0, atol=1e-10)
    np.testing.assert_allclose(Z, Z.T, atol=0)
    np.testing.assert_allclose(np.roll(np.roll(Z, 1, 0), 1, 1), Z, atol=0)


@pytest.mark.parametrize(
    "N,D,n,l,expected",
    [
        (2, 3, (0,), (0,), 3.0),
        (3, 3, (0, 0), (0, 0), 3 * SQ3),
        (4, 3, (0, 0, 0), (1, 0, 0), 4 * math.sqrt(2) + 3),
    ],
)
def test_oscillator_energy(N, D, n, l, expected):
    assert oscillator_energy(1.0, 1.0, QuantumNumbers(N, D, n, l)) == pytest.approx(expected, rel=1e-14)


def test_oscillator_energy_independent_of_mass_and_linear_in_omega():
    q = QuantumNumbers(5, 2, (1, 0, 2, 0), (0, 3, 1, 1))
    e = oscillator_energy(1.0, 1.0, q)
    assert oscillator_energy(7.5, 1.0, q) == e
    assert oscillator_energy(1.0, 2.5, q) == pytest.approx(2.5 * e, rel=1e-15)


@pytest.mark.parametrize("m,omega", [(0, 1), (1, 0), (-1, 1)])
def test_oscillator_energy_domain(m, omega):
    with pytest.raises(DomainError):
        oscillator_energy(m, omega, QuantumNumbers.ground(3))
    with pytest.raises(DomainError):
        ground_state_energy(m, omega, 3, 3)


def test_ground_state_energy_examples():
    assert ground_state_energy(1, 1, 2, 3) == pytest.approx(3.0, rel=1e-15)
    assert ground_state_energy(1, 1, 3, 3) == pytest.approx(3 * SQ3, rel=1e-15)
    assert ground_state_energy(1, 2, 6, 1) == pytest.approx(7.4641016151377544, rel=1e-14)


@pytest.mark.parametrize("N", range(2, 201))
def test_sine_sum_is_cotangent(N):
    s = math.fsum(sinpi(i, N) for i in range(1, N))
    assert s == pytest.approx(1 / math.tan(math.pi / (2 * N)), rel=1e-12)
    assert oscillator_energy(1, 1, QuantumNumbers.ground(N, 3)) == pytest.approx(ground_state_energy(1, 1, N, 3), rel=1e-12)


@given(st.integers(2, 12), st.integers(1, 4), st.data())
def test_energy_invariant_under_mode_relabeling(N, D, data):
    n = data.draw(st.lists(st.integers(0, 3), min_size=N - 1, max_size=N - 1))
    l = data.draw(st.lists(st.integers(0, 3), min_size=N - 1, max_size=N - 1))
    q = QuantumNumbers(N, D, tuple(n), tuple(l))
    flipped = QuantumNumbers(N, D, tuple(reversed(n)), tuple(reversed(l)))
    assert oscillator_energy(1, 1, q) == pytest.approx(oscillator_energy(1, 1, flipped), rel=1e-14)


def test_quantum_numbers_validation():
    with pytest.raises(DomainError):
        QuantumNumbers(3, 3, (0,), (0, 0))
    with pytest.raises(DomainError):
        QuantumNumbers(3, 3, (0, -1), (0, 0))
    with pytest.raises(DomainError):
        QuantumNumbers(3, 0, (0, 0), (0, 0))
    assert QuantumNumbers(3, 3, (1, 0), (1, 2)).nu == (3, 2)


def test_size_parameters_exact():
    np.testing.assert_allclose(size_parameters_exact(1, 1, 2), [math.sqrt(2)], rtol=1e-15)
    np.testing.assert_allclose(size_parameters_exact(1, 1, 3), [3**0.25] * 2, rtol=1e-15)
    np.testing.assert_allclose(size_parameters_exact(4, 1, 2), [2 * math.sqrt(2)], rtol=1e-15)


def brute_levels(N, D, max_quanta, angular=False):
    """Distinct Q with multiplicities by direct enumeration of (n_i, l_i)."""
    coef = [2 * math.sin(i * math.pi / N) for i in range(1, N)]
    pairs = [(n, l) for n in range(max_quanta + 1) for l in range(max_quanta + 1) if 2 * n + l <= max_quanta]
    acc = {}
    for combo in itertools.product(pairs, repeat=N - 1):
        nu = [2 * n + l for n, l in combo]
        if sum(nu) > max_quanta:
            continue
        Q = sum(c * (v + D / 2) for c, v in zip(coef, nu))
        w = math.prod(2 * l + 1 for _, l in combo) if angular else 1
        key = round(Q, 8)
        acc[key] = acc.get(key, 0) + w
    return sorted(acc.items())


@pytest.mark.parametrize("N,D,K", [(2, 3, 3), (3, 3, 4), (4, 2, 5), (5, 3, 4)])
@pytest.mark.parametrize("angular", [False, True])
def test_enumerate_levels_against_brute_force(N, D, K, angular):
    if angular and D != 3:
        with pytest.raises(DomainError):
            enumerate_levels(N, D, K, angular=angular)
        return
    levels = enumerate_levels(N, D, K, angular=angular)
    brute = brute_levels(N, D, 6, angular)
    assert len(levels) == K
    for lv, (q, mult) in zip(levels, brute):
        assert lv.Q == pytest.approx(q, abs=1e-7)
        assert lv.multiplicity == mult
        assert lv.energy_factor == lv.Q
        assert oscillator_energy(1, 1, lv.representative) == pytest.approx(lv.Q, rel=1e-13)


def test_enumerate_levels_N2():
    assert [lv.Q for lv in enumerate_levels(2, 3, 3)] == pytest.approx([3, 5, 7])


def test_enumerate_levels_N3_ground():
    (lv,) = enumerate_levels(3, 3, 1)
    assert lv.Q == pytest.approx(3 * SQ3)
    assert lv.multiplicity == 1


def test_enumerate_levels_N6_coincidence():
    # two quanta in mode 1 (coefficient 1 each) meet one quantum in mode 3 (coefficient 2)
    levels = enumerate_levels(6, 3, 8)
    q0 = levels[0].Q
    merged = [lv for lv in levels if abs(lv.Q - (q0 + 2)) < 1e-9]
    assert len(merged) == 1
    assert (2, 0, 0, 0, 0) in merged[0].tuples
    assert (0, 0, 1, 0, 0) in merged[0].tuples
    assert 2 * math.sqrt(lambda_coefficients(6)[0]) == pytest.approx(math.sqrt(lambda_coefficients(6)[2]))


def test_enumerate_levels_ascending_distinct():
    levels = enumerate_levels(7, 3, 15)
    qs = [lv.Q for lv in levels]
    assert all(b - a > 1e-9 for a, b in zip(qs, qs[1:]))


def test_enumerate_levels_bad_count():
    with pytest.raises(DomainError):
        enumerate_levels(3, 3, 0)


@pytest.mark.parametrize("N", [2, 3, 4, 5, 6])
def test_q_values_up_to_quanta(N):
    brute = [q for q, _ in brute_levels(N, 3, 3)]
    got = q_values_up_to_quanta(N, 3, 3)
    np.testing.assert_allclose(got, brute, atol=1e-7)


def test_mode_coefficients_symmetric():
    c = mode_coefficients(9)
    np.testing.assert_array_equal(c, c[::-1])
