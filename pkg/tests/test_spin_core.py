from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.special import comb

from hybrid_mbqc.spin_core import (
    HADAMARD_ANGLE,
    MeasurementBasisSpec,
    SpinAlgebraError,
    SpinCoherentParams,
    basis_amplitude,
    basis_amplitudes,
    basis_vectors,
    check_unitary,
    coherent_overlap,
    coherent_to_fock,
    expm_hermitian,
    fock_amplitudes,
    hadamard_2x2,
    hadamard_unitary,
    induced_unitary,
    log_binom,
    phase_2x2,
    rotate_coherent,
    spin_matrix,
    x_basis_closed_form,
)

from conftest import random_params

NS = [1, 5, 20, 30]


def brute_fock(alpha, beta, n):
    """Direct binomial expansion with exact integer binomials."""
    return np.array([math.sqrt(math.comb(n, k)) * alpha**k * beta ** (n - k) for k in range(n + 1)])


@pytest.mark.parametrize("n", NS)
def test_su2_commutators(n):
    x, y, z = (spin_matrix(a, n).entries for a in "xyz")
    for a, b, c in [(x, y, z), (y, z, x), (z, x, y)]:
        assert np.abs(a @ b - b @ a - 2j * c).max() < 1e-10


@pytest.mark.parametrize("n", NS)
def test_casimir_is_constant(n):
    x, y, z = (spin_matrix(a, n).entries for a in "xyz")
    cas = x @ x + y @ y + z @ z
    assert np.allclose(cas, n * (n + 2) * np.eye(n + 1), atol=1e-9)


@pytest.mark.parametrize("n", NS)
def test_sz_spectrum_and_number(n):
    z = spin_matrix("z", n).entries
    assert np.allclose(np.diag(z), 2 * np.arange(n + 1) - n)
    na, nb = spin_matrix("na", n).entries, spin_matrix("nb", n).entries
    assert np.allclose(na + nb, n * np.eye(n + 1))
    assert np.allclose(na - nb, z)


@pytest.mark.parametrize("n", NS)
def test_coherent_expansion_matches_brute_force(n, rng):
    p = random_params(rng, n)
    vec = coherent_to_fock(p).amplitudes
    assert np.abs(vec - brute_fock(p.alpha, p.beta, n)).max() < 1e-10
    assert abs(np.linalg.norm(vec) - 1) < 1e-10


@pytest.mark.parametrize("n", NS)
def test_coherent_overlap_matches_dense(n, rng):
    p, q = random_params(rng, n), random_params(rng, n)
    dense = np.vdot(coherent_to_fock(p).amplitudes, coherent_to_fock(q).amplitudes)
    assert abs(coherent_overlap(p, q) - dense) < 1e-10


def test_fock_amplitudes_large_n_stays_finite():
    amps = fock_amplitudes(1 / np.sqrt(2), 1 / np.sqrt(2), 5000)
    assert np.all(np.isfinite(amps))
    assert abs(np.sum(np.abs(amps) ** 2) - 1) < 1e-9


def test_fock_amplitudes_zero_mode():
    amps = fock_amplitudes(1.0, 0.0, 4)
    assert np.allclose(amps, [0, 0, 0, 0, 1])


def test_log_binom_matches_scipy():
    n = np.arange(0, 60)
    k = n // 3
    assert np.allclose(np.exp(log_binom(n, k)), comb(n, k), rtol=1e-12)


def test_unnormalized_params_rejected():
    with pytest.raises(SpinAlgebraError):
        coherent_to_fock(SpinCoherentParams(1.0, 1.0, 3))


def test_params_validation():
    with pytest.raises(SpinAlgebraError):
        SpinCoherentParams(1.0, 0.0, 0)
    with pytest.raises(SpinAlgebraError):
        MeasurementBasisSpec(q=-1, theta=0.0, big_l=10)
    with pytest.raises(SpinAlgebraError):
        MeasurementBasisSpec(q=0, theta=0.0, big_l=10, variant="y_basis")


@pytest.mark.parametrize("n", [1, 2, 5, 10])
def test_hadamard_unitary_and_induced(n):
    h = hadamard_unitary(n).entries
    assert np.abs(h.conj().T @ h - np.eye(n + 1)).max() < 1e-10
    assert np.abs(h - induced_unitary(hadamard_2x2(), n)).max() < 1e-10


def _expansion_matrix(n):
    """Columns (a+ + b+)^k (a+ - b+)^(N-k) |vac>, normalized, in the Fock basis."""
    out = np.zeros((n + 1, n + 1), dtype=complex)
    for k in range(n + 1):
        # polynomial in a+ with coefficient list indexed by a-power, b-power = N - j
        p1 = np.array([math.comb(k, j) for j in range(k + 1)], dtype=float)
        p2 = np.array([math.comb(n - k, j) * (-1) ** (n - k - j) for j in range(n - k + 1)], dtype=float)
        poly = np.convolve(p1, p2)
        j = np.arange(n + 1)
        col = poly * np.sqrt([math.factorial(i) * math.factorial(n - i) for i in j])
        out[:, k] = col / np.linalg.norm(col)
    return out


@pytest.mark.parametrize("n", range(1, 11))
def test_hadamard_matches_polynomial_expansion(n):
    h = hadamard_unitary(n).entries
    e = _expansion_matrix(n)
    # each column agrees up to its own phase; the phases are (-1)^k times one global phase
    phases = np.array([np.vdot(e[:, k], h[:, k]) for k in range(n + 1)])
    assert np.allclose(np.abs(phases), 1, atol=1e-10)
    rel = phases * (-1.0) ** np.arange(n + 1)
    assert np.allclose(rel, rel[0], atol=1e-10)
    assert np.abs(h - e * phases[None, :]).max() < 1e-10


def test_hadamard_2x2_is_sigma_y_rotation():
    sy = np.array([[0, -1j], [1j, 0]])
    assert np.allclose(hadamard_2x2(), expm_hermitian(sy, -HADAMARD_ANGLE))
    h = hadamard_2x2()
    # maps the +z pole to the equator (|+>-like up to phase)
    v = h @ np.array([1, 0])
    assert np.allclose(np.abs(v), [1 / np.sqrt(2)] * 2)


@pytest.mark.parametrize("n", [1, 3, 8])
def test_phase_gate_is_number_exponential(n, rng):
    phi = rng.uniform(-np.pi, np.pi)
    dense = expm_hermitian(spin_matrix("nb", n).entries, phi)
    assert np.abs(dense - induced_unitary(phase_2x2(phi), n)).max() < 1e-10


def test_check_unitary_rejects():
    with pytest.raises(SpinAlgebraError):
        check_unitary(np.array([[1, 1], [0, 1]]))


@given(st.floats(-np.pi, np.pi), st.floats(0, np.pi), st.floats(-np.pi, np.pi), st.integers(1, 12))
def test_rotation_commutes_with_expansion(a, b, c, n):
    u = expm_hermitian(spin_matrix("z", 1).entries, a) @ expm_hermitian(spin_matrix("y", 1).entries, b) \
        @ expm_hermitian(spin_matrix("x", 1).entries, c)
    p = SpinCoherentParams(np.cos(0.3), np.exp(0.7j) * np.sin(0.3), n)
    lhs = coherent_to_fock(rotate_coherent(p, u)).amplitudes
    rhs = induced_unitary(u, n) @ coherent_to_fock(p).amplitudes
    assert np.abs(lhs - rhs).max() < 1e-9


@given(st.floats(0, np.pi / 2), st.floats(-np.pi, np.pi), st.integers(1, 200))
def test_expansion_norm_property(t, phi, n):
    amps = fock_amplitudes(np.cos(t), np.exp(1j * phi) * np.sin(t), n)
    assert abs(np.sum(np.abs(amps) ** 2) - 1) < 1e-10


@pytest.mark.parametrize("variant", ["x_basis", "hadamard_basis"])
@pytest.mark.parametrize("n", [1, 4, 9])
def test_basis_amplitudes_match_dense_projection(variant, n, rng):
    p = random_params(rng, n)
    vecs = basis_vectors(0.7, 50, n, variant)
    assert np.abs(vecs.conj().T @ vecs - np.eye(n + 1)).max() < 1e-10
    dense = vecs.conj().T @ coherent_to_fock(p).amplitudes
    fast = basis_amplitudes(p.alpha, p.beta, n, 0.7, 50, variant)
    assert np.abs(dense - fast).max() < 1e-10
    q = n // 2
    assert abs(basis_amplitude(MeasurementBasisSpec(q, 0.7, 50, variant), p) - dense[q]) < 1e-10


@pytest.mark.parametrize("n", [4, 16, 64])
def test_closed_form_on_magic_state(n):
    big_l = 100
    xs, ths = np.meshgrid(np.linspace(-30, 30, 10), np.linspace(-5, 5, 10))
    xs, ths = xs.ravel(), ths.ravel()
    for x, th in zip(xs, ths):
        amps = basis_amplitudes(1 / np.sqrt(2), np.exp(-2j * np.pi * x / big_l) / np.sqrt(2), n, th, big_l)
        closed = x_basis_closed_form(np.arange(n + 1), n, x, th, big_l)
        assert np.abs(np.abs(amps) - closed).max() < 1e-9
        assert abs(np.sum(np.abs(amps) ** 2) - 1) < 1e-9


def test_basis_amplitude_q_out_of_range():
    with pytest.raises(SpinAlgebraError):
        basis_amplitude(MeasurementBasisSpec(5, 0.0, 10), SpinCoherentParams(1.0, 0.0, 3))


@pytest.mark.parametrize("n", [1, 2, 7, 20])
def test_hadamard_conjugates_sz_to_plus_sx(n):
    h = hadamard_unitary(n).entries
    sz, sx = spin_matrix("z", n).entries, spin_matrix("x", n).entries
    assert np.abs(h @ sz @ h.conj().T - sx).max() < 1e-9


def test_opposite_hadamard_sign_breaks_closed_form():
    n, big_l = 6, 100
    sy, nb = spin_matrix("y", n).entries, spin_matrix("nb", n).entries
    wrong = expm_hermitian(sy, HADAMARD_ANGLE)
    vecs = expm_hermitian(nb, 2 * np.pi * 3 / big_l - np.pi / 2) @ wrong
    psi = coherent_to_fock(SpinCoherentParams(1 / np.sqrt(2), np.exp(-2j * np.pi * 10 / big_l) / np.sqrt(2), n))
    amps = np.abs(vecs.conj().T @ psi.amplitudes)
    assert np.abs(amps - x_basis_closed_form(np.arange(n + 1), n, 10, 3, big_l)).max() > 0.1


@pytest.mark.parametrize("n", [1, 6, 13, 20])
def test_hadamard_closure_on_coherent_states(n, rng):
    p = random_params(rng, n)
    lhs = coherent_to_fock(rotate_coherent(p, hadamard_2x2())).amplitudes
    rhs = hadamard_unitary(n).entries @ coherent_to_fock(p).amplitudes
    assert abs(abs(np.vdot(lhs, rhs)) - 1) < 1e-10
