"""Finite-N algebra of two-mode BEC qubits.

A BEC qubit of ``N`` bosons in modes ``a`` and ``b`` is stored either as a
spin coherent pair ``(alpha, beta)`` or as a length ``N + 1`` vector over the
Fock basis ``|k>``, where ``k`` counts the bosons in mode ``a`` and
``S^z |k> = (2k - N) |k>``.

Every single-particle 2x2 unitary ``u`` acting on the mode vector ``(a, b)``
induces an N-particle unitary ``Gamma(u)`` on the Fock space, and coherent
states are closed under it: ``Gamma(u) |alpha, beta>> = |u (alpha, beta)>>``.
The measurement amplitudes below are evaluated through that closure instead of
building (N + 1)-dimensional matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy.special import gammaln

Axis = Literal["x", "y", "z", "number", "na", "nb"]
BasisVariant = Literal["x_basis", "hadamard_basis"]

NORM_TOL = 1e-12
UNITARY_TOL = 1e-12

# Rotation angle of the Hadamard generator S^y.  The sign is +3pi/4: with the
# S^y of a^dag b and b^dag a used here this maps |k> onto
# (a^dag + b^dag)^k (a^dag - b^dag)^(N-k) |vac>, which is the form the
# x-basis amplitudes cos^q sin^(N-q) rely on.
HADAMARD_ANGLE = 3.0 * np.pi / 4.0

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)


class SpinAlgebraError(ValueError):
    """Invalid input to a spin-algebra routine."""


@dataclass(frozen=True)
class SpinCoherentParams:
    """Spin coherent state ``(alpha a^dag + beta b^dag)^N |vac> / sqrt(N!)``."""

    alpha: complex
    beta: complex
    n_particles: int

    def __post_init__(self):
        if int(self.n_particles) != self.n_particles or self.n_particles < 1:
            raise SpinAlgebraError(f"n_particles must be a positive integer, got {self.n_particles!r}")
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "beta", complex(self.beta))
        object.__setattr__(self, "n_particles", int(self.n_particles))

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.alpha, self.beta], dtype=complex)

    @property
    def norm(self) -> float:
        return float(np.hypot(abs(self.alpha), abs(self.beta)))

    def is_normalized(self, tol: float = NORM_TOL) -> bool:
        return abs(self.norm**2 - 1.0) <= tol

    def normalized(self) -> SpinCoherentParams:
        n = self.norm
        if n == 0:
            raise SpinAlgebraError("cannot normalize the zero mode vector")
        return SpinCoherentParams(self.alpha / n, self.beta / n, self.n_particles)

    @classmethod
    def from_vector(cls, vec, n_particles: int) -> SpinCoherentParams:
        vec = np.asarray(vec, dtype=complex)
        return cls(vec[0], vec[1], n_particles)

    @property
    def relative_phase(self) -> float:
        """``arg(beta / alpha)``, the azimuth of the state on the Bloch sphere."""
        return float(np.angle(self.beta * np.conj(self.alpha)))


@dataclass(frozen=True)
class FockVector:
    """Amplitudes ``c_k`` over the Fock basis ``|k>``, ``k = 0..N``."""

    n_particles: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (self.n_particles + 1,):
            raise SpinAlgebraError(
                f"expected {self.n_particles + 1} amplitudes for N={self.n_particles}, got shape {amps.shape}"
            )
        object.__setattr__(self, "amplitudes", amps)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def inner(self, other: FockVector) -> complex:
        """``<self|other>``."""
        if other.n_particles != self.n_particles:
            raise SpinAlgebraError("Fock vectors have different particle numbers")
        return complex(np.vdot(self.amplitudes, other.amplitudes))


@dataclass(frozen=True)
class SpinOperatorMatrix:
    axis: str
    n_particles: int
    entries: np.ndarray

    def __matmul__(self, other):
        if isinstance(other, SpinOperatorMatrix):
            return self.entries @ other.entries
        return self.entries @ np.asarray(other)


@dataclass(frozen=True)
class MeasurementBasisSpec:
    """Projective BEC measurement basis with phase parameter ``theta``.

    The basis vector for outcome ``q`` is
    ``exp(-i (2 pi theta / L - pi/2) n^b) H |q>`` (``x_basis``), or that vector
    with one more Hadamard in front (``hadamard_basis``).
    """

    q: int
    theta: float
    big_l: int
    variant: BasisVariant = "x_basis"

    def __post_init__(self):
        if self.q < 0:
            raise SpinAlgebraError(f"outcome index q must be >= 0, got {self.q}")
        if self.big_l < 1:
            raise SpinAlgebraError(f"L must be >= 1, got {self.big_l}")
        if self.variant not in ("x_basis", "hadamard_basis"):
            raise SpinAlgebraError(f"unknown basis variant {self.variant!r}")

    @property
    def phase_angle(self) -> float:
        return 2.0 * np.pi * self.theta / self.big_l - np.pi / 2.0


# ---------------------------------------------------------------------------
# binomials and coherent expansions
# ---------------------------------------------------------------------------


def log_binom(n, k):
    """Natural log of the binomial coefficient, valid far beyond N = 170."""
    n = np.asarray(n, dtype=float)
    k = np.asarray(k, dtype=float)
    return gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)


def _check_n(n_particles: int) -> int:
    if int(n_particles) != n_particles or n_particles < 1:
        raise SpinAlgebraError(f"N must be a positive integer, got {n_particles!r}")
    return int(n_particles)


def fock_amplitudes(alpha, beta, n_particles: int, k=None) -> np.ndarray:
    """``sqrt(C(N, k)) alpha^k beta^(N - k)``, broadcast over array-valued alpha/beta.

    The result has the shape of ``k`` (default ``0..N``) prepended to the
    broadcast shape of ``alpha`` and ``beta``.  Magnitudes are assembled in log
    form so large N neither overflows the binomial nor underflows the powers
    before they are combined.
    """
    n = _check_n(n_particles)
    alpha = np.asarray(alpha, dtype=complex)
    beta = np.asarray(beta, dtype=complex)
    alpha, beta = np.broadcast_arrays(alpha, beta)
    ks = np.arange(n + 1) if k is None else np.atleast_1d(np.asarray(k))
    kk = ks.reshape(ks.shape + (1,) * alpha.ndim)
    with np.errstate(divide="ignore"):
        log_a = np.log(np.abs(alpha))
        log_b = np.log(np.abs(beta))
    # 0 * log(0) must read as 0 (0^0 = 1)
    with np.errstate(invalid="ignore"):
        term_a = np.where(kk == 0, 0.0, kk * log_a)
        term_b = np.where(n - kk == 0, 0.0, (n - kk) * log_b)
    log_mag = 0.5 * log_binom(n, kk) + term_a + term_b
    phase = kk * np.angle(alpha) + (n - kk) * np.angle(beta)
    out = np.exp(log_mag + 1j * phase)
    if k is not None and np.ndim(k) == 0:
        return out[0]
    return out


def coherent_to_fock(params: SpinCoherentParams) -> FockVector:
    """Expand a spin coherent state in the Fock basis."""
    if not params.is_normalized(1e-10):
        raise SpinAlgebraError(f"coherent params are not normalized (|alpha|^2+|beta|^2 = {params.norm**2!r})")
    amps = fock_amplitudes(params.alpha, params.beta, params.n_particles)
    return FockVector(params.n_particles, amps)


def coherent_overlap(p: SpinCoherentParams, q: SpinCoherentParams) -> complex:
    """``<<p|q>> = (conj(alpha_p) alpha_q + conj(beta_p) beta_q)^N``."""
    if p.n_particles != q.n_particles:
        raise SpinAlgebraError(f"particle numbers differ: {p.n_particles} vs {q.n_particles}")
    single = np.conj(p.alpha) * q.alpha + np.conj(p.beta) * q.beta
    return complex(single**p.n_particles)


def coherent_overlap_array(alpha_p, beta_p, alpha_q, beta_q, n_particles: int) -> np.ndarray:
    """Vectorized ``coherent_overlap`` over arrays of mode amplitudes."""
    single = np.conj(alpha_p) * alpha_q + np.conj(beta_p) * beta_q
    return single**n_particles


# ---------------------------------------------------------------------------
# operators
# ---------------------------------------------------------------------------


def _ladder(n: int) -> np.ndarray:
    """Matrix of ``a^dag b`` in the Fock basis: ``|k> -> sqrt((k+1)(N-k)) |k+1>``."""
    k = np.arange(n)
    m = np.zeros((n + 1, n + 1), dtype=complex)
    m[k + 1, k] = np.sqrt((k + 1) * (n - k))
    return m


def spin_matrix(axis: Axis, n_particles: int) -> SpinOperatorMatrix:
    """Matrix of ``S^x, S^y, S^z``, the total number, or ``n^a``/``n^b``."""
    n = _check_n(n_particles)
    k = np.arange(n + 1)
    if axis == "z":
        entries = np.diag(2.0 * k - n).astype(complex)
    elif axis in ("x", "y"):
        raise_ = _ladder(n)
        lower = raise_.conj().T
        entries = raise_ + lower if axis == "x" else -1j * raise_ + 1j * lower
    elif axis == "number":
        entries = n * np.eye(n + 1, dtype=complex)
    elif axis == "na":
        entries = np.diag(k).astype(complex)
    elif axis == "nb":
        entries = np.diag(n - k).astype(complex)
    else:
        raise SpinAlgebraError(f"unknown axis {axis!r}")
    return SpinOperatorMatrix(axis, n, entries)


def expm_hermitian(generator: np.ndarray, angle: float) -> np.ndarray:
    """``exp(-i angle G)`` for Hermitian ``G`` via its eigendecomposition."""
    g = np.asarray(generator)
    if not np.allclose(g, g.conj().T, atol=1e-12):
        raise SpinAlgebraError("generator is not Hermitian")
    w, v = np.linalg.eigh(g)
    return (v * np.exp(-1j * angle * w)) @ v.conj().T


def hadamard_unitary(n_particles: int) -> SpinOperatorMatrix:
    """The BEC Hadamard ``exp(+3 i pi/4 S^y)`` on the (N+1)-dim Fock space."""
    n = _check_n(n_particles)
    sy = spin_matrix("y", n).entries
    return SpinOperatorMatrix("hadamard", n, expm_hermitian(sy, -HADAMARD_ANGLE))


def hadamard_2x2() -> np.ndarray:
    """Single-particle block of the BEC Hadamard, acting on ``(alpha, beta)``."""
    return expm_hermitian(SIGMA_Y, -HADAMARD_ANGLE)


def phase_2x2(phi) -> np.ndarray:
    """``diag(1, exp(-i phi))``: the single-particle action of ``exp(-i phi n^b)``."""
    return np.array([[1.0, 0.0], [0.0, np.exp(-1j * phi)]], dtype=complex)


def check_unitary(u: np.ndarray, tol: float = UNITARY_TOL) -> np.ndarray:
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2):
        raise SpinAlgebraError(f"expected a 2x2 matrix, got shape {u.shape}")
    err = np.max(np.abs(u.conj().T @ u - np.eye(2)))
    if err > tol:
        raise SpinAlgebraError(f"matrix is not unitary (max |u^dag u - 1| = {err:.3e})")
    return u


def rotate_coherent(params: SpinCoherentParams, u: np.ndarray) -> SpinCoherentParams:
    """Apply the single-particle unitary ``u`` to the mode vector ``(alpha, beta)``."""
    u = check_unitary(u)
    return SpinCoherentParams.from_vector(u @ params.vector, params.n_particles)


def induced_unitary(u: np.ndarray, n_particles: int) -> np.ndarray:
    """Dense N-particle unitary ``Gamma(u)`` on the Fock basis.

    Built column by column from the images of the Fock states, so it is an
    independent check on the exponentials of the spin generators.
    """
    u = check_unitary(u)
    n = _check_n(n_particles)
    # column k: (u_aa a^dag + u_ba b^dag)^k (u_ab a^dag + u_bb b^dag)^(N-k) / sqrt(k!(N-k)!)
    out = np.zeros((n + 1, n + 1), dtype=complex)
    for k in range(n + 1):
        poly = _mode_power(u[0, 0], u[1, 0], k)
        poly = np.convolve(poly, _mode_power(u[0, 1], u[1, 1], n - k))
        # poly[j] multiplies (a^dag)^j (b^dag)^(N-j); convert to normalized |j>
        j = np.arange(n + 1)
        norm = np.exp(0.5 * (gammaln(j + 1) + gammaln(n - j + 1) - gammaln(k + 1) - gammaln(n - k + 1)))
        out[:, k] = poly * norm
    return out


def _mode_power(ca, cb, power: int) -> np.ndarray:
    """Coefficients of ``(ca a^dag + cb b^dag)^power`` indexed by the a-power."""
    j = np.arange(power + 1)
    binom = np.exp(log_binom(power, j))
    with np.errstate(invalid="ignore"):
        return binom * np.power(complex(ca), j) * np.power(complex(cb), power - j)


# ---------------------------------------------------------------------------
# measurement bases
# ---------------------------------------------------------------------------


def basis_unitary_2x2(theta: float, big_l: int, variant: BasisVariant = "x_basis") -> np.ndarray:
    """Single-particle unitary ``w`` with ``|theta_q> = Gamma(w) |q>``."""
    phi = 2.0 * np.pi * theta / big_l - np.pi / 2.0
    h = hadamard_2x2()
    w = phase_2x2(phi) @ h
    if variant == "hadamard_basis":
        w = h @ w
    elif variant != "x_basis":
        raise SpinAlgebraError(f"unknown basis variant {variant!r}")
    return w


def basis_vectors(theta: float, big_l: int, n_particles: int, variant: BasisVariant = "x_basis") -> np.ndarray:
    """Dense columns ``|theta_q>``, q = 0..N, built from the N-particle matrices."""
    n = _check_n(n_particles)
    h = hadamard_unitary(n).entries
    phi = 2.0 * np.pi * theta / big_l - np.pi / 2.0
    nb = spin_matrix("nb", n).entries
    vecs = expm_hermitian(nb, phi) @ h
    if variant == "hadamard_basis":
        vecs = h @ vecs
    return vecs / np.linalg.norm(vecs, axis=0)


def basis_amplitudes(alpha, beta, n_particles: int, theta: float, big_l: int,
                     variant: BasisVariant = "x_basis", q=None) -> np.ndarray:
    """``<theta_q | alpha, beta>>`` for all q (or the given q), array-valued alpha/beta.

    ``<theta_q|psi> = <q| Gamma(w^dag) |psi>``, i.e. the Fock amplitude of the
    coherent state rotated by ``w^dag``.
    """
    w_dag = basis_unitary_2x2(theta, big_l, variant).conj().T
    alpha = np.asarray(alpha, dtype=complex)
    beta = np.asarray(beta, dtype=complex)
    a2 = w_dag[0, 0] * alpha + w_dag[0, 1] * beta
    b2 = w_dag[1, 0] * alpha + w_dag[1, 1] * beta
    return fock_amplitudes(a2, b2, n_particles, k=q)


def basis_amplitude(spec: MeasurementBasisSpec, params: SpinCoherentParams) -> complex:
    """Amplitude of outcome ``spec.q`` for a BEC in the coherent state ``params``."""
    if spec.q > params.n_particles:
        raise SpinAlgebraError(f"outcome q={spec.q} out of range 0..{params.n_particles}")
    return complex(basis_amplitudes(params.alpha, params.beta, params.n_particles,
                                    spec.theta, spec.big_l, spec.variant, q=spec.q))


def x_basis_closed_form(q, n_particles: int, x, theta: float, big_l: int) -> np.ndarray:
    """``sqrt(C(N,q)) |cos(u + pi/4)|^q |sin(u + pi/4)|^(N-q)`` with ``u = pi (x - theta) / L``.

    Modulus of the x-basis amplitude for the magic-time state
    ``(1/sqrt2, exp(-2 pi i x / L)/sqrt2)``.
    """
    u = np.pi * (np.asarray(x, dtype=float) - theta) / big_l
    q = np.asarray(q)
    with np.errstate(divide="ignore"):
        lc = np.log(np.abs(np.cos(u + np.pi / 4)))
        ls = np.log(np.abs(np.sin(u + np.pi / 4)))
    with np.errstate(invalid="ignore"):
        term_c = np.where(q == 0, 0.0, q * lc)
        term_s = np.where(n_particles - q == 0, 0.0, (n_particles - q) * ls)
    return np.exp(0.5 * log_binom(n_particles, q) + term_c + term_s)
