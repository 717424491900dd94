"""Planck oscillator in continuum and discrete phase-space representations.

Energies are reported both in physical units (``energy``) and as the
dimensionless ratio ``E / (hbar nu)`` (``level``).
"""

from __future__ import annotations

import math
import tempfile
from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.sparse as sp
from numpy.polynomial.hermite import hermgauss
from scipy import integrate

from .errors import ConvergenceError, DomainError
from .lattice_ops import (
    LatticeOperator,
    TruncatedBasis,
    WaveFunction,
    build_delta,
    build_delta_circ,
    build_delta_prime,
    build_delta_sharp,
    write_matrix_text,
)

HERMITE_MAX = 200


@dataclass(frozen=True)
class PhysicalConstants:
    """hbar, c, characteristic length l and circular frequency nu.

    In ``fundamental`` mode hbar = c = l = 1 exactly; nu stays free.
    """

    hbar: float = 1.0
    c: float = 1.0
    l: float = 1.0
    nu: float = 1.0
    mode: str = "fundamental"

    def __post_init__(self):
        if self.mode not in ("fundamental", "explicit"):
            raise ValueError(f"unknown units mode {self.mode!r}")
        for name in ("hbar", "c", "l", "nu"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be positive and finite, got {v}")
        if self.mode == "fundamental" and (self.hbar, self.c, self.l) != (1.0, 1.0, 1.0):
            raise ValueError("fundamental mode requires hbar = c = l = 1")

    @classmethod
    def fundamental(cls, nu: float = 1.0) -> "PhysicalConstants":
        return cls(nu=nu)

    @classmethod
    def explicit(cls, hbar, c, l, nu=1.0) -> "PhysicalConstants":
        return cls(float(hbar), float(c), float(l), float(nu), mode="explicit")

    @property
    def hbar_nu(self) -> float:
        return self.hbar * self.nu


FUNDAMENTAL = PhysicalConstants()


def level_energy(N: int, constants: PhysicalConstants = FUNDAMENTAL) -> float:
    """``(N + 1/2) hbar nu``."""
    return (N + 0.5) * constants.hbar_nu


def hermite(N: int, x, n_cap: int = HERMITE_MAX):
    """Physicists' Hermite polynomial by three-term recurrence."""
    if N < 0 or int(N) != N:
        raise DomainError(f"Hermite degree must be a non-negative integer, got {N}")
    if N > n_cap:
        raise DomainError(f"Hermite degree {N} exceeds cap {n_cap}")
    x = np.asarray(x, dtype=float)
    h_prev = np.ones_like(x)
    if N == 0:
        return h_prev if h_prev.ndim else float(h_prev)
    h = 2.0 * x
    for k in range(1, N):
        h_prev, h = h, 2.0 * x * h - 2.0 * k * h_prev
    return h if h.ndim else float(h)


def _log_norm(N: int) -> float:
    # log(pi^(1/4) 2^(N/2) sqrt(N!))
    return 0.25 * math.log(math.pi) + 0.5 * N * math.log(2.0) + 0.5 * math.lgamma(N + 1)


@dataclass(frozen=True)
class ContinuumEigenstate:
    N: int
    energy: float
    constants: PhysicalConstants
    representation: str = "q"

    @property
    def level(self) -> float:
        return self.energy / self.constants.hbar_nu

    def eval_q(self, q):
        """Wave function at position ``q``, normalized over ``dq``."""
        l = self.constants.l
        x = np.asarray(q, dtype=float) / l
        log_scale = -0.5 * x**2 - _log_norm(self.N) - 0.5 * math.log(l)
        return np.exp(log_scale) * hermite(self.N, x)

    def eval_y(self, y):
        """Dimensionless profile in ``y = (q/l)^2 / 2``; requires ``y > 0``."""
        y = np.asarray(y, dtype=float)
        if np.any(y <= 0):
            raise DomainError("y-representation is defined for y > 0 only")
        return np.exp(-y - _log_norm(self.N)) * hermite(self.N, np.sqrt(2.0 * y))


def continuum_eigenstate_q(N: int, constants: PhysicalConstants = FUNDAMENTAL) -> ContinuumEigenstate:
    if N < 0:
        raise DomainError("N must be non-negative")
    return ContinuumEigenstate(int(N), level_energy(N, constants), constants, "q")


def continuum_eigenstate_y(N: int, constants: PhysicalConstants = FUNDAMENTAL) -> ContinuumEigenstate:
    if N < 0:
        raise DomainError("N must be non-negative")
    return ContinuumEigenstate(int(N), level_energy(N, constants), constants, "y")


def overlap_q(
    a: ContinuumEigenstate,
    b: ContinuumEigenstate,
    method: str = "adaptive",
    tol: float = 1e-10,
    half_width: float = 12.0,
    nodes: int = 64,
) -> float:
    """``integral psi_a(q) psi_b(q) dq`` by quadrature.

    ``adaptive`` integrates over ``[-half_width, half_width] * l`` with
    QUADPACK; ``gauss-hermite`` uses ``nodes`` Gauss-Hermite points.
    """
    l = a.constants.l
    if method == "adaptive":
        val, _ = integrate.quad(
            lambda q: a.eval_q(q) * b.eval_q(q),
            -half_width * l,
            half_width * l,
            epsabs=tol,
            epsrel=tol,
            limit=400,
        )
        return float(val)
    if method == "gauss-hermite":
        x, w = hermgauss(nodes)
        f = a.eval_q(l * x) * b.eval_q(l * x) * np.exp(x**2)
        return float(l * np.dot(w, f))
    raise ValueError(f"unknown quadrature method {method!r}")


def energy_expectation_q(N: int, constants: PhysicalConstants = FUNDAMENTAL, nodes: int = 96) -> float:
    """``<psi_N | H | psi_N>`` evaluated by Gauss-Hermite quadrature.

    The kinetic term uses the derivative identity
    ``psi_N' = [sqrt(N/2) psi_{N-1} - sqrt((N+1)/2) psi_{N+1}] / l``, so the
    result does not depend on the differential equation being checked.
    """
    l, hbar = constants.l, constants.hbar
    x, w = hermgauss(nodes)
    q = l * x
    psi = continuum_eigenstate_q(N, constants).eval_q(q)
    up = continuum_eigenstate_q(N + 1, constants).eval_q(q)
    down = continuum_eigenstate_q(N - 1, constants).eval_q(q) if N > 0 else 0.0
    dpsi = (math.sqrt(N / 2.0) * down - math.sqrt((N + 1) / 2.0) * up) / l
    weight = l * w * np.exp(x**2)
    # H = p^2 / (2 m) + m nu^2 q^2 / 2 with m = hbar / (nu l^2)
    mass = hbar / (constants.nu * l**2)
    kinetic = hbar**2 / (2.0 * mass) * np.dot(weight, dpsi**2)
    potential = 0.5 * mass * constants.nu**2 * np.dot(weight, q**2 * psi**2)
    return float(kinetic + potential)


def gram_matrix(n_top: int, constants: PhysicalConstants = FUNDAMENTAL, **quad_kw) -> np.ndarray:
    states = [continuum_eigenstate_q(n, constants) for n in range(n_top + 1)]
    g = np.empty((n_top + 1, n_top + 1))
    for i in range(n_top + 1):
        for j in range(i, n_top + 1):
            g[i, j] = g[j, i] = overlap_q(states[i], states[j], **quad_kw)
    return g


def y_ode_residual(
    state: ContinuumEigenstate,
    y_min: float = 0.1,
    y_max: float = 8.0,
    h: float = 1e-3,
) -> float:
    """Max residual of the y-representation wave equation on a grid.

    The operator ``sqrt(2y) d/dy [sqrt(2y) d/dy]`` is expanded to
    ``2y d2/dy2 + d/dy`` and both derivatives use fourth-order central
    stencils with step ``h``; the grid spacing is also ``h``.
    """
    if y_min - 2 * h <= 0:
        raise DomainError("stencil would reach y <= 0")
    y = np.arange(y_min, y_max + 0.5 * h, h)
    f = state.eval_y
    fm2, fm1, f0, fp1, fp2 = (f(y + k * h) for k in (-2, -1, 0, 1, 2))
    d1 = (fm2 - 8 * fm1 + 8 * fp1 - fp2) / (12 * h)
    d2 = (-fm2 + 16 * fm1 - 30 * f0 + 16 * fp1 - fp2) / (12 * h * h)
    r = 2 * y * d2 + d1 + (2 * state.level - 2 * y) * f0
    return float(np.max(np.abs(r)))


# --- discrete representation -------------------------------------------------


def build_position_operator_1d(basis: TruncatedBasis, constants: PhysicalConstants = FUNDAMENTAL) -> LatticeOperator:
    """``Q = l * delta_circ``."""
    op = build_delta_circ(basis) * constants.l
    return LatticeOperator(op.bases, op.matrix, name="Q")


def build_momentum_operator_1d(basis: TruncatedBasis, constants: PhysicalConstants = FUNDAMENTAL) -> LatticeOperator:
    """``P = (-i hbar / l) * delta_sharp``; Hermitian."""
    op = build_delta_sharp(basis) * (-1j * constants.hbar / constants.l)
    return LatticeOperator(op.bases, op.matrix, name="P")


def _half_root_weight(basis: TruncatedBasis) -> sp.csr_matrix:
    n = np.arange(basis.dim, dtype=float)
    return sp.diags(np.sqrt(n / 2.0), format="csr")


def position_operator_split(basis: TruncatedBasis, constants: PhysicalConstants = FUNDAMENTAL) -> LatticeOperator:
    """Position operator assembled from forward/backward differences.

    ``Q = l [sqrt(2n) + D W - W D']`` with ``W = diag(sqrt(n/2))``, which is
    the lattice point ``y_n = n l`` form of the same operator.
    """
    w = _half_root_weight(basis)
    d = build_delta(basis).matrix
    dp = build_delta_prime(basis).matrix
    n = np.arange(basis.dim, dtype=float)
    m = sp.diags(np.sqrt(2.0 * n)) + d @ w - w @ dp
    return LatticeOperator((basis,), constants.l * m, name="Q_split")


def momentum_operator_split(basis: TruncatedBasis, constants: PhysicalConstants = FUNDAMENTAL) -> LatticeOperator:
    """Momentum operator assembled from forward/backward differences.

    ``P = (-i hbar / l) [D W + W D']`` with ``W = diag(sqrt(n/2))``.
    """
    w = _half_root_weight(basis)
    d = build_delta(basis).matrix
    dp = build_delta_prime(basis).matrix
    m = d @ w + w @ dp
    return LatticeOperator((basis,), (-1j * constants.hbar / constants.l) * m, name="P_split")


def discrete_hamiltonian(basis: TruncatedBasis, constants: PhysicalConstants = FUNDAMENTAL) -> LatticeOperator:
    """Dimensionless Hamiltonian ``(1/2)[(l/hbar)^2 P^2 + (1/l)^2 Q^2]``.

    Eigenvalues are ``E / (hbar nu)``. Equals
    ``(1/2)[-(delta_sharp)^2 + (delta_circ)^2]`` for every choice of units.
    """
    p = build_momentum_operator_1d(basis, constants).matrix
    q = build_position_operator_1d(basis, constants).matrix
    l, hbar = constants.l, constants.hbar
    h = 0.5 * ((l / hbar) ** 2 * (p @ p) + (q @ q) / l**2)
    if np.any(np.abs(h.data.imag) > 0):
        raise AssertionError("Hamiltonian picked up an imaginary part")
    return LatticeOperator((basis,), h.real, name="H")


@dataclass(frozen=True)
class DiscreteEigenstate:
    """Eigenpair of the discrete Hamiltonian.

    ``interior`` is False for states touching the truncation edge, whose
    eigenvalue is an artifact of the cut.
    """

    N: int
    level: float
    energy: float
    vector: WaveFunction
    interior: bool = True


def exact_discrete_eigenstate(basis: TruncatedBasis, N: int, constants: PhysicalConstants = FUNDAMENTAL) -> DiscreteEigenstate:
    """The closed-form eigenstate: unit amplitude at index ``N``."""
    if not 0 <= N <= basis.n_max:
        raise DomainError(f"N={N} outside lattice 0..{basis.n_max}")
    return DiscreteEigenstate(
        N, N + 0.5, level_energy(N, constants), WaveFunction.delta(basis, N), N <= basis.interior_max
    )


def solve_discrete_spectrum(basis: TruncatedBasis, constants: PhysicalConstants = FUNDAMENTAL) -> list[DiscreteEigenstate]:
    """Diagonalize the discrete Hamiltonian.

    Each eigenvector is labelled by the lattice index carrying its largest
    amplitude and phased so that amplitude is real positive. The list is
    ordered by that label.
    """
    h = discrete_hamiltonian(basis, constants)
    dense = h.toarray()
    try:
        vals, vecs = np.linalg.eigh(dense)
    except np.linalg.LinAlgError as exc:
        dump = tempfile.NamedTemporaryFile("w", suffix=".mtx.txt", delete=False)
        dump.close()
        write_matrix_text(h, dump.name)
        raise ConvergenceError(f"eigh failed ({exc}); matrix written to {dump.name}") from exc
    states = []
    for k in range(len(vals)):
        v = vecs[:, k]
        n = int(np.argmax(np.abs(v)))
        v = v * (np.conj(v[n]) / abs(v[n]))
        states.append(
            DiscreteEigenstate(
                n,
                float(vals[k]),
                float(vals[k]) * constants.hbar_nu,
                WaveFunction((basis,), v),
                n <= basis.interior_max,
            )
        )
    states.sort(key=lambda s: s.N)
    return states


def spectrum_table(basis: TruncatedBasis, constants: PhysicalConstants = FUNDAMENTAL, n_top: int | None = None):
    """Rows ``(N, E_q, E_y, E_discrete)`` for interior levels up to ``n_top``.

    ``E_q`` is the quadrature expectation value of the Hamiltonian, ``E_y``
    the eigenvalue attached to the y-representation solution and
    ``E_discrete`` comes from diagonalizing the lattice Hamiltonian.
    """
    discrete = {s.N: s for s in solve_discrete_spectrum(basis, constants)}
    n_top = basis.interior_max if n_top is None else min(n_top, basis.interior_max)
    rows = []
    for n in range(n_top + 1):
        rows.append(
            (
                n,
                energy_expectation_q(n, constants),
                continuum_eigenstate_y(n, constants).energy,
                discrete[n].energy,
            )
        )
    return rows


def tabulate(state: ContinuumEigenstate, grid) -> np.ndarray:
    """``(x, psi)`` columns; ``x`` is ``q`` or ``y`` per the representation."""
    grid = np.asarray(grid, dtype=float)
    f: Callable = state.eval_q if state.representation == "q" else state.eval_y
    return np.column_stack([grid, f(grid)])
