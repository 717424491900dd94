"""Klein-Gordon equation on the discrete phase-space lattice.

Two pictures are supported:

* the 4-axis partial difference operator
  ``sum_j (S_j)^2 - (S_4)^2 - m^2`` (``S`` = delta_sharp), analysed
  spectrally, and
* the 3-axis difference-differential equation
  ``phi_tt = K_m phi`` with ``K_m = sum_j (S_j)^2 - m^2``, integrated in
  continuous time with velocity Verlet.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
import scipy.sparse as sp

from .errors import ConvergenceError, DimensionMismatchError, StabilityError
from .lattice_ops import (
    DEFAULT_MEMORY_BUDGET,
    LatticeOperator,
    TruncatedBasis,
    WaveFunction,
    build_delta_sharp,
    check_dense_budget,
    lift_to_axis,
)

SPATIAL_AXES = 3


@dataclass(frozen=True)
class Metric:
    """Flat metric ``diag(1, 1, 1, -1)``; axis 3 is the time-like one."""

    signature: tuple[float, ...] = (1.0, 1.0, 1.0, -1.0)

    @property
    def lower(self) -> np.ndarray:
        return np.diag(self.signature)

    @property
    def upper(self) -> np.ndarray:
        return np.diag(1.0 / np.asarray(self.signature))

    def __getitem__(self, mu: int) -> float:
        return self.signature[mu]


ETA = Metric()


def _bases(bases, n_axes: int) -> tuple[TruncatedBasis, ...]:
    if isinstance(bases, TruncatedBasis):
        return (bases,) * n_axes
    bases = tuple(bases)
    if len(bases) != n_axes:
        raise DimensionMismatchError(f"expected {n_axes} bases, got {len(bases)}")
    return bases


@lru_cache(maxsize=32)
def _sharp_squared_lifted(bases: tuple[TruncatedBasis, ...], axis: int) -> sp.csr_matrix:
    s = lift_to_axis(build_delta_sharp(bases[axis]), axis, len(bases), bases).matrix
    return (s @ s).tocsr()


def sharp_squared_spectrum(basis: TruncatedBasis) -> np.ndarray:
    """Eigenvalues of ``-(delta_sharp)^2`` on one axis, ascending, all >= 0."""
    s = build_delta_sharp(basis).toarray()
    lam = np.linalg.eigvalsh(-(s @ s))
    return np.clip(lam, 0.0, None)


# --- 4-axis picture -------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class KGOperator4D:
    bases: tuple[TruncatedBasis, ...]
    mass: float
    operator: LatticeOperator

    @property
    def matrix(self) -> sp.csr_matrix:
        return self.operator.matrix

    @property
    def dim(self) -> int:
        return self.operator.shape[0]


def assemble_kg_operator_4d(bases, mass: float, memory_budget: int | None = DEFAULT_MEMORY_BUDGET) -> KGOperator4D:
    """``eta^{mu nu} S_mu S_nu - m^2`` on the 4-axis product lattice."""
    bases = _bases(bases, 4)
    for b in bases:
        if b.n_max < 3:
            raise ValueError(f"4-axis Klein-Gordon needs n_max >= 3 per axis, got {b.n_max}")
    check_dense_budget(bases, memory_budget, itemsize=8)
    n = int(np.prod([b.dim for b in bases]))
    m = -(mass**2) * sp.identity(n, format="csr")
    for mu in range(4):
        m = m + ETA[mu] * _sharp_squared_lifted(bases, mu)
    return KGOperator4D(bases, float(mass), LatticeOperator(bases, m.tocsr(), name="KG4"))


def tensor_sum_spectrum(bases, mass: float) -> np.ndarray:
    """Sorted spectrum of the 4-axis operator built from 1-axis spectra.

    Each eigenvalue is ``-(la + lb + lc) + ld - m^2`` where the ``l`` are
    eigenvalues of ``-(delta_sharp)^2`` on the respective axes.
    """
    bases = _bases(bases, 4)
    lam = [sharp_squared_spectrum(b) for b in bases]
    total = (
        -lam[0][:, None, None, None]
        - lam[1][None, :, None, None]
        - lam[2][None, None, :, None]
        + lam[3][None, None, None, :]
        - mass**2
    )
    return np.sort(total.ravel())


@dataclass(frozen=True)
class NullResidual:
    """Smallest singular value of the 4-axis operator and its vector."""

    min_singular_value: float
    vector: WaveFunction = field(repr=False)
    eigenvalue: float
    near_spectrum: bool


def kg_null_residual(op: KGOperator4D, tol: float = 1e-8) -> NullResidual:
    """Best approximate null vector of the (real symmetric) 4-axis operator.

    ``near_spectrum`` is True when ``m^2`` lies within ``tol`` of a point
    of ``eta S S``'s spectrum, i.e. an exact lattice solution exists.
    """
    dense = op.operator.toarray()
    try:
        vals, vecs = np.linalg.eigh(dense)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"symmetric eigensolver failed: {exc}") from exc
    k = int(np.argmin(np.abs(vals)))
    sigma = float(abs(vals[k]))
    return NullResidual(sigma, WaveFunction(op.bases, vecs[:, k]), float(vals[k]), sigma < tol)


# --- 3+1 picture ----------------------------------------------------------------


def assemble_spatial_kg_generator(bases, mass: float) -> LatticeOperator:
    """``K_m = sum_j (S_j)^2 - m^2``; negative definite for ``m > 0``."""
    bases = _bases(bases, SPATIAL_AXES)
    n = int(np.prod([b.dim for b in bases]))
    m = -(mass**2) * sp.identity(n, format="csr")
    for j in range(SPATIAL_AXES):
        m = m + _sharp_squared_lifted(bases, j)
    return LatticeOperator(bases, m.tocsr(), name="K_m")


@lru_cache(maxsize=32)
def _generator(bases: tuple[TruncatedBasis, ...], mass: float) -> sp.csr_matrix:
    return assemble_spatial_kg_generator(bases, mass).matrix


@dataclass(frozen=True, eq=False)
class KGState:
    """Snapshot ``(phi, d phi/dt)`` at time ``t``."""

    phi: WaveFunction
    phi_dot: WaveFunction
    t: float = 0.0
    mass: float = 1.0

    def __post_init__(self):
        if self.phi.dims != self.phi_dot.dims:
            raise DimensionMismatchError("phi and phi_dot live on different lattices")
        if self.phi.n_axes != SPATIAL_AXES:
            raise DimensionMismatchError("Klein-Gordon states need three spatial axes")
        if self.mass < 0:
            raise ValueError("mass must be non-negative")

    @property
    def bases(self) -> tuple[TruncatedBasis, ...]:
        return self.phi.bases


def power_iteration_radius(
    matrix, tol: float = 1e-10, max_iter: int = 20000, seed: int = 0
) -> float:
    """Largest eigenvalue magnitude of a symmetric matrix by power iteration."""
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(matrix.shape[0])
    x /= np.linalg.norm(x)
    est = 0.0
    for _ in range(max_iter):
        y = matrix @ x
        ny = np.linalg.norm(y)
        if ny == 0.0:
            return 0.0
        new = float(abs(np.dot(x, y)))
        x = y / ny
        if abs(new - est) <= tol * max(new, 1.0):
            return max(new, ny)
        est = new
    raise ConvergenceError("power iteration did not converge")


STABILITY_SAFETY = 1e-2


def stability_limit(bases, mass: float) -> float:
    """Largest stable leapfrog step ``2 / sqrt(rho)``, rho inflated by 1%.

    ``rho`` is the spectral radius of ``m^2 - sum_j (S_j)^2`` estimated by
    power iteration; the inflation absorbs the estimate's shortfall.
    """
    rho = power_iteration_radius(-_generator(_bases(bases, SPATIAL_AXES), float(mass)))
    return 2.0 / np.sqrt(rho * (1.0 + STABILITY_SAFETY))


def _check_step(bases, mass, dt):
    if dt == 0 or not np.isfinite(dt):
        raise ValueError("dt must be finite and nonzero")
    limit = stability_limit(bases, mass)
    if abs(dt) >= limit:
        raise StabilityError(
            f"|dt|={abs(dt):g} violates leapfrog stability bound {limit:.6g}; "
            f"try dt={0.9 * limit:.4g}",
            suggested_dt=0.9 * limit,
        )


def _verlet(k: sp.csr_matrix, phi, vel, dt, steps):
    """Yield ``(phi, vel)`` after each of ``steps`` velocity-Verlet steps."""
    acc = k @ phi
    half = 0.5 * dt
    for _ in range(steps):
        vel = vel + half * acc
        phi = phi + dt * vel
        acc = k @ phi
        vel = vel + half * acc
        yield phi, vel


def evolve_leapfrog(state: KGState, dt: float, steps: int, check_stability: bool = True) -> KGState:
    """Advance ``phi_tt = K_m phi`` by ``steps`` steps of size ``dt``.

    A negative ``dt`` integrates backwards; the scheme is time-reversible.
    """
    if steps < 0:
        raise ValueError("steps must be non-negative")
    if check_stability:
        _check_step(state.bases, state.mass, dt)
    k = _generator(state.bases, float(state.mass))
    phi, vel = state.phi.flat().copy(), state.phi_dot.flat().copy()
    for phi, vel in _verlet(k, phi, vel, dt, steps):
        pass
    return KGState(
        WaveFunction(state.bases, phi),
        WaveFunction(state.bases, vel),
        state.t + steps * dt,
        state.mass,
    )


def energy(state: KGState) -> float:
    """``|phi_dot|^2 + <phi, (m^2 - sum_j S_j^2) phi>`` at one instant."""
    k = _generator(state.bases, float(state.mass))
    phi, vel = state.phi.flat(), state.phi_dot.flat()
    return float(np.vdot(vel, vel).real - np.vdot(phi, k @ phi).real)


def staggered_energy(phi_now, phi_next, dt: float, k) -> float:
    """Energy between two consecutive leapfrog slices.

    ``|(phi_next - phi_now)/dt|^2 + <phi_next, (m^2 - sum S^2) phi_now>``
    is conserved exactly (up to rounding) by the scheme and tends to
    :func:`energy` as ``dt -> 0``.
    """
    d = (phi_next - phi_now) / dt
    return float(np.vdot(d, d).real - np.vdot(phi_next, k @ phi_now).real)


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Stored time slices of a 3+1 evolution with uniform spacing ``dt``."""

    bases: tuple[TruncatedBasis, ...]
    mass: float
    dt: float
    times: np.ndarray = field(repr=False)
    phis: np.ndarray = field(repr=False)
    phi_dots: np.ndarray = field(repr=False)

    @property
    def final_state(self) -> KGState:
        return KGState(
            WaveFunction(self.bases, self.phis[-1]),
            WaveFunction(self.bases, self.phi_dots[-1]),
            float(self.times[-1]),
            self.mass,
        )

    def energies(self) -> np.ndarray:
        k = _generator(self.bases, float(self.mass))
        return np.array(
            [
                np.vdot(v, v).real - np.vdot(p, k @ p).real
                for p, v in zip(self.phis, self.phi_dots)
            ]
        )

    def staggered_energies(self) -> np.ndarray:
        k = _generator(self.bases, float(self.mass))
        return np.array(
            [staggered_energy(a, b, self.dt, k) for a, b in zip(self.phis[:-1], self.phis[1:])]
        )


def run_trajectory(state: KGState, dt: float, steps: int, check_stability: bool = True) -> Trajectory:
    """Like :func:`evolve_leapfrog` but keeps every slice."""
    if check_stability:
        _check_step(state.bases, state.mass, dt)
    k = _generator(state.bases, float(state.mass))
    phi, vel = state.phi.flat().copy(), state.phi_dot.flat().copy()
    phis, vels = [phi], [vel]
    for phi, vel in _verlet(k, phi, vel, dt, steps):
        phis.append(phi)
        vels.append(vel)
    times = state.t + dt * np.arange(steps + 1)
    return Trajectory(state.bases, float(state.mass), float(dt), times, np.array(phis), np.array(vels))


def history_from_function(bases, mass: float, times, func) -> Trajectory:
    """Sample ``func(t) -> (phi, phi_dot)`` flat arrays on ``times``."""
    bases = _bases(bases, SPATIAL_AXES)
    times = np.asarray(times, dtype=float)
    dts = np.diff(times)
    pairs = [func(t) for t in times]
    phis = np.array([np.asarray(p, dtype=complex) for p, _ in pairs])
    vels = np.array([np.asarray(v, dtype=complex) for _, v in pairs])
    return Trajectory(bases, float(mass), float(dts[0]) if len(dts) else 0.0, times, phis, vels)


def check_uniform(traj: Trajectory, min_slices: int = 3) -> None:
    if len(traj.times) < min_slices:
        raise ValueError(f"need at least {min_slices} stored time slices, got {len(traj.times)}")
    dts = np.diff(traj.times)
    if not np.allclose(dts, traj.dt, rtol=1e-9, atol=0.0):
        raise ValueError("time slices are not uniformly spaced")


def residual_slices(traj: Trajectory) -> np.ndarray:
    """``K_m phi_k - (phi_{k+1} - 2 phi_k + phi_{k-1}) / dt^2`` for inner slices."""
    check_uniform(traj)
    k = _generator(traj.bases, float(traj.mass))
    p = traj.phis
    d2 = (p[2:] - 2.0 * p[1:-1] + p[:-2]) / traj.dt**2
    return (k @ p[1:-1].T).T - d2


def kg_residual_3plus1(traj: Trajectory) -> float:
    """Max-norm residual of the 3+1 equation over all inner slices."""
    r = residual_slices(traj)
    return float(np.max(np.abs(r))) if r.size else 0.0


# --- initial data ---------------------------------------------------------------


def eigenmodes(bases, mass: float) -> tuple[np.ndarray, np.ndarray]:
    """Angular frequencies (ascending) and eigenvectors of ``-K_m``."""
    k = assemble_spatial_kg_generator(bases, mass).toarray()
    vals, vecs = np.linalg.eigh(-k)
    return np.sqrt(np.clip(vals, 0.0, None)), vecs


def initial_state(
    bases,
    mass: float,
    kind: str = "eigenmode",
    mode: int = 0,
    seed: int = 0,
    width: float = 1.0,
) -> KGState:
    """Built-in initial data.

    ``eigenmode``: eigenvector ``mode`` of ``K_m`` (ascending frequency) at
    rest. ``gaussian``: ``exp(-|n|^2 / (2 width^2))`` at rest, unit norm.
    ``random``: seeded normal amplitudes at rest, unit norm. ``zero``.
    """
    bases = _bases(bases, SPATIAL_AXES)
    dims = tuple(b.dim for b in bases)
    if kind == "zero":
        phi = np.zeros(dims)
    elif kind == "eigenmode":
        _, vecs = eigenmodes(bases, mass)
        if not 0 <= mode < vecs.shape[1]:
            raise ValueError(f"mode {mode} out of range 0..{vecs.shape[1] - 1}")
        phi = vecs[:, mode]
    elif kind == "gaussian":
        grids = np.meshgrid(*[np.arange(d) for d in dims], indexing="ij")
        phi = np.exp(-sum(g**2 for g in grids) / (2.0 * width**2))
        phi = phi / np.linalg.norm(phi)
    elif kind == "random":
        phi = np.random.default_rng(seed).standard_normal(dims)
        phi = phi / np.linalg.norm(phi)
    else:
        raise ValueError(f"unknown initial condition {kind!r}")
    return KGState(WaveFunction(bases, phi), WaveFunction.zeros(bases), 0.0, float(mass))


def trajectory_rows(traj: Trajectory, stride: int = 1):
    """Yield ``(t, n1, n2, n3, re, im)`` rows every ``stride`` slices."""
    dims = tuple(b.dim for b in traj.bases)
    idx = list(itertools.product(*[range(d) for d in dims]))
    for s in range(0, len(traj.times), stride):
        t = float(traj.times[s])
        for (a, b, c), v in zip(idx, traj.phis[s]):
            yield (t, a, b, c, float(v.real), float(v.imag))
