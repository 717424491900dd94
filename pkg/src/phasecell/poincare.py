"""Poincare generators, finite transforms and invariance checks.

Axes 0..2 are space-like and axis 3 is time-like (metric ``diag(1,1,1,-1)``).
Generators follow the Schrodinger picture: states transform, operators do
not.

    P_mu    = -i S_mu                         (S = delta_sharp, lifted)
    Q_mu    = eta_mu S°_mu                    (S° = delta_circ, lifted)
    J_ab    = (1/2)(Q_a P_b - Q_b P_a + P_b Q_a - P_a Q_b)
    casimir = eta^{mu nu} P_mu P_nu

With these conventions ``J_{j3}`` generates Lorentz boosts, and both the
casimir and the Klein-Gordon operator commute with every generator on the
interior block of the truncated lattice.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .errors import ConvergenceError, DimensionMismatchError
from .klein_gordon import ETA, KGOperator4D, Trajectory, check_uniform, _generator
from .lattice_ops import (
    DEFAULT_MEMORY_BUDGET,
    LatticeOperator,
    TruncatedBasis,
    WaveFunction,
    build_delta_circ,
    build_delta_sharp,
    check_dense_budget,
    commutator,
    interior_mask,
    interior_norm,
    lift_to_axis,
    max_norm,
)

PAIRS = tuple(itertools.combinations(range(4), 2))
EXPM_TOL = 1e-14


@dataclass(frozen=True)
class PoincareParams:
    """Translation ``c^mu`` and antisymmetric ``omega^{ab}``."""

    c_mu: tuple[float, float, float, float] = (0.0, 0.0, 0.0, 0.0)
    omega: np.ndarray = field(default_factory=lambda: np.zeros((4, 4)))

    def __post_init__(self):
        c = tuple(float(x) for x in self.c_mu)
        if len(c) != 4:
            raise ValueError("c_mu needs four components")
        w = np.array(self.omega, dtype=float)
        if w.shape != (4, 4):
            raise ValueError("omega must be 4x4")
        if np.any(w + w.T != 0):
            raise ValueError("omega must be antisymmetric")
        w.flags.writeable = False
        object.__setattr__(self, "c_mu", c)
        object.__setattr__(self, "omega", w)

    @classmethod
    def from_upper(cls, c_mu=(0, 0, 0, 0), upper=(0, 0, 0, 0, 0, 0)) -> "PoincareParams":
        """Build from ``omega^{01}, ^{02}, ^{03}, ^{12}, ^{13}, ^{23}``."""
        w = np.zeros((4, 4))
        for (a, b), v in zip(PAIRS, upper):
            w[a, b], w[b, a] = v, -v
        return cls(tuple(c_mu), w)

    def upper(self) -> tuple[float, ...]:
        return tuple(float(self.omega[a, b]) for a, b in PAIRS)

    @property
    def is_zero(self) -> bool:
        return not any(self.c_mu) and not np.any(self.omega)

    @property
    def is_translation(self) -> bool:
        return not np.any(self.omega)

    def __neg__(self) -> "PoincareParams":
        return PoincareParams(tuple(-x for x in self.c_mu), -self.omega)


@dataclass(frozen=True, eq=False)
class GeneratorSet:
    bases: tuple[TruncatedBasis, ...]
    P: tuple[LatticeOperator, ...]
    Q: tuple[LatticeOperator, ...]
    J_upper: dict
    casimir: LatticeOperator

    def J(self, a: int, b: int) -> LatticeOperator:
        if a == b:
            return LatticeOperator(self.bases, sp.csr_matrix(self.P[0].shape, dtype=complex), name=f"J{a}{b}")
        if a < b:
            return self.J_upper[(a, b)]
        return -self.J_upper[(b, a)]

    def all_ten(self) -> dict[str, LatticeOperator]:
        """The ten generators keyed ``P0..P3`` and ``J01..J23``."""
        out = {f"P{mu}": p for mu, p in enumerate(self.P)}
        out.update({f"J{a}{b}": self.J_upper[(a, b)] for a, b in PAIRS})
        return out


def _four(bases):
    if isinstance(bases, TruncatedBasis):
        return (bases,) * 4
    bases = tuple(bases)
    if len(bases) != 4:
        raise DimensionMismatchError("Poincare generators need four axes")
    return bases


def build_generators(bases, memory_budget: int | None = DEFAULT_MEMORY_BUDGET) -> GeneratorSet:
    bases = _four(bases)
    check_dense_budget(bases, memory_budget)
    P, Q = [], []
    for mu in range(4):
        s = lift_to_axis(build_delta_sharp(bases[mu]), mu, 4, bases)
        c = lift_to_axis(build_delta_circ(bases[mu]), mu, 4, bases)
        P.append(LatticeOperator(bases, -1j * s.matrix, axis=mu, name=f"P{mu}"))
        Q.append(LatticeOperator(bases, ETA[mu] * c.matrix, axis=mu, name=f"Q{mu}"))
    J = {}
    for a, b in PAIRS:
        m = 0.5 * (
            Q[a].matrix @ P[b].matrix
            - Q[b].matrix @ P[a].matrix
            + P[b].matrix @ Q[a].matrix
            - P[a].matrix @ Q[b].matrix
        )
        J[(a, b)] = LatticeOperator(bases, m.tocsr(), name=f"J{a}{b}")
    cas = sum(ETA[mu] * (P[mu].matrix @ P[mu].matrix) for mu in range(4))
    casimir = LatticeOperator(bases, cas.tocsr(), name="casimir")
    return GeneratorSet(bases, tuple(P), tuple(Q), J, casimir)


@dataclass(frozen=True)
class CheckResult:
    """One invariance or identity check, as exported in reports."""

    test: str
    n_max: int
    margin: int
    norm_interior: float
    norm_full: float
    tolerance: float
    passed: bool
    asserted: bool = True

    def as_dict(self) -> dict:
        return {
            "test": self.test,
            "n_max": self.n_max,
            "margin": self.margin,
            "norm_interior": self.norm_interior,
            "norm_full": self.norm_full,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "asserted": self.asserted,
        }


def _n_max(bases) -> int:
    return max(b.n_max for b in bases)


def check_casimir_commutation(gens: GeneratorSet, margin: int = 4, tol: float = 1e-12) -> list[CheckResult]:
    """Interior and full max-norms of ``[casimir, G]`` for the ten generators.

    The full norm is a truncation artifact and is reported, not asserted.
    """
    out = []
    for name, g in gens.all_ten().items():
        c = commutator(gens.casimir, g)
        ni = interior_norm(c, margin)
        out.append(
            CheckResult(f"[casimir,{name}]", _n_max(gens.bases), margin, ni, max_norm(c), tol, ni < tol)
        )
    return out


# --- matrix exponential ---------------------------------------------------------


def expm(a, tol: float = EXPM_TOL, theta: float = 0.5, max_terms: int = 200) -> np.ndarray:
    """Matrix exponential by scaling and squaring of a Taylor series.

    ``a`` may be sparse or dense. It is scaled by ``2^-s`` so its 1-norm is
    at most ``theta``; the series is summed until a term's 1-norm drops
    below ``tol`` times the running sum's, then squared ``s`` times.
    """
    n = a.shape[0]
    dtype = np.result_type(a.dtype, np.float64)
    if sp.issparse(a):
        a = a.tocsr()
        norm1 = float(abs(a).sum(axis=0).max()) if a.nnz else 0.0
    else:
        a = np.asarray(a)
        norm1 = float(np.abs(a).sum(axis=0).max()) if a.size else 0.0
    result = np.eye(n, dtype=dtype)
    if norm1 == 0.0:
        return result
    s = max(0, int(np.ceil(np.log2(norm1 / theta))))
    b = a / (2.0**s)
    term = np.eye(n, dtype=dtype)
    for k in range(1, max_terms + 1):
        term = np.asarray(b @ term) / k
        result = result + term
        tn = np.abs(term).sum(axis=0).max()
        if not np.isfinite(tn):
            raise ConvergenceError("Taylor series diverged")
        if tn <= tol * np.abs(result).sum(axis=0).max():
            break
    else:
        raise ConvergenceError(f"Taylor series did not converge in {max_terms} terms")
    for _ in range(s):
        result = result @ result
    return result


def transform_exponent(gens: GeneratorSet, params: PoincareParams) -> LatticeOperator:
    """Real exponent ``-i c^mu P_mu + (i/4) omega^{ab} (2 J_ab)`` of U.

    Every term is real antisymmetric, so U is orthogonal.
    """
    n = gens.P[0].shape[0]
    x = sp.csr_matrix((n, n), dtype=complex)
    for mu, c in enumerate(params.c_mu):
        if c:
            x = x - 1j * c * gens.P[mu].matrix
    for a, b in PAIRS:
        w = params.omega[a, b]
        if w:
            # the double sum over (a,b) and (b,a) of omega^{ab} J_ab / 2
            x = x + 1j * w * gens.J_upper[(a, b)].matrix
    if x.nnz and np.max(np.abs(x.data.imag)) > 1e-13 * max(1.0, np.max(np.abs(x.data))):
        raise AssertionError("transform exponent is not real")
    return LatticeOperator(gens.bases, x.real.tocsr(), name="log U")


@dataclass(frozen=True, eq=False)
class FiniteTransform:
    params: PoincareParams
    exponent: LatticeOperator
    U: LatticeOperator
    orthogonality_defect: float


def build_finite_transform(
    gens: GeneratorSet, params: PoincareParams, memory_budget: int | None = DEFAULT_MEMORY_BUDGET
) -> FiniteTransform:
    """``U = exp(exponent)`` as a dense operator; reports ``max|U^T U - I|``."""
    check_dense_budget(gens.bases, memory_budget)
    x = transform_exponent(gens, params)
    if params.is_zero:
        u = np.eye(x.shape[0])
    else:
        u = expm(x.matrix)
    defect = float(np.max(np.abs(u.T @ u - np.eye(u.shape[0]))))
    return FiniteTransform(params, x, LatticeOperator(gens.bases, u, name="U"), defect)


def interior_test_vector(bases, margin: int = 4, seed: int = 0) -> WaveFunction:
    """Seeded random vector supported on the interior block."""
    bases = _four(bases)
    mask = interior_mask(bases, margin)
    v = np.zeros(mask.size)
    v[mask] = np.random.default_rng(seed).standard_normal(int(mask.sum()))
    return WaveFunction(bases, v / np.linalg.norm(v))


def check_kg_invariance_4d(
    op4d: KGOperator4D,
    transform: FiniteTransform,
    test_vector: WaveFunction,
    margin: int = 4,
    tol: float = 1e-10,
    asserted: bool | None = None,
) -> CheckResult:
    """Compare ``KG (U phi)`` with ``U (KG phi)``.

    The interior norm is the max-abs difference over interior sites. It is
    asserted by default only for pure translations, where ``U`` commutes
    with ``KG`` exactly; rotations and boosts leak across the truncation
    edge and are reported.
    """
    if test_vector.dims != op4d.operator.dims:
        raise DimensionMismatchError("test vector does not match the operator's lattice")
    kg = op4d.matrix
    u = transform.U.matrix
    phi = test_vector.flat()
    diff = kg @ (u @ phi) - u @ (kg @ phi)
    mask = interior_mask(op4d.bases, margin)
    ni = float(np.max(np.abs(diff[mask])))
    nf = float(np.max(np.abs(diff)))
    if asserted is None:
        asserted = transform.params.is_translation
    name = "kg4_invariance_translation" if transform.params.is_translation else "kg4_invariance_general"
    return CheckResult(name, _n_max(op4d.bases), margin, ni, nf, tol, ni < tol, asserted)


# --- 3+1 boost check ------------------------------------------------------------


def _lifted3(bases, builder, axis):
    return lift_to_axis(builder(bases[axis]), axis, 3, bases).matrix


@dataclass(frozen=True)
class BoostReport:
    """Result of the first-order invariance check in the 3+1 picture.

    ``growth[i]`` is the residual increase for ``eps[i]``; ``slope`` is the
    log-log fit of growth against eps. Growth quadratic in eps (slope near
    2) means the first-order transformed field solves the equation as well
    as the original.
    """

    eps: tuple[float, ...]
    base_residual: float
    residuals: tuple[float, ...]
    growth: tuple[float, ...]
    slope: float
    min_slope: float
    passed: bool
    trivial: bool = False

    def as_dict(self) -> dict:
        return {
            "test": "boost_3plus1_first_order",
            "eps": list(self.eps),
            "base_residual": self.base_residual,
            "residuals": list(self.residuals),
            "growth": list(self.growth),
            "slope": self.slope,
            "tolerance": self.min_slope,
            "pass": self.passed,
            "trivial": self.trivial,
        }


def first_order_generator(traj: Trajectory, params: PoincareParams, boost_sign: float = 1.0):
    """Apply the infinitesimal group generator to stored slices.

    Returns ``(G phi)`` on slices ``1..K-2`` (time derivatives are central
    differences). The generator is

        -c^j S_j - c^3 d/dt
        + sum_{j<k} omega^{jk} (S°_j S_k - S°_k S_j)
        + sum_j omega^{j3} (t S_j + boost_sign * S°_j d/dt).

    ``boost_sign=-1`` flips the relative sign of the two boost terms; it is
    not an invariance and exists for diagnostics.
    """
    bases = traj.bases
    if len(bases) != 3:
        raise DimensionMismatchError("3+1 check needs three spatial axes")
    p = traj.phis
    mid = p[1:-1]
    dphi = (p[2:] - p[:-2]) / (2.0 * traj.dt)
    t = traj.times[1:-1]
    S = [_lifted3(bases, build_delta_sharp, j) for j in range(3)]
    C = [_lifted3(bases, build_delta_circ, j) for j in range(3)]
    out = np.zeros_like(mid, dtype=complex)
    for j in range(3):
        cj = params.c_mu[j]
        if cj:
            out -= cj * (S[j] @ mid.T).T
    if params.c_mu[3]:
        out -= params.c_mu[3] * dphi
    for j, k in itertools.combinations(range(3), 2):
        w = params.omega[j, k]
        if w:
            rot = C[j] @ S[k] - C[k] @ S[j]
            out += w * (rot @ mid.T).T
    for j in range(3):
        w = params.omega[j, 3]
        if w:
            out += w * (t[:, None] * (S[j] @ mid.T).T + boost_sign * (C[j] @ dphi.T).T)
    return out


def _probe_trajectory(traj: Trajectory, amplitude: float, site) -> Trajectory:
    """Add a smooth bump localized at ``site`` and mid-window in time."""
    k = len(traj.times)
    half = max(2, (k - 10) // 4)
    centre = k // 2
    s = np.arange(k) - centre
    bump = np.where(np.abs(s) < half, np.cos(0.5 * np.pi * s / half) ** 4, 0.0)
    dims = tuple(b.dim for b in traj.bases)
    flat = np.ravel_multi_index(site, dims)
    phis = traj.phis.astype(complex).copy()
    phis[:, flat] += amplitude * bump
    return Trajectory(traj.bases, traj.mass, traj.dt, traj.times, phis, traj.phi_dots)


def check_boost_invariance_3plus1(
    traj: Trajectory,
    params: PoincareParams,
    dt: float | None = None,
    eps=(1e-2, 5e-3, 2.5e-3),
    min_slope: float = 1.9,
    probe_amplitude: float = 1e-6,
    margin: int = 2,
    boost_sign: float = 1.0,
) -> BoostReport:
    """First-order invariance of the 3+1 equation under ``params``.

    Forms ``phi_hat = phi + eps * G phi`` and measures the Euclidean norm of
    the residual over interior sites and inner time slices. The stored
    field is first given a small residual by adding a localized bump, so
    the growth is measurable above rounding: if ``G`` commutes with the
    wave operator on the interior, ``res(phi_hat) = (1 + eps G) res(phi)``
    and, ``G`` being antisymmetric, the norm grows only at order eps^2.
    A non-commuting generator adds an order-eps term.
    """
    check_uniform(traj, min_slices=12)
    if dt is not None and not np.isclose(dt, traj.dt, rtol=1e-9, atol=0.0):
        raise ValueError(f"dt={dt} does not match the stored spacing {traj.dt}")
    bases = traj.bases
    site_max = min(b.n_max for b in bases) - margin - 3
    if site_max < 0:
        raise ValueError("lattice too small for the interior probe; increase n_max")
    site = (min(1, site_max),) * 3
    scale = float(np.max(np.abs(traj.phis))) or 1.0
    probed = _probe_trajectory(traj, probe_amplitude * scale, site)

    k_m = _generator(bases, float(traj.mass))
    mask = interior_mask(bases, margin)
    mid = probed.phis[1:-1]
    gphi = first_order_generator(probed, params, boost_sign)
    dt_ = traj.dt

    def residual(field_mid):
        # field on slices 1..K-2; wave operator on slices 2..K-3
        d2 = (field_mid[2:] - 2.0 * field_mid[1:-1] + field_mid[:-2]) / dt_**2
        r = (k_m @ field_mid[1:-1].T).T - d2
        return float(np.linalg.norm(r[:, mask]))

    base = residual(mid)
    eps = tuple(float(e) for e in eps)
    if not np.any(gphi):
        zeros = (0.0,) * len(eps)
        return BoostReport(eps, base, (base,) * len(eps), zeros, float("inf"), min_slope, True, trivial=True)
    res = tuple(residual(mid + e * gphi) for e in eps)
    growth = tuple(r - base for r in res)
    g = np.abs(np.array(growth))
    if np.any(g == 0):
        slope = float("inf")
    else:
        slope = float(np.polyfit(np.log(eps), np.log(g), 1)[0])
    return BoostReport(eps, base, res, growth, slope, min_slope, slope >= min_slope)


def rotation_residual_ratio(traj: Trajectory, params: PoincareParams, eps: float = 1e-2, **kw) -> float:
    """``res(phi_hat) / res(phi)`` for one eps (used for spatial rotations)."""
    rep = check_boost_invariance_3plus1(traj, params, eps=(eps, eps / 2), **kw)
    return rep.residuals[0] / rep.base_residual


def group_inverse_defect(gens: GeneratorSet, params: PoincareParams, memory_budget=DEFAULT_MEMORY_BUDGET) -> float:
    """``max|U(p) U(-p) - I|``."""
    u = build_finite_transform(gens, params, memory_budget).U.matrix
    v = build_finite_transform(gens, -params, memory_budget).U.matrix
    return float(np.max(np.abs(u @ v - np.eye(u.shape[0]))))


def identity_defect(transform: FiniteTransform) -> float:
    u = transform.U.matrix
    return float(np.max(np.abs(u - np.eye(u.shape[0]))))


__all__ = [
    "PoincareParams",
    "GeneratorSet",
    "build_generators",
    "CheckResult",
    "check_casimir_commutation",
    "expm",
    "transform_exponent",
    "FiniteTransform",
    "build_finite_transform",
    "interior_test_vector",
    "check_kg_invariance_4d",
    "BoostReport",
    "first_order_generator",
    "check_boost_invariance_3plus1",
    "rotation_residual_ratio",
    "group_inverse_defect",
    "identity_defect",
]
