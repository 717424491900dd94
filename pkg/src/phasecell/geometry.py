"""Phase-plane orbits of the Planck oscillator as sampled point sets."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .oscillator import FUNDAMENTAL, PhysicalConstants

DEFAULT_THETA_SAMPLES = 256
DEFAULT_TIME_SAMPLES = 64


@dataclass(frozen=True, eq=False)
class OrbitGeometry:
    """Sampled orbit.

    ``points`` has columns ``(q, p)`` or, for cylinders, ``(q, p, t)``.
    Circles carry ``radius``; ellipses carry ``semi_axes = (q_max, p_max)``.
    """

    kind: str
    points: np.ndarray = field(repr=False)
    N: int | None = None
    radius: float | None = None
    semi_axes: tuple[float, float] | None = None
    level: float | None = None


def _angles(samples: int) -> np.ndarray:
    if samples < 3:
        raise DomainError("need at least 3 angular samples")
    return 2.0 * np.pi * np.arange(samples) / samples


def classical_ellipse(
    E_over_hnu: float,
    constants: PhysicalConstants = FUNDAMENTAL,
    samples: int = DEFAULT_THETA_SAMPLES,
    N: int | None = None,
) -> OrbitGeometry:
    """Level set ``(1/2)[(l/hbar)^2 p^2 + (q/l)^2] = E/(hbar nu)``."""
    if not E_over_hnu > 0:
        raise DomainError(f"energy must be positive, got {E_over_hnu}")
    th = _angles(samples)
    r = np.sqrt(2.0 * E_over_hnu)
    q_max = constants.l * r
    p_max = constants.hbar / constants.l * r
    pts = np.column_stack([q_max * np.cos(th), p_max * np.sin(th)])
    return OrbitGeometry("ellipse", pts, N, None, (q_max, p_max), float(E_over_hnu))


def ellipse_level(points: np.ndarray, constants: PhysicalConstants = FUNDAMENTAL) -> np.ndarray:
    """Classical dimensionless energy of each ``(q, p)`` point."""
    q, p = points[:, 0], points[:, 1]
    return 0.5 * ((constants.l / constants.hbar) ** 2 * p**2 + (q / constants.l) ** 2)


def orbit_radius(N: int) -> float:
    return float(np.sqrt(2 * N + 1))


def orbit_circle(N: int, samples: int = DEFAULT_THETA_SAMPLES) -> OrbitGeometry:
    """Circle ``q^2 + p^2 = 2N + 1`` (fundamental units)."""
    if N < 0:
        raise DomainError("orbit index must be non-negative")
    th = _angles(samples)
    r = orbit_radius(N)
    pts = np.column_stack([r * np.cos(th), r * np.sin(th)])
    return OrbitGeometry("circle", pts, int(N), r, None, N + 0.5)


def confocal_phase_cells(
    N_list, constants: PhysicalConstants = FUNDAMENTAL, samples: int = DEFAULT_THETA_SAMPLES
) -> list[OrbitGeometry]:
    """One ellipse per level ``N + 1/2``."""
    N_list = list(N_list)
    if not N_list:
        raise DomainError("N_list must be non-empty")
    return [classical_ellipse(n + 0.5, constants, samples, N=int(n)) for n in N_list]


def worldsheet_cylinder(
    N: int,
    t_min: float = 0.0,
    t_max: float = 1.0,
    samples_theta: int = DEFAULT_THETA_SAMPLES,
    samples_t: int = DEFAULT_TIME_SAMPLES,
) -> OrbitGeometry:
    """Grid on the cylinder over orbit ``N`` for ``t`` in ``[t_min, t_max]``."""
    if not t_min < t_max:
        raise DomainError("t_min must be smaller than t_max")
    if samples_t < 2:
        raise DomainError("need at least 2 time samples")
    circle = orbit_circle(N, samples_theta)
    ts = np.linspace(t_min, t_max, samples_t)
    qp = np.tile(circle.points, (samples_t, 1))
    tt = np.repeat(ts, samples_theta)
    return OrbitGeometry("cylinder", np.column_stack([qp, tt]), int(N), circle.radius, None, N + 0.5)


def product_orbits(n1: int, n2: int, n3: int, samples: int = DEFAULT_THETA_SAMPLES) -> list[OrbitGeometry]:
    """Factors of the three-axis orbit, kept as independent circles."""
    return [orbit_circle(n, samples) for n in (n1, n2, n3)]


def orbit_rows(orbits):
    """Yield ``(kind, N, q, p[, t])`` rows."""
    for o in orbits:
        n = "" if o.N is None else o.N
        for row in o.points:
            yield (o.kind, n, *(float(x) for x in row))
