"""Independent reference implementations used by the tests.

Everything here is built from dense numpy / scipy primitives and closed
forms, without going through the package code paths under test.
"""

from __future__ import annotations

import math

import numpy as np
import scipy.linalg as sla
from numpy.polynomial import hermite as H


def ladder(n_max: int) -> np.ndarray:
    """Dense annihilation matrix, ``a[n, n+1] = sqrt(n+1)``."""
    d = n_max + 1
    a = np.zeros((d, d))
    for n in range(d - 1):
        a[n, n + 1] = math.sqrt(n + 1)
    return a


def delta_circ(n_max: int) -> np.ndarray:
    a = ladder(n_max)
    return (a + a.T) / math.sqrt(2)


def delta_sharp(n_max: int) -> np.ndarray:
    a = ladder(n_max)
    return (a - a.T) / math.sqrt(2)


def forward(n_max: int) -> np.ndarray:
    d = n_max + 1
    return np.eye(d, k=1) - np.eye(d)


def backward(n_max: int) -> np.ndarray:
    d = n_max + 1
    return np.eye(d) - np.eye(d, k=-1)


def hamiltonian(n_max: int) -> np.ndarray:
    s, c = delta_sharp(n_max), delta_circ(n_max)
    return 0.5 * (-(s @ s) + c @ c)


def hermite_function(N: int, x) -> np.ndarray:
    """Normalized Hermite function via numpy's physicists' Hermite series."""
    coef = np.zeros(N + 1)
    coef[N] = 1.0
    norm = 1.0 / math.sqrt(2.0**N * math.factorial(N) * math.sqrt(math.pi))
    x = np.asarray(x, dtype=float)
    return norm * np.exp(-(x**2) / 2) * H.hermval(x, coef)


def kron_lift(m: np.ndarray, axis: int, axes: int) -> np.ndarray:
    out = np.ones((1, 1))
    for k in range(axes):
        out = np.kron(out, m if k == axis else np.eye(m.shape[0]))
    return out


def kg4_dense(n_max: int, mass: float) -> np.ndarray:
    s = delta_sharp(n_max)
    s2 = s @ s
    eta = (1, 1, 1, -1)
    d = (n_max + 1) ** 4
    out = -(mass**2) * np.eye(d)
    for mu in range(4):
        out += eta[mu] * kron_lift(s2, mu, 4)
    return out


def spatial_generator(n_max: int, mass: float) -> np.ndarray:
    s = delta_sharp(n_max)
    s2 = s @ s
    d = (n_max + 1) ** 3
    return sum(kron_lift(s2, j, 3) for j in range(3)) - mass**2 * np.eye(d)


def expm(a: np.ndarray) -> np.ndarray:
    return sla.expm(a)
