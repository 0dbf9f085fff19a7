"""Minkowski four-vectors, light-cone variables and the laser-frame basis.

Conventions used everywhere in this package:

* natural units, hbar = c = 1;
* metric signature (+, -, -, -), so ``x.y = x0*y0 - x_vec.y_vec``;
* the laser propagates along the unit vector ``n_hat``; the null vectors
  ``n = (1, n_hat)`` and ``ntilde = (1, -n_hat)`` satisfy n.n = ntilde.ntilde = 0
  and n.ntilde = 2;
* light-cone variables phi = n.x = t - n_hat.r and phitilde = ntilde.x = t + n_hat.r.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


def _vec3(v) -> np.ndarray:
    a = np.asarray(v, dtype=float)
    if a.shape != (3,):
        raise ValueError(f"expected a 3-vector, got shape {a.shape}")
    return a


@dataclass(frozen=True, eq=False)
class FourVector:
    """A contravariant four-vector (time component, spatial 3-vector)."""

    t: float
    r: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "t", float(self.t))
        object.__setattr__(self, "r", _vec3(self.r))

    def dot(self, other: "FourVector") -> float:
        return self.t * other.t - float(self.r @ other.r)

    def __add__(self, other: "FourVector") -> "FourVector":
        return FourVector(self.t + other.t, self.r + other.r)

    def __sub__(self, other: "FourVector") -> "FourVector":
        return FourVector(self.t - other.t, self.r - other.r)

    def __neg__(self) -> "FourVector":
        return FourVector(-self.t, -self.r)

    def scaled(self, s: float) -> "FourVector":
        return FourVector(s * self.t, s * self.r)


def minkowski_dot(x: FourVector, y: FourVector) -> float:
    """Four-product x.y = x0*y0 - x_vec.y_vec."""
    return x.dot(y)


@dataclass(frozen=True, eq=False)
class PropagationGeometry:
    """Laser propagation direction plus a fixed orthonormal transverse basis.

    The transverse basis (e1, e2) is built deterministically from ``n_hat``
    (seeded from the coordinate axis least aligned with it), so that all
    perpendicular 2-vector components used by the rest of the package are
    reproducible. (e1, e2, n_hat) is right handed.
    """

    n_hat: np.ndarray
    e1: np.ndarray = field(init=False)
    e2: np.ndarray = field(init=False)

    def __post_init__(self):
        n = _vec3(self.n_hat)
        norm = np.linalg.norm(n)
        if norm == 0.0:
            raise ValueError("propagation direction must be nonzero")
        n = n / norm
        seed = np.zeros(3)
        seed[np.argmin(np.abs(n))] = 1.0
        e1 = seed - (seed @ n) * n
        e1 /= np.linalg.norm(e1)
        e2 = np.cross(n, e1)
        object.__setattr__(self, "n_hat", n)
        object.__setattr__(self, "e1", e1)
        object.__setattr__(self, "e2", e2)

    @property
    def n4(self) -> FourVector:
        """The null vector n = (1, n_hat)."""
        return FourVector(1.0, self.n_hat)

    @property
    def ntilde4(self) -> FourVector:
        """The null vector ntilde = (1, -n_hat)."""
        return FourVector(1.0, -self.n_hat)

    def phi(self, x: FourVector) -> float:
        return x.t - float(self.n_hat @ x.r)

    def phitilde(self, x: FourVector) -> float:
        return x.t + float(self.n_hat @ x.r)

    def perp2(self, b) -> np.ndarray:
        """Components of a 3-vector along (e1, e2)."""
        b = _vec3(b)
        return np.array([b @ self.e1, b @ self.e2])

    def frame_components(self, b) -> np.ndarray:
        """(e1, e2, n_hat) components of a lab-frame 3-vector."""
        b = _vec3(b)
        return np.array([b @ self.e1, b @ self.e2, b @ self.n_hat])

    def from_frame(self, c) -> np.ndarray:
        """Lab-frame 3-vector from (e1, e2, n_hat) components."""
        c = _vec3(c)
        return c[0] * self.e1 + c[1] * self.e2 + c[2] * self.n_hat


def lightcone_coords(x: FourVector, geom: PropagationGeometry):
    """Split x into (phi, phitilde, r_perp).

    phi = n.x, phitilde = ntilde.x and r_perp is the spatial part orthogonal
    to n_hat (a 3-vector).  The inverse map is
    t = (phi + phitilde)/2, n_hat.r = (phitilde - phi)/2.
    """
    phi = geom.phi(x)
    phitilde = geom.phitilde(x)
    _, r_perp = perp_decompose(x.r, geom)
    return phi, phitilde, r_perp


def perp_decompose(b, geom: PropagationGeometry):
    """Split a 3-vector into parts parallel and orthogonal to n_hat."""
    b = _vec3(b)
    b_par = geom.n_hat * float(geom.n_hat @ b)
    return b_par, b - b_par


@dataclass(frozen=True, eq=False)
class OnShellMomentum:
    """On-shell momentum p = (E, p_vec) with E = sqrt(m^2 + |p_vec|^2) > 0."""

    p: np.ndarray
    mass: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "p", _vec3(self.p))
        object.__setattr__(self, "mass", float(self.mass))
        if self.mass <= 0.0:
            raise ValueError("mass must be positive")

    @property
    def energy(self) -> float:
        return float(np.sqrt(self.mass**2 + self.p @ self.p))

    @property
    def four_vector(self) -> FourVector:
        return FourVector(self.energy, self.p)

    def n_dot_p(self, geom: PropagationGeometry) -> float:
        """n.p = E - n_hat.p, positive for every on-shell momentum."""
        return self.energy - float(geom.n_hat @ self.p)

    def perp2(self, geom: PropagationGeometry) -> np.ndarray:
        return geom.perp2(self.p)
