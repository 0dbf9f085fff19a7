"""Plane-wave pulse models and the phase integrals entering the Volkov exponent.

A pulse is a four-potential A(phi) that depends on spacetime only through
phi = t - n_hat.r and satisfies the gauge condition n.A = 0.  Writing
A = (A0; A_vec) with A_vec = A_perp + a_par * n_hat (A_perp orthogonal to
n_hat), the gauge condition forces A0 = a_par, and then

    A.A = -|A_perp|^2

identically.  Every model therefore stores its transverse part as components
along the geometry's (e1, e2) basis plus an optional longitudinal profile
a_par(phi).

The quantities consumed downstream are cumulative moments of the pulse,

    J2(phi)  = integral of |A_perp|^2,
    J1(phi)  = integral of A_perp          (2-vector),
    Jp(phi)  = integral of a_par,

from which the Volkov phase term, the A0 phase and the longitudinal
b-coefficient are assembled.  Interval moments are evaluated with
cancellation-safe closed forms where the model allows it, and with
Gauss-Legendre panels plus a memoized cumulative table for the sin^2 model;
small intervals always go through direct local quadrature so that
finite-difference callers get full relative precision.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import QuadratureError
from .lightcone import FourVector, OnShellMomentum, PropagationGeometry

_GL12 = leggauss(12)
_GL16 = leggauss(16)
_GL24 = leggauss(24)


def _gl_nodes(phi1, phi2, rule):
    """Affine-mapped Gauss-Legendre nodes/weights for [phi1, phi2] (arrays ok)."""
    x, w = rule
    phi1 = np.asarray(phi1, dtype=float)
    phi2 = np.asarray(phi2, dtype=float)
    half = 0.5 * (phi2 - phi1)
    mid = 0.5 * (phi2 + phi1)
    nodes = mid[..., None] + half[..., None] * x
    weights = half[..., None] * w
    return nodes, weights


def _split_points(phi1, phi2, breakpoints):
    """Monotone partition of [phi1, phi2] at interior breakpoints, with sign."""
    sign = 1.0
    a, b = phi1, phi2
    if b < a:
        a, b = b, a
        sign = -1.0
    pts = [a]
    for c in breakpoints:
        if a < c < b:
            pts.append(c)
    pts.append(b)
    return pts, sign


class _Moments(tuple):
    """(J2, J1, Jp) triple with elementwise subtraction."""

    __slots__ = ()

    def __new__(cls, j2, j1, jp):
        return super().__new__(cls, (j2, j1, jp))

    def __sub__(self, other):
        return _Moments(self[0] - other[0], self[1] - other[1], self[2] - other[2])


@dataclass(frozen=True, eq=False)
class RectangularProfile:
    """Constant longitudinal component a_par on a phi interval."""

    value: float
    lo: float
    hi: float

    def __call__(self, phi):
        phi = np.asarray(phi, dtype=float)
        return np.where((phi >= self.lo) & (phi <= self.hi), self.value, 0.0)

    def cumulative(self, phi):
        phi = np.asarray(phi, dtype=float)
        return self.value * (np.clip(phi, self.lo, self.hi) - self.lo)

    @property
    def breakpoints(self):
        return (self.lo, self.hi)


@dataclass(frozen=True, eq=False)
class _ZeroField:
    breakpoints: tuple = ()
    default_phi0: float = 0.0

    def a_perp(self, phi):
        phi = np.asarray(phi, dtype=float)
        return np.zeros(phi.shape + (2,))

    def a_perp_prime(self, phi):
        return self.a_perp(phi)

    def cumulative(self, phi):
        phi = np.asarray(phi, dtype=float)
        return np.zeros(phi.shape), np.zeros(phi.shape + (2,))


@dataclass(frozen=True, eq=False)
class _TopHat:
    """A_perp = amplitude for phi in [lo, hi], zero outside."""

    amplitude: np.ndarray  # (2,) components along (e1, e2)
    lo: float
    hi: float

    @property
    def breakpoints(self):
        return (self.lo, self.hi)

    @property
    def default_phi0(self):
        return self.lo

    def a_perp(self, phi):
        phi = np.asarray(phi, dtype=float)
        inside = ((phi >= self.lo) & (phi <= self.hi)).astype(float)
        return inside[..., None] * self.amplitude

    def a_perp_prime(self, phi):
        phi = np.asarray(phi, dtype=float)
        return np.zeros(phi.shape + (2,))

    def cumulative(self, phi):
        # Clipped-linear antiderivatives are exact; interval values formed
        # from their differences stay exact because the clip is piecewise
        # affine with slope 0 or 1.
        phi = np.asarray(phi, dtype=float)
        overlap = np.clip(phi, self.lo, self.hi) - self.lo
        j1 = overlap[..., None] * self.amplitude
        j2 = overlap * float(self.amplitude @ self.amplitude)
        return j2, j1


@dataclass(frozen=True, eq=False)
class _Monochromatic:
    """A_perp = a0 * pol * cos(omega * phi), infinite extent."""

    a0: float
    pol: np.ndarray  # (2,) unit polarization along (e1, e2)
    omega: float

    breakpoints: tuple = ()
    default_phi0: float = 0.0

    def a_perp(self, phi):
        phi = np.asarray(phi, dtype=float)
        return np.cos(self.omega * phi)[..., None] * (self.a0 * self.pol)

    def a_perp_prime(self, phi):
        phi = np.asarray(phi, dtype=float)
        return (-self.omega * np.sin(self.omega * phi))[..., None] * (self.a0 * self.pol)

    def cumulative(self, phi):
        phi = np.asarray(phi, dtype=float)
        j1 = (np.sin(self.omega * phi) / self.omega)[..., None] * (self.a0 * self.pol)
        j2 = self.a0**2 * (0.5 * phi + np.sin(2.0 * self.omega * phi) / (4.0 * self.omega))
        return j2, j1

    def interval(self, phi1, phi2):
        # Product-form trig differences avoid the cancellation of
        # sin(w*phi2) - sin(w*phi1) for nearby arguments.
        w, d, s = self.omega, 0.5 * (phi2 - phi1), 0.5 * (phi2 + phi1)
        j1 = (2.0 / w) * np.cos(w * s) * np.sin(w * d) * (self.a0 * self.pol)
        j2 = self.a0**2 * (d + np.cos(2.0 * w * s) * np.sin(2.0 * w * d) / (2.0 * w))
        return j2, j1


@dataclass(frozen=True, eq=False)
class _SinSquared:
    """sin^2-envelope pulse on [0, 2*pi*cycles/omega].

    A_perp(phi) = a0 * pol * sin^2(omega*phi/(2*cycles)) * cos(omega*phi + cep)
    inside the support, zero outside.  The potential is C^1 at the edges.
    Cumulative moments come from a memoized Gauss-Legendre panel table
    (spot-checked against a doubled-resolution table at build time).
    """

    a0: float
    pol: np.ndarray
    omega: float
    cycles: int
    cep: float = 0.0
    quad_tol: float = 1e-10

    @property
    def span(self):
        return 2.0 * np.pi * self.cycles / self.omega

    @property
    def breakpoints(self):
        return (0.0, self.span)

    @property
    def default_phi0(self):
        return 0.0

    def _envelope(self, phi):
        return np.sin(self.omega * phi / (2.0 * self.cycles)) ** 2

    def a_perp(self, phi):
        phi = np.asarray(phi, dtype=float)
        inside = (phi >= 0.0) & (phi <= self.span)
        amp = np.where(inside, self._envelope(phi) * np.cos(self.omega * phi + self.cep), 0.0)
        return amp[..., None] * (self.a0 * self.pol)

    def a_perp_prime(self, phi):
        phi = np.asarray(phi, dtype=float)
        inside = (phi >= 0.0) & (phi <= self.span)
        we = self.omega / (2.0 * self.cycles)
        denv = 2.0 * np.sin(we * phi) * np.cos(we * phi) * we
        amp = denv * np.cos(self.omega * phi + self.cep) - self._envelope(phi) * self.omega * np.sin(
            self.omega * phi + self.cep
        )
        return np.where(inside, amp, 0.0)[..., None] * (self.a0 * self.pol)

    def _panel_table(self, panels_per_cycle):
        bounds = np.linspace(0.0, self.span, panels_per_cycle * self.cycles + 1)
        nodes, weights = _gl_nodes(bounds[:-1], bounds[1:], _GL24)
        a = self.a_perp(nodes)  # (npanels, 24, 2)
        j1 = np.concatenate([np.zeros((1, 2)), np.cumsum(np.einsum("pn,pnc->pc", weights, a), axis=0)])
        a2 = np.einsum("pnc,pnc->pn", a, a)
        j2 = np.concatenate([[0.0], np.cumsum(np.sum(weights * a2, axis=1))])
        return bounds, j2, j1

    @cached_property
    def _table(self):
        bounds, j2, j1 = self._panel_table(16)
        _, j2b, j1b = self._panel_table(32)
        err = max(np.max(np.abs(j2[-1] - j2b[-1])), np.max(np.abs(j1[-1] - j1b[-1])))
        if err > self.quad_tol:
            raise QuadratureError(
                f"sin^2 pulse cumulative table error {err:.3e} exceeds tolerance {self.quad_tol:.3e}"
            )
        return bounds, j2, j1

    def cumulative(self, phi):
        phi = np.asarray(phi, dtype=float)
        bounds, j2c, j1c = self._table
        clipped = np.clip(phi, 0.0, self.span)
        idx = np.clip(np.searchsorted(bounds, clipped, side="right") - 1, 0, len(bounds) - 2)
        start = bounds[idx]
        nodes, weights = _gl_nodes(start, clipped, _GL12)
        a = self.a_perp(nodes)
        j1 = j1c[idx] + np.einsum("...n,...nc->...c", weights, a)
        j2 = j2c[idx] + np.sum(weights * np.einsum("...nc,...nc->...n", a, a), axis=-1)
        return j2, j1

    def interval_direct(self, phi1, phi2):
        """Single-panel quadrature on a short interval (full relative precision)."""
        nodes, weights = _gl_nodes(phi1, phi2, _GL16)
        a = self.a_perp(nodes)
        j1 = np.einsum("...n,...nc->...c", weights, a)
        j2 = np.sum(weights * np.einsum("...nc,...nc->...n", a, a), axis=-1)
        return j2, j1


@dataclass(frozen=True, eq=False)
class PulseModel:
    """A plane-wave pulse: transverse shape, optional a_par profile, charge.

    Use the classmethods (:meth:`zero`, :meth:`top_hat`, :meth:`sin_squared`,
    :meth:`monochromatic`) to construct instances from lab-frame vectors; they
    validate that amplitudes are orthogonal to the propagation direction.
    Instances are immutable and safe to share between threads.
    """

    geometry: PropagationGeometry
    shape: object
    charge: float = -1.0
    a_par_profile: RectangularProfile | None = None

    # ------------------------------------------------------------------ #
    # constructors
    # ------------------------------------------------------------------ #

    @classmethod
    def zero(cls, geometry, charge=-1.0, a_par_profile=None):
        return cls(geometry, _ZeroField(), charge, a_par_profile)

    @classmethod
    def top_hat(cls, geometry, amplitude, support, charge=-1.0, a_par_profile=None):
        amp2 = cls._transverse(geometry, amplitude)
        lo, hi = float(support[0]), float(support[1])
        if hi <= lo:
            raise ValueError("top-hat support must have positive length")
        return cls(geometry, _TopHat(amp2, lo, hi), charge, a_par_profile)

    @classmethod
    def sin_squared(cls, geometry, a0, polarization, omega, cycles, cep=0.0, charge=-1.0,
                    quad_tol=1e-10, a_par_profile=None):
        pol2 = cls._transverse(geometry, polarization)
        pol2 = pol2 / np.linalg.norm(pol2)
        if omega <= 0.0 or int(cycles) < 1:
            raise ValueError("sin^2 pulse needs omega > 0 and cycles >= 1")
        return cls(geometry, _SinSquared(float(a0), pol2, float(omega), int(cycles), float(cep), quad_tol),
                   charge, a_par_profile)

    @classmethod
    def monochromatic(cls, geometry, a0, polarization, omega, charge=-1.0, a_par_profile=None):
        pol2 = cls._transverse(geometry, polarization)
        pol2 = pol2 / np.linalg.norm(pol2)
        if omega <= 0.0:
            raise ValueError("monochromatic pulse needs omega > 0")
        return cls(geometry, _Monochromatic(float(a0), pol2, float(omega)), charge)

    @staticmethod
    def _transverse(geometry, vec):
        vec = np.asarray(vec, dtype=float)
        if abs(float(vec @ geometry.n_hat)) > 1e-12 * max(1.0, np.linalg.norm(vec)):
            raise ValueError("transverse amplitude must be orthogonal to n_hat")
        return geometry.perp2(vec)

    # ------------------------------------------------------------------ #
    # pointwise evaluation
    # ------------------------------------------------------------------ #

    def a_perp(self, phi):
        return self.shape.a_perp(phi)

    def a_perp_prime(self, phi):
        return self.shape.a_perp_prime(phi)

    def a_par(self, phi):
        if self.a_par_profile is None:
            phi = np.asarray(phi, dtype=float)
            return np.zeros(phi.shape)
        return self.a_par_profile(phi)

    def a0(self, phi):
        """Scalar potential A0(phi); equals a_par by the gauge condition."""
        return self.a_par(phi)

    def potential(self, phi: float) -> FourVector:
        """Lab-frame four-potential A(phi); satisfies n.A = 0 exactly."""
        aperp = self.shape.a_perp(float(phi))
        apar = float(self.a_par(float(phi)))
        geom = self.geometry
        avec = aperp[0] * geom.e1 + aperp[1] * geom.e2 + apar * geom.n_hat
        return FourVector(apar, avec)

    @property
    def breakpoints(self):
        pts = list(self.shape.breakpoints)
        if self.a_par_profile is not None:
            pts.extend(self.a_par_profile.breakpoints)
        return tuple(sorted(set(pts)))

    @property
    def default_phi0(self):
        return self.shape.default_phi0

    # ------------------------------------------------------------------ #
    # cumulative and interval moments
    # ------------------------------------------------------------------ #

    def moments_at(self, phi) -> _Moments:
        """Cumulative (J2, J1, Jp) from each shape's own reference point."""
        j2, j1 = self.shape.cumulative(phi)
        if self.a_par_profile is None:
            jp = np.zeros(np.shape(j2))
        else:
            jp = self.a_par_profile.cumulative(phi)
        return _Moments(j2, j1, jp)

    def moments_between(self, phi1: float, phi2: float) -> _Moments:
        """Interval moments over [phi1, phi2], sign following the orientation."""
        if isinstance(self.shape, _SinSquared):
            span = self.shape.span
            short = abs(phi2 - phi1) <= span / (16 * self.shape.cycles)
            if short:
                segs, sign = _split_points(phi1, phi2, self.breakpoints)
                j2 = 0.0
                j1 = np.zeros(2)
                for a, b in zip(segs[:-1], segs[1:]):
                    dj2, dj1 = self.shape.interval_direct(a, b)
                    j2 += dj2
                    j1 = j1 + dj1
                jp = (self.a_par_profile.cumulative(phi2) - self.a_par_profile.cumulative(phi1)
                      if self.a_par_profile is not None else 0.0)
                return _Moments(sign * j2, sign * j1, jp)
            return self.moments_at(phi2) - self.moments_at(phi1)
        if isinstance(self.shape, _Monochromatic):
            j2, j1 = self.shape.interval(float(phi1), float(phi2))
            jp = np.zeros(np.shape(j2))
            return _Moments(j2, j1, jp)
        return self.moments_at(phi2) - self.moments_at(phi1)


def eval_potential(pulse: PulseModel, phi: float) -> FourVector:
    """Four-potential A(phi) of the pulse (lab frame)."""
    return pulse.potential(phi)


@dataclass(frozen=True, eq=False)
class PhaseAccumulator:
    """Integrals of the pulse from a fixed lower limit phi0.

    phi0 defaults to the start of the pulse support for finite pulses and to
    zero for the monochromatic and zero-field models, which pins the
    physically irrelevant constant phase of the states so tests are
    reproducible.  All integrals are additive over adjacent phi intervals.
    """

    pulse: PulseModel
    phi0: float | None = None
    tol: float = 1e-10

    def __post_init__(self):
        if self.phi0 is None:
            object.__setattr__(self, "phi0", float(self.pulse.default_phi0))

    @property
    def geometry(self) -> PropagationGeometry:
        return self.pulse.geometry

    @property
    def charge(self) -> float:
        return self.pulse.charge

    def moments_from_phi0(self, phi) -> _Moments:
        phi = np.asarray(phi, dtype=float)
        base = self.pulse.moments_at(np.asarray(self.phi0, dtype=float))
        return self.pulse.moments_at(phi) - base

    def _phase_from_moments(self, p: OnShellMomentum, branch: int, mom: _Moments):
        e = self.charge
        np_ = p.n_dot_p(self.geometry)
        pperp = p.perp2(self.geometry)
        j2, j1, jp = mom
        # integrand of the exponent: e^2 A.A - branch * 2 e A.p, with
        # A.A = -|A_perp|^2 and A.p = a_par*(n.p) - A_perp.p_perp
        raw = -(e**2) * j2 - branch * 2.0 * e * (np_ * jp - j1 @ pperp)
        return raw / (2.0 * np_)

    def volkov_phase_term(self, p: OnShellMomentum, branch: int, phi) -> float | np.ndarray:
        """The phi-dependent exponent coefficient of the Volkov state.

        Returns (1 / (2 n.p)) * int_{phi0}^{phi} [e^2 A.A(chi)
        - branch * 2 e A(chi).p] dchi for branch = +1 or -1.
        """
        if branch not in (+1, -1):
            raise ValueError("branch must be +1 or -1")
        val = self._phase_from_moments(p, branch, self.moments_from_phi0(phi))
        return float(val) if np.isscalar(phi) or np.ndim(phi) == 0 else val

    def phase_term_between(self, p: OnShellMomentum, branch: int, phi1: float, phi2: float) -> float:
        """Increment of the Volkov phase term over [phi1, phi2].

        Evaluated from interval moments rather than as a difference of
        cumulative values, so short intervals keep full relative precision
        (finite-difference callers rely on this).
        """
        if branch not in (+1, -1):
            raise ValueError("branch must be +1 or -1")
        return float(self._phase_from_moments(p, branch, self.pulse.moments_between(phi1, phi2)))

    def a0_phase(self, phi_from: float, phi_to: float) -> float:
        """int_{phi_from}^{phi_to} e A0(chi) dchi (zero for transverse pulses)."""
        _, _, jp = self.pulse.moments_between(phi_from, phi_to)
        return float(self.charge * jp)

    def a0_phase_cumulative(self, phi_from, phi_to):
        """Vectorized a0_phase for array endpoints."""
        m_to = self.pulse.moments_at(phi_to)
        m_from = self.pulse.moments_at(phi_from)
        return self.charge * (m_to[2] - m_from[2])

    def b_coefficient(self, p_perp, phi_from: float, phi_to: float, mass: float = 1.0) -> float:
        """b = (1/2) int_{phi_from}^{phi_to} [(p_perp - e A_perp)^2 + m^2] dchi.

        Has the sign of (phi_to - phi_from) since the integrand is positive.
        ``p_perp`` may be a lab-frame 3-vector (projected onto the transverse
        plane) or a 2-vector of (e1, e2) components.
        """
        pp = np.asarray(p_perp, dtype=float)
        if pp.shape == (3,):
            pp = self.geometry.perp2(pp)
        elif pp.shape != (2,):
            raise ValueError("p_perp must be a 2- or 3-vector")
        e = self.charge
        j2, j1, _ = self.pulse.moments_between(phi_from, phi_to)
        dphi = phi_to - phi_from
        return float(0.5 * ((pp @ pp + mass**2) * dphi - 2.0 * e * (j1 @ pp) + e**2 * j2))
