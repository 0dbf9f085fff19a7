"""Volkov states of the Klein-Gordon equation in a plane-wave pulse.

For an on-shell momentum p and branch s = +1 or -1 the state is

    psi_s(p; x) = N * exp{ i * s * (Lambda_s(phi) - p.x) },
    N = 1 / (sqrt(2 E) * (2 pi)^(3/2)),

where Lambda_s(phi) = (1/(2 n.p)) * int_{phi0}^{phi} [e^2 A.A - 2 s e A.p] dchi
is the accumulated pulse phase.  The two branches reduce to the free
plane waves of positive / negative frequency when the field vanishes (and,
for a finite pulse with phi0 at the support start, everywhere before the
pulse).  The exponent is written here with a single overall branch sign;
this equals the stacked two-sign form up to the phi0-dependent constant
phase, which is physically irrelevant and pinned by the accumulator's phi0
convention.

The finite-difference operators in this module (Klein-Gordon residual,
light-front eigenvalue extraction) never form psi at two nearby points and
subtract: they evaluate exp(i*dtheta) - 1 from phase increments computed by
interval quadrature.  This keeps the 4th-order stencils truncation-limited
down to h ~ 1e-3 instead of drowning in rounding noise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DiscontinuityError
from .lightcone import FourVector, OnShellMomentum
from .pulse import PhaseAccumulator

PLUS = +1
MINUS = -1

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True, eq=False)
class VolkovState:
    """One branch, one momentum, one pulse."""

    momentum: OnShellMomentum
    branch: int
    acc: PhaseAccumulator

    def __post_init__(self):
        if self.branch not in (PLUS, MINUS):
            raise ValueError("branch must be +1 (plus) or -1 (minus)")

    @property
    def geometry(self):
        return self.acc.geometry

    @property
    def normalization(self) -> float:
        return 1.0 / (np.sqrt(2.0 * self.momentum.energy) * TWO_PI**1.5)

    @property
    def n_dot_p(self) -> float:
        return self.momentum.n_dot_p(self.geometry)

    def phase(self, x: FourVector) -> float:
        """Total (real) exponent theta with psi = N * exp(i*theta)."""
        phi = self.geometry.phi(x)
        lam = self.acc.volkov_phase_term(self.momentum, self.branch, phi)
        return self.branch * (lam - self.momentum.four_vector.dot(x))

    def value(self, x: FourVector) -> complex:
        return self.normalization * np.exp(1j * self.phase(x))

    def phase_increment(self, x: FourVector, delta: FourVector) -> float:
        """theta(x + delta) - theta(x) without cancellation.

        The free part is -p.delta (exact products) and the pulse part is the
        phase term integrated over [phi(x), phi(x) + n.delta] directly.
        """
        phi = self.geometry.phi(x)
        dphi = self.geometry.phi(delta)  # n.delta, since phi is linear in x
        dlam = self.acc.phase_term_between(self.momentum, self.branch, phi, phi + dphi)
        return self.branch * (dlam - self.momentum.four_vector.dot(delta))

    def dt_factor(self, x: FourVector) -> complex:
        """i*mu(phi) with d(psi)/dt = i*mu*psi; mu is real for real pulses."""
        phi = self.geometry.phi(x)
        return 1j * self.mu(phi)

    def mu(self, phi):
        """Instantaneous frequency: d(theta)/dt at fixed position."""
        pulse = self.acc.pulse
        geom = self.geometry
        e = self.acc.charge
        p = self.momentum
        aperp = pulse.a_perp(phi)
        apar = pulse.a_par(phi)
        a_sq = -np.einsum("...c,...c->...", aperp, aperp)
        # A.p = a_par*(n.p) - A_perp.p_perp by the gauge condition
        a_dot_p = apar * self.n_dot_p - aperp @ p.perp2(geom)
        lam_prime = (e**2 * a_sq - 2.0 * self.branch * e * a_dot_p) / (2.0 * self.n_dot_p)
        return self.branch * (lam_prime - p.energy)

    def time_derivative(self, x: FourVector) -> complex:
        return self.dt_factor(x) * self.value(x)


def eval_state(state: VolkovState, x: FourVector) -> complex:
    """psi(p; x) for the given branch."""
    return state.value(x)


def eval_time_derivative(state: VolkovState, x: FourVector) -> complex:
    """Analytic d(psi)/dt via the chain rule (d(phi)/dt = 1)."""
    return state.time_derivative(x)


def _expm1_imag(theta):
    """exp(i*theta) - 1 evaluated without the 1-cancellation."""
    return -2.0 * np.sin(0.5 * theta) ** 2 + 1j * np.sin(theta)


_OFFSETS = (-2, -1, 1, 2)
_D1_COEF = {-2: 1.0, -1: -8.0, 1: 8.0, 2: -1.0}   # /(12 h)
_D2_COEF = {-2: -1.0, -1: 16.0, 1: 16.0, 2: -1.0}  # /(12 h^2); center term is 0 on u


def _guard_discontinuities(state: VolkovState, x: FourVector, h: float):
    phi = state.geometry.phi(x)
    for bp in state.acc.pulse.breakpoints:
        if abs(phi - bp) <= 2.0 * h * (1.0 + 1e-12):
            raise DiscontinuityError(
                f"stencil at phi={phi:.6g} reaches the pulse discontinuity at phi={bp:.6g}"
            )


def _stencil_ratios(state: VolkovState, x: FourVector, h: float):
    """4th-order first/second derivative ratios D1 = (d psi)/psi, D2 = (d^2 psi)/psi.

    Directions: time, e1, e2, n_hat (geometry frame).  Built from phase
    increments, so the returned ratios carry no O(eps/h^2) rounding floor.
    """
    geom = state.geometry
    dirs = (FourVector(1.0, np.zeros(3)),
            FourVector(0.0, geom.e1),
            FourVector(0.0, geom.e2),
            FourVector(0.0, geom.n_hat))
    d1 = np.zeros(4, dtype=complex)
    d2 = np.zeros(4, dtype=complex)
    for i, d in enumerate(dirs):
        for m in _OFFSETS:
            u = _expm1_imag(state.phase_increment(x, d.scaled(m * h)))
            d1[i] += _D1_COEF[m] * u
            d2[i] += _D2_COEF[m] * u
    return d1 / (12.0 * h), d2 / (12.0 * h * h)


def kg_residual(state: VolkovState, x: FourVector, h: float = 1e-3) -> float:
    """|H(x) psi(x)| with 4th-order centered stencils for the derivatives.

    H psi = (dtt - laplacian) psi + 2 i e (A0 dt + A_vec.grad) psi
            + (m^2 + e^2 |A_perp|^2) psi.

    The minimal-coupling terms use the analytic potential.  The i e (div A)
    piece is identically zero in this gauge (d(n.A)/dphi = 0) and is omitted.
    Refuses points whose stencil reaches within 2h of a pulse discontinuity.
    """
    if h <= 0.0:
        raise ValueError("h must be positive")
    _guard_discontinuities(state, x, h)
    d1, d2 = _stencil_ratios(state, x, h)
    pulse = state.acc.pulse
    e = state.acc.charge
    phi = state.geometry.phi(x)
    aperp = pulse.a_perp(phi)
    apar = float(pulse.a_par(phi))
    m = state.momentum.mass
    box = d2[0] - (d2[1] + d2[2] + d2[3])
    coupling = 2.0j * e * (apar * d1[0] + aperp[0] * d1[1] + aperp[1] * d1[2] + apar * d1[3])
    local = m * m + e * e * float(aperp @ aperp)
    return float(state.normalization * abs(box + coupling + local))


def lightfront_eigencheck(state: VolkovState, x: FourVector, h: float = 1e-3):
    """Eigenvalues of P_perp = -i grad_perp and n.P = i(d/dt + d/d(n.r)).

    Returns (ev_perp, ev_lf) where ev_perp is a 2-array of (e1, e2)
    components.  Expected values are branch * p_perp and branch * (n.p).
    """
    if h <= 0.0:
        raise ValueError("h must be positive")
    _guard_discontinuities(state, x, h)
    d1, _ = _stencil_ratios(state, x, h)
    ev_perp = np.array([(-1j * d1[1]).real, (-1j * d1[2]).real])
    ev_lf = float((1j * (d1[0] + d1[3])).real)
    return ev_perp, ev_lf


def fit_decay_order(hs, values) -> float:
    """Least-squares slope of log|value| against log h (Richardson order)."""
    hs = np.asarray(hs, dtype=float)
    vals = np.abs(np.asarray(values, dtype=float))
    if np.any(vals == 0.0):
        raise ValueError("cannot fit a decay order through zero values")
    return float(np.polyfit(np.log(hs), np.log(vals), 1)[0])
