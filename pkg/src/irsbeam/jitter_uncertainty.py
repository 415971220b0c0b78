"""Bounded channel uncertainty induced by airframe jitter.

Jitter shifts the departure angles at the transmit array by bounded amounts
``|d_omega| <= beta1``, ``|d_phi| <= beta2`` per link (a box).  The
line-of-sight steering vector is linearized around the nominal angles,

    h(omega + d_omega, phi + d_phi) ~ h_bar * (1 + a*d_omega + b*d_phi),

with per-entry multipliers ``a``/``b`` equal to the analytic phase
derivatives.  Norm bounds on the resulting channel errors give conservative
radii used by the robust subproblems.  Surface-to-ground links are treated
as perfectly known; only transmit-side departure angles jitter.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry_channel import ChannelSet, LinkAngles


@dataclass(frozen=True)
class JitterBounds:
    """Maximum angle deviations (radians) per link: 1 = omega, 2 = phi."""

    beta_u1: float = 0.0
    beta_u2: float = 0.0
    beta_e1: float = 0.0
    beta_e2: float = 0.0
    beta_i1: float = 0.0
    beta_i2: float = 0.0

    def __post_init__(self):
        if min(self.beta_u1, self.beta_u2, self.beta_e1,
               self.beta_e2, self.beta_i1, self.beta_i2) < 0.0:
            raise ValueError("jitter bounds must be nonnegative")

    @classmethod
    def from_ratios(cls, angles: LinkAngles, ratio_alice: float,
                    ratio_eve: float, ratio_irs: float) -> "JitterBounds":
        """Bounds from per-link ratios of total deviation to the nominal
        plane angle, split evenly between the two angles."""
        b_u = ratio_alice * abs(angles.phi_alice)
        b_e = ratio_eve * abs(angles.phi_eve)
        b_i = ratio_irs * abs(angles.phi_irs)
        return cls(b_u / 2, b_u / 2, b_e / 2, b_e / 2, b_i / 2, b_i / 2)


@dataclass(frozen=True)
class PerturbationSample:
    """One draw of the six angle deviations."""

    d_omega_u: float
    d_phi_u: float
    d_omega_e: float
    d_phi_e: float
    d_omega_i: float
    d_phi_i: float


@dataclass(frozen=True)
class UncertaintySet:
    """Direction vectors and norm radii of the channel-error model.

    ``a_*``/``b_*`` already carry the line-of-sight amplitude weight, so
    the direct-link error is ``a_u*d_omega + b_u*d_phi`` and the
    transmit->surface error is ``outer(h_arr, a_i*d_omega + b_i*d_phi)``.
    """

    a_u: np.ndarray
    b_u: np.ndarray
    a_e: np.ndarray
    b_e: np.ndarray
    a_i: np.ndarray
    b_i: np.ndarray
    a_u1: float
    a_u2: float
    a_e1: float
    a_e2: float
    g_u1: float
    g_u2: float
    g_e1: float
    g_e2: float
    xi_uh: float
    xi_eh: float
    xi_ug: float
    xi_eg: float
    bounds: JitterBounds


def taylor_direction_vectors(phi: float, omega: float, n_x: int, n_y: int,
                             spacing: float, wavelength: float) -> tuple[np.ndarray, np.ndarray]:
    """Per-entry log-derivatives of the steering vector.

    Entry (p, q):
        a = 2j*pi*(spacing/wavelength) * (p*sin(omega) - q*sin(phi)*cos(omega))
        b = -2j*pi*(spacing/wavelength) * q*cos(phi)*sin(omega)
    index-aligned with the row-major (p, q) steering layout.
    """
    c = 2.0 * np.pi * spacing / wavelength
    p = np.arange(n_x)[:, None]
    q = np.arange(n_y)[None, :]
    a = 1j * c * (p * np.sin(omega) - q * np.sin(phi) * np.cos(omega))
    b = -1j * c * q * np.cos(phi) * np.sin(omega) + 0.0 * p
    return a.ravel(), b.ravel()


def perturbed_los(h_bar: np.ndarray, a: np.ndarray, b: np.ndarray,
                  d_omega: float, d_phi: float) -> np.ndarray:
    """First-order steering vector: h_bar * (1 + a*d_omega + b*d_phi)."""
    return h_bar * (1.0 + a * d_omega + b * d_phi)


def uncertainty_radii(channels: ChannelSet, bounds: JitterBounds) -> UncertaintySet:
    """Weighted direction vectors and the norm radii they imply.

    Direct links:   ||dh||_2  <= beta1*||a|| + beta2*||b||        (xi_uh, xi_eh)
    Cascades:       ||dG||_F  <= beta1*g1 + beta2*g2              (xi_ug, xi_eg)
    with g1 = ||h_ix||_2 * ||h_arr||_2 * ||a_i||_2 and likewise for g2.
    """
    g = channels.geometry
    ang = channels.angles

    def weighted(phi, omega, amp, h_los):
        a, b = taylor_direction_vectors(phi, omega, g.n_x, g.n_y,
                                        g.spacing_ubs, g.wavelength)
        return amp * h_los * a, amp * h_los * b

    a_u, b_u = weighted(ang.phi_alice, ang.omega_alice, channels.los_amp_u, channels.h_ul)
    a_e, b_e = weighted(ang.phi_eve, ang.omega_eve, channels.los_amp_e, channels.h_el)
    a_i, b_i = weighted(ang.phi_irs, ang.omega_irs, channels.los_amp_i, channels.h_il_departure)

    a_u1, a_u2 = np.linalg.norm(a_u), np.linalg.norm(b_u)
    a_e1, a_e2 = np.linalg.norm(a_e), np.linalg.norm(b_e)
    arr_norm = np.linalg.norm(channels.h_il_arrival)
    g_u1 = np.linalg.norm(channels.h_iu) * arr_norm * np.linalg.norm(a_i)
    g_u2 = np.linalg.norm(channels.h_iu) * arr_norm * np.linalg.norm(b_i)
    g_e1 = np.linalg.norm(channels.h_ie) * arr_norm * np.linalg.norm(a_i)
    g_e2 = np.linalg.norm(channels.h_ie) * arr_norm * np.linalg.norm(b_i)

    return UncertaintySet(
        a_u=a_u, b_u=b_u, a_e=a_e, b_e=b_e, a_i=a_i, b_i=b_i,
        a_u1=float(a_u1), a_u2=float(a_u2), a_e1=float(a_e1), a_e2=float(a_e2),
        g_u1=float(g_u1), g_u2=float(g_u2), g_e1=float(g_e1), g_e2=float(g_e2),
        xi_uh=float(bounds.beta_u1 * a_u1 + bounds.beta_u2 * a_u2),
        xi_eh=float(bounds.beta_e1 * a_e1 + bounds.beta_e2 * a_e2),
        xi_ug=float(bounds.beta_i1 * g_u1 + bounds.beta_i2 * g_u2),
        xi_eg=float(bounds.beta_i1 * g_e1 + bounds.beta_i2 * g_e2),
        bounds=bounds,
    )


def sample_perturbation(bounds: JitterBounds, rng: np.random.Generator) -> PerturbationSample:
    """Uniform draw from the jitter box; deterministic given the generator state."""
    def u(beta):
        return float(rng.uniform(-beta, beta)) if beta > 0.0 else 0.0

    return PerturbationSample(
        u(bounds.beta_u1), u(bounds.beta_u2),
        u(bounds.beta_e1), u(bounds.beta_e2),
        u(bounds.beta_i1), u(bounds.beta_i2),
    )


def direct_error(unc: UncertaintySet, link: str, d_omega: float, d_phi: float) -> np.ndarray:
    """Linear-model direct-channel error for ``link`` in {'alice', 'eve'}."""
    if link == "alice":
        return unc.a_u * d_omega + unc.b_u * d_phi
    if link == "eve":
        return unc.a_e * d_omega + unc.b_e * d_phi
    raise ValueError(f"unknown link {link!r}")


def cascade_matrix_error(channels: ChannelSet, unc: UncertaintySet,
                         d_omega: float, d_phi: float) -> np.ndarray:
    """Linear-model transmit->surface matrix error (M, N)."""
    return np.outer(channels.h_il_arrival, unc.a_i * d_omega + unc.b_i * d_phi)


def cascade_error(channels: ChannelSet, unc: UncertaintySet, link: str,
                  d_omega: float, d_phi: float) -> np.ndarray:
    """Linear-model cascaded-channel error dG for ``link`` in {'alice', 'eve'}."""
    dH = cascade_matrix_error(channels, unc, d_omega, d_phi)
    h_ix = channels.h_iu if link == "alice" else channels.h_ie
    if link not in ("alice", "eve"):
        raise ValueError(f"unknown link {link!r}")
    return h_ix.conj()[:, None] * dH
