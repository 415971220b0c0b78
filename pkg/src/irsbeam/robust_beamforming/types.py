"""Shared types for the robust beamforming pipeline."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class BeamState:
    """Transmit beamformer w (sqrt-watts) and reflection vector v.

    The reflection phases are stored so that the observed cascade is
    ``v^H G``; the physical reflection matrix is ``diag(conj(v))``.
    """

    w: np.ndarray
    v: np.ndarray

    def power(self) -> float:
        return float(np.vdot(self.w, self.w).real)


@dataclass(frozen=True)
class RobustConfig:
    """Thresholds, power budgets, and noise levels (all linear watts)."""

    eta_u: float = 4.5
    eta_e: float = 1.0
    p_peak: float = 10.0 ** ((40.0 - 30.0) / 10.0)
    p_amp: float = 10.0 ** ((10.0 - 30.0) / 10.0)
    tau_max: float = 10.0 ** (30.0 / 20.0)
    sigma_irs_sq: float = 10.0 ** ((-10.0 - 30.0) / 10.0)
    sigma_alice_sq: float = 10.0 ** ((-10.0 - 30.0) / 10.0)
    sigma_eve_sq: float = 10.0 ** ((-10.0 - 30.0) / 10.0)
    ao_tol: float = 1e-4
    mode: str = "active"
    max_ao_iters: int = 60
    solver_tol: float = 1e-8
    solver_max_iter: int = 200

    def __post_init__(self):
        if not 0.0 < self.eta_e < self.eta_u:
            raise ValueError("thresholds must satisfy 0 < eta_e < eta_u")
        if min(self.p_peak, self.p_amp, self.tau_max) <= 0.0:
            raise ValueError("power budgets and amplitude cap must be positive")
        if min(self.sigma_alice_sq, self.sigma_eve_sq) <= 0.0 or self.sigma_irs_sq < 0.0:
            raise ValueError("noise powers must be positive")
        if self.ao_tol <= 0.0:
            raise ValueError("ao_tol must be positive")
        if self.mode not in ("active", "passive"):
            raise ValueError(f"unknown mode {self.mode!r}")

    @property
    def active(self) -> bool:
        return self.mode == "active"

    def effective_tau_max(self) -> float:
        return self.tau_max if self.active else 1.0

    def effective_sigma_irs_sq(self) -> float:
        """Passive elements reflect without amplification noise."""
        return self.sigma_irs_sq if self.active else 0.0


@dataclass(frozen=True)
class Lemma1Terms:
    """Quadratic-in-uncertainty minorant of the received signal power.

    For error stack ``x = [dh; vec(conj(dG))]`` the value
    ``x^H A x + 2 Re(a^H x) + a0`` lower-bounds
    ``|((h+dh)^H + v^H (G+dG)) w|^2`` for every x, with equality at the
    expansion point (w, v) = (w_k, v_k) when dh = 0, dG = 0.
    """

    A_tilde: np.ndarray
    a_tilde: np.ndarray
    a0_tilde: float
    C: np.ndarray = field(repr=False, default=None)
    Z: np.ndarray = field(repr=False, default=None)
    c1: np.ndarray = field(repr=False, default=None)
    c2: np.ndarray = field(repr=False, default=None)
    z_vec: np.ndarray = field(repr=False, default=None)
    c_scalar: complex = 0.0
    z_scalar: float = 0.0

    @property
    def dim(self) -> int:
        return self.a_tilde.shape[0]

    def quad_form(self, x: np.ndarray) -> float:
        """Evaluate the minorant at an error stack x."""
        return float((x.conj() @ self.A_tilde @ x).real
                     + 2.0 * (self.a_tilde.conj() @ x).real + self.a0_tilde)
