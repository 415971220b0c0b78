"""Numeric builders for the robust constraint blocks.

Each function evaluates one constraint block at concrete values of the
decision quantities.  The subproblem assembler probes these evaluators at
basis points to recover affine coefficient form, so the math lives in one
place and the same evaluators back the sampling audits.
"""

from __future__ import annotations

import numpy as np

from ..geometry_channel import ChannelSet
from ..jitter_uncertainty import UncertaintySet
from .types import Lemma1Terms


def rate_factor(eta: float) -> float:
    """SNR threshold 2^eta - 1 matching a spectral-efficiency target."""
    return float(2.0 ** eta - 1.0)


def interference_noise_power(v: np.ndarray, h_ix: np.ndarray,
                             sigma_irs_sq: float, sigma_rx_sq: float) -> float:
    """Receiver interference-plus-noise power: amplified surface noise
    forwarded through the reflection plus the local noise floor."""
    return float(sigma_irs_sq * np.sum(np.abs(h_ix * v) ** 2) + sigma_rx_sq)


def interference_noise_minorant(v: np.ndarray, v_k: np.ndarray, h_ix: np.ndarray,
                                sigma_irs_sq: float, sigma_rx_sq: float) -> float:
    """Affine-in-v lower bound on :func:`interference_noise_power`, tight at
    v = v_k (first-order bound on the convex quadratic)."""
    d2 = np.abs(h_ix) ** 2
    lin = 2.0 * float(np.real(np.vdot(v_k, d2 * v))) - float(np.vdot(v_k, d2 * v_k).real)
    return float(sigma_irs_sq * lin + sigma_rx_sq)


def build_alice_lmi(terms: Lemma1Terms, varpi1: float, varpi2: float,
                    radii: UncertaintySet, eta_u: float, beta_alice: float,
                    alpha_u: float = 0.0) -> np.ndarray:
    """Hermitian block certifying the robust legitimate-rate constraint.

    PSD of the block implies (via the S-procedure over the two norm balls)
    that the signal-power minorant stays >= beta_alice*(2^eta_u - 1) + alpha_u
    for every channel error within the radii.
    """
    n = radii.a_u.shape[0]
    dim = terms.dim
    block = np.zeros((dim + 1, dim + 1), dtype=complex)
    block[:dim, :dim] = terms.A_tilde
    block[np.arange(n), np.arange(n)] += varpi1
    block[np.arange(n, dim), np.arange(n, dim)] += varpi2
    block[:dim, dim] = terms.a_tilde
    block[dim, :dim] = terms.a_tilde.conj()
    block[dim, dim] = (terms.a0_tilde - beta_alice * rate_factor(eta_u)
                       - varpi1 * radii.xi_uh ** 2 - varpi2 * radii.xi_ug ** 2
                       - alpha_u)
    return block


def build_eve_lmi(terms: Lemma1Terms, psi1: float, psi2: float,
                  radii: UncertaintySet, eta_e: float, beta_eve: float,
                  alpha_e: float = 0.0) -> np.ndarray:
    """Hermitian block certifying the robust eavesdropper-rate constraint:
    the leakage quadratic form stays <= beta_eve*(2^eta_e - 1) - alpha_e on
    the uncertainty region."""
    n = radii.a_e.shape[0]
    dim = terms.dim
    block = np.zeros((dim + 1, dim + 1), dtype=complex)
    block[:dim, :dim] = -terms.A_tilde
    block[np.arange(n), np.arange(n)] += psi1
    block[np.arange(n, dim), np.arange(n, dim)] += psi2
    block[:dim, dim] = -terms.a_tilde
    block[dim, :dim] = -terms.a_tilde.conj()
    block[dim, dim] = (beta_eve * rate_factor(eta_e) - terms.a0_tilde
                       - psi1 * radii.xi_eh ** 2 - psi2 * radii.xi_eg ** 2
                       - alpha_e)
    return block


def build_amp_schur(w: np.ndarray, v: np.ndarray, H_i: np.ndarray,
                    sigma_irs_sq: float, p_amp: float) -> np.ndarray:
    """Schur-complement form of the amplification power budget, affine in w
    for fixed v: PSD iff ||diag(conj(v)) H_i w||^2 + sigma^2 ||v||^2 <= p_amp."""
    h_g = H_i @ w
    r = v.conj() * h_g
    m = v.shape[0]
    block = np.zeros((m + 1, m + 1), dtype=complex)
    block[0, 0] = p_amp - sigma_irs_sq * float(np.vdot(v, v).real)
    block[0, 1:] = r.conj()
    block[1:, 0] = r
    block[1:, 1:] = np.eye(m)
    return block


def amp_power(w: np.ndarray, v: np.ndarray, H_i: np.ndarray,
              sigma_irs_sq: float) -> float:
    """Re-radiated power: ||diag(conj(v)) H_i w||^2 + sigma^2 ||v||^2."""
    h_g = H_i @ w
    return float(np.sum(np.abs(v.conj() * h_g) ** 2)
                 + sigma_irs_sq * np.vdot(v, v).real)


def amp_soc_rows(v_re: np.ndarray, v_im: np.ndarray, h_g: np.ndarray,
                 sigma_irs_sq: float, p_amp: float) -> np.ndarray:
    """SOC vector for the amplification budget with w fixed:
    sqrt(p_amp) >= ||F^(1/2) v||, F = diag(|h_g|^2) + sigma^2 I."""
    f_sqrt = np.sqrt(np.abs(h_g) ** 2 + sigma_irs_sq)
    return np.concatenate([[np.sqrt(p_amp)], f_sqrt * v_re, f_sqrt * v_im])


def build_magnitude_constraints(v_re: np.ndarray, v_im: np.ndarray,
                                tau_max: float) -> list[np.ndarray]:
    """Per-element SOC vectors enforcing |v_m| <= tau_max."""
    return [np.array([tau_max, v_re[m], v_im[m]]) for m in range(v_re.shape[0])]


def alice_robust_margin(terms: Lemma1Terms, x: np.ndarray, beta_alice: float,
                        eta_u: float) -> float:
    """Signed slack of the legitimate-rate quadratic constraint at error x."""
    return terms.quad_form(x) - beta_alice * rate_factor(eta_u)


def eve_robust_margin(terms: Lemma1Terms, x: np.ndarray, beta_eve: float,
                      eta_e: float) -> float:
    """Signed slack of the leakage quadratic constraint at error x."""
    return beta_eve * rate_factor(eta_e) - terms.quad_form(x)


def error_stack_from_angles(channels: ChannelSet, unc: UncertaintySet,
                            link: str, d_omega: float, d_phi: float,
                            d_omega_i: float, d_phi_i: float) -> np.ndarray:
    """Stacked linear-model error [dh; vec(conj(dG))] for sampled angles."""
    from ..jitter_uncertainty import cascade_error, direct_error
    from .terms import error_stack

    dh = direct_error(unc, link, d_omega, d_phi)
    dG = cascade_error(channels, unc, link, d_omega_i, d_phi_i)
    return error_stack(dh, dG)
