"""Conic assembly and solution of the two alternating subproblems.

Beamformer step (v frozen): minimize transmit power subject to the peak
power cap, both robust-rate PSD blocks, and (active mode) the amplification
Schur block.  Reflection step (w frozen): maximize the two rate slacks
subject to the same robust blocks plus the amplification and per-element
magnitude caps.

Receiver interference power is quadratic in v; in the reflection step it is
handled exactly through an epigraph on the legitimate side (where it enters
with favorable sign) and through its affine minorant at the incumbent on
the eavesdropper side, keeping every block conic while preserving
solver-feasible => robust-feasible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..conic_solver import (
    ConicSolution,
    ProblemBuilder,
    SolveStatus,
    affine_matrix_probe,
    solve,
)
from ..geometry_channel import ChannelSet
from ..jitter_uncertainty import UncertaintySet
from .constraints import (
    amp_soc_rows,
    build_alice_lmi,
    build_amp_schur,
    build_eve_lmi,
    interference_noise_minorant,
    interference_noise_power,
)
from .terms import lemma1_terms
from .types import RobustConfig


@dataclass(frozen=True)
class SubproblemResult:
    solution: ConicSolution
    w: np.ndarray | None = None
    v: np.ndarray | None = None
    alpha_u: float = 0.0
    alpha_e: float = 0.0
    multipliers: dict | None = None

    @property
    def status(self) -> SolveStatus:
        return self.solution.status

    @property
    def optimal(self) -> bool:
        return self.solution.optimal


def _probe_lmi(builder: ProblemBuilder, fn, var_map: dict) -> None:
    """Probe an affine Hermitian evaluator and emit the embedded PSD block."""
    sizes = {name: var.size for name, var in var_map.items()}
    zeros = {name: np.zeros(size) for name, size in sizes.items()}
    dim = fn(**zeros).shape[0]
    const, coeffs = affine_matrix_probe(fn, sizes, dim)
    builder.add_psd_hermitian(const, {var_map[name]: coeffs[name]
                                      for name in var_map})


def solve_w_subproblem(v_k: np.ndarray, w_k: np.ndarray, channels: ChannelSet,
                       uncertainty: UncertaintySet,
                       config: RobustConfig) -> SubproblemResult:
    """Minimize ||w||^2 under the robust blocks with the reflection frozen."""
    n = channels.n
    sigma_i = config.effective_sigma_irs_sq()
    beta_alice = interference_noise_power(v_k, channels.h_iu, sigma_i,
                                          config.sigma_alice_sq)
    beta_eve = interference_noise_power(v_k, channels.h_ie, sigma_i,
                                        config.sigma_eve_sq)

    pb = ProblemBuilder()
    t = pb.add_var("t")
    wr = pb.add_var("wr", n)
    wi = pb.add_var("wi", n)
    varpi = pb.add_var("varpi", 2)
    psi = pb.add_var("psi", 2)
    pb.minimize({t: np.array([1.0])})

    eye = np.eye(n)
    norm_epi = pb.expr(2 * n + 1)
    norm_epi.add_term(t, np.array([[1.0]] + [[0.0]] * (2 * n)))
    norm_epi.add_term(wr, np.vstack([np.zeros((1, n)), eye, np.zeros((n, n))]))
    norm_epi.add_term(wi, np.vstack([np.zeros((n + 1, n)), eye]))
    pb.add_soc(norm_epi)

    peak = pb.expr(2 * n + 1, np.concatenate([[np.sqrt(config.p_peak)],
                                              np.zeros(2 * n)]))
    peak.add_term(wr, np.vstack([np.zeros((1, n)), eye, np.zeros((n, n))]))
    peak.add_term(wi, np.vstack([np.zeros((n + 1, n)), eye]))
    pb.add_soc(peak)

    mults = pb.expr(4)
    mults.add_term(varpi, np.vstack([np.eye(2), np.zeros((2, 2))]))
    mults.add_term(psi, np.vstack([np.zeros((2, 2)), np.eye(2)]))
    pb.add_nonneg(mults)

    def alice_block(wr, wi, varpi):
        w = wr + 1j * wi
        terms = lemma1_terms("alice", w_k, v_k, channels, w=w)
        return build_alice_lmi(terms, varpi[0], varpi[1], uncertainty,
                               config.eta_u, beta_alice)

    def eve_block(wr, wi, psi):
        w = wr + 1j * wi
        terms = lemma1_terms("eve", w_k, v_k, channels, w=w)
        return build_eve_lmi(terms, psi[0], psi[1], uncertainty,
                             config.eta_e, beta_eve)

    _probe_lmi(pb, alice_block, {"wr": wr, "wi": wi, "varpi": varpi})
    _probe_lmi(pb, eve_block, {"wr": wr, "wi": wi, "psi": psi})

    if config.active:
        def amp_block(wr, wi):
            w = wr + 1j * wi
            return build_amp_schur(w, v_k, channels.H_i,
                                   config.sigma_irs_sq, config.p_amp)

        _probe_lmi(pb, amp_block, {"wr": wr, "wi": wi})

    sol = solve(pb.build(), tol=config.solver_tol, max_iter=config.solver_max_iter)
    if not sol.optimal:
        return SubproblemResult(solution=sol)
    w_next = sol.x[wr.sl] + 1j * sol.x[wi.sl]
    return SubproblemResult(
        solution=sol, w=w_next,
        multipliers={"varpi": sol.x[varpi.sl].copy(), "psi": sol.x[psi.sl].copy()})


def solve_v_subproblem(w_next: np.ndarray, v_k: np.ndarray, channels: ChannelSet,
                       uncertainty: UncertaintySet,
                       config: RobustConfig) -> SubproblemResult:
    """Maximize the rate slacks over the reflection with the beamformer frozen."""
    m = channels.m
    sigma_i = config.effective_sigma_irs_sq()
    active = config.active

    pb = ProblemBuilder()
    vr = pb.add_var("vr", m)
    vi = pb.add_var("vi", m)
    varpi = pb.add_var("varpi", 2)
    psi = pb.add_var("psi", 2)
    alpha = pb.add_var("alpha", 2)
    sbeta = pb.add_var("sbeta") if active else None
    pb.minimize({alpha: np.array([-1.0, -1.0])})

    mults = pb.expr(6)
    mults.add_term(varpi, np.vstack([np.eye(2), np.zeros((4, 2))]))
    mults.add_term(psi, np.vstack([np.zeros((2, 2)), np.eye(2), np.zeros((2, 2))]))
    mults.add_term(alpha, np.vstack([np.zeros((4, 2)), np.eye(2)]))
    pb.add_nonneg(mults)

    def alice_block(vr, vi, varpi, alpha, sbeta=None):
        v = vr + 1j * vi
        terms = lemma1_terms("alice", w_next, v_k, channels, v=v)
        beta = sbeta[0] if active else config.sigma_alice_sq
        return build_alice_lmi(terms, varpi[0], varpi[1], uncertainty,
                               config.eta_u, beta, alpha_u=alpha[0])

    def eve_block(vr, vi, psi, alpha):
        v = vr + 1j * vi
        terms = lemma1_terms("eve", w_next, v_k, channels, v=v)
        if active:
            beta = interference_noise_minorant(v, v_k, channels.h_ie, sigma_i,
                                               config.sigma_eve_sq)
        else:
            beta = config.sigma_eve_sq
        return build_eve_lmi(terms, psi[0], psi[1], uncertainty,
                             config.eta_e, beta, alpha_e=alpha[1])

    alice_vars = {"vr": vr, "vi": vi, "varpi": varpi, "alpha": alpha}
    if active:
        alice_vars["sbeta"] = sbeta
    _probe_lmi(pb, alice_block, alice_vars)
    _probe_lmi(pb, eve_block, {"vr": vr, "vi": vi, "psi": psi, "alpha": alpha})

    if active:
        # Epigraph sbeta >= sigma_i*||h_iu o v||^2 + sigma_alice^2 as an SOC:
        # ||(q, (r-1)/2)|| <= (r+1)/2 with r = sbeta - sigma_alice^2.
        q_scale = np.sqrt(sigma_i) * np.abs(channels.h_iu)
        rows = 2 * m + 2
        epi = pb.expr(rows, np.concatenate([
            [(1.0 - config.sigma_alice_sq) / 2.0], np.zeros(2 * m),
            [(-1.0 - config.sigma_alice_sq) / 2.0]]))
        col = np.zeros((rows, 1))
        col[0, 0] = 0.5
        col[-1, 0] = 0.5
        epi.add_term(sbeta, col)
        block_r = np.zeros((rows, m))
        block_r[1:m + 1, :] = np.diag(q_scale)
        block_i = np.zeros((rows, m))
        block_i[m + 1:2 * m + 1, :] = np.diag(q_scale)
        epi.add_term(vr, block_r)
        epi.add_term(vi, block_i)
        pb.add_soc(epi)

        h_g = channels.H_i @ w_next
        f_sqrt = np.sqrt(np.abs(h_g) ** 2 + config.sigma_irs_sq)
        amp = pb.expr(2 * m + 1, np.concatenate([[np.sqrt(config.p_amp)],
                                                 np.zeros(2 * m)]))
        amp.add_term(vr, np.vstack([np.zeros((1, m)), np.diag(f_sqrt),
                                    np.zeros((m, m))]))
        amp.add_term(vi, np.vstack([np.zeros((m + 1, m)), np.diag(f_sqrt)]))
        pb.add_soc(amp)

    tau = config.effective_tau_max()
    for j in range(m):
        mag = pb.expr(3, np.array([tau, 0.0, 0.0]))
        row_r = np.zeros((3, m))
        row_r[1, j] = 1.0
        row_i = np.zeros((3, m))
        row_i[2, j] = 1.0
        mag.add_term(vr, row_r)
        mag.add_term(vi, row_i)
        pb.add_soc(mag)

    sol = solve(pb.build(), tol=config.solver_tol, max_iter=config.solver_max_iter)
    if not sol.optimal:
        return SubproblemResult(solution=sol)
    v_next = sol.x[vr.sl] + 1j * sol.x[vi.sl]
    return SubproblemResult(
        solution=sol, v=v_next,
        alpha_u=float(sol.x[alpha.sl][0]), alpha_e=float(sol.x[alpha.sl][1]),
        multipliers={"varpi": sol.x[varpi.sl].copy(), "psi": sol.x[psi.sl].copy()})
