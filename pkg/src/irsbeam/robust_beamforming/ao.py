"""Alternating optimization of the beamformer and the reflection vector."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

import numpy as np

from ..conic_solver import SolveStatus
from ..exceptions import InitializationFailedError
from ..geometry_channel import ChannelSet
from ..jitter_uncertainty import UncertaintySet
from ..units import watt_to_dbm
from .subproblems import SubproblemResult, solve_v_subproblem, solve_w_subproblem
from .types import BeamState, RobustConfig

_INIT_RETRIES = 10


@dataclass(frozen=True)
class AOIterationRecord:
    power_w: float
    power_dbm: float
    alpha_u: float
    alpha_e: float
    w_status: str
    v_status: str
    max_kkt_residual: float
    wall_seconds: float


@dataclass
class AOTrace:
    """Per-iteration history of one alternating-optimization run."""

    iterations: list[AOIterationRecord] = field(default_factory=list)
    iterates: list[BeamState] = field(default_factory=list)
    powers: list[float] = field(default_factory=list)
    stop_reason: str = "unset"
    state: BeamState | None = None
    wall_seconds: float = 0.0

    @property
    def converged(self) -> bool:
        return self.stop_reason in ("tolerance", "v_infeasible")

    @property
    def final_power(self) -> float:
        return self.powers[-1]

    def to_json(self) -> str:
        out = {
            "stop_reason": self.stop_reason,
            "wall_seconds": self.wall_seconds,
            "iterations": [
                {
                    "power_w": r.power_w,
                    "power_dbm": r.power_dbm,
                    "alpha_u": r.alpha_u,
                    "alpha_e": r.alpha_e,
                    "w_status": r.w_status,
                    "v_status": r.v_status,
                    "max_kkt_residual": r.max_kkt_residual,
                    "wall_seconds": r.wall_seconds,
                }
                for r in self.iterations
            ],
        }
        if self.state is not None:
            out["w"] = [[z.real, z.imag] for z in self.state.w]
            out["v"] = [[z.real, z.imag] for z in self.state.v]
        return json.dumps(out)


def _residual_max(res: SubproblemResult) -> float:
    s = res.solution
    vals = [s.primal_residual, s.dual_residual, s.gap]
    return float(max(v for v in vals if np.isfinite(v))) if any(
        np.isfinite(v) for v in vals) else float("nan")


def initial_reflection(channels: ChannelSet, config: RobustConfig,
                       rng: np.random.Generator) -> np.ndarray:
    """Random-phase start whose amplitude respects the amplification budget
    for any beamformer within the peak power."""
    m = channels.m
    phases = rng.uniform(0.0, 2.0 * np.pi, m)
    if config.active:
        p_bar = np.linalg.norm(channels.H_i, "fro") ** 2 * config.p_peak / m
        amp = min(config.tau_max,
                  float(np.sqrt(config.p_amp / (m * (config.sigma_irs_sq + p_bar)))))
    else:
        amp = 1.0
    return amp * np.exp(1j * phases)


def _matched_filter(channels: ChannelSet, v: np.ndarray, p_peak: float) -> np.ndarray:
    h_eff = channels.h_u + channels.g_u().conj().T @ v
    nrm = np.linalg.norm(h_eff)
    if nrm == 0.0:
        h_eff = np.ones_like(channels.h_u)
        nrm = np.linalg.norm(h_eff)
    return np.sqrt(p_peak) * h_eff / nrm


def alternate_optimize(channels: ChannelSet, uncertainty: UncertaintySet,
                       config: RobustConfig,
                       init: BeamState | None = None,
                       rng: np.random.Generator | int | None = None) -> AOTrace:
    """Run the alternating optimization until the relative power change
    drops below the tolerance or the reflection step becomes infeasible.

    Raises :class:`InitializationFailedError` when no feasible beamformer is
    found from the initial reflection after the documented random-phase
    retries.
    """
    rng = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    trace = AOTrace()
    t_start = time.perf_counter()

    if init is not None:
        v = init.v.copy()
        w_expand = init.w.copy()
        w_res = solve_w_subproblem(v, w_expand, channels, uncertainty, config)
        if not w_res.optimal:
            raise InitializationFailedError(
                f"beamformer step failed from supplied start: {w_res.status.value}")
    else:
        w_res = None
        for _ in range(1 + _INIT_RETRIES):
            v = initial_reflection(channels, config, rng)
            w_expand = _matched_filter(channels, v, config.p_peak)
            attempt = solve_w_subproblem(v, w_expand, channels, uncertainty, config)
            if attempt.optimal:
                w_res = attempt
                break
        if w_res is None:
            raise InitializationFailedError(
                "no feasible beamformer found from random-phase reflections")

    w = w_res.w
    power = float(np.vdot(w, w).real)
    trace.iterates.append(BeamState(w=w.copy(), v=v.copy()))
    trace.powers.append(power)
    trace.iterations.append(AOIterationRecord(
        power_w=power, power_dbm=watt_to_dbm(power), alpha_u=0.0, alpha_e=0.0,
        w_status=w_res.status.value, v_status="NotRun",
        max_kkt_residual=_residual_max(w_res),
        wall_seconds=time.perf_counter() - t_start))
    trace.stop_reason = "max_iters"

    for _ in range(config.max_ao_iters):
        t_it = time.perf_counter()
        v_res = solve_v_subproblem(w, v, channels, uncertainty, config)
        if v_res.status is SolveStatus.PRIMAL_INFEASIBLE:
            trace.stop_reason = "v_infeasible"
            break
        if not v_res.optimal:
            trace.stop_reason = f"solver_failure:{v_res.status.value}"
            break
        v = v_res.v

        w_res = solve_w_subproblem(v, w, channels, uncertainty, config)
        if not w_res.optimal:
            trace.stop_reason = f"solver_failure:{w_res.status.value}"
            break
        w = w_res.w

        prev_power = power
        power = float(np.vdot(w, w).real)
        trace.iterates.append(BeamState(w=w.copy(), v=v.copy()))
        trace.powers.append(power)
        trace.iterations.append(AOIterationRecord(
            power_w=power, power_dbm=watt_to_dbm(power),
            alpha_u=v_res.alpha_u, alpha_e=v_res.alpha_e,
            w_status=w_res.status.value, v_status=v_res.status.value,
            max_kkt_residual=max(_residual_max(w_res), _residual_max(v_res)),
            wall_seconds=time.perf_counter() - t_it))
        if abs(power - prev_power) / max(prev_power, 1e-300) < config.ao_tol:
            trace.stop_reason = "tolerance"
            break

    trace.state = BeamState(w=w.copy(), v=v.copy())
    trace.wall_seconds = time.perf_counter() - t_start
    return trace
