"""Scenario bundle: geometry, large-scale fading, jitter ratios, thresholds.

This is the configuration boundary: dB/dBm quantities are converted to
linear units exactly once, here.  The baseline values follow the default
simulation setup: UAV at (10, 20, 10), surface at (10, 0, 10), Alice at
(20, 20, 0), Eve at (10, 40, 0), two transmit antennas, ten reflecting
elements, 40 dBm peak power, 10 dBm amplification budget, 30 dB amplitude
cap, rate targets 4.5 / 1 bits/s/Hz, -10 dBm noise everywhere, and
jitter-to-angle ratios 0.02 (Alice), 0.04 (Eve), 0.02 (surface link).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Any

import numpy as np

from .exceptions import ConfigError
from .geometry_channel import (
    ChannelParams,
    ChannelSet,
    NetworkGeometry,
    nominal_angles,
    synthesize_channels,
)
from .jitter_uncertainty import JitterBounds, UncertaintySet, uncertainty_radii
from .robust_beamforming import RobustConfig
from .units import db_to_amplitude, db_to_linear, dbm_to_watt


def near_square_factors(m: int) -> tuple[int, int]:
    """Split an element count into the most balanced (rows, cols) grid."""
    best = (1, m)
    for a in range(1, int(np.sqrt(m)) + 1):
        if m % a == 0:
            best = (a, m // a)
    return best


@dataclass(frozen=True)
class Scenario:
    """Full experiment description in linear units."""

    geometry: NetworkGeometry
    params: ChannelParams = field(default_factory=ChannelParams)
    robust: RobustConfig = field(default_factory=RobustConfig)
    aod_ratio_alice: float = 0.02
    aod_ratio_eve: float = 0.04
    aod_ratio_irs: float = 0.02

    def bounds(self) -> JitterBounds:
        ang = nominal_angles(self.geometry)
        return JitterBounds.from_ratios(ang, self.aod_ratio_alice,
                                        self.aod_ratio_eve, self.aod_ratio_irs)

    def channels(self, rng_seed) -> ChannelSet:
        return synthesize_channels(self.geometry, rng_seed, self.params)

    def uncertainty(self, channels: ChannelSet) -> UncertaintySet:
        return uncertainty_radii(channels, self.bounds())

    def with_mode(self, mode: str) -> "Scenario":
        return replace(self, robust=replace(self.robust, mode=mode))


def baseline_geometry(n: int = 2, m: int = 10, uav_altitude: float = 10.0,
                      n_split: tuple[int, int] | None = None,
                      m_split: tuple[int, int] | None = None) -> NetworkGeometry:
    n_x, n_y = n_split if n_split is not None else near_square_factors(n)
    m_x, m_y = m_split if m_split is not None else near_square_factors(m)
    return NetworkGeometry(
        ubs_pos=np.array([10.0, 20.0, uav_altitude]),
        irs_pos=np.array([10.0, 0.0, 10.0]),
        alice_pos=np.array([20.0, 20.0, 0.0]),
        eve_pos=np.array([10.0, 40.0, 0.0]),
        n_x=n_x, n_y=n_y, m_x=m_x, m_y=m_y,
    )


def baseline_scenario(**overrides) -> Scenario:
    """Reference setup; keyword overrides patch the nested pieces."""
    geo_keys = {k: overrides.pop(k) for k in ("n", "m", "uav_altitude")
                if k in overrides}
    robust_keys = {k: overrides.pop(k) for k in list(overrides)
                   if k in RobustConfig.__dataclass_fields__}
    scenario = Scenario(geometry=baseline_geometry(**geo_keys),
                        robust=RobustConfig(**robust_keys), **overrides)
    return scenario


_SCENARIO_SCHEMA: dict[str, Any] = {
    "n": int, "m": int, "uav_altitude": float,
    "p_peak_dbm": float, "p_amp_dbm": float, "tau_max_db": float,
    "eta_u": float, "eta_e": float,
    "noise_dbm": float, "mode": str, "ao_tol": float,
    "aod_ratio_alice": float, "aod_ratio_eve": float, "aod_ratio_irs": float,
}


def scenario_from_dict(data: dict, path: str = "scenario") -> Scenario:
    """Build a scenario from plain config keys (dB/dBm at this boundary)."""
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: expected a mapping")
    unknown = set(data) - set(_SCENARIO_SCHEMA)
    if unknown:
        raise ConfigError(f"{path}: unknown keys {sorted(unknown)}")
    vals = {}
    for key, value in data.items():
        want = _SCENARIO_SCHEMA[key]
        if want is float and isinstance(value, (int, float)) \
                and not isinstance(value, bool):
            vals[key] = float(value)
        elif want is int and isinstance(value, int) and not isinstance(value, bool):
            vals[key] = value
        elif want is str and isinstance(value, str):
            vals[key] = value
        else:
            raise ConfigError(f"{path}.{key}: expected {want.__name__}, "
                              f"got {value!r}")
    kwargs: dict[str, Any] = {}
    for key in ("n", "m", "uav_altitude", "eta_u", "eta_e", "mode", "ao_tol",
                "aod_ratio_alice", "aod_ratio_eve", "aod_ratio_irs"):
        if key in vals:
            kwargs[key] = vals[key]
    if "p_peak_dbm" in vals:
        kwargs["p_peak"] = float(dbm_to_watt(vals["p_peak_dbm"]))
    if "p_amp_dbm" in vals:
        kwargs["p_amp"] = float(dbm_to_watt(vals["p_amp_dbm"]))
    if "tau_max_db" in vals:
        kwargs["tau_max"] = float(db_to_amplitude(vals["tau_max_db"]))
    if "noise_dbm" in vals:
        noise = float(dbm_to_watt(vals["noise_dbm"]))
        kwargs.update(sigma_irs_sq=noise, sigma_alice_sq=noise, sigma_eve_sq=noise)
    try:
        return baseline_scenario(**kwargs)
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
