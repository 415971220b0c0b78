"""Network geometry, URA steering vectors, and Rician channel synthesis.

Angle convention for the transmit array (UBS): a link with offset
``(dx, dy, dz)`` and length ``d`` is described by a boresight angle
``omega`` and a plane angle ``phi`` satisfying

    cos(omega)          = dz / d
    sin(phi) sin(omega) = dy / d
    cos(phi) sin(omega) = dx / d

so ``omega`` is measured from the array's z-facing axis and ``phi`` is the
azimuth of the horizontal projection.  Steering phases depend only on
``cos(omega)`` and ``sin(phi) sin(omega)``.

For the reflecting surface the arrival direction is described by an azimuth
``varphi`` and an elevation-from-axis angle ``vartheta`` with

    cos(varphi) sin(vartheta) = dx / d
    sin(varphi) sin(vartheta) = dy / d.

Uniform rectangular arrays are enumerated row-major in ``(p, q)`` with
``p`` along the x axis: flat index ``p * n_y + q``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import DegenerateGeometryError, DimensionMismatchError

# Elevation-dependent Rician factor K = a * exp(b * (pi/2 - elevation)).
K_FACTOR_A = 5.0
K_FACTOR_B = (2.0 / np.pi) * np.log(3.0)


@dataclass(frozen=True)
class NetworkGeometry:
    """Node positions (meters) and array layout of the downlink."""

    ubs_pos: np.ndarray
    irs_pos: np.ndarray
    alice_pos: np.ndarray
    eve_pos: np.ndarray
    n_x: int = 1
    n_y: int = 2
    m_x: int = 2
    m_y: int = 5
    spacing_ubs: float = 0.05
    spacing_irs: float = 0.05
    wavelength: float = 0.1

    def __post_init__(self):
        for name in ("ubs_pos", "irs_pos", "alice_pos", "eve_pos"):
            vec = np.asarray(getattr(self, name), dtype=float)
            if vec.shape != (3,):
                raise DimensionMismatchError(f"{name} must be a 3-vector, got {vec.shape}")
            object.__setattr__(self, name, vec)
        if self.alice_pos[2] != 0.0 or self.eve_pos[2] != 0.0:
            raise ValueError("ground nodes must sit at z = 0")
        if self.ubs_pos[2] <= 0.0:
            raise ValueError("UAV altitude must be positive")
        if min(self.n_x, self.n_y, self.m_x, self.m_y) < 1:
            raise ValueError("array dimensions must be >= 1")
        if min(self.spacing_ubs, self.spacing_irs, self.wavelength) <= 0.0:
            raise ValueError("spacings and wavelength must be positive")

    @property
    def n(self) -> int:
        return self.n_x * self.n_y

    @property
    def m(self) -> int:
        return self.m_x * self.m_y


@dataclass(frozen=True)
class LinkAngles:
    """Nominal departure angles per transmit link plus IRS arrival angles."""

    omega_alice: float
    phi_alice: float
    omega_eve: float
    phi_eve: float
    omega_irs: float
    phi_irs: float
    irs_arrival_azimuth: float
    irs_arrival_elevation: float


@dataclass(frozen=True)
class ChannelParams:
    """Large-scale fading parameters (linear units) and optional K overrides."""

    a_los: float = 10.0 ** (-2.14 / 10.0)
    a_nlos: float = 10.0 ** (-3.14 / 10.0)
    alpha_los: float = 2.09
    alpha_nlos: float = 3.75
    k_alice: float | None = None
    k_eve: float | None = None
    k_irs: float | None = None
    k_irs_alice: float | None = None
    k_irs_eve: float | None = None


@dataclass(frozen=True)
class ChannelSet:
    """Synthesized channels plus every deterministic part needed downstream.

    ``h_u``/``h_e`` are the nominal transmit-to-ground vectors (N,),
    ``H_i`` the transmit-to-surface matrix (M, N), and ``h_iu``/``h_ie``
    the surface-to-ground vectors (M,).  ``los_amp_*`` are the scalar
    weights multiplying the unit-modulus steering vectors in the Rician
    mixture, kept because the jitter model perturbs only that component.
    """

    geometry: NetworkGeometry
    params: ChannelParams
    angles: LinkAngles
    d_u: float
    d_e: float
    d_i: float
    k_u: float
    k_e: float
    k_i: float
    los_amp_u: float
    los_amp_e: float
    los_amp_i: float
    h_ul: np.ndarray
    h_el: np.ndarray
    h_il_arrival: np.ndarray
    h_il_departure: np.ndarray
    h_un: np.ndarray
    h_en: np.ndarray
    H_in: np.ndarray
    h_u: np.ndarray
    h_e: np.ndarray
    H_i: np.ndarray
    h_iu: np.ndarray
    h_ie: np.ndarray

    @property
    def n(self) -> int:
        return self.h_u.shape[0]

    @property
    def m(self) -> int:
        return self.H_i.shape[0]

    def g_u(self) -> np.ndarray:
        """Cascaded transmit->surface->Alice channel."""
        return cascaded_channel(self.h_iu, self.H_i)

    def g_e(self) -> np.ndarray:
        """Cascaded transmit->surface->Eve channel."""
        return cascaded_channel(self.h_ie, self.H_i)


def distances(geometry: NetworkGeometry) -> tuple[float, float, float]:
    """Euclidean link lengths UBS->Alice, UBS->Eve, UBS->IRS."""
    d_u = float(np.linalg.norm(geometry.ubs_pos - geometry.alice_pos))
    d_e = float(np.linalg.norm(geometry.ubs_pos - geometry.eve_pos))
    d_i = float(np.linalg.norm(geometry.ubs_pos - geometry.irs_pos))
    if min(d_u, d_e, d_i) <= 0.0:
        raise DegenerateGeometryError("coincident node positions")
    return d_u, d_e, d_i


def _link_angles(delta: np.ndarray, d: float) -> tuple[float, float]:
    """(omega, phi) of a link offset; omega in [0, pi], phi in (-pi, pi]."""
    if d <= 0.0:
        raise DegenerateGeometryError("zero-length link")
    omega = float(np.arccos(np.clip(delta[2] / d, -1.0, 1.0)))
    phi = float(np.arctan2(delta[1], delta[0]))
    return omega, phi


def nominal_angles(geometry: NetworkGeometry) -> LinkAngles:
    """Departure angles toward Alice/Eve/IRS and the surface arrival angles."""
    d_u, d_e, d_i = distances(geometry)
    om_u, ph_u = _link_angles(geometry.ubs_pos - geometry.alice_pos, d_u)
    om_e, ph_e = _link_angles(geometry.ubs_pos - geometry.eve_pos, d_e)
    om_i, ph_i = _link_angles(geometry.ubs_pos - geometry.irs_pos, d_i)
    delta_i = geometry.ubs_pos - geometry.irs_pos
    horiz = float(np.hypot(delta_i[0], delta_i[1]))
    arr_el = float(np.arcsin(np.clip(horiz / d_i, -1.0, 1.0)))
    arr_az = float(np.arctan2(delta_i[1], delta_i[0]))
    return LinkAngles(om_u, ph_u, om_e, ph_e, om_i, ph_i, arr_az, arr_el)


def _steering_from_cosines(cx: float, cy: float, n_x: int, n_y: int,
                           spacing: float, wavelength: float) -> np.ndarray:
    p = np.arange(n_x)[:, None]
    q = np.arange(n_y)[None, :]
    phase = -2.0 * np.pi * (spacing / wavelength) * (p * cx + q * cy)
    return np.exp(1j * phase).ravel()


def steering_ubs(omega: float, phi: float, n_x: int, n_y: int,
                 spacing: float, wavelength: float) -> np.ndarray:
    """Transmit-array response; entry (p, q) has phase
    -2*pi*(spacing/wavelength)*(p*cos(omega) + q*sin(phi)*sin(omega))."""
    if min(n_x, n_y) < 1:
        raise ValueError("array dimensions must be >= 1")
    return _steering_from_cosines(np.cos(omega), np.sin(phi) * np.sin(omega),
                                  n_x, n_y, spacing, wavelength)


def steering_irs(azimuth: float, elevation: float, m_x: int, m_y: int,
                 spacing: float, wavelength: float) -> np.ndarray:
    """Surface-array response; entry (p, q) has phase
    -2*pi*(spacing/wavelength)*sin(elevation)*(p*cos(azimuth) + q*sin(azimuth))."""
    if min(m_x, m_y) < 1:
        raise ValueError("array dimensions must be >= 1")
    se = np.sin(elevation)
    return _steering_from_cosines(np.cos(azimuth) * se, np.sin(azimuth) * se,
                                  m_x, m_y, spacing, wavelength)


def rician_k_factor(elevation: float) -> float:
    """Elevation-dependent K factor: K = 5 * exp(b * (pi/2 - elevation)),
    b = (2/pi) ln 3, for elevation in [0, pi/2]."""
    if not -1e-12 <= elevation <= np.pi / 2 + 1e-12:
        raise ValueError(f"elevation {elevation} outside [0, pi/2]")
    return K_FACTOR_A * float(np.exp(K_FACTOR_B * (np.pi / 2 - elevation)))


def _elevation(delta: np.ndarray, d: float) -> float:
    """Elevation above horizon of a downward link (clipped to [0, pi/2])."""
    return float(np.arcsin(np.clip(delta[2] / d, 0.0, 1.0)))


def _rician_weights(params: ChannelParams, d: float, k: float) -> tuple[float, float]:
    w_los = np.sqrt(params.a_los * d ** (-params.alpha_los) * k / (1.0 + k))
    w_nlos = np.sqrt(params.a_nlos * d ** (-params.alpha_nlos) / (1.0 + k))
    return float(w_los), float(w_nlos)


def _nlos(rng: np.random.Generator, *shape: int) -> np.ndarray:
    """Unit-variance circular complex Gaussian draws."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def synthesize_channels(geometry: NetworkGeometry,
                        rng_seed: int | np.random.Generator,
                        params: ChannelParams | None = None) -> ChannelSet:
    """Draw one Rician realization of every link.

    Deterministic given the seed; draw order is fixed (Alice, Eve, UBS->IRS,
    IRS->Alice, IRS->Eve).  K factors come from the per-link elevation unless
    overridden in ``params``.
    """
    params = params or ChannelParams()
    rng = rng_seed if isinstance(rng_seed, np.random.Generator) else np.random.default_rng(rng_seed)
    ang = nominal_angles(geometry)
    d_u, d_e, d_i = distances(geometry)
    g = geometry

    k_u = params.k_alice if params.k_alice is not None else rician_k_factor(
        _elevation(g.ubs_pos - g.alice_pos, d_u))
    k_e = params.k_eve if params.k_eve is not None else rician_k_factor(
        _elevation(g.ubs_pos - g.eve_pos, d_e))
    k_i = params.k_irs if params.k_irs is not None else rician_k_factor(
        _elevation(g.ubs_pos - g.irs_pos, d_i))

    h_ul = steering_ubs(ang.omega_alice, ang.phi_alice, g.n_x, g.n_y, g.spacing_ubs, g.wavelength)
    h_el = steering_ubs(ang.omega_eve, ang.phi_eve, g.n_x, g.n_y, g.spacing_ubs, g.wavelength)
    h_il_dep = steering_ubs(ang.omega_irs, ang.phi_irs, g.n_x, g.n_y, g.spacing_ubs, g.wavelength)
    h_il_arr = steering_irs(ang.irs_arrival_azimuth, ang.irs_arrival_elevation,
                            g.m_x, g.m_y, g.spacing_irs, g.wavelength)

    amp_u, nlos_u = _rician_weights(params, d_u, k_u)
    amp_e, nlos_e = _rician_weights(params, d_e, k_e)
    amp_i, nlos_i = _rician_weights(params, d_i, k_i)

    h_un = _nlos(rng, g.n)
    h_en = _nlos(rng, g.n)
    H_in = _nlos(rng, g.m, g.n)

    h_u = amp_u * h_ul + nlos_u * h_un
    h_e = amp_e * h_el + nlos_e * h_en
    H_i = amp_i * np.outer(h_il_arr, h_il_dep) + nlos_i * H_in

    h_iu = _ground_link(g, g.alice_pos, params, rng, params.k_irs_alice)
    h_ie = _ground_link(g, g.eve_pos, params, rng, params.k_irs_eve)

    return ChannelSet(
        geometry=g, params=params, angles=ang,
        d_u=d_u, d_e=d_e, d_i=d_i, k_u=k_u, k_e=k_e, k_i=k_i,
        los_amp_u=amp_u, los_amp_e=amp_e, los_amp_i=amp_i,
        h_ul=h_ul, h_el=h_el, h_il_arrival=h_il_arr, h_il_departure=h_il_dep,
        h_un=h_un, h_en=h_en, H_in=H_in,
        h_u=h_u, h_e=h_e, H_i=H_i, h_iu=h_iu, h_ie=h_ie,
    )


def _ground_link(g: NetworkGeometry, node_pos: np.ndarray, params: ChannelParams,
                 rng: np.random.Generator, k_override: float | None) -> np.ndarray:
    """Rician surface-to-ground vector, same mixture recipe as the air links."""
    delta = g.irs_pos - node_pos
    d = float(np.linalg.norm(delta))
    if d <= 0.0:
        raise DegenerateGeometryError("surface coincides with a ground node")
    k = k_override if k_override is not None else rician_k_factor(_elevation(delta, d))
    horiz = float(np.hypot(delta[0], delta[1]))
    elev = float(np.arcsin(np.clip(horiz / d, -1.0, 1.0)))
    azim = float(np.arctan2(delta[1], delta[0]))
    los = steering_irs(azim, elev, g.m_x, g.m_y, g.spacing_irs, g.wavelength)
    amp, nlos_w = _rician_weights(params, d, k)
    return amp * los + nlos_w * _nlos(rng, g.m)


def cascaded_channel(h_ix: np.ndarray, H_i: np.ndarray) -> np.ndarray:
    """Cascade G = diag(conj(h_ix)) @ H_i.

    With the reflection vector stored so that the observed cascade is
    ``v^H G``, the matching physical reflection matrix is diag(conj(v)).
    """
    h_ix = np.asarray(h_ix)
    H_i = np.asarray(H_i)
    if H_i.ndim != 2 or h_ix.shape != (H_i.shape[0],):
        raise DimensionMismatchError(
            f"expected ({H_i.shape[0]},) vector for a {H_i.shape} cascade, got {h_ix.shape}")
    return h_ix.conj()[:, None] * H_i
