"""Construction of the signal-power minorant used by both robust subproblems.

The received signal power |((h+dh)^H + v^H (G+dG)) w|^2 is lower-bounded by
a quadratic form in the stacked channel error x = [dh; vec(conj(dG))] whose
coefficients are affine in whichever block (w or v) is being optimized while
the other is frozen at the previous iterate.  The bound comes from the
scalar inequality |t|^2 >= 2 Re(conj(t_k) t) - |t_k|^2 applied at the
iterate (w_k, v_k), expanded in the channel error.
"""

from __future__ import annotations

import numpy as np

from ..geometry_channel import ChannelSet
from .types import Lemma1Terms


def stacked_direction(w: np.ndarray, v: np.ndarray) -> np.ndarray:
    """u(w, v) = [w; kron(w, conj(v))], aligned with the error stack."""
    return np.concatenate([w, np.kron(w, v.conj())])


def error_stack(dh: np.ndarray, dG: np.ndarray) -> np.ndarray:
    """x = [dh; vec(conj(dG))] with column-major matrix vectorization."""
    return np.concatenate([dh, dG.conj().ravel(order="F")])


def exact_signal_power(h_bar: np.ndarray, g_bar: np.ndarray, w: np.ndarray,
                       v: np.ndarray, dh: np.ndarray, dG: np.ndarray) -> float:
    """|((h+dh)^H + v^H (G+dG)) w|^2 evaluated directly."""
    amp = np.vdot(h_bar + dh, w) + np.vdot(v, (g_bar + dG) @ w)
    return float(np.abs(amp) ** 2)


def lemma1_terms(link: str, w_k: np.ndarray, v_k: np.ndarray,
                 channels: ChannelSet, w: np.ndarray | None = None,
                 v: np.ndarray | None = None) -> Lemma1Terms:
    """Minorant coefficients for ``link`` in {'alice', 'eve'}.

    ``w``/``v`` are the free-block values; omitting one freezes it at the
    iterate, matching the two alternating subproblems.  All returned
    coefficients are jointly real-affine in (Re w, Im w) with v frozen, or
    in (Re v, Im v) with w frozen.
    """
    if link == "alice":
        h_bar, g_bar = channels.h_u, channels.g_u()
    elif link == "eve":
        h_bar, g_bar = channels.h_e, channels.g_e()
    else:
        raise ValueError(f"unknown link {link!r}")
    w = w_k if w is None else w
    v = v_k if v is None else v

    u_k = stacked_direction(w_k, v_k)
    u = stacked_direction(w, v)
    e_k = h_bar + g_bar.conj().T @ v_k          # h + G^H v_k
    e_free = h_bar + g_bar.conj().T @ v         # h + G^H v
    s_k = np.vdot(e_k, w_k)                     # (h^H + v_k^H G) w_k
    t_free = np.vdot(e_free, w)                 # (h^H + v^H G) w

    C = np.outer(u_k, u.conj())
    Z = np.outer(u_k, u_k.conj())

    def vec_conj(mat):
        return mat.conj().ravel(order="F")

    c1 = np.concatenate([
        w * np.vdot(w_k, e_k),
        vec_conj(s_k * np.outer(v, w.conj())),
    ])
    c2 = np.concatenate([
        w_k * np.vdot(w, e_free),
        vec_conj(t_free * np.outer(v_k, w_k.conj())),
    ])
    z_vec = np.concatenate([
        w_k * np.vdot(w_k, e_k),
        vec_conj(s_k * np.outer(v_k, w_k.conj())),
    ])
    c_scalar = s_k * np.vdot(w, e_free)
    z_scalar = float(np.abs(s_k) ** 2)

    A_tilde = C + C.conj().T - Z
    a_tilde = c1 + c2 - z_vec
    a0 = 2.0 * float(c_scalar.real) - z_scalar
    return Lemma1Terms(A_tilde=A_tilde, a_tilde=a_tilde, a0_tilde=a0,
                       C=C, Z=Z, c1=c1, c2=c2, z_vec=z_vec,
                       c_scalar=complex(c_scalar), z_scalar=z_scalar)
