"""Cone kernels for the interior-point solver.

Supported cone blocks: Zero, NonNeg, second-order (SOC), and real symmetric
PSD.  PSD blocks travel in svec form: upper triangle in row-major (i, j)
order with off-diagonal entries scaled by sqrt(2), so svec inner products
equal trace inner products.

Scaling objects implement the Nesterov-Todd point for each block: a
symmetric positive map W with W^2 z = s, plus the scaled point
lam = W z = W^{-T} s.  For SOC blocks W is the quadratic representation of
the Jordan square root of the NT point; for PSD blocks it is congruence by
a factor R with R^T Z R = R^{-1} S R^{-T} = diag(sigma).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import solve_triangular

_SQRT2 = np.sqrt(2.0)


@dataclass(frozen=True)
class Cone:
    """One cone block. ``dim`` is the vector length except for PSD blocks,
    where it is the matrix order."""

    kind: str  # "zero" | "nonneg" | "soc" | "psd"
    dim: int

    def __post_init__(self):
        if self.kind not in ("zero", "nonneg", "soc", "psd"):
            raise ValueError(f"unknown cone kind {self.kind!r}")
        if self.dim < 1:
            raise ValueError("cone dimension must be >= 1")
        if self.kind == "soc" and self.dim < 2:
            raise ValueError("second-order cone needs dimension >= 2")

    @property
    def rows(self) -> int:
        if self.kind == "psd":
            return self.dim * (self.dim + 1) // 2
        return self.dim

    @property
    def degree(self) -> int:
        if self.kind == "zero":
            return 0
        if self.kind == "soc":
            return 1
        return self.dim


@lru_cache(maxsize=None)
def _triu(d: int):
    return np.triu_indices(d)


def svec(mat: np.ndarray) -> np.ndarray:
    """Symmetric vectorization with sqrt(2)-scaled off-diagonals."""
    d = mat.shape[-1]
    iu, ju = _triu(d)
    out = np.array(mat[..., iu, ju], dtype=float)
    out[..., iu != ju] *= _SQRT2
    return out


def smat(vec: np.ndarray, d: int) -> np.ndarray:
    """Inverse of :func:`svec`; works on batched leading dimensions."""
    iu, ju = _triu(d)
    vals = np.array(vec, dtype=float, copy=True)
    off = iu != ju
    vals[..., off] /= _SQRT2
    out = np.zeros(vec.shape[:-1] + (d, d))
    out[..., iu, ju] = vals
    out[..., ju, iu] = vals
    return out


def svec_len(d: int) -> int:
    return d * (d + 1) // 2


def cone_margin(cone: Cone, v: np.ndarray) -> float:
    """How far inside the cone ``v`` sits (negative outside)."""
    if cone.kind == "zero":
        return 0.0
    if cone.kind == "nonneg":
        return float(np.min(v))
    if cone.kind == "soc":
        return float(v[0] - np.linalg.norm(v[1:]))
    return float(np.linalg.eigvalsh(smat(v, cone.dim)).min())


def cone_identity(cone: Cone) -> np.ndarray:
    if cone.kind == "nonneg":
        return np.ones(cone.dim)
    if cone.kind == "soc":
        e = np.zeros(cone.dim)
        e[0] = 1.0
        return e
    if cone.kind == "psd":
        return svec(np.eye(cone.dim))
    return np.zeros(cone.dim)


# ---------------------------------------------------------------------------
# SOC Jordan algebra helpers
# ---------------------------------------------------------------------------

def _soc_det(x: np.ndarray) -> float:
    return float(x[0] ** 2 - x[1:] @ x[1:])


def _soc_sqrt(x: np.ndarray) -> np.ndarray:
    t = np.sqrt(_soc_det(x))
    c = np.sqrt(2.0 * (x[0] + t))
    out = x.copy()
    out[0] += t
    return out / c


def _soc_inv(x: np.ndarray) -> np.ndarray:
    out = -x.copy()
    out[0] = x[0]
    return out / _soc_det(x)


def _soc_quad(x: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Quadratic representation P(x) u = 2 x (x.u) - det(x) J u."""
    ju = -u.copy()
    ju[0] = u[0]
    return 2.0 * x * (x @ u) - _soc_det(x) * ju


def _soc_quad_cols(x: np.ndarray, U: np.ndarray) -> np.ndarray:
    """P(x) applied to each column of U (dim, k)."""
    JU = -U.copy()
    JU[0] = U[0]
    return 2.0 * np.outer(x, x @ U) - _soc_det(x) * JU


# ---------------------------------------------------------------------------
# Scalings
# ---------------------------------------------------------------------------

class _NonNegScaling:
    def __init__(self, s, z):
        self.w2 = s / z
        self.w = np.sqrt(self.w2)
        self.lam = np.sqrt(s * z)

    def w_apply(self, u):
        return self.w * u

    def wt_apply(self, u):
        return self.w * u

    def winv_t_apply(self, u):
        return u / self.w

    def winv_t_cols(self, U):
        return U / self.w[:, None]

    def hinv_cols(self, U):
        return U / self.w2[:, None] if U.ndim == 2 else U / self.w2

    def h_apply(self, u):
        return self.w2 * u

    def jordan(self, u, v):
        return u * v

    def lam_sq(self):
        return self.lam ** 2

    def lam_div(self, d):
        return d / self.lam

    def max_step(self, u):
        neg = u < 0
        if not np.any(neg):
            return np.inf
        return float(np.min(-self.lam[neg] / u[neg]))


class _SocScaling:
    def __init__(self, s, z):
        s_half = _soc_sqrt(s)
        y = _soc_quad(s_half, z)
        q = _soc_quad(s_half, _soc_sqrt(_soc_inv(y)))
        self.q = q
        self.q_half = _soc_sqrt(q)
        self.q_half_inv = _soc_inv(self.q_half)
        self.q_inv = _soc_inv(q)
        self.lam = _soc_quad(self.q_half, z)

    def w_apply(self, u):
        return _soc_quad(self.q_half, u)

    def wt_apply(self, u):
        return _soc_quad(self.q_half, u)

    def winv_t_apply(self, u):
        return _soc_quad(self.q_half_inv, u)

    def winv_t_cols(self, U):
        return _soc_quad_cols(self.q_half_inv, U)

    def hinv_cols(self, U):
        if U.ndim == 1:
            return _soc_quad(self.q_inv, U)
        return _soc_quad_cols(self.q_inv, U)

    def h_apply(self, u):
        return _soc_quad(self.q, u)

    def jordan(self, u, v):
        out = u * v[0] + v * u[0]
        out[0] = u @ v
        return out

    def lam_sq(self):
        return self.jordan(self.lam, self.lam)

    def lam_div(self, d):
        lam = self.lam
        det = _soc_det(lam)
        x0 = (lam[0] * d[0] - lam[1:] @ d[1:]) / det
        rest = (d[1:] - x0 * lam[1:]) / lam[0]
        out = np.empty_like(d)
        out[0] = x0
        out[1:] = rest
        return out

    def max_step(self, u):
        lam = self.lam
        a = _soc_det(u)
        bq = 2.0 * (lam[0] * u[0] - lam[1:] @ u[1:])
        cq = _soc_det(lam)
        root = _smallest_positive_root(a, bq, cq)
        if u[0] < 0:
            root = min(root, -lam[0] / u[0])
        return root


def _smallest_positive_root(a: float, b: float, c: float) -> float:
    """Smallest positive root of a*t^2 + b*t + c (c > 0), inf if none."""
    if abs(a) < 1e-300:
        if b >= 0:
            return np.inf
        return -c / b
    disc = b * b - 4.0 * a * c
    if a > 0 and (disc < 0 or b >= 0):
        return np.inf
    if disc < 0:
        return np.inf
    sd = np.sqrt(disc)
    # numerically stable pair
    if b >= 0:
        r1 = (-b - sd) / (2.0 * a)
        r2 = (2.0 * c) / (-b - sd)
    else:
        r1 = (2.0 * c) / (-b + sd)
        r2 = (-b + sd) / (2.0 * a)
    roots = [r for r in (r1, r2) if r > 0]
    return min(roots) if roots else np.inf


class _PsdScaling:
    def __init__(self, s, z, d):
        self.d = d
        S = smat(s, d)
        Z = smat(z, d)
        ls = np.linalg.cholesky(S)
        lz = np.linalg.cholesky(Z)
        u_svd, sig, vt = np.linalg.svd(lz.T @ ls)
        self.sigma = sig
        v = vt.T
        self.R = ls @ v / np.sqrt(sig)
        self.Rinv = (v * np.sqrt(sig)).T @ _tri_inv(ls)
        self.Q = self.R @ self.R.T
        self.Qi = self.Rinv.T @ self.Rinv
        self.lam = svec(np.diag(sig))

    def w_apply(self, u):
        U = smat(u, self.d)
        return svec(self.R.T @ U @ self.R)

    def wt_apply(self, u):
        U = smat(u, self.d)
        return svec(self.R @ U @ self.R.T)

    def winv_t_apply(self, u):
        U = smat(u, self.d)
        return svec(self.Rinv @ U @ self.Rinv.T)

    def winv_t_mats(self, mats):
        """W^{-T} on a batch in matrix form; returns svec rows (svlen, k)."""
        out = np.matmul(np.matmul(self.Rinv, mats), self.Rinv.T)
        return svec(out).T

    def hinv_cols(self, U):
        if U.ndim == 1:
            return svec(self.Qi @ smat(U, self.d) @ self.Qi)
        mats = smat(U.T, self.d)
        out = np.matmul(np.matmul(self.Qi, mats), self.Qi)
        return svec(out).T

    def hinv_mats(self, mats):
        """H^{-1} on a batch already in matrix form (k, d, d)."""
        return np.matmul(np.matmul(self.Qi, mats), self.Qi)

    def h_apply(self, u):
        U = smat(u, self.d)
        return svec(self.Q @ U @ self.Q)

    def jordan(self, u, v):
        U = smat(u, self.d)
        V = smat(v, self.d)
        M = U @ V
        return svec(0.5 * (M + M.T))

    def lam_sq(self):
        return svec(np.diag(self.sigma ** 2))

    def lam_div(self, dvec):
        D = smat(dvec, self.d)
        denom = 0.5 * (self.sigma[:, None] + self.sigma[None, :])
        return svec(D / denom)

    def max_step(self, u):
        U = smat(u, self.d)
        rs = 1.0 / np.sqrt(self.sigma)
        M = U * np.outer(rs, rs)
        lo = float(np.linalg.eigvalsh(M).min())
        if lo >= 0:
            return np.inf
        return 1.0 / (-lo)


def _tri_inv(L: np.ndarray) -> np.ndarray:
    return solve_triangular(L, np.eye(L.shape[0]), lower=True)


def make_scaling(cone: Cone, s: np.ndarray, z: np.ndarray):
    if cone.kind == "nonneg":
        return _NonNegScaling(s, z)
    if cone.kind == "soc":
        return _SocScaling(s, z)
    if cone.kind == "psd":
        return _PsdScaling(s, z, cone.dim)
    return None  # zero cone carries no scaling


class _IdentityScaling:
    """Unit scaling used for the least-squares initial point."""

    def hinv_cols(self, U):
        return U

    def hinv_mats(self, mats):
        return mats

    def h_apply(self, u):
        return u

    def winv_t_cols(self, U):
        return U

    def winv_t_mats(self, mats):
        return svec(mats).T
