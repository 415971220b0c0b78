"""Primal-dual interior-point solver for linear cone programs.

Problem form (all data dense):

    minimize    c' x
    subject to  A x + s = b,   s in K,

with K a product of Zero, NonNeg, second-order and PSD blocks (rows of A
partitioned in cone-list order).  The dual is  max -b'y  s.t.  A'y + c = 0,
y in K*.  The algorithm runs Mehrotra predictor-corrector steps on the
homogeneous self-dual embedding with Nesterov-Todd scaling, so it returns
either an optimal primal-dual pair or an infeasibility certificate.

Dense linear algebra throughout; each iteration factors the (small) normal
matrix A' H^{-1} A.  Intended for problems with few decision variables and
possibly large cone blocks.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.linalg import lu_factor, lu_solve, solve_triangular

from ..exceptions import DimensionMismatchError, NonHermitianError
from .cones import (
    Cone,
    cone_identity,
    cone_margin,
    make_scaling,
    smat,
    svec,
    svec_len,
)

_STEP_TO_BOUNDARY = 0.99


class SolveStatus(Enum):
    OPTIMAL = "Optimal"
    PRIMAL_INFEASIBLE = "PrimalInfeasible"
    DUAL_INFEASIBLE = "DualInfeasible"
    MAX_ITER = "MaxIter"
    NUMERICAL_FAILURE = "NumericalFailure"


@dataclass(frozen=True)
class ConicProblem:
    """Linear-objective cone program over dense data."""

    c: np.ndarray
    A: np.ndarray
    b: np.ndarray
    cones: tuple[Cone, ...]

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.c, dtype=float))
        A = np.atleast_2d(np.asarray(self.A, dtype=float))
        b = np.atleast_1d(np.asarray(self.b, dtype=float))
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "cones", tuple(self.cones))
        rows = sum(k.rows for k in self.cones)
        if A.shape != (rows, c.shape[0]):
            raise DimensionMismatchError(
                f"A has shape {A.shape}, expected ({rows}, {c.shape[0]})")
        if b.shape != (rows,):
            raise DimensionMismatchError(f"b has shape {b.shape}, expected ({rows},)")

    @property
    def num_vars(self) -> int:
        return self.c.shape[0]

    @property
    def num_rows(self) -> int:
        return self.b.shape[0]

    def to_json(self) -> str:
        """Debug dump: dense row-major arrays plus the cone list."""
        return json.dumps({
            "n": self.num_vars,
            "c": self.c.tolist(),
            "b": self.b.tolist(),
            "A": self.A.tolist(),
            "cones": [{"kind": k.kind, "dim": k.dim} for k in self.cones],
        })

    @classmethod
    def from_json(cls, text: str) -> "ConicProblem":
        data = json.loads(text)
        cones = tuple(Cone(k["kind"], k["dim"]) for k in data["cones"])
        return cls(np.array(data["c"]), np.array(data["A"]), np.array(data["b"]), cones)


@dataclass(frozen=True)
class ConicSolution:
    x: np.ndarray
    y: np.ndarray
    s: np.ndarray
    status: SolveStatus
    objective: float
    primal_residual: float
    dual_residual: float
    gap: float
    iterations: int

    @property
    def optimal(self) -> bool:
        return self.status is SolveStatus.OPTIMAL


def hermitian_to_real(H: np.ndarray) -> np.ndarray:
    """Real embedding [[Re H, -Im H], [Im H, Re H]] of a Hermitian matrix.

    The embedding is PSD exactly when H is, and each eigenvalue of H
    appears twice.
    """
    H = np.asarray(H)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise DimensionMismatchError(f"expected square matrix, got {H.shape}")
    scale = max(1.0, float(np.abs(H).max()))
    if np.abs(H - H.conj().T).max() > 1e-10 * scale:
        raise NonHermitianError("matrix is not Hermitian within 1e-10")
    re, im = H.real, H.imag
    top = np.hstack([re, -im])
    bot = np.hstack([im, re])
    out = np.vstack([top, bot])
    return 0.5 * (out + out.T)


def kkt_residuals(problem: ConicProblem, x: np.ndarray, y: np.ndarray,
                  s: np.ndarray | None = None) -> tuple[float, float, float]:
    """Scale-normalized primal/dual residuals and relative gap of a point."""
    if s is None:
        s = problem.b - problem.A @ x
    rp = np.linalg.norm(problem.A @ x + s - problem.b) / (1.0 + np.linalg.norm(problem.b))
    rd = np.linalg.norm(problem.A.T @ y + problem.c) / (1.0 + np.linalg.norm(problem.c))
    pobj = float(problem.c @ x)
    dobj = float(-problem.b @ y)
    gap = abs(pobj - dobj) / max(1.0, abs(pobj), abs(dobj))
    return float(rp), float(rd), float(gap)


@dataclass
class _Blocks:
    """Row partition plus cached matrix forms of the PSD slices of A."""

    cones: tuple[Cone, ...]
    offsets: list[int] = field(default_factory=list)
    psd_tensors: dict[int, np.ndarray] = field(default_factory=dict)

    @classmethod
    def build(cls, problem: ConicProblem) -> "_Blocks":
        blocks = cls(problem.cones)
        off = 0
        for idx, cone in enumerate(problem.cones):
            blocks.offsets.append(off)
            if cone.kind == "psd":
                sl = problem.A[off:off + cone.rows, :]
                mats = smat(sl.T, cone.dim)  # (n, d, d)
                blocks.psd_tensors[idx] = mats
            off += cone.rows
        blocks.total_rows = off
        return blocks

    def slices(self):
        for idx, cone in enumerate(self.cones):
            yield idx, cone, slice(self.offsets[idx], self.offsets[idx] + cone.rows)


class _Kkt:
    """One factorization of the reduced Newton system for fixed scalings.

    Eliminating the scaled slack leaves  A' H^{-1} A dx = r  on the
    non-zero-cone rows.  The normal matrix is formed implicitly through an
    economy QR of B = W^{-T} A, which keeps the effective condition number
    at sqrt of the normal-equations one.
    """

    def __init__(self, problem: ConicProblem, blocks: _Blocks, scalings: list):
        self.problem = problem
        self.blocks = blocks
        self.scalings = scalings
        n = problem.num_vars
        A = problem.A
        zero_rows = [sl for idx, cone, sl in blocks.slices() if cone.kind == "zero"]
        self.zero_slices = zero_rows
        self.m0 = sum(sl.stop - sl.start for sl in zero_rows)

        parts = []
        for idx, cone, sl in blocks.slices():
            if cone.kind == "zero":
                continue
            sc = scalings[idx]
            if cone.kind == "psd":
                mats = blocks.psd_tensors[idx]
                parts.append(sc.winv_t_mats(mats))
            else:
                parts.append(sc.winv_t_cols(A[sl, :]))
        self.B = np.vstack(parts) if parts else np.zeros((0, n))
        self._factor()
        if self.m0:
            self.A0 = np.vstack([A[sl, :] for sl in zero_rows])
            # Schur complement of the bordered system [[M, A0'], [A0, 0]].
            MinvA0t = self._m_solve(self.A0.T)
            S = self.A0 @ MinvA0t
            S = 0.5 * (S + S.T)
            self.S_lu = lu_factor(S)
            self.MinvA0t = MinvA0t

    def _factor(self):
        n = self.problem.num_vars
        base = 1e-12 * max(1.0, float(np.abs(self.B).max()) if self.B.size else 1.0)
        jitter = 0.0
        if self.B.shape[0] < n:
            jitter = base
        for attempt in range(6):
            Baug = self.B if jitter == 0.0 else np.vstack([self.B, jitter * np.eye(n)])
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                R = np.linalg.qr(Baug, mode="r")
            dr = np.abs(np.diag(R))
            if R.shape == (n, n) and np.all(np.isfinite(dr)) \
                    and dr.min() > 1e-14 * max(1.0, dr.max()):
                self.R = R
                return
            jitter = base * (100.0 ** attempt)
        raise np.linalg.LinAlgError("KKT factorization failed")

    def _m_solve(self, rhs: np.ndarray) -> np.ndarray:
        """(A' H^{-1} A)^{-1} rhs via the QR factor."""
        y = solve_triangular(self.R, rhs, trans="T", lower=False)
        return solve_triangular(self.R, y, lower=False)

    def hinv(self, rhs: np.ndarray) -> np.ndarray:
        """Blockwise H^{-1} on the non-zero-cone rows (zero rows map to 0)."""
        out = np.zeros_like(rhs)
        for idx, cone, sl in self.blocks.slices():
            if cone.kind == "zero":
                continue
            out[sl] = self.scalings[idx].hinv_cols(rhs[sl])
        return out

    def h_full(self, vec: np.ndarray) -> np.ndarray:
        """Blockwise H (zero-cone rows map to 0)."""
        out = np.zeros_like(vec)
        for idx, cone, sl in self.blocks.slices():
            if cone.kind == "zero":
                continue
            out[sl] = self.scalings[idx].h_apply(vec[sl])
        return out

    def _solve_once(self, rhs1: np.ndarray, rhs2: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        problem = self.problem
        A = problem.A
        t = self.hinv(rhs2)
        rr = rhs1 + A.T @ t
        if self.m0:
            r0 = np.concatenate([rhs2[sl] for sl in self.zero_slices])
            u = self._m_solve(rr)
            dy0 = lu_solve(self.S_lu, self.A0 @ u - r0)
            dx = u - self.MinvA0t @ dy0
        else:
            dx = self._m_solve(rr)
            dy0 = None
        resid = A @ dx - rhs2
        dy = self.hinv(resid)
        if self.m0:
            pos = 0
            for sl in self.zero_slices:
                k = sl.stop - sl.start
                dy[sl] = dy0[pos:pos + k]
                pos += k
        return dx, dy

    def solve(self, rhs1: np.ndarray, rhs2: np.ndarray,
              refine: int = 2) -> tuple[np.ndarray, np.ndarray]:
        """Solve  A' dy = rhs1,  A dx - H dy = rhs2  (zero rows: A dx = rhs2),
        with iterative refinement against the unreduced system."""
        A = self.problem.A
        dx, dy = self._solve_once(rhs1, rhs2)
        scale = max(1.0, float(np.linalg.norm(rhs1)), float(np.linalg.norm(rhs2)))
        prev_err = np.inf
        for _ in range(refine):
            res1 = rhs1 - A.T @ dy
            res2 = rhs2 - (A @ dx - self.h_full(dy))
            if self.m0:
                for sl in self.zero_slices:
                    res2[sl] = rhs2[sl] - A[sl, :] @ dx
            err = max(np.abs(res1).max(initial=0.0), np.abs(res2).max(initial=0.0))
            if err <= 1e-13 * scale or err >= 0.5 * prev_err:
                break
            prev_err = err
            cx, cy = self._solve_once(res1, res2)
            dx = dx + cx
            dy = dy + cy
        return dx, dy


def _shift_interior(cone: Cone, v: np.ndarray) -> np.ndarray:
    """Move a point along the identity until its cone margin is >= 1."""
    if cone.kind == "zero":
        return np.zeros_like(v)
    margin = cone_margin(cone, v)
    if margin >= 1.0:
        return v
    return v + (1.0 - margin) * cone_identity(cone)


def solve(problem: ConicProblem, tol: float = 1e-8, max_iter: int = 200) -> ConicSolution:
    """Solve a cone program; never raises on valid, well-posed input."""
    n = problem.num_vars
    m = problem.num_rows
    A, b, c = problem.A, problem.b, problem.c
    blocks = _Blocks.build(problem)
    cones = problem.cones
    degree = sum(k.degree for k in cones)

    norm_b = max(1.0, float(np.linalg.norm(b)))
    norm_c = max(1.0, float(np.linalg.norm(c)))

    # Least-squares initial point (unit scaling), then shift into the cones.
    try:
        from .cones import _IdentityScaling
        ident = [_IdentityScaling() if k.kind != "zero" else None for k in cones]
        kkt0 = _Kkt(problem, blocks, ident)
        x, y_ls = kkt0.solve(np.zeros(n), b.copy())
        s_ls = b - A @ x
        xd, yd = kkt0.solve(-c, np.zeros(m))
        y = yd
    except np.linalg.LinAlgError:
        x = np.zeros(n)
        s_ls = b.copy()
        y = np.zeros(m)

    s = np.zeros(m)
    z = np.zeros(m)
    for idx, cone, sl in blocks.slices():
        s[sl] = _shift_interior(cone, s_ls[sl])
        z[sl] = _shift_interior(cone, y[sl])
    y = z
    tau, kappa = 1.0, 1.0

    def split_apply(fn_name, scalings, vec):
        out = np.zeros_like(vec)
        for idx, cone, sl in blocks.slices():
            if cone.kind == "zero":
                continue
            out[sl] = getattr(scalings[idx], fn_name)(vec[sl])
        return out

    best = None
    status = SolveStatus.MAX_ITER
    iterations = 0

    for it in range(max_iter):
        iterations = it
        r_d = A.T @ y + c * tau
        r_p = A @ x + s - b * tau
        r_g = kappa + c @ x + b @ y

        if not np.all(np.isfinite(r_d)) or not np.all(np.isfinite(r_p)):
            status = SolveStatus.NUMERICAL_FAILURE
            break

        xh, yh, sh = x / tau, y / tau, s / tau
        pres = np.linalg.norm(A @ xh + sh - b) / norm_b
        dres = np.linalg.norm(A.T @ yh + c) / norm_c
        pobj = float(c @ xh)
        dobj = float(-b @ yh)
        gap = float(sh @ yh)
        relgap = gap / max(1.0, abs(pobj), abs(dobj))

        if pres <= tol and dres <= tol and relgap <= tol:
            rp, rd, rg = kkt_residuals(problem, xh, yh, sh)
            return ConicSolution(xh, yh, sh, SolveStatus.OPTIMAL, pobj,
                                 rp, rd, relgap, it)

        by = float(b @ y)
        cx = float(c @ x)
        if by < 0 and np.linalg.norm(A.T @ y) / norm_c <= tol * (-by):
            yc = y / (-by)
            return ConicSolution(x * np.nan, yc, s * np.nan,
                                 SolveStatus.PRIMAL_INFEASIBLE, np.inf,
                                 np.nan, np.nan, np.nan, it)
        if cx < 0 and np.linalg.norm(A @ x + s) / norm_b <= tol * (-cx):
            xc = x / (-cx)
            return ConicSolution(xc, y * np.nan, s / (-cx),
                                 SolveStatus.DUAL_INFEASIBLE, -np.inf,
                                 np.nan, np.nan, np.nan, it)

        merit = max(pres, dres, relgap)
        if best is None or merit < best[-1]:
            best = (xh, yh, sh, pobj, pres, dres, relgap, it, merit)
        mu = (s @ y + tau * kappa) / (degree + 1)

        try:
            scalings = [make_scaling(k, s[sl], y[sl])
                        for (idx, k, sl) in blocks.slices()]
            kkt = _Kkt(problem, blocks, scalings)
            vx, vy = kkt.solve(-c, b.copy())
        except (np.linalg.LinAlgError, ValueError):
            status = SolveStatus.NUMERICAL_FAILURE
            break
        denom_tau = float(c @ vx + b @ vy - kappa / tau)
        if not np.isfinite(denom_tau) or denom_tau >= 0:
            status = SolveStatus.NUMERICAL_FAILURE
            break

        lam = np.zeros(m)
        for idx, cone, sl in blocks.slices():
            if cone.kind != "zero":
                lam[sl] = scalings[idx].lam

        def newton(ds_scaled, d_tk):
            rhs1 = -r_d
            rhs2 = -r_p + split_apply("wt_apply", scalings, ds_scaled)
            ux, uy = kkt.solve(rhs1, rhs2)
            rhs3 = -r_g + d_tk / tau
            dtau = (rhs3 - c @ ux - b @ uy) / denom_tau
            dx = ux + dtau * vx
            dy = uy + dtau * vy
            # Recover ds from the primal equation so it holds to machine
            # precision; the scaled complementarity absorbs solve noise.
            ds = -r_p + b * dtau - A @ dx
            for idx, cone, sl in blocks.slices():
                if cone.kind == "zero":
                    ds[sl] = 0.0
            su = split_apply("winv_t_apply", scalings, ds)
            zu = split_apply("w_apply", scalings, dy)
            dkappa = -(d_tk + kappa * dtau) / tau
            return dx, dy, ds, dtau, dkappa, su, zu

        try:
            # Predictor (affine) step: ds_scaled = lam, d_tk = tau*kappa.
            aff = newton(lam.copy(), tau * kappa)
            dx_a, dy_a, ds_a, dtau_a, dkap_a, su_a, zu_a = aff

            alpha_aff = _max_step(blocks, scalings, su_a, zu_a, tau, dtau_a, kappa, dkap_a)
            a = min(1.0, alpha_aff)
            mu_aff = ((lam + a * su_a) @ (lam + a * zu_a) +
                      (tau + a * dtau_a) * (kappa + a * dkap_a)) / (degree + 1)
            sigma = min(1.0, max(0.0, (mu_aff / mu))) ** 3

            # Corrector: d = lam o lam + (W^{-T}ds_a) o (W dz_a) - sigma*mu*e.
            dvec = np.zeros(m)
            for idx, cone, sl in blocks.slices():
                if cone.kind == "zero":
                    continue
                sc = scalings[idx]
                dblk = sc.lam_sq() + sc.jordan(su_a[sl], zu_a[sl]) \
                    - sigma * mu * cone_identity(cone)
                dvec[sl] = sc.lam_div(dblk)
            d_tk = tau * kappa + dtau_a * dkap_a - sigma * mu

            comb = newton(dvec, d_tk)
        except (np.linalg.LinAlgError, ValueError):
            status = SolveStatus.NUMERICAL_FAILURE
            break
        dx_c, dy_c, ds_c, dtau_c, dkap_c, su_c, zu_c = comb

        alpha_max = _max_step(blocks, scalings, su_c, zu_c, tau, dtau_c, kappa, dkap_c)
        alpha = min(1.0, _STEP_TO_BOUNDARY * alpha_max)
        if alpha <= 1e-13:
            status = SolveStatus.NUMERICAL_FAILURE
            break

        x = x + alpha * dx_c
        y = y + alpha * dy_c
        s = s + alpha * ds_c
        tau += alpha * dtau_c
        kappa += alpha * dkap_c
        if tau <= 0 or kappa < 0 or not np.isfinite(tau):
            status = SolveStatus.NUMERICAL_FAILURE
            break

    if best is not None:
        xh, yh, sh, pobj, pres, dres, relgap, it, _ = best
        return ConicSolution(xh, yh, sh, status, pobj, pres, dres, relgap, iterations)
    return ConicSolution(np.full(n, np.nan), np.full(m, np.nan), np.full(m, np.nan),
                         SolveStatus.NUMERICAL_FAILURE, np.nan, np.nan, np.nan,
                         np.nan, iterations)


def _max_step(blocks: _Blocks, scalings, su, zu, tau, dtau, kappa, dkappa) -> float:
    alpha = np.inf
    for idx, cone, sl in blocks.slices():
        if cone.kind == "zero":
            continue
        sc = scalings[idx]
        alpha = min(alpha, sc.max_step(su[sl]), sc.max_step(zu[sl]))
    if dtau < 0:
        alpha = min(alpha, -tau / dtau)
    if dkappa < 0:
        alpha = min(alpha, -kappa / dkappa)
    return alpha
