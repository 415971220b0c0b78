"""Small modeling layer that assembles dense cone programs.

Variables are contiguous slices of one real decision vector.  Constraints
are supplied as affine expressions: a constant plus per-variable coefficient
blocks.  Hermitian matrix constraints are embedded into real symmetric PSD
blocks via :func:`hermitian_to_real`.

``affine_matrix_probe`` recovers the coefficient form of an affine
matrix-valued function by evaluating it at zero and at unit basis points,
which keeps a single authoritative implementation of the constraint
mathematics.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..exceptions import DimensionMismatchError, NonHermitianError
from .cones import Cone, svec
from .solver import ConicProblem, hermitian_to_real


@dataclass(frozen=True)
class Var:
    name: str
    offset: int
    size: int

    @property
    def sl(self) -> slice:
        return slice(self.offset, self.offset + self.size)


class LinExpr:
    """const + sum_k coeffs[var] @ x[var]; vector valued of length ``rows``."""

    def __init__(self, rows: int, const: np.ndarray | None = None):
        self.rows = rows
        self.const = np.zeros(rows) if const is None else np.asarray(const, dtype=float)
        if self.const.shape != (rows,):
            raise DimensionMismatchError("constant term has wrong length")
        self.coeffs: dict[Var, np.ndarray] = {}

    def add_term(self, var: Var, coeff: np.ndarray) -> "LinExpr":
        coeff = np.atleast_2d(np.asarray(coeff, dtype=float))
        if coeff.shape != (self.rows, var.size):
            raise DimensionMismatchError(
                f"coefficient for {var.name} has shape {coeff.shape}, "
                f"expected ({self.rows}, {var.size})")
        if var in self.coeffs:
            self.coeffs[var] = self.coeffs[var] + coeff
        else:
            self.coeffs[var] = coeff
        return self


class ProblemBuilder:
    """Accumulates variables, a linear objective, and cone constraints."""

    def __init__(self):
        self._vars: list[Var] = []
        self._n = 0
        self._obj: dict[Var, np.ndarray] = {}
        self._rows: list[tuple[Cone, LinExpr]] = []

    def add_var(self, name: str, size: int = 1) -> Var:
        var = Var(name, self._n, size)
        self._vars.append(var)
        self._n += size
        return var

    def minimize(self, terms: dict[Var, np.ndarray]):
        self._obj = {v: np.atleast_1d(np.asarray(cf, dtype=float)) for v, cf in terms.items()}

    def expr(self, rows: int, const=None) -> LinExpr:
        return LinExpr(rows, const)

    def add_zero(self, expr: LinExpr):
        self._rows.append((Cone("zero", expr.rows), expr))

    def add_nonneg(self, expr: LinExpr):
        """expr >= 0 elementwise."""
        self._rows.append((Cone("nonneg", expr.rows), expr))

    def add_soc(self, expr: LinExpr):
        """First entry bounds the Euclidean norm of the rest."""
        self._rows.append((Cone("soc", expr.rows), expr))

    def add_psd_real(self, const: np.ndarray, coeffs: dict[Var, np.ndarray]):
        """Real symmetric affine block const + sum x_i coeff_i >= 0 (PSD).

        Every coefficient matrix must be symmetric within 1e-12 (relative).
        """
        d = const.shape[0]

        def check(name, mat):
            scale = max(1.0, float(np.abs(mat).max()))
            if np.abs(mat - np.swapaxes(mat, -1, -2)).max() > 1e-12 * scale:
                raise NonHermitianError(f"PSD block data for {name!r} is not symmetric")

        check("const", const)
        expr = LinExpr(svec_rows(d), svec(const))
        for var, stack in coeffs.items():
            stack = _as_stack(stack, var.size, d)
            check(var.name, stack)
            expr.add_term(var, svec(stack).T)
        self._rows.append((Cone("psd", d), expr))

    def add_psd_hermitian(self, const: np.ndarray, coeffs: dict[Var, np.ndarray]):
        """Hermitian affine block, embedded into a real PSD block."""
        d = const.shape[0]
        real_const = hermitian_to_real(const)
        real_coeffs = {}
        for var, stack in coeffs.items():
            stack = _as_stack(stack, var.size, d)
            real_coeffs[var] = np.stack([hermitian_to_real(m) for m in stack])
        self.add_psd_real(real_const, real_coeffs)

    def build(self) -> ConicProblem:
        m = sum(cone.rows for cone, _ in self._rows)
        A = np.zeros((m, self._n))
        b = np.zeros(m)
        cones = []
        row = 0
        for cone, expr in self._rows:
            r = cone.rows
            b[row:row + r] = expr.const
            for var, coeff in expr.coeffs.items():
                A[row:row + r, var.sl] -= coeff
            cones.append(cone)
            row += r
        c = np.zeros(self._n)
        for var, coeff in self._obj.items():
            c[var.sl] = coeff
        return ConicProblem(c, A, b, tuple(cones))


def svec_rows(d: int) -> int:
    return d * (d + 1) // 2


def _as_stack(mats: np.ndarray, size: int, d: int) -> np.ndarray:
    mats = np.asarray(mats)
    if mats.ndim == 2:
        mats = mats[None, :, :]
    if mats.shape != (size, d, d):
        raise DimensionMismatchError(
            f"coefficient stack has shape {mats.shape}, expected ({size}, {d}, {d})")
    return mats


def affine_matrix_probe(fn, var_sizes: dict[str, int], d: int,
                        hermitian: bool = True):
    """Recover (const, coeffs) of an affine matrix map by basis evaluation.

    ``fn`` maps a dict of real vectors (one per name in ``var_sizes``) to a
    (d, d) matrix and must be affine in its inputs.
    """
    zeros = {name: np.zeros(size) for name, size in var_sizes.items()}
    const = fn(**zeros)
    coeffs: dict[str, np.ndarray] = {}
    for name, size in var_sizes.items():
        stack = np.empty((size, d, d), dtype=const.dtype)
        for k in range(size):
            point = dict(zeros)
            basis = np.zeros(size)
            basis[k] = 1.0
            point[name] = basis
            stack[k] = fn(**point) - const
        coeffs[name] = stack
    return const, coeffs
