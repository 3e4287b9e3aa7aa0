"""Evaluation of the characteristic operator by three independent routes.

The characteristic operator of an SLH triple is

    T(s) = S - L (sI + 1/2 L*L + iH)^-1 L* S,

an n x n matrix of m x m plant operators.  It is unitary on the imaginary
axis wherever i*omega lies in the resolvent set of K.  Two alternative
evaluations exist for cross-validation: the all-pass form built from
Sigma(s) = L (s + iH)^-1 L*, and the Stratonovich-coefficient form.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ResolventSingular, ShapeError, SingularMatrix
from .model import BlockOperatorMatrix, SLHModel, k_operator
from .operators import (
    DEFAULT_COND_LIMIT,
    as_matrix,
    dagger,
    inverse,
    max_abs,
)


def resolvent_inverse(M, s, cond_limit: float = DEFAULT_COND_LIMIT) -> np.ndarray:
    """(sI - M)^-1 with ResolventSingular on failure."""
    M = np.asarray(M, dtype=complex)
    try:
        return inverse(s * np.eye(M.shape[0]) - M, cond_limit)
    except SingularMatrix as exc:
        raise ResolventSingular(s, cond_estimate=exc.cond_estimate) from None


def char_op(model: SLHModel, s, cond_limit: float = DEFAULT_COND_LIMIT) -> BlockOperatorMatrix:
    """Direct evaluation T(s) = S - L (s - K)^-1 L* S."""
    R = resolvent_inverse(k_operator(model), s, cond_limit)
    T = model.S - model.L @ R @ dagger(model.L) @ model.S
    return BlockOperatorMatrix(
        data=T, block_dim=model.dim,
        n_blocks_row=model.n_inputs, n_blocks_col=model.n_inputs,
        kind="char_op",
    )


def sigma_kernel(model: SLHModel, s, cond_limit: float = DEFAULT_COND_LIMIT) -> BlockOperatorMatrix:
    """Sigma(s) = L (s + iH)^-1 L*, the all-pass kernel (nm x nm)."""
    R = resolvent_inverse(-1j * model.H, s, cond_limit)
    return BlockOperatorMatrix(
        data=model.L @ R @ dagger(model.L),
        block_dim=model.dim,
        n_blocks_row=model.n_inputs, n_blocks_col=model.n_inputs,
        kind="sigma",
    )


def char_op_allpass(model: SLHModel, s, cond_limit: float = DEFAULT_COND_LIMIT) -> BlockOperatorMatrix:
    """All-pass evaluation T(s) = (1 - Sigma/2)(1 + Sigma/2)^-1 S."""
    Sig = sigma_kernel(model, s, cond_limit).data
    nm = Sig.shape[0]
    I = np.eye(nm, dtype=complex)
    try:
        denom = inverse(I + 0.5 * Sig, cond_limit)
    except SingularMatrix as exc:
        raise ResolventSingular(s, "(1 + Sigma/2) not invertible",
                                cond_estimate=exc.cond_estimate) from None
    T = (I - 0.5 * Sig) @ denom @ model.S
    return BlockOperatorMatrix(
        data=T, block_dim=model.dim,
        n_blocks_row=model.n_inputs, n_blocks_col=model.n_inputs,
        kind="char_op",
    )


def char_op_stratonovich(coeffs, s, cond_limit: float = DEFAULT_COND_LIMIT) -> BlockOperatorMatrix:
    """Evaluate T(s) from Stratonovich coefficients.

    With X(s) = (i/2) Ell + 1/2 El0 (s + i E00)^-1 E0l, the characteristic
    operator is (I - X)(I + X)^-1; its |s| -> infinity limit is the Cayley
    transform of Ell, i.e. the scattering matrix.
    """
    E00 = coeffs.E00
    R = resolvent_inverse(-1j * E00, s, cond_limit)
    X = 0.5j * coeffs.Ell + 0.5 * coeffs.El0 @ R @ coeffs.E0l
    nm = X.shape[0]
    I = np.eye(nm, dtype=complex)
    try:
        denom = inverse(I + X, cond_limit)
    except SingularMatrix as exc:
        raise ResolventSingular(s, "(I + X(s)) not invertible",
                                cond_estimate=exc.cond_estimate) from None
    m = E00.shape[0]
    return BlockOperatorMatrix(
        data=(I - X) @ denom, block_dim=m,
        n_blocks_row=nm // m, n_blocks_col=nm // m,
        kind="char_op",
    )


def transfer_function(abcd_matrices, s, cond_limit: float = DEFAULT_COND_LIMIT) -> np.ndarray:
    """Classical transfer function T(s) = D + C (sI - A)^-1 B."""
    A, B, C, D = (np.asarray(M, dtype=complex) for M in abcd_matrices)
    R = resolvent_inverse(A, s, cond_limit)
    return D + C @ R @ B


def unitarity_check(model: SLHModel, omega: float, tol: float = 1e-9,
                    cond_limit: float = DEFAULT_COND_LIMIT):
    """Check T(i w)* T(i w) = T(i w) T(i w)* = I; return (ok, residual)."""
    T = char_op(model, 1j * omega, cond_limit).data
    I = np.eye(T.shape[0])
    r = max(max_abs(dagger(T) @ T - I), max_abs(T @ dagger(T) - I))
    return r <= tol, r


def vacuum_expectation(block_matrix: BlockOperatorMatrix, dims, vacuum_modes=None) -> np.ndarray:
    """Contract selected tensor factors of each plant block with the vacuum.

    ``dims`` lists the dimension of each tensor factor of the plant space
    (product must equal the block dimension); ``vacuum_modes`` selects which
    factors are evaluated in <0|...|0> (default: all).  Returns an n x n
    scalar matrix when every factor is contracted, otherwise a block matrix
    of operators on the remaining factors.
    """
    dims = tuple(int(d) for d in dims)
    m = block_matrix.block_dim
    if int(np.prod(dims)) != m:
        raise ShapeError(f"product of dims {dims} must equal block dim {m}")
    nf = len(dims)
    if vacuum_modes is None:
        vacuum_modes = tuple(range(nf))
    vacuum_modes = tuple(sorted(set(int(i) for i in vacuum_modes)))
    keep = [i for i in range(nf) if i not in vacuum_modes]
    mkeep = int(np.prod([dims[i] for i in keep])) if keep else 1

    nr, nc = block_matrix.n_blocks_row, block_matrix.n_blocks_col
    out = np.zeros((nr * mkeep, nc * mkeep), dtype=complex)
    for j in range(nr):
        for k in range(nc):
            B = block_matrix.block(j, k).reshape(dims + dims)
            idx = [slice(None)] * (2 * nf)
            for v in vacuum_modes:
                idx[v] = 0
                idx[nf + v] = 0
            red = np.asarray(B[tuple(idx)]).reshape(mkeep, mkeep)
            out[j * mkeep:(j + 1) * mkeep, k * mkeep:(k + 1) * mkeep] = red
    return out


def vacuum_expectation_char(model: SLHModel, s, dims, vacuum_modes=None,
                            cond_limit: float = DEFAULT_COND_LIMIT) -> np.ndarray:
    """Vacuum matrix elements <0|T(s)_jk|0> of the characteristic operator."""
    return vacuum_expectation(char_op(model, s, cond_limit), dims, vacuum_modes)


def perturbation_series(model0: SLHModel, V, lam: float, order: int, s,
                        cond_limit: float = DEFAULT_COND_LIMIT) -> BlockOperatorMatrix:
    """Neumann series for the Hamiltonian perturbation H = H0 + lam * V.

    T(s) = T0(s) - sum_{q=1}^{order} (-i lam)^q  L R0 (V R0)^q L* S,
    with R0 = (s - K0)^-1.  Valid for lam small enough that the series
    converges; the truncation order is explicit.
    """
    V = as_matrix(V, "V")
    if V.shape != (model0.dim, model0.dim):
        raise ShapeError("V must act on the plant space")
    if order < 0:
        raise ShapeError("order must be >= 0")
    R0 = resolvent_inverse(k_operator(model0), s, cond_limit)
    LS = dagger(model0.L) @ model0.S
    T = model0.S - model0.L @ R0 @ LS
    W = R0
    for q in range(1, order + 1):
        W = W @ V @ R0
        T = T - (-1j * lam) ** q * (model0.L @ W @ LS)
    return BlockOperatorMatrix(
        data=T, block_dim=model0.dim,
        n_blocks_row=model0.n_inputs, n_blocks_col=model0.n_inputs,
        kind="char_op",
    )


# ---------------------------------------------------------------------------
# Frequency sweeps.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FrequencyGrid:
    """Sampling grid for s: either s = i*omega (imaginary) or s real."""

    axis: str
    points: np.ndarray

    def __post_init__(self):
        if self.axis not in ("imaginary", "real"):
            raise ShapeError("axis must be 'imaginary' or 'real'")
        pts = np.asarray(self.points, dtype=float).ravel()
        if pts.size == 0:
            raise ShapeError("grid must be nonempty")
        if pts.size > 1 and not np.all(np.diff(pts) > 0):
            raise ShapeError("grid points must be strictly increasing")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    def s_values(self) -> np.ndarray:
        return 1j * self.points if self.axis == "imaginary" else self.points.astype(complex)


@dataclass(frozen=True)
class SweepResult:
    """Per-point characteristic operators with per-point failure capture.

    ``values[i]`` is None exactly when point i failed; failures lists
    (point, error message) pairs in grid order.
    """

    grid: FrequencyGrid
    values: tuple
    unitarity_residuals: tuple
    failures: tuple

    @property
    def n_failed(self) -> int:
        return len(self.failures)


_SWEEP_METHODS = ("direct", "allpass", "stratonovich")


def sweep(model: SLHModel, grid: FrequencyGrid, method: str = "direct",
          cond_limit: float = DEFAULT_COND_LIMIT) -> SweepResult:
    """Evaluate T over a grid; singular points are recorded, not fatal."""
    if method not in _SWEEP_METHODS:
        raise ShapeError(f"method must be one of {_SWEEP_METHODS}")
    if method == "stratonovich":
        from .stratonovich import ito_to_stratonovich
        coeffs = ito_to_stratonovich(model)
        evaluate = lambda s: char_op_stratonovich(coeffs, s, cond_limit)
    elif method == "allpass":
        evaluate = lambda s: char_op_allpass(model, s, cond_limit)
    else:
        evaluate = lambda s: char_op(model, s, cond_limit)

    values = []
    residuals = []
    failures = []
    I = np.eye(model.n_inputs * model.dim)
    for point, s in zip(grid.points, grid.s_values()):
        try:
            T = evaluate(s)
        except SingularMatrix as exc:
            values.append(None)
            residuals.append(float("nan"))
            failures.append((float(point), str(exc)))
            continue
        values.append(T)
        residuals.append(max_abs(dagger(T.data) @ T.data - I))
    return SweepResult(
        grid=grid, values=tuple(values),
        unitarity_residuals=tuple(residuals), failures=tuple(failures),
    )
