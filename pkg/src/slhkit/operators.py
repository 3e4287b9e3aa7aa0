"""Dense complex matrix algebra and constructors for standard operators.

Everything in this package runs on plain ``numpy`` arrays of dtype
``complex128``.  Problem sizes are desk scale (a few hundred rows at most),
so all storage is dense and all tolerance checks use the max-absolute-entry
norm returned by :func:`max_abs`.
"""

from __future__ import annotations

import warnings

import numpy as np
import scipy.linalg

from .errors import BadParam, ShapeError, SingularMatrix

DEFAULT_COND_LIMIT = 1e12


def as_matrix(A, name: str = "matrix") -> np.ndarray:
    """Coerce to a finite 2-D complex128 array (copies; result is read-only)."""
    M = np.ascontiguousarray(np.array(A, dtype=complex))
    if M.ndim != 2:
        raise ShapeError(f"{name} must be 2-D, got ndim={M.ndim}")
    if not np.all(np.isfinite(M)):
        raise BadParam(f"{name} contains non-finite entries")
    M.setflags(write=False)
    return M


def max_abs(A) -> float:
    """Max absolute entry, the norm used for every tolerance check here."""
    A = np.asarray(A)
    return 0.0 if A.size == 0 else float(np.max(np.abs(A)))


def dagger(A) -> np.ndarray:
    """Conjugate transpose."""
    return np.asarray(A).conj().T


def kron(A, B) -> np.ndarray:
    """Kronecker product (thin alias of :func:`numpy.kron`)."""
    return np.kron(np.asarray(A, dtype=complex), np.asarray(B, dtype=complex))


def imag_part(X) -> np.ndarray:
    """Operator imaginary part Im{X} = (X - X*)/(2i); Hermitian by construction."""
    X = np.asarray(X, dtype=complex)
    return (X - dagger(X)) / 2j


def real_part(X) -> np.ndarray:
    """Operator real part Re{X} = (X + X*)/2."""
    X = np.asarray(X, dtype=complex)
    return (X + dagger(X)) / 2


def _lu_with_cond(A: np.ndarray):
    """LU factor with partial pivoting plus a cheap condition estimate.

    The estimate is max|u_ii| / min|u_ii| from the U factor diagonal.  It is
    deliberately crude; its only job is to provide an explicit failure mode
    for resolvents evaluated at or near the spectrum.
    """
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # scipy warns on exactly singular U
        lu, piv = scipy.linalg.lu_factor(A)
    d = np.abs(np.diag(lu))
    dmin = d.min() if d.size else 0.0
    cond = np.inf if dmin == 0.0 else float(d.max() / dmin)
    return (lu, piv), cond


def inverse(A, cond_limit: float = DEFAULT_COND_LIMIT) -> np.ndarray:
    """Invert a square matrix, refusing when the condition estimate is too large.

    Raises
    ------
    SingularMatrix
        If the LU diagonal signals rank deficiency or the condition estimate
        exceeds ``cond_limit``.
    """
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ShapeError(f"inverse needs a square matrix, got {A.shape}")
    if A.shape[0] == 0:
        return np.zeros((0, 0), dtype=complex)
    factors, cond = _lu_with_cond(A)
    if not np.isfinite(cond) or cond > cond_limit:
        raise SingularMatrix(
            f"condition estimate {cond:.3e} exceeds limit {cond_limit:.3e}",
            cond_estimate=cond,
        )
    return scipy.linalg.lu_solve(factors, np.eye(A.shape[0], dtype=complex))


def solve(A, B, cond_limit: float = DEFAULT_COND_LIMIT) -> np.ndarray:
    """A^-1 B with the same condition guard as :func:`inverse`."""
    A = np.asarray(A, dtype=complex)
    factors, cond = _lu_with_cond(A)
    if not np.isfinite(cond) or cond > cond_limit:
        raise SingularMatrix(
            f"condition estimate {cond:.3e} exceeds limit {cond_limit:.3e}",
            cond_estimate=cond,
        )
    return scipy.linalg.lu_solve(factors, np.asarray(B, dtype=complex))


def condition_estimate(A) -> float:
    """Condition estimate from LU factor diagonals (inf when rank deficient)."""
    A = np.asarray(A, dtype=complex)
    if A.size == 0:
        return 1.0
    _, cond = _lu_with_cond(A)
    return cond


def is_hermitian(A, tol: float = 1e-9):
    """Return (ok, residual) with residual = ||A - A*|| in max-abs norm."""
    A = np.asarray(A, dtype=complex)
    if A.shape[0] != A.shape[1]:
        raise ShapeError("is_hermitian needs a square matrix")
    r = max_abs(A - dagger(A))
    return r <= tol, r


def is_unitary(A, tol: float = 1e-9):
    """Return (ok, residual) with residual = ||A*A - I|| in max-abs norm."""
    A = np.asarray(A, dtype=complex)
    if A.shape[0] != A.shape[1]:
        raise ShapeError("is_unitary needs a square matrix")
    r = max_abs(dagger(A) @ A - np.eye(A.shape[0]))
    return r <= tol, r


# ---------------------------------------------------------------------------
# Standard operator constructors.
#
# Conventions: Fock basis order |0>, |1>, ..., |n_max>; qubit basis order
# puts the up state first, |up> = (1, 0)^T, so pauli("minus") maps up to down.
# ---------------------------------------------------------------------------

_PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
    "plus": np.array([[0, 1], [0, 0]], dtype=complex),
    "minus": np.array([[0, 0], [1, 0]], dtype=complex),
}


def pauli(kind: str) -> np.ndarray:
    """Pauli matrix: one of x, y, z, plus, minus (basis {|up>, |down>})."""
    try:
        return _PAULI[kind].copy()
    except KeyError:
        raise BadParam(f"unknown Pauli kind {kind!r}; use x|y|z|plus|minus") from None


def identity(dim: int) -> np.ndarray:
    if dim < 1:
        raise BadParam("identity dimension must be >= 1")
    return np.eye(dim, dtype=complex)


def annihilator(n_max: int) -> np.ndarray:
    """Truncated bosonic annihilator on states |0>..|n_max| (dim n_max + 1).

    The truncated pair satisfies [a, a*] = I except for the (n_max, n_max)
    entry, which equals -n_max instead of 1.
    """
    if n_max < 1:
        raise BadParam("annihilator needs n_max >= 1 (dim >= 2)")
    return np.diag(np.sqrt(np.arange(1, n_max + 1, dtype=float)), k=1).astype(complex)


def number(n_max: int) -> np.ndarray:
    """Truncated number operator diag(0, 1, ..., n_max)."""
    if n_max < 1:
        raise BadParam("number needs n_max >= 1 (dim >= 2)")
    return np.diag(np.arange(0, n_max + 1, dtype=float)).astype(complex)


def projector(index_set, dim: int) -> np.ndarray:
    """Orthogonal projector onto the given computational basis indices."""
    idx = sorted(set(int(i) for i in index_set))
    if not idx:
        raise BadParam("projector needs a nonempty index set")
    if idx[0] < 0 or idx[-1] >= dim:
        raise BadParam(f"projector indices {idx} out of range for dim {dim}")
    P = np.zeros((dim, dim), dtype=complex)
    for i in idx:
        P[i, i] = 1.0
    return P


def make_operator(kind: str, **params) -> np.ndarray:
    """Dispatch constructor: pauli, annihilator, number, projector, identity.

    The pauli flavor is passed as ``which`` (x|y|z|plus|minus).
    """
    builders = {
        "pauli": lambda: pauli(params["which"]),
        "annihilator": lambda: annihilator(int(params["n_max"])),
        "number": lambda: number(int(params["n_max"])),
        "projector": lambda: projector(params["index_set"], int(params["dim"])),
        "identity": lambda: identity(int(params["dim"])),
    }
    if kind not in builders:
        raise BadParam(f"unknown operator kind {kind!r}")
    try:
        return builders[kind]()
    except KeyError as exc:
        raise BadParam(f"missing parameter {exc} for operator kind {kind!r}") from None
