"""Strength-scaled SLH families and their adiabatic-elimination limits.

A scaled family has coupling L(k) = k L1 + L0 and Hamiltonian
H(k) = H0 + k H1 + k^2 H2 over a slow/fast split of the plant space, with

  1. L1 annihilates the slow subspace (zero slow columns),
  2. H1 has no slow-slow block; H2 has only a fast-fast block,
  3. the fast-fast generator A_ff = -1/2 sum_a L1_af* L1_af - i H2_ff is
     invertible.

The generator decomposes as K(k) = k^2 A + k Z + R with A supported on the
fast-fast block.  As k grows the characteristic operator converges to a
limit model whose coefficients are Schur complements in A_ff; the limit is
always computed from those closed forms, never by extrapolating finite k.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    AssumptionViolated,
    BadParam,
    InvalidFamily,
    ShapeError,
    SingularMatrix,
)
from .model import BlockOperatorMatrix, SLHModel
from .operators import (
    DEFAULT_COND_LIMIT,
    as_matrix,
    condition_estimate,
    dagger,
    imag_part,
    inverse,
    is_hermitian,
    is_unitary,
    max_abs,
)
from .reduction import BlockPartition, BlockedOperator

STRUCT_TOL = 1e-9
AFF_COND_LIMIT = 1e10
AFF_COND_WARN = 1e8


@dataclass(frozen=True)
class ScaledSLHFamily:
    """k-parametrized triple (S, k L1 + L0, H0 + k H1 + k^2 H2) with a split."""

    S: np.ndarray
    L0: np.ndarray
    L1: np.ndarray
    H0: np.ndarray
    H1: np.ndarray
    H2: np.ndarray
    partition: BlockPartition

    def __post_init__(self):
        S = as_matrix(self.S, "S")
        L0 = as_matrix(self.L0, "L0")
        L1 = as_matrix(self.L1, "L1")
        H0 = as_matrix(self.H0, "H0")
        H1 = as_matrix(self.H1, "H1")
        H2 = as_matrix(self.H2, "H2")
        m = H0.shape[0]
        for name, M in (("H0", H0), ("H1", H1), ("H2", H2)):
            if M.shape != (m, m):
                raise ShapeError(f"{name} must be {m} x {m}")
        if L0.shape != L1.shape or L0.shape[1] != m or L0.shape[0] % m != 0:
            raise ShapeError("L0 and L1 must both be (n*m) x m")
        n = L0.shape[0] // m
        if S.shape != (n * m, n * m):
            raise ShapeError(f"S must be {n * m} x {n * m}")
        if self.partition.dim != m:
            raise ShapeError("partition dim must equal the plant dim")
        for name, M in (("S", S), ("L0", L0), ("L1", L1),
                        ("H0", H0), ("H1", H1), ("H2", H2)):
            object.__setattr__(self, name, M)

    @property
    def dim(self) -> int:
        return self.H0.shape[0]

    @property
    def n_inputs(self) -> int:
        return self.L0.shape[0] // self.dim


def _family_permutations(family: ScaledSLHFamily):
    """Permutations bringing plant (and stacked) indices to slow-first order."""
    perm_m = family.partition.perm
    m = family.dim
    perm_nm = np.concatenate([i * m + perm_m for i in range(family.n_inputs)])
    return perm_m, perm_nm


class _PermutedFamily:
    """Family matrices reordered so the slow block is the leading one."""

    def __init__(self, family: ScaledSLHFamily):
        perm_m, perm_nm = _family_permutations(family)
        self.ms = family.partition.n_slow
        self.mf = family.partition.n_fast
        self.m = family.dim
        self.n = family.n_inputs
        self.perm_m = perm_m
        self.perm_nm = perm_nm
        self.S = family.S[np.ix_(perm_nm, perm_nm)]
        self.L0 = family.L0[np.ix_(perm_nm, perm_m)]
        self.L1 = family.L1[np.ix_(perm_nm, perm_m)]
        self.H0 = family.H0[np.ix_(perm_m, perm_m)]
        self.H1 = family.H1[np.ix_(perm_m, perm_m)]
        self.H2 = family.H2[np.ix_(perm_m, perm_m)]
        self.sl = slice(0, self.ms)
        self.fa = slice(self.ms, self.m)

    def unpermute_plant(self, X: np.ndarray) -> np.ndarray:
        inv = np.argsort(self.perm_m)
        return X[np.ix_(inv, inv)]

    def unpermute_stacked(self, X: np.ndarray) -> np.ndarray:
        inv_r = np.argsort(self.perm_nm)
        inv_c = np.argsort(self.perm_m)
        return X[np.ix_(inv_r, inv_c)]

    def unpermute_full(self, X: np.ndarray) -> np.ndarray:
        inv = np.argsort(self.perm_nm)
        return X[np.ix_(inv, inv)]


def structural_residuals(family: ScaledSLHFamily) -> dict:
    """Max-abs residuals of the required block sparsity patterns."""
    p = _PermutedFamily(family)
    return {
        "L1_slow_columns": max_abs(p.L1[:, p.sl]),
        "H1_ss": max_abs(p.H1[p.sl, p.sl]),
        "H2_ss": max_abs(p.H2[p.sl, p.sl]),
        "H2_sf": max_abs(p.H2[p.sl, p.fa]),
        "H2_fs": max_abs(p.H2[p.fa, p.sl]),
    }


@dataclass(frozen=True)
class KZRDecomposition:
    """K(k) = k^2 A + k Z + R, stored in the original basis order.

    A is supported on the fast-fast block only; the slow/fast block
    coordinates A_ff, Z_sf, Z_fs, R_ss are kept alongside.  Three algebraic
    identities hold by construction:

        R_ss + R_ss* = -L0_cs* L0_cs
        Z_sf + Z_fs* = -L0_cs* L1_cf
        A_ff + A_ff* = -L1_cf* L1_cf
    """

    A: np.ndarray
    Z: np.ndarray
    R: np.ndarray
    A_ff: np.ndarray
    Z_sf: np.ndarray
    Z_fs: np.ndarray
    R_ss: np.ndarray
    partition: BlockPartition

    def identity_residuals(self, family: ScaledSLHFamily) -> dict:
        p = _PermutedFamily(family)
        L0s, L1f = p.L0[:, p.sl], p.L1[:, p.fa]
        return {
            "R_ss": max_abs(self.R_ss + dagger(self.R_ss) + dagger(L0s) @ L0s),
            "Z_sf": max_abs(self.Z_sf + dagger(self.Z_fs) + dagger(L0s) @ L1f),
            "A_ff": max_abs(self.A_ff + dagger(self.A_ff) + dagger(L1f) @ L1f),
        }


def _require_structure(family: ScaledSLHFamily, tol: float = STRUCT_TOL):
    res = structural_residuals(family)
    bad = {k: v for k, v in res.items() if v > tol}
    if bad:
        raise InvalidFamily(f"family violates its block structure: {bad}")
    for name, M in (("H0", family.H0), ("H1", family.H1), ("H2", family.H2)):
        ok, r = is_hermitian(M, tol)
        if not ok:
            raise InvalidFamily(f"{name} is not Hermitian: residual {r:.3e}")


def assemble_k(family: ScaledSLHFamily, k: float) -> SLHModel:
    """The SLH triple at strength k: (S, k L1 + L0, H0 + k H1 + k^2 H2)."""
    _require_structure(family)
    return SLHModel(
        S=family.S,
        L=k * family.L1 + family.L0,
        H=family.H0 + k * family.H1 + k * k * family.H2,
    )


def kzr_decompose(family: ScaledSLHFamily) -> KZRDecomposition:
    """Split K(k) = k^2 A + k Z + R along the slow/fast blocks."""
    _require_structure(family)
    p = _PermutedFamily(family)
    A_perm = -0.5 * dagger(p.L1) @ p.L1 - 1j * p.H2
    Z_perm = -0.5 * (dagger(p.L1) @ p.L0 + dagger(p.L0) @ p.L1) - 1j * p.H1
    R_perm = -0.5 * dagger(p.L0) @ p.L0 - 1j * p.H0
    return KZRDecomposition(
        A=p.unpermute_plant(A_perm),
        Z=p.unpermute_plant(Z_perm),
        R=p.unpermute_plant(R_perm),
        A_ff=A_perm[p.fa, p.fa],
        Z_sf=Z_perm[p.sl, p.fa],
        Z_fs=Z_perm[p.fa, p.sl],
        R_ss=R_perm[p.sl, p.sl],
        partition=family.partition,
    )


@dataclass(frozen=True)
class AssumptionReport:
    """Residual report for the scaled-family assumptions."""

    structural: dict
    hermiticity: dict
    s_unitarity: float
    aff_condition: float
    aff_invertible: bool
    k_identity_residuals: dict
    messages: tuple = ()

    def passed(self, tol: float = STRUCT_TOL) -> bool:
        worst = max(
            max(self.structural.values()),
            max(self.hermiticity.values()),
            self.s_unitarity,
        )
        return worst <= tol and self.aff_invertible


def check_assumptions(family: ScaledSLHFamily, tol: float = STRUCT_TOL) -> AssumptionReport:
    """Report on structure, Hermiticity, S unitarity, and A_ff invertibility."""
    structural = structural_residuals(family)
    hermiticity = {
        name: is_hermitian(M, tol)[1]
        for name, M in (("H0", family.H0), ("H1", family.H1), ("H2", family.H2))
    }
    _, s_res = is_unitary(family.S, tol)
    p = _PermutedFamily(family)
    A_ff = (-0.5 * dagger(p.L1) @ p.L1 - 1j * p.H2)[p.fa, p.fa]
    cond = condition_estimate(A_ff)
    invertible = np.isfinite(cond) and cond <= AFF_COND_LIMIT
    msgs = []
    if invertible and cond > AFF_COND_WARN:
        msgs.append(f"A_ff condition estimate {cond:.3e} is near the limit")
        warnings.warn(msgs[-1], RuntimeWarning, stacklevel=2)
    if not invertible:
        msgs.append(f"A_ff is not invertible (condition estimate {cond:.3e})")
    kzr = None
    try:
        kzr = kzr_decompose(family)
    except InvalidFamily:
        pass
    identities = kzr.identity_residuals(family) if kzr is not None else {}
    return AssumptionReport(
        structural=structural,
        hermiticity=hermiticity,
        s_unitarity=s_res,
        aff_condition=cond,
        aff_invertible=bool(invertible),
        k_identity_residuals=identities,
        messages=tuple(msgs),
    )


def _require_assumptions(family: ScaledSLHFamily, tol: float = STRUCT_TOL) -> AssumptionReport:
    report = check_assumptions(family, tol)
    if not report.passed(tol):
        raise AssumptionViolated(
            "family fails the limit assumptions: "
            f"structural={report.structural}, A_ff condition={report.aff_condition:.3e}"
        )
    return report


def scaled_resolvent_limit(M11, M12, M21, M22, s,
                           cond_limit: float = DEFAULT_COND_LIMIT) -> BlockedOperator:
    """k -> infinity limit of diag(1, k) (s + M(k))^-1 diag(1, k).

    For M(k) = [[M11, k M12 + o(k)], [k M21 + o(k), k^2 M22 + o(k)]] with M22
    invertible, the limit blocks are

        [[ (s + Mhat11)^-1,              -(s + Mhat11)^-1 M12 M22^-1 ],
         [ -M22^-1 M21 (s + Mhat11)^-1,   M22^-1 + M22^-1 M21 (s + Mhat11)^-1 M12 M22^-1 ]]

    with the Schur complement Mhat11 = M11 - M12 M22^-1 M21.
    """
    M11 = np.asarray(M11, dtype=complex)
    M12 = np.asarray(M12, dtype=complex)
    M21 = np.asarray(M21, dtype=complex)
    M22 = np.asarray(M22, dtype=complex)
    M22inv = inverse(M22, cond_limit)
    Mhat11 = M11 - M12 @ M22inv @ M21
    ms = M11.shape[0]
    top = inverse(s * np.eye(ms) + Mhat11, cond_limit)
    X_sf = -top @ M12 @ M22inv
    X_fs = -M22inv @ M21 @ top
    X_ff = M22inv + M22inv @ M21 @ top @ M12 @ M22inv
    return BlockedOperator(X_ss=top, X_sf=X_sf, X_fs=X_fs, X_ff=X_ff)


def finite_k_scaled_resolvent(M11, M12, M21, M22, s, k: float,
                              cond_limit: float = DEFAULT_COND_LIMIT) -> np.ndarray:
    """diag(1, k) (s + M(k))^-1 diag(1, k) at finite k (oracle for the limit)."""
    M11 = np.asarray(M11, dtype=complex)
    M22 = np.asarray(M22, dtype=complex)
    ms, mf = M11.shape[0], M22.shape[0]
    M = np.zeros((ms + mf, ms + mf), dtype=complex)
    M[:ms, :ms] = M11
    M[:ms, ms:] = k * np.asarray(M12, dtype=complex)
    M[ms:, :ms] = k * np.asarray(M21, dtype=complex)
    M[ms:, ms:] = k * k * M22
    D = np.diag(np.concatenate([np.ones(ms), k * np.ones(mf)])).astype(complex)
    R = inverse(s * np.eye(ms + mf) + M, cond_limit)
    return D @ R @ D


def _limit_pieces(family: ScaledSLHFamily, cond_limit: float = DEFAULT_COND_LIMIT):
    """Schur-complement ingredients of the limit, in permuted (slow-first) order."""
    p = _PermutedFamily(family)
    A_ff = (-0.5 * dagger(p.L1) @ p.L1 - 1j * p.H2)[p.fa, p.fa]
    Z = -0.5 * (dagger(p.L1) @ p.L0 + dagger(p.L0) @ p.L1) - 1j * p.H1
    R = -0.5 * dagger(p.L0) @ p.L0 - 1j * p.H0
    Aff_inv = inverse(A_ff, min(cond_limit, AFF_COND_LIMIT))
    Z_sf, Z_fs, R_ss = Z[p.sl, p.fa], Z[p.fa, p.sl], R[p.sl, p.sl]
    Khat_ss = R_ss - Z_sf @ Aff_inv @ Z_fs
    L0s = p.L0[:, p.sl]
    L1f = p.L1[:, p.fa]
    return p, A_ff, Aff_inv, Z_sf, Z_fs, R_ss, Khat_ss, L0s, L1f


def limit_char_op(family: ScaledSLHFamily, s,
                  cond_limit: float = DEFAULT_COND_LIMIT) -> BlockOperatorMatrix:
    """Limit characteristic operator, evaluated from the scaled-resolvent limit.

    That(s) = S - [L0_slow | L1_fast] Dhat(s) [L0_slow | L1_fast]* S, where
    Dhat is the limit of diag(1,k) (s - K(k))^-1 diag(1,k).  Returned in the
    original basis order.
    """
    _require_assumptions(family)
    p, A_ff, _, Z_sf, Z_fs, R_ss, _, L0s, L1f = _limit_pieces(family, cond_limit)
    try:
        D = scaled_resolvent_limit(-R_ss, -Z_sf, -Z_fs, -A_ff, s, cond_limit)
    except SingularMatrix as exc:
        from .errors import ResolventSingular
        raise ResolventSingular(s, "(s - Khat_ss) not invertible",
                                cond_estimate=exc.cond_estimate) from None
    ms, mf = p.ms, p.mf
    Dfull = np.zeros((p.m, p.m), dtype=complex)
    Dfull[:ms, :ms] = D.X_ss
    Dfull[:ms, ms:] = D.X_sf
    Dfull[ms:, :ms] = D.X_fs
    Dfull[ms:, ms:] = D.X_ff
    Lred = np.hstack([L0s, L1f])  # nm x m, columns ordered (slow, fast)
    T = p.S - Lred @ Dfull @ dagger(Lred) @ p.S
    return BlockOperatorMatrix(
        data=p.unpermute_full(T), block_dim=family.dim,
        n_blocks_row=family.n_inputs, n_blocks_col=family.n_inputs,
        kind="char_op",
    )


@dataclass(frozen=True)
class LimitModel:
    """Limit SLH triple (Shat, Lhat, Hhat) in the original basis order.

    Lhat has zero fast columns and Hhat is supported on the slow-slow block.
    ``hhat_alt_residual`` is the discrepancy between the two equivalent
    closed forms of the slow Hamiltonian (should be at rounding level).
    """

    Shat: np.ndarray
    Lhat: np.ndarray
    Hhat: np.ndarray
    partition: BlockPartition
    n_inputs: int
    shat_unitarity: float
    hhat_alt_residual: float
    decoupling_residual: float
    decoupled: bool
    slow_model: SLHModel | None

    def as_model(self) -> SLHModel:
        return SLHModel(S=self.Shat, L=self.Lhat, H=self.Hhat)


def limit_slh(family: ScaledSLHFamily, tol: float = STRUCT_TOL,
              cond_limit: float = DEFAULT_COND_LIMIT) -> LimitModel:
    """Limit SLH parameters, all Schur complements in A_ff:

        Shat_ab = (delta_ac + L1_af A_ff^-1 L1_cf*) S_cb
        Lhat_a  = L0_as - L1_af A_ff^-1 Z_fs
        Hhat_ss = H0_ss + Im{ Z_sf A_ff^-1 Z_fs }

    The slow Hamiltonian is also computed through its expanded alternative
    form and the two are compared; the result carries the decoupling verdict
    (Lhat_f = Shat_sf = Shat_fs = 0) and, when decoupled, the reduced slow
    model (Shat_ss, Lhat_s, Hhat_ss).
    """
    _require_assumptions(family, tol)
    p, A_ff, Aff_inv, Z_sf, Z_fs, R_ss, Khat_ss, L0s, L1f = _limit_pieces(family, cond_limit)

    Shat_perm = p.S + L1f @ Aff_inv @ dagger(L1f) @ p.S
    Lhat_slow = L0s - L1f @ Aff_inv @ Z_fs          # nm x ms
    Hhat_ss = p.H0[p.sl, p.sl] + imag_part(Z_sf @ Aff_inv @ Z_fs)

    # Alternative expanded form; the conjugated resolvents are essential.
    H1_sf, H1_fs = p.H1[p.sl, p.fa], p.H1[p.fa, p.sl]
    H2_ff = p.H2[p.fa, p.fa]
    Aff_inv_star = dagger(Aff_inv)
    Hhat_alt = (
        p.H0[p.sl, p.sl]
        - dagger(Z_fs) @ Aff_inv_star @ H1_fs
        - H1_sf @ Aff_inv @ Z_fs
        + dagger(Z_fs) @ Aff_inv @ H2_ff @ Aff_inv_star @ Z_fs
    )
    alt_residual = max_abs(Hhat_ss - Hhat_alt)

    Lhat_perm = np.zeros((p.n * p.m, p.m), dtype=complex)
    Lhat_perm[:, :p.ms] = Lhat_slow
    Hhat_perm = np.zeros((p.m, p.m), dtype=complex)
    Hhat_perm[:p.ms, :p.ms] = Hhat_ss

    _, shat_res = is_unitary(Shat_perm, tol)

    # Decoupling: no limit transitions may terminate in fast states.
    slow_rows = np.concatenate([i * p.m + np.arange(p.ms) for i in range(p.n)])
    fast_rows = np.concatenate([i * p.m + np.arange(p.ms, p.m) for i in range(p.n)])
    dec_residual = max(
        max_abs(Lhat_slow[fast_rows, :]),
        max_abs(Shat_perm[np.ix_(slow_rows, fast_rows)]),
        max_abs(Shat_perm[np.ix_(fast_rows, slow_rows)]),
    )
    decoupled = dec_residual <= tol
    slow_model = None
    if decoupled:
        slow_model = SLHModel(
            S=Shat_perm[np.ix_(slow_rows, slow_rows)],
            L=Lhat_slow[slow_rows, :],
            H=Hhat_ss,
        )

    return LimitModel(
        Shat=p.unpermute_full(Shat_perm),
        Lhat=p.unpermute_stacked(Lhat_perm),
        Hhat=p.unpermute_plant(Hhat_perm),
        partition=family.partition,
        n_inputs=family.n_inputs,
        shat_unitarity=shat_res,
        hhat_alt_residual=alt_residual,
        decoupling_residual=dec_residual,
        decoupled=decoupled,
        slow_model=slow_model,
    )


def check_decoupling(limit: LimitModel, tol: float = STRUCT_TOL,
                     s_check: complex = 1.0,
                     cond_limit: float = DEFAULT_COND_LIMIT):
    """Re-examine the decoupling conditions Lhat_f = Shat_sf = Shat_fs = 0.

    Returns (decoupled, residual).  When decoupled, the limit characteristic
    operator is also asserted to be block diagonal, equal to
    diag(T_slow(s), Shat_ff) at ``s_check``.
    """
    from .characteristic import char_op

    part = limit.partition
    n = limit.n_inputs
    slow_rows = part.stacked_rows(n, "slow")
    fast_rows = part.stacked_rows(n, "fast")
    slow_cols = np.array(part.slow_indices, dtype=int)
    fast_cols = np.array(part.fast_indices, dtype=int)
    residual = max(
        max_abs(limit.Lhat[np.ix_(fast_rows, slow_cols)]),
        max_abs(limit.Lhat[:, fast_cols]),
        max_abs(limit.Shat[np.ix_(slow_rows, fast_rows)]),
        max_abs(limit.Shat[np.ix_(fast_rows, slow_rows)]),
    )
    ok = residual <= tol
    if ok:
        slow_model = limit.slow_model
        if slow_model is None:  # possible when re-checking with a looser tol
            slow_model = SLHModel(
                S=limit.Shat[np.ix_(slow_rows, slow_rows)],
                L=limit.Lhat[np.ix_(slow_rows, slow_cols)],
                H=limit.Hhat[np.ix_(slow_cols, slow_cols)],
            )
        T = char_op(limit.as_model(), s_check, cond_limit).data
        T_slow = char_op(slow_model, s_check, cond_limit).data
        block_res = max(
            max_abs(T[np.ix_(slow_rows, fast_rows)]),
            max_abs(T[np.ix_(fast_rows, slow_rows)]),
            max_abs(T[np.ix_(slow_rows, slow_rows)] - T_slow),
            max_abs(T[np.ix_(fast_rows, fast_rows)]
                    - limit.Shat[np.ix_(fast_rows, fast_rows)]),
        )
        if block_res > max(tol, 1e-9):
            raise AssertionError(
                f"decoupled limit is not block diagonal: residual {block_res:.3e}"
            )
    return ok, residual


def sigma_allpass_limit(family: ScaledSLHFamily, s,
                        cond_limit: float = DEFAULT_COND_LIMIT) -> np.ndarray:
    """Limit of the scaled all-pass kernel Sigma_k(s) = L(k)(s + iH(k))^-1 L(k)*.

    Valid as the true limit only when L0 = 0 (the k-linear coupling
    dominates); requires the fast-fast block of H2 to be invertible.  With
    Htil_ss = H0_ss - H1_sf H2_ff^-1 H1_fs the limit is

        L1_f ( -i H2_ff^-1
               + H2_ff^-1 H1_fs (s + i Htil_ss)^-1 H1_sf H2_ff^-1 ) L1_f*.

    Returned in the original basis order.
    """
    _require_structure(family)
    p = _PermutedFamily(family)
    H2_ff = p.H2[p.fa, p.fa]
    H2ff_inv = inverse(H2_ff, cond_limit)
    H1_sf, H1_fs = p.H1[p.sl, p.fa], p.H1[p.fa, p.sl]
    Htil_ss = p.H0[p.sl, p.sl] - H1_sf @ H2ff_inv @ H1_fs
    mid = -1j * H2ff_inv
    core = inverse(s * np.eye(p.ms) + 1j * Htil_ss, cond_limit)
    mid = mid + H2ff_inv @ H1_fs @ core @ H1_sf @ H2ff_inv
    L1f = p.L1[:, p.fa]
    Sig = L1f @ mid @ dagger(L1f)
    return p.unpermute_full(Sig)


@dataclass(frozen=True)
class ConvergenceStudy:
    """Finite-k errors against the limit, with an optional power-law fit."""

    k_values: tuple
    errors: tuple
    slope: float | None
    log_intercept: float | None

    def rows(self):
        return list(zip(self.k_values, self.errors))


def convergence_study(family: ScaledSLHFamily, s, k_values,
                      cond_limit: float = DEFAULT_COND_LIMIT) -> ConvergenceStudy:
    """Tabulate ||T_k(s) - That(s)|| over k and fit the log-log slope.

    The fit uses least squares over points with k >= 100 and is omitted when
    fewer than 3 such points exist.  The expected slope is -1 (leading 1/k
    correction).
    """
    from .characteristic import char_op

    That = limit_char_op(family, s, cond_limit).data
    ks = [float(k) for k in k_values]
    errors = []
    for k in ks:
        Tk = char_op(assemble_k(family, k), s, cond_limit).data
        errors.append(max_abs(Tk - That))
    fit_pts = [(k, e) for k, e in zip(ks, errors) if k >= 100 and e > 0]
    slope = intercept = None
    if len(fit_pts) >= 3:
        lk = np.log10([k for k, _ in fit_pts])
        le = np.log10([e for _, e in fit_pts])
        slope_, intercept_ = np.polyfit(lk, le, 1)
        slope, intercept = float(slope_), float(intercept_)
    return ConvergenceStudy(
        k_values=tuple(ks), errors=tuple(errors),
        slope=slope, log_intercept=intercept,
    )


def slow_indices_from_kernel(L1, H2, rel_threshold: float = 1e-10):
    """Slow indices = joint null space of A = -1/2 L1*L1 - i H2 and A*.

    Only basis-aligned kernels are supported: the null-space projector must
    be diagonal with 0/1 entries to within the threshold.  User-supplied
    partitions always take precedence over this helper.
    """
    L1 = as_matrix(L1, "L1")
    H2 = as_matrix(H2, "H2")
    m = H2.shape[0]
    A = -0.5 * dagger(L1) @ L1 - 1j * H2

    def _null_projector(M):
        U, sing, Vh = np.linalg.svd(M)
        smax = sing[0] if sing.size else 0.0
        null = Vh[sing <= rel_threshold * max(smax, 1.0), :].conj().T
        return null @ dagger(null), null.shape[1]

    P, dim_null = _null_projector(A)
    P_star, dim_null_star = _null_projector(dagger(A))
    if dim_null == 0 or dim_null >= m:
        raise BadParam(f"kernel of A has dimension {dim_null}; no proper split exists")
    if dim_null != dim_null_star or max_abs(P - P_star) > 1e-8:
        raise BadParam("kernels of A and A* differ; no invariant basis split exists")
    diag = np.real(np.diag(P))
    off = max_abs(P - np.diag(np.diag(P)))
    if off > 1e-8 or not np.all((diag < 1e-8) | (diag > 1 - 1e-8)):
        raise BadParam("kernel of A is not aligned with the computational basis")
    return tuple(int(i) for i in np.flatnonzero(diag > 0.5))
