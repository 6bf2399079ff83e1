"""Superoperators: Kraus and Choi representations, validity, and dilation.

The Choi matrix convention is the normalized "Choi state"
C = (1/d_in) sum_ij E_ij (x) T(E_ij); a map is completely positive iff C is PSD
and trace preserving iff the partial trace of C over the output factor is
I/d_in.  (The transpose map's Choi state has eigenvalue -1/2.)
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .linalg import ATOL, EIG_CLIP, is_psd, ket, partial_trace


@dataclass(frozen=True)
class SuperOp:
    """A linear map on density matrices, held as Kraus operators and/or a Choi matrix."""

    dim_in: int
    dim_out: int
    kraus: tuple[np.ndarray, ...] | None = None
    choi: np.ndarray = field(default=None, compare=False)

    def __post_init__(self):
        if self.kraus is None and self.choi is None:
            raise ValueError("need kraus operators or a choi matrix")
        if self.choi is None:
            object.__setattr__(self, "choi", _kraus_to_choi(self.kraus, self.dim_in, self.dim_out))

    @classmethod
    def from_kraus(cls, ops: Sequence[np.ndarray]) -> "SuperOp":
        ops = tuple(np.asarray(k, dtype=complex) for k in ops)
        dout, din = ops[0].shape
        if any(k.shape != (dout, din) for k in ops):
            raise ValueError("kraus operators must share one shape")
        return cls(din, dout, ops)

    @classmethod
    def from_function(cls, f: Callable[[np.ndarray], np.ndarray], dim_in: int, dim_out: int) -> "SuperOp":
        """Build the Choi matrix by applying the map to all basis matrices."""
        choi = np.zeros((dim_in * dim_out, dim_in * dim_out), dtype=complex)
        for i in range(dim_in):
            for j in range(dim_in):
                e_ij = np.outer(ket(i, dim_in), ket(j, dim_in).conj())
                choi += np.kron(e_ij, f(e_ij))
        return cls(dim_in, dim_out, None, choi / dim_in)

    def apply(self, rho: np.ndarray) -> np.ndarray:
        rho = np.asarray(rho, dtype=complex)
        if self.kraus is not None:
            out = np.zeros((self.dim_out, self.dim_out), dtype=complex)
            for k in self.kraus:
                out += k @ rho @ k.conj().T
            return out
        # T(rho) = d_in * tr_in[(rho^T (x) I) C]
        op = np.kron(rho.T, np.eye(self.dim_out)) @ (self.dim_in * self.choi)
        return partial_trace(op, [self.dim_in, self.dim_out], [1])


def _kraus_to_choi(ops, din, dout):
    choi = np.zeros((din * dout, din * dout), dtype=complex)
    for i in range(din):
        for j in range(din):
            e_ij = np.outer(ket(i, din), ket(j, din).conj())
            t = np.zeros((dout, dout), dtype=complex)
            for k in ops:
                t += k @ e_ij @ k.conj().T
            choi += np.kron(e_ij, t)
    return choi / din


def cptp_validate(t: SuperOp, atol: float = ATOL) -> bool:
    """Completely positive (Choi PSD) and trace preserving (Choi marginal = I/d)."""
    if not is_psd(t.choi, atol):
        return False
    marginal = partial_trace(t.choi, [t.dim_in, t.dim_out], [0])
    if not np.allclose(marginal, np.eye(t.dim_in) / t.dim_in, atol=atol):
        return False
    if t.kraus is not None:
        total = sum(k.conj().T @ k for k in t.kraus)
        if not np.allclose(total, np.eye(t.dim_in), atol=atol):
            return False
    return True


def choi_to_kraus(t: SuperOp, atol: float = ATOL) -> tuple[np.ndarray, ...]:
    """Extract Kraus operators from a CP map's Choi matrix."""
    eig, vec = np.linalg.eigh(t.choi * t.dim_in)
    ops = []
    for lam, v in zip(eig, vec.T):
        if lam < -atol:
            raise ValueError("map is not completely positive")
        if lam > EIG_CLIP:
            ops.append(np.sqrt(lam) * v.reshape(t.dim_in, t.dim_out).T)
    return tuple(ops)


def _complete_isometry(v: np.ndarray) -> np.ndarray:
    """Extend an isometry (orthonormal columns) to a unitary by Gram-Schmidt."""
    dim = v.shape[0]
    cols = [v[:, j] for j in range(v.shape[1])]
    for cand_idx in range(dim):
        if len(cols) == dim:
            break
        cand = np.zeros(dim, dtype=complex)
        cand[cand_idx] = 1
        for c in cols:
            cand = cand - c * (c.conj() @ cand)
        norm = np.linalg.norm(cand)
        if norm > 1e-7:
            cand /= norm
            for c in cols:  # second pass for numerical orthogonality
                cand = cand - c * (c.conj() @ cand)
            cols.append(cand / np.linalg.norm(cand))
    if len(cols) != dim:
        raise ValueError("could not complete isometry")
    return np.stack(cols, axis=1)


def dilation(t: SuperOp) -> tuple[np.ndarray, int]:
    """Unitary realization: T(rho) = tr_env[U (|0><0|_env (x) rho) U^dagger].

    Returns (U, env_dim) with the environment as the first tensor factor,
    started in |0> and traced out afterwards.
    """
    if t.dim_in != t.dim_out:
        raise ValueError("dilation implemented for equal input/output dimensions")
    d = t.dim_in
    ops = t.kraus if t.kraus is not None else choi_to_kraus(t)
    e = len(ops)
    if e == 1:
        return ops[0].copy(), 1
    # V |psi> = sum_k |k>_env (x) K_k |psi>; env = |0> input columns sit first,
    # so completing V's columns to an orthonormal basis gives the unitary
    v = np.zeros((e * d, d), dtype=complex)
    for k_idx, k in enumerate(ops):
        v[k_idx * d:(k_idx + 1) * d, :] = k
    return _complete_isometry(v), e


def apply_dilation(u: np.ndarray, env_dim: int, rho: np.ndarray) -> np.ndarray:
    d = rho.shape[0]
    env0 = np.zeros((env_dim, env_dim), dtype=complex)
    env0[0, 0] = 1
    big = u @ np.kron(env0, rho) @ u.conj().T
    return partial_trace(big, [env_dim, d], [1])


def identity_channel(dim: int) -> SuperOp:
    return SuperOp.from_kraus([np.eye(dim, dtype=complex)])


def depolarizing_channel(p: float) -> SuperOp:
    """Qubit depolarizing channel; p = 1 is the fully depolarizing case."""
    from .linalg import I2, X, Y, Z
    return SuperOp.from_kraus([
        np.sqrt(1 - 3 * p / 4) * I2,
        np.sqrt(p / 4) * X,
        np.sqrt(p / 4) * Y,
        np.sqrt(p / 4) * Z,
    ])


def transpose_map(dim: int) -> SuperOp:
    """The transpose map; positive but not completely positive."""
    return SuperOp.from_function(lambda m: m.T, dim, dim)
