"""Entanglement-based protocols: superdense coding, the probabilistic
programmable gate with its retry loop, and the purification-relating unitary."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import (
    ATOL,
    BELL_BASIS,
    BELL_LABELS,
    EIG_CLIP,
    H2,
    I2,
    KET0,
    PHI_PLUS,
    X,
    XOR_GATE,
    Z,
    is_unitary,
    ket,
)

#: Pauli error applied (before the programmed unitary) for each Bell outcome
BELL_ERRORS = {"phi+": I2, "phi-": Z, "psi+": X, "psi-": Z @ X}


def superdense(b1: int, b2: int) -> tuple[int, int]:
    """Send two classical bits through one qubit of a shared EPR pair.

    Encoding: apply Z^b1 X^b2 to the sender's half; decoding: map back to the
    computational basis (XOR then Hadamard on the first qubit) and read both
    bits.  Exact round trip for all four messages.
    """
    state = PHI_PLUS.copy()
    enc = np.eye(2, dtype=complex)
    if b2:
        enc = X @ enc
    if b1:
        enc = Z @ enc
    state = np.kron(enc, I2) @ state
    state = np.kron(H2, I2) @ (XOR_GATE @ state)
    probs = np.abs(state) ** 2
    outcome = int(np.argmax(probs))
    if abs(probs[outcome] - 1) > ATOL:
        raise AssertionError("superdense decoding was not deterministic")
    return (outcome >> 1) & 1, outcome & 1


def program_state(u: np.ndarray) -> np.ndarray:
    """Two-qubit program encoding a single-qubit unitary: (|0> U|0> + |1> U|1>)/sqrt(2).

    Only the single-qubit gate is implemented here; the same construction with
    2m program qubits applies any m-qubit unitary with success probability
    1/2^(2m) per attempt, the measurement outcome again naming the Pauli error.
    """
    u = np.asarray(u, dtype=complex)
    if not is_unitary(u):
        raise ValueError("program requires a unitary")
    return (np.kron(KET0, u[:, 0]) + np.kron(ket(1, 2), u[:, 1])) / np.sqrt(2)


def pqg_branches(d: np.ndarray, program: np.ndarray):
    """All four Bell-measurement branches of the gate on |d> (x) |program>.

    Returns [(label, probability, post_state), ...] where the measurement acts
    on qubits 1-2 and the post state is the remaining third qubit.
    """
    psi = np.kron(np.asarray(d, dtype=complex), np.asarray(program, dtype=complex))
    psi = psi.reshape(4, 2)
    out = []
    for label, bell in zip(BELL_LABELS, BELL_BASIS):
        amp = bell.conj() @ psi  # 2-vector on the result qubit
        p = float(np.vdot(amp, amp).real)
        post = amp / np.sqrt(p) if p > EIG_CLIP else np.zeros(2, dtype=complex)
        out.append((label, p, post))
    return out


def pqg_apply(d: np.ndarray, program: np.ndarray, rng: np.random.Generator):
    """Sample one Bell outcome; returns (label, post_state)."""
    branches = pqg_branches(d, program)
    probs = np.array([p for _, p, _ in branches])
    idx = int(rng.choice(4, p=probs / probs.sum()))
    label, _, post = branches[idx]
    return label, post


@dataclass(frozen=True)
class RetryResult:
    state: np.ndarray
    attempts: int
    outcomes: tuple[str, ...]


def pqg_retry(d: np.ndarray, u: np.ndarray, seed_or_rng) -> RetryResult:
    """Apply U to |d> through the programmable gate, retrying on failure.

    After a failed attempt the held state is (applied so far) |d| with a known
    Pauli error folded in; the next program implements the operator that both
    undoes everything applied and performs U, so the loop ends exactly when a
    "phi+" outcome occurs (probability 1/4 per attempt).
    """
    rng = np.random.default_rng(seed_or_rng) if isinstance(seed_or_rng, int) else seed_or_rng
    u = np.asarray(u, dtype=complex)
    if not is_unitary(u):
        raise ValueError("not a unitary")
    state = np.asarray(d, dtype=complex)
    applied = np.eye(2, dtype=complex)  # total operator applied to the input so far
    correction = u
    outcomes = []
    for attempt in range(1, 10_000):
        label, state = pqg_apply(state, program_state(correction), rng)
        outcomes.append(label)
        err = BELL_ERRORS[label]
        applied = correction @ err @ applied
        if label == "phi+":
            return RetryResult(state, attempt, tuple(outcomes))
        correction = u @ applied.conj().T
    raise AssertionError("retry loop did not terminate")


def relate_purifications(phi1: np.ndarray, phi2: np.ndarray, dim_h: int, dim_k: int) -> np.ndarray:
    """Unitary U on the second factor with (I (x) U)|phi1> = |phi2>.

    Requires the two states to have equal reduced states on the first factor;
    built from eigendecompositions matched through one shared eigenbasis.
    """
    m1 = np.asarray(phi1, dtype=complex).reshape(dim_h, dim_k)
    m2 = np.asarray(phi2, dtype=complex).reshape(dim_h, dim_k)
    rho1 = m1 @ m1.conj().T
    rho2 = m2 @ m2.conj().T
    if not np.allclose(rho1, rho2, atol=ATOL):
        raise ValueError("reduced states on the first factor differ")
    eig, vec = np.linalg.eigh(rho1)
    fs, gs = [], []
    for lam, e in zip(eig, vec.T):
        if lam > EIG_CLIP:
            fs.append((e.conj() @ m1) / np.sqrt(lam))
            gs.append((e.conj() @ m2) / np.sqrt(lam))
    f_basis = _complete_basis(fs, dim_k)
    g_basis = _complete_basis(gs, dim_k)
    u = np.zeros((dim_k, dim_k), dtype=complex)
    for f, g in zip(f_basis, g_basis):
        u += np.outer(g, f.conj())
    return u


def _complete_basis(vectors, dim):
    basis = [np.asarray(v, dtype=complex) for v in vectors]
    for idx in range(dim):
        if len(basis) == dim:
            break
        cand = np.zeros(dim, dtype=complex)
        cand[idx] = 1
        for b in basis:
            cand = cand - b * (b.conj() @ cand)
        norm = np.linalg.norm(cand)
        if norm > 1e-7:
            cand /= norm
            for b in basis:
                cand = cand - b * (b.conj() @ cand)
            basis.append(cand / np.linalg.norm(cand))
    if len(basis) != dim:
        raise ValueError("could not complete basis")
    return basis
