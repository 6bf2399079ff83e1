"""Dense complex linear algebra helpers: states, standard gates, partial trace,
validity checks, and seeded random sampling.

States and operators are plain complex128 numpy arrays; a density matrix on k
qubits is a 2^k x 2^k array.  Validity checks use the package-wide tolerance
ATOL = 1e-9; eigenvalues below 1e-12 are treated as zero in entropies.
"""

from __future__ import annotations

import numpy as np

ATOL = 1e-9
EIG_CLIP = 1e-12

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
H2 = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)

#: |x, y> -> |x, x xor y>
XOR_GATE = np.array(
    [[1, 0, 0, 0],
     [0, 1, 0, 0],
     [0, 0, 0, 1],
     [0, 0, 1, 0]], dtype=complex)

KET0 = np.array([1, 0], dtype=complex)
KET1 = np.array([0, 1], dtype=complex)

PHI_PLUS = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
PHI_MINUS = np.array([1, 0, 0, -1], dtype=complex) / np.sqrt(2)
PSI_PLUS = np.array([0, 1, 1, 0], dtype=complex) / np.sqrt(2)
PSI_MINUS = np.array([0, 1, -1, 0], dtype=complex) / np.sqrt(2)

BELL_BASIS = (PHI_PLUS, PHI_MINUS, PSI_PLUS, PSI_MINUS)
BELL_LABELS = ("phi+", "phi-", "psi+", "psi-")


def hadamard_n(k: int) -> np.ndarray:
    out = np.array([[1.0 + 0j]])
    for _ in range(k):
        out = np.kron(out, H2)
    return out


def ket(index: int, dim: int) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    v[index] = 1
    return v


def proj(v: np.ndarray) -> np.ndarray:
    return np.outer(v, v.conj())


def kron_all(mats) -> np.ndarray:
    out = np.array([[1.0 + 0j]])
    for m in mats:
        out = np.kron(out, m)
    return out


def is_unitary(u: np.ndarray, atol: float = ATOL) -> bool:
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    return np.allclose(u.conj().T @ u, np.eye(u.shape[0]), atol=atol)


def is_hermitian(m: np.ndarray, atol: float = ATOL) -> bool:
    return np.allclose(m, m.conj().T, atol=atol)


def is_psd(m: np.ndarray, atol: float = ATOL) -> bool:
    if not is_hermitian(m, atol):
        return False
    return bool(np.linalg.eigvalsh(m).min() >= -atol)


def is_density(rho: np.ndarray, atol: float = ATOL) -> bool:
    return is_psd(rho, atol) and abs(np.trace(rho) - 1) <= atol


def assert_density(rho: np.ndarray, atol: float = ATOL) -> None:
    if not is_density(rho, atol):
        raise ValueError("not a valid density matrix within tolerance")


def partial_trace(rho: np.ndarray, dims: list[int], keep: list[int]) -> np.ndarray:
    """Trace out every subsystem not in ``keep`` (indices into ``dims``)."""
    n = len(dims)
    keep = sorted(keep)
    resh = np.asarray(rho).reshape(dims + dims)
    # contract traced-out row/col index pairs one at a time
    traced = [i for i in range(n) if i not in keep]
    for count, i in enumerate(traced):
        axis1 = i - count
        axis2 = axis1 + (n - count)
        resh = np.trace(resh, axis1=axis1, axis2=axis2)
    d = int(np.prod([dims[i] for i in keep])) if keep else 1
    return resh.reshape(d, d)


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR of a complex Gaussian matrix with phase fix."""
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(g)
    phases = np.diag(r).copy()
    phases /= np.abs(phases)
    return q * phases


def random_pure_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_density(dim: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    rank = rank or dim
    probs = rng.random(rank)
    probs /= probs.sum()
    rho = np.zeros((dim, dim), dtype=complex)
    for p in probs:
        rho += p * proj(random_pure_state(dim, rng))
    return rho


def random_distribution(k: int, rng: np.random.Generator) -> np.ndarray:
    p = rng.random(k) + 1e-3
    return p / p.sum()


def state_text(m: np.ndarray) -> str:
    """Dimension header plus row-major "re,im" pairs, one row per line."""
    m = np.atleast_2d(np.asarray(m, dtype=complex))
    lines = [f"{m.shape[0]} {m.shape[1]}"]
    for row in m:
        lines.append(" ".join(f"{z.real:.12g},{z.imag:.12g}" for z in row))
    return "\n".join(lines) + "\n"


def parse_state_text(text: str) -> np.ndarray:
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    rows, cols = map(int, lines[0].split())
    out = np.zeros((rows, cols), dtype=complex)
    for i, ln in enumerate(lines[1:]):
        for j, pair in enumerate(ln.split()):
            re, im = pair.split(",")
            out[i, j] = float(re) + 1j * float(im)
    return out
