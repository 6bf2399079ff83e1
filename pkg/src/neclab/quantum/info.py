"""Entropies and the information inequalities the lower-bound proofs rest on.

``check_inequality(kind, instance)`` evaluates both sides of one inequality on
a concrete instance and returns (holds, slack); ``random_instance`` draws a
valid instance of each kind from a seeded generator.  Supported kinds:

* "fano":          I(X:Y) >= H(X) - H(eps) for Boolean X, Y with eps = Pr[X != Y]
* "fano-lv":       I(X:Y) >= (1-eps) H(X) when Y never lies but may output "?"
* "holevo":        I(X:Y) <= chi of the encoding ensemble, for any measurement
* "holevo-lv":     chi >= (1-eps) H(X) when a measurement recovers x or "?"
* "araki-lieb":    S(XY) >= |S(X) - S(Y)|
* "cond-mutual":   S(X:Y|Z) <= 2 S(X)
* "separable":     S(XY) >= S(X) and S(X:Y) <= S(X) for separable-by-construction states
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import (
    ATOL,
    EIG_CLIP,
    partial_trace,
    proj,
    random_density,
    random_distribution,
    random_pure_state,
)

INEQUALITY_KINDS = (
    "fano", "fano-lv", "holevo", "holevo-lv", "araki-lieb", "cond-mutual", "separable",
)


def _xlog2x(p: np.ndarray) -> float:
    p = np.asarray(p, dtype=float)
    p = p[p > EIG_CLIP]
    return float(-(p * np.log2(p)).sum()) + 0.0  # avoid -0.0


def shannon_entropy(p) -> float:
    """H of a probability vector, in bits; 0 log 0 = 0."""
    return _xlog2x(np.asarray(p, dtype=float).ravel())


def binary_entropy(alpha: float) -> float:
    return shannon_entropy([alpha, 1.0 - alpha])


def mutual_information(pxy) -> float:
    """I(X:Y) = H(X) + H(Y) - H(XY) of a joint distribution matrix."""
    pxy = np.asarray(pxy, dtype=float)
    return shannon_entropy(pxy.sum(axis=1)) + shannon_entropy(pxy.sum(axis=0)) - shannon_entropy(pxy)


def conditional_entropy(pxy) -> float:
    """H(X|Y) = H(XY) - H(Y)."""
    pxy = np.asarray(pxy, dtype=float)
    return shannon_entropy(pxy) - shannon_entropy(pxy.sum(axis=0))


def von_neumann_entropy(rho: np.ndarray) -> float:
    """S(rho) = -tr(rho log2 rho); eigenvalues below the clip count as zero."""
    eig = np.linalg.eigvalsh(np.asarray(rho, dtype=complex))
    return _xlog2x(eig)


def holevo_information(ensemble) -> float:
    """chi = S(sum p rho) - sum p S(rho) for an ensemble [(p, rho), ...]."""
    probs = [p for p, _ in ensemble]
    if any(p < 0 for p in probs) or abs(sum(probs) - 1) > 1e-12:
        raise ValueError("ensemble probabilities must be nonnegative and sum to 1")
    avg = sum(p * rho for p, rho in ensemble)
    return von_neumann_entropy(avg) - sum(p * von_neumann_entropy(rho) for p, rho in ensemble)


def info(measure: str, *args) -> float:
    """Dispatcher over the named measures (CLI convenience)."""
    table = {
        "shannon": shannon_entropy,
        "binary": binary_entropy,
        "mutual": mutual_information,
        "conditional": conditional_entropy,
        "von-neumann": von_neumann_entropy,
        "holevo": holevo_information,
    }
    if measure not in table:
        raise ValueError(f"unknown measure {measure!r}")
    return table[measure](*args)


# ---------------------------------------------------------------------------
# inequality instances
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FanoInstance:
    pxy: np.ndarray  # 2x2 joint of Boolean X, Y


@dataclass(frozen=True)
class FanoLVInstance:
    px: np.ndarray        # distribution of X over k values
    giveup: np.ndarray    # per-value probability of Y = "?"


@dataclass(frozen=True)
class HolevoInstance:
    probs: np.ndarray
    states: tuple[np.ndarray, ...]
    povm: tuple[np.ndarray, ...]


@dataclass(frozen=True)
class HolevoLVInstance:
    """Block-orthogonal encoding: state x lives in block x except for weight
    giveup[x] placed in a shared "?" block, so a block measurement recovers x
    or gives up and never errs."""

    probs: np.ndarray
    block_states: tuple[np.ndarray, ...]   # one density per x, on the block dim
    giveup: np.ndarray
    fail_states: tuple[np.ndarray, ...]    # per x, density on the "?" block


@dataclass(frozen=True)
class BipartiteInstance:
    rho: np.ndarray
    dims: tuple[int, int]


@dataclass(frozen=True)
class TripartiteInstance:
    rho: np.ndarray
    dims: tuple[int, int, int]


@dataclass(frozen=True)
class SeparableInstance:
    terms: tuple[tuple[float, np.ndarray, np.ndarray], ...]  # (q, rho_X, rho_Y)


def _holevo_lv_matrices(inst: HolevoLVInstance):
    k = len(inst.probs)
    bd = inst.block_states[0].shape[0]
    fd = inst.fail_states[0].shape[0]
    dim = k * bd + fd
    sigmas = []
    for x in range(k):
        s = np.zeros((dim, dim), dtype=complex)
        g = inst.giveup[x]
        s[x * bd:(x + 1) * bd, x * bd:(x + 1) * bd] = (1 - g) * inst.block_states[x]
        s[k * bd:, k * bd:] = g * inst.fail_states[x]
        sigmas.append(s)
    return sigmas


def check_inequality(kind: str, instance) -> tuple[bool, float]:
    """Evaluate one inequality on an instance; returns (holds, slack >= 0?)."""
    if kind == "fano":
        pxy = np.asarray(instance.pxy, dtype=float)
        eps = pxy[0, 1] + pxy[1, 0]
        slack = mutual_information(pxy) - (shannon_entropy(pxy.sum(axis=1)) - binary_entropy(eps))
    elif kind == "fano-lv":
        px, giveup = np.asarray(instance.px), np.asarray(instance.giveup)
        k = len(px)
        pxy = np.zeros((k, k + 1))
        for x in range(k):
            pxy[x, x] = px[x] * (1 - giveup[x])
            pxy[x, k] = px[x] * giveup[x]
        eps = float(giveup.max())
        slack = mutual_information(pxy) - (1 - eps) * shannon_entropy(px)
    elif kind == "holevo":
        probs, states, povm = instance.probs, instance.states, instance.povm
        chi = holevo_information(list(zip(probs, states)))
        pxy = np.array([
            [p * float(np.trace(e @ rho).real) for e in povm]
            for p, rho in zip(probs, states)
        ])
        slack = chi - mutual_information(pxy)
    elif kind == "holevo-lv":
        sigmas = _holevo_lv_matrices(instance)
        chi = holevo_information(list(zip(instance.probs, sigmas)))
        eps = float(np.asarray(instance.giveup).max())
        slack = chi - (1 - eps) * shannon_entropy(instance.probs)
    elif kind == "araki-lieb":
        da, db = instance.dims
        s_xy = von_neumann_entropy(instance.rho)
        s_x = von_neumann_entropy(partial_trace(instance.rho, [da, db], [0]))
        s_y = von_neumann_entropy(partial_trace(instance.rho, [da, db], [1]))
        slack = s_xy - abs(s_x - s_y)
    elif kind == "cond-mutual":
        dims = list(instance.dims)
        rho = instance.rho
        s_x = von_neumann_entropy(partial_trace(rho, dims, [0]))
        s_xz = von_neumann_entropy(partial_trace(rho, dims, [0, 2]))
        s_yz = von_neumann_entropy(partial_trace(rho, dims, [1, 2]))
        s_z = von_neumann_entropy(partial_trace(rho, dims, [2]))
        s_xyz = von_neumann_entropy(rho)
        slack = 2 * s_x - (s_xz + s_yz - s_z - s_xyz)
    elif kind == "separable":
        da = instance.terms[0][1].shape[0]
        db = instance.terms[0][2].shape[0]
        rho = sum(q * np.kron(rx, ry) for q, rx, ry in instance.terms)
        s_xy = von_neumann_entropy(rho)
        s_x = von_neumann_entropy(partial_trace(rho, [da, db], [0]))
        s_y = von_neumann_entropy(partial_trace(rho, [da, db], [1]))
        mutual = s_x + s_y - s_xy
        slack = min(s_xy - s_x, s_x - mutual)
    else:
        raise ValueError(f"unknown inequality kind {kind!r}")
    return slack >= -ATOL, float(slack)


def _random_povm(dim: int, outcomes: int, rng: np.random.Generator):
    mats = [random_density(dim, rng) + 0.05 * np.eye(dim) for _ in range(outcomes)]
    total = sum(mats)
    eig, vec = np.linalg.eigh(total)
    inv_sqrt = vec @ np.diag(eig ** -0.5) @ vec.conj().T
    return tuple(inv_sqrt @ m @ inv_sqrt for m in mats)


def random_instance(kind: str, rng: np.random.Generator):
    """Draw a valid instance of the given inequality kind."""
    if kind == "fano":
        return FanoInstance(random_distribution(4, rng).reshape(2, 2))
    if kind == "fano-lv":
        k = int(rng.integers(2, 6))
        return FanoLVInstance(random_distribution(k, rng), rng.random(k) * 0.9)
    if kind == "holevo":
        dim = int(rng.integers(2, 5))
        k = int(rng.integers(2, 5))
        states = tuple(random_density(dim, rng) for _ in range(k))
        povm = _random_povm(dim, int(rng.integers(2, 5)), rng)
        return HolevoInstance(random_distribution(k, rng), states, povm)
    if kind == "holevo-lv":
        k = int(rng.integers(2, 5))
        bd = int(rng.integers(1, 3))
        fd = int(rng.integers(1, 3))
        return HolevoLVInstance(
            random_distribution(k, rng),
            tuple(random_density(bd, rng) for _ in range(k)),
            rng.random(k) * 0.9,
            tuple(random_density(fd, rng) for _ in range(k)),
        )
    if kind == "araki-lieb":
        da, db = int(rng.integers(2, 4)), int(rng.integers(2, 4))
        if rng.random() < 0.3:
            rho = proj(random_pure_state(da * db, rng))  # includes near-EPR cases
        else:
            rho = random_density(da * db, rng)
        return BipartiteInstance(rho, (da, db))
    if kind == "cond-mutual":
        dims = (2, 2, 2)
        return TripartiteInstance(random_density(8, rng), dims)
    if kind == "separable":
        terms = int(rng.integers(1, 5))
        q = random_distribution(terms, rng)
        return SeparableInstance(tuple(
            (float(q[t]), random_density(2, rng), random_density(2, rng))
            for t in range(terms)
        ))
    raise ValueError(f"unknown inequality kind {kind!r}")


def sweep_inequality(kind: str, count: int, seed: int) -> tuple[bool, float]:
    """Check ``count`` seeded instances; returns (all hold, minimum slack)."""
    rng = np.random.default_rng(seed)
    min_slack = np.inf
    ok = True
    for _ in range(count):
        holds, slack = check_inequality(kind, random_instance(kind, rng))
        ok = ok and holds
        min_slack = min(min_slack, slack)
    return ok, float(min_slack)
