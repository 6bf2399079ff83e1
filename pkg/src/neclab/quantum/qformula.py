"""Trees of fan-in-2, fan-out-1 superoperator gates over input qubits and a
declared nonentangled auxiliary state.

The auxiliary state is an ensemble of product states (one single-qubit density
per auxiliary qubit per ensemble member); each auxiliary qubit may be read by
exactly one leaf.  Evaluation propagates single-qubit densities up the tree for
each ensemble member and averages; an independent wire-level simulator applies
the gates in an explicit topological order on a joint density matrix and is
used for the order-invariance check.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .. import formula as cf
from ..errors import CapExceeded, InvalidInput
from .channels import SuperOp
from .linalg import ATOL, H2, I2, XOR_GATE, ket, proj

LIVE_QUBIT_CAP = 12


@dataclass(frozen=True, eq=False)
class QInput:
    index: int  # 1-based classical input variable


@dataclass(frozen=True, eq=False)
class QConst:
    value: int


@dataclass(frozen=True, eq=False)
class QAux:
    index: int  # 0-based qubit of the auxiliary state


@dataclass(frozen=True, eq=False)
class QGate:
    op: SuperOp  # dims 4 -> 2
    left: "QNode"
    right: "QNode"

    def __post_init__(self):
        if self.op.dim_in != 4 or self.op.dim_out != 2:
            raise InvalidInput("tree gates must map two qubits to one")


QNode = QInput | QConst | QAux | QGate

#: ensemble member: (probability, tuple of single-qubit densities, one per aux qubit)
AuxEnsemble = tuple[tuple[float, tuple[np.ndarray, ...]], ...]


@dataclass(frozen=True)
class QFormulaTree:
    root: QNode
    aux_ensemble: AuxEnsemble = ()

    def __post_init__(self):
        counts: dict[int, int] = {}
        for node in iter_nodes(self.root):
            if isinstance(node, QAux):
                counts[node.index] = counts.get(node.index, 0) + 1
        if any(c > 1 for c in counts.values()):
            raise InvalidInput("each auxiliary qubit may be read by exactly one leaf")
        if counts:
            n_aux = max(counts) + 1
            if not self.aux_ensemble:
                raise InvalidInput("auxiliary leaves present but no ensemble declared")
            probs = [p for p, _ in self.aux_ensemble]
            if abs(sum(probs) - 1) > 1e-12:
                raise InvalidInput("ensemble probabilities must sum to 1")
            if any(len(states) < n_aux for _, states in self.aux_ensemble):
                raise InvalidInput("ensemble member missing auxiliary qubits")

    @property
    def gates(self) -> tuple[QGate, ...]:
        return tuple(n for n in iter_nodes(self.root) if isinstance(n, QGate))

    @property
    def qubit_count(self) -> int:
        return sum(1 for n in iter_nodes(self.root) if not isinstance(n, QGate))


def iter_nodes(node: QNode):
    stack = [node]
    while stack:
        n = stack.pop()
        yield n
        if isinstance(n, QGate):
            stack.append(n.right)
            stack.append(n.left)


def _leaf_density(node: QNode, x: Sequence[int], aux_states) -> np.ndarray:
    if isinstance(node, QInput):
        if node.index > len(x):
            raise InvalidInput(f"assignment too short for input {node.index}")
        return proj(ket(x[node.index - 1], 2))
    if isinstance(node, QConst):
        return proj(ket(node.value, 2))
    if isinstance(node, QAux):
        return np.asarray(aux_states[node.index], dtype=complex)
    raise InvalidInput("not a leaf")


def _members(tree: QFormulaTree):
    if tree.aux_ensemble:
        return tree.aux_ensemble
    return ((1.0, ()),)


def _eval_member(node: QNode, x, aux_states) -> np.ndarray:
    if isinstance(node, QGate):
        left = _eval_member(node.left, x, aux_states)
        right = _eval_member(node.right, x, aux_states)
        return node.op.apply(np.kron(left, right))
    return _leaf_density(node, x, aux_states)


def qformula_eval(tree: QFormulaTree, x: Sequence[int]) -> float:
    """Probability that the output qubit measures 1."""
    if tree.qubit_count > LIVE_QUBIT_CAP:
        raise CapExceeded(f"more than {LIVE_QUBIT_CAP} qubits")
    acc = 0.0
    for p, aux_states in _members(tree):
        rho = _eval_member(tree.root, x, aux_states)
        acc += p * float(rho[1, 1].real)
    return acc


# ---------------------------------------------------------------------------
# wire-level simulator (independent evaluation path)
# ---------------------------------------------------------------------------

def _apply_2to1(state: np.ndarray, nq: int, p1: int, p2: int, kraus) -> np.ndarray:
    """Apply a (2 qubits -> 1 qubit) Kraus map to positions p1, p2 of a joint
    density on nq qubits; the output qubit lands at position 0."""
    rest = [i for i in range(nq) if i not in (p1, p2)]
    perm = [p1, p2] + rest
    t = state.reshape([2] * (2 * nq))
    t = t.transpose(perm + [nq + i for i in perm])
    r = 1 << (nq - 2)
    t = t.reshape(4, r, 4, r)
    out = np.zeros((2, r, 2, r), dtype=complex)
    for k in kraus:
        out += np.einsum("ac,crds,bd->arbs", k, t, k.conj())
    return out.reshape(2 * r, 2 * r)


def eval_by_order(tree: QFormulaTree, x: Sequence[int], order: Sequence[QGate],
                  member_states) -> np.ndarray:
    """Evaluate one ensemble member by applying gates in the given topological
    order on an explicit joint state, tensoring leaves in lazily."""
    gates = tree.gates
    if set(map(id, order)) != set(map(id, gates)) or len(order) != len(gates):
        raise InvalidInput("order must enumerate exactly the tree's gates")
    if not gates:
        return _leaf_density(tree.root, x, member_states)
    state = np.array([[1.0 + 0j]])
    wires: list[int] = []  # id() of the node whose output each live qubit carries

    def materialize(node: QNode):
        nonlocal state
        if id(node) in wires:
            return
        if isinstance(node, QGate):
            raise InvalidInput("order is not topological")
        if len(wires) + 1 > LIVE_QUBIT_CAP:
            raise CapExceeded("live qubit count exceeded the cap")
        state = np.kron(state, _leaf_density(node, x, member_states))
        wires.append(id(node))

    for gate in order:
        materialize(gate.left)
        materialize(gate.right)
        p1 = wires.index(id(gate.left))
        p2 = wires.index(id(gate.right))
        kraus = gate.op.kraus
        if kraus is None:
            from .channels import choi_to_kraus
            kraus = choi_to_kraus(gate.op)
        state = _apply_2to1(state, len(wires), p1, p2, kraus)
        rest = [w for i, w in enumerate(wires) if i not in (p1, p2)]
        wires = [id(gate)] + rest
    assert wires == [id(tree.root)]
    return state


def postorder_gates(tree: QFormulaTree, right_first: bool = False) -> list[QGate]:
    out: list[QGate] = []

    def rec(node):
        if isinstance(node, QGate):
            first, second = (node.right, node.left) if right_first else (node.left, node.right)
            rec(first)
            rec(second)
            out.append(node)

    rec(tree.root)
    return out


def order_invariance_check(tree: QFormulaTree, x: Sequence[int]) -> bool:
    """Evaluate under two topological orders and compare the averaged outputs."""
    orders = (postorder_gates(tree, False), postorder_gates(tree, True))
    results = []
    for order in orders:
        acc = np.zeros((2, 2), dtype=complex)
        for p, aux_states in _members(tree):
            acc += p * eval_by_order(tree, x, order, aux_states)
        results.append(acc)
    return bool(np.allclose(results[0], results[1], atol=ATOL))


def unentangled_inputs_check(tree: QFormulaTree, x: Sequence[int]) -> bool:
    """Check that each gate's two input qubits are in a product state."""
    for gate in tree.gates:
        joint = np.zeros((4, 4), dtype=complex)
        left = np.zeros((2, 2), dtype=complex)
        right = np.zeros((2, 2), dtype=complex)
        for p, aux_states in _members(tree):
            l = _eval_member(gate.left, x, aux_states)
            r = _eval_member(gate.right, x, aux_states)
            joint += p * np.kron(l, r)
            left += p * l
            right += p * r
        if not np.allclose(joint, np.kron(left, right), atol=ATOL):
            return False
    return True


# ---------------------------------------------------------------------------
# classical gate simulation and read-once-random transfer
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def classical_gate_op(gate_id: int) -> SuperOp:
    """(2 -> 1) superoperator computing a classical gate through a reversible
    3-qubit extension |a, b, 0> -> |a, b, g(a, b)> with the inputs traced out."""
    ops = []
    for m in range(4):
        k = np.zeros((2, 4), dtype=complex)
        k[cf.gate_value(gate_id, (m >> 1) & 1, m & 1), m] = 1
        ops.append(k)
    return SuperOp.from_kraus(ops)


@lru_cache(maxsize=None)
def coin_source_op() -> SuperOp:
    """(2 -> 1) gate turning |00> into one half of an EPR pair: a Hadamard and
    an XOR create the pair, the first qubit is never used again."""
    w = XOR_GATE @ np.kron(H2, I2)
    kraus = []
    for m in range(2):  # measurement index of the discarded first qubit
        k = np.zeros((2, 4), dtype=complex)
        for out in range(2):
            for col in range(4):
                k[out, col] = w[m * 2 + out, col]
        kraus.append(k)
    return SuperOp.from_kraus(kraus)


def simulate_readonce_random(f: cf.Formula) -> QFormulaTree:
    """Transfer a fair formula whose random variables are each read once into a
    quantum tree with no auxiliary state: every random leaf becomes the kept
    half of an EPR pair made from two constant leaves."""
    _, rnds, gss = cf.collect_vars(f)
    if gss:
        raise InvalidInput("guess leaves cannot be simulated")
    counts: dict[int, int] = {}

    def count_rands(node):
        if isinstance(node, cf.Rand):
            counts[node.index] = counts.get(node.index, 0) + 1
        elif isinstance(node, cf.Gate):
            count_rands(node.left)
            count_rands(node.right)

    count_rands(f)
    if any(c != 1 for c in counts.values()):
        raise InvalidInput("every random variable must be read exactly once")

    def build(node) -> QNode:
        if isinstance(node, cf.Input):
            return QInput(node.index)
        if isinstance(node, cf.Const):
            return QConst(node.value)
        if isinstance(node, cf.Rand):
            return QGate(coin_source_op(), QConst(0), QConst(0))
        return QGate(classical_gate_op(node.gate_id), build(node.left), build(node.right))

    return QFormulaTree(build(f))
