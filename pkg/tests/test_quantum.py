"""Quantum sublibrary: entropies, inequalities, channels, protocols, trees."""

import itertools
import random

import numpy as np
import pytest

from neclab import boolfn
from neclab import formula as F
from neclab import quantum as q
from neclab.quantum.channels import apply_dilation
from neclab.quantum.info import (
    BipartiteInstance,
    FanoInstance,
    FanoLVInstance,
    HolevoInstance,
)
from neclab.quantum.linalg import is_density, random_distribution


def test_entropy_values():
    assert q.von_neumann_entropy(np.eye(2) / 2) == pytest.approx(1.0)
    assert q.binary_entropy(0.5) == pytest.approx(1.0)
    assert q.binary_entropy(0.0) == 0.0
    assert q.shannon_entropy([0.25] * 4) == pytest.approx(2.0)


def test_holevo_orthogonal_bits():
    ens = [(0.5, np.diag([1.0, 0.0]).astype(complex)),
           (0.5, np.diag([0.0, 1.0]).astype(complex))]
    assert q.holevo_information(ens) == pytest.approx(1.0)


def test_info_dispatcher():
    assert q.info("binary", 0.5) == pytest.approx(1.0)
    assert q.info("von-neumann", np.eye(4) / 4) == pytest.approx(2.0)
    with pytest.raises(ValueError):
        q.info("nope", 1)


def test_conditional_and_mutual_consistency():
    rng = np.random.default_rng(0)
    for _ in range(50):
        pxy = random_distribution(6, rng).reshape(2, 3)
        hx = q.shannon_entropy(pxy.sum(axis=1))
        hxy = q.shannon_entropy(pxy)
        hy = q.shannon_entropy(pxy.sum(axis=0))
        assert q.conditional_entropy(pxy) == pytest.approx(hxy - hy)
        assert q.mutual_information(pxy) == pytest.approx(hx + hy - hxy)


def test_fano_equality_case():
    holds, slack = q.check_inequality("fano", FanoInstance(np.array([[0.5, 0.0], [0.0, 0.5]])))
    assert holds and slack == pytest.approx(0.0, abs=1e-12)


def test_fano_lv_zero_giveup():
    inst = FanoLVInstance(np.array([0.3, 0.7]), np.array([0.0, 0.0]))
    holds, slack = q.check_inequality("fano-lv", inst)
    assert holds and slack == pytest.approx(0.0, abs=1e-9)


def test_holevo_fixed_povm_positive_slack():
    plus = np.array([1, 1], dtype=complex) / np.sqrt(2)
    ens_states = (np.diag([1.0, 0.0]).astype(complex), np.outer(plus, plus.conj()))
    povm = (np.diag([1.0, 0.0]).astype(complex), np.diag([0.0, 1.0]).astype(complex))
    inst = HolevoInstance(np.array([0.5, 0.5]), ens_states, povm)
    holds, slack = q.check_inequality("holevo", inst)
    assert holds and slack > 0


def test_araki_lieb_epr_equality():
    epr = q.proj(q.PHI_PLUS)
    holds, slack = q.check_inequality("araki-lieb", BipartiteInstance(epr, (2, 2)))
    assert holds and slack == pytest.approx(0.0, abs=1e-9)


@pytest.mark.parametrize("kind", q.INEQUALITY_KINDS)
def test_inequality_sweeps(kind):
    ok, min_slack = q.sweep_inequality(kind, 300, seed=2024)
    assert ok and min_slack >= -1e-9


def test_superdense_all_messages():
    for b1, b2 in itertools.product((0, 1), repeat=2):
        assert q.superdense(b1, b2) == (b1, b2)


def test_program_state_identity():
    p = q.program_state(np.eye(2, dtype=complex))
    assert np.allclose(p, q.PHI_PLUS)


def test_pqg_identity_success_branch():
    branches = q.pqg_branches(np.array([1, 0], dtype=complex),
                              q.program_state(np.eye(2, dtype=complex)))
    label, prob, post = branches[0]
    assert label == "phi+" and prob == pytest.approx(0.25, abs=1e-9)
    assert np.allclose(post, [1, 0])


def test_pqg_hadamard_gives_plus():
    branches = q.pqg_branches(np.array([1, 0], dtype=complex), q.program_state(q.H2))
    _, prob, post = branches[0]
    assert prob == pytest.approx(0.25, abs=1e-9)
    assert np.allclose(post, [1 / np.sqrt(2), 1 / np.sqrt(2)])


def test_pqg_quarter_branches_for_random_unitaries():
    rng = np.random.default_rng(7)
    for _ in range(20):
        u = q.random_unitary(2, rng)
        d = q.random_pure_state(2, rng)
        for _, prob, _ in q.pqg_branches(d, q.program_state(u)):
            assert prob == pytest.approx(0.25, abs=1e-9)


def test_pqg_error_bookkeeping():
    # each failure branch equals the recorded Pauli error applied before U
    rng = np.random.default_rng(3)
    u = q.random_unitary(2, rng)
    d = q.random_pure_state(2, rng)
    for label, prob, post in q.pqg_branches(d, q.program_state(u)):
        expected = u @ q.BELL_ERRORS[label] @ d
        fid = abs(np.vdot(expected / np.linalg.norm(expected), post)) ** 2
        assert fid == pytest.approx(1.0, abs=1e-9)


def test_pqg_retry_reaches_target():
    rng = np.random.default_rng(11)
    for seed in range(10):
        u = q.random_unitary(2, rng)
        d = q.random_pure_state(2, rng)
        res = q.pqg_retry(d, u, seed)
        assert abs(np.vdot(u @ d, res.state)) ** 2 >= 1 - 1e-9
        assert res.outcomes[-1] == "phi+"
        assert all(o != "phi+" for o in res.outcomes[:-1])


def test_pqg_rejects_nonunitary():
    with pytest.raises(ValueError):
        q.program_state(np.array([[1, 1], [0, 1]], dtype=complex))


def test_identity_channel_valid_and_trivial_dilation():
    ch = q.identity_channel(2)
    assert q.cptp_validate(ch)
    u, env = q.dilation(ch)
    assert env == 1 and np.allclose(u, np.eye(2))


def test_depolarizing_dilation_on_basis_densities():
    ch = q.depolarizing_channel(1.0)
    assert q.cptp_validate(ch)
    u, env = q.dilation(ch)
    assert q.is_unitary(u)
    basis = [np.array(m, dtype=complex) for m in (
        [[1, 0], [0, 0]], [[0, 0], [0, 1]],
        [[0.5, 0.5], [0.5, 0.5]], [[0.5, -0.5j], [0.5j, 0.5]])]
    for rho in basis:
        assert np.allclose(apply_dilation(u, env, rho), ch.apply(rho), atol=1e-9)


def test_transpose_map_not_cp():
    t = q.transpose_map(2)
    assert not q.cptp_validate(t)
    assert np.linalg.eigvalsh(t.choi).min() == pytest.approx(-0.5, abs=1e-9)


def test_choi_kraus_roundtrip():
    rng = np.random.default_rng(5)
    ch = q.depolarizing_channel(0.37)
    ops = q.choi_to_kraus(q.SuperOp(2, 2, None, ch.choi))
    rebuilt = q.SuperOp.from_kraus(ops)
    rho = q.random_density(2, rng)
    assert np.allclose(rebuilt.apply(rho), ch.apply(rho), atol=1e-9)


def test_channel_outputs_are_densities():
    rng = np.random.default_rng(9)
    for ch in (q.identity_channel(2), q.depolarizing_channel(0.5), q.depolarizing_channel(1.0)):
        for _ in range(10):
            out = ch.apply(q.random_density(2, rng))
            assert is_density(out)


# ---------------------------------------------------------------------------
# formula trees
# ---------------------------------------------------------------------------

def test_qformula_identity_passthrough():
    # a single input leaf through a gate that keeps the left value
    keep_left = q.classical_gate_op(F.G_LEFT)
    tree = q.QFormulaTree(q.QGate(keep_left, q.QInput(1), q.QConst(0)))
    assert q.qformula_eval(tree, (1,)) == pytest.approx(1.0)
    assert q.qformula_eval(tree, (0,)) == pytest.approx(0.0)


def test_qformula_classical_coin_leaf():
    # auxiliary qubit declared as a classical fair coin
    mixed = (np.eye(2) / 2).astype(complex)
    keep_left = q.classical_gate_op(F.G_LEFT)
    tree = q.QFormulaTree(q.QGate(keep_left, q.QAux(0), q.QConst(0)),
                          aux_ensemble=((1.0, (mixed,)),))
    assert q.qformula_eval(tree, ()) == pytest.approx(0.5)


def test_qformula_aux_read_once_enforced():
    mixed = (np.eye(2) / 2).astype(complex)
    op = q.classical_gate_op(F.G_AND)
    with pytest.raises(Exception):
        q.QFormulaTree(q.QGate(op, q.QAux(0), q.QAux(0)),
                       aux_ensemble=((1.0, (mixed,)),))


def test_qformula_correlated_aux_ensemble():
    # two perfectly correlated classical bits: AND of them is a fair coin
    zero = np.diag([1.0, 0.0]).astype(complex)
    one = np.diag([0.0, 1.0]).astype(complex)
    tree = q.QFormulaTree(
        q.QGate(q.classical_gate_op(F.G_AND), q.QAux(0), q.QAux(1)),
        aux_ensemble=((0.5, (zero, zero)), (0.5, (one, one))),
    )
    assert q.qformula_eval(tree, ()) == pytest.approx(0.5)
    # correlated inputs are not a product state, and the check reports that
    assert not q.unentangled_inputs_check(tree, ())


def test_simulate_readonce_examples():
    cases = [
        (F.Rand(1), {(0,): 0.5, (1,): 0.5}),
        (F.xor(F.Input(1), F.Rand(1)), {(0,): 0.5, (1,): 0.5}),
        (F.and_(F.Input(1), F.Rand(1)), {(0,): 0.0, (1,): 0.5}),
    ]
    for f, expected in cases:
        tree = q.simulate_readonce_random(f)
        for x, want in expected.items():
            assert q.qformula_eval(tree, x) == pytest.approx(want, abs=1e-9)


def test_simulate_readonce_fingerprint_n1():
    # the n=1 fingerprint formula reads each of its two random bits once
    from neclab import constructions as C
    fp = C.mp_fingerprint(1)
    tree = q.simulate_readonce_random(fp)
    for xi in range(4):
        x = boolfn.index_assignment(xi, 2)
        assert q.qformula_eval(tree, x) == pytest.approx(float(F.accept_prob(fp, x)), abs=1e-9)


def test_simulate_readonce_rejects_multiple_reads():
    f = F.xor(F.Rand(1), F.Rand(1))
    with pytest.raises(Exception):
        q.simulate_readonce_random(f)


def _random_readonce(rng, size, n_vars, counter):
    if size <= 1:
        if rng.random() < 0.4:
            counter[0] += 1
            return F.Rand(counter[0])
        return F.Input(rng.randint(1, n_vars))
    split = rng.randint(1, size - 1)
    return F.Gate(rng.randint(0, 15),
                  _random_readonce(rng, split, n_vars, counter),
                  _random_readonce(rng, size - split, n_vars, counter))


def test_simulate_readonce_random_sweep():
    rng = random.Random(77)
    for _ in range(25):
        nv = rng.randint(1, 4)
        f = _random_readonce(rng, rng.randint(1, 8), nv, [0])
        tree = q.simulate_readonce_random(f)
        for xi in range(1 << nv):
            x = boolfn.index_assignment(xi, nv)
            assert abs(q.qformula_eval(tree, x) - float(F.accept_prob(f, x))) < 1e-9


def test_order_invariance_and_wire_simulator_agree():
    rng = random.Random(15)
    for _ in range(10):
        nv = rng.randint(1, 3)
        f = _random_readonce(rng, rng.randint(2, 7), nv, [0])
        tree = q.simulate_readonce_random(f)
        x = tuple(rng.randint(0, 1) for _ in range(nv))
        assert q.order_invariance_check(tree, x)
        # wire-level result agrees with the recursive evaluator
        out = np.zeros((2, 2), dtype=complex)
        for p, aux in ((1.0, ()),):
            out += p * q.eval_by_order(tree, x, q.postorder_gates(tree), aux)
        assert out[1, 1].real == pytest.approx(q.qformula_eval(tree, x), abs=1e-9)


def test_readonce_trees_have_unentangled_gate_inputs():
    rng = random.Random(23)
    for _ in range(10):
        nv = rng.randint(1, 3)
        f = _random_readonce(rng, rng.randint(2, 7), nv, [0])
        tree = q.simulate_readonce_random(f)
        x = tuple(rng.randint(0, 1) for _ in range(nv))
        assert q.unentangled_inputs_check(tree, x)


def test_densities_produced_everywhere_are_valid():
    rng = random.Random(41)
    for _ in range(10):
        f = _random_readonce(rng, 6, 2, [0])
        tree = q.simulate_readonce_random(f)
        for xi in range(4):
            x = boolfn.index_assignment(xi, 2)
            rho = q.eval_by_order(tree, x, q.postorder_gates(tree), ())
            assert is_density(rho)


# ---------------------------------------------------------------------------
# purifications
# ---------------------------------------------------------------------------

def test_relate_purifications_identity_case():
    phi = q.PHI_PLUS
    u = q.relate_purifications(phi, phi, 2, 2)
    assert np.allclose(np.kron(np.eye(2), u) @ phi, phi, atol=1e-9)


def test_relate_purifications_bell_pair():
    u = q.relate_purifications(q.PHI_PLUS, q.PSI_PLUS, 2, 2)
    assert np.allclose(u, q.X, atol=1e-9)


def test_relate_purifications_random_sweep():
    rng = np.random.default_rng(12)
    for _ in range(30):
        # same Schmidt data, two random local unitaries on the second factor
        base = q.random_pure_state(4, rng)
        u1 = q.random_unitary(2, rng)
        u2 = q.random_unitary(2, rng)
        phi1 = np.kron(np.eye(2), u1) @ base
        phi2 = np.kron(np.eye(2), u2) @ base
        u = q.relate_purifications(phi1, phi2, 2, 2)
        assert q.is_unitary(u)
        assert np.allclose(np.kron(np.eye(2), u) @ phi1, phi2, atol=1e-9)


def test_relate_purifications_rejects_different_marginals():
    with pytest.raises(ValueError):
        q.relate_purifications(q.PHI_PLUS, np.array([1, 0, 0, 0], dtype=complex), 2, 2)


def test_holevo_rejects_unnormalized_ensemble():
    with pytest.raises(ValueError):
        q.holevo_information([(0.7, np.eye(2, dtype=complex) / 2)])


def test_state_text_roundtrip():
    from neclab.quantum.linalg import parse_state_text, state_text
    rng = np.random.default_rng(77)
    for m in (q.random_density(3, rng), q.random_unitary(4, rng), q.PHI_PLUS.reshape(1, 4)):
        back = parse_state_text(state_text(m))
        assert np.allclose(back, np.atleast_2d(m), atol=1e-9)
