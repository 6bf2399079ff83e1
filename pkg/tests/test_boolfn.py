"""Boolean functions, restrictions, families, and the truth-table format."""

import random

import pytest

from neclab import boolfn, commcx
from neclab.boolfn import BooleanFunction, FamilySpec, VarPartition, index_assignment
from neclab.errors import CapExceeded, InvalidInput


# independent straight-line re-implementation of the storage-access rule,
# used as the oracle for isa_function
def isa_oracle(n, u_bits, x_bits, y_bits):
    lg = n.bit_length() - 1
    u = 0
    for k, b in enumerate(u_bits):
        u += b * (2 ** k)
    block = x_bits[u * lg:(u + 1) * lg]
    v = 0
    for k, b in enumerate(block):
        v += b * (2 ** k)
    return y_bits[v]


def mp_oracle(t1, t2):
    n = len(t1)
    prod = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            acc = 0
            for k in range(n):
                acc += t1[i][k] * t2[k][j]
            prod[i][j] = acc % 2
    return int(any(any(row) for row in prod))


def test_eval_constant():
    f = BooleanFunction(3, lambda x: 0)
    assert all(f.eval(index_assignment(i, 3)) == 0 for i in range(8))


def test_eval_ix_examples():
    f = boolfn.ix_function(4)
    # x = 1000 (x_1 = 1), selector 0 -> x_1
    assert f.eval((1, 0, 0, 0, 0, 0)) == 1
    assert f.eval((0, 1, 0, 0, 0, 0)) == 0
    # selector 1 (y_1 = 1) -> x_2
    assert f.eval((0, 1, 0, 0, 1, 0)) == 1


def test_eval_disj_examples():
    f = boolfn.disj_function(2)
    assert f.eval((1, 0, 0, 1)) == 1
    assert f.eval((1, 0, 1, 0)) == 0


def test_eval_arity_mismatch():
    f = boolfn.disj_function(2)
    with pytest.raises(InvalidInput):
        f.eval((1, 0, 0))


def test_table_matches_predicate_on_families():
    fams = [
        boolfn.ix_function(4),
        boolfn.ix_function(3),
        boolfn.ix_function(8),
        boolfn.disj_function(3),
        boolfn.isa_function(2),
        boolfn.isa_function(4),
        boolfn.mp_function(2),
        boolfn.d_function(2, 1),
        boolfn.ad_function(2, 1),
    ]
    for f in fams:
        assert f.arity <= 16
        t = f.table
        for idx in range(1 << f.arity):
            assert (t >> idx) & 1 == f.predicate(index_assignment(idx, f.arity))


def test_restrict_parity():
    f = BooleanFunction(2, lambda x: x[0] ^ x[1])
    g = boolfn.restrict(f, {1: 1})
    assert [g.eval((b,)) for b in (0, 1)] == [1, 0]  # not-x2


def test_restrict_absorbing():
    f = BooleanFunction(2, lambda x: x[0] & x[1])
    g = boolfn.restrict(f, {1: 0})
    assert g.table == 0


def test_restrict_mp_first_matrix_identity():
    # fixing the first matrix to the identity leaves the nonzero test on the second
    mp2 = boolfn.mp_function(2)
    fix = {boolfn.mp_entry_position(1, i, j, 2): int(i == j)
           for i in (1, 2) for j in (1, 2)}
    r = boolfn.restrict(mp2, fix)
    assert r.arity == 4
    # oracle: enumerate all 16 second matrices by hand multiplication
    expected = 0
    for idx in range(16):
        x = index_assignment(idx, 4)
        t2 = [[x[0], x[1]], [x[2], x[3]]]
        if mp_oracle([[1, 0], [0, 1]], t2):
            expected |= 1 << idx
    assert r.table == expected == 0xFFFE


def test_restrict_composes_with_merged_fixing():
    rng = random.Random(11)
    for f in (boolfn.isa_function(4), boolfn.mp_function(2), boolfn.disj_function(4)):
        for _ in range(25):
            p1, p2 = rng.sample(range(1, f.arity + 1), 2)
            v1, v2 = rng.randint(0, 1), rng.randint(0, 1)
            merged = boolfn.restrict(f, {p1: v1, p2: v2})
            p2_shifted = p2 - (1 if p2 > p1 else 0)
            stepwise = boolfn.restrict(boolfn.restrict(f, {p1: v1}), {p2_shifted: v2})
            assert stepwise.table == merged.table


def test_subfunction_count_parity():
    f = BooleanFunction(3, lambda x: x[0] ^ x[1] ^ x[2])
    assert boolfn.subfunction_count(f, {1}) == 2


def test_subfunction_count_constant():
    f = BooleanFunction(4, lambda x: 1)
    assert boolfn.subfunction_count(f, {2, 3}) == 1


def test_subfunction_count_isa_matches_exhaustive_oracle():
    # oracle: fix all variables outside the block through restrict, compare tables
    f = boolfn.isa_function(4)
    upos, xpos, ypos = boolfn.isa_layout(4)
    block = set(xpos[:2])
    others = [p for p in range(1, f.arity + 1) if p not in block]
    seen = set()
    for idx in range(1 << len(others)):
        fixing = {p: (idx >> k) & 1 for k, p in enumerate(others)}
        seen.add(boolfn.restrict(f, fixing).table)
    assert boolfn.subfunction_count(f, block) == len(seen) == 16


def test_subfunction_count_bounds_and_split_consistency():
    rng = random.Random(5)
    for _ in range(10):
        arity = rng.randint(2, 8)
        f = BooleanFunction.from_table(arity, rng.getrandbits(1 << arity))
        k = rng.randint(1, arity - 1)
        block = set(rng.sample(range(1, arity + 1), k))
        cnt = boolfn.subfunction_count(f, block)
        assert 1 <= cnt <= 2 ** (2 ** len(block))
        rows, _ = commcx.det_cc(boolfn.comm_split(f, block))
        assert cnt == rows


def test_subfunction_count_cap():
    f = boolfn.isa_function(16)
    _, xpos, _ = boolfn.isa_layout(16)
    with pytest.raises(CapExceeded):
        boolfn.subfunction_count(f, set(xpos[:4]))


def test_restrict_error_paths():
    f = boolfn.disj_function(2)
    with pytest.raises(InvalidInput):
        boolfn.restrict(f, {9: 1})
    with pytest.raises(InvalidInput):
        boolfn.restrict(f, {1: 0, 2: 0, 3: 0, 4: 0})  # nothing left


def test_make_family_mp_examples():
    mp2 = boolfn.mp_function(2)
    ident = [0] * 8
    for w in (1, 2):
        for i in (1, 2):
            ident[boolfn.mp_entry_position(w, i, i, 2) - 1] = 1
    assert mp2.eval(tuple(ident)) == 1
    # T1 = [[1,0],[0,0]], T2 = [[0,0],[1,0]]: product zero by hand multiplication
    x = [0] * 8
    x[boolfn.mp_entry_position(1, 1, 1, 2) - 1] = 1
    x[boolfn.mp_entry_position(2, 2, 1, 2) - 1] = 1
    assert mp_oracle([[1, 0], [0, 0]], [[0, 0], [1, 0]]) == 0
    assert mp2.eval(tuple(x)) == 0


def test_mp_agrees_with_hand_multiplication():
    mp2 = boolfn.mp_function(2)
    for idx in range(256):
        x = index_assignment(idx, 8)
        t1, t2 = boolfn.mp_matrices(x, 2)
        assert mp2.eval(x) == mp_oracle(t1, t2)


def test_isa_agrees_with_straightline_oracle():
    f = boolfn.isa_function(4)
    upos, xpos, ypos = boolfn.isa_layout(4)
    for idx in range(1 << f.arity):
        x = index_assignment(idx, f.arity)
        u_bits = [x[p - 1] for p in upos]
        x_bits = [x[p - 1] for p in xpos]
        y_bits = [x[p - 1] for p in ypos]
        assert f.eval(x) == isa_oracle(4, u_bits, x_bits, y_bits)


def test_isa_spec_example():
    # selector 0, data block (1,0) reads as 1, so the output is the second y bit
    f = boolfn.isa_function(4)
    assert f.eval((0,) + (1, 0, 0, 0) + (0, 0, 1, 0)) == 0
    assert f.eval((0,) + (1, 0, 0, 0) + (0, 1, 0, 0)) == 1


def test_isa_smallest_size():
    # n=2: a one-bit pointer to one of two one-bit data blocks
    f = boolfn.isa_function(2)
    assert f.arity == 5
    for idx in range(32):
        x = index_assignment(idx, 5)
        u, xb, yb = x[0], x[1:3], x[3:5]
        assert f.eval(x) == isa_oracle(2, [u], list(xb), list(yb))


def test_isa_param_validation():
    for bad in (3, 8, 32):
        with pytest.raises(InvalidInput):
            FamilySpec("ISA", bad)
    for good in (2, 4, 16):
        FamilySpec("ISA", good)


def test_d_and_ad_functions():
    d = boolfn.d_function(2, 2)
    ad = boolfn.ad_function(2, 2)

    def encode(sets):
        bits = []
        for st in sets:
            for e in st:
                v = e - 1
                bits.extend([(v >> k) & 1 for k in range(3)])
        return tuple(bits)

    # three sets pairwise sharing elements through set 1
    yes = encode([(1, 2), (1, 5), (2, 7)])
    assert d.eval(yes) == 1 and ad.eval(yes) == 1
    # pairwise disjoint
    no = encode([(1, 2), (3, 4), (5, 6)])
    assert d.eval(no) == 0 and ad.eval(no) == 0
    # unsorted encoding: rejected by the sorted language, tolerated as a set
    unsorted_yes = encode([(2, 1), (1, 5), (2, 7)])
    assert ad.eval(unsorted_yes) == 0
    assert d.eval(unsorted_yes) == 1
    # repeated element: malformed for both
    malformed = encode([(1, 1), (1, 5), (2, 7)])
    assert d.eval(malformed) == 0 and ad.eval(malformed) == 0


def test_comm_split_trivial_and():
    f = BooleanFunction(2, lambda x: x[0] & x[1])
    m = boolfn.comm_split(f, {2})
    assert [[m.entry(r, c) for c in range(2)] for r in range(2)] == [[0, 0], [0, 1]]


def test_comm_split_ix_rows_enumerate_data():
    m = boolfn.comm_split(boolfn.ix_function(4), boolfn.ix_selector_block(4))
    assert m.rows == 16 and m.cols == 4
    assert len(set(m.row_bits)) == 16
    # labels carry the originating assignments
    assert m.row_labels[5] == index_assignment(5, 4)
    assert m.col_labels[2] == index_assignment(2, 2)


def test_comm_split_disj_cellwise():
    f = boolfn.disj_function(2)
    m = boolfn.comm_split(f, {3, 4})
    assert (m.rows, m.cols) == (4, 4)
    for r in range(4):
        for c in range(4):
            x = index_assignment(r, 2) + index_assignment(c, 2)
            assert m.entry(r, c) == f.eval(x)


def test_comm_split_caps():
    with pytest.raises(CapExceeded):
        boolfn.comm_split(boolfn.isa_function(16), set(boolfn.isa_layout(16)[1][:4]))


def test_var_partition_validation():
    VarPartition.of(3, [{1}, {2, 3}])
    with pytest.raises(InvalidInput):
        VarPartition.of(3, [{1}, {2}])
    with pytest.raises(InvalidInput):
        VarPartition.of(3, [{1, 2}, {2, 3}])


def test_table_text_roundtrip():
    rng = random.Random(3)
    for arity in (1, 2, 5, 8):
        f = BooleanFunction.from_table(arity, rng.getrandbits(1 << arity))
        text = boolfn.format_table_text(f)
        g = boolfn.parse_table_text(text)
        assert g.arity == arity and g.table == f.table
    assert boolfn.format_table_text(BooleanFunction.from_table(2, 0b1000)) == "vars=2\n8\n"
