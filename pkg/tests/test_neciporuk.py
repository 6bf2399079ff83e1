"""The three lower-bound calculators, preset partitions, and the ratio report."""

import math

import pytest

from neclab import boolfn, commcx, constructions, neciporuk
from neclab.boolfn import BooleanFunction, FamilySpec, VarPartition
from neclab.errors import CapExceeded


def parity(n):
    return BooleanFunction(n, lambda x: sum(x) & 1)


def test_standard_parity_quarter_n():
    for n in (3, 6, 9):
        rep = neciporuk.neciporuk(parity(n), VarPartition.singletons(n))
        assert rep.total == pytest.approx(n / 4)
        assert all(b.value == pytest.approx(1.0) for b in rep.per_block)


def test_standard_constant_zero():
    f = BooleanFunction(5, lambda x: 1)
    rep = neciporuk.neciporuk(f, VarPartition.of(5, [{1, 2}, {3}, {4, 5}]))
    assert rep.total == 0


def test_standard_isa4_matches_split_row_oracle():
    # oracle: per-block distinct rows of the communication game
    f = boolfn.isa_function(4)
    p = neciporuk.preset_partition(FamilySpec("ISA", 4))
    expected = sum(
        math.log2(commcx.det_cc(boolfn.comm_split(f, blk))[0]) for blk in p.blocks
    ) / 4
    rep = neciporuk.neciporuk(f, p)
    assert rep.total == pytest.approx(expected) == pytest.approx(3.0)


def test_standard_marks_oversized_blocks_unavailable():
    f = boolfn.isa_function(16)
    rep = neciporuk.neciporuk(f, neciporuk.preset_partition(FamilySpec("ISA", 16)))
    assert rep.incomplete
    assert any(b.status == neciporuk.STATUS_UNAVAILABLE for b in rep.per_block)


def test_vc_ix4_data_singletons():
    f = boolfn.ix_function(4)
    p = VarPartition.of(6, [{1}, {2}, {3}, {4}, {5, 6}])
    rep = neciporuk.vc_neciporuk(f, p)
    values = {b.block: b.value for b in rep.per_block}
    for v in range(1, 5):
        assert values[(v,)] >= 1.0
    assert values[(5, 6)] == 4.0
    assert rep.total == 8.0


def test_vc_constant_zero():
    f = BooleanFunction(4, lambda x: 0)
    rep = neciporuk.vc_neciporuk(f, VarPartition.singletons(4))
    assert rep.total == 0


def test_vc_singletons_linear_for_dependent_functions():
    # a function depending on every variable gets >= 1 per singleton game
    for f in (parity(5), BooleanFunction(4, lambda x: int(sum(x) >= 2))):
        rep = neciporuk.vc_neciporuk(f, VarPartition.singletons(f.arity))
        assert all(b.value >= 1.0 for b in rep.per_block)
        assert rep.total >= f.arity


def test_vc_isa16_witness_path():
    f = boolfn.isa_function(16)
    p = neciporuk.preset_partition(FamilySpec("ISA", 16))
    witnesses = {b: constructions.isa_shatter_witness(16, b) for b in range(4)}
    rep = neciporuk.vc_neciporuk(f, p, witnesses)
    witness_blocks = [b for b in rep.per_block if b.status == neciporuk.STATUS_WITNESS]
    assert len(witness_blocks) == 4
    assert all(b.value == 16.0 for b in witness_blocks)
    assert rep.total >= 64.0


def test_vc_per_block_le_log_subfunctions():
    for f in (boolfn.ix_function(4), boolfn.disj_function(3), boolfn.isa_function(4)):
        p = VarPartition.singletons(f.arity)
        vc_rep = neciporuk.vc_neciporuk(f, p)
        std_rep = neciporuk.neciporuk(f, p)
        for vb, sb in zip(vc_rep.per_block, std_rep.per_block):
            assert vb.value <= math.ceil(sb.value) + 1e-12


def test_nondet_s0_matches_standard_up_to_ceiling():
    f = BooleanFunction(4, lambda x: (x[0] & x[1]) | (x[2] & x[3]))
    p = VarPartition.singletons(4)
    nd = neciporuk.nondet_neciporuk(f, p, 0)
    std = neciporuk.neciporuk(f, p)
    for nb, sb in zip(nd.per_block, std.per_block):
        assert nb.value == math.ceil(sb.value - 1e-12)


def test_nondet_constant_zero():
    f = BooleanFunction(3, lambda x: 0)
    rep = neciporuk.nondet_neciporuk(f, VarPartition.singletons(3), 1)
    assert rep.total == 0


def test_nondet_and3_s1():
    f = BooleanFunction(3, lambda x: x[0] & x[1] & x[2])
    rep = neciporuk.nondet_neciporuk(f, VarPartition.singletons(3), 1)
    assert [b.value for b in rep.per_block] == [1.0, 1.0, 1.0]
    assert rep.total == pytest.approx(0.75)


def test_nondet_monotone_in_s():
    f = BooleanFunction(4, lambda x: int(sum(x) >= 2))
    p = VarPartition.singletons(4)
    totals = [neciporuk.nondet_neciporuk(f, p, s).total for s in (0, 1, 2)]
    assert totals[0] >= totals[1] >= totals[2]


def test_preset_partitions():
    p = neciporuk.preset_partition(FamilySpec("ISA", 4))
    assert sorted(sorted(b) for b in p.blocks) == [[1, 6, 7, 8, 9], [2, 3], [4, 5]]
    p = neciporuk.preset_partition(FamilySpec("MP", 2))
    assert sorted(sorted(b) for b in p.blocks) == [[1, 2, 3, 4], [5, 7], [6, 8]]
    p = neciporuk.preset_partition(FamilySpec("AD", 2, 1))
    assert sorted(sorted(b) for b in p.blocks) == [[1, 2, 3], [4, 5, 6], [7, 8, 9]]
    p = neciporuk.preset_partition(FamilySpec("DISJ", 3))
    assert len(p.blocks) == 6 and all(len(b) == 1 for b in p.blocks)


def test_ratio_report():
    f = boolfn.isa_function(4)
    p = neciporuk.preset_partition(FamilySpec("ISA", 4))
    sum_d = sum(commcx.det_cc(boolfn.comm_split(f, b))[1] for b in p.blocks)
    assert neciporuk.ratio_report(f, p, sum_d) == pytest.approx(1.0)
    assert neciporuk.ratio_report(f, p, 4) == pytest.approx(sum_d / 4)
    # matrix-product game with the fingerprint formula's size plugged in
    from neclab import formula as F
    mp2 = boolfn.mp_function(2)
    pm = neciporuk.preset_partition(FamilySpec("MP", 2))
    size = F.size(constructions.mp_fingerprint(2))
    assert size == 16
    ratio = neciporuk.ratio_report(mp2, pm, size)
    assert ratio == pytest.approx(9 / 16)


def test_report_totals_assembly():
    f = parity(4)
    p = VarPartition.singletons(4)
    std = neciporuk.neciporuk(f, p)
    assert std.total == pytest.approx(sum(b.value for b in std.per_block) / 4)
    vc = neciporuk.vc_neciporuk(f, p)
    assert vc.total == pytest.approx(sum(b.value for b in vc.per_block))
    assert all(b.value >= 0 for b in std.per_block + vc.per_block)


def test_per_block_value_capped_by_block_size():
    # log2 of a block's subfunction count can never exceed 2^|block|
    for f, p in [
        (boolfn.isa_function(4), neciporuk.preset_partition(FamilySpec("ISA", 4))),
        (boolfn.mp_function(2), neciporuk.preset_partition(FamilySpec("MP", 2))),
        (parity(6), VarPartition.of(6, [{1, 2}, {3, 4, 5}, {6}])),
    ]:
        rep = neciporuk.neciporuk(f, p)
        for b in rep.per_block:
            assert b.value <= (1 << len(b.block)) + 1e-9
