"""The three Neciporuk-style formula-size lower-bound calculators.

Each calculator plays one communication game per partition block (Bob holds the
block, Alice the rest) and combines per-block measures:

* standard:  (1/4) * sum of log2(#subfunctions on the block)   -- deterministic
  formula size; asymptotically also Las Vegas formula size (constant unspecified)
* vc:        sum of per-block VC-dimensions                     -- bounded-error
  probabilistic and generalized quantum formula size, asymptotically
* nondet(s): (1/4) * sum of per-block one-way N_s complexities  -- formulas with
  s nondeterministic bits

Logs are base 2 and totals are real-valued (no per-block ceiling).  Blocks
whose exact measure is out of cap are reported as unavailable and excluded
from the total, never silently zeroed; a verified shattering witness may stand
in for an out-of-cap VC value as a lower bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

from . import boolfn, commcx
from .boolfn import BooleanFunction, FamilySpec, VarPartition
from .errors import CapExceeded, InvalidInput

STATUS_EXACT = "exact"
STATUS_WITNESS = "witness-lower-bound"
STATUS_UNAVAILABLE = "unavailable"

TAG_STANDARD = (
    "quarter-sum of log2 subfunction counts; lower bound for deterministic "
    "formula size (and asymptotically for Las Vegas formula size, constant unspecified)"
)
TAG_VC = (
    "sum of per-block VC dimensions of the one-way games; asymptotic lower bound for "
    "bounded-error probabilistic and generalized quantum formula size (per-block values "
    "bound public-coin randomized one-way communication only up to an unspecified constant)"
)


def tag_nondet(s: int) -> str:
    return (
        f"quarter-sum of one-way communication complexities with {s} private guess bits; "
        f"lower bound for formulas using {s} nondeterministic bits"
    )


@dataclass(frozen=True)
class BlockMeasure:
    block: tuple[int, ...]
    value: float | None
    status: str
    detail: str = ""


@dataclass(frozen=True)
class BoundReport:
    method: str
    per_block: tuple[BlockMeasure, ...]
    total: float
    theorem_tag: str

    @property
    def incomplete(self) -> bool:
        return any(b.status == STATUS_UNAVAILABLE for b in self.per_block)


def _assemble(method: str, measures: list[BlockMeasure], quarter: bool, tag: str) -> BoundReport:
    total = sum(b.value for b in measures if b.value is not None)
    if quarter:
        total /= 4.0
    return BoundReport(method, tuple(measures), total, tag)


def neciporuk(f: BooleanFunction, p: VarPartition) -> BoundReport:
    """Standard bound: quarter-sum of per-block log2 subfunction counts."""
    if p.n != f.arity:
        raise InvalidInput("partition does not match function arity")
    measures = []
    for blk in p.blocks:
        block = tuple(sorted(blk))
        try:
            s_i = boolfn.subfunction_count(f, blk)
            measures.append(BlockMeasure(block, math.log2(s_i), STATUS_EXACT, f"subfunctions={s_i}"))
        except CapExceeded as exc:
            measures.append(BlockMeasure(block, None, STATUS_UNAVAILABLE, str(exc)))
    return _assemble("standard", measures, True, TAG_STANDARD)


def vc_neciporuk(
    f: BooleanFunction,
    p: VarPartition,
    witnesses: Mapping[int, "object"] | None = None,
) -> BoundReport:
    """VC bound: plain sum of per-block VC dimensions of the communication games.

    ``witnesses`` optionally maps a block index to a shattering witness (any
    object with ``size`` and ``verify(f) -> bool``); a verified witness stands
    in for an out-of-cap exact search as a lower bound.
    """
    if p.n != f.arity:
        raise InvalidInput("partition does not match function arity")
    witnesses = witnesses or {}
    measures = []
    for bi, blk in enumerate(p.blocks):
        block = tuple(sorted(blk))
        try:
            m = boolfn.comm_split(f, blk)
            d, witness = commcx.vc_dim(m)
            measures.append(BlockMeasure(block, float(d), STATUS_EXACT, f"witness columns={witness}"))
            continue
        except CapExceeded as exc:
            reason = str(exc)
        if bi in witnesses:
            w = witnesses[bi]
            if not w.verify(f):
                raise InvalidInput(f"shattering witness for block {bi} failed verification")
            measures.append(
                BlockMeasure(block, float(w.size), STATUS_WITNESS, "verified shattering witness")
            )
        else:
            measures.append(BlockMeasure(block, None, STATUS_UNAVAILABLE, reason))
    return _assemble("vc", measures, False, TAG_VC)


def nondet_neciporuk(f: BooleanFunction, p: VarPartition, s: int) -> BoundReport:
    """Limited-nondeterminism bound: quarter-sum of per-block exact N_s values."""
    if p.n != f.arity:
        raise InvalidInput("partition does not match function arity")
    measures = []
    for blk in p.blocks:
        block = tuple(sorted(blk))
        try:
            m = boolfn.comm_split(f, blk)
            c, _ = commcx.nondet_cc_exact(m, s)
            measures.append(BlockMeasure(block, float(c), STATUS_EXACT))
        except CapExceeded as exc:
            measures.append(BlockMeasure(block, None, STATUS_UNAVAILABLE, str(exc)))
    return _assemble(f"nondet(s={s})", measures, True, tag_nondet(s))


def preset_partition(spec: FamilySpec) -> VarPartition:
    """The partition used by each family's lower-bound argument.

    ISA: one block per log n-bit X-block plus a remainder block (U and Y);
    MP: one block per column of the second matrix plus a remainder (first matrix);
    D/AD: one block per encoded set; IX/DISJ: singletons.
    """
    f = boolfn.make_family(spec)
    n = spec.n
    if spec.name == "ISA":
        upos, xpos, ypos = boolfn.isa_layout(n)
        lg = int(math.log2(n))
        blocks = [frozenset(xpos[b * lg:(b + 1) * lg]) for b in range(n // lg)]
        blocks.append(frozenset(upos) | frozenset(ypos))
        return VarPartition(f.arity, tuple(blocks))
    if spec.name == "MP":
        blocks = [
            frozenset(boolfn.mp_entry_position(2, i, j, n) for i in range(1, n + 1))
            for j in range(1, n + 1)
        ]
        blocks.append(frozenset(boolfn.mp_entry_position(1, i, j, n)
                                for i in range(1, n + 1) for j in range(1, n + 1)))
        return VarPartition(f.arity, tuple(blocks))
    if spec.name in ("D", "AD"):
        blocks = [frozenset(boolfn.set_positions(n, spec.s, i)) for i in range(1, n + 2)]
        return VarPartition(f.arity, tuple(blocks))
    return VarPartition.singletons(f.arity)


def ratio_report(f: BooleanFunction, p: VarPartition, formula_size: int) -> float:
    """sum of per-block deterministic one-way complexities divided by a formula size."""
    if formula_size < 1:
        raise InvalidInput("formula size must be positive")
    total = 0
    for blk in p.blocks:
        m = boolfn.comm_split(f, blk)
        _, d = commcx.det_cc(m)
        total += d
    return total / formula_size
