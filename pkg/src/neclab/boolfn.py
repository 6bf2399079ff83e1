"""Total Boolean functions, variable partitions, restrictions, and the built-in families.

Conventions used everywhere in this package:

* Variables are numbered 1..n.  An assignment is a tuple ``x`` of 0/1 ints with
  ``x[i-1]`` holding the value of variable i.
* An assignment maps to the truth-table index ``sum(x[i-1] << (i-1))``, i.e.
  variable 1 is the least significant bit of the index.
* Multi-bit fields that are read as integers (selector bits, encoded set
  elements, ...) are read the same way: the field's first variable is the least
  significant bit, and the integer is zero-based.

Truth tables are stored as Python ints (bit k = value on the assignment with
index k) and only materialized for arity <= TABLE_CAP.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Mapping, Sequence

from .commcx import CommMatrix
from .errors import CapExceeded, InvalidInput

#: largest arity for which a truth table is materialized
TABLE_CAP = 24

#: caps for restriction-style enumeration (bits fixed / bits kept)
SUBFN_FIX_CAP = 20
SUBFN_BLOCK_CAP = 16

#: caps for communication-matrix materialization
SPLIT_ROW_CAP = 1 << 16
SPLIT_COL_CAP = 1 << 12
SPLIT_CELL_CAP = 1 << 22

FAMILY_NAMES = ("IX", "DISJ", "ISA", "MP", "D", "AD")


def assignment_index(x: Sequence[int]) -> int:
    idx = 0
    for i, b in enumerate(x):
        if b:
            idx |= 1 << i
    return idx


def index_assignment(idx: int, arity: int) -> tuple[int, ...]:
    return tuple((idx >> i) & 1 for i in range(arity))


# eq=False: functions are compared by identity (predicates are opaque)
@dataclass(frozen=True, eq=False)
class BooleanFunction:
    """A total function on ``arity`` named bits.

    ``predicate`` is always present; ``table`` is materialized lazily and only
    when arity <= TABLE_CAP.
    """

    arity: int
    predicate: Callable[[tuple[int, ...]], int]
    names: tuple[str, ...] = ()

    def __post_init__(self):
        if self.arity < 1:
            raise InvalidInput("arity must be >= 1")
        if self.names and len(self.names) != self.arity:
            raise InvalidInput("names must match arity")
        if not self.names:
            object.__setattr__(self, "names", tuple(f"x{i}" for i in range(1, self.arity + 1)))

    @classmethod
    def from_predicate(cls, arity, predicate, names=()):
        return cls(arity, predicate, tuple(names))

    @classmethod
    def from_table(cls, arity: int, table: int, names=()):
        if arity > TABLE_CAP:
            raise CapExceeded(f"table-backed function limited to arity {TABLE_CAP}")
        if table < 0 or table >> (1 << arity):
            raise InvalidInput("table has bits beyond 2^arity")
        f = cls(arity, lambda x: (table >> assignment_index(x)) & 1, tuple(names))
        f.__dict__["table"] = table
        return f

    @cached_property
    def table(self) -> int | None:
        """Exhaustive value table as an int bitset, or None above TABLE_CAP."""
        if self.arity > TABLE_CAP:
            return None
        t = 0
        for idx in range(1 << self.arity):
            if self.predicate(index_assignment(idx, self.arity)):
                t |= 1 << idx
        return t

    @property
    def has_table(self) -> bool:
        return self.arity <= TABLE_CAP

    def eval(self, x: Sequence[int]) -> int:
        """Value on the assignment ``x`` (length must equal arity)."""
        if len(x) != self.arity:
            raise InvalidInput(f"expected {self.arity} bits, got {len(x)}")
        t = self.__dict__.get("table")
        if t is not None:
            return (t >> assignment_index(x)) & 1
        return 1 if self.predicate(tuple(x)) else 0

    def __call__(self, x: Sequence[int]) -> int:
        return self.eval(x)


def restrict(f: BooleanFunction, fixed: Mapping[int, int]) -> BooleanFunction:
    """Fix a subset of variables (1-based positions) to constants.

    The result has arity ``f.arity - len(fixed)``; surviving variables keep
    their relative order and original names.
    """
    for pos in fixed:
        if not 1 <= pos <= f.arity:
            raise InvalidInput(f"position {pos} out of range")
    fixed = {p: v & 1 for p, v in fixed.items()}
    free = [p for p in range(1, f.arity + 1) if p not in fixed]
    if not free:
        raise InvalidInput("restriction must leave at least one variable")

    def pred(x, _free=tuple(free), _fixed=dict(fixed), _n=f.arity, _f=f):
        full = [0] * _n
        for p, v in _fixed.items():
            full[p - 1] = v
        for p, b in zip(_free, x):
            full[p - 1] = b
        return _f.eval(tuple(full))

    return BooleanFunction(len(free), pred, tuple(f.names[p - 1] for p in free))


def subfunction_count(f: BooleanFunction, block: Iterable[int]) -> int:
    """Number of distinct functions induced on ``block`` by fixing all other variables."""
    block = sorted(set(block))
    if not block or any(not 1 <= p <= f.arity for p in block):
        raise InvalidInput("block must be a nonempty subset of the variables")
    others = [p for p in range(1, f.arity + 1) if p not in set(block)]
    if len(others) > SUBFN_FIX_CAP:
        raise CapExceeded(f"{len(others)} variables to fix exceeds cap {SUBFN_FIX_CAP}")
    if len(block) > SUBFN_BLOCK_CAP:
        raise CapExceeded(f"block of {len(block)} bits exceeds cap {SUBFN_BLOCK_CAP}")
    n = f.arity
    full = [0] * n
    seen = set()
    for fix_idx in range(1 << len(others)):
        for k, p in enumerate(others):
            full[p - 1] = (fix_idx >> k) & 1
        sig = 0
        for blk_idx in range(1 << len(block)):
            for k, p in enumerate(block):
                full[p - 1] = (blk_idx >> k) & 1
            if f.eval(tuple(full)):
                sig |= 1 << blk_idx
        seen.add(sig)
    return len(seen)


def comm_split(f: BooleanFunction, bob_block: Iterable[int]) -> CommMatrix:
    """Communication matrix of the game where Bob holds ``bob_block``.

    Rows enumerate Alice's assignments (all other variables), columns Bob's;
    both sides are indexed with the package-wide little-endian convention over
    their variables in increasing position order.
    """
    bob = sorted(set(bob_block))
    if not bob or any(not 1 <= p <= f.arity for p in bob):
        raise InvalidInput("bob_block must be a nonempty subset of the variables")
    if len(bob) == f.arity:
        raise InvalidInput("bob_block must be a proper subset")
    alice = [p for p in range(1, f.arity + 1) if p not in set(bob)]
    rows, cols = 1 << len(alice), 1 << len(bob)
    if rows > SPLIT_ROW_CAP or cols > SPLIT_COL_CAP or rows * cols > SPLIT_CELL_CAP:
        raise CapExceeded(f"{rows}x{cols} communication matrix exceeds caps")
    full = [0] * f.arity
    row_bits = []
    for a in range(rows):
        for k, p in enumerate(alice):
            full[p - 1] = (a >> k) & 1
        r = 0
        for b in range(cols):
            for k, p in enumerate(bob):
                full[p - 1] = (b >> k) & 1
            if f.eval(tuple(full)):
                r |= 1 << b
        row_bits.append(r)
    return CommMatrix(
        rows=rows,
        cols=cols,
        row_bits=tuple(row_bits),
        row_labels=tuple(index_assignment(a, len(alice)) for a in range(rows)),
        col_labels=tuple(index_assignment(b, len(bob)) for b in range(cols)),
    )


@dataclass(frozen=True)
class VarPartition:
    """Disjoint nonempty blocks of variable positions covering {1..n}."""

    n: int
    blocks: tuple[frozenset[int], ...]

    def __post_init__(self):
        seen: set[int] = set()
        for blk in self.blocks:
            if not blk:
                raise InvalidInput("empty block")
            if blk & seen:
                raise InvalidInput("blocks overlap")
            seen |= blk
        if seen != set(range(1, self.n + 1)):
            raise InvalidInput("blocks must cover all variables exactly")

    @classmethod
    def of(cls, n: int, blocks: Iterable[Iterable[int]]) -> "VarPartition":
        return cls(n, tuple(frozenset(b) for b in blocks))

    @classmethod
    def singletons(cls, n: int) -> "VarPartition":
        return cls(n, tuple(frozenset({i}) for i in range(1, n + 1)))


@dataclass(frozen=True)
class FamilySpec:
    """Which built-in family to construct, and its size parameters."""

    name: str
    n: int
    s: int | None = None

    def __post_init__(self):
        if self.name not in FAMILY_NAMES:
            raise InvalidInput(f"unknown family {self.name!r}")
        if self.n < 1:
            raise InvalidInput("n must be >= 1")
        if self.name == "ISA":
            ln = math.log2(self.n)
            if self.n < 2 or ln != int(ln) or (ln > 1 and math.log2(ln) != int(math.log2(ln))):
                raise InvalidInput("ISA needs n a power of two with integral log log n (2, 4, 16, 256, ...)")
        if self.name in ("D", "AD"):
            if self.s is None or not 1 <= self.s <= self.n:
                raise InvalidInput("D/AD need 1 <= s <= n")
            if self.n < 2:
                raise InvalidInput("D/AD need n >= 2 for a nonempty element encoding")
        elif self.s is not None:
            raise InvalidInput(f"family {self.name} takes no s parameter")


# ---------------------------------------------------------------------------
# families
# ---------------------------------------------------------------------------

def _read_int(x: Sequence[int], positions: Sequence[int]) -> int:
    v = 0
    for k, p in enumerate(positions):
        if x[p - 1]:
            v |= 1 << k
    return v


def ix_function(n: int) -> BooleanFunction:
    """Index function: n data bits plus ceil(log2 n) selector bits.

    The selector reads as a zero-based integer y and the value is x_(y+1);
    selector values >= n (possible when n is not a power of two) give 0.
    """
    m = max(1, (n - 1).bit_length())
    sel = list(range(n + 1, n + m + 1))

    def pred(x):
        y = _read_int(x, sel)
        return x[y] if y < n else 0

    names = tuple(f"x{i}" for i in range(1, n + 1)) + tuple(f"y{j}" for j in range(1, m + 1))
    return BooleanFunction(n + m, pred, names)


def ix_selector_block(n: int) -> frozenset[int]:
    """Positions of the selector bits of ix_function(n) (Bob's side)."""
    m = max(1, (n - 1).bit_length())
    return frozenset(range(n + 1, n + m + 1))


def disj_function(n: int) -> BooleanFunction:
    """Set disjointness on two n-bit characteristic vectors."""

    def pred(x):
        return int(all(not (x[i] and x[n + i]) for i in range(n)))

    names = tuple(f"x{i}" for i in range(1, n + 1)) + tuple(f"y{i}" for i in range(1, n + 1))
    return BooleanFunction(2 * n, pred, names)


def isa_layout(n: int) -> tuple[list[int], list[int], list[int]]:
    """Positions of the U, X, Y variable groups of isa_function(n)."""
    lg = int(math.log2(n))
    # |U| = log n - log log n; n = 2 gives 1 - 0 = 1
    u = lg - int(math.log2(lg)) if lg > 1 else 1
    upos = list(range(1, u + 1))
    xpos = list(range(u + 1, u + n + 1))
    ypos = list(range(u + n + 1, u + 2 * n + 1))
    return upos, xpos, ypos


def isa_function(n: int) -> BooleanFunction:
    """Indirect storage access: U picks a log n-bit block of X, which picks a bit of Y.

    U reads zero-based and selects the |U|-th consecutive block of X (block 0
    first); the selected block reads zero-based and selects a bit of Y.
    """
    FamilySpec("ISA", n)
    lg = int(math.log2(n))
    upos, xpos, ypos = isa_layout(n)

    def pred(x):
        blk = _read_int(x, upos)
        start = blk * lg
        v = _read_int(x, xpos[start:start + lg])
        return x[ypos[v] - 1]

    names = (
        tuple(f"u{i}" for i in range(1, len(upos) + 1))
        + tuple(f"x{i}" for i in range(1, n + 1))
        + tuple(f"y{i}" for i in range(1, n + 1))
    )
    return BooleanFunction(len(upos) + 2 * n, pred, names)


def mp_entry_position(which: int, i: int, j: int, n: int) -> int:
    """Variable position of matrix entry T^(which)[i, j]; matrices are row-major."""
    return (which - 1) * n * n + (i - 1) * n + j


def mp_matrices(x: Sequence[int], n: int) -> tuple[list[list[int]], list[list[int]]]:
    t1 = [[x[mp_entry_position(1, i, j, n) - 1] for j in range(1, n + 1)] for i in range(1, n + 1)]
    t2 = [[x[mp_entry_position(2, i, j, n) - 1] for j in range(1, n + 1)] for i in range(1, n + 1)]
    return t1, t2


def mp_product_nonzero(t1, t2) -> int:
    n = len(t1)
    for i in range(n):
        for j in range(n):
            acc = 0
            for k in range(n):
                acc ^= t1[i][k] & t2[k][j]
            if acc:
                return 1
    return 0


def mp_function(n: int) -> BooleanFunction:
    """Accepts two n x n matrices over Z_2 iff their product is not all-zero."""

    def pred(x):
        t1, t2 = mp_matrices(x, n)
        return mp_product_nonzero(t1, t2)

    names = tuple(
        f"T{w}_{i}{j}" for w in (1, 2) for i in range(1, n + 1) for j in range(1, n + 1)
    )
    return BooleanFunction(2 * n * n, pred, names)


def set_field_width(n: int) -> int:
    """Bits per encoded element of {1..n^3}."""
    return max(1, math.ceil(3 * math.log2(n)))


def decode_sets(x: Sequence[int], n: int, s: int) -> list[tuple[int, ...]]:
    """Decode the n+1 encoded element lists (values are 1-based, element = field+1)."""
    w = set_field_width(n)
    out = []
    pos = 0
    for _ in range(n + 1):
        elems = []
        for _ in range(s):
            v = 0
            for k in range(w):
                if x[pos + k]:
                    v |= 1 << k
            elems.append(v + 1)
            pos += w
        out.append(tuple(elems))
    return out


def _intersection_witnessed(sets: list[frozenset[int]], s: int) -> int:
    for i, si in enumerate(sets):
        hits = sum(1 for j, sj in enumerate(sets) if j != i and si & sj)
        if hits >= s:
            return 1
    return 0


def d_function(n: int, s: int) -> BooleanFunction:
    """Sets-with-many-intersections predicate on n+1 encoded s-subsets of {1..n^3}.

    A set encoding is accepted in any element order, but the s elements must be
    distinct and in range; otherwise the input rejects.
    """
    FamilySpec("D", n, s)
    w = set_field_width(n)

    def pred(x):
        lists = decode_sets(x, n, s)
        sets = []
        for elems in lists:
            if len(set(elems)) != s or any(e > n ** 3 for e in elems):
                return 0
            sets.append(frozenset(elems))
        return _intersection_witnessed(sets, s)

    arity = (n + 1) * s * w
    return BooleanFunction(arity, pred, _set_names(n, s, w))


def ad_function(n: int, s: int) -> BooleanFunction:
    """Like d_function but each set must be written in strictly increasing order."""
    FamilySpec("AD", n, s)
    w = set_field_width(n)

    def pred(x):
        lists = decode_sets(x, n, s)
        sets = []
        for elems in lists:
            if any(a >= b for a, b in zip(elems, elems[1:])) or any(e > n ** 3 for e in elems):
                return 0
            sets.append(frozenset(elems))
        return _intersection_witnessed(sets, s)

    arity = (n + 1) * s * w
    return BooleanFunction(arity, pred, _set_names(n, s, w))


def _set_names(n, s, w):
    return tuple(
        f"s{i}e{p}b{k}" for i in range(1, n + 2) for p in range(1, s + 1) for k in range(1, w + 1)
    )


def set_positions(n: int, s: int, set_index: int) -> list[int]:
    """Variable positions of encoded set ``set_index`` (1-based) of d/ad_function."""
    w = set_field_width(n)
    start = (set_index - 1) * s * w
    return list(range(start + 1, start + s * w + 1))


def element_positions(n: int, s: int, set_index: int, elem_index: int) -> list[int]:
    w = set_field_width(n)
    start = (set_index - 1) * s * w + (elem_index - 1) * w
    return list(range(start + 1, start + w + 1))


def make_family(spec: FamilySpec) -> BooleanFunction:
    """Construct one of the built-in families from its spec."""
    if spec.name == "IX":
        return ix_function(spec.n)
    if spec.name == "DISJ":
        return disj_function(spec.n)
    if spec.name == "ISA":
        return isa_function(spec.n)
    if spec.name == "MP":
        return mp_function(spec.n)
    if spec.name == "D":
        return d_function(spec.n, spec.s)
    if spec.name == "AD":
        return ad_function(spec.n, spec.s)
    raise InvalidInput(spec.name)


# ---------------------------------------------------------------------------
# truth-table text format
# ---------------------------------------------------------------------------

def format_table_text(f: BooleanFunction) -> str:
    """Two-line text format: "vars=n" then the 2^n table bits as hex."""
    if not f.has_table:
        raise CapExceeded("function too large to serialize as a table")
    digits = max(1, (1 << f.arity) // 4)
    return f"vars={f.arity}\n{f.table:0{digits}x}\n"


def parse_table_text(text: str) -> BooleanFunction:
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if len(lines) != 2 or not lines[0].startswith("vars="):
        raise InvalidInput("expected 'vars=n' line followed by a hex table line")
    arity = int(lines[0][5:])
    if not 1 <= arity <= TABLE_CAP:
        raise InvalidInput(f"arity must be in 1..{TABLE_CAP}")
    table = int(lines[1], 16)
    if table >> (1 << arity):
        raise InvalidInput("hex table longer than 2^n bits")
    return BooleanFunction.from_table(arity, table)
