"""Explicit constructions: fingerprint and direct matrix-product formulas, the
Las Vegas combiner, the nondeterministic set-intersection formula, the greedy
intersection code, the subspace census, and the shattering witness for the
indirect-storage-access games."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

from . import boolfn
from .boolfn import BooleanFunction, FamilySpec
from .errors import CapExceeded, InvalidInput
from .formula import (
    Const,
    Formula,
    Gate,
    Guess,
    Input,
    LasVegasFormula,
    Rand,
    and_,
    and_all,
    classify_semantics,
    collect_vars,
    not_,
    or_,
    or_all,
    relabel_rands,
    size as formula_size,
    substitute_inputs,
    xor,
    xor_all,
)


# ---------------------------------------------------------------------------
# matrix-product formulas
# ---------------------------------------------------------------------------

def mp_fingerprint(n: int) -> Formula:
    """Fair one-sided-error formula for the matrix product test.

    Random vectors r1 (vars r_1..r_n) and r2 (vars r_{n+1}..r_{2n}) are folded
    into per-column fingerprints of the two matrices, whose inner product is
    the output bit: zero whenever the product is the zero matrix, one with
    probability >= 1/4 otherwise.  Size is exactly 4 n^2.
    """
    if n < 1:
        raise InvalidInput("n must be >= 1")
    terms = []
    for k in range(1, n + 1):
        f1 = xor_all([
            and_(Rand(i), Input(boolfn.mp_entry_position(1, i, k, n)))
            for i in range(1, n + 1)
        ])
        f2 = xor_all([
            and_(Input(boolfn.mp_entry_position(2, k, j, n)), Rand(n + j))
            for j in range(1, n + 1)
        ])
        terms.append(and_(f1, f2))
    return xor_all(terms)


def mp_direct_formula(n: int) -> Formula:
    """Deterministic formula for the matrix product test (OR of all product cells)."""
    cells = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            cells.append(xor_all([
                and_(Input(boolfn.mp_entry_position(1, i, k, n)),
                     Input(boolfn.mp_entry_position(2, k, j, n)))
                for k in range(1, n + 1)
            ]))
    return or_all(cells)


def xor_mp(n: int) -> BooleanFunction:
    """Function on four matrices: product-test of the first pair XOR the
    complemented product-test of the second pair."""
    block = 2 * n * n

    def pred(x):
        a = boolfn.mp_product_nonzero(*boolfn.mp_matrices(x[:block], n))
        b = boolfn.mp_product_nonzero(*boolfn.mp_matrices(x[block:], n))
        return a ^ (1 - b)

    return BooleanFunction(2 * block, pred)


def xor_mp_direct_formula(n: int) -> Formula:
    """Deterministic formula for xor_mp; the second pair's test reads shifted inputs."""
    first = mp_direct_formula(n)
    block = 2 * n * n
    second = substitute_inputs(mp_direct_formula(n), {}, {i: i + block for i in range(1, block + 1)})
    return xor(first, not_(second))


def mc_formulas_from_parity(n: int) -> tuple[Formula, Formula]:
    """Specialize a one-sided formula for xor_mp into one-sided formulas for the
    product test and its complement, by fixing the first matrix pair.

    Fixing the first pair to (zero, zero) makes the parity compute the
    complemented product test of the remaining pair; fixing it to
    (identity, identity) makes it compute the product test itself.
    """
    parity = xor_mp_direct_formula(n)
    block = 2 * n * n
    shift_back = {i + block: i for i in range(1, block + 1)}

    zeros = {i: 0 for i in range(1, block + 1)}
    g_not_mp = substitute_inputs(parity, zeros, shift_back)

    ident = dict(zeros)
    for w in (1, 2):
        for i in range(1, n + 1):
            ident[boolfn.mp_entry_position(w, i, i, n)] = 1
    f_mp = substitute_inputs(parity, ident, shift_back)
    return f_mp, g_not_mp


def las_vegas_combine(f: Formula, g: Formula, target: BooleanFunction) -> LasVegasFormula:
    """Combine one-sided formulas for a function and its complement into a
    zero-error pair: answer when the two runs agree, give up otherwise.

    Both inputs must verify as one-sided with miss probability <= 1/2; the
    returned pair never answers wrong and gives up with probability <= 1/2.
    """
    rep_f = classify_semantics(f, target)
    if not rep_f.monte_carlo_half:
        raise InvalidInput("first formula is not one-sided with miss <= 1/2 for the target")
    complement = BooleanFunction(target.arity, lambda x: 1 - target.eval(x))
    rep_g = classify_semantics(g, complement)
    if not rep_g.monte_carlo_half:
        raise InvalidInput("second formula is not one-sided with miss <= 1/2 for the complement")
    _, rnds_f, _ = collect_vars(f)
    g_fresh = relabel_rands(g, max(rnds_f, default=0))
    # verifier: the run of f and the complemented run of g agree, i.e. f != g
    return LasVegasFormula(output=f, verifier=xor(f, g_fresh))


# ---------------------------------------------------------------------------
# nondeterministic formula for the sorted set-intersection language
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AdNondetFormula:
    formula: Formula
    n: int
    s: int
    guess_bits: int
    size: int


def _eq_bit(a: Formula, b: Formula) -> Formula:
    return Gate(9, a, b)  # XNOR


def _field_eq(a: list[Formula], b: list[Formula]) -> Formula:
    return and_all([_eq_bit(x, y) for x, y in zip(a, b)])


def _field_lt(a: list[Formula], b: list[Formula]) -> Formula:
    """a < b for little-endian bit fields, by most-significant-first ripple."""
    w = len(a)
    terms = []
    for t in reversed(range(w)):
        lt_here = and_(not_(a[t]), b[t])
        higher = [_eq_bit(a[u], b[u]) for u in range(t + 1, w)]
        terms.append(and_all([lt_here] + higher))
    return or_all(terms)


def _field_eq_const(a: list[Formula], value: int) -> Formula:
    return and_all([a[k] if (value >> k) & 1 else not_(a[k]) for k in range(len(a))])


def _field_le_const(a: list[Formula], value: int) -> Formula:
    w = len(a)
    if value >= (1 << w) - 1:
        return Const(1)
    # a > value, then negated
    gt_terms = []
    for t in reversed(range(w)):
        if (value >> t) & 1:
            continue
        higher = []
        for u in range(t + 1, w):
            higher.append(a[u] if (value >> u) & 1 else not_(a[u]))
        gt_terms.append(and_all([a[t]] + higher))
    return not_(or_all(gt_terms))


def ad_nondet_formula(n: int, s: int) -> AdNondetFormula:
    """Nondeterministic formula for the sorted set-intersection language.

    The guesses name (in binary, all zero-based) a set index i and pairs
    (j_1, w_1), ..., (j_s, w_s): j_k a partner set index, w_k a witness element
    of the intersection of sets i and j_k.  The formula checks that every input
    set is strictly sorted, that the guessed indices are in range with
    j_1 < ... < j_s all different from i, and that each w_k lies in both set i
    and set j_k.
    """
    FamilySpec("AD", n, s)
    if s < max(1, math.ceil(math.log2(n))):
        raise InvalidInput("construction requires s >= log2 n")
    w = boolfn.set_field_width(n)
    gi = max(1, math.ceil(math.log2(n + 1)))

    next_guess = 1

    def fresh(width):
        nonlocal next_guess
        field = [Guess(next_guess + k) for k in range(width)]
        next_guess += width
        return field

    i_field = fresh(gi)
    j_fields = [fresh(gi) for _ in range(s)]
    w_fields = [fresh(w) for _ in range(s)]
    guess_bits = next_guess - 1

    def input_field(set_index, elem_index):
        return [Input(p) for p in boolfn.element_positions(n, s, set_index, elem_index)]

    tests: list[Formula] = []
    # every set strictly sorted
    for i in range(1, n + 2):
        for p in range(1, s):
            tests.append(_field_lt(input_field(i, p), input_field(i, p + 1)))
    # guessed indices in range (zero-based values <= n) and elements in range
    tests.append(_field_le_const(i_field, n))
    for jf in j_fields:
        tests.append(_field_le_const(jf, n))
    max_elem = (1 << w) - 1
    if n ** 3 - 1 < max_elem:
        for wf in w_fields:
            tests.append(_field_le_const(wf, n ** 3 - 1))
    # j_1 < ... < j_s and i != j_k
    for k in range(s - 1):
        tests.append(_field_lt(j_fields[k], j_fields[k + 1]))
    for jf in j_fields:
        tests.append(not_(_field_eq(i_field, jf)))
    # membership wiring per set
    for l in range(1, n + 2):
        is_i = _field_eq_const(i_field, l - 1)
        all_in = and_all([
            or_all([_field_eq(w_fields[k], input_field(l, p)) for p in range(1, s + 1)])
            for k in range(s)
        ])
        tests.append(or_(not_(is_i), all_in))
        for k in range(s):
            is_jk = _field_eq_const(j_fields[k], l - 1)
            member = or_all([_field_eq(w_fields[k], input_field(l, p)) for p in range(1, s + 1)])
            tests.append(or_(not_(is_jk), member))
    formula = and_all(tests)
    return AdNondetFormula(formula, n, s, guess_bits, formula_size(formula))


# ---------------------------------------------------------------------------
# greedy intersection code
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SubsetCode:
    universe: int
    set_size: int
    members: tuple[tuple[int, ...], ...]

    @property
    def guaranteed_size(self) -> float:
        m, s = self.universe, self.set_size
        return (m / s) ** (s / 2) / 2 ** (1.5 * s)

    def to_text(self) -> str:
        return "\n".join(" ".join(map(str, mem)) for mem in self.members) + "\n"


def greedy_code(m: int, s: int) -> SubsetCode:
    """Greedily pick s-subsets of {1..m} in lexicographic order, keeping a new
    subset only when it shares fewer than s/2 elements with every kept one."""
    if not 1 <= s <= m:
        raise InvalidInput("need 1 <= s <= m")
    if math.comb(m, s) > 1 << 20:
        raise CapExceeded("too many subsets to enumerate")
    kept: list[frozenset[int]] = []
    members = []
    for cand in combinations(range(1, m + 1), s):
        cs = frozenset(cand)
        if all(2 * len(cs & other) < s for other in kept):
            kept.append(cs)
            members.append(cand)
    code = SubsetCode(m, s, tuple(members))
    if len(members) < code.guaranteed_size:
        raise AssertionError("greedy code smaller than its guaranteed size")
    return code


# ---------------------------------------------------------------------------
# subspace census and the matrix-game row witness
# ---------------------------------------------------------------------------

def subspace_census(n: int) -> int:
    """Number of distinct subspaces of the n-dimensional vector space over Z_2,
    by exhaustive span enumeration (vectors are bitmasks)."""
    if not 1 <= n <= 4:
        raise CapExceeded("census capped at n <= 4")
    vectors = range(1 << n)
    seen = {frozenset({0})}
    frontier = [frozenset({0})]
    while frontier:
        nxt = []
        for span in frontier:
            for v in vectors:
                if v not in span:
                    bigger = frozenset(x ^ y for x in span for y in (0, v))
                    if bigger not in seen:
                        seen.add(bigger)
                        nxt.append(bigger)
        frontier = nxt
    return len(seen)


def mp_row_witness(n: int) -> int:
    """Distinct-row count of the matrix-product game with all but the first
    column of the second matrix fixed to zero.

    A row is the map (first column of the second matrix) -> product-nonzero;
    it is determined by the kernel of the first matrix, so the count is at
    least the number of distinct realized kernels.
    """
    if not 1 <= n <= 4:
        raise CapExceeded("witness enumeration capped at n <= 4")
    rows = set()
    for t1_bits in range(1 << (n * n)):
        t1 = [[(t1_bits >> (i * n + j)) & 1 for j in range(n)] for i in range(n)]
        sig = 0
        for y_bits in range(1 << n):
            y = [(y_bits >> i) & 1 for i in range(n)]
            nonzero = any(
                sum(t1[i][j] & y[j] for j in range(n)) & 1 for i in range(n)
            )
            if nonzero:
                sig |= 1 << y_bits
        rows.add(sig)
    return len(rows)


def mp_kernel_count(n: int) -> int:
    """Number of distinct kernels realized by n x n matrices over Z_2."""
    kernels = set()
    for t1_bits in range(1 << (n * n)):
        t1 = [[(t1_bits >> (i * n + j)) & 1 for j in range(n)] for i in range(n)]
        ker = frozenset(
            y_bits for y_bits in range(1 << n)
            if not any(sum(t1[i][j] & ((y_bits >> j) & 1) for j in range(n)) & 1 for i in range(n))
        )
        kernels.add(ker)
    return len(kernels)


# ---------------------------------------------------------------------------
# shattering witness for the indirect-storage-access games
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ShatterWitness:
    """For one X-block game: Bob's block, the n columns (Bob's block values),
    and a rule giving Alice's assignment for every column subset."""

    n: int
    block_index: int
    bob_block: frozenset[int]

    @property
    def size(self) -> int:
        return self.n

    @property
    def columns(self) -> tuple[int, ...]:
        return tuple(range(self.n))

    def alice_assignment(self, subset_mask: int) -> tuple[int, ...]:
        """Alice's bits (in increasing position order over her variables) that
        cut out exactly the columns in ``subset_mask``: the pointer selects
        Bob's block and the data bits are the subset's indicator."""
        n = self.n
        upos, xpos, ypos = boolfn.isa_layout(n)
        lg = int(math.log2(n))
        arity = len(upos) + 2 * n
        full = [0] * arity
        for k, p in enumerate(upos):
            full[p - 1] = (self.block_index >> k) & 1
        for v in range(n):
            if (subset_mask >> v) & 1:
                full[ypos[v] - 1] = 1
        alice_positions = [p for p in range(1, arity + 1) if p not in self.bob_block]
        return tuple(full[p - 1] for p in alice_positions)

    def verify(self, f: BooleanFunction) -> bool:
        """Exhaustively check that every column subset is cut out by its row."""
        n = self.n
        alice_positions = [p for p in range(1, f.arity + 1) if p not in self.bob_block]
        bob_positions = sorted(self.bob_block)
        full = [0] * f.arity
        for mask in range(1 << n):
            row = self.alice_assignment(mask)
            for p, b in zip(alice_positions, row):
                full[p - 1] = b
            for col in range(n):
                for k, p in enumerate(bob_positions):
                    full[p - 1] = (col >> k) & 1
                if f.eval(tuple(full)) != ((mask >> col) & 1):
                    return False
        return True


def isa_shatter_witness(n: int, block_index: int = 0) -> ShatterWitness:
    """Witness that the X-block game of the storage-access function shatters
    all n of Bob's values: point the selector at Bob's block and write the
    target subset's indicator into the data vector."""
    if n not in (4, 16):
        raise InvalidInput("witness construction supported for n in {4, 16}")
    lg = int(math.log2(n))
    if not 0 <= block_index < n // lg:
        raise InvalidInput("block index out of range")
    _, xpos, _ = boolfn.isa_layout(n)
    bob = frozenset(xpos[block_index * lg:(block_index + 1) * lg])
    return ShatterWitness(n, block_index, bob)
