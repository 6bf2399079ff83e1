"""Fan-in-2 formula trees over input/random/guess/constant leaves, and their semantics.

Gates carry arbitrary 2-ary truth tables identified by a 4-bit gate id: the
output on child values (a, b) is bit ``(a << 1) | b`` of the id.  Size is the
number of nonconstant leaves.  All probabilities are exact rationals computed
by enumeration; nothing here samples.

Semantics layers:

* deterministic evaluation (input leaves only),
* fair probabilistic (random leaves r_j, uniform and read-consistently),
* strong probabilistic (a weighted support of deterministic formulas),
* nondeterministic (guess leaves a_j, accepted iff some guess assignment does),
* Monte Carlo / Las Vegas classification against a target function,
* compilation of a deterministic formula into a one-way protocol for a given
  split of the variables.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Mapping, Sequence

from .boolfn import BooleanFunction, index_assignment
from .errors import CapExceeded, InvalidInput

# gate ids (bit (a<<1)|b of the id is the output on child values a, b)
G_CONST0 = 0
G_NOR = 1
G_XOR = 6
G_NAND = 7
G_AND = 8
G_XNOR = 9
G_RIGHT = 10
G_LEFT = 12
G_NOT_LEFT = 3
G_NOT_RIGHT = 5
G_OR = 14
G_CONST1 = 15

ACCEPT_PROB_RAND_CAP = 24
NONDET_GUESS_CAP = 20


@dataclass(frozen=True)
class Input:
    index: int  # 1-based variable position


@dataclass(frozen=True)
class Rand:
    index: int


@dataclass(frozen=True)
class Guess:
    index: int


@dataclass(frozen=True)
class Const:
    value: int


@dataclass(frozen=True)
class Gate:
    gate_id: int
    left: "Formula"
    right: "Formula"

    def __post_init__(self):
        if not 0 <= self.gate_id <= 15:
            raise InvalidInput("gate id must be a 4-bit truth table")


Formula = Input | Rand | Guess | Const | Gate


def and_(l, r):
    return Gate(G_AND, l, r)


def or_(l, r):
    return Gate(G_OR, l, r)


def xor(l, r):
    return Gate(G_XOR, l, r)


def not_(f):
    # negation through a unary-on-the-left gate; the constant leaf is free
    return Gate(G_NOT_LEFT, f, Const(0))


def and_all(fs: Sequence[Formula]) -> Formula:
    return reduce(and_, fs)


def or_all(fs: Sequence[Formula]) -> Formula:
    return reduce(or_, fs)


def xor_all(fs: Sequence[Formula]) -> Formula:
    return reduce(xor, fs)


def size(f: Formula) -> int:
    """Number of nonconstant leaves (counted with multiplicity)."""
    if isinstance(f, (Input, Rand, Guess)):
        return 1
    if isinstance(f, Const):
        return 0
    return size(f.left) + size(f.right)


def collect_vars(f: Formula) -> tuple[set[int], set[int], set[int]]:
    """Sets of input, random, and guess variable indices appearing in f."""
    ins, rnds, gss = set(), set(), set()
    stack = [f]
    while stack:
        node = stack.pop()
        if isinstance(node, Input):
            ins.add(node.index)
        elif isinstance(node, Rand):
            rnds.add(node.index)
        elif isinstance(node, Guess):
            gss.add(node.index)
        elif isinstance(node, Gate):
            stack.append(node.left)
            stack.append(node.right)
    return ins, rnds, gss


def gate_value(gate_id: int, a: int, b: int) -> int:
    return (gate_id >> ((a << 1) | b)) & 1


def _apply_gate_masks(gate_id: int, a: int, b: int, full: int) -> int:
    out = 0
    if gate_id & 1:
        out |= ~a & ~b
    if gate_id & 2:
        out |= ~a & b
    if gate_id & 4:
        out |= a & ~b
    if gate_id & 8:
        out |= a & b
    return out & full


def _eval_masks(f, inputs, rands, guesses, full):
    """Evaluate over all parallel worlds at once; each variable maps to a bitmask."""
    if isinstance(f, Const):
        return full if f.value else 0
    if isinstance(f, Input):
        return inputs[f.index]
    if isinstance(f, Rand):
        if rands is None:
            raise InvalidInput("random leaves not allowed here")
        return rands[f.index]
    if isinstance(f, Guess):
        if guesses is None:
            raise InvalidInput("guess leaves not allowed here")
        return guesses[f.index]
    a = _eval_masks(f.left, inputs, rands, guesses, full)
    b = _eval_masks(f.right, inputs, rands, guesses, full)
    return _apply_gate_masks(f.gate_id, a, b, full)


def _enumeration_masks(indices: Sequence[int]) -> tuple[dict[int, int], int, int]:
    """Masks assigning the k-th listed variable the k-th coordinate of every world."""
    m = len(indices)
    worlds = 1 << m
    full = (1 << worlds) - 1
    masks = {}
    for k, idx in enumerate(indices):
        block = ((1 << (1 << k)) - 1) << (1 << k)
        span = 1 << (k + 1)
        mask = block
        while span < worlds:
            mask |= mask << span
            span <<= 1
        masks[idx] = mask & full
    return masks, worlds, full


def _input_masks(x: Sequence[int], ins: set[int], full: int) -> dict[int, int]:
    out = {}
    for i in ins:
        if i > len(x):
            raise InvalidInput(f"assignment too short for input x{i}")
        out[i] = full if x[i - 1] else 0
    return out


def eval_det(f: Formula, x: Sequence[int]) -> int:
    """Deterministic evaluation; rejects formulas with random or guess leaves."""
    ins, rnds, gss = collect_vars(f)
    if rnds or gss:
        raise InvalidInput("formula is not deterministic")
    return _eval_masks(f, _input_masks(x, ins, 1), None, None, 1)


def accept_prob(f: Formula, x: Sequence[int]) -> Fraction:
    """Exact acceptance probability over the uniform random leaves."""
    ins, rnds, gss = collect_vars(f)
    if gss:
        raise InvalidInput("guess leaves are not probabilistic")
    rnds = sorted(rnds)
    if len(rnds) > ACCEPT_PROB_RAND_CAP:
        raise CapExceeded(f"{len(rnds)} random variables exceeds cap {ACCEPT_PROB_RAND_CAP}")
    rmasks, worlds, full = _enumeration_masks(rnds)
    root = _eval_masks(f, _input_masks(x, ins, full), rmasks, None, full)
    return Fraction(root.bit_count(), worlds)


def nondet_accepts(f: Formula, x: Sequence[int], s: int) -> int:
    """1 iff some assignment of the guess variables a_1..a_s accepts."""
    ins, rnds, gss = collect_vars(f)
    if rnds:
        raise InvalidInput("random leaves are not allowed in nondeterministic evaluation")
    if s > NONDET_GUESS_CAP:
        raise CapExceeded(f"s={s} exceeds cap {NONDET_GUESS_CAP}")
    if any(g > s for g in gss):
        raise InvalidInput(f"formula guesses beyond a_{s}")
    gmasks, _, full = _enumeration_masks(list(range(1, s + 1)))
    root = _eval_masks(f, _input_masks(x, ins, full), None, gmasks, full)
    return int(root != 0)


def substitute_inputs(f: Formula, fixed: Mapping[int, int], relabel: Mapping[int, int] | None = None) -> Formula:
    """Replace some input leaves by constants and optionally renumber the rest."""
    if isinstance(f, Input):
        if f.index in fixed:
            return Const(fixed[f.index] & 1)
        if relabel:
            return Input(relabel.get(f.index, f.index))
        return f
    if isinstance(f, Gate):
        return Gate(f.gate_id,
                    substitute_inputs(f.left, fixed, relabel),
                    substitute_inputs(f.right, fixed, relabel))
    return f


def relabel_rands(f: Formula, offset: int) -> Formula:
    """Shift every random-variable index by ``offset`` (fresh independent copies)."""
    if isinstance(f, Rand):
        return Rand(f.index + offset)
    if isinstance(f, Gate):
        return Gate(f.gate_id, relabel_rands(f.left, offset), relabel_rands(f.right, offset))
    return f


def fix_rands(f: Formula, rho: Mapping[int, int]) -> Formula:
    if isinstance(f, Rand):
        return Const(rho[f.index] & 1)
    if isinstance(f, Gate):
        return Gate(f.gate_id, fix_rands(f.left, rho), fix_rands(f.right, rho))
    return f


def or_copies_fair(f: Formula, k: int) -> Formula:
    """OR of k copies of a fair formula with fresh (independent) random variables."""
    _, rnds, _ = collect_vars(f)
    stride = max(rnds, default=0)
    return or_all([relabel_rands(f, t * stride) for t in range(k)])


# ---------------------------------------------------------------------------
# strong probabilistic and Las Vegas formulas
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StrongFormula:
    """A probability distribution on deterministic formulas (weights sum to 1)."""

    support: tuple[tuple[Fraction, Formula], ...]

    def __post_init__(self):
        if sum(w for w, _ in self.support) != 1:
            raise InvalidInput("weights must sum to exactly 1")
        if any(w <= 0 for w, _ in self.support):
            raise InvalidInput("weights must be positive")
        for _, member in self.support:
            _, rnds, gss = collect_vars(member)
            if rnds or gss:
                raise InvalidInput("support members must be deterministic")

    @classmethod
    def from_fair(cls, f: Formula) -> "StrongFormula":
        """Expand a fair probabilistic formula into its distribution over fixings."""
        _, rnds, _ = collect_vars(f)
        rnds = sorted(rnds)
        if len(rnds) > 16:
            raise CapExceeded("too many random variables to expand explicitly")
        worlds = 1 << len(rnds)
        w = Fraction(1, worlds)
        support = []
        for idx in range(worlds):
            rho = {r: (idx >> k) & 1 for k, r in enumerate(rnds)}
            support.append((w, fix_rands(f, rho)))
        return cls(tuple(support))

    @property
    def expected_size(self) -> Fraction:
        return sum((w * size(m) for w, m in self.support), Fraction(0))

    def accept_prob(self, x: Sequence[int]) -> Fraction:
        return sum((w for w, m in self.support if eval_det(m, x)), Fraction(0))


@dataclass(frozen=True)
class LasVegasFormula:
    """Output/verifier pair over shared random variables.

    When the verifier accepts, the output bit is used; otherwise the result is
    "?".  Both formulas read the same random variables consistently.
    """

    output: Formula
    verifier: Formula

    def outcome_probs(self, x: Sequence[int]) -> tuple[Fraction, Fraction, Fraction]:
        """(probability of answering 0, of answering 1, of giving up)."""
        ins_o, rnds_o, gss = collect_vars(self.output)
        ins_v, rnds_v, gss_v = collect_vars(self.verifier)
        if gss or gss_v:
            raise InvalidInput("guess leaves not allowed")
        rnds = sorted(rnds_o | rnds_v)
        if len(rnds) > ACCEPT_PROB_RAND_CAP:
            raise CapExceeded("too many random variables")
        rmasks, worlds, full = _enumeration_masks(rnds)
        imasks = _input_masks(x, ins_o | ins_v, full)
        out = _eval_masks(self.output, imasks, rmasks, None, full)
        ver = _eval_masks(self.verifier, imasks, rmasks, None, full)
        p1 = (ver & out).bit_count()
        p0 = (ver & ~out & full).bit_count()
        pq = worlds - p0 - p1
        return Fraction(p0, worlds), Fraction(p1, worlds), Fraction(pq, worlds)


def amplify_mc(sf: StrongFormula, k: int) -> StrongFormula:
    """OR of k independent draws: one-sided error is kept, misses are powered by k."""
    if k < 1:
        raise InvalidInput("k must be >= 1")
    if len(sf.support) ** k > 1 << 16:
        raise CapExceeded("amplified support too large to materialize")
    acc: list[tuple[Fraction, tuple[Formula, ...]]] = [(Fraction(1), ())]
    for _ in range(k):
        acc = [(w * w2, ms + (m2,)) for w, ms in acc for w2, m2 in sf.support]
    support = tuple((w, or_all(list(ms))) for w, ms in acc)
    return StrongFormula(support)


@dataclass(frozen=True)
class SemanticsReport:
    """Per-input error profile of a formula against a target function."""

    exact: bool
    one_sided: bool           # no false accepts on 0-inputs
    monte_carlo_half: bool    # one-sided and miss probability <= 1/2 everywhere
    las_vegas_half: bool      # never wrong and give-up probability <= 1/2 (LV pairs only)
    bounded_error_third: bool
    worst_error: Fraction
    worst_miss: Fraction
    worst_false_accept: Fraction
    worst_giveup: Fraction | None
    per_input: tuple

    @property
    def flags(self) -> tuple[str, ...]:
        out = []
        if self.exact:
            out.append("exact")
        if self.monte_carlo_half:
            out.append("MC(1/2)")
        if self.las_vegas_half:
            out.append("LV(1/2)")
        if self.bounded_error_third:
            out.append("bounded-error(1/3)")
        return tuple(out) if out else ("none",)


def classify_semantics(f, target: BooleanFunction) -> SemanticsReport:
    """Exhaustively compare a (fair/strong/Las Vegas) formula against a target."""
    n = target.arity
    if n > 20:
        raise CapExceeded("target too large for exhaustive classification")
    zero = Fraction(0)
    worst_err = worst_miss = worst_fa = zero
    per_input = []
    if isinstance(f, LasVegasFormula):
        worst_giveup = zero
        never_wrong = True
        for idx in range(1 << n):
            x = index_assignment(idx, n)
            fx = target.eval(x)
            p0, p1, pq = f.outcome_probs(x)
            wrong = p0 if fx else p1
            per_input.append((x, fx, (p0, p1, pq)))
            never_wrong = never_wrong and wrong == 0
            worst_err = max(worst_err, wrong)
            worst_giveup = max(worst_giveup, pq)
            if fx:
                worst_miss = max(worst_miss, p0 + pq)
            else:
                worst_fa = max(worst_fa, p1)
        return SemanticsReport(
            exact=never_wrong and worst_giveup == 0,
            one_sided=worst_fa == 0,
            monte_carlo_half=False,
            las_vegas_half=never_wrong and worst_giveup <= Fraction(1, 2),
            bounded_error_third=worst_err <= Fraction(1, 3),
            worst_error=worst_err,
            worst_miss=worst_miss,
            worst_false_accept=worst_fa,
            worst_giveup=worst_giveup,
            per_input=tuple(per_input),
        )

    prob = f.accept_prob if isinstance(f, StrongFormula) else (lambda x: accept_prob(f, x))
    for idx in range(1 << n):
        x = index_assignment(idx, n)
        fx = target.eval(x)
        p = prob(x)
        per_input.append((x, fx, p))
        err = 1 - p if fx else p
        worst_err = max(worst_err, err)
        if fx:
            worst_miss = max(worst_miss, 1 - p)
        else:
            worst_fa = max(worst_fa, p)
    return SemanticsReport(
        exact=worst_err == 0,
        one_sided=worst_fa == 0,
        monte_carlo_half=worst_fa == 0 and worst_miss <= Fraction(1, 2),
        las_vegas_half=False,
        bounded_error_third=worst_err <= Fraction(1, 3),
        worst_error=worst_err,
        worst_miss=worst_miss,
        worst_false_accept=worst_fa,
        worst_giveup=None,
        per_input=tuple(per_input),
    )


def derandomize_exhaustive(sf: StrongFormula, target: BooleanFunction, k: int) -> Formula | None:
    """Search for a deterministic formula correct on all inputs, built from at
    most k support members joined by OR.

    Only members that never accept a 0-input are usable; the search is an exact
    set cover of the 1-inputs.  Returns None when no such selection exists.
    """
    n = target.arity
    if n > 16:
        raise CapExceeded("input space too large")
    one_inputs = [idx for idx in range(1 << n) if target.eval(index_assignment(idx, n))]
    cell_of = {idx: j for j, idx in enumerate(one_inputs)}
    full = (1 << len(one_inputs)) - 1
    safe_covers = []
    members = []
    for _, member in sf.support:
        cover = 0
        safe = True
        for idx in range(1 << n):
            v = eval_det(member, index_assignment(idx, n))
            if v and idx in cell_of:
                cover |= 1 << cell_of[idx]
            elif v:
                safe = False
                break
        if safe:
            if cover == full:
                return member
            safe_covers.append(cover)
            members.append(member)
    if not one_inputs:
        return members[0] if members else None
    # greedy, then exact search if greedy fails
    order = sorted(range(len(members)), key=lambda i: -safe_covers[i].bit_count())
    chosen, covered = [], 0
    for i in order:
        if covered == full or len(chosen) == k:
            break
        if safe_covers[i] & ~covered:
            chosen.append(i)
            covered |= safe_covers[i]
    if covered == full and len(chosen) <= k:
        return or_all([members[i] for i in chosen])
    picked = _exact_cover_members(safe_covers, full, k)
    if picked is None:
        return None
    return or_all([members[i] for i in picked])


def _exact_cover_members(covers: list[int], full: int, budget: int):
    reachable = 0
    for c in covers:
        reachable |= c
    if reachable != full:
        return None

    def rec(remaining, budget, start, chosen):
        if not remaining:
            return chosen
        if budget == 0:
            return None
        cell = remaining & -remaining
        for i in range(start, len(covers)):
            if covers[i] & cell:
                res = rec(remaining & ~covers[i], budget - 1, 0, chosen + [i])
                if res is not None:
                    return res
        return None

    return rec(full, budget, 0, [])


# ---------------------------------------------------------------------------
# one-way protocol compiler
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _PathStep:
    gate_id: int
    formula_on_left: bool   # which child continues the path
    side: Formula           # the subtree on the other side (Alice-only)


# eq=False: contracted nodes are keyed by identity (structurally equal nodes
# may occur at different places in the tree)
@dataclass(frozen=True, eq=False)
class _CLeaf:
    steps: tuple[_PathStep, ...]
    var: int


@dataclass(frozen=True, eq=False)
class _CBranch:
    steps: tuple[_PathStep, ...]
    gate_id: int
    left: "_CNode"
    right: "_CNode"


_CNode = _CLeaf | _CBranch

_DESCRIPTOR = {(0, 0): "00", (1, 1): "01", (0, 1): "10", (1, 0): "11"}


class OneWayProtocol:
    """Alice-to-Bob protocol compiled from a deterministic formula.

    Alice sends, for each contracted path of the Bob-subtree, 2 bits saying
    whether the path computes 0, 1, g, or not-g of the value entering it
    (00/01/10/11 respectively); paths are emitted in post-order, children
    before their branching gate, left before right.
    """

    def __init__(self, formula: Formula, bob_block: frozenset[int]):
        ins, rnds, gss = collect_vars(formula)
        if rnds or gss:
            raise InvalidInput("protocol compilation needs a deterministic formula")
        self.formula = formula
        self.bob_block = frozenset(bob_block)
        self.bob_leaf_count = _count_bob_leaves(formula, self.bob_block)
        if self.bob_leaf_count == 0:
            self.tree = None
            self.order: tuple[_CNode, ...] = ()
            self.message_length = 2
        else:
            self.tree = _contract(formula, self.bob_block)
            order: list[_CNode] = []
            _postorder(self.tree, order)
            self.order = tuple(order)
            self.message_length = 2 * len(self.order)

    def alice_message(self, x: Sequence[int]) -> str:
        """Message bits; only positions outside bob_block are read."""
        if self.tree is None:
            v = eval_det(self.formula, x)
            return "0" + str(v)
        return "".join(_descriptor(node, x) for node in self.order)

    def bob_output(self, message: str, x: Sequence[int]) -> int:
        """Bob's answer; only positions inside bob_block are read."""
        if len(message) != self.message_length:
            raise InvalidInput("message length mismatch")
        if self.tree is None:
            return int(message[1])
        descs = [message[2 * i: 2 * i + 2] for i in range(len(self.order))]
        by_node = dict(zip(self.order, descs))

        def value(node: _CNode) -> int:
            if isinstance(node, _CLeaf):
                v = x[node.var - 1]
            else:
                v = gate_value(node.gate_id, value(node.left), value(node.right))
            d = by_node[node]
            return {"00": 0, "01": 1, "10": v, "11": 1 - v}[d]

        return value(self.tree)

    def run(self, x: Sequence[int]) -> int:
        return self.bob_output(self.alice_message(x), x)


def _count_bob_leaves(f: Formula, bob: frozenset[int]) -> int:
    if isinstance(f, Input):
        return int(f.index in bob)
    if isinstance(f, Gate):
        return _count_bob_leaves(f.left, bob) + _count_bob_leaves(f.right, bob)
    return 0


def _contract(f: Formula, bob: frozenset[int]) -> _CNode:
    steps: list[_PathStep] = []
    cur = f
    while isinstance(cur, Gate):
        lb = _count_bob_leaves(cur.left, bob) > 0
        rb = _count_bob_leaves(cur.right, bob) > 0
        if lb and rb:
            return _CBranch(tuple(steps), cur.gate_id,
                            _contract(cur.left, bob), _contract(cur.right, bob))
        if lb:
            steps.append(_PathStep(cur.gate_id, True, cur.right))
            cur = cur.left
        else:
            steps.append(_PathStep(cur.gate_id, False, cur.left))
            cur = cur.right
    assert isinstance(cur, Input) and cur.index in bob
    return _CLeaf(tuple(steps), cur.index)


def _postorder(node: _CNode, out: list) -> None:
    if isinstance(node, _CBranch):
        _postorder(node.left, out)
        _postorder(node.right, out)
    out.append(node)


def _descriptor(node: _CNode, x: Sequence[int]) -> str:
    f0, f1 = 0, 1
    for step in reversed(node.steps):
        a = eval_det(step.side, x)
        if step.formula_on_left:
            f0 = gate_value(step.gate_id, f0, a)
            f1 = gate_value(step.gate_id, f1, a)
        else:
            f0 = gate_value(step.gate_id, a, f0)
            f1 = gate_value(step.gate_id, a, f1)
    return _DESCRIPTOR[(f0, f1)]


def to_oneway_protocol(f: Formula, bob_block: Iterable[int]) -> OneWayProtocol:
    """Compile a deterministic formula into a one-way protocol for the given split."""
    return OneWayProtocol(f, frozenset(bob_block))


# ---------------------------------------------------------------------------
# text format
# ---------------------------------------------------------------------------

def format_formula(f: Formula) -> str:
    """Parenthesized prefix text: ``(g:ID left right)`` with leaves x3 r1 a2 0 1."""
    if isinstance(f, Input):
        return f"x{f.index}"
    if isinstance(f, Rand):
        return f"r{f.index}"
    if isinstance(f, Guess):
        return f"a{f.index}"
    if isinstance(f, Const):
        return str(f.value)
    return f"(g:{f.gate_id} {format_formula(f.left)} {format_formula(f.right)})"


def parse_formula(text: str) -> Formula:
    tokens = text.replace("(", " ( ").replace(")", " ) ").split()
    pos = 0

    def parse() -> Formula:
        nonlocal pos
        if pos >= len(tokens):
            raise InvalidInput("unexpected end of formula text")
        tok = tokens[pos]
        pos += 1
        if tok == "(":
            head = tokens[pos]
            pos += 1
            if not head.startswith("g:"):
                raise InvalidInput(f"expected gate id, got {head!r}")
            gid = int(head[2:])
            left = parse()
            right = parse()
            if tokens[pos] != ")":
                raise InvalidInput("expected ')'")
            pos += 1
            return Gate(gid, left, right)
        if tok in ("0", "1"):
            return Const(int(tok))
        if tok[0] in "xra" and tok[1:].isdigit():
            idx = int(tok[1:])
            return {"x": Input, "r": Rand, "a": Guess}[tok[0]](idx)
        raise InvalidInput(f"bad token {tok!r}")

    f = parse()
    if pos != len(tokens):
        raise InvalidInput("trailing tokens after formula")
    return f
