"""Communication matrices and exact one-way complexity measures.

Matrices are stored row-wise as int bitsets (bit j of a row = column j).  All
measures here are exact brute-force computations behind explicit caps; the
nondeterministic solver searches covers of the matrix's ones by a bounded
number of one-sided submatrices, each with a bounded number of distinct rows.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import CapExceeded, InvalidInput

VC_COL_CAP = 20
NONDET_ROW_CAP = 8
NONDET_COL_CAP = 8
NONDET_GUESS_CAP = 3


@dataclass(frozen=True)
class CommMatrix:
    """0/1 matrix indexed by Alice rows x Bob columns."""

    rows: int
    cols: int
    row_bits: tuple[int, ...]
    row_labels: tuple = ()
    col_labels: tuple = ()

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise InvalidInput("matrix must have at least one row and column")
        if len(self.row_bits) != self.rows:
            raise InvalidInput("row count mismatch")
        mask = (1 << self.cols) - 1
        if any(r & ~mask for r in self.row_bits):
            raise InvalidInput("row has bits beyond the column count")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "CommMatrix":
        bits = tuple(sum((1 << j) for j, v in enumerate(r) if v) for r in rows)
        return cls(len(rows), len(rows[0]), bits)

    def entry(self, r: int, c: int) -> int:
        return (self.row_bits[r] >> c) & 1

    def column_bits(self, c: int) -> int:
        v = 0
        for r, row in enumerate(self.row_bits):
            if (row >> c) & 1:
                v |= 1 << r
        return v

    def to_text(self) -> str:
        lines = [f"{self.rows} {self.cols}"]
        for r in self.row_bits:
            lines.append("".join(str((r >> j) & 1) for j in range(self.cols)))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "CommMatrix":
        lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
        rows, cols = map(int, lines[0].split())
        if len(lines) != rows + 1:
            raise InvalidInput("row count does not match header")
        bits = []
        for ln in lines[1:]:
            if len(ln) != cols or set(ln) - {"0", "1"}:
                raise InvalidInput("rows must be 0/1 strings of header width")
            bits.append(sum(1 << j for j, ch in enumerate(ln) if ch == "1"))
        return cls(rows, cols, tuple(bits))


def det_cc(m: CommMatrix) -> tuple[int, int]:
    """(number of distinct rows, one-way deterministic complexity ceil(log2 of it))."""
    count = len(set(m.row_bits))
    return count, (count - 1).bit_length()


def det_cc_B(m: CommMatrix) -> int:
    """One-way complexity in the reversed direction: ceil(log2 #distinct columns)."""
    count = len({m.column_bits(c) for c in range(m.cols)})
    return (count - 1).bit_length()


def check_shattered(m: CommMatrix, cols_subset: Iterable[int]) -> bool:
    """True iff every subset of ``cols_subset`` is cut out by some row."""
    s = sorted(set(cols_subset))
    if any(not 0 <= c < m.cols for c in s):
        raise InvalidInput("column out of range")
    k = len(s)
    if k > VC_COL_CAP:
        raise CapExceeded(f"{k}-column shattering check exceeds cap {VC_COL_CAP}")
    need = 1 << k
    pats = set()
    for row in m.row_bits:
        pat = 0
        for j, c in enumerate(s):
            if (row >> c) & 1:
                pat |= 1 << j
        pats.add(pat)
        if len(pats) == need:
            return True
    return len(pats) == need


def vc_dim(m: CommMatrix) -> tuple[int, tuple[int, ...]]:
    """Exact VC-dimension of the row family, with a lexicographically least witness.

    Level-wise search with subset pruning: a set can only be shattered if all
    its subsets are.
    """
    if m.cols > VC_COL_CAP:
        raise CapExceeded(f"{m.cols} columns exceeds cap {VC_COL_CAP}")
    best: tuple[int, ...] = ()
    current = [(c,) for c in range(m.cols) if check_shattered(m, (c,))]
    level_set = set(current)
    while current:
        best = current[0]
        nxt = []
        for s in current:
            for c in range(s[-1] + 1, m.cols):
                cand = s + (c,)
                if all(tuple(x for x in cand if x != drop) in level_set for drop in cand):
                    if check_shattered(m, cand):
                        nxt.append(cand)
        current = sorted(set(nxt))
        level_set = set(current)
    return len(best), best


def fact22_bounds(m: CommMatrix) -> tuple[bool, bool]:
    """Check 2^d <= |F| <= (cols+1)^d for the distinct-row family and its VC-dimension."""
    d, _ = vc_dim(m)
    fam = len(set(m.row_bits))
    return (1 << d) <= fam, fam <= (m.cols + 1) ** d


# ---------------------------------------------------------------------------
# limited nondeterminism
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NondetCoverCertificate:
    """Cover of a matrix's ones by 2^s one-sided matrices.

    The rows appearing across all matrices come from one set of at most 2^c
    message-response patterns (Bob answers from the message and his input
    alone, so the response set is shared by all guesses); in particular each
    single matrix also has at most 2^c distinct rows.
    """

    s: int
    c: int
    cols: int
    matrices: tuple[tuple[int, ...], ...]  # per guess, one pattern int per original row

    def to_text(self) -> str:
        lines = [f"s={self.s} c={self.c} cols={self.cols}"]
        for g, mat in enumerate(self.matrices):
            lines.append(f"guess {g}")
            for r in mat:
                lines.append("".join(str((r >> j) & 1) for j in range(self.cols)))
        return "\n".join(lines) + "\n"


def validate_cover_certificate(m: CommMatrix, cert: NondetCoverCertificate) -> bool:
    """Re-validate a certificate against its matrix, independently of the solver."""
    if len(cert.matrices) != 1 << cert.s or cert.cols != m.cols:
        return False
    union = [0] * m.rows
    shared_rows: set[int] = set()
    for mat in cert.matrices:
        if len(mat) != m.rows:
            return False
        if len(set(mat)) > 1 << cert.c:
            return False
        shared_rows.update(mat)
        for r, pat in enumerate(mat):
            if pat & ~m.row_bits[r]:
                return False  # a one where the target has a zero
            union[r] |= pat
    if len(shared_rows) > 1 << cert.c:
        return False
    return all(union[r] == m.row_bits[r] for r in range(m.rows))


def _and_candidates(distinct: list[int]) -> list[int]:
    """Distinct AND-combinations of rows: every useful response pattern is one
    (a pattern may be enlarged to the AND of all rows it serves)."""
    values = {0}
    frontier = set(distinct)
    values |= frontier
    while frontier:
        nxt = set()
        for v in frontier:
            for r in distinct:
                w = v & r
                if w not in values:
                    values.add(w)
                    nxt.add(w)
        frontier = nxt
    return sorted(values, reverse=True)


def _row_coverable(row: int, usable: list[int], budget: int) -> list[int] | None:
    """Can <= budget (and >= 1, a message is always sent) of the usable
    patterns OR to exactly ``row``?"""
    if not usable:
        return None
    if len(usable) <= budget:
        acc = 0
        for p in usable:
            acc |= p
        return list(usable) if acc == row else None
    # budget < len(usable): enumerate subsets of bounded size
    best = None

    def rec(i, acc, chosen):
        nonlocal best
        if best is not None:
            return
        if acc == row and chosen:
            best = list(chosen)
            return
        if i == len(usable) or len(chosen) == budget:
            return
        rec(i + 1, acc | usable[i], chosen + [usable[i]])
        rec(i + 1, acc, chosen)

    rec(0, 0, [])
    return best


def _feasible_response_set(distinct: list[int], c: int, k: int):
    """Search for <= 2^c response patterns so that every row is a union of at
    most k of the patterns contained in it.  Returns the pattern set or None."""
    budget = 1 << c
    cands = _and_candidates(distinct)
    usable_by_row = {r: [p for p in cands if not (p & ~r)] for r in distinct}
    visited: set[frozenset[int]] = set()

    def satisfied(r: int, chosen: tuple[int, ...]) -> bool:
        usable = [p for p in chosen if not (p & ~r)]
        return _row_coverable(r, usable, k) is not None

    def rec(chosen: tuple[int, ...]):
        key = frozenset(chosen)
        if key in visited:
            return None
        visited.add(key)
        pending = [r for r in distinct if not satisfied(r, chosen)]
        if not pending:
            return chosen
        if len(chosen) == budget:
            return None
        # branch on the most constrained unsatisfied row
        pending.sort(key=lambda r: len(usable_by_row[r]))
        row = pending[0]
        options = [p for p in usable_by_row[row] if p not in chosen]
        options.sort(key=lambda p: -p.bit_count())
        for p in options:
            res = rec(chosen + (p,))
            if res is not None:
                return res
        return None

    return rec(())


def nondet_cc_exact(m: CommMatrix, s: int) -> tuple[int, NondetCoverCertificate]:
    """Minimal message length c for a one-way protocol with s private guess bits.

    Search caps keep this exact solver on tiny matrices only.
    """
    if m.rows > NONDET_ROW_CAP or m.cols > NONDET_COL_CAP:
        raise CapExceeded(f"matrix beyond {NONDET_ROW_CAP}x{NONDET_COL_CAP} solver cap")
    if not 0 <= s <= NONDET_GUESS_CAP:
        raise CapExceeded(f"s must be in 0..{NONDET_GUESS_CAP}")

    distinct = sorted(set(m.row_bits))
    nd = len(distinct)
    _, d_complexity = det_cc(m)
    k = 1 << s

    def build_cert(c: int, patterns) -> NondetCoverCertificate:
        per_row: dict[int, list[int]] = {}
        for r in distinct:
            usable = [p for p in patterns if not (p & ~r)]
            chosen = _row_coverable(r, usable, k)
            assert chosen is not None
            per_row[r] = (chosen + [chosen[0]] * k)[:k]
        mats = []
        for g in range(k):
            mats.append(tuple(per_row[r][g] for r in m.row_bits))
        return NondetCoverCertificate(s, c, m.cols, tuple(mats))

    for c in range(d_complexity + 1):
        if c == d_complexity:
            patterns = list(distinct)  # one message per distinct row
        else:
            patterns = _feasible_response_set(distinct, c, k)
            if patterns is None:
                continue
        cert = build_cert(c, patterns)
        if not validate_cover_certificate(m, cert):
            raise AssertionError("internal: certificate failed validation")
        return c, cert
    raise AssertionError("unreachable: c = D always admits a cover")


def reduce_ix(m: CommMatrix, shattered: Iterable[int]) -> tuple[dict[frozenset[int], int], tuple[int, ...]]:
    """Embed the index function on a shattered column set into ``m``.

    For every subset R of the shattered set returns a row x_R (lexicographically
    least) with m[x_R][s_i] = 1 iff s_i in R, plus the ordered column map.
    """
    s = tuple(sorted(set(shattered)))
    if not check_shattered(m, s):
        raise InvalidInput("column set is not shattered")
    k = len(s)
    first_row_with_pattern: dict[int, int] = {}
    for r, row in enumerate(m.row_bits):
        pat = 0
        for j, c in enumerate(s):
            if (row >> c) & 1:
                pat |= 1 << j
        first_row_with_pattern.setdefault(pat, r)
    row_map = {}
    for pat in range(1 << k):
        subset = frozenset(s[j] for j in range(k) if (pat >> j) & 1)
        row_map[subset] = first_row_with_pattern[pat]
    return row_map, s
