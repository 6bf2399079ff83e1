"""Named verification suites driven by the command line.

Each suite runs a list of fast, seeded invariant checks for one module and
returns (name, ok, detail) records; the heavyweight exhaustive verifications
live in the test suite.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import boolfn, commcx, constructions, formula
from . import quantum as q

SUITES = ("boolfn", "commcx", "formula", "constructions", "quantum", "all")


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str = ""


def _random_table_function(rng: random.Random, arity: int) -> boolfn.BooleanFunction:
    table = rng.getrandbits(1 << arity)
    return boolfn.BooleanFunction.from_table(arity, table)


def suite_boolfn(seed: int, extra_tables=(), include_builtin: bool = True) -> list[CheckResult]:
    out = []
    rng = random.Random(seed)
    corpus: list[tuple[str, boolfn.BooleanFunction]] = []
    if include_builtin:
        corpus += [
            ("ix4", boolfn.ix_function(4)),
            ("disj3", boolfn.disj_function(3)),
            ("isa4", boolfn.isa_function(4)),
            ("mp2", boolfn.mp_function(2)),
            ("ad(2,1)", boolfn.ad_function(2, 1)),
        ]
    corpus += [(f"table#{i}", f) for i, f in enumerate(extra_tables)]
    for name, f in corpus:
        tbl = f.table
        ok = all(
            ((tbl >> idx) & 1) == f.predicate(boolfn.index_assignment(idx, f.arity))
            for idx in range(1 << f.arity)
        )
        out.append(CheckResult(f"table agrees with predicate [{name}]", ok))
    for name, f in corpus:
        if f.arity < 3:
            continue
        ok = True
        for _ in range(20):
            p1, p2 = rng.sample(range(1, f.arity + 1), 2)
            v1, v2 = rng.randint(0, 1), rng.randint(0, 1)
            merged = boolfn.restrict(f, {p1: v1, p2: v2})
            stepwise = boolfn.restrict(boolfn.restrict(f, {p1: v1}),
                                       {_renumber(p2, p1): v2})
            ok = ok and stepwise.table == merged.table
        out.append(CheckResult(f"restrict composes [{name}]", ok))
    for name, f in corpus:
        if f.arity > 12:
            continue
        blk = frozenset(rng.sample(range(1, f.arity + 1), min(3, f.arity - 1)))
        cnt = boolfn.subfunction_count(f, blk)
        rows, _ = commcx.det_cc(boolfn.comm_split(f, blk))
        out.append(CheckResult(f"subfunction count = distinct game rows [{name}]",
                               cnt == rows, f"{cnt}"))
    for name, f in [c for c in corpus if c[1].arity <= 12][:3]:
        ok = boolfn.parse_table_text(boolfn.format_table_text(f)).table == f.table
        out.append(CheckResult(f"table text round-trips [{name}]", ok))
    return out


def _renumber(p: int, removed: int) -> int:
    return p - (1 if p > removed else 0)


def suite_commcx(seed: int) -> list[CheckResult]:
    out = []
    rng = random.Random(seed)
    f4 = boolfn.ix_function(4)
    m = boolfn.comm_split(f4, boolfn.ix_selector_block(4))
    out.append(CheckResult("index game: 16 distinct rows, D = 4", commcx.det_cc(m) == (16, 4)))
    out.append(CheckResult("index game: reverse direction D = 2", commcx.det_cc_B(m) == 2))
    d, witness = commcx.vc_dim(m)
    out.append(CheckResult("index game: VC = 4", d == 4, f"witness {witness}"))

    ok_fact = True
    for _ in range(200):
        mm = commcx.CommMatrix.from_rows(
            [[rng.randint(0, 1) for _ in range(6)] for _ in range(8)])
        lo, hi = commcx.fact22_bounds(mm)
        dd, _ = commcx.vc_dim(mm)
        _, dc = commcx.det_cc(mm)
        ok_fact = ok_fact and lo and hi and dd <= dc
    out.append(CheckResult("VC sandwich holds on 200 random 8x6 matrices", ok_fact))

    ok_nd = True
    for _ in range(25):
        nr, nc = rng.randint(1, 6), rng.randint(1, 6)
        mm = commcx.CommMatrix.from_rows(
            [[rng.randint(0, 1) for _ in range(nc)] for _ in range(nr)])
        prev = None
        for s in (0, 1, 2):
            c, cert = commcx.nondet_cc_exact(mm, s)
            ok_nd = ok_nd and commcx.validate_cover_certificate(mm, cert)
            if s == 0:
                ok_nd = ok_nd and c == commcx.det_cc(mm)[1]
            if prev is not None:
                ok_nd = ok_nd and c <= prev
            prev = c
    out.append(CheckResult("guess-limited solver: N_0 = D, monotone, certified (25 matrices)", ok_nd))
    return out


def _random_formula(rng: random.Random, size: int, n_vars: int):
    if size <= 1:
        return formula.Input(rng.randint(1, n_vars))
    split = rng.randint(1, size - 1)
    return formula.Gate(rng.randint(0, 15),
                        _random_formula(rng, split, n_vars),
                        _random_formula(rng, size - split, n_vars))


def suite_formula(seed: int) -> list[CheckResult]:
    out = []
    rng = random.Random(seed)
    ok = True
    for _ in range(100):
        nv = rng.randint(1, 8)
        fr = _random_formula(rng, rng.randint(1, 16), nv)
        bob = frozenset(v for v in range(1, nv + 1) if rng.random() < 0.4)
        prot = formula.to_oneway_protocol(fr, bob)
        if prot.bob_leaf_count:
            ok = ok and prot.message_length < 4 * prot.bob_leaf_count
        for xi in range(1 << nv):
            x = boolfn.index_assignment(xi, nv)
            if prot.run(x) != formula.eval_det(fr, x):
                ok = False
    out.append(CheckResult("compiled protocols reproduce 100 random formulas", ok))

    ok = True
    for _ in range(50):
        fr = _random_formula(rng, rng.randint(1, 12), 6)
        ok = ok and formula.parse_formula(formula.format_formula(fr)) == fr
    out.append(CheckResult("formula text round-trips", ok))

    r1 = formula.Rand(1)
    ok = (formula.accept_prob(r1, ()) == Fraction(1, 2)
          and formula.accept_prob(formula.xor(r1, r1), ()) == 0)
    out.append(CheckResult("random leaves read consistently", ok))

    sf = formula.StrongFormula.from_fair(constructions.mp_fingerprint(1))
    amp = formula.amplify_mc(sf, 2)
    x11 = (1, 1)
    miss = 1 - sf.accept_prob(x11)
    ok = (1 - amp.accept_prob(x11)) == miss ** 2
    out.append(CheckResult("amplification squares the miss probability", ok))
    return out


def suite_constructions(seed: int) -> list[CheckResult]:
    out = []
    mp2 = boolfn.mp_function(2)
    rep = formula.classify_semantics(constructions.mp_fingerprint(2), mp2)
    out.append(CheckResult(
        "fingerprint: no false accepts, accepts good inputs with prob >= 1/4",
        rep.worst_false_accept == 0 and rep.worst_miss <= Fraction(3, 4)))

    f = formula.or_copies_fair(constructions.mp_fingerprint(2), 3)
    _, g_not = constructions.mc_formulas_from_parity(2)
    lv = constructions.las_vegas_combine(f, g_not, mp2)
    lv_rep = formula.classify_semantics(lv, mp2)
    out.append(CheckResult("zero-error combiner: never wrong, gives up with prob <= 1/2",
                           lv_rep.worst_error == 0 and lv_rep.las_vegas_half))

    code = constructions.greedy_code(16, 4)
    ok = all(len(set(a) & set(b)) <= 2
             for i, a in enumerate(code.members) for b in code.members[:i])
    out.append(CheckResult("greedy code: pairwise intersections within s/2",
                           ok and len(code.members) >= code.guaranteed_size))

    out.append(CheckResult("subspace census matches 2, 5, 16",
                           [constructions.subspace_census(n) for n in (1, 2, 3)] == [2, 5, 16]))
    out.append(CheckResult("matrix-game rows reach every realized kernel",
                           constructions.mp_row_witness(2) >= constructions.mp_kernel_count(2)))
    isa4 = boolfn.isa_function(4)
    out.append(CheckResult("storage-access shattering witness verifies (n=4)",
                           constructions.isa_shatter_witness(4, 0).verify(isa4)))
    return out


def suite_quantum(seed: int) -> list[CheckResult]:
    out = []
    rng = np.random.default_rng(seed)
    for kind in q.INEQUALITY_KINDS:
        ok, slack = q.sweep_inequality(kind, 200, seed)
        out.append(CheckResult(f"inequality sweep [{kind}]", ok, f"min slack {slack:.3e}"))

    ok = all(q.superdense(a, b) == (a, b) for a in (0, 1) for b in (0, 1))
    out.append(CheckResult("superdense coding round-trips all four messages", ok))

    ok = True
    for _ in range(5):
        u = q.random_unitary(2, rng)
        d = q.random_pure_state(2, rng)
        branches = q.pqg_branches(d, q.program_state(u))
        ok = ok and all(abs(p - 0.25) < 1e-9 for _, p, _ in branches)
        res = q.pqg_retry(d, u, rng)
        ok = ok and abs(np.vdot(u @ d, res.state)) ** 2 >= 1 - 1e-9
    out.append(CheckResult("programmable gate: 1/4 branches, retried to fidelity 1", ok))

    dep = q.depolarizing_channel(1.0)
    u_dil, env = q.dilation(dep)
    rho = q.random_density(2, rng)
    from .quantum.channels import apply_dilation
    ok = (q.cptp_validate(dep)
          and not q.cptp_validate(q.transpose_map(2))
          and np.allclose(apply_dilation(u_dil, env, rho), dep.apply(rho), atol=1e-9))
    out.append(CheckResult("channel validation and dilation", ok))

    prng = random.Random(seed)
    ok = True
    for _ in range(20):
        nv = prng.randint(1, 4)
        fr = _random_readonce(prng, prng.randint(1, 6), nv, [1])
        qt = q.simulate_readonce_random(fr)
        for xi in range(1 << nv):
            x = boolfn.index_assignment(xi, nv)
            if abs(q.qformula_eval(qt, x) - float(formula.accept_prob(fr, x))) > 1e-9:
                ok = False
        x = boolfn.index_assignment(0, nv)
        ok = ok and q.order_invariance_check(qt, x) and q.unentangled_inputs_check(qt, x)
    out.append(CheckResult("read-once-random simulation matches exact acceptance", ok))
    return out


def _random_readonce(rng: random.Random, size: int, n_vars: int, next_rand: list[int]):
    """Random formula whose random leaves are all distinct."""
    if size <= 1:
        if rng.random() < 0.4:
            idx = next_rand[0]
            next_rand[0] += 1
            return formula.Rand(idx)
        return formula.Input(rng.randint(1, n_vars))
    split = rng.randint(1, size - 1)
    return formula.Gate(rng.randint(0, 15),
                        _random_readonce(rng, split, n_vars, next_rand),
                        _random_readonce(rng, size - split, n_vars, next_rand))


def run_suite(name: str, seed: int, extra_tables=(), include_builtin: bool = True) -> list[CheckResult]:
    if name == "all":
        results = []
        for sub in SUITES[:-1]:
            results += run_suite(sub, seed, extra_tables, include_builtin)
        return results
    if name == "boolfn":
        return suite_boolfn(seed, extra_tables, include_builtin)
    if name == "commcx":
        return suite_commcx(seed)
    if name == "formula":
        return suite_formula(seed)
    if name == "constructions":
        return suite_constructions(seed)
    if name == "quantum":
        return suite_quantum(seed)
    raise ValueError(f"unknown suite {name!r}")
