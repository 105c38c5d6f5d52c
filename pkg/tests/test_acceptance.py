"""Acceptance criteria, one test each, with wall-clock limits.

Each test prints a single PASS/FAIL line.
"""
import random
import time

import pytest

from simpla.bisim import bisimilar, distinguishing_sentence, greatest_bisim
from simpla.correspondence import isomorphic, lem, sc
from simpla.fixtures import CLARIFICATIONS, hex_kripke, hex_simplicial, intro
from simpla.generators import GenParams, random_duplicated_model, random_simplicial_model
from simpla.intensional import (GroupFormula, check_pos_introspection, eval_k_phi_direct, expand_k_phi,
                                in_pi_grammar, random_group_formula,
                                search_neg_introspection_counterexample, verify_neg_witness)
from simpla.models import check_local_epistemic, properize
from simpla.normalform import anf, is_anf
from simpla.semantics import eval_kripke, eval_simplicial, frame_of, truth_set
from simpla.syntax import Atom, Know, TOP, conj, neg, parse, random_formula
from simpla.validity import (DERIVED, ELM, MUTANTS, PRIMARY, Sat, UnsatUpTo, random_local_epistemic_model,
                             sat_bounded, soundness_suite, valid_up_to)

pytestmark = pytest.mark.slow

AGENTS = ("a", "b", "c")


@pytest.fixture
def verdict(capsys):
    """Time the criterion body and print one PASS/FAIL line."""
    def finish(number, title, failures, start, limit):
        elapsed = time.perf_counter() - start
        ok = not failures and elapsed < limit
        with capsys.disabled():
            detail = f"{len(failures)} failures" if failures else "0 failures"
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {number}: {title} "
                  f"({detail}, {elapsed:.2f}s, limit {limit}s)")
        assert not failures, failures[:5]
        assert elapsed < limit, f"took {elapsed:.1f}s, limit {limit}s"
    return finish


def test_criterion_1_intro_clarifications(verdict):
    start = time.perf_counter()
    c = intro()
    m = lem(c)
    failures = []
    for key, (text, expected) in CLARIFICATIONS.items():
        f = parse(text)
        got = (eval_simplicial(c, "F", {}, f), eval_kripke(m, "F", {}, f))
        if got != (expected, expected):
            failures.append((key, got, expected))
    verdict(1, "intro clarifications under both semantics", failures, start, 1)


def test_criterion_2_hexagon_round_trips(verdict):
    start = time.perf_counter()
    hs, hk = hex_simplicial(), hex_kripke()
    failures = []
    if isomorphic(sc(lem(hs)), hs) is None:
        failures.append("sc(lem(hex simplicial))")
    if isomorphic(lem(sc(hk)), hk) is None:
        failures.append("lem(sc(hex kripke))")
    if isomorphic(lem(hs), hk) is None:
        failures.append("lem(hex simplicial) vs hex kripke")
    verdict(2, "hexagon round trips", failures, start, 1)


def test_criterion_3_truth_transfer(verdict):
    start = time.perf_counter()
    failures = []
    for s in range(100):
        c = random_simplicial_model(GenParams(agents=3, max_facets=6, seed=s))
        m = lem(c)
        for k in range(50):
            alpha = random_formula(AGENTS, ("p",), 3, s * 1000 + k)
            for F in c.points:
                if eval_simplicial(c, F, {}, alpha) != eval_kripke(m, F, {}, alpha):
                    failures.append((s, k, F))
    verdict(3, "truth transfer through lem", failures, start, 120)


def test_criterion_4_soundness(verdict):
    start = time.perf_counter()
    schemas = PRIMARY + DERIVED + ELM
    report = soundness_suite(schemas + MUTANTS, trials=200, gp=GenParams(agents=3, seed=0), n_models=50)
    failures = [r.line() for r in report.rows if r.failures and r.schema not in {s.name for s in MUTANTS}]
    for s in MUTANTS:
        if report.row(s.name).failures == 0:
            failures.append(f"mutant {s.name} not caught")
    assert len(report.rows) == 22
    verdict(4, f"soundness of {len(schemas)} schemas; mutant caught", failures, start, 300)


def test_criterion_5_properization(verdict):
    start = time.perf_counter()
    failures = []
    for s in range(100):
        m, _ = random_duplicated_model(GenParams(seed=s))
        if check_local_epistemic(m).proper:
            failures.append((s, "input already proper"))
        out, cells = properize(m)
        report = check_local_epistemic(out)
        if not (all(r.ok for _, r in report.items()) and report.proper):
            failures.append((s, "lep"))
        z = greatest_bisim(m, out)
        if any((w, c) not in z for w, c in cells.items()):
            failures.append((s, "bisim"))
    verdict(5, "properization is proper and bisimilar", failures, start, 60)


def test_criterion_6_hennessy_milner(verdict):
    start = time.perf_counter()
    failures = []
    positives = 0
    for s in range(100):
        rng = random.Random(s)
        gp = GenParams(seed=s, max_facets=4)
        c = random_simplicial_model(gp)
        d = c if rng.random() < 0.4 else random_simplicial_model(gp.with_seed(s + 10**6))
        F, G = rng.choice(c.points), rng.choice(d.points)
        f = distinguishing_sentence(c, F, d, G)
        same = bisimilar(c, F, d, G)
        positives += same
        if (f is None) != same:
            failures.append((s, "verdict"))
        elif f is not None and not (eval_simplicial(c, F, {}, f) and not eval_simplicial(d, G, {}, f)):
            failures.append((s, "distinguisher"))
    assert 0 < positives < 100
    verdict(6, "bisimilarity matches distinguishability", failures, start, 120)


def test_criterion_7_anf(verdict):
    start = time.perf_counter()
    failures = []
    models = [frame_of(random_simplicial_model(GenParams(seed=s, max_facets=5))) for s in range(20)]
    for s in range(200):
        alpha = random_formula(AGENTS, ("p",), 3, s)
        out = anf(alpha)
        if not is_anf(out):
            failures.append((s, "shape"))
        if any(truth_set(fr, out) != truth_set(fr, alpha) for fr in models):
            failures.append((s, "truth"))
    verdict(7, "assignment normal form", failures, start, 120)


def test_criterion_8_k_phi_oracles(verdict):
    start = time.perf_counter()
    failures = []
    top = GroupFormula(TOP)
    for s in range(30):
        c = random_simplicial_model(GenParams(seed=s, max_facets=5))
        phis = [random_group_formula(AGENTS, ("p",), 2, s * 100 + k) for k in range(20)]
        alphas = [random_formula(AGENTS, ("p",), 2, s * 100 + k) for k in range(10)]
        for alpha in alphas:
            alpha_true = {F: eval_simplicial(c, F, {}, alpha) for F in c.points}
            for F in c.points:
                if alpha_true[F] and not eval_k_phi_direct(top, alpha, c, F):
                    failures.append((s, "K_top", F))
            for j, phi in enumerate(phis):
                expanded = truth_set(c, expand_k_phi(phi, alpha, c.agents))
                for i, F in enumerate(c.points):
                    direct = eval_k_phi_direct(phi, alpha, c, F)
                    if direct != bool(expanded >> i & 1):
                        failures.append((s, j, F, "agreement"))
                    if direct and not alpha_true[F]:
                        failures.append((s, j, F, "T"))
    verdict(8, "K_phi expansion agrees with direct truth", failures, start, 120)


def pi_formula(rng, depth=2):
    """A random formula of the positive-introspection grammar in x."""
    r = rng.random()
    if depth <= 0 or r < 0.3:
        return Atom("p", "x")
    if r < 0.5:
        return Know(frozenset({"x"}), random_formula(AGENTS, ("p",), 1, rng.randrange(10**6)))
    if r < 0.7:
        return neg(pi_formula(rng, depth - 1))
    return conj([pi_formula(rng, depth - 1), pi_formula(rng, depth - 1)])


def test_criterion_9_introspection(verdict):
    start = time.perf_counter()
    failures = []
    rng = random.Random(9)
    chis = [GroupFormula(pi_formula(rng)) for _ in range(20)]
    models = [random_local_epistemic_model(GenParams(seed=s, max_facets=4)) for s in range(50)]
    alphas = [random_formula(AGENTS, ("p",), 1, s) for s in range(2)]
    for chi in chis:
        assert in_pi_grammar(chi)
        report = check_pos_introspection(chi, alphas, models)
        if not report.ok:
            failures.append(str(report))
    w = search_neg_introspection_counterexample(GroupFormula(parse("p(x)")), 4)
    if w is None or not verify_neg_witness(GroupFormula(parse("p(x)")), w):
        failures.append("no verified negative-introspection witness for p(x)")
    verdict(9, "positive introspection; negative witness for p(x)", failures, start, 180)


def test_criterion_10_bounded_sat(verdict):
    start = time.perf_counter()
    failures = []
    sats = 0
    for s in range(50):
        alpha = random_formula(("a", "b"), ("p",), 2, s)
        out = sat_bounded(neg(alpha), 2)
        if isinstance(out, Sat):
            sats += 1
            if eval_simplicial(out.model, out.point, {}, alpha):
                failures.append((s, "witness"))
        elif not isinstance(out, UnsatUpTo):
            failures.append((s, "verdict type"))
        if valid_up_to(alpha, 2) != isinstance(out, UnsatUpTo):
            failures.append((s, "consistency"))
    assert 0 < sats < 50
    verdict(10, "bounded satisfiability is coherent", failures, start, 180)
