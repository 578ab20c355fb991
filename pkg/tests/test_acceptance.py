"""Acceptance criteria 1-10; each test records a pass/fail line for the summary."""
import filecmp
import io
import random
import time
from pathlib import Path

from hypnet import automata as am
from hypnet.cayley import build_ball, estimate_delta, estimate_quasiconvexity, inner, subgroup_ball
from hypnet.cli import RunConfig, artifact_dir, cmd_analyze
from hypnet.cones import ConeLanguages, compute_cone_types, geodesic_acceptor
from hypnet.net import (SubgroupOracle, action_displacement, build_coset_table, check_lemma_5A,
                        compute_S_bruteforce, net_defect, oracle_crosscheck, section_image)
from hypnet.words import parse_group, parse_subgroup

from conftest import ball, group, languages, record
from oracles import (all_words, brute_L, brute_R, brute_R_prime, cyclic_powers, fpc23_oracle, free_oracle,
                     free_reduce, free_S)

FAMILIES = ["free:2", "zfree:2", "fpc:2,3", "surface:2"]


def oracle(spec, h):
    G = group(spec)
    return SubgroupOracle(G, parse_subgroup(h, G))


def c1_for(spec, h):
    b = ball(spec, 6)
    d2 = estimate_delta(ball(spec, 4)).delta2
    K = estimate_quasiconvexity(b, subgroup_ball(b, oracle(spec, h).h)).K
    return 2 * d2 + 2 * K + 8


def test_criterion_1_oracle_equivalence():
    t0 = time.perf_counter()
    F = parse_group("free:2")
    h = parse_subgroup("a", F)
    langs = ConeLanguages(compute_cone_types(build_ball(F, 8), 2), 2)
    S = langs.S_language(langs.subgroup_geodesics(h, 0), 8).automaton
    o = SubgroupOracle(F, h)
    cc = oracle_crosscheck(S, compute_S_bruteforce(build_ball(F, 6), o), F, 6)
    # independent: reduced words that no power of a shortens
    hs = cyclic_powers("a", 12)
    indep = {g for g in all_words("aAbB", 6) if free_reduce(g) == g and free_S(g, hs, 6)}
    words = set(am.enumerate_language(S, 6))
    elapsed = time.perf_counter() - t0
    ok = cc.agree and words == indep and elapsed < 300
    record(1, ok, f"|S<=6|={len(words)} discrepancies={len(words ^ indep)} runtime={elapsed:.1f}s")
    assert ok


def test_criterion_2_net_certification():
    defects_a = [net_defect(ball("free:2", R), section_image(ball("free:2", R), oracle("free:2", "a")), 1)
                 for R in range(2, 9)]
    defects_ab = [net_defect(ball("free:2", R), section_image(ball("free:2", R), oracle("free:2", "ab")), 1)
                  for R in range(2, 9)]
    ok = defects_a == [1] * 7 and len(set(defects_ab[-3:])) == 1
    record(2, ok, f"<a>: {defects_a}  <ab>: {defects_ab}")
    assert ok


def test_criterion_3_coset_slack():
    b = ball("free:2", 6)
    details, ok = [], True
    for h in ("a", "ab"):
        C1 = c1_for("free:2", h)
        o = oracle("free:2", h)
        rep = check_lemma_5A(o, build_coset_table(b, o), C1)
        ok &= rep.violation is None and rep.max_slack <= C1 and rep.S_diameter <= C1
        if h == "a":
            ok &= C1 == 8 and rep.S_diameter == 0
        details.append(f"<{h}> C1={C1} slack={rep.max_slack} diam={rep.S_diameter} pairs={rep.pairs}")
    record(3, ok, "; ".join(details))
    assert ok


def _identity(G, x, y, z):
    xy = G.multiply(x, y)
    return inner(G, x, y) + inner(G, xy, z) - inner(G, y, z) == inner(G, x, G.multiply(y, z))


def test_criterion_4_induction_identity():
    rng = random.Random(0)
    counts, ok = {}, True
    for spec in FAMILIES:
        G = group(spec)
        pts = ball(spec, 2).elements if spec == "surface:2" else ball(spec, 4).elements
        n = 0
        for _ in range(1000):
            x, y, z = (rng.choice(pts) for _ in range(3))
            ok &= _identity(G, x, y, z)
            n += 1
        small = ball(spec, 2).elements
        for x in small:
            for y in small:
                for z in small:
                    ok &= _identity(G, x, y, z)
                    n += 1
        counts[spec] = n
    # lengths themselves against an independent oracle
    og = fpc23_oracle()
    G = group("fpc:2,3")
    for x in ball("fpc:2,3", 3).elements:
        for y in ball("fpc:2,3", 3).elements:
            ok &= inner(G, x, y) == og.inner(x, y)
    record(4, ok, " ".join(f"{s}:{n}" for s, n in counts.items()))
    assert ok


def test_criterion_5_cone_types():
    classes = [compute_cone_types(ball("free:2", 6), k).num_classes for k in (1, 2, 3)]
    lam = geodesic_acceptor(compute_cone_types(ball("free:2", 6), 2))
    # both languages are prefix closed, so equal enumerations mean equal verdicts on every word
    brute = set(free_oracle().geodesic_words(10))
    same = set(am.enumerate_language(lam, 10)) == brute
    spheres = am.count_by_length(lam, 10)
    ok = classes == [5, 5, 5] and same and spheres == [1] + [4 * 3 ** (n - 1) for n in range(1, 11)]
    record(5, ok, f"classes={classes} geodesics<=10={len(brute)} agree={same}")
    assert ok


def test_criterion_6_inner_product_languages():
    ok = True
    for spec, og, cs in (("free:2", free_oracle(), "aAbB"), ("fpc:2,3", fpc23_oracle(), "abB")):
        L = languages(spec)
        geo = og.geodesic_words(5)
        for c in cs:
            P = L.P(c)
            for w in geo:
                ok &= sum(P[i].accepts(w) for i in range(3)) == 1
                ok &= P[og.inner(w, c)].accepts(w)
            if spec == "free:2":
                ok &= am.is_empty(P[1])
            ok &= set(am.enumerate_language(L.R_c(c), 5)) == brute_R(og, 5, only=c)
            ok &= set(am.enumerate_language(L.R_prime(c), 5)) == brute_R_prime(og, 5, c)
        ok &= set(am.enumerate_language(L.R(), 5)) == brute_R(og, 5)
        for n in range(4):
            ok &= set(am.enumerate_language(L.L(n), 5)) == brute_L(og, 5, n)
    b_in_L1 = languages("fpc:2,3").L(1).accepts("b", "b")
    ok &= b_in_L1
    record(6, ok, f"partition, R, R'_c and L_n exact to length 5; (b,b) in L1: {b_in_L1}")
    assert ok


def test_criterion_7_completion_distance():
    cases = [("free:2", "a"), ("free:2", "ab"), ("free:2", "1"), ("free:2", "all"), ("fpc:2,3", "b")]
    ok, details = True, []
    for spec, h in cases:
        L = languages(spec)
        o = oracle(spec, h)
        K = 0 if o.h.trivial or o.h.whole else estimate_quasiconvexity(
            ball(spec, 6), subgroup_ball(ball(spec, 6), o.h)).K
        S = am.minimize(L.S_language(L.subgroup_geodesics(o.h, K), c1_for(spec, h)).automaton)
        d = am.completion_distance(S)
        ok &= d <= S.n
        if (spec, h) == ("free:2", "a"):
            ok &= d == 1
        details.append(f"{spec}/<{h}>:{d}<={S.n}")
    record(7, ok, " ".join(details))
    assert ok


def test_criterion_8_zfree_negative_demo():
    defects = [net_defect(ball("zfree:2", R), section_image(ball("zfree:2", R), oracle("zfree:2", "x")), 1)
               for R in range(2, 9)]
    diffs = [b - a for a, b in zip(defects, defects[1:])]
    ok = diffs == [1] * 6
    record(8, ok, f"defects R=2..8: {defects}")
    assert ok


def test_criterion_9_action_bound():
    ok, details = True, []
    for spec, h in (("free:2", "a"), ("free:2", "ab"), ("fpc:2,3", "b")):
        o = oracle(spec, h)
        C1 = c1_for(spec, h)
        reps = build_coset_table(ball(spec, 6), o).keys
        worst = 0
        for g in ball(spec, 2).elements:
            disp = action_displacement(o, reps, g)
            ok &= disp <= C1 + 2 * len(g)
            worst = max(worst, disp)
        details.append(f"{spec}/<{h}> max={worst} C1={C1}")
    record(9, ok, "; ".join(details))
    assert ok


def test_criterion_10_determinism(tmp_path):
    dirs = []
    for workers in (1, 2):
        cfg = RunConfig(group="free:2", subgroup="ab", radius=6, workers=workers,
                        outdir=str(tmp_path / f"w{workers}"))
        cmd_analyze(cfg, out=io.StringIO())
        dirs.append(artifact_dir(cfg))
    files = sorted(str(p.relative_to(dirs[0])) for p in dirs[0].rglob("*") if p.is_file())
    others = sorted(str(p.relative_to(dirs[1])) for p in dirs[1].rglob("*") if p.is_file())
    same = files == others and all(
        filecmp.cmp(Path(dirs[0], f), Path(dirs[1], f), shallow=False) for f in files)
    record(10, same, f"{len(files)} files byte-identical across worker counts: {same}")
    assert same
