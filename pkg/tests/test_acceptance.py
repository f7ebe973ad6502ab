"""Acceptance criteria; each test prints one PASS/FAIL line."""
from __future__ import annotations

import random
import time
from collections import Counter
from dataclasses import replace

import pytest

from gentlecones import (CycloScalar, FieldCtx, build_complex, compute_cone, enumerate_morphisms,
                         five_vertex_example, kronecker_pair, parse_word_spec, split_band_power)
from gentlecones.cones import BandSummand, ConeDecomposition, cone_quasi
from gentlecones.complexes import after, elt_add, elt_scale
from gentlecones.generators import (enumerate_bands, plant_unit_block, random_band_algebra,
                                    random_scalar)
from gentlecones.morphisms import GraphMapDescriptor, QuasiGraphMapDescriptor, realize
from gentlecones.oracle import (_find_unit, eliminate, euler_characteristic, iso_probe, reduce_min,
                                verify_complexes, verify_cone)
from gentlecones.walks import canonical_band, find_overlaps


@pytest.fixture
def report(capsys):
    def emit(n: int, name: str, ok: bool, detail: str = ""):
        with capsys.disabled():
            print(f"\n[criterion {n}] {name}: {'PASS' if ok else 'FAIL'}" + (f" ({detail})" if detail else ""))
    return emit


def band_key(word: str, scalar: str, A, shift: int = 0, dim: int = 1):
    b = parse_word_spec(f"band: {word} @ {scalar}", A)
    c = canonical_band(b)
    return ("band", c.word(), str(c.scalar), dim, shift)


def graph_maps(S, T, F, length):
    out = []
    for ov in find_overlaps(S, T, "graph"):
        if ov.length == length:
            out.append(GraphMapDescriptor(ov))
    return out


def test_golden_indecomposable_band_cone(report):
    t0 = time.perf_counter()
    A = kronecker_pair()
    tau = parse_word_spec("band: d ~c d ~c ~a b @ 1", A)
    sigma = parse_word_spec("band: d ~c ~a b d ~c d ~c ~a b @ 1", A)
    F = FieldCtx.default_prime(2).field
    found = enumerate_morphisms(tau, sigma, F, ("graph",))
    assert len(found) == 1
    desc = found[0].descriptor
    D = compute_cone(desc)
    rep = verify_cone(desc, D)
    dt = time.perf_counter() - t0
    ok = D.key() == Counter([band_key("d ~c ~a b", "-1", A)]) and rep.iso and dt < 1.0
    report(1, "golden indecomposable band cone", ok, f"{D.display(tau, sigma)}, iso={rep.iso}, {dt:.2f}s")
    assert ok


def test_golden_three_summands(report):
    t0 = time.perf_counter()
    A = kronecker_pair()
    sigma = parse_word_spec("band: " + "d ~c " * 7 + "~a b @ -1", A)
    tau = parse_word_spec("band: " + "d ~c " * 4 + "~a b @ 1", A)
    F = FieldCtx.default_prime(6).field
    hits = []
    for desc in graph_maps(sigma, tau, F, 18):
        D = compute_cone(desc)
        hits.append((desc, D))
    assert len(hits) == 1
    desc, D = hits[0]
    want = Counter(band_key("d ~c", s, A, shift=1) for s in ("1", "z(3)^1", "z(3)^2"))
    ctx = D.field_context(sigma, tau)
    rep = verify_cone(desc, D, ctx)
    dt = time.perf_counter() - t0
    ok = D.key() == want and rep.iso and (ctx.p - 1) % 3 == 0 and dt < 5.0
    report(2, "golden three summands", ok, f"{D}, field F_{ctx.p}, iso={rep.iso}, {dt:.2f}s")
    assert ok


def test_golden_single_map(report):
    t0 = time.perf_counter()
    A = five_vertex_example()
    sigma = parse_word_spec("band: ~a b*c ~a b ~e d*b*c @ 36", A)
    tau = parse_word_spec("band: e ~b ~d @ 4 ; deg=-2", A)
    F = FieldCtx.default_prime(4).field
    found = [r for r in enumerate_morphisms(sigma, tau, F, ("single",))
             if len(compute_cone(r.descriptor).summands) == 2]
    assert len(found) == 1
    desc = found[0].descriptor
    D = compute_cone(desc)
    want = Counter(band_key("~a b ~e d*b*c", s, A, shift=1) for s in ("3*z(4)^1", "3*z(4)^3"))
    ctx = D.field_context(sigma, tau)
    rep = verify_cone(desc, D, ctx)
    dt = time.perf_counter() - t0
    ok = D.key() == want and rep.iso and (ctx.p - 1) % 4 == 0 and dt < 5.0
    report(3, "golden single map", ok, f"{D.display(sigma)}, field F_{ctx.p}, iso={rep.iso}, {dt:.2f}s")
    assert ok


def test_golden_quasi_graph(report):
    t0 = time.perf_counter()
    A = kronecker_pair()
    sigma = parse_word_spec("band: d ~c ~a b d ~c d ~c ~a b @ 1", A)
    tau = parse_word_spec("band: d ~c d ~c ~a b @ 1 ; deg=-1", A)
    ovs = [ov for ov in find_overlaps(sigma, tau, "quasi") if ov.length == 12]
    assert ovs
    theta = "d ~c ~a b " + "d ~c d ~c ~a b " * 2
    want = Counter([band_key(theta.strip(), "-1", A, shift=1)])
    ok, details = True, []
    for ov in ovs:
        desc = QuasiGraphMapDescriptor(ov)
        D = cone_quasi(desc)
        rep = verify_cone(desc, D)
        ok &= D.key() == want and rep.iso
        details.append(f"{D.display(sigma, tau)} iso={rep.iso}")
    dt = time.perf_counter() - t0
    ok &= dt < 5.0
    report(4, "golden quasi-graph k=1", ok, f"{'; '.join(details)}, {dt:.2f}s")
    assert ok


def test_power_splitting(report):
    t0 = time.perf_counter()
    rng = random.Random(2024)
    thetas = []
    while len(thetas) < 50:
        A, bands = random_band_algebra(rng)
        thetas.extend(rng.sample(bands, min(len(bands), 3)))
    thetas = thetas[:50]
    total = passed = 0
    for theta in thetas:
        theta = replace(theta, degree_anchor=rng.randint(-2, 2))
        for n in (1, 2, 3):
            for lam in (1, -1, 4, 9):
                b = theta.power(n).with_scalar(CycloScalar.of(lam))
                D = split_band_power(b, b.scalar)
                ctx = D.field_context(b)
                rep = verify_complexes(build_complex(b, ctx.field), D.build(ctx.field), 16)
                total += 1
                passed += rep.iso and len(D.summands) == n
    dt = time.perf_counter() - t0
    ok = passed == total == 600 and dt < 60
    report(5, "power splitting", ok, f"{passed}/{total} iso, {dt:.1f}s")
    assert ok


def test_planted_unit_blocks(report):
    rng = random.Random(7)
    F = FieldCtx.default_prime(12).field
    passed = nontrivial = 0
    for _ in range(100):
        A, bands = random_band_algebra(rng)
        M = build_complex(rng.choice(bands).with_scalar(random_scalar(rng)), F)
        C = M
        for _ in range(rng.randint(1, 3)):
            before = C
            C, pb = plant_unit_block(C, rng)
        n, i, j = pb.degree, pb.row, pb.col
        d, uinv, minus = C.d(n), F.inv(pb.unit), F.neg(F.one)
        b2s = {r: x for (r, c), x in d.items() if c == j and r != i}
        b3s = {c: x for (r, c), x in d.items() if r == i and c != j}
        nontrivial += bool(b2s and b3s)
        E = eliminate(C, n, i, j)
        closed_form = True
        for r in range(C.size(n + 1)):
            for c in range(C.size(n)):
                if r == i or c == j:
                    continue
                b1 = d.get((r, c), {})
                want = elt_add(F, b1, elt_scale(F, after(F, A, b2s.get(r, {}), b3s.get(c, {})), uinv), minus)
                closed_form &= E.d(n).get((r, c), {}) == want == before.d(n).get((r, c), {})
        R = reduce_min(C)
        ok = (closed_form and _find_unit(R) is None
              and euler_characteristic(R) == euler_characteristic(C) == euler_characteristic(M)
              and iso_probe(R, reduce_min(M)).iso)
        passed += ok
    good = passed == 100 and nontrivial >= 20
    report(6, "planted unit blocks", good, f"{passed}/100, {nontrivial} with b2, b3 both nonzero")
    assert good


def test_master_cone_check(report):
    t0 = time.perf_counter()
    rng = random.Random(11)
    kinds, total, passed, fails = Counter(), 0, 0, []
    for _ in range(5):
        A, bands = random_band_algebra(rng, max_vertices=6, max_length=8)
        assert len(A.vertices) <= 6
        pool = rng.sample(bands, min(len(bands), 8))
        F = FieldCtx.default_prime(12).field
        for S in pool:
            for T in pool:
                S2 = S.with_scalar(random_scalar(rng)).rotate(rng.randrange(len(S)))
                T2 = replace(T.with_scalar(random_scalar(rng)), degree_anchor=rng.randint(-1, 1))
                for r in enumerate_morphisms(S2, T2, F):
                    desc = r.descriptor
                    D = compute_cone(desc)
                    rep = verify_cone(desc, D, trials=16, seed=total)
                    total += 1
                    kinds[desc.kind] += 1
                    if rep.iso and not D.oracle_only:
                        passed += 1
                    else:
                        fails.append((S2.spec(), T2.spec(), desc.to_json()))
    dt = time.perf_counter() - t0
    ok = passed == total and total > 0 and dt < 600 and len(kinds) == 4
    report(7, "master cone check", ok, f"{passed}/{total} iso, kinds {dict(sorted(kinds.items()))}, {dt:.1f}s")
    assert ok, fails[:5]


def test_parity_sign_rule(report):
    A = kronecker_pair()
    sigma = parse_word_spec("band: a ~b a ~b a*d ~b*c @ 2", A)
    tau = parse_word_spec("band: c ~a*d b*c ~a*d b*c ~d @ 3", A)
    F = FieldCtx.default_prime(12).field
    by_length = {}
    for ov in find_overlaps(sigma, tau, "graph"):
        if ov.length in (1, 2):
            by_length.setdefault(ov.length, []).append(GraphMapDescriptor(ov))
    assert set(by_length) == {1, 2}
    scalars, isos = {}, []
    for length, descs in by_length.items():
        for desc in descs:
            realize(desc, F)
            D = compute_cone(desc)
            assert len(D.summands) == 1 and isinstance(D.summands[0], BandSummand)
            scalars.setdefault(length, set()).add(str(D.summands[0].scalar))
            isos.append(verify_cone(desc, D).iso)
    lam_mu = "6"
    ok = scalars == {2: {lam_mu}, 1: {"-" + lam_mu}} and all(isos)
    report(8, "parity sign rule", ok, f"even overlap -> {scalars.get(2)}, odd overlap -> {scalars.get(1)}, iso={all(isos)}")
    assert ok


def test_infinite_overlap(report):
    results = []
    for A, word, lam in [(kronecker_pair(), "d ~c ~a b", "-1"), (kronecker_pair(), "a ~b", "3"),
                         (five_vertex_example(), "~a b ~e d*b*c", "2")]:
        sigma = parse_word_spec(f"band: {word} @ {lam}", A)
        F = FieldCtx.default_prime(12).field
        graph = [r.descriptor for r in enumerate_morphisms(sigma, sigma, F, ("graph",))
                 if r.descriptor.overlap.infinite]
        lowered = replace(sigma, degree_anchor=-1)
        quasi = [QuasiGraphMapDescriptor(ov) for ov in find_overlaps(sigma, lowered, "quasi") if ov.infinite]
        assert graph and quasi
        for desc in graph:
            D = compute_cone(desc)
            results.append(not D.summands and verify_cone(desc, D).iso)
        for desc in quasi:
            D = compute_cone(desc)
            want = Counter([band_key(word, lam, A, shift=1, dim=2)])
            results.append(D.key() == want and verify_cone(desc, D).iso)
    ok = all(results)
    report(9, "infinite overlap", ok, f"{sum(results)}/{len(results)} cases")
    assert ok
