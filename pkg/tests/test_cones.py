import json
import random
from collections import Counter
from dataclasses import replace

import pytest

from gentlecones.cones import (BandSummand, CaseNotApplicable, ConeDecomposition, StringSummand,
                               compute_cone, cone_graph_band_to_band, cover_monodromy, display_band,
                               split_band_power)
from gentlecones.complexes import build_complex
from gentlecones.generators import random_band_algebra, random_string
from gentlecones.morphisms import GraphMapDescriptor, enumerate_morphisms
from gentlecones.oracle import verify_complexes, verify_cone
from gentlecones.scalars import CycloScalar, FieldCtx, SymbolicRoot, parse_scalar
from gentlecones.walks import Cover, canonical_band, find_overlaps, parse_word_spec


def test_split_rational_roots(kron):
    b = parse_word_spec("band: " + "d ~c " * 2 + "@ -4", kron)
    D = split_band_power(b, b.scalar)
    assert sorted(str(s.scalar) for s in D.summands) == ["2*z(4)^1", "2*z(4)^3"]
    assert all(s.word.word() == "d ~c" for s in D.summands)


def test_split_symbolic_roots(kron):
    b = parse_word_spec("band: " + "d ~c " * 3 + "@ 2", kron)
    D = split_band_power(b, b.scalar)
    assert all(isinstance(s.scalar, SymbolicRoot) for s in D.summands)
    ctx = D.field_context(b)
    assert verify_complexes(build_complex(b, ctx.field), D.build(ctx.field)).iso


def test_primitive_band_is_untouched(kron):
    b = parse_word_spec("band: d ~c ~a b @ 5 ; deg=2", kron)
    D = split_band_power(b, b.scalar)
    assert len(D.summands) == 1 and D.summands[0].shift == -2


def test_monodromy_of_reversed_cover(kron):
    b = parse_word_spec("band: d ~c ~a b @ 5", kron)
    assert cover_monodromy(Cover(b)) == CycloScalar.of(5)
    assert cover_monodromy(Cover(b, True)) == CycloScalar.of(5).inverse()


def test_band_scalars_override(kron):
    tau = parse_word_spec("band: d ~c d ~c ~a b @ 1", kron)
    sigma = parse_word_spec("band: d ~c ~a b d ~c d ~c ~a b @ 1", kron)
    ov = next(ov for ov in find_overlaps(tau, sigma, "graph") if ov.length == 12)
    D = cone_graph_band_to_band(GraphMapDescriptor(ov), CycloScalar.of(3), CycloScalar.of(2))
    assert len(D.summands) == 1
    assert verify_cone(GraphMapDescriptor(replace(ov, source=tau.with_scalar(CycloScalar.of(3)),
                                                  target=sigma.with_scalar(CycloScalar.of(2)))), D).iso


def test_higher_dimension_rejected(kron):
    tau = parse_word_spec("band: d ~c d ~c ~a b @ 1 ; dim=2", kron)
    sigma = parse_word_spec("band: d ~c ~a b d ~c d ~c ~a b @ 1", kron)
    ov = next(ov for ov in find_overlaps(tau, sigma, "graph") if ov.length == 12)
    with pytest.raises(CaseNotApplicable):
        cone_graph_band_to_band(GraphMapDescriptor(ov))


def test_string_string_is_oracle_only(kron, Fp):
    s = parse_word_spec("string: d ~c ~a b", kron)
    t = parse_word_spec("string: ~a b d ~c", kron)
    found = enumerate_morphisms(s, t, Fp)
    assert found
    for r in found:
        D = compute_cone(r.descriptor, Fp)
        assert D.oracle_only and "oracle-only" in str(D)
        assert verify_cone(r.descriptor, D).iso


def test_cases_with_strings_verified():
    """Graph and quasi-graph maps between a band and a string, against the explicit cone."""
    rng = random.Random(8)
    seen, failures = Counter(), []
    for _ in range(6):
        A, bands = random_band_algebra(rng)
        bands = [b for b in bands if len(b) <= 6][:8]
        for _ in range(4):
            B = rng.choice(bands).with_scalar(CycloScalar.of(rng.choice([2, -3, 5])))
            B = B.rotate(rng.randrange(len(B)))
            seed = list(B.letters) * rng.choice([0, 1, 2]) + list(B.letters[:rng.randrange(len(B))])
            try:
                S = random_string(A, rng, len(seed) + 3, seed, rng.randint(-2, 2))
            except ValueError:
                continue
            F = FieldCtx.default_prime(12).field
            for src, dst in ((B, S), (S, B)):
                for r in enumerate_morphisms(src, dst, F, ("graph", "quasi")):
                    D = compute_cone(r.descriptor)
                    seen[r.descriptor.kind] += 1
                    if not verify_cone(r.descriptor, D).iso:
                        failures.append((src.spec(), dst.spec(), r.descriptor.to_json()))
    assert not failures, failures[:3]
    assert seen["graph"] and seen["quasi"]


def test_decomposition_rendering(kron):
    b = parse_word_spec("band: ~b a c ~d @ -1", kron)
    D = ConeDecomposition([BandSummand.of(b),
                           StringSummand.of(parse_word_spec("string: a ; deg=1", kron))], "test")
    sigma = parse_word_spec("band: d ~c ~a b d ~c d ~c ~a b @ 1", kron)
    assert D.display(sigma).startswith("B(d ~c ~a b; -1)")
    assert "P(a)[-1]" in str(D)
    js = json.loads(json.dumps(D.to_json()))
    assert js[0]["type"] == "band" and js[1]["type"] == "string"
    assert D.key()[("band", canonical_band(b).word(), str(canonical_band(b).scalar), 1, 0)] == 1


def test_display_keeps_the_band(kron):
    b = parse_word_spec("band: ~b a c ~d @ 3", kron)
    d = display_band(b, [parse_word_spec("band: d ~c ~a b @ 1", kron)])
    assert canonical_band(d) == canonical_band(b)
    assert d.word() == "d ~c ~a b"


def test_zero_cone_builds(kron, Fp):
    D = ConeDecomposition([], "zero")
    assert D.build(Fp, kron).rank == 0
    assert str(D).startswith("0")


def test_scalar_parse_in_summand(kron):
    b = parse_word_spec("band: d ~c @ 3*z(4)^1", kron)
    assert BandSummand.of(b).scalar == parse_scalar("3*z(4)^1")
