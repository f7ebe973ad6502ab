import random
from dataclasses import replace

from gentlecones.complexes import build_complex
from gentlecones.generators import random_band_algebra, random_scalar, random_string
from gentlecones.morphisms import (GraphMapDescriptor, enumerate_morphisms, hom_dimension_mod_homotopy,
                                   realize, span_rank)
from gentlecones.oracle import is_chain_map, is_null_homotopic
from gentlecones.walks import find_overlaps, parse_word_spec


def test_golden_graph_map_realizes(kron, Fp):
    tau = parse_word_spec("band: d ~c d ~c ~a b @ 1", kron)
    sigma = parse_word_spec("band: d ~c ~a b d ~c d ~c ~a b @ 1", kron)
    ov = next(ov for ov in find_overlaps(tau, sigma, "graph") if ov.length == 12)
    r = realize(GraphMapDescriptor(ov), Fp)
    assert is_chain_map(r.map) and not is_null_homotopic(r.map)


def test_descriptor_json(kron, Fp):
    tau = parse_word_spec("band: d ~c d ~c ~a b @ 1", kron)
    sigma = parse_word_spec("band: d ~c ~a b d ~c d ~c ~a b @ 1", kron)
    for r in enumerate_morphisms(tau, sigma, Fp):
        js = r.descriptor.to_json()
        assert js["kind"] in {"graph", "quasi", "single", "double"}


def test_enumeration_is_a_basis(Fp):
    """The enumerated maps form a basis of Hom in the homotopy category."""
    rng = random.Random(4)
    checked = 0
    for _ in range(8):
        A, bands = random_band_algebra(rng)
        for _ in range(3):
            S = rng.choice(bands).with_scalar(random_scalar(rng))
            if rng.random() < 0.3:
                S = random_string(A, rng)
            T = replace(rng.choice(bands).with_scalar(random_scalar(rng)), degree_anchor=rng.randint(-1, 1))
            CX, CY = build_complex(S, Fp), build_complex(T, Fp)
            found = enumerate_morphisms(S, T, Fp)
            h = hom_dimension_mod_homotopy(CX, CY)
            assert len(found) == h
            if found:
                assert span_rank([r.map for r in found], found[0].source, found[0].target) == h
            for r in found:
                assert is_chain_map(r.map)
                if r.descriptor.kind != "graph":
                    assert not is_null_homotopic(r.map)
            checked += 1
    assert checked == 24


def test_kind_filter(kron, Fp):
    sigma = parse_word_spec("band: d ~c ~a b d ~c d ~c ~a b @ 1", kron)
    tau = parse_word_spec("band: d ~c d ~c ~a b @ 1 ; deg=-1", kron)
    quasi = enumerate_morphisms(sigma, tau, Fp, ("quasi",))
    assert quasi and all(r.descriptor.kind == "quasi" for r in quasi)
