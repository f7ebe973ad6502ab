import random

import pytest

from gentlecones.complexes import build_complex, direct_sum, shift
from gentlecones.generators import plant_unit_block, random_band_algebra, random_scalar
from gentlecones.oracle import (GradedMap, NotAChainMap, ReductionStats, chain_map_space,
                                euler_characteristic, is_chain_map, is_null_homotopic, iso_probe,
                                mapping_cone, reduce_min, verify_complexes)
from gentlecones.walks import parse_word_spec


def identity(C):
    g = GradedMap(C, C)
    F = C.field
    for n in C.degrees:
        for i, v in enumerate(C.slots[n]):
            g.comps.setdefault(n, {})[(i, i)] = {C.algebra.trivial(v): F.one}
    return g


def test_identity_is_chain_map_and_cone_contracts(kron, Fp):
    C = build_complex(parse_word_spec("band: d ~c ~a b @ 3", kron), Fp)
    g = identity(C)
    assert is_chain_map(g) and not is_null_homotopic(g)
    stats = ReductionStats()
    R = reduce_min(mapping_cone(g), stats)
    assert R.rank == 0 and stats.eliminated_pairs == C.rank


def test_non_chain_map_rejected(kron, Fp):
    C = build_complex(parse_word_spec("band: d ~c ~a b @ 3", kron), Fp)
    g = GradedMap(C, C)
    g.comps[0] = {(0, 0): {kron.trivial("1"): Fp.one}}
    assert not is_chain_map(g)
    with pytest.raises(NotAChainMap):
        mapping_cone(g)


def test_iso_probe_separates_scalars(kron, Fp):
    b = parse_word_spec("band: d ~c ~a b @ 3", kron)
    X = build_complex(b, Fp)
    assert iso_probe(X, build_complex(b.rotate(2), Fp)).iso
    assert iso_probe(X, build_complex(b.inverse(), Fp)).iso
    assert not iso_probe(X, build_complex(b.with_scalar(b.scalar * b.scalar), Fp)).iso


def test_iso_probe_is_deterministic(kron, Fp):
    b = parse_word_spec("band: d ~c ~a b @ 3", kron)
    X, Y = build_complex(b, Fp), build_complex(b.rotate(1), Fp)
    assert iso_probe(X, Y, seed=5).trials_used == iso_probe(X, Y, seed=5).trials_used


def test_chain_maps_between_bands(kron, Fp):
    b = parse_word_spec("band: d ~c ~a b @ 3", kron)
    X = build_complex(b, Fp)
    basis, _ = chain_map_space(X, X)
    assert len(basis) >= 1


def test_reduce_min_on_planted_blocks():
    rng = random.Random(1)
    from gentlecones.scalars import FieldCtx
    F = FieldCtx.default_prime(12).field
    for _ in range(20):
        A, bands = random_band_algebra(rng)
        M = build_complex(rng.choice(bands).with_scalar(random_scalar(rng)), F)
        C, _ = plant_unit_block(M, rng)
        R = reduce_min(C)
        assert R.rank == M.rank
        assert euler_characteristic(R) == euler_characteristic(M)
        assert verify_complexes(C, M).iso


def test_verify_reports_mismatch(kron, Fp):
    b = parse_word_spec("band: d ~c ~a b @ 3", kron)
    X = build_complex(b, Fp)
    rep = verify_complexes(X, direct_sum(X, shift(X, 1)))
    assert not rep.graded_dims_match and not rep.iso
    assert set(rep.to_json()) == {"graded_dims_match", "iso", "trials_used", "field", "eliminated_pairs"}
