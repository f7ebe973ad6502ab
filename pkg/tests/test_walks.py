import pytest

from gentlecones.scalars import CycloScalar
from gentlecones.walks import (HomotopyBand, IllegalJunction, NotABand, UnknownArrow, WordError,
                               band_primitive_root, canonical_band, find_overlaps, is_infinite_overlap,
                               parse_word, parse_word_spec, primitive_root, same_band_word)


def test_parse_band_and_degrees(kron):
    b = parse_word("d ~c ~a b @ -1", kron)
    assert isinstance(b, HomotopyBand) and len(b) == 4
    assert b.scalar == CycloScalar.of(-1)
    prof = b.degree_profile()
    assert prof == [0, 1, 0, -1, 0]
    assert not b.letters[b.scalar_slot].inverse


def test_same_direction_tokens_merge(five):
    s = parse_word("~b ~d", five, band=False)
    assert [str(x) for x in s.letters] == ["~d*b"]


def test_zero_composite_stays_two_letters(kron):
    s = parse_word("a c", kron, band=False)  # ac = 0
    assert len(s) == 2


def test_parse_errors(kron):
    with pytest.raises(UnknownArrow):
        parse_word("x ~c", kron, band=False)
    with pytest.raises(IllegalJunction):
        parse_word("a*c", kron, band=False)
    with pytest.raises(NotABand):
        parse_word("d ~c ~a @ 1", kron)
    with pytest.raises(NotABand):
        parse_word("d ~c ~a b @ 0", kron)
    with pytest.raises(WordError):
        parse_word("", kron, band=False)


def test_word_spec_options(kron):
    b = parse_word_spec("band: d ~c ~a b @ 2 ; deg=1 ; dim=2", kron)
    assert b.degree_anchor == 1 and b.dim == 2 and b.scalar == CycloScalar.of(2)
    assert parse_word_spec(b.spec(), kron) == b
    e = parse_word_spec("string: e3", kron)
    assert len(e) == 0
    assert e.vertex == "3"
    with pytest.raises(WordError):
        parse_word_spec("ribbon: a", kron)
    with pytest.raises(WordError):
        parse_word_spec("band: d ~c ~a b ; colour=3", kron)


def test_rotation_and_inverse_keep_band(kron):
    b = parse_word("d ~c ~a b @ 3", kron)
    for k in range(len(b)):
        r = b.rotate(k)
        assert same_band_word(r, b)
        assert canonical_band(r) == canonical_band(b)
    inv = b.inverse()
    assert inv.scalar == CycloScalar.of(3).inverse()
    assert canonical_band(inv) == canonical_band(b)


def test_primitive_root(kron):
    b = parse_word_spec("band: " + "d ~c " * 3 + "@ 1", kron)
    theta, k = band_primitive_root(b)
    assert k == 3 and theta.word() == "d ~c"
    letters, k = primitive_root(parse_word("d ~c ~a b", kron, band=True).letters)
    assert k == 1 and len(letters) == 4


def test_golden_overlaps(kron):
    tau = parse_word_spec("band: d ~c d ~c ~a b @ 1", kron)
    sigma = parse_word_spec("band: d ~c ~a b d ~c d ~c ~a b @ 1", kron)
    graph = find_overlaps(tau, sigma, "graph")
    assert any(ov.length == 12 for ov in graph)
    assert is_infinite_overlap(sigma, sigma)
    assert not is_infinite_overlap(sigma, tau)
    selfmaps = find_overlaps(sigma, sigma, "graph")
    assert sum(ov.infinite for ov in selfmaps) >= 1


def test_string_overlap_has_residues(kron):
    s = parse_word("d ~c ~a b", kron, band=False)
    t = parse_word("~a b d ~c", kron, band=False)
    ovs = find_overlaps(s, t, "graph")
    assert ovs
    assert max(ov.length for ov in ovs) >= 2
    assert all(not ov.infinite for ov in ovs)
