import random

from gentlecones.complexes import (build_complex, direct_sum, emit_complex, emit_unfolded, graded_dims,
                                   shift)
from gentlecones.generators import random_band_algebra, random_scalar, random_string
from gentlecones.walks import parse_word_spec


def test_band_complex_shape(kron, Fp):
    b = parse_word_spec("band: d ~c ~a b @ -1", kron)
    C = build_complex(b, Fp)
    C.check()
    dims = graded_dims(C)
    assert dims == {-1: {"2": 1}, 0: {"1": 2}, 1: {"3": 1}}
    text = emit_complex(C)
    assert "-1*d" in text  # the scalar sits on the direct letter d


def test_random_complexes_square_to_zero(Fp):
    rng = random.Random(3)
    for _ in range(20):
        A, bands = random_band_algebra(rng)
        b = rng.choice(bands).with_scalar(random_scalar(rng))
        build_complex(b, Fp).check()
        build_complex(b.power(2), Fp).check()
        s = random_string(A, rng)
        build_complex(s, Fp).check()


def test_higher_dimensional_band(kron, Fp):
    b = parse_word_spec("band: d ~c ~a b @ 2 ; dim=2", kron)
    C = build_complex(b, Fp)
    C.check()
    assert C.rank == 2 * len(b)


def test_shift_and_sum(kron, Fp):
    b = parse_word_spec("band: d ~c ~a b @ 2", kron)
    C = build_complex(b, Fp)
    S = shift(C, 1)
    S.check()
    assert sorted(graded_dims(S)) == [n - 1 for n in sorted(graded_dims(C))]
    D = direct_sum(C, S)
    D.check()
    assert D.rank == 2 * C.rank


def test_trivial_string(kron, Fp):
    e = parse_word_spec("string: e2 ; deg=3", kron)
    C = build_complex(e, Fp)
    assert graded_dims(C) == {3: {"2": 1}}


def test_unfolded_diagram(kron):
    b = parse_word_spec("band: d ~c ~a b @ -1", kron)
    text = emit_unfolded(b)
    assert text.startswith("P1[0]") and "cyclic" in text
    tikz = emit_unfolded(b, tikz=True)
    assert tikz.startswith(r"\begin{tikzpicture}") and tikz.count(r"\draw") == 4
