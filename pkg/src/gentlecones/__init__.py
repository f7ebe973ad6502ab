"""Mapping cones of morphisms between string and band complexes over gentle algebras."""
from .algebra import (AlgebraError, GentleAlgebra, Path, algebra_from_dict, five_vertex_example,
                      kronecker_pair, load_algebra, validate_gentle)
from .complexes import ProjComplex, build_complex, emit_complex, emit_unfolded
from .cones import (BandSummand, CaseNotApplicable, ConeDecomposition, StringSummand, compute_cone,
                    cone_double_band_band, cone_graph_band_to_band, cone_graph_band_to_string,
                    cone_graph_string_to_band, cone_quasi, cone_single_band_band, split_band_power)
from .morphisms import (DoubleMapDescriptor, GraphMapDescriptor, QuasiGraphMapDescriptor,
                        SingleMapDescriptor, enumerate_morphisms, realize)
from .oracle import (GradedMap, VerifyReport, iso_probe, mapping_cone, reduce_min, verify_cone,
                     verify_map_cone)
from .scalars import CycloScalar, FieldCtx, SymbolicRoot, kth_root, parse_scalar
from .walks import (HomotopyBand, HomotopyString, WordError, canonical_band, find_overlaps,
                    parse_word, parse_word_spec, primitive_root)

__version__ = "0.1.0"
