"""Exact hyperbolic polynomials of 4-valent ribbon graphs.

The library computes the first polynomial HU of a rooted ribbon graph and
the real part of the second polynomial HV as exact symbolic objects, plus
the topological machinery (faces, genus, rosettes, admissible sets) and an
independent exact-rational oracle that every symbolic result is checked
against.
"""

from .poly import Poly, PolyParseError, parse_poly
from .ribbon import (AdmissibleSet, FatGraph, GraphValidationError,
                     InternalConsistencyError, RibbonGraph, Rosette,
                     RootedTree, TopologyReport, admissible_sets,
                     build_rosette, dual_graph, load_graph, nice_crossings,
                     random_orientable_graph, save_graph, spanning_trees,
                     trace_faces)
from .qmatrix import (DiagA, Incidence, PMatrix, SkewPolyMatrix, build_A,
                      build_B, build_incidence, build_P, fourth_filk,
                      reduced_bprime)
from .pfaffian import MinorSpec, PfaffianCache, det, minor, perm_sign, pfaffian
from .hupoly import (HUResult, LeadingTerm, boundary_pfaffian, hu,
                     leading_terms, positivity_check, theorem_bound)
from .hvpoly import (QuadForm, TwoAdmissibleSet, hv_leading_bound, hv_real,
                     two_admissible_sets)
from .oracle import (OracleSingularError, QGauss, bareiss_det, det_AB_at,
                     detq_check, hu_check_at, pqinvpt_at, sample_point)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
