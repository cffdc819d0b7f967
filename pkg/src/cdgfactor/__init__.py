"""Factor quasi-isomorphisms of commutative DG rings through split injections
and surjections, with machine-checked verification on finite degree windows."""

from .blocks import c_even, c_odd, c_tilde_even, contraction, relation, relation_identities
from .complexes import (WindowComplex, check_exact_sequences, check_homotopy, check_quasi_iso,
                        check_surjective, cohomology, cohomology_table, expand, hom_window)
from .dg import (CDGPresentation, DividedPowerFamily, RingHom, check_d_squared, check_hom_is_dg,
                 identity_hom, tensor, unit_ring)
from .factorization import FactorizationInput, FactorizationResult, factorize
from .graded import Polynomial, Var
from .lattice import smith_normal_form
from .pd import Char0Gamma, DividedPowerGamma, TableGamma, check_pd, pd_obstruction_witness
from .reports import Entry, Report

__version__ = "0.1.0"
