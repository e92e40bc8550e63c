"""Exponential frequency sets for rational box unions, with exact spectral
certification.

Given a finite union of axis-parallel rational boxes inside the unit cube,
the package constructs an explicit periodic subset of Z^d whose exponentials
form a Riesz basis of the restriction space, handles whole families so that
region inclusion is reflected by frequency-set inclusion, and certifies the
two-sided norm bounds exactly through finite character-table submatrices.
"""

from .errors import (CoherenceCapExceeded, DimensionMismatch,
                     EnumerationBoundExceeded, FoldCapExceeded,
                     GridAlignmentError, IncompatibleRefinement,
                     NestingViolation, RieszboxError, SpecFormatError)
from .freqset import PeriodicSet
from .geometry import (IntervalUnion, Region, StepRegion, common_denominator,
                       fold_1d_region, step_decompose)
from .construct import (CoherentFamily, base_interval_basis, choose_fold_modulus,
                        coherent_bases_1d, coherent_bases_d, combine_product,
                        fold_assemble, riesz_basis_1d, riesz_basis_d,
                        sandwich_basis_1d)
from .verify import (DualReport, GramSweep, SelectionSearch, SpectralReport,
                     UniversalRowSearch, brute_force_selection_search,
                     density_check, dft_submatrix, dual_complement_check,
                     exact_riesz_bounds, gram_matrix, gram_truncation_sweep,
                     occupied_cells, universal_row_selection_check)

__version__ = "0.1.0"

__all__ = [
    "CoherenceCapExceeded", "CoherentFamily", "DimensionMismatch", "DualReport",
    "EnumerationBoundExceeded", "FoldCapExceeded", "GramSweep",
    "GridAlignmentError", "IncompatibleRefinement", "IntervalUnion",
    "NestingViolation", "PeriodicSet", "Region", "RieszboxError",
    "SelectionSearch", "SpecFormatError", "SpectralReport", "StepRegion",
    "UniversalRowSearch", "base_interval_basis", "brute_force_selection_search",
    "choose_fold_modulus", "coherent_bases_1d", "coherent_bases_d",
    "combine_product", "common_denominator", "density_check", "dft_submatrix",
    "dual_complement_check", "exact_riesz_bounds", "fold_1d_region",
    "fold_assemble", "gram_matrix", "gram_truncation_sweep", "occupied_cells",
    "riesz_basis_1d", "riesz_basis_d", "sandwich_basis_1d", "step_decompose",
]
