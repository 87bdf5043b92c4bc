"""Spectral Barron spaces on truncated frequency lattices.

Functions are stored through samples of their Fourier transform on a
uniform lattice; norms, products, multipliers, solvers, K-functionals and
the planar Radon transform all act on these samples.
"""
from .catalog import (BoxSpectrum, DeltaKernel, Gaussian, Lorentzian1D, SingleMode, oracle_norm,
                      parse_catalog_id, sample)
from .checks import Check
from .errors import (BarronError, CertificateError, ConvergenceError, GridError, NotAContractionError,
                     PreconditionError, SingularSystemError)
from .grid import FreqGrid, make_grid
from .multipliers import (MultiplierSymbol, QuadratureSpec, apply_multiplier, bessel, derivative,
                          fractional_inverse, heat, resolvent, resolvent_via_semigroup)
from .operators import OperatorMatrix, assemble_T, eigenfunction_regularity_check, eigs, opnorm_weighted
from .solvers import (AnisotropicProblem, ContractionReport, derivative_identity_check, solve_anisotropic,
                      solve_contraction, solve_direct, solve_nonlocal, verify_higher_regularity)
from .spectral import (DualElement, SpectralFunction, barron_norm, convolve, dual_norm, eval_spatial,
                       interpolation_check, lp_variant_norm, multiply, pairing, project, tail_split)
from .interpolation import (KFunctionalCurve, holder_certificate, k_bound_check, k_functional_exact,
                            tail_bound_check)
from .radon import central_slice_check, radon_direct, radon_isometry

__version__ = "0.1.0"
