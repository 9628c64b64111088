"""Walk zeta functions on tori, Ronkin functions, amoebas and tropical duality."""

from .amoeba import AmoebaRaster, amoeba_complement_components, amoeba_slice
from .closed_forms import qw_c2l, qw_log_zeta_closed, qw_u_lower_bound, rw_log_series, rw_log_zeta_closed
from .errors import (
    AccuracyError,
    CapExceededError,
    ConfigError,
    DegeneracyError,
    DimensionError,
    DomainError,
    InvalidSetError,
    PoleError,
    RonkinZetaError,
    UnsupportedDimensionError,
)
from .laurent import Coefficient, LaurentPolynomial
from .polytope import LatticePolytope, cone_CS, direction_polytope, face_FS, newton_polytope, perpendicularity_check
from .quadrature import QuadratureSpec
from .ronkin import correspondence_check, p_qw, p_rw, p_simplified, qw_ronkin_closed, ronkin_eval, ronkin_gradient
from .simulator import delta_state, evolve, matrix_weight, measure, return_trace, run, total_measure
from .tropical import PolyhedralComplex, TropicalPolynomial, direction_graph, duality_check, trop_hypersurface, tropicalize
from .walk import CoinMatrix, TorusSpec, char_det, momentum_eigenvalues, qw_coin, rw_coin, to_flip_flop, to_moving
from .zeta import c_r_finite, c_r_limit, c_r_sequence, finite_zeta, log_zeta, series_log_zeta

__version__ = "0.1.0"
