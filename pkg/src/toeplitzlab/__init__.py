"""toeplitzlab: exact finite-n Toeplitz/Hankel determinants for Fisher-Hartwig
symbols, checked against their closed-form identities and asymptotic laws."""

__version__ = "0.1.0"

from .constants import CONSTANTS, WIDOM_C0, MathConstants, math_constants
from .linalg import LogDet
from .symbols import (CircleSymbol, FHRepresentation, FHSingularity,
                      RepresentationSet, SmoothPart, builtin, fh_representations,
                      parse_symbol_text)
from .exactdet import (Weight, bo_rhs, caratheodory_psd, heine_oracle,
                       opuc_at_points, structured_det, toeplitz_det, verblunsky)
from .asympt import (AsymptoticPrediction, bs_exact, bt_predict,
                     hankel_th_predict, selberg_value, szego_fh_predict)
from .specialfn import bessel_k0, log_barnes_g, log_gamma

__all__ = [
    "CONSTANTS", "WIDOM_C0", "MathConstants", "math_constants", "LogDet",
    "CircleSymbol", "FHRepresentation", "FHSingularity", "RepresentationSet",
    "SmoothPart", "builtin", "fh_representations", "parse_symbol_text",
    "Weight", "bo_rhs", "caratheodory_psd", "heine_oracle", "opuc_at_points",
    "structured_det", "toeplitz_det", "verblunsky",
    "AsymptoticPrediction", "bs_exact", "bt_predict", "hankel_th_predict",
    "selberg_value", "szego_fh_predict",
    "bessel_k0", "log_barnes_g", "log_gamma",
]
