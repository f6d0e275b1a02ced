"""flutelab: hyperbolic flute surfaces at high precision.

Submodules: ``hpscalar`` (log-domain reals), ``trig`` (pentagons and
Lambert quadrilaterals), ``surface`` (specs and holonomy), ``curves``
(words and lengths), ``metrics`` (length-spectrum distance and the
twist experiments), ``dynamics`` (ray tracing and completeness) and
``cli``.
"""
from .errors import (CancellationWarning, DomainError, FluteError, MismatchError,
                     NotHyperbolicError, PrecisionError, ResolutionError, SchemaError,
                     SearchFailure, ValidationError)
from .hpscalar import HPScalar, hp, hyp_eval
from .surface import (FluteSpec, Holonomy, HPMatrix, build_holonomy, load_spec, parse_spec,
                      rapid_growth_diagnostic, seam_width)
from .curves import CurveClass, Cuff, Delta, curve_word, enumerate_curves, geodesic_length
from .metrics import dls_truncated
from .dynamics import choose_complete_twists, completeness_probe, trace_ray

__version__ = "0.1.0"

__all__ = [
    "CancellationWarning", "DomainError", "FluteError", "MismatchError", "NotHyperbolicError",
    "PrecisionError", "ResolutionError", "SchemaError", "SearchFailure", "ValidationError",
    "HPScalar", "hp", "hyp_eval", "FluteSpec", "Holonomy", "HPMatrix", "build_holonomy",
    "load_spec", "parse_spec", "rapid_growth_diagnostic", "seam_width", "CurveClass", "Cuff",
    "Delta", "curve_word", "enumerate_curves", "geodesic_length", "dls_truncated",
    "choose_complete_twists", "completeness_probe", "trace_ray",
]
