"""Poncelet polygon families between nested ellipses and the loci of their centers of mass."""

from .centers import CenterKind, Polygon, center_of_mass, tangency_polygon
from .conics import (
    AffineMap,
    Conic,
    Line,
    circle,
    conic_from_ellipse,
    dual_conic_wrt,
    evaluate,
    normalize_outer,
    other_intersection,
    pole_of_line,
    push_forward,
    tangent_lines_from_point,
    unit_circle,
)
from .dynamics import (
    Flag,
    InnerTemplate,
    PonceletFamily,
    PonceletMap,
    certify_family,
    find_periodic_family,
    measure_of_arc,
    poncelet_step,
    rotation_number,
    tangent_length,
)
from .locus import (
    CircleFit,
    LocusSample,
    VerificationReport,
    fit_circle,
    sample_locus,
    verify_dual_poncelet,
    verify_porism,
    verify_theorem_main,
    verify_weill,
)

__version__ = "0.1.0"
