"""discgeom: numerical boundary geometry of domains {r < 0} in C^n.

Embedded-bidisc (disc property) analysis, Levi forms and contact orders,
and tangential Hoelder-gain measurements for holomorphic test functions,
over a catalog of model domains including worm domains.
"""

from .defexpr import ComplexPoint, ExprAst, evaluate, parse, pretty
from .disc import (
    ContainmentResult,
    DiscQuery,
    IndexEstimate,
    RadiusProfile,
    SamplingConfig,
    Witness,
    contains_bidisc,
    default_delta_grid,
    embed,
    estimate_index,
    max_tangential_radius,
    radius_profile,
    uniform_sweep,
)
from .domains import (
    Domain,
    Guard,
    ReferencePoint,
    catalog_families,
    catalog_get,
    load_domain_file,
    parse_domain_spec,
    reference_points,
    worm_annulus_point,
    worm_offcenter_point,
)
from .geometry import (
    BoundaryPoint,
    Curve,
    Frame,
    OrderEstimate,
    boundary_point_at,
    contact_order,
    frame_at,
    integrate_tangential_curve,
    levi_form,
    project_to_boundary,
    random_boundary_points,
)
from .hoelder import (
    GainReport,
    HoelderEstimate,
    HoloTestFunction,
    HPolicy,
    cauchy_riemann_gap,
    curve_gain,
    derivative_growth,
    hoelder_exponent,
    make_halfspace_power,
    tangential_gain,
)
from .numdiff import (
    WirtingerData,
    complex_hessian,
    fd_crosscheck,
    real_gradient,
    wirtinger_first,
)

__version__ = "0.1.0"
