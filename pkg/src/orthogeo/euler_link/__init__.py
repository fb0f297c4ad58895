"""Exact Euler calculus on curve diagrams: constructible functions and linking numbers."""

from .calculus import (
    ConstructibleFunction,
    LinkReport,
    NotNullHomologous,
    Subcomplex,
    boundary_decomposition,
    chi_curve_intersection,
    chi_of_f,
    chi_product,
    constructible_function,
    epsilon_of,
    link_report,
    linking,
    open_superlevel_chi,
    sublevel_chi,
    superlevel,
    value_at_zero,
)
from .diagram import (
    CURVES,
    LOOP,
    POINT,
    CurveDiagram,
    DiagramFormatError,
    Marker,
    format_diagram,
    parse_diagram,
    read_diagram,
    validate_diagram,
    write_diagram,
)
from .fixtures import TEMPLATES, MapBuilder, fixture, polygon_surface, random_diagram, random_moves, template
