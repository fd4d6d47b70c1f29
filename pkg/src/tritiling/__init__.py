"""Plane tilings by equilateral triangles in which no two triangles share
a side: constructions, structural verification, and the martingale walk
on the large-triangle adjacency graph."""

from .errors import (
    BackendError,
    BackendMismatch,
    DegenerateSpec,
    DegenerateTriangleError,
    IndeterminateForBoundary,
    NonPositiveSide,
    NotEquilateralError,
    OverlapError,
    ParseError,
    PreconditionViolated,
    RangeError,
    SqrtNotRepresentable,
    StructureError,
    TilingError,
    UnknownVertex,
    WindowError,
)
from .geometry import (
    DEFAULT_EPS,
    ExactScalar,
    FloatScalar,
    Point,
    Scalar,
    TrianglePlacement,
    approx,
    collinear_overlap,
    exact,
    ex_point,
    fl_point,
    interiors_intersect,
    orient,
    point_in_segment_interior,
    shares_full_side,
)
from .model import (
    BOUNDARY,
    INTERIOR,
    ROLE_EDGE_INTERIOR,
    ROLE_VERTEX,
    TilingPatch,
    Window,
    build_patch,
    clipped_area,
    clipped_area_in,
    incident_triangles,
    triangle_window_overlap,
)
from .structure import (
    EdgeStatus,
    Lemma10Result,
    TriangleClass,
    Violation,
    check_lemma7,
    check_lemma8,
    check_lemma9,
    check_lemma10,
    classify,
    continues_at,
    edge_status,
    is_improper,
    lemma5_locate,
    lemma10_neighbors,
)
from .generators import (
    ALPHA,
    LEFT_B_FIRST,
    RIGHT_B_FIRST,
    PeriodicSpec,
    SpiralSpec,
    klaassen_spiral,
    periodic_cell,
    periodic_lattice_vectors,
    periodic_three_size,
    real_root_unit_cubic,
    spiral_placements,
    uniform_lattice,
)
from .verify import (
    ConclusionsReport,
    HypothesesReport,
    Verdict,
    conclusions,
    detect_periods,
    hypotheses,
    lattices_equal,
    shared_side_pairs,
    vector_in_lattice,
)
from .walk import (
    ContradictionReport,
    GraphNode,
    LargeAdjacencyGraph,
    StepSet,
    WalkStats,
    contradiction_demo,
    extract_graph,
    martingale_deviation,
    simulate,
)
from .tilingio import dumps, load, loads, save
from .svgrender import RenderStyle, render_svg

__version__ = "0.1.0"
