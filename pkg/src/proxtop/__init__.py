"""Finite proximity spaces and descriptive nearness, with homotopy
checking, cycle structures, nerve complexes, grid topology, and shape
persistence tracking on top."""

from .axioms import AxiomReport, AxiomResult, check_cech_axioms
from .cycles import (
    CycleReport,
    CycleSystem,
    HCycle,
    HPath,
    MultiCycle,
    PathClass,
    SystemBoundaryReport,
    SystemReport,
    auto_window,
    outer_boundary,
    path_description,
    paths_descriptively_close,
    system_boundary_check,
    validate_cycle_system,
    validate_hcyc,
    validate_hpath,
    validate_multi_cycle,
)
from .descriptive import (
    check_descriptive_axioms,
    describe,
    description_classes,
    descriptions_close,
    descriptive_closure,
    descriptive_intersection,
    descriptive_intersection_many,
    descriptive_near,
    feature_distance,
    single_description,
    stored_features,
)
from .grid import (
    PixelSet,
    RegionPartition,
    bresenham_line,
    closure_boundary_interior,
    connected_components,
    grid_homology,
    is_grid_contractible,
    jordan_partition,
    rasterize_cycle,
    rasterize_path,
    rect_pixel_set,
    segment_pixels,
)
from .homotopy import (
    ConstantClassification,
    ConstantKind,
    ContinuityReport,
    ContractibilityReport,
    FiniteMap,
    HomotopyReport,
    HomotopyWitness,
    check_proximal_continuity,
    classify_constant,
    compose,
    concatenate_homotopies,
    constant_homotopy,
    contractibility,
    contraction_certificate,
    glue,
    post_compose_witness,
    pre_compose_witness,
    reverse_homotopy,
    straight_line_homotopy,
    verify_homotopy,
)
from .errors import (
    DegenerateTriangleError,
    ForeignPointError,
    GluePreconditionError,
    InputError,
    InvalidShapeError,
    MissingCoordinatesError,
    MissingProbeError,
    ProxtopError,
    RasterizationError,
    SpaceMismatchError,
)
from .nerve import (
    AlexandrovQuadruple,
    Cover,
    FreeGroupPresentation,
    GoodCoverReport,
    IntersectionReport,
    NerveComplex,
    NerveUnionReport,
    QuadrupleReport,
    alexandrov_quadruple_check,
    betti,
    build_nerve,
    check_good_cover,
    comparison_angle,
    cycles_one_skeleton,
    free_group_presentation,
    nerve_vs_union_check,
)
from .persistence import (
    Frame,
    FrameDescriptor,
    PersistenceTrack,
    descriptors_near,
    frame_descriptor,
    report,
    track,
)
from .spaces import (
    ExplicitRelation,
    FiniteProximitySpace,
    MetricGap,
    Point,
    closure,
    hausdorff_gap,
    is_closed,
    near,
)

__version__ = "0.1.0"
