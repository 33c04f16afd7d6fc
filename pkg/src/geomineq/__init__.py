"""Exact convex geometry and volume-inequality verification."""

from .rational import Rat, rat, rat_str, parse_rat
from .polytope import (
    FloatBody,
    Hyperplane,
    Polytope,
    convex_hull,
    linear_image,
    minkowski_sum,
    project_coordinate,
    project_complement,
    project_general,
    project_volume_float,
    section_coordinate,
    section_hyperplane,
    section_volume_float,
    surface_area,
)
from .covers import (
    JohnFrame,
    NonUniformCoverError,
    UniformCover,
    complement_cover,
    enumerate_covers,
    format_cover,
    gamma,
    john_check,
    loomis_whitney_cover,
    parse_cover,
    validate_cover,
)
from .mixed import (
    BallApprox,
    MixedVolumeEngine,
    MixedVolumeQuery,
    ball_approx,
    fedotov_factorization_check,
    intrinsic_volume,
    kubota_cauchy_check,
    mixed_volume,
    quermassintegral,
    segment_pair_mixed,
    unit_ball_volume,
)
from .centroid import (
    NormalizedBody,
    SupportEstimate,
    ZpProjection,
    duality_ratio,
    inclusion_ratio,
    normalize,
    support_Zp,
    z_inf_body,
    zp_projection,
)
from .plconcave import PLConcave, berwald_sides, random_concave
from .bodies import (
    generate_body,
    load_body,
    make_box,
    make_cross_polytope,
    make_cube,
    make_diagonal_image,
    make_random_hull,
    make_simplex,
    make_zonotope,
    save_body,
    standard_corpus,
)
from .harness import (
    BodyCache,
    InequalityReport,
    Quantity,
    SearchResult,
    check_af_triple,
    check_berwald,
    check_bt_cover,
    check_dual_cover,
    check_hug_schneider_r2,
    check_john_frame,
    check_meyer,
    check_nonorthogonal_pair,
    check_restricted_cover,
    check_surface_ratio,
    check_sz,
    hug_schneider_constant,
    tightness_search,
)
from .suite import (
    CheckJob,
    SuiteConfig,
    SuiteResult,
    csv_text,
    default_suite,
    load_suite,
    run_suite,
)

__version__ = "0.1.0"

__all__ = [
    "Rat",
    "rat",
    "rat_str",
    "parse_rat",
    "FloatBody",
    "Hyperplane",
    "Polytope",
    "convex_hull",
    "linear_image",
    "minkowski_sum",
    "project_coordinate",
    "project_complement",
    "project_general",
    "project_volume_float",
    "section_coordinate",
    "section_hyperplane",
    "section_volume_float",
    "surface_area",
    "JohnFrame",
    "NonUniformCoverError",
    "UniformCover",
    "complement_cover",
    "enumerate_covers",
    "format_cover",
    "gamma",
    "john_check",
    "loomis_whitney_cover",
    "parse_cover",
    "validate_cover",
    "BallApprox",
    "MixedVolumeEngine",
    "MixedVolumeQuery",
    "ball_approx",
    "fedotov_factorization_check",
    "intrinsic_volume",
    "kubota_cauchy_check",
    "mixed_volume",
    "quermassintegral",
    "segment_pair_mixed",
    "unit_ball_volume",
    "NormalizedBody",
    "SupportEstimate",
    "ZpProjection",
    "duality_ratio",
    "inclusion_ratio",
    "normalize",
    "support_Zp",
    "z_inf_body",
    "zp_projection",
    "PLConcave",
    "berwald_sides",
    "random_concave",
    "generate_body",
    "load_body",
    "make_box",
    "make_cross_polytope",
    "make_cube",
    "make_diagonal_image",
    "make_random_hull",
    "make_simplex",
    "make_zonotope",
    "save_body",
    "standard_corpus",
    "BodyCache",
    "InequalityReport",
    "Quantity",
    "SearchResult",
    "check_af_triple",
    "check_berwald",
    "check_bt_cover",
    "check_dual_cover",
    "check_hug_schneider_r2",
    "check_john_frame",
    "check_meyer",
    "check_nonorthogonal_pair",
    "check_restricted_cover",
    "check_surface_ratio",
    "check_sz",
    "hug_schneider_constant",
    "tightness_search",
    "CheckJob",
    "SuiteConfig",
    "SuiteResult",
    "csv_text",
    "default_suite",
    "load_suite",
    "run_suite",
]
