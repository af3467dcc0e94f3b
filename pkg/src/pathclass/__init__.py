"""Joint-cover workspace decomposition and path classes for planar and
spatial obstacle scenes."""

from .delaunay import Triangulation, triangulate, triangulate_points, triangulate_workspace
from .errors import (
    ComparisonError,
    ContainmentError,
    DegeneracyError,
    InputError,
    NonExistenceError,
    PathClassError,
    PlanningError,
    QueryError,
    ResolutionError,
    SceneValidationError,
    SpecError,
    UnsupportedError,
)
from .jointcover import (
    adjacency_graph,
    build_joint_cover,
    first_betti_number,
    is_hole_free,
    label_region,
    region_of_point,
    what_if_remove,
    workspace_complex,
)
from .kernels import BACKEND
from .planner import (
    check_existence,
    interpolate_chain,
    plan,
    realize_point_path,
    search_topological,
    split_visible,
)
from .robot import build_complex, make_spec, point_robot, serial_chain
from .scene import Scene, make_scene
from .states import (
    contract,
    h_signature,
    path_representation,
    point_path_representation,
    same_class,
    state_of,
)

__version__ = "0.1.0"
