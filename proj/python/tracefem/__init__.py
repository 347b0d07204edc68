"""Python interface to the coupled bulk/surface transport solver."""

from ._core import (
    ConvergenceResult,
    CutGeometry,
    DesorptionResult,
    DesorptionRow,
    DofMaps,
    LevelErrors,
    LevelSetField,
    Mesh,
    ProblemParams,
    RunConfig,
    TransformedParams,
    build_cube_mesh,
    build_cut_geometry,
    build_dofmaps,
    class_counts,
    convergence_order,
    exact_bulk,
    exact_surface,
    interface_area,
    interpolate_p1,
    mesh_size,
    refine_uniform,
    run_convergence,
    run_desorption,
    sphere_field,
    subdomain_volume,
    transform,
    velocity,
)

__all__ = [
    "ConvergenceResult",
    "CutGeometry",
    "DesorptionResult",
    "DesorptionRow",
    "DofMaps",
    "LevelErrors",
    "LevelSetField",
    "Mesh",
    "ProblemParams",
    "RunConfig",
    "TransformedParams",
    "build_cube_mesh",
    "build_cut_geometry",
    "build_dofmaps",
    "class_counts",
    "convergence_order",
    "exact_bulk",
    "exact_surface",
    "interface_area",
    "interpolate_p1",
    "mesh_size",
    "refine_uniform",
    "run_convergence",
    "run_desorption",
    "sphere_field",
    "subdomain_volume",
    "transform",
    "velocity",
]

__version__ = "0.1.0"
