#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tracefem/assembly.hpp"

namespace tracefem {

/// Discrete solution in physical (untransformed) variables, one coefficient
/// per local dof of the corresponding space.
struct DiscreteSolution {
  std::vector<double> u1;
  std::vector<double> u2;
  std::vector<double> v;
};

/// Reference fields an approximation is measured against.
struct ExactFields {
  std::function<double(int, const Vec3&)> bulk;       // u_i
  std::function<Vec3(int, const Vec3&)> bulk_grad;
  std::function<double(const Vec3&)> surface;         // v
  std::function<Vec3(const Vec3&)> surface_grad;      // full gradient; projected per triangle
};

ExactFields manufactured_exact();

struct LevelErrors {
  int level = 0;
  double h = 0.0;
  double l2_bulk = 0.0;  // sqrt(|u1 - u1h|^2_{Omega1} + |u2 - u2h|^2_{Omega2})
  double h1_bulk = 0.0;  // full broken H1 norm of the bulk error
  double l2_surf = 0.0;
  double h1_surf = 0.0;  // full surface H1 norm, tangential gradients
  int gcr_iters = 0;
};

struct ErrorReport {
  std::vector<LevelErrors> rows;
};

/// log2(coarse / fine); the observed order between two consecutive levels.
double convergence_order(double err_coarse, double err_fine);

/// Integrates the error norms over the cut geometry with degree-5 rules.
/// level/h/gcr_iters of the result are left zero for the caller to fill.
/// `project_exact_surface_grad` applies the triangle tangential projector to
/// the analytic surface gradient before comparing (the default; turning it
/// off measures against the full ambient gradient instead).
LevelErrors compute_errors(const DiscreteSolution& sol, const ExactFields& exact,
                           const LevelSetField& field, const CutGeometry& geom,
                           const DofMaps& dofs, bool project_exact_surface_grad = true);

/// Mean of u_i over the discrete subdomain with the given tag.
double mean_bulk_concentration(const DiscreteSolution& sol, const LevelSetField& field,
                               const CutGeometry& geom, const DofMaps& dofs, int tag);

/// Integral of v_h over the interface triangulation.
double surface_integral(const DiscreteSolution& sol, const LevelSetField& field,
                        const CutGeometry& geom, const DofMaps& dofs);

/// Writes the convergence table:
///   level,h,l2_bulk,order_l2_bulk,h1_bulk,order_h1_bulk,l2_surf,order_l2_surf,
///   h1_surf,order_h1_surf,gcr_iters
/// Orders are between consecutive rows; the first row leaves them blank.
/// Floating point fields use %.5e. Throws when the file cannot be opened.
void write_convergence_csv(const std::string& path, const ErrorReport& report);

/// Legacy ASCII VTK unstructured grid of the background mesh with the bulk
/// solution (per-vertex, picking u1 where the level set is negative and u2
/// where positive) and the nodal level set values.
void write_vtk_volume(const std::string& path, const LevelSetField& field,
                      const DiscreteSolution& sol, const DofMaps& dofs);

/// Legacy ASCII VTK unstructured grid of the interface triangulation with the
/// surface solution interpolated to the triangle corners.
void write_vtk_interface(const std::string& path, const LevelSetField& field,
                         const CutGeometry& geom, const DiscreteSolution& sol,
                         const DofMaps& dofs);

}  // namespace tracefem
