#pragma once

#include <string>
#include <vector>

#include "tracefem/postproc.hpp"

namespace tracefem {

/// Everything a run needs; fillable from CLI flags or a key=value file.
struct RunConfig {
  std::string experiment = "convergence";  // or "desorption"
  int max_level = 3;           // convergence study runs levels 0..max_level
  int level = 3;               // single level used by the desorption study
  double tol = 1e-10;          // GCR relative residual target
  std::string out_dir = ".";
  int threads = 1;
  std::vector<double> eps = {1.0, 0.1, 1e-3, 1e-5, 1e-10, 0.0};  // desorption sweep
  bool write_vtk = false;
  ProblemParams params;

  /// Throws if a field is outside its supported range (levels 0..4, tol in
  /// (0,1), threads >= 1, eps entries >= 0, experiment name known).
  void validate() const;
  /// Writes every field as one `key=value` line (doubles at full precision).
  void save(const std::string& path) const;
  /// Reads a file written by save(); unknown keys throw, missing keys keep
  /// their current value.
  static RunConfig load(const std::string& path);
};

/// Mesh/level-set/cut-geometry/dof bundle for one refinement level.
struct LevelContext {
  std::shared_ptr<const Mesh> mesh;
  LevelSetField field;
  CutGeometry geom;
  DofMaps dofs;
  double h = 0.0;
};

/// Builds the sphere-in-box geometry at refinement level `level`
/// (4 * 2^level subdivisions of [-1.5, 1.5]^3).
LevelContext build_level(int level);

struct SolveOutcome {
  DiscreteSolution solution;  // physical variables
  SolveReport report;
};

/// Assembles the transformed system for the given sources and transformed
/// Dirichlet data, solves it with truncated GCR preconditioned by block SGS,
/// and maps the result back to physical variables.
SolveOutcome solve_coupled(const LevelContext& ctx, const ProblemParams& params,
                           const Sources& src,
                           const std::function<double(int, const Vec3&)>& dirichlet_transformed,
                           double tol, int threads);

struct ConvergenceResult {
  ErrorReport report;
  bool all_converged = false;
  std::string csv_path;
};

/// Manufactured-solution convergence study over levels 0..max_level; writes
/// convergence.csv into out_dir (and VTK files of the finest level when
/// requested).
ConvergenceResult run_convergence(const RunConfig& cfg);

struct DesorptionRow {
  double eps = 0.0;       // desorption rate k1d
  double mean_u1 = 0.0;   // mean concentration over subdomain 1
  double surf_integral = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct DesorptionResult {
  std::vector<DesorptionRow> rows;
  bool all_converged = false;
  std::string csv_path;
};

/// Desorption-limit sweep at a fixed level: zero bulk sources, unit surface
/// source, homogeneous Dirichlet walls, k1d = eps per entry of cfg.eps;
/// writes desorption.csv into out_dir.
DesorptionResult run_desorption(const RunConfig& cfg);

}  // namespace tracefem
