#include "tracefem/driver.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tracefem {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string join_eps(const std::vector<double>& eps) {
  std::string out;
  for (size_t i = 0; i < eps.size(); ++i) {
    if (i) out += ',';
    out += fmt_double(eps[i]);
  }
  return out;
}

std::vector<double> parse_eps(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stod(item));
  }
  return out;
}

}  // namespace

void RunConfig::validate() const {
  if (experiment != "convergence" && experiment != "desorption")
    throw std::invalid_argument("RunConfig: unknown experiment '" + experiment + "'");
  if (max_level < 0 || max_level > 4)
    throw std::invalid_argument("RunConfig: max_level must be in [0, 4]");
  if (level < 0 || level > 4) throw std::invalid_argument("RunConfig: level must be in [0, 4]");
  if (!(tol > 0.0) || !(tol < 1.0)) throw std::invalid_argument("RunConfig: tol must be in (0, 1)");
  if (threads < 1) throw std::invalid_argument("RunConfig: threads must be >= 1");
  for (double e : eps)
    if (!std::isfinite(e) || e < 0.0)
      throw std::invalid_argument("RunConfig: eps entries must be finite and >= 0");
  params.validate();
}

void RunConfig::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("RunConfig::save: cannot open " + path);
  out << "experiment=" << experiment << '\n';
  out << "max_level=" << max_level << '\n';
  out << "level=" << level << '\n';
  out << "tol=" << fmt_double(tol) << '\n';
  out << "out_dir=" << out_dir << '\n';
  out << "threads=" << threads << '\n';
  out << "eps=" << join_eps(eps) << '\n';
  out << "write_vtk=" << (write_vtk ? 1 : 0) << '\n';
  out << "nu1=" << fmt_double(params.nu1) << '\n';
  out << "nu2=" << fmt_double(params.nu2) << '\n';
  out << "nu_gamma=" << fmt_double(params.nu_gamma) << '\n';
  out << "k1a=" << fmt_double(params.k1a) << '\n';
  out << "k2a=" << fmt_double(params.k2a) << '\n';
  out << "k1d=" << fmt_double(params.k1d) << '\n';
  out << "k2d=" << fmt_double(params.k2d) << '\n';
  out << "K=" << fmt_double(params.K) << '\n';
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("RunConfig::load: cannot open " + path);
  RunConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto pos = line.find('=');
    if (pos == std::string::npos)
      throw std::invalid_argument("RunConfig::load: missing '=' on line " + std::to_string(lineno));
    const std::string key = line.substr(0, pos);
    const std::string value = line.substr(pos + 1);
    if (key == "experiment")
      cfg.experiment = value;
    else if (key == "max_level")
      cfg.max_level = std::stoi(value);
    else if (key == "level")
      cfg.level = std::stoi(value);
    else if (key == "tol")
      cfg.tol = std::stod(value);
    else if (key == "out_dir")
      cfg.out_dir = value;
    else if (key == "threads")
      cfg.threads = std::stoi(value);
    else if (key == "eps")
      cfg.eps = parse_eps(value);
    else if (key == "write_vtk")
      cfg.write_vtk = std::stoi(value) != 0;
    else if (key == "nu1")
      cfg.params.nu1 = std::stod(value);
    else if (key == "nu2")
      cfg.params.nu2 = std::stod(value);
    else if (key == "nu_gamma")
      cfg.params.nu_gamma = std::stod(value);
    else if (key == "k1a")
      cfg.params.k1a = std::stod(value);
    else if (key == "k2a")
      cfg.params.k2a = std::stod(value);
    else if (key == "k1d")
      cfg.params.k1d = std::stod(value);
    else if (key == "k2d")
      cfg.params.k2d = std::stod(value);
    else if (key == "K")
      cfg.params.K = std::stod(value);
    else
      throw std::invalid_argument("RunConfig::load: unknown key '" + key + "'");
  }
  return cfg;
}

LevelContext build_level(int level) {
  if (level < 0) throw std::invalid_argument("build_level: negative level");
  LevelContext ctx;
  Mesh mesh = build_cube_mesh(4 << level);
  mesh.level = level;
  ctx.mesh = std::make_shared<const Mesh>(std::move(mesh));
  ctx.field = interpolate_p1(phi_sphere, ctx.mesh);
  ctx.geom = build_cut_geometry(ctx.field);
  ctx.dofs = build_dofmaps(ctx.field);
  ctx.h = mesh_size(*ctx.mesh);
  return ctx;
}

SolveOutcome solve_coupled(const LevelContext& ctx, const ProblemParams& params,
                           const Sources& src,
                           const std::function<double(int, const Vec3&)>& dirichlet_transformed,
                           double tol, int threads) {
  const TransformedParams tp = transform(params);
  SystemBlocks blocks = assemble(ctx.field, ctx.geom, ctx.dofs, tp, src, threads);
  apply_dirichlet(blocks, *ctx.mesh, dirichlet_transformed);

  const int nb = blocks.n_bulk(), ns = blocks.n_surface(), n = nb + ns;
  std::vector<double> b(n);
  std::copy(blocks.rhs_b.begin(), blocks.rhs_b.end(), b.begin());
  std::copy(blocks.rhs_s.begin(), blocks.rhs_s.end(), b.begin() + nb);

  const BlockSgsPreconditioner precond(blocks.A_bb, blocks.A_ss);
  GcrOptions opts;
  opts.tol = tol;
  std::vector<double> x(n);
  SolveOutcome outcome;
  outcome.report = gcr_solve(
      n, [&blocks, threads](const double* in, double* out) { blocks.multiply(in, out, threads); },
      precond.as_fn(), b.data(), x.data(), opts);

  // Back to physical concentrations.
  const int n1 = blocks.n_bulk1;
  outcome.solution.u1.resize(n1);
  outcome.solution.u2.resize(nb - n1);
  outcome.solution.v.resize(ns);
  for (int i = 0; i < n1; ++i) outcome.solution.u1[i] = x[i] * tp.inv_k1a;
  for (int i = n1; i < nb; ++i) outcome.solution.u2[i - n1] = x[i] * tp.inv_k2a;
  for (int i = 0; i < ns; ++i) outcome.solution.v[i] = x[nb + i] * tp.inv_sum;
  return outcome;
}

ConvergenceResult run_convergence(const RunConfig& cfg) {
  cfg.validate();
  std::filesystem::create_directories(cfg.out_dir);

  const Sources src = manufactured_sources(cfg.params);
  const ExactFields exact = manufactured_exact();
  const double k1a = cfg.params.k1a, k2a = cfg.params.k2a;
  const auto dirichlet = [&exact, k1a, k2a](int i, const Vec3& p) {
    return (i == 1 ? k1a : k2a) * exact.bulk(i, p);
  };

  ConvergenceResult result;
  result.all_converged = true;
  for (int level = 0; level <= cfg.max_level; ++level) {
    const LevelContext ctx = build_level(level);
    const SolveOutcome outcome =
        solve_coupled(ctx, cfg.params, src, dirichlet, cfg.tol, cfg.threads);
    LevelErrors row = compute_errors(outcome.solution, exact, ctx.field, ctx.geom, ctx.dofs);
    row.level = level;
    row.h = ctx.h;
    row.gcr_iters = outcome.report.iterations;
    result.report.rows.push_back(row);
    result.all_converged = result.all_converged && outcome.report.converged;
    if (!outcome.report.converged) break;  // abort the study, report what we have

    if (cfg.write_vtk && level == cfg.max_level) {
      write_vtk_volume(cfg.out_dir + "/volume_l" + std::to_string(level) + ".vtk", ctx.field,
                       outcome.solution, ctx.dofs);
      write_vtk_interface(cfg.out_dir + "/interface_l" + std::to_string(level) + ".vtk", ctx.field,
                          ctx.geom, outcome.solution, ctx.dofs);
    }
  }

  result.csv_path = cfg.out_dir + "/convergence.csv";
  write_convergence_csv(result.csv_path, result.report);
  return result;
}

DesorptionResult run_desorption(const RunConfig& cfg) {
  cfg.validate();
  std::filesystem::create_directories(cfg.out_dir);
  const LevelContext ctx = build_level(cfg.level);

  Sources src;
  src.f1 = [](const Vec3&) { return 0.0; };
  src.f2 = [](const Vec3&) { return 0.0; };
  src.g = [](const Vec3&) { return 1.0; };
  const auto dirichlet = [](int, const Vec3&) { return 0.0; };

  DesorptionResult result;
  result.all_converged = true;
  for (double eps : cfg.eps) {
    ProblemParams params = cfg.params;
    params.k1d = eps;
    const SolveOutcome outcome = solve_coupled(ctx, params, src, dirichlet, cfg.tol, cfg.threads);

    DesorptionRow row;
    row.eps = eps;
    row.mean_u1 = mean_bulk_concentration(outcome.solution, ctx.field, ctx.geom, ctx.dofs, 1);
    row.surf_integral = surface_integral(outcome.solution, ctx.field, ctx.geom, ctx.dofs);
    row.iterations = outcome.report.iterations;
    row.converged = outcome.report.converged;
    result.rows.push_back(row);
    result.all_converged = result.all_converged && row.converged;
    if (!row.converged) break;  // abort the sweep, report what we have

    if (cfg.write_vtk && eps == cfg.eps.back()) {
      write_vtk_volume(cfg.out_dir + "/volume_desorption.vtk", ctx.field, outcome.solution,
                       ctx.dofs);
      write_vtk_interface(cfg.out_dir + "/interface_desorption.vtk", ctx.field, ctx.geom,
                          outcome.solution, ctx.dofs);
    }
  }

  result.csv_path = cfg.out_dir + "/desorption.csv";
  std::ofstream out(result.csv_path);
  if (!out) throw std::runtime_error("run_desorption: cannot open " + result.csv_path);
  out << "eps,mean_u1,surf_integral,gcr_iters\n";
  char buf[96];
  for (const auto& row : result.rows) {
    std::snprintf(buf, sizeof(buf), "%.10e,%.10e,%.10e,%d\n", row.eps, row.mean_u1,
                  row.surf_integral, row.iterations);
    out << buf;
  }
  return result;
}

}  // namespace tracefem
