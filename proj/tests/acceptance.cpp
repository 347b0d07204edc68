// Acceptance suite for the coupled bulk/surface transport solver. Runs the
// full studies at production settings and checks every shipped guarantee,
// printing one PASS/FAIL line per criterion. Exit code = number of failures.
//
// Heavier than the unit tests (several minutes); run via ctest -R acceptance.

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "tracefem/assembly.hpp"
#include "tracefem/driver.hpp"

using namespace tracefem;

namespace {

int g_index = 0;
int g_failures = 0;

void record(const std::string& name, bool ok, const std::string& detail) {
  ++g_index;
  std::printf("[%d] %s  %s%s%s\n", g_index, ok ? "PASS" : "FAIL", name.c_str(),
              detail.empty() ? "" : ": ", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

void criterion(const std::string& name,
               const std::function<std::pair<bool, std::string>()>& body) {
  try {
    auto [ok, detail] = body();
    record(name, ok, detail);
  } catch (const std::exception& e) {
    record(name, false, std::string("exception: ") + e.what());
  }
}

bool in_band(double x, double lo, double hi) { return std::isfinite(x) && x >= lo && x <= hi; }

std::string fmt(double x) {
  std::ostringstream ss;
  ss << std::setprecision(4) << x;
  return ss.str();
}

Vec3 random_unit(std::mt19937& gen) {
  std::normal_distribution<double> N(0.0, 1.0);
  Vec3 p;
  do {
    p = {N(gen), N(gen), N(gen)};
  } while (norm(p) < 1e-3);
  return normalized(p);
}

double fd_gradient_dot(const std::function<double(const Vec3&)>& f, const Vec3& p, const Vec3& w,
                       double h) {
  const Vec3 ex{h, 0, 0}, ey{0, h, 0}, ez{0, 0, h};
  const Vec3 g{(f(p + ex) - f(p - ex)) / (2 * h), (f(p + ey) - f(p - ey)) / (2 * h),
               (f(p + ez) - f(p - ez)) / (2 * h)};
  return dot(g, w);
}

double fd_laplacian(const std::function<double(const Vec3&)>& f, const Vec3& p, double h) {
  const Vec3 e[3] = {{h, 0, 0}, {0, h, 0}, {0, 0, h}};
  double lap = 0.0;
  for (const Vec3& d : e) lap += (f(p + d) - 2.0 * f(p) + f(p - d)) / (h * h);
  return lap;
}

}  // namespace

int main() {
  std::printf("acceptance: unfitted coupled bulk/surface transport solver\n");

  const std::string conv_dir = "acceptance_conv";
  const std::string des_dir = "acceptance_des";

  // ---- full manufactured-solution convergence study, levels 0..3 ----------
  ConvergenceResult conv;
  std::string conv_error;
  try {
    RunConfig cfg;
    cfg.max_level = 3;
    cfg.tol = 1e-10;
    cfg.threads = 4;
    cfg.out_dir = conv_dir;
    conv = run_convergence(cfg);
    if (!conv.all_converged) conv_error = "a level missed the solver tolerance";
    if (conv.report.rows.size() != 4) conv_error = "study aborted early";
  } catch (const std::exception& e) {
    conv_error = std::string("exception: ") + e.what();
  }

  criterion("convergence orders (bulk L2 ~2, bulk H1 ~1, surface L2 ~2, surface H1 ~1)",
            [&]() -> std::pair<bool, std::string> {
              if (!conv_error.empty()) return {false, conv_error};
              const LevelErrors& a = conv.report.rows[2];
              const LevelErrors& b = conv.report.rows[3];
              const double p_l2b = convergence_order(a.l2_bulk, b.l2_bulk);
              const double p_h1b = convergence_order(a.h1_bulk, b.h1_bulk);
              const double p_l2s = convergence_order(a.l2_surf, b.l2_surf);
              const double p_h1s = convergence_order(a.h1_surf, b.h1_surf);
              const bool ok = in_band(p_l2b, 1.75, 2.15) && in_band(p_h1b, 0.85, 1.15) &&
                              in_band(p_l2s, 1.8, 2.2) && in_band(p_h1s, 0.85, 1.15);
              return {ok, "orders " + fmt(p_l2b) + " / " + fmt(p_h1b) + " / " + fmt(p_l2s) +
                              " / " + fmt(p_h1s)};
            });

  criterion("error magnitudes at level 2 match the reference table (within 2x)",
            [&]() -> std::pair<bool, std::string> {
              if (!conv_error.empty()) return {false, conv_error};
              const LevelErrors& r = conv.report.rows[2];
              const double ref[4] = {1.28e-1, 1.79e0, 5.39e-2, 1.01e0};
              const double got[4] = {r.l2_bulk, r.h1_bulk, r.l2_surf, r.h1_surf};
              bool ok = true;
              std::string detail = "factors";
              for (int k = 0; k < 4; ++k) {
                const double factor = got[k] / ref[k];
                ok = ok && in_band(factor, 0.5, 2.0);
                detail += " " + fmt(factor);
              }
              return {ok, detail};
            });

  criterion("iteration counts stay near the reference and grow mildly under refinement",
            [&]() -> std::pair<bool, std::string> {
              if (!conv_error.empty()) return {false, conv_error};
              const int ref[4] = {29, 41, 67, 119};
              bool ok = true;
              std::string detail = "iters";
              for (int k = 0; k < 4; ++k) {
                const int it = conv.report.rows[k].gcr_iters;
                ok = ok && in_band(double(it) / ref[k], 0.7, 1.3);
                detail += " " + std::to_string(it);
              }
              for (int k = 0; k + 1 < 4; ++k) {
                const double growth =
                    double(conv.report.rows[k + 1].gcr_iters) / conv.report.rows[k].gcr_iters;
                ok = ok && in_band(growth, 1.2, 2.3);
              }
              return {ok, detail};
            });

  // ---- desorption-limit sweep at the finest level -------------------------
  DesorptionResult sweep;
  std::string sweep_error;
  try {
    RunConfig cfg;
    cfg.experiment = "desorption";
    cfg.level = 3;
    cfg.tol = 1e-14;
    cfg.threads = 4;
    cfg.eps = {1.0, 0.1, 1e-3, 1e-5, 0.0};
    cfg.out_dir = des_dir;
    cfg.params.k1a = 1.0;
    cfg.params.k2a = 1.0;
    cfg.params.k2d = 1.0;
    sweep = run_desorption(cfg);
    if (!sweep.all_converged) sweep_error = "a sweep entry missed the solver tolerance";
    if (sweep.rows.size() != 5) sweep_error = "sweep incomplete";
  } catch (const std::exception& e) {
    sweep_error = std::string("exception: ") + e.what();
  }

  criterion("mean bulk concentration scales linearly in the desorption rate, zero limit exact",
            [&]() -> std::pair<bool, std::string> {
              if (!sweep_error.empty()) return {false, sweep_error};
              double lo = 1e300, hi = -1e300, zero_mean = 1e300;
              for (const DesorptionRow& row : sweep.rows) {
                if (row.eps == 0.0) {
                  zero_mean = row.mean_u1;
                  continue;
                }
                const double ratio = row.mean_u1 / row.eps;
                lo = std::min(lo, ratio);
                hi = std::max(hi, ratio);
              }
              const double spread = (hi - lo) / (0.5 * (hi + lo));
              const bool ok = spread <= 0.01 && std::abs(zero_mean) <= 1e-12;
              return {ok, "ratio " + fmt(0.5 * (hi + lo)) + ", spread " + fmt(spread) +
                              ", zero-rate mean " + fmt(zero_mean)};
            });

  criterion("mean/rate ratio converges with refinement toward the reference values",
            [&]() -> std::pair<bool, std::string> {
              if (!sweep_error.empty()) return {false, sweep_error};
              const double ref[4] = {1.3191, 1.3865, 1.4088, 1.4153};
              double ratio[4] = {0, 0, 0, 0};
              for (int level = 0; level < 3; ++level) {
                RunConfig cfg;
                cfg.experiment = "desorption";
                cfg.level = level;
                cfg.tol = 1e-14;
                cfg.threads = 4;
                cfg.eps = {1e-3};
                cfg.out_dir = des_dir;
                cfg.params.k1a = 1.0;
                cfg.params.k2a = 1.0;
                cfg.params.k2d = 1.0;
                const DesorptionResult r = run_desorption(cfg);
                if (!r.all_converged) return {false, "coarse sweep missed the tolerance"};
                ratio[level] = r.rows[0].mean_u1 / 1e-3;
              }
              for (const DesorptionRow& row : sweep.rows)
                if (row.eps == 1e-3) ratio[3] = row.mean_u1 / row.eps;
              bool ok = true;
              std::string detail = "ratios";
              for (int k = 0; k < 4; ++k) {
                ok = ok && in_band(ratio[k] / ref[k], 0.98, 1.02);
                detail += " " + fmt(ratio[k]);
              }
              const double d0 = ratio[1] - ratio[0];
              const double d1 = ratio[2] - ratio[1];
              const double d2 = ratio[3] - ratio[2];
              ok = ok && in_band(d1 / d0, 0.15, 0.45) && in_band(d2 / d1, 0.15, 0.45);
              return {ok, detail + ", contraction " + fmt(d1 / d0) + " / " + fmt(d2 / d1)};
            });

  criterion("saturated surface mass matches the reference for every desorption rate",
            [&]() -> std::pair<bool, std::string> {
              if (!sweep_error.empty()) return {false, sweep_error};
              bool ok = true;
              double worst = 0.0;
              for (const DesorptionRow& row : sweep.rows) {
                const double diff = std::abs(row.surf_integral - 17.775);
                worst = std::max(worst, diff);
                ok = ok && diff <= 0.05;
              }
              return {ok, "max deviation " + fmt(worst)};
            });

  // ---- cut geometry: conservation, closedness, second-order accuracy ------
  criterion("cut geometry conserves volume, stays watertight, converges at 2nd order",
            [&]() -> std::pair<bool, std::string> {
              double vol_err[4] = {0, 0, 0, 0};
              double area_err[4] = {0, 0, 0, 0};
              const double pi = 3.14159265358979323846;
              for (int level = 1; level <= 3; ++level) {
                const LevelContext ctx = build_level(level);
                const Mesh& mesh = *ctx.mesh;

                std::vector<double> covered(mesh.n_tets(), 0.0);
                for (size_t i = 0; i < ctx.geom.sub_tets.size(); ++i) {
                  const auto& p = ctx.geom.sub_tets[i].pts;
                  covered[ctx.geom.sub_tet_parent[i]] +=
                      tet_volume(p[0], p[1], p[2], p[3]);
                }
                double worst = 0.0;
                for (int t = 0; t < mesh.n_tets(); ++t) {
                  const auto& tet = mesh.tets[t];
                  const double vol =
                      tet_volume(mesh.vertices[tet[0]], mesh.vertices[tet[1]],
                                 mesh.vertices[tet[2]], mesh.vertices[tet[3]]);
                  worst = std::max(worst, std::abs(covered[t] - vol) / vol);
                }
                if (worst > 1e-10)
                  return {false, "volume conservation off by " + fmt(worst) + " at level " +
                                     std::to_string(level)};

                // every interface edge must be shared by exactly two triangles
                std::map<std::array<double, 6>, int> edge_count;
                for (const InterfaceTri& tri : ctx.geom.triangles) {
                  for (int e = 0; e < 3; ++e) {
                    const Vec3& a = tri.pts[e];
                    const Vec3& b = tri.pts[(e + 1) % 3];
                    std::array<double, 6> ka{a.x, a.y, a.z, b.x, b.y, b.z};
                    std::array<double, 6> kb{b.x, b.y, b.z, a.x, a.y, a.z};
                    edge_count[std::min(ka, kb)] += 1;
                  }
                }
                for (const auto& [key, count] : edge_count)
                  if (count != 2)
                    return {false, "open interface edge at level " + std::to_string(level)};

                vol_err[level] = std::abs(subdomain_volume(ctx.geom, 1) - 4.0 * pi / 3.0);
                area_err[level] = std::abs(interface_area(ctx.geom) - 4.0 * pi);
              }
              const double p_vol = 0.5 * std::log2(vol_err[1] / vol_err[3]);
              const double p_area = 0.5 * std::log2(area_err[1] / area_err[3]);
              const bool ok = p_vol >= 1.9 && p_area >= 1.9;
              return {ok, "volume order " + fmt(p_vol) + ", area order " + fmt(p_area)};
            });

  // ---- linear algebra guarantees ------------------------------------------
  criterion("skew convection, monotone GCR residuals, dense-LU oracle, determinism",
            [&]() -> std::pair<bool, std::string> {
              const LevelContext ctx = build_level(1);
              const ProblemParams params;
              const Sources src = manufactured_sources(params);
              const TransformedParams tp = transform(params);
              TransformedParams tp0 = tp;
              tp0.inv_k1a = tp0.inv_k2a = tp0.inv_sum = 0.0;

              const SystemBlocks with_w = assemble(ctx.field, ctx.geom, ctx.dofs, tp, src, 4);
              const SystemBlocks no_w = assemble(ctx.field, ctx.geom, ctx.dofs, tp0, src, 4);
              const int n = with_w.size();
              std::mt19937 gen(7);
              std::uniform_real_distribution<double> U(-1.0, 1.0);
              for (int trial = 0; trial < 10; ++trial) {
                std::vector<double> x(n), yw(n), y0(n);
                for (double& xi : x) xi = U(gen);
                with_w.multiply(x.data(), yw.data(), 4);
                no_w.multiply(x.data(), y0.data(), 4);
                double quad = 0.0, ncx = 0.0, nx = 0.0;
                for (int i = 0; i < n; ++i) {
                  const double ci = yw[i] - y0[i];
                  quad += x[i] * ci;
                  ncx += ci * ci;
                  nx += x[i] * x[i];
                }
                const double scale = std::max(1.0, std::sqrt(ncx) * std::sqrt(nx));
                if (std::abs(quad) > 1e-10 * scale)
                  return {false, "convection quadratic form " + fmt(quad)};
              }

              const auto dirichlet = [&](int i, const Vec3& p) {
                return (i == 1 ? params.k1a : params.k2a) * ManufacturedSolution::bulk(i, p);
              };
              const SolveOutcome s1 = solve_coupled(ctx, params, src, dirichlet, 1e-10, 4);
              const SolveOutcome s2 = solve_coupled(ctx, params, src, dirichlet, 1e-10, 4);
              if (!s1.report.converged) return {false, "level-1 solve did not converge"};
              const auto& hist = s1.report.residual_history;
              if (static_cast<int>(hist.size()) != s1.report.iterations + 1)
                return {false, "history length mismatch"};
              for (size_t k = 0; k + 1 < hist.size(); ++k)
                if (hist[k + 1] > hist[k] * (1.0 + 1e-12))
                  return {false, "residual history not monotone"};
              const bool same = s1.report.iterations == s2.report.iterations &&
                                s1.solution.u1 == s2.solution.u1 &&
                                s1.solution.u2 == s2.solution.u2 &&
                                s1.solution.v == s2.solution.v;
              if (!same) return {false, "repeated solve differs"};

              // GCR against a dense LU factorization on a small SPD system
              const int m = 50;
              std::mt19937 gen2(11);
              Eigen::MatrixXd R(m, m);
              for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j) R(i, j) = U(gen2);
              Eigen::MatrixXd A = R.transpose() * R + double(m) * Eigen::MatrixXd::Identity(m, m);
              Eigen::VectorXd b(m);
              for (int i = 0; i < m; ++i) b(i) = U(gen2);
              std::vector<Triplet> trips;
              for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j) trips.push_back({i, j, A(i, j)});
              const SparseMatrix As = csr_from_triplets(m, m, trips);
              std::vector<double> xs(m, 0.0);
              GcrOptions opts;
              opts.tol = 1e-12;
              const SolveReport rep = gcr_solve(
                  m, [&](const double* in, double* out) { As.multiply(in, out); },
                  [&](const double* in, double* out) { std::copy(in, in + m, out); }, b.data(),
                  xs.data(), opts);
              if (!rep.converged) return {false, "GCR missed 1e-12 on the SPD test system"};
              const Eigen::VectorXd x_lu = A.partialPivLu().solve(b);
              double diff = 0.0;
              for (int i = 0; i < m; ++i) diff = std::max(diff, std::abs(xs[i] - x_lu(i)));
              if (diff > 1e-8 * x_lu.norm()) return {false, "GCR vs LU gap " + fmt(diff)};
              return {true, "iters " + std::to_string(s1.report.iterations) + ", LU gap " +
                                fmt(diff)};
            });

  // ---- closed-form model identities ---------------------------------------
  criterion("reference solution satisfies the interface flux and bulk transport equations",
            [&]() -> std::pair<bool, std::string> {
              const ProblemParams params;
              const Sources src = manufactured_sources(params);
              std::mt19937 gen(23);
              std::uniform_real_distribution<double> U(-1.0, 1.0);

              double worst_robin = 0.0;
              for (int k = 0; k < 100; ++k) {
                const Vec3 p = random_unit(gen);
                for (int i = 1; i <= 2; ++i) {
                  const double sign = (i == 1) ? -1.0 : 1.0;
                  const double nu = (i == 1) ? params.nu1 : params.nu2;
                  const double ka = (i == 1) ? params.k1a : params.k2a;
                  const double kd = (i == 1) ? params.k1d : params.k2d;
                  const double flux = sign * nu * dot(p, ManufacturedSolution::bulk_grad(i, p));
                  const double exchange = ka * ManufacturedSolution::bulk(i, p) -
                                          kd * ManufacturedSolution::surface(p);
                  worst_robin = std::max(worst_robin, std::abs(flux - exchange));
                }
              }
              if (worst_robin > 1e-10)
                return {false, "interface flux residual " + fmt(worst_robin)};

              double worst_pde = 0.0;
              const double h = 1e-4;
              for (int k = 0; k < 20; ++k) {
                const Vec3 inside = random_unit(gen) * (0.2 + 0.55 * std::abs(U(gen)));
                Vec3 outside;
                do {
                  outside = {1.4 * U(gen), 1.4 * U(gen), 1.4 * U(gen)};
                } while (norm(outside) < 1.25);
                const auto u1 = [](const Vec3& q) { return ManufacturedSolution::bulk(1, q); };
                const auto u2 = [](const Vec3& q) { return ManufacturedSolution::bulk(2, q); };
                const double r1 = -params.nu1 * fd_laplacian(u1, inside, h) +
                                  fd_gradient_dot(u1, inside, velocity_field(inside), h) -
                                  src.f1(inside);
                const double r2 = -params.nu2 * fd_laplacian(u2, outside, h) +
                                  fd_gradient_dot(u2, outside, velocity_field(outside), h) -
                                  src.f2(outside);
                worst_pde = std::max(worst_pde, std::max(std::abs(r1), std::abs(r2)));
              }
              if (worst_pde > 1e-5) return {false, "bulk transport residual " + fmt(worst_pde)};

              double worst_div = 0.0, worst_tan = 0.0;
              for (int k = 0; k < 100; ++k) {
                const Vec3 p{1.5 * U(gen), 1.5 * U(gen), 1.5 * U(gen)};
                const Vec3 ex{h, 0, 0}, ey{0, h, 0}, ez{0, 0, h};
                const double div =
                    (velocity_field(p + ex).x - velocity_field(p - ex).x +
                     velocity_field(p + ey).y - velocity_field(p - ey).y +
                     velocity_field(p + ez).z - velocity_field(p - ez).z) /
                    (2 * h);
                worst_div = std::max(worst_div, std::abs(div));
                const Vec3 s = random_unit(gen);
                worst_tan = std::max(worst_tan, std::abs(dot(velocity_field(s), s)));
              }
              const bool ok = worst_div <= 1e-8 && worst_tan <= 1e-14;
              return {ok, "flux residual " + fmt(worst_robin) + ", transport residual " +
                              fmt(worst_pde) + ", divergence " + fmt(worst_div)};
            });

  std::error_code ec;
  std::filesystem::remove_all(conv_dir, ec);
  std::filesystem::remove_all(des_dir, ec);

  std::printf("%d/%d criteria passed\n", g_index - g_failures, g_index);
  return g_failures;
}
