#pragma once

#include <functional>

#include "tracefem/cutgeom.hpp"

namespace tracefem {

/// Physical coefficients of the coupled bulk/surface transport problem:
/// two bulk diffusivities, a surface diffusivity, adsorption/desorption rate
/// pairs for both subdomains and the equilibrium constant K of the surface
/// exchange. All rates and diffusivities must be positive except k1d/k2d
/// which may be zero (pure adsorption).
struct ProblemParams {
  double nu1 = 0.5;
  double nu2 = 1.0;
  double nu_gamma = 1.0;
  double k1a = 0.5;
  double k2a = 2.0;
  double k1d = 2.0;
  double k2d = 1.0;
  double K = 1.0;

  void validate() const;  // throws std::invalid_argument on violations
};

/// Divergence-free rotational velocity (z, 0, -x)/10; tangential to every
/// sphere centered at the origin.
Vec3 velocity_field(const Vec3& p);

/// Coefficients of the symmetrized system obtained by scaling the bulk
/// unknowns by their adsorption rates and the surface unknown by their sum.
/// The right-hand sides are unchanged by this rescaling.
struct TransformedParams {
  double nu1t = 0.0;     // nu1 / k1a
  double nu2t = 0.0;     // nu2 / k2a
  double nuGt = 0.0;     // nu_gamma / (k1a + k2a)
  double q1 = 0.0;       // k1d / (k1a + k2a)
  double q2 = 0.0;       // k2d / (k1a + k2a)
  double r = 0.0;        // k2a / k1a (diagnostic ratio)
  double K = 0.0;        // carried through
  double inv_k1a = 0.0;  // bulk 1 velocity scaling
  double inv_k2a = 0.0;  // bulk 2 velocity scaling
  double inv_sum = 0.0;  // surface velocity scaling, also 1/S
};

TransformedParams transform(const ProblemParams& p);

/// Closed-form reference solution used for convergence studies:
///   v  = 3 x^2 y - y^3                (degree 3 harmonic polynomial)
///   u2 = e^{1 - |x|^2} v
///   u1 = 2 u2
/// On the unit sphere v is an eigenfunction of the surface Laplacian with
/// eigenvalue -12, and u1, u2 satisfy Robin-type relations n . grad u_i =
/// c_i v there, which makes all source terms available in closed form.
struct ManufacturedSolution {
  static double surface(const Vec3& p);       // v
  static Vec3 surface_grad(const Vec3& p);    // full (ambient) gradient of v
  static double bulk(int i, const Vec3& p);   // u_i, i in {1,2}
  static Vec3 bulk_grad(int i, const Vec3& p);
};

/// Right-hand sides of the coupled system, in physical variables.
struct Sources {
  std::function<double(const Vec3&)> f1;
  std::function<double(const Vec3&)> f2;
  std::function<double(const Vec3&)> g;
};

/// Closed-form sources that make ManufacturedSolution solve the problem with
/// the given coefficients.
Sources manufactured_sources(const ProblemParams& p);

/// Compatibility functional K * (int_1 f1 + int_2 f2) + int_Gamma g over the
/// discrete geometry. Zero (up to quadrature and interface approximation
/// error) for a mass-conserving closed system; diagnostic only.
double check_consistency(const CutGeometry& geom, const Sources& src, double K);

}  // namespace tracefem
