#pragma once

// Inviscid base flows u0: exact steady Euler solutions in the reduced
// geometries (swirl U(r) e_theta, shear U(y) e_x) and a manufactured
// stagnation-point flow that exercises the stretching coefficient f.

#include <functional>
#include <string>
#include <vector>

#include "navslip/geometry.hpp"

namespace navslip {

/// Radial or wall-normal profile with its first two derivatives.
struct Profile1D {
  std::function<double(double)> value, d1, d2;

  static Profile1D polynomial(std::vector<double> coeffs);  // sum a_k q^k
  static Profile1D rigid(double omega);                     // omega * r
  static Profile1D vortex(double c);                        // c / r
};

struct BaseFlow {
  std::string tag;
  bool steady = true;
  std::function<Vec3(double, const Vec3&)> velocity;
  std::function<Mat3(double, const Vec3&)> gradient;  // d u_a / d x_b
  std::function<Vec3(double, const Vec3&)> vorticity;
  std::function<double(double, const Vec3&)> pressure;
  std::function<Vec3(double, const Vec3&)> pressure_gradient;
  /// f = u0.n / phi, continuous up to the wall.
  std::function<double(double, const Vec3&)> stretching;
  /// Tangential profile along the wall normal (swirl / shear families).
  Profile1D profile;
};

BaseFlow swirl_base_flow(Profile1D U, const GeometryDescriptor& g, std::string tag = "general_swirl");
BaseFlow channel_base_flow(Profile1D U, const GeometryDescriptor& g, std::string tag = "channel_shear");
/// u0 = (lambda x, -lambda y, 0), pi0 = -lambda^2 (x^2 + y^2) / 2 on the lower
/// channel wall. With wrong_pressure the pressure is dropped (negative control).
BaseFlow stagnation_base_flow(double lambda, bool wrong_pressure = false);

struct EulerFamily {
  std::string family = "rigid";
  double omega = 1.0;   // rigid
  double circulation = 1.0;  // vortex
  double lambda = 1.0;  // manufactured
};

/// Parses euler.family values: rigid, vortex, swirl_poly:<a0,a1,...>,
/// shear_poly:<a0,a1,...>, manufactured:<stagnation|stagnation_badp>.
BaseFlow make_base_flow(const EulerFamily& fam, const GeometryDescriptor& g);

/// max |d_t u + u.grad u + grad pi| + |div u| over the points.
double euler_residual(const BaseFlow& flow, const std::vector<Vec3>& points, double t = 0.0);

/// Boundary datum for the layer. g_raw = curl u0 x n; the layer solver
/// imposes d_z u^b = -g_raw at z = 0.
struct BoundaryDatum {
  Vec3 g_raw{0, 0, 0};
  double tau1 = 0.0, tau2 = 0.0;  // frame components of g_raw
  Vec3 neumann() const { return -1.0 * g_raw; }
};

BoundaryDatum boundary_data_g(const BaseFlow& flow, const GeometryDescriptor& g, Wall w,
                              double s = 0.0, double t = 0.0);

}  // namespace navslip
