#pragma once

// Reduced viscous solvers with the slip condition u.n = 0, curl u x n = 0:
//   annulus:  d_t u = nu d_r[(1/r) d_r(r u)],  omega = (1/r) d_r(r u) = 0 at r1, r2
//   channel:  d_t u = nu d_yy u,               d_y u = 0 at y = 0, H
// Crank-Nicolson in time on a smoothly wall-clustered grid.

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "navslip/geometry.hpp"

namespace navslip {

struct NsConfig {
  int n = 2048;            // nodes including both walls
  double dt = 1e-4;
  double t_end = 0.5;
  int store_every = 0;     // 0: store t = 0, output_times and t_end only
  std::vector<double> output_times;
  double stretch = 0.9;    // 0 = uniform; wall spacing shrinks by (1 - stretch)
  bool startup_smoothing = true;
};

struct ViscousSolution {
  double nu = 0.0;
  GeometryDescriptor geometry;
  VolumeGrid grid;
  std::vector<double> times;
  std::vector<std::vector<double>> u;  // u_theta or u_x at grid nodes
  double dt = 0.0, t_end = 0.0;
  std::string scheme;

  std::size_t time_index(double t) const;
};

/// Node positions q(xi) = a + L (xi - stretch sin(2 pi xi) / (2 pi)).
std::vector<double> clustered_nodes(double a, double b, int n, double stretch);

ViscousSolution solve_ns_swirl(const GeometryDescriptor& g, const std::function<double(double)>& U0,
                               double nu, const NsConfig& cfg);
ViscousSolution solve_ns_channel(const GeometryDescriptor& g, const std::function<double(double)>& U0,
                                 double nu, const NsConfig& cfg);
/// Dispatches on the geometry kind.
ViscousSolution solve_ns(const GeometryDescriptor& g, const std::function<double(double)>& U0,
                         double nu, const NsConfig& cfg);

/// Kinetic energy 1/2 ||u||_2^2 (trapezoid, volume measure).
double kinetic_energy(const ViscousSolution& sol, const std::vector<double>& u);
/// ||curl u||_2^2 with the vorticity on the half points (midpoint rule).
double enstrophy(const ViscousSolution& sol, const std::vector<double>& u);
/// Wall vorticity from an independent 4-point one-sided stencil.
double wall_vorticity(const GeometryDescriptor& g, const std::vector<double>& q,
                      const std::vector<double>& u, Wall w);

/// Per stored interval |dE/dt + nu (Z_k + Z_{k+1})/2| / E_0.
std::vector<double> energy_identity_residual(const ViscousSolution& sol);
/// Per stored time, max over walls of |u.n| + |curl u x n|.
std::vector<double> bc_residual(const ViscousSolution& sol);

/// Columnar snapshot text "t s z u" with s = 0 and z the wall-normal coordinate.
void write_ns_snapshots(std::ostream& os, const ViscousSolution& sol);

/// Weights w_k with f'(x[0]) ~ sum w_k f(x[k]) (Lagrange, exact for degree < size).
std::vector<double> lagrange_derivative_weights(const std::vector<double>& x);

}  // namespace navslip
