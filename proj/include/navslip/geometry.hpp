#pragma once

// Domain backends: a flat channel 0 < y < H (periodic in x and z) and the gap
// r1 < r < r2 between two concentric cylinders (periodic in theta and z).
// Points are Cartesian (x, y, z); the cylinder axis is the z axis.

#include <string>
#include <vector>

#include "navslip/vec3.hpp"

namespace navslip {

enum class GeometryKind { FlatChannel, AnnulusGap };

std::string to_string(GeometryKind k);
GeometryKind geometry_kind_from_string(const std::string& s);

struct GeometryDescriptor {
  GeometryKind kind = GeometryKind::AnnulusGap;
  double h = 1.0;    // channel gap height
  double r1 = 1.0;   // annulus inner radius
  double r2 = 2.0;   // annulus outer radius
  double eta = 0.45; // collar width
  double collar_ratio = 1.05;  // geometric stretching of collar grids

  static GeometryDescriptor channel(double h, double eta);
  static GeometryDescriptor annulus(double r1, double r2, double eta);

  /// Throws ConfigError on a degenerate domain or overlapping collars.
  void validate() const;

  double lower_wall() const { return kind == GeometryKind::FlatChannel ? 0.0 : r1; }
  double upper_wall() const { return kind == GeometryKind::FlatChannel ? h : r2; }
  double gap() const { return upper_wall() - lower_wall(); }
  /// Volume measure per unit wall-normal length: 2*pi*r (annulus, per unit
  /// axial length) or 1 (channel, per unit wall area).
  double measure(double q) const;
  /// Wall-normal coordinate (r or y) of a Cartesian point.
  double normal_coordinate(const Vec3& p) const;
};

enum class Wall { Lower, Upper };  // inner/outer for the annulus

inline constexpr Wall kWalls[] = {Wall::Lower, Wall::Upper};
std::string to_string(Wall w);

double signed_distance(const GeometryDescriptor& g, const Vec3& p);
Vec3 normal_field(const GeometryDescriptor& g, const Vec3& p);
double laplacian_phi(const GeometryDescriptor& g, const Vec3& p);

/// Distance from a wall-normal coordinate to the given wall.
double wall_distance(const GeometryDescriptor& g, Wall w, double q);

/// Local frame at a wall point. The slow coordinate s is arc length along
/// tau1 (theta direction for the annulus, x for the channel).
struct WallFrame {
  Vec3 point, n, tau1, tau2;
  Mat3 grad_tau1, grad_tau2, grad_n;  // Jacobians of the extended frame fields
  double wall_coord = 0.0;            // r_w or y_w
  double slow_measure = 1.0;          // wall area per unit slow length (2*pi*r_w or 1)
};

WallFrame wall_frame(const GeometryDescriptor& g, Wall w, double s = 0.0);
/// The extended frame (n = grad phi, tau1, tau2) at distance phi from the
/// wall, over the wall point with slow coordinate s. wall_coord then holds
/// the r or y of that interior point.
WallFrame frame_at(const GeometryDescriptor& g, Wall w, double phi, double s = 0.0);
/// Cartesian point at distance phi from the wall along the inward normal.
Vec3 collar_point(const GeometryDescriptor& g, Wall w, double phi, double s = 0.0);

struct CollarChart {
  Wall wall = Wall::Lower;
  std::vector<double> s_grid{0.0};
  std::vector<double> phi;      // 0 at the wall, eta at the collar edge
  std::vector<double> coord;    // r or y of each sample
  std::vector<Vec3> normal;
  std::vector<double> lap_phi;
};

CollarChart build_collar(const GeometryDescriptor& g, Wall w, int n_points);

/// Nodes across the whole gap with trapezoid volume weights.
struct VolumeGrid {
  std::vector<double> q;        // r or y, strictly increasing, walls included
  std::vector<double> weight;   // trapezoid width times measure(q)
};

VolumeGrid make_volume_grid(const GeometryDescriptor& g, std::vector<double> nodes);
/// Geometrically clustered collars on both walls joined by a uniform middle.
VolumeGrid clustered_volume_grid(const GeometryDescriptor& g, int collar_points);

/// Smooth collar cutoff: 1 for phi <= eta/2, 0 for phi >= eta, C^2 quintic blend.
double collar_cutoff(double phi, double eta);

}  // namespace navslip
