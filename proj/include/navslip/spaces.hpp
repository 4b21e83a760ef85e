#pragma once

// Norm engine: anisotropic weighted norms of layer profiles, evaluation of
// layer profiles on the physical grid at z = phi/sqrt(nu), volume norms and
// the Hardy / local Gronwall inequalities as executable checks.

#include <limits>
#include <span>
#include <string>
#include <vector>

#include "navslip/error.hpp"
#include "navslip/geometry.hpp"

namespace navslip {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Mapped half-line grid z = -L log(1 - xi), xi uniform, z in [0, zmax].
struct FastGrid {
  std::vector<double> z;
  std::vector<double> weight;  // trapezoid
  double map_length = 2.0;

  /// Smallest zmax with exp(-zmax) < 1e-14, rounded up.
  static constexpr double kAutoZmax = 33.0;
  static FastGrid mapped(int nz, double zmax = kAutoZmax, double map_length = 2.0);
  std::size_t size() const noexcept { return z.size(); }
  double zmax() const { return z.back(); }
  double dz_min() const { return z[1] - z[0]; }
};

/// Values u(s, z) with `components` entries per node, stored [s][comp][z].
/// Components are tangential-frame coordinates (tau1, tau2) for vector
/// profiles, or a single scalar.
struct ProfileField {
  std::vector<double> s{0.0};
  std::vector<double> s_weight{1.0};  // slow quadrature, includes the wall measure
  FastGrid grid;
  int components = 1;
  std::vector<double> values;

  ProfileField() = default;
  ProfileField(std::vector<double> s_, std::vector<double> s_weight_, FastGrid grid_, int comps);

  std::size_t ns() const noexcept { return s.size(); }
  std::size_t nz() const noexcept { return grid.size(); }
  double& at(std::size_t is, int c, std::size_t j) { return values[(is * components + c) * nz() + j]; }
  double at(std::size_t is, int c, std::size_t j) const {
    return values[(is * components + c) * nz() + j];
  }
  std::span<double> line(std::size_t is, int c) { return {&at(is, c, 0), nz()}; }
  std::span<const double> line(std::size_t is, int c) const {
    return {values.data() + (is * components + c) * nz(), nz()};
  }
};

struct AnisotropicIndex {
  int k = 0, m = 0, l = 0;
  double p = 2.0;
};

/// Quantity named by a norm string: "l2", "linf", "h1", "lp:<p>",
/// "aniso:k,m,l,p" (p may be "inf").
struct NormSpec {
  enum class Kind { Lp, H1, Aniso } kind = Kind::Lp;
  double p = 2.0;
  AnisotropicIndex idx;
  std::string text;
};

NormSpec parse_norm(const std::string& text);

double weighted_norm(const ProfileField& field, const AnisotropicIndex& idx);

/// Nonuniform three-point first derivative (one-sided at the ends).
std::vector<double> derivative(std::span<const double> x, std::span<const double> f);

/// Piecewise-cubic (4-point Lagrange) interpolation on a nonuniform grid;
/// clamps to the end values outside [x0, xn].
double cubic_interpolate(std::span<const double> x, std::span<const double> f, double at);

/// Axisymmetric / parallel vector field on a VolumeGrid. For the annulus the
/// components are (u_r, u_theta, u_z); for the channel (u_y, u_x, u_z).
struct VolumeField {
  std::vector<double> normal, tang1, tang2;

  explicit VolumeField(std::size_t n = 0) : normal(n, 0.0), tang1(n, 0.0), tang2(n, 0.0) {}
  std::size_t size() const noexcept { return tang1.size(); }
  std::vector<double> magnitude() const;
};

double volume_lp_norm(const VolumeGrid& grid, const VolumeField& u, double p);
/// Full H^1 norm (||u||_2^2 + ||grad u||_2^2)^{1/2}, including the 1/r
/// hoop terms of the annulus.
double volume_h1_norm(const GeometryDescriptor& g, const VolumeGrid& grid, const VolumeField& u);
double volume_norm(const GeometryDescriptor& g, const VolumeGrid& grid, const VolumeField& u,
                   const NormSpec& which);

struct LayerEvaluation {
  std::vector<std::vector<double>> components;  // one volume array per profile component
  double lp_norm = 0.0;
  bool regime_warning = false;  // sqrt(nu) > eta/4
};

/// x -> cutoff(phi) * U(s_index, phi(x)/sqrt(nu)) on the grid nodes, for the
/// collar of `wall`. Nodes outside the collar get zero.
LayerEvaluation boundary_layer_eval(const ProfileField& field, const GeometryDescriptor& g,
                                    Wall wall, const VolumeGrid& grid, double nu, double p,
                                    std::size_t s_index = 0);

struct ScalingCheck {
  double exponent = 0.0;   // fitted slope of log||U(x, phi/sqrt(nu))||_p vs log nu
  double r2 = 0.0;
  std::vector<double> norms;
  std::vector<double> ratios;  // ||U(x, phi/sqrt(nu))||_p / ||U||_{1,m,1,p}
  double max_ratio = 0.0;
};

ScalingCheck scaling_exponent_check(const ProfileField& field, const GeometryDescriptor& g,
                                    Wall wall, const VolumeGrid& grid,
                                    const std::vector<double>& nu_list, double p, int m = 1);

/// int |u|^p / d^(p-beta) divided by int |u'|^p d^beta. `u` must vanish on the
/// two outermost nodes at each wall.
double hardy_ratio(const GeometryDescriptor& g, const VolumeGrid& grid, std::span<const double> u,
                   double p, double beta);

class BlowUpHorizonError : public Error {
 public:
  BlowUpHorizonError(const std::string& what, double critical_time)
      : Error(what), critical_time_(critical_time) {}
  double critical_time() const noexcept { return critical_time_; }

 private:
  double critical_time_;
};

/// Closed-form bound H + H((1 - a c0 H^a t)^(-1/a) - 1), H = y0 + int_0^t h.
/// h is sampled at `times` (starting at 0) and integrated by the trapezoid rule.
double gronwall_local_bound(double y0, std::span<const double> times, std::span<const double> h,
                            double c0, double alpha, double t);

}  // namespace navslip
