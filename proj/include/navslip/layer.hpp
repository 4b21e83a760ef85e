#pragma once

// Boundary-layer profile u^b(t, s, z) on each wall: a parabolic problem on
// the half line z >= 0 with the Neumann datum d_z u^b = -curl u0 x n at z = 0,
// plus the pressure corrector q and the normal corrector v.

#include <array>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "navslip/euler.hpp"
#include "navslip/spaces.hpp"

namespace navslip {

/// How the zeroth-order coupling (u0.grad u^b + u^b.grad u0) enters the
/// tangential equation: literally "x n", or projected with (I - n n^T).
enum class CouplingMode { Cross, Projection };

struct LayerConfig {
  int nz = 512;
  double zmax = FastGrid::kAutoZmax;
  double map_length = 2.0;
  double dt = 1e-4;
  double t_end = 0.5;
  int store_every = 0;               // 0: store only t = 0 and output_times / t_end
  std::vector<double> output_times;  // must be multiples of dt
  CouplingMode mode = CouplingMode::Cross;
  std::vector<Wall> walls{Wall::Lower, Wall::Upper};
  std::vector<double> s_samples{0.0};  // slow coordinate (arc length along tau1)
  bool startup_smoothing = true;       // first two steps as four backward-Euler half steps
  int jobs = 1;
};

using Tangential = std::array<double, 2>;

/// Extra source appended to the tangential equation and an optional override
/// of the Neumann datum d_z u^b(t, s, 0); used by manufactured solutions.
struct LayerForcing {
  std::function<Tangential(double t, double s, double z)> source;
  std::function<Tangential(double t, double s)> neumann;
};

/// Base-flow data frozen at one wall sample.
struct WallSample {
  WallFrame frame;
  Vec3 u0{0, 0, 0};
  Mat3 grad_u0 = zero_mat3();
  double f = 0.0;
  BoundaryDatum g;
};

struct WallLayer {
  Wall wall = Wall::Lower;
  std::vector<WallSample> samples;
  std::vector<double> times;
  std::vector<ProfileField> ub;  // 2 components (tau1, tau2)
  std::vector<ProfileField> q;   // scalar, decays at zmax
  std::vector<ProfileField> v;   // scalar vbar, v = vbar n
  std::vector<double> f_used;
  std::vector<Tangential> g_used;  // (tau1, tau2) components of curl u0 x n
};

struct LayerProfile {
  FastGrid grid;
  CouplingMode mode = CouplingMode::Cross;
  double dt = 0.0;
  std::vector<WallLayer> walls;

  const WallLayer& wall(Wall w) const;
  /// Index of the stored stamp equal to t (relative tolerance 1e-9);
  /// throws Error when absent.
  std::size_t time_index(double t) const;
};

std::vector<WallSample> sample_wall(const BaseFlow& flow, const GeometryDescriptor& g, Wall w,
                                    const std::vector<double>& s_samples, double t = 0.0);

LayerProfile solve_layer(const BaseFlow& flow, const GeometryDescriptor& g, const LayerConfig& cfg,
                         const std::optional<LayerForcing>& forcing = std::nullopt);

/// The coupling vector C = u0.grad_x u^b + u^b.grad u0 (Cartesian) at sample
/// `is`, fast node j, for tangential components b and slow derivatives db_ds.
Vec3 coupling_vector(const WallSample& smp, const Tangential& b, const Tangential& db_ds);
/// Tangential components of C x n (Cross) or (I - n n^T) C (Projection).
Tangential project_coupling(const WallSample& smp, const Vec3& c, CouplingMode mode);

/// q(t,s,z) = -int_z^zmax (C . n) dz' for one stored snapshot.
ProfileField pressure_corrector_q(const ProfileField& ub, const std::vector<WallSample>& samples);
/// vbar(t,s,z) = int_z^zmax div_x u^b dz', so that div_x u^b + d_z v.n = 0.
ProfileField velocity_corrector_v(const ProfileField& ub, const std::vector<WallSample>& samples);
/// div_x u^b on the profile grid.
ProfileField slow_divergence(const ProfileField& ub, const std::vector<WallSample>& samples);
/// max over intervals of |(vbar_{j+1}-vbar_j)/dz + (div_j + div_{j+1})/2|.
double compatibility_residual(const ProfileField& ub, const ProfileField& vbar,
                              const std::vector<WallSample>& samples);

/// grad_x q (3 Cartesian components) with u^b frozen: slow part by
/// differences across samples, normal part by differencing the integrand
/// coefficients of the base flow at offset points along n.
ProfileField grad_q_x(const ProfileField& ub, const std::vector<WallSample>& samples,
                      const BaseFlow& flow, const GeometryDescriptor& g, Wall w, double t = 0.0);

struct NormSeries {
  AnisotropicIndex idx;
  std::vector<double> values;  // one per stored time
  bool growth_flag = false;    // some value exceeds 10x the first non-zero stored value
};

std::vector<NormSeries> layer_norm_monitor(const WallLayer& layer,
                                           const std::vector<AnisotropicIndex>& idx);

/// Columnar snapshot text: one block per wall, rows "t s z ub1 ub2 q v".
void write_layer_snapshots(std::ostream& os, const LayerProfile& profile);

}  // namespace navslip
