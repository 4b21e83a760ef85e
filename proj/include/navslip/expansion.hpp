#pragma once

// Ansatz u_approx = u0 + sqrt(nu) chi u^b(phi/sqrt(nu)) + nu chi v(phi/sqrt(nu)),
// the remainder R = (u^nu - u_approx)/nu, its Leray decomposition and the
// boundary identities R satisfies.

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "navslip/layer.hpp"
#include "navslip/ns.hpp"

namespace navslip {

/// Raised when the layer profile lacks a time stamp the ansatz needs.
class AlignmentError : public Error {
 public:
  using Error::Error;
};

/// Cartesian vector of a reduced field sample at wall-normal coordinate q
/// (theta = 0 for the annulus, x = 0 for the channel).
Vec3 to_cartesian(const GeometryDescriptor& g, double normal, double tang1, double tang2);
/// Inverse of to_cartesian: (normal, tang1, tang2) components.
std::array<double, 3> from_cartesian(const GeometryDescriptor& g, const Vec3& v);
/// Cartesian point at wall-normal coordinate q.
Vec3 volume_point(const GeometryDescriptor& g, double q);

struct AnsatzBundle {
  double nu = 0.0;
  GeometryDescriptor geometry;
  VolumeGrid grid;
  std::vector<double> times;
  std::vector<VolumeField> u0, layer, corrector, u_approx;  // one per time
  bool regime_warning = false;
};

AnsatzBundle assemble_ansatz(const BaseFlow& flow, const LayerProfile& profile,
                             const GeometryDescriptor& g, double nu, const VolumeGrid& grid,
                             const std::vector<double>& times);

/// Values u^nu as VolumeFields, one per stored time.
std::vector<VolumeField> viscous_fields(const ViscousSolution& sol);

struct RemainderNorm {
  double t = 0.0;
  std::string norm;  // e.g. "lp:4", "h1"
  std::string part;  // "full", "P", "I-P"
  double value = 0.0;
};

struct RemainderField {
  double nu = 0.0;
  GeometryDescriptor geometry;
  VolumeGrid grid;
  std::vector<double> times;
  std::vector<VolumeField> R, PR, QR;  // QR = (I - P) R
  std::vector<RemainderNorm> norms;
  double interpolation_estimate = 0.0;  // estimated interpolation error in R (max norm)
  bool interpolation_flag = false;      // estimate above 1% of max |R|
};

/// `fields` are u^nu on bundle.grid at bundle.times; `profile` feeds the
/// interpolation guard.
RemainderField extract_remainder(const std::vector<VolumeField>& fields, const AnsatzBundle& bundle,
                                 const LayerProfile& profile,
                                 const std::vector<NormSpec>& norms = {});
RemainderField extract_remainder(const ViscousSolution& sol, const AnsatzBundle& bundle,
                                 const LayerProfile& profile,
                                 const std::vector<NormSpec>& norms = {});

struct LerayParts {
  VolumeField solenoidal, gradient;
  double residual = 0.0;  // max residual of the discrete Neumann problem
};

/// MAC discretisation: normal velocity on nodes, potential on cell centres.
LerayParts leray_project(const VolumeField& u, const GeometryDescriptor& g, const VolumeGrid& grid);

/// Max over stored times and walls of
///   |R.n + vbar(0)| and |curl R x n + nu^{-1/2} curl_x u^b x n + curl_x v x n|.
std::pair<double, double> remainder_bc_residual(const RemainderField& rem,
                                                const LayerProfile& profile);

/// Wall value of curl u x n for a reduced field (4-point one-sided stencil).
Vec3 wall_curl_cross_n(const GeometryDescriptor& g, const VolumeGrid& grid, const VolumeField& u,
                       Wall w);

}  // namespace navslip
