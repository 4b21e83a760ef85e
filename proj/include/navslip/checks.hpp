#pragma once

// Executable invariants: each check runs a small computation against an
// independent oracle and reports pass/fail with the measured numbers.

#include <string>
#include <vector>

#include "navslip/config.hpp"

namespace navslip {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

/// Errors on a refinement sequence and the observed orders between levels.
struct OrderStudy {
  std::vector<double> step;   // h or dt, halved per level
  std::vector<double> error;
  std::vector<double> orders;
  double min_order() const;
};

CheckResult check_geometry(const GeometryDescriptor& g);
CheckResult check_kernels();
CheckResult check_projector(const GeometryDescriptor& g);
CheckResult check_energy_identity(const GeometryDescriptor& g);
/// u^b_theta(t, 0) on the rigid-rotation annulus against 2 g sqrt(t/pi).
CheckResult check_erfc_oracle(double* rel_error = nullptr);
/// ||e^{-z}(phi/sqrt(nu))||_p ~ nu^{1/(2p)} for p = 2, 4, 6.
CheckResult check_layer_scaling();
CheckResult check_hardy(const GeometryDescriptor& g);
CheckResult check_gronwall(int cases = 100);
/// Wall residuals of the viscous solver and of the remainder identities under refinement.
CheckResult check_bc_orders();
/// Base flow of the preset solves Euler and its wall data are consistent.
CheckResult check_preset_chain(const StudyConfig& cfg);

std::vector<CheckResult> run_invariant_suite(const StudyConfig& cfg);

/// Stagnation-point flow with an exact forced layer profile.
OrderStudy layer_manufactured_space(CouplingMode mode);
OrderStudy layer_manufactured_time(CouplingMode mode);
/// Decaying eigenmodes: cosine (channel) or J1/Y1 combination (annulus).
OrderStudy ns_eigenmode_space(GeometryKind kind);
OrderStudy ns_eigenmode_time(GeometryKind kind);

/// Smallest k > 0 with J0(k r1) Y0(k r2) = J0(k r2) Y0(k r1).
double annulus_slip_wavenumber(double r1, double r2);

}  // namespace navslip
