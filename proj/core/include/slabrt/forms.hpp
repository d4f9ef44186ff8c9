#pragma once

#include <Eigen/Dense>

#include "slabrt/grid.hpp"
#include "slabrt/profile.hpp"

namespace slabrt {

/// Discrete quadratic forms for one frequency xi, acting on interior node
/// values (psi(0) = psi(1) = 0 is imposed by dropping the endpoints).
///
///   v'E0m v = int mu |psi''|^2 - k1 |psi'(1)|^2 - k0 |psi'(0)|^2
///   v'E1m v = mu int (2 |psi'|^2 + xi^2 psi^2)
///   Gm      = E0m + xi^2 E1m
///   v'E2m v = int g xi^2 rho' psi^2
///   v'Jm v  = int rho (xi^2 psi^2 + |psi'|^2)
struct FormSet {
  double xi = 0.0;
  Eigen::MatrixXd E0m;
  Eigen::MatrixXd E1m;
  Eigen::MatrixXd E2m;
  Eigen::MatrixXd Gm;
  Eigen::MatrixXd Jm;
  /// int psi^2 and int rho' psi^2; E2m = g xi^2 drho_mass.
  Eigen::MatrixXd mass;
  Eigen::MatrixXd drho_mass;
  /// psi'(0) = trace_d1_0 * v, psi'(1) = trace_d1_1 * v.
  Eigen::RowVectorXd trace_d1_0;
  Eigen::RowVectorXd trace_d1_1;

  int dimension() const noexcept { return static_cast<int>(Jm.rows()); }
};

/// Holds the xi-independent pieces so that a scan over frequencies only
/// pays for matrix additions.
///
/// Integrals are evaluated with Clenshaw-Curtis on a (2n+1)-node Lobatto
/// grid after interpolating psi, psi' and psi''. This integrates every
/// polynomial integrand exactly (up to the variable coefficient rho).
class FormAssembler {
 public:
  FormAssembler(const DensityProfile& profile, const SlabConfig& config, const SpectralGrid& grid);

  FormSet assemble(double xi) const;

  const SpectralGrid& grid() const noexcept { return grid_; }
  const SlabConfig& config() const noexcept { return config_; }

  const Eigen::MatrixXd& curvature() const noexcept { return curvature_; }  // int |psi''|^2
  const Eigen::MatrixXd& slope() const noexcept { return slope_; }          // int |psi'|^2
  const Eigen::MatrixXd& mass() const noexcept { return mass_; }            // int psi^2
  const Eigen::MatrixXd& rho_mass() const noexcept { return rho_mass_; }
  const Eigen::MatrixXd& rho_slope() const noexcept { return rho_slope_; }
  const Eigen::MatrixXd& drho_mass() const noexcept { return drho_mass_; }
  const Eigen::RowVectorXd& trace_d1_0() const noexcept { return trace0_; }
  const Eigen::RowVectorXd& trace_d1_1() const noexcept { return trace1_; }

  /// k1 t1't1 + k0 t0't0, the boundary slip numerator.
  Eigen::MatrixXd boundary_form() const;

 private:
  SpectralGrid grid_;
  SlabConfig config_;
  Eigen::MatrixXd curvature_, slope_, mass_, rho_mass_, rho_slope_, drho_mass_;
  Eigen::RowVectorXd trace0_, trace1_;
};

/// Throws ZeroFrequency for xi == 0.
FormSet assemble_forms(const DensityProfile& profile, const SlabConfig& config,
                       const SpectralGrid& grid, double xi);

/// max over [0,1] of |k0+k1| + ((k0+k1) y - k0)^2 / mu. The quadratic in y
/// peaks at an endpoint, so this is |k0+k1| + max(k0^2, k1^2) / mu.
double c0_constant(const SlabConfig& config);

inline double quadratic_value(const Eigen::MatrixXd& form, const Eigen::VectorXd& v) {
  return v.dot(form * v);
}

inline Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& a) { return 0.5 * (a + a.transpose()); }

}  // namespace slabrt
