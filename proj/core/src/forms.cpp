#include "slabrt/forms.hpp"

#include <algorithm>
#include <cmath>

#include "slabrt/errors.hpp"

namespace slabrt {

namespace {

Eigen::MatrixXd weighted_gram(const Eigen::MatrixXd& x, const Eigen::VectorXd& weights) {
  return symmetrized(x.transpose() * weights.asDiagonal() * x);
}

}  // namespace

FormAssembler::FormAssembler(const DensityProfile& profile, const SlabConfig& config,
                             const SpectralGrid& grid)
    : grid_(grid), config_(config) {
  config_.validate();
  const int n = grid.size();
  const SpectralGrid fine(2 * n + 1);
  const Eigen::MatrixXd interp = grid.interpolation_matrix(fine.nodes());
  const Eigen::MatrixXd embed = grid.interior_embedding();

  const Eigen::MatrixXd d1p = grid.d1() * embed;
  const Eigen::MatrixXd x0 = interp * embed;
  const Eigen::MatrixXd x1 = interp * d1p;
  const Eigen::MatrixXd x2 = interp * (grid.d2() * embed);

  const Eigen::VectorXd& w = fine.weights();
  const Eigen::VectorXd rho = profile.rho(fine.nodes());
  const Eigen::VectorXd drho = profile.drho(fine.nodes());

  curvature_ = weighted_gram(x2, w);
  slope_ = weighted_gram(x1, w);
  mass_ = weighted_gram(x0, w);
  rho_mass_ = weighted_gram(x0, w.cwiseProduct(rho));
  rho_slope_ = weighted_gram(x1, w.cwiseProduct(rho));
  drho_mass_ = weighted_gram(x0, w.cwiseProduct(drho));
  trace0_ = d1p.row(0);
  trace1_ = d1p.row(n - 1);
}

Eigen::MatrixXd FormAssembler::boundary_form() const {
  return config_.k1 * trace1_.transpose() * trace1_ + config_.k0 * trace0_.transpose() * trace0_;
}

FormSet FormAssembler::assemble(double xi) const {
  if (xi == 0.0) throw Error(ErrorCode::ZeroFrequency, "forms need a nonzero frequency");
  const double xi2 = xi * xi;
  const double mu = config_.mu;

  FormSet fs;
  fs.xi = xi;
  fs.E0m = symmetrized(mu * curvature_ - boundary_form());
  fs.E1m = symmetrized(mu * (2.0 * slope_ + xi2 * mass_));
  fs.Gm = fs.E0m + xi2 * fs.E1m;
  fs.E2m = (config_.g * xi2) * drho_mass_;
  fs.Jm = symmetrized(xi2 * rho_mass_ + rho_slope_);
  fs.mass = mass_;
  fs.drho_mass = drho_mass_;
  fs.trace_d1_0 = trace0_;
  fs.trace_d1_1 = trace1_;
  return fs;
}

FormSet assemble_forms(const DensityProfile& profile, const SlabConfig& config,
                       const SpectralGrid& grid, double xi) {
  if (xi == 0.0) throw Error(ErrorCode::ZeroFrequency, "forms need a nonzero frequency");
  return FormAssembler(profile, config, grid).assemble(xi);
}

double c0_constant(const SlabConfig& config) {
  const double sum = config.k0 + config.k1;
  return std::abs(sum) + std::max(config.k0 * config.k0, config.k1 * config.k1) / config.mu;
}

}  // namespace slabrt
