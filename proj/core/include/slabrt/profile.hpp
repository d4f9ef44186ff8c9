#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "slabrt/grid.hpp"

namespace slabrt {

enum class ProfileKind { AnalyticPreset, Tabulated };

/// Steady density rho(y) on [0, 1] together with its derivative.
///
/// Presets evaluate closed forms. Tabulated profiles use the global
/// barycentric polynomial through the data points, and the derivative is
/// the exact derivative of that polynomial.
///
/// inf/sup statistics are cached on construction from the 128-node Lobatto
/// grid plus 1280 uniform points.
class DensityProfile {
 public:
  static DensityProfile exp();
  static DensityProfile linear_up();
  static DensityProfile linear_down();
  static DensityProfile tanh_layer(double center = 0.5, double width = 0.1);
  static DensityProfile constant(double value = 1.0);

  /// "exp", "linear-up", "linear-down", "tanh-layer" or "constant".
  static DensityProfile preset(std::string_view name, double center = 0.5, double width = 0.1);

  /// Data must be finite, strictly increasing in y, cover [0, 1] and have at
  /// least 8 points. Density signs are checked by validate_profile.
  static DensityProfile tabulated(std::vector<double> y, std::vector<double> rho);

  /// Two-column CSV with header "y,rho".
  static DensityProfile from_csv(const std::filesystem::path& path);

  double rho(double y) const { return rho_(y); }
  double drho(double y) const { return drho_(y); }
  Eigen::VectorXd rho(const Eigen::VectorXd& y) const;
  Eigen::VectorXd drho(const Eigen::VectorXd& y) const;

  ProfileKind kind() const noexcept { return kind_; }
  const std::string& name() const noexcept { return name_; }

  double inf_rho() const noexcept { return inf_rho_; }
  double sup_rho() const noexcept { return sup_rho_; }
  /// Location of the sampled minimum of rho.
  double argmin_rho() const noexcept { return argmin_rho_; }
  /// Sampled sup |rho'/rho|, the gravity factor in the lower bound of alpha.
  double sup_drho_over_rho() const noexcept { return sup_drho_over_rho_; }
  /// Sampled sup 1/rho (infinite when rho reaches zero).
  double sup_inv_rho() const noexcept { return sup_inv_rho_; }

  /// For tabulated input: the first data point with rho <= 0, if any.
  std::optional<double> first_nonpositive_datum() const noexcept { return bad_datum_; }

  /// The sample set used for the cached statistics.
  static const std::vector<double>& sample_points();

 private:
  DensityProfile(ProfileKind kind, std::string name, std::function<double(double)> rho,
                 std::function<double(double)> drho);
  void compute_statistics();

  ProfileKind kind_;
  std::string name_;
  std::function<double(double)> rho_;
  std::function<double(double)> drho_;
  double inf_rho_ = 0.0;
  double sup_rho_ = 0.0;
  double argmin_rho_ = 0.0;
  double sup_drho_over_rho_ = 0.0;
  double sup_inv_rho_ = 0.0;
  std::optional<double> bad_datum_;
};

/// Physical parameters of the slab 2*pi*L T x (0, 1).
struct SlabConfig {
  double mu = 0.01;
  double g = 1.0;
  double k0 = 0.0;
  double k1 = 0.0;
  double L = 1.0;

  /// Throws InvalidInput unless mu > 0, L > 0, g >= 0 and all finite.
  void validate() const;
};

struct ValidationReport {
  bool positive = false;
  bool rt_condition = false;
  std::optional<double> y0_witness;
  double inf_rho = 0.0;
  double sup_rho = 0.0;
};

/// Throws NonPositiveDensity (naming the offending y) if inf rho <= 0.
/// rt_condition holds iff rho' > 0 at some sampled point; the witness is the
/// argmax of rho' over interior samples, ties resolved toward y = 1/2.
ValidationReport validate_profile(const DensityProfile& profile);

/// p(y) = -g int_0^y rho, evaluated on the grid and interpolated between
/// nodes.
class HydrostaticPressure {
 public:
  HydrostaticPressure(const SpectralGrid& grid, Eigen::VectorXd nodal);

  double operator()(double y) const;
  const Eigen::VectorXd& nodal() const noexcept { return nodal_; }

 private:
  SpectralGrid grid_;
  Eigen::VectorXd nodal_;
};

HydrostaticPressure hydrostatic_pressure(const DensityProfile& profile, double g,
                                         const SpectralGrid& grid);

}  // namespace slabrt
