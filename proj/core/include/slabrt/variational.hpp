#pragma once

#include <optional>

#include <Eigen/Dense>

#include "slabrt/forms.hpp"

namespace slabrt {

struct AlphaResult {
  double value = 0.0;
  /// Interior values of the minimizer, normalized to J(psi) = 1.
  Eigen::VectorXd minimizer;
};

/// The modified variational problem alpha(s) = inf_{J(psi)=1} sG(psi) - E2(psi)
/// for a fixed frequency.
///
/// J is factored once (J = L L^T). alpha(s) is then the smallest eigenvalue
/// of the symmetric matrix s L^-1 G L^-T - L^-1 E2 L^-T.
class ModifiedProblem {
 public:
  /// Throws EigensolveFailure if Jm is not positive definite.
  explicit ModifiedProblem(FormSet forms);

  const FormSet& forms() const noexcept { return forms_; }
  double xi() const noexcept { return forms_.xi; }

  AlphaResult alpha(double s) const;
  double alpha_value(double s) const;

  /// E(psi, s) = s G(psi) - E2(psi) for an interior vector.
  double energy(const Eigen::VectorXd& psi, double s) const;
  double dissipation(const Eigen::VectorXd& psi) const { return quadratic_value(forms_.Gm, psi); }
  double constraint(const Eigen::VectorXd& psi) const { return quadratic_value(forms_.Jm, psi); }

  /// Smallest eigenvalue of G against J; positive iff G is positive definite.
  double min_dissipation_ratio() const;

  /// Maps eigenvectors of the reduced problem back to interior values.
  Eigen::VectorXd unreduce(const Eigen::VectorXd& x) const;
  const Eigen::MatrixXd& reduced_dissipation() const noexcept { return reduced_g_; }
  const Eigen::MatrixXd& reduced_drive() const noexcept { return reduced_e2_; }

 private:
  FormSet forms_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::MatrixXd reduced_g_;
  Eigen::MatrixXd reduced_e2_;
};

/// Requires s > 0. Throws EigensolveFailure for an invalid (non-positive) density.
AlphaResult alpha(const FormSet& forms, double s);

/// The lower bound -g ||rho'/rho||_inf - s C0 ||1/rho||_inf.
double alpha_lower_bound(const DensityProfile& profile, const SlabConfig& config, double s);

/// 0 when k0, k1 <= 0; otherwise ((k0+k1) + sqrt(k0^2 + k1^2 - k0 k1)) / 6,
/// which reduces to k/2 when k0 = k1 = k.
double critical_viscosity_closed_form(const SlabConfig& config);

/// Largest value of (k1 psi'(1)^2 + k0 psi'(0)^2) / int |psi''|^2 over the
/// discrete space, clamped at 0. The numerator has rank two, so this is the
/// top eigenvalue of a 2x2 problem built from the curvature inverse.
double critical_viscosity_numerical(const FormAssembler& assembler);
double critical_viscosity_numerical(const DensityProfile& profile, const SlabConfig& config,
                                    const SpectralGrid& grid);

struct CriticalFrequency {
  double xi_c = 0.0;
  /// |h(xi_c^2) - xi_c^2|, 0 when the dissipation form is never negative.
  double residual = 0.0;
  int iterations = 0;
};

/// xi_c^2 is the fixed point of h(t) = max -E0 / (mu int (2|psi'|^2 + t psi^2)).
/// h decreases in t, so the fixed point is bisected on [0, h(0)].
/// Throws ConvergenceFailure after 200 steps.
CriticalFrequency critical_frequency(const FormAssembler& assembler);
double critical_frequency(const DensityProfile& profile, const SlabConfig& config,
                          const SpectralGrid& grid);

struct Band {
  double a = 0.0;
  double b = 10.0;

  bool contains(double xi) const noexcept {
    const double m = xi < 0.0 ? -xi : xi;
    return m > a && m < b;
  }
};

/// (xi_c, b) with b defaulting to max(4 xi_c, 10). Throws InvalidInput when b <= a.
Band admissible_band(double xi_c, std::optional<double> upper = std::nullopt);

struct UpperBoundConstants {
  double C1 = 0.0;
  double C2 = 0.0;
  /// Center and support width of the test bump psi~(y) = f(y - y0).
  double y0 = 0.0;
  double width = 0.0;
};

/// C1 and C2 with alpha(s) <= s C2 - C1 for every |xi| in (a, b).
///
/// The test function is f(r) = exp(1 - 1/(1 - (2r/w)^2)) on |r| < w/2 with
/// w = width_scale * min(y0, 1 - y0), interpolated on the grid. All integrals
/// use the discrete forms, so the bound also holds for the discrete alpha.
/// y0 maximizes rho'(y) min(y, 1-y) over the interior samples.
/// Throws NoRTPoint when rho' is nowhere positive; InvalidInput unless 0 < a < b.
UpperBoundConstants upper_bound_constants(const DensityProfile& profile,
                                          const FormAssembler& assembler, const Band& band,
                                          double width_scale = 1.0);
UpperBoundConstants upper_bound_constants(const DensityProfile& profile, const SlabConfig& config,
                                          const SpectralGrid& grid, const Band& band,
                                          double width_scale = 1.0);

struct FrakS {
  enum class Status {
    Bracketed,
    /// alpha(s) >= 0 already for vanishing s: no growing mode at this xi.
    Degenerate,
    /// alpha stays negative up to the search limit.
    NoSignChange,
  };
  double value = 0.0;
  Status status = Status::Bracketed;
  int iterations = 0;
};

/// inf { s : alpha(s) > 0 } by bisection on the sign of alpha. Uses s_lo_hint
/// (e.g. C1/C2 / 2) when it gives alpha < 0; doubles the upper end up to 1e6.
FrakS frak_s(const ModifiedProblem& problem, double s_lo_hint = 0.0);

struct CriticalNumbers {
  double mu_c = 0.0;
  double mu_c_numerical = 0.0;
  double xi_c = 0.0;
  double xi_c_residual = 0.0;
  double C0 = 0.0;
  std::optional<double> C1;
  std::optional<double> C2;
  /// Sub-band (a', b) on which C1 and C2 were evaluated; a' = xi_c unless
  /// xi_c = 0, in which case a' = min(1/L, b/2), the lowest lattice frequency.
  Band constants_band;
  std::optional<double> frak_s;
  double frak_s_xi = 0.0;
  Band band;
};

CriticalNumbers critical_numbers(const DensityProfile& profile, const SlabConfig& config,
                                 const SpectralGrid& grid,
                                 std::optional<double> band_upper = std::nullopt,
                                 std::optional<double> band_lower = std::nullopt);

}  // namespace slabrt
