#pragma once

#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "slabrt/forms.hpp"
#include "slabrt/variational.hpp"

namespace slabrt {

struct ModeResiduals {
  /// Relative L2 residual of the fourth-order growth equation.
  double ode_res = 0.0;
  /// Natural boundary conditions at y = 0 and y = 1, scaled by max(1, ||psi''||_inf).
  double bc_res_0 = 0.0;
  double bc_res_1 = 0.0;
  /// max |xi phi + psi'|.
  double div_res = 0.0;
  /// |alpha(lambda) + lambda^2|.
  double fixed_point_res = 0.0;
  /// Relative L2 residuals of the horizontal and vertical momentum equations.
  double momentum_x_res = 0.0;
  double momentum_y_res = 0.0;
};

/// A growing normal mode: v1 = -i phi e^{i xi x}, v2 = psi e^{i xi x}, p = pi e^{i xi x}.
struct ModeSolution {
  double xi = 0.0;
  double lambda = 0.0;
  /// Interior values, J(psi) = 1.
  Eigen::VectorXd psi;
  /// Full-grid values (filled by reconstruct_mode).
  Eigen::VectorXd phi;
  Eigen::VectorXd pi;
  ModeResiduals residuals;
  int iterations = 0;
};

/// Solves s^2 + alpha(s) = 0 on (0, S) inside a sign bracket. Returns nullopt
/// (no growing mode) when alpha(0) >= 0, i.e. the buoyancy form E2 is never
/// positive. The returned mode has phi, pi and all residuals filled.
/// Throws ConvergenceFailure if the bracket cannot be closed.
std::optional<ModeSolution> growth_rate(const ModifiedProblem& problem,
                                        const DensityProfile& profile, const SlabConfig& config,
                                        const SpectralGrid& grid);
std::optional<ModeSolution> growth_rate(const DensityProfile& profile, const SlabConfig& config,
                                        const SpectralGrid& grid, double xi);

struct CompanionResult {
  double lambda = 0.0;
  /// Interior values of the eigenvector, J(psi) = 1.
  Eigen::VectorXd psi;
};

/// Largest real eigenvalue of lambda^2 J + lambda G - E2 = 0 through the
/// first companion form. Eigenvalues count as real when
/// |imag| <= 1e-8 (1 + |real|). Returns nullopt when none is positive.
std::optional<CompanionResult> companion_oracle(const FormSet& forms);

/// Fills phi = -psi'/xi and pi = -(lambda rho psi' + mu xi^2 psi' - mu psi''')/xi^2
/// along with the residual diagnostics.
ModeSolution reconstruct_mode(ModeSolution mode, const DensityProfile& profile,
                              const SlabConfig& config, const SpectralGrid& grid);

/// (r0, r1) for psi''(0) = -(k0/mu) psi'(0) and psi''(1) = (k1/mu) psi'(1).
std::pair<double, double> natural_bc_residual(const ModeSolution& mode, const SlabConfig& config,
                                              const SpectralGrid& grid);

/// Relative L2 residual of
///   lambda^2 (xi^2 rho psi - (rho psi')') + lambda mu (psi'''' - 2 xi^2 psi'' + xi^4 psi)
///     - g xi^2 rho' psi
/// for interior values psi.
double growth_equation_residual(const Eigen::VectorXd& psi, double lambda, double xi,
                                const DensityProfile& profile, const SlabConfig& config,
                                const SpectralGrid& grid);

/// g ||rho'/rho|| + lambda C0 ||1/rho|| + 1, which bounds lambda^2 from above.
double growth_rate_bound(const DensityProfile& profile, const SlabConfig& config, double lambda);

struct DispersionSample {
  double xi = 0.0;
  std::optional<double> lambda;
  double alpha_residual = 0.0;
  int iterations = 0;
};

struct DispersionResult {
  /// Uniform samples in (a, b) plus lattice points, mirrored to xi < 0, sorted by
  /// xi without duplicates.
  std::vector<DispersionSample> samples;
  /// Lattice frequencies n/L with |xi| in (a, b), positive side only, ascending.
  std::vector<DispersionSample> lattice;
  std::optional<double> Lambda;
  /// Taken equal to Lambda (the lattice argmax).
  std::optional<double> LambdaStar;
  std::optional<double> xi_star;
  Band band;
};

/// Lattice frequencies m/L strictly inside (a, b). Throws EmptyBand if none.
std::vector<double> lattice_frequencies(const Band& band, double L);

/// Throws InvalidInput unless 0 <= a < b and n_samples >= 2; EmptyBand when
/// no lattice frequency lies in the band.
DispersionResult scan_band(const DensityProfile& profile, const SlabConfig& config,
                           const SpectralGrid& grid, const Band& band, int n_samples);

/// Real growing solution at t = 0 on the tensor grid x_grid x nodes:
///   varrho = -2 rho' psi cos(xi x)
///   u      = 2 Lambda* (phi sin(xi x), psi cos(xi x))
///   q      = 2 pi cos(xi x)
/// Matrices are indexed (x index, y index).
struct RealModeField {
  Eigen::VectorXd x;
  Eigen::VectorXd y;
  Eigen::MatrixXd varrho;
  Eigen::MatrixXd u1;
  Eigen::MatrixXd u2;
  Eigen::MatrixXd q;
};

RealModeField real_fields(const ModeSolution& mode, double lambda_star,
                          const Eigen::VectorXd& x_grid, const DensityProfile& profile,
                          const SpectralGrid& grid);

/// The two published forms of the escape time:
///   A: ln(2 eps / (m0 delta)) / Lambda
///   B: ln(2 eps0 / delta) / Lambda*   (m0 is ignored)
enum class EscapeVariant { A, B };

/// Throws NonPositiveHorizon when the logarithm's argument is <= 1,
/// InvalidInput for non-positive inputs.
double escape_time(double lambda, double epsilon, double m0, double delta, EscapeVariant variant);

}  // namespace slabrt
