#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "slabrt/dispersion.hpp"
#include "slabrt/forms.hpp"

namespace slabrt {

struct HistorySample {
  double t = 0.0;
  /// sqrt(w' J w).
  double amplitude = 0.0;
  /// 1/2 w' J w.
  double energy = 0.0;
  /// Energy-balance residual of the step that produced this sample.
  double balance_residual = 0.0;
};

/// One horizontal Fourier mode of the linearized problem with the pressure
/// eliminated. w is the vertical velocity and sigma the density perturbation,
/// both as interior node values of polynomials vanishing at y = 0, 1.
/// sigma is the L2 projection of the nodal density onto that space.
struct EvolveState {
  double xi = 0.0;
  double t = 0.0;
  double dt = 0.0;
  Eigen::VectorXd w;
  Eigen::VectorXd sigma;
  std::vector<HistorySample> history;
};

/// Crank-Nicolson for
///   J w' = -G w - g xi^2 M sigma
///   M sigma' = -R w
/// with J, G the form matrices, M the mass matrix and R = int rho' (.)(.).
/// The implicit matrix is factored once.
class LinearizedEvolver {
 public:
  /// Throws InvalidInput for dt <= 0 and SingularStep when the implicit
  /// matrix is numerically singular.
  LinearizedEvolver(const FormSet& forms, const SlabConfig& config, double dt);

  double dt() const noexcept { return dt_; }
  double xi() const noexcept { return forms_.xi; }
  int dimension() const noexcept { return forms_.dimension(); }

  EvolveState step(const EvolveState& state) const;

  /// Advances to t_end, appending a sample every sample_every steps and at
  /// the final step. Throws InvalidInput if the state becomes non-finite.
  void run(EvolveState& state, double t_end, int sample_every = 10) const;

  double kinetic_energy(const EvolveState& state) const;
  double amplitude(const EvolveState& state) const;

  /// Kinetic plus potential energy 1/2 g xi^2 (M sigma)' (-R)^-1 (M sigma).
  /// Only defined when -R is positive definite (rho' < 0, stable layering);
  /// CN then makes it non-increasing whenever G is positive semidefinite.
  std::optional<double> total_energy(const EvolveState& state) const;

  /// Residual of d/dt (1/2 w'Jw) = -w'Gw - g xi^2 w'M sigma over one step,
  /// with the right side averaged by the trapezoidal rule and divided by the
  /// size of the largest term. O(dt^2) for smooth solutions; 0 for zero data.
  double energy_balance_residual(const EvolveState& before, const EvolveState& after) const;

  HistorySample sample(const EvolveState& state, double balance_residual = 0.0) const;

 private:
  FormSet forms_;
  double coupling_ = 0.0;
  double dt_ = 0.0;
  Eigen::PartialPivLU<Eigen::MatrixXd> implicit_;
  Eigen::MatrixXd explicit_;
  std::optional<Eigen::LLT<Eigen::MatrixXd>> potential_;
};

EvolveState step(const EvolveState& state, const FormSet& forms, const SlabConfig& config);
double energy_balance_residual(const EvolveState& before, const EvolveState& after,
                               const FormSet& forms, const SlabConfig& config);

/// Least-squares slope of log(amplitude) against t over the final half of
/// the history. Needs at least 10 samples. With require_growth the window
/// must grow by at least a factor e (InsufficientGrowth otherwise); without
/// it decaying histories return their (negative) rate. Zero or non-finite
/// amplitudes always raise InsufficientGrowth.
double fit_growth_rate(const std::vector<HistorySample>& history, bool require_growth = true);

/// w = eps lambda psi, sigma = -eps P(rho' psi) with P the L2 projection.
EvolveState mode_initial_state(const ModeSolution& mode, const FormSet& forms, double epsilon,
                               double dt);

/// w = sum_m c_m sin(m pi y), m = 1..modes, c_m uniform in [-1, 1]/m from a
/// seeded mt19937_64, then scaled to amplitude 1. sigma = 0.
EvolveState random_initial_state(const FormSet& forms, const SpectralGrid& grid, double dt,
                                 std::uint64_t seed, int modes = 8);

}  // namespace slabrt
