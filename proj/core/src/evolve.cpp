#include "slabrt/evolve.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "slabrt/errors.hpp"

namespace slabrt {

LinearizedEvolver::LinearizedEvolver(const FormSet& forms, const SlabConfig& config, double dt)
    : forms_(forms), coupling_(config.g * forms.xi * forms.xi), dt_(dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorCode::InvalidInput, "dt must be positive");
  const Eigen::Index m = forms_.dimension();
  const double h = 0.5 * dt;
  Eigen::MatrixXd lhs(2 * m, 2 * m);
  lhs << forms_.Jm + h * forms_.Gm, h * coupling_ * forms_.mass, h * forms_.drho_mass, forms_.mass;
  explicit_.resize(2 * m, 2 * m);
  explicit_ << forms_.Jm - h * forms_.Gm, -h * coupling_ * forms_.mass, -h * forms_.drho_mass,
      forms_.mass;
  implicit_.compute(lhs);
  const double rcond = implicit_.rcond();
  if (!(rcond > 1e-14)) {
    throw Error(ErrorCode::SingularStep,
                "implicit step matrix is singular (rcond " + std::to_string(rcond) + ")");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(-forms_.drho_mass);
  if (llt.info() == Eigen::Success) potential_ = std::move(llt);
}

EvolveState LinearizedEvolver::step(const EvolveState& state) const {
  const Eigen::Index m = forms_.dimension();
  if (state.w.size() != m || state.sigma.size() != m) {
    throw Error(ErrorCode::LengthMismatch, "state does not match the form dimension");
  }
  Eigen::VectorXd x(2 * m);
  x << state.w, state.sigma;
  const Eigen::VectorXd next = implicit_.solve(explicit_ * x);
  EvolveState out;
  out.xi = state.xi;
  out.dt = dt_;
  out.t = state.t + dt_;
  out.w = next.head(m);
  out.sigma = next.tail(m);
  return out;
}

void LinearizedEvolver::run(EvolveState& state, double t_end, int sample_every) const {
  if (sample_every < 1) throw Error(ErrorCode::InvalidInput, "sample interval must be positive");
  if (state.history.empty()) state.history.push_back(sample(state));
  const auto steps = static_cast<long>(std::ceil((t_end - state.t) / dt_ - 1e-9));
  for (long i = 1; i <= steps; ++i) {
    EvolveState next = step(state);
    if (!next.w.allFinite() || !next.sigma.allFinite()) {
      throw Error(ErrorCode::InvalidInput, "state became non-finite at t = " + std::to_string(next.t));
    }
    if (i % sample_every == 0 || i == steps) {
      next.history = std::move(state.history);
      next.history.push_back(sample(next, energy_balance_residual(state, next)));
    } else {
      next.history = std::move(state.history);
    }
    state = std::move(next);
  }
}

double LinearizedEvolver::kinetic_energy(const EvolveState& state) const {
  return 0.5 * quadratic_value(forms_.Jm, state.w);
}

double LinearizedEvolver::amplitude(const EvolveState& state) const {
  return std::sqrt(std::max(0.0, quadratic_value(forms_.Jm, state.w)));
}

std::optional<double> LinearizedEvolver::total_energy(const EvolveState& state) const {
  if (!potential_) return std::nullopt;
  const Eigen::VectorXd tau = forms_.mass * state.sigma;
  const Eigen::VectorXd z = potential_->matrixL().solve(tau);
  return kinetic_energy(state) + 0.5 * coupling_ * z.squaredNorm();
}

double LinearizedEvolver::energy_balance_residual(const EvolveState& before,
                                                  const EvolveState& after) const {
  const double dt = after.t - before.t;
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidInput, "states are not consecutive");
  // Difference of squares in factored form avoids cancellation.
  const double rate =
      0.5 * (after.w - before.w).dot(forms_.Jm * (after.w + before.w)) / dt;
  const double dissipation =
      0.5 * (quadratic_value(forms_.Gm, before.w) + quadratic_value(forms_.Gm, after.w));
  const double work = 0.5 * coupling_ *
                      (before.w.dot(forms_.mass * before.sigma) +
                       after.w.dot(forms_.mass * after.sigma));
  const double scale = std::max({std::abs(rate), std::abs(dissipation), std::abs(work)});
  if (scale == 0.0) return 0.0;
  return std::abs(rate + dissipation + work) / scale;
}

HistorySample LinearizedEvolver::sample(const EvolveState& state, double balance_residual) const {
  HistorySample s;
  s.t = state.t;
  s.energy = kinetic_energy(state);
  s.amplitude = std::sqrt(2.0 * s.energy);
  s.balance_residual = balance_residual;
  return s;
}

EvolveState step(const EvolveState& state, const FormSet& forms, const SlabConfig& config) {
  return LinearizedEvolver(forms, config, state.dt).step(state);
}

double energy_balance_residual(const EvolveState& before, const EvolveState& after,
                               const FormSet& forms, const SlabConfig& config) {
  return LinearizedEvolver(forms, config, after.t - before.t)
      .energy_balance_residual(before, after);
}

double fit_growth_rate(const std::vector<HistorySample>& history, bool require_growth) {
  if (history.size() < 10) {
    throw Error(ErrorCode::InsufficientGrowth,
                "need at least 10 samples, got " + std::to_string(history.size()));
  }
  const std::size_t first = history.size() / 2;
  const std::size_t count = history.size() - first;
  double mt = 0.0, ml = 0.0;
  for (std::size_t i = first; i < history.size(); ++i) {
    const double a = history[i].amplitude;
    if (!(a > 0.0) || !std::isfinite(a)) {
      throw Error(ErrorCode::InsufficientGrowth, "amplitude vanishes or is not finite");
    }
    mt += history[i].t;
    ml += std::log(a);
  }
  mt /= static_cast<double>(count);
  ml /= static_cast<double>(count);
  double stt = 0.0, stl = 0.0;
  for (std::size_t i = first; i < history.size(); ++i) {
    const double dt = history[i].t - mt;
    stt += dt * dt;
    stl += dt * (std::log(history[i].amplitude) - ml);
  }
  if (!(stt > 0.0)) throw Error(ErrorCode::InsufficientGrowth, "history spans no time");

  if (require_growth) {
    const double ratio = history.back().amplitude / history[first].amplitude;
    if (!(ratio >= std::numbers::e)) {
      throw Error(ErrorCode::InsufficientGrowth,
                  "amplitude grew by " + std::to_string(ratio) + " < e over the fit window");
    }
  }
  return stl / stt;
}

EvolveState mode_initial_state(const ModeSolution& mode, const FormSet& forms, double epsilon,
                               double dt) {
  if (mode.psi.size() != forms.dimension()) {
    throw Error(ErrorCode::LengthMismatch, "mode does not match the form dimension");
  }
  EvolveState s;
  s.xi = forms.xi;
  s.dt = dt;
  s.w = epsilon * mode.lambda * mode.psi;
  s.sigma = -epsilon * forms.mass.llt().solve(forms.drho_mass * mode.psi);
  return s;
}

EvolveState random_initial_state(const FormSet& forms, const SpectralGrid& grid, double dt,
                                 std::uint64_t seed, int modes) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  const Eigen::VectorXd y = grid.nodes().segment(1, grid.interior_size());
  Eigen::VectorXd w = Eigen::VectorXd::Zero(y.size());
  for (int m = 1; m <= modes; ++m) {
    const double c = coef(rng) / m;
    w += c * (m * std::numbers::pi * y.array()).sin().matrix();
  }
  const double norm = std::sqrt(quadratic_value(forms.Jm, w));
  EvolveState s;
  s.xi = forms.xi;
  s.dt = dt;
  s.w = norm > 0.0 ? Eigen::VectorXd(w / norm) : w;
  s.sigma = Eigen::VectorXd::Zero(y.size());
  return s;
}

}  // namespace slabrt
