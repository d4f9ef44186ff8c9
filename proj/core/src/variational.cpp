#include "slabrt/variational.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "slabrt/detail/bracket.hpp"
#include "slabrt/errors.hpp"

namespace slabrt {

namespace {

constexpr double kBisectionTol = 1e-10;
constexpr int kMaxBisection = 200;
constexpr double kFrakSLimit = 1e6;

double largest_generalized_eigenvalue(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, b, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::EigensolveFailure, "generalized symmetric eigensolve failed");
  }
  return solver.eigenvalues().maxCoeff();
}

double bump(double r, double width) {
  const double z = 2.0 * r / width;
  if (std::abs(z) >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - z * z));
}

}  // namespace

ModifiedProblem::ModifiedProblem(FormSet forms) : forms_(std::move(forms)) {
  llt_.compute(forms_.Jm);
  if (llt_.info() != Eigen::Success) {
    throw Error(ErrorCode::EigensolveFailure,
                "constraint form J is not positive definite (density must be positive)");
  }
  const auto lower = llt_.matrixL();
  auto reduce = [&](const Eigen::MatrixXd& a) {
    const Eigen::MatrixXd left = lower.solve(a);  // L^-1 A
    const Eigen::MatrixXd both = lower.solve(left.transpose());
    return symmetrized(both);
  };
  reduced_g_ = reduce(forms_.Gm);
  reduced_e2_ = reduce(forms_.E2m);
}

Eigen::VectorXd ModifiedProblem::unreduce(const Eigen::VectorXd& x) const {
  Eigen::VectorXd psi = llt_.matrixU().solve(x);
  const double j = constraint(psi);
  return psi / std::sqrt(j);
}

AlphaResult ModifiedProblem::alpha(double s) const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(s * reduced_g_ - reduced_e2_);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::EigensolveFailure, "symmetric eigensolve for alpha(s) failed");
  }
  AlphaResult r;
  r.value = solver.eigenvalues()[0];
  r.minimizer = unreduce(solver.eigenvectors().col(0));
  if (r.minimizer.maxCoeff() < -r.minimizer.minCoeff()) r.minimizer = -r.minimizer;
  return r;
}

double ModifiedProblem::alpha_value(double s) const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(s * reduced_g_ - reduced_e2_,
                                                        Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::EigensolveFailure, "symmetric eigensolve for alpha(s) failed");
  }
  return solver.eigenvalues()[0];
}

double ModifiedProblem::energy(const Eigen::VectorXd& psi, double s) const {
  return s * quadratic_value(forms_.Gm, psi) - quadratic_value(forms_.E2m, psi);
}

double ModifiedProblem::min_dissipation_ratio() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(reduced_g_, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()[0];
}

AlphaResult alpha(const FormSet& forms, double s) {
  if (!(s > 0.0)) throw Error(ErrorCode::InvalidInput, "alpha(s) needs s > 0");
  return ModifiedProblem(forms).alpha(s);
}

double alpha_lower_bound(const DensityProfile& profile, const SlabConfig& config, double s) {
  return -config.g * profile.sup_drho_over_rho() - s * c0_constant(config) * profile.sup_inv_rho();
}

double critical_viscosity_closed_form(const SlabConfig& config) {
  const double k0 = config.k0;
  const double k1 = config.k1;
  if (k0 <= 0.0 && k1 <= 0.0) return 0.0;
  const double value = ((k0 + k1) + std::sqrt(k0 * k0 + k1 * k1 - k0 * k1)) / 6.0;
  return std::max(0.0, value);
}

double critical_viscosity_numerical(const FormAssembler& assembler) {
  const SlabConfig& c = assembler.config();
  // T'KT has rank two: its nonzero eigenvalues against S are those of K C
  // with C = T S^-1 T' = R R', i.e. of the symmetric R' K R.
  Eigen::MatrixXd traces(assembler.trace_d1_0().size(), 2);
  traces.col(0) = assembler.trace_d1_0().transpose();
  traces.col(1) = assembler.trace_d1_1().transpose();
  Eigen::LLT<Eigen::MatrixXd> curvature(assembler.curvature());
  if (curvature.info() != Eigen::Success) {
    throw Error(ErrorCode::EigensolveFailure, "curvature form is not positive definite");
  }
  const Eigen::Matrix2d gram = traces.transpose() * curvature.solve(traces);
  Eigen::LLT<Eigen::Matrix2d> factor(symmetrized(gram));
  const Eigen::Matrix2d r = factor.matrixL();
  const Eigen::Matrix2d k = Eigen::Vector2d(c.k0, c.k1).asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> solver(
      Eigen::Matrix2d(symmetrized(r.transpose() * k * r)), Eigen::EigenvaluesOnly);
  return std::max(0.0, solver.eigenvalues().maxCoeff());
}

double critical_viscosity_numerical(const DensityProfile& profile, const SlabConfig& config,
                                    const SpectralGrid& grid) {
  return critical_viscosity_numerical(FormAssembler(profile, config, grid));
}

CriticalFrequency critical_frequency(const FormAssembler& assembler) {
  const double mu = assembler.config().mu;
  const Eigen::MatrixXd neg_e0 = assembler.boundary_form() - mu * assembler.curvature();
  auto h = [&](double t) {
    return largest_generalized_eigenvalue(
        neg_e0, symmetrized(mu * (2.0 * assembler.slope() + t * assembler.mass())));
  };
  CriticalFrequency out;
  const double h0 = h(0.0);
  if (h0 <= 0.0) return out;

  detail::IncreasingRootFinder finder{kBisectionTol, kMaxBisection};
  const auto r = finder.solve([&](double t) { return t - h(t); }, 0.0, h0);
  if (!r.converged) {
    throw Error(ErrorCode::ConvergenceFailure, "critical frequency bisection did not converge");
  }
  out.xi_c = std::sqrt(r.root);
  out.residual = std::abs(h(r.root) - r.root);
  out.iterations = r.iterations;
  return out;
}

double critical_frequency(const DensityProfile& profile, const SlabConfig& config,
                          const SpectralGrid& grid) {
  return critical_frequency(FormAssembler(profile, config, grid)).xi_c;
}

Band admissible_band(double xi_c, std::optional<double> upper) {
  Band band;
  band.a = std::abs(xi_c);
  band.b = upper.value_or(std::max(4.0 * band.a, 10.0));
  if (!(band.b > band.a)) {
    throw Error(ErrorCode::InvalidInput, "band upper edge must exceed the critical frequency");
  }
  return band;
}

UpperBoundConstants upper_bound_constants(const DensityProfile& profile,
                                          const FormAssembler& assembler, const Band& band,
                                          double width_scale) {
  if (!(band.a > 0.0) || !(band.b > band.a)) {
    throw Error(ErrorCode::InvalidInput, "upper bound constants need a band with 0 < a < b");
  }
  if (!(width_scale > 0.0)) throw Error(ErrorCode::InvalidInput, "bump width scale must be > 0");

  double y0 = 0.0;
  double best = 0.0;
  for (double y : DensityProfile::sample_points()) {
    if (y <= 0.0 || y >= 1.0) continue;
    const double score = profile.drho(y) * std::min(y, 1.0 - y);
    if (score > best) {
      best = score;
      y0 = y;
    }
  }
  if (!(best > 0.0)) {
    throw Error(ErrorCode::NoRTPoint, "rho' is not positive anywhere; no test bump exists");
  }

  const SpectralGrid& grid = assembler.grid();
  const Eigen::VectorXd interior = grid.nodes().segment(1, grid.interior_size());
  const SlabConfig& c = assembler.config();
  double width = width_scale * std::min(y0, 1.0 - y0);

  constexpr int kMaxShrink = 20;
  for (int attempt = 0; attempt < kMaxShrink; ++attempt, width *= 0.5) {
    const Eigen::VectorXd psi =
        interior.unaryExpr([&](double y) { return bump(y - y0, width); });
    if (psi.squaredNorm() == 0.0) break;
    const double drive = quadratic_value(assembler.drho_mass(), psi);
    if (!(drive > 0.0)) continue;

    const double a2 = band.a * band.a;
    const double b2 = band.b * band.b;
    const double rho_mass = quadratic_value(assembler.rho_mass(), psi);
    const double rho_slope = quadratic_value(assembler.rho_slope(), psi);
    const double g_at_b = c.mu * quadratic_value(assembler.curvature(), psi) -
                          quadratic_value(assembler.boundary_form(), psi) +
                          c.mu * (2.0 * b2 * quadratic_value(assembler.slope(), psi) +
                                  b2 * b2 * quadratic_value(assembler.mass(), psi));

    UpperBoundConstants out;
    out.C1 = c.g * a2 * drive / (b2 * rho_mass + rho_slope);
    out.C2 = g_at_b / (a2 * rho_mass + rho_slope);
    out.y0 = y0;
    out.width = width;
    if (!(out.C1 > 0.0)) {
      throw Error(ErrorCode::NoRTPoint, "gravity vanishes; C1 is not positive");
    }
    if (!(out.C2 > 0.0)) {
      throw Error(ErrorCode::InvalidInput,
                  "dissipation of the test bump is not positive at the band edge b");
    }
    return out;
  }
  throw Error(ErrorCode::NoRTPoint, "no resolvable bump with positive buoyancy drive near y0 = " +
                                        std::to_string(y0));
}

UpperBoundConstants upper_bound_constants(const DensityProfile& profile, const SlabConfig& config,
                                          const SpectralGrid& grid, const Band& band,
                                          double width_scale) {
  return upper_bound_constants(profile, FormAssembler(profile, config, grid), band, width_scale);
}

FrakS frak_s(const ModifiedProblem& problem, double s_lo_hint) {
  FrakS out;
  double lo = 0.0;
  bool have_lo = false;
  if (s_lo_hint > 0.0 && problem.alpha_value(s_lo_hint) < 0.0) {
    lo = s_lo_hint;
    have_lo = true;
  } else {
    double s = 1.0;
    for (int i = 0; i < 60; ++i, s *= 0.5) {
      if (problem.alpha_value(s) < 0.0) {
        lo = s;
        have_lo = true;
        break;
      }
    }
  }
  if (!have_lo) {
    out.status = FrakS::Status::Degenerate;
    return out;
  }

  double hi = std::max(2.0 * lo, 1.0);
  while (problem.alpha_value(hi) <= 0.0) {
    if (hi >= kFrakSLimit) {
      out.status = FrakS::Status::NoSignChange;
      out.value = kFrakSLimit;
      return out;
    }
    lo = hi;
    hi = std::min(2.0 * hi, kFrakSLimit);
  }

  // "alpha > 0" is the event being located; treat alpha == 0 as not yet positive.
  detail::IncreasingRootFinder finder{kBisectionTol, kMaxBisection};
  const auto r = finder.solve(
      [&](double s) { return problem.alpha_value(s) > 0.0 ? 1.0 : -1.0; }, lo, hi);
  if (!r.converged) {
    throw Error(ErrorCode::ConvergenceFailure, "frak S bisection did not converge");
  }
  out.value = r.root;
  out.iterations = r.iterations;
  return out;
}

CriticalNumbers critical_numbers(const DensityProfile& profile, const SlabConfig& config,
                                 const SpectralGrid& grid, std::optional<double> band_upper,
                                 std::optional<double> band_lower) {
  const FormAssembler assembler(profile, config, grid);
  CriticalNumbers out;
  out.mu_c = critical_viscosity_closed_form(config);
  out.mu_c_numerical = critical_viscosity_numerical(assembler);
  const auto xc = critical_frequency(assembler);
  out.xi_c = xc.xi_c;
  out.xi_c_residual = xc.residual;
  out.C0 = c0_constant(config);
  out.band = admissible_band(band_lower.value_or(out.xi_c), band_upper);

  out.constants_band = out.band;
  if (out.constants_band.a <= 0.0) {
    out.constants_band.a = std::min(1.0 / config.L, 0.5 * out.band.b);
  }
  try {
    const auto ub = upper_bound_constants(profile, assembler, out.constants_band);
    out.C1 = ub.C1;
    out.C2 = ub.C2;
    out.frak_s_xi = 0.5 * (out.constants_band.a + out.constants_band.b);
    const ModifiedProblem problem(assembler.assemble(out.frak_s_xi));
    const auto fs = frak_s(problem, 0.5 * ub.C1 / ub.C2);
    if (fs.status == FrakS::Status::Bracketed) out.frak_s = fs.value;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoRTPoint) throw;
  }
  return out;
}

}  // namespace slabrt
