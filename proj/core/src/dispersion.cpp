#include "slabrt/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>

#include "slabrt/detail/bracket.hpp"
#include "slabrt/detail/parallel.hpp"
#include "slabrt/errors.hpp"

namespace slabrt {

namespace {

double weighted_l2(const Eigen::VectorXd& f, const Eigen::VectorXd& w) {
  return std::sqrt(std::max(0.0, w.dot(f.cwiseAbs2())));
}

double relative(double residual, double reference) {
  return reference > 0.0 ? residual / reference : residual;
}

Eigen::VectorXd normalized_to_constraint(Eigen::VectorXd psi, const Eigen::MatrixXd& jm) {
  const double norm = std::sqrt(quadratic_value(jm, psi));
  if (!(norm > 0.0)) throw Error(ErrorCode::EigensolveFailure, "degenerate eigenvector");
  psi /= norm;
  Eigen::Index k = 0;
  psi.cwiseAbs().maxCoeff(&k);
  if (psi(k) < 0.0) psi = -psi;
  return psi;
}

}  // namespace

std::optional<ModeSolution> growth_rate(const ModifiedProblem& problem,
                                        const DensityProfile& profile, const SlabConfig& config,
                                        const SpectralGrid& grid) {
  const double alpha0 = problem.alpha_value(0.0);
  if (alpha0 >= 0.0) return std::nullopt;

  // Cache the last evaluation: the root finder asks for the Newton step at
  // the point it just evaluated.
  double cached_s = std::numeric_limits<double>::quiet_NaN();
  AlphaResult cached;
  auto eval = [&](double s) -> const AlphaResult& {
    if (s != cached_s) {
      cached = problem.alpha(s);
      cached_s = s;
    }
    return cached;
  };
  auto f = [&](double s) { return s * s + eval(s).value; };
  auto newton = [&](double s, double fs) -> std::optional<double> {
    const double slope = 2.0 * s + problem.dissipation(eval(s).minimizer);
    if (!(slope > 0.0)) return std::nullopt;
    return fs / slope;
  };

  double hi = std::sqrt(-alpha0);
  int expansions = 0;
  while (f(hi) < 0.0) {
    hi *= 2.0;
    if (++expansions > 200 || !std::isfinite(hi)) {
      throw Error(ErrorCode::ConvergenceFailure,
                  "fixed point not bracketed at xi = " + std::to_string(problem.xi()));
    }
  }

  detail::IncreasingRootFinder finder;
  finder.tol = 1e-13 * std::max(1.0, hi);
  const auto r = finder.solve(f, 0.0, hi, newton);
  if (!r.converged) {
    throw Error(ErrorCode::ConvergenceFailure,
                "fixed point did not converge at xi = " + std::to_string(problem.xi()));
  }

  const AlphaResult& at_root = eval(r.root);
  ModeSolution mode;
  mode.xi = problem.xi();
  mode.lambda = r.root;
  mode.psi = at_root.minimizer;
  mode.iterations = r.iterations;
  mode.residuals.fixed_point_res = std::abs(at_root.value + r.root * r.root);
  return reconstruct_mode(std::move(mode), profile, config, grid);
}

std::optional<ModeSolution> growth_rate(const DensityProfile& profile, const SlabConfig& config,
                                        const SpectralGrid& grid, double xi) {
  ModifiedProblem problem(assemble_forms(profile, config, grid, xi));
  return growth_rate(problem, profile, config, grid);
}

std::optional<CompanionResult> companion_oracle(const FormSet& forms) {
  const ModifiedProblem problem(forms);
  const Eigen::MatrixXd& kg = problem.reduced_dissipation();
  const Eigen::MatrixXd& ke = problem.reduced_drive();
  const Eigen::Index m = kg.rows();

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * m, 2 * m);
  a.topLeftCorner(m, m) = -kg;
  a.topRightCorner(m, m) = ke;
  a.bottomLeftCorner(m, m).setIdentity();

  Eigen::EigenSolver<Eigen::MatrixXd> solver(a, true);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::EigensolveFailure, "companion eigensolve failed");
  }
  const auto& values = solver.eigenvalues();
  Eigen::Index best = -1;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const double re = values(i).real();
    if (std::abs(values(i).imag()) > 1e-8 * (1.0 + std::abs(re))) continue;
    if (best < 0 || re > values(best).real()) best = i;
  }
  // The zero eigenvalues of a pencil with E2 = 0 come back as roundoff.
  const double floor = 1e-12 * std::max(1.0, values.cwiseAbs().maxCoeff());
  if (best < 0 || !(values(best).real() > floor)) return std::nullopt;

  // The nonsymmetric solver's eigenvector is polished by inverse iteration
  // on the pencil P(lambda) = lambda^2 J + lambda G - E2. Companion vectors
  // are (lambda x, x).
  const double lambda = values(best).real();
  Eigen::VectorXd v = problem.unreduce(solver.eigenvectors().col(best).tail(m).real());
  const Eigen::MatrixXd pencil = lambda * lambda * forms.Jm + lambda * forms.Gm - forms.E2m;
  const Eigen::PartialPivLU<Eigen::MatrixXd> shifted(pencil);
  for (int sweep = 0; sweep < 2; ++sweep) {
    const Eigen::VectorXd next = shifted.solve(forms.Jm * v);
    if (!next.allFinite() || next.norm() == 0.0) break;
    v = next.normalized();
  }
  CompanionResult out;
  out.lambda = lambda;
  out.psi = normalized_to_constraint(v, forms.Jm);
  return out;
}

ModeSolution reconstruct_mode(ModeSolution mode, const DensityProfile& profile,
                              const SlabConfig& config, const SpectralGrid& grid) {
  if (mode.xi == 0.0) throw Error(ErrorCode::ZeroFrequency, "mode at xi = 0");
  const double xi = mode.xi;
  const double xi2 = xi * xi;
  const double lam = mode.lambda;
  const double mu = config.mu;
  const Eigen::MatrixXd& d = grid.d1();
  const Eigen::VectorXd& w = grid.weights();
  const Eigen::VectorXd rho = profile.rho(grid.nodes());

  const Eigen::VectorXd psi = grid.embed_interior(mode.psi);
  const Eigen::VectorXd d1 = d * psi;
  const Eigen::VectorXd d2 = d * d1;
  const Eigen::VectorXd d3 = d * d2;

  mode.phi = -d1 / xi;
  mode.pi = -(lam * rho.cwiseProduct(d1) + mu * xi2 * d1 - mu * d3) / xi2;

  auto [r0, r1] = natural_bc_residual(mode, config, grid);
  mode.residuals.bc_res_0 = r0;
  mode.residuals.bc_res_1 = r1;
  mode.residuals.div_res = (xi * mode.phi + d1).cwiseAbs().maxCoeff();
  mode.residuals.ode_res = growth_equation_residual(mode.psi, lam, xi, profile, config, grid);

  const Eigen::VectorXd drho = profile.drho(grid.nodes());
  const Eigen::VectorXd phi_yy = d * (d * mode.phi);
  const Eigen::VectorXd rx = -lam * rho.cwiseProduct(mode.phi) + xi * mode.pi +
                             mu * (phi_yy - xi2 * mode.phi);
  mode.residuals.momentum_x_res =
      relative(weighted_l2(rx, w), weighted_l2(lam * rho.cwiseProduct(mode.phi), w));

  const Eigen::VectorXd inertia = lam * lam * rho.cwiseProduct(psi);
  const Eigen::VectorXd buoyancy = config.g * drho.cwiseProduct(psi);
  const Eigen::VectorXd ry = inertia + lam * (d * mode.pi) + lam * mu * (xi2 * psi - d2) - buoyancy;
  mode.residuals.momentum_y_res =
      relative(weighted_l2(ry, w), std::max(weighted_l2(buoyancy, w), weighted_l2(inertia, w)));
  return mode;
}

std::pair<double, double> natural_bc_residual(const ModeSolution& mode, const SlabConfig& config,
                                              const SpectralGrid& grid) {
  const Eigen::VectorXd psi = grid.embed_interior(mode.psi);
  const Eigen::VectorXd d1 = grid.d1() * psi;
  const Eigen::VectorXd d2 = grid.d1() * d1;
  const Eigen::Index last = psi.size() - 1;
  const double scale = std::max(1.0, d2.cwiseAbs().maxCoeff());
  const double r0 = std::abs(d2(0) + config.k0 / config.mu * d1(0)) / scale;
  const double r1 = std::abs(d2(last) - config.k1 / config.mu * d1(last)) / scale;
  return {r0, r1};
}

double growth_equation_residual(const Eigen::VectorXd& psi_interior, double lambda, double xi,
                                const DensityProfile& profile, const SlabConfig& config,
                                const SpectralGrid& grid) {
  const Eigen::MatrixXd& d = grid.d1();
  const Eigen::VectorXd& w = grid.weights();
  const Eigen::VectorXd rho = profile.rho(grid.nodes());
  const Eigen::VectorXd drho = profile.drho(grid.nodes());
  const double xi2 = xi * xi;

  const Eigen::VectorXd psi = grid.embed_interior(psi_interior);
  const Eigen::VectorXd d1 = d * psi;
  const Eigen::VectorXd d2 = d * d1;
  const Eigen::VectorXd d4 = d * (d * d2);

  const Eigen::VectorXd inertia =
      lambda * lambda * (xi2 * rho.cwiseProduct(psi) - d * rho.cwiseProduct(d1));
  const Eigen::VectorXd viscous = lambda * config.mu * (d4 - 2.0 * xi2 * d2 + xi2 * xi2 * psi);
  const Eigen::VectorXd buoyancy = config.g * xi2 * drho.cwiseProduct(psi);
  const double ref = weighted_l2(buoyancy, w);
  return relative(weighted_l2(inertia + viscous - buoyancy, w),
                  ref > 0.0 ? ref : weighted_l2(inertia, w));
}

double growth_rate_bound(const DensityProfile& profile, const SlabConfig& config, double lambda) {
  return config.g * profile.sup_drho_over_rho() +
         lambda * c0_constant(config) * profile.sup_inv_rho() + 1.0;
}

std::vector<double> lattice_frequencies(const Band& band, double L) {
  if (!(L > 0.0)) throw Error(ErrorCode::InvalidInput, "L must be positive");
  std::vector<double> out;
  const long first = static_cast<long>(std::floor(band.a * L)) + 1;
  for (long m = std::max(1L, first);; ++m) {
    const double xi = static_cast<double>(m) / L;
    if (xi >= band.b) break;
    if (xi > band.a) out.push_back(xi);
  }
  if (out.empty()) {
    throw Error(ErrorCode::EmptyBand, "no lattice frequency n/L in (" + std::to_string(band.a) +
                                          ", " + std::to_string(band.b) +
                                          "); L must exceed L_min = " + std::to_string(1.0 / band.b));
  }
  return out;
}

DispersionResult scan_band(const DensityProfile& profile, const SlabConfig& config,
                           const SpectralGrid& grid, const Band& band, int n_samples) {
  if (!(band.a >= 0.0) || !(band.b > band.a) || !std::isfinite(band.b)) {
    throw Error(ErrorCode::InvalidInput, "band requires 0 <= a < b");
  }
  if (n_samples < 2) throw Error(ErrorCode::InvalidInput, "n_samples must be at least 2");

  const std::vector<double> lattice = lattice_frequencies(band, config.L);
  std::vector<double> xis;
  xis.reserve(n_samples + lattice.size());
  for (int i = 1; i <= n_samples; ++i) {
    xis.push_back(band.a + (band.b - band.a) * i / (n_samples + 1.0));
  }
  xis.insert(xis.end(), lattice.begin(), lattice.end());

  const FormAssembler assembler(profile, config, grid);
  std::vector<DispersionSample> positive(xis.size());
  detail::parallel_for(xis.size(), [&](std::size_t i) {
    const ModifiedProblem problem(assembler.assemble(xis[i]));
    DispersionSample s;
    s.xi = xis[i];
    if (auto mode = growth_rate(problem, profile, config, grid)) {
      s.lambda = mode->lambda;
      s.alpha_residual = mode->residuals.fixed_point_res;
      s.iterations = mode->iterations;
    }
    positive[i] = s;
  });

  DispersionResult out;
  out.band = band;
  out.lattice.assign(positive.begin() + n_samples, positive.end());
  for (const auto& s : out.lattice) {
    if (!s.lambda) continue;
    if (!out.Lambda || *s.lambda > *out.Lambda) {
      out.Lambda = s.lambda;
      out.xi_star = s.xi;
    }
  }
  out.LambdaStar = out.Lambda;

  std::sort(positive.begin(), positive.end(),
            [](const DispersionSample& l, const DispersionSample& r) { return l.xi < r.xi; });
  // A uniform sample can land on a lattice frequency.
  positive.erase(std::unique(positive.begin(), positive.end(),
                             [](const DispersionSample& l, const DispersionSample& r) {
                               return l.xi == r.xi;
                             }),
                 positive.end());
  out.samples.reserve(2 * positive.size());
  for (auto it = positive.rbegin(); it != positive.rend(); ++it) {
    DispersionSample mirrored = *it;
    mirrored.xi = -it->xi;
    out.samples.push_back(mirrored);
  }
  out.samples.insert(out.samples.end(), positive.begin(), positive.end());
  return out;
}

RealModeField real_fields(const ModeSolution& mode, double lambda_star,
                          const Eigen::VectorXd& x_grid, const DensityProfile& profile,
                          const SpectralGrid& grid) {
  if (mode.phi.size() != grid.size() || mode.pi.size() != grid.size()) {
    throw Error(ErrorCode::LengthMismatch, "mode has not been reconstructed on this grid");
  }
  const Eigen::VectorXd psi = grid.embed_interior(mode.psi);
  const Eigen::VectorXd drho = profile.drho(grid.nodes());
  const Eigen::ArrayXd c = (mode.xi * x_grid.array()).cos();
  const Eigen::ArrayXd s = (mode.xi * x_grid.array()).sin();

  RealModeField f;
  f.x = x_grid;
  f.y = grid.nodes();
  f.varrho = -2.0 * c.matrix() * drho.cwiseProduct(psi).transpose();
  f.u1 = 2.0 * lambda_star * s.matrix() * mode.phi.transpose();
  f.u2 = 2.0 * lambda_star * c.matrix() * psi.transpose();
  f.q = 2.0 * c.matrix() * mode.pi.transpose();
  return f;
}

double escape_time(double lambda, double epsilon, double m0, double delta,
                   EscapeVariant variant) {
  if (!(lambda > 0.0) || !(epsilon > 0.0) || !(delta > 0.0)) {
    throw Error(ErrorCode::InvalidInput, "escape time needs positive Lambda, epsilon and delta");
  }
  double argument = 0.0;
  if (variant == EscapeVariant::A) {
    if (!(m0 > 0.0)) throw Error(ErrorCode::InvalidInput, "escape time needs m0 > 0");
    argument = 2.0 * epsilon / (m0 * delta);
  } else {
    argument = 2.0 * epsilon / delta;
  }
  if (!(argument > 1.0)) {
    throw Error(ErrorCode::NonPositiveHorizon,
                "log argument " + std::to_string(argument) + " <= 1 gives a non-positive horizon");
  }
  return std::log(argument) / lambda;
}

}  // namespace slabrt
