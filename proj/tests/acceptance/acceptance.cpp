// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "support.hpp"

using namespace slabrt;
using slabrt::test::rel;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += "FAILED " + what;
    }
  }
  void note(const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += what;
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Outcome critical_viscosity() {
  Outcome o;
  const SpectralGrid g(128);
  double worst = 0.0;
  for (auto [k0, k1] : std::vector<std::pair<double, double>>{{6, 6}, {3, 0}, {-1, -2}, {1, 4}}) {
    SlabConfig c;
    c.k0 = k0;
    c.k1 = k1;
    const double diff = std::abs(critical_viscosity_numerical(DensityProfile::linear_up(), c, g) -
                                 critical_viscosity_closed_form(c));
    worst = std::max(worst, diff);
    o.require(diff <= 1e-6, "mu_c mismatch at (" + fmt("%g", k0) + ", " + fmt("%g", k1) + ")");
  }
  o.note("max |numerical - closed| = " + fmt("%.2e", worst));
  return o;
}

Outcome fixed_point() {
  Outcome o;
  const SpectralGrid g(128);
  const SlabConfig c;
  const auto p = DensityProfile::linear_up();
  double fp = 0.0, comp = 0.0;
  for (double xi : {1.5, 2.0, 3.0}) {
    const FormSet f = assemble_forms(p, c, g, xi);
    const auto mode = growth_rate(ModifiedProblem(f), p, c, g);
    const auto oracle = companion_oracle(f);
    o.require(mode.has_value() && oracle.has_value(), "growing mode at xi = " + fmt("%g", xi));
    if (!mode || !oracle) continue;
    fp = std::max(fp, mode->residuals.fixed_point_res);
    comp = std::max(comp, rel(mode->lambda, oracle->lambda));
  }
  o.require(fp <= 1e-8, "|alpha(lambda) + lambda^2| <= 1e-8");
  o.require(comp <= 1e-6, "companion agreement <= 1e-6");
  o.note("max fixed-point residual " + fmt("%.2e", fp) + ", max companion rel diff " + fmt("%.2e", comp));
  return o;
}

Outcome euler_lagrange() {
  Outcome o;
  const SlabConfig c;
  const auto p = DensityProfile::linear_up();
  const auto fine = growth_rate(p, c, SpectralGrid(128), 2.0);
  o.require(fine.has_value(), "growing mode");
  if (!fine) return o;
  const auto& r = fine->residuals;
  o.require(r.ode_res <= 1e-5, "growth-equation residual <= 1e-5");
  o.require(std::max(r.bc_res_0, r.bc_res_1) <= 1e-4, "natural BC residual <= 1e-4");
  o.note("n=128 residual " + fmt("%.2e", r.ode_res) + ", BC " + fmt("%.2e", std::max(r.bc_res_0, r.bc_res_1)));

  const auto coarse = growth_rate(p, c, SpectralGrid(64), 2.0);
  if (coarse) {
    o.note("default config at roundoff floor, n=64 residual " + fmt("%.1e", coarse->residuals.ode_res));
  }

  // Refinement on a slip configuration whose error is above roundoff at n = 64.
  SlabConfig slip;
  slip.k0 = 0.005;
  slip.k1 = -0.003;
  const auto layer = DensityProfile::tanh_layer(0.5, 0.07);
  const auto a = growth_rate(layer, slip, SpectralGrid(64), 3.0);
  const auto b = growth_rate(layer, slip, SpectralGrid(128), 3.0);
  o.require(a && b, "growing tanh-layer mode");
  if (!a || !b) return o;
  const double bc_a = std::max(a->residuals.bc_res_0, a->residuals.bc_res_1);
  const double bc_b = std::max(b->residuals.bc_res_0, b->residuals.bc_res_1);
  o.require(b->residuals.ode_res < a->residuals.ode_res, "residual decreases 64 -> 128");
  o.require(bc_b < bc_a, "BC residual decreases 64 -> 128");
  o.require(b->residuals.ode_res <= 1e-5 && bc_b <= 1e-4, "tanh-layer tolerances at n=128");
  o.note("tanh-layer refinement residual " + fmt("%.1e", a->residuals.ode_res) + " -> " +
         fmt("%.1e", b->residuals.ode_res) + ", BC " + fmt("%.1e", bc_a) + " -> " + fmt("%.1e", bc_b));
  return o;
}

Outcome monotonicity_and_bounds() {
  Outcome o;
  const SpectralGrid g(128);
  const auto p = DensityProfile::linear_up();
  int checks = 0;

  for (const SlabConfig& c : {SlabConfig{}, [] {
         SlabConfig s;
         s.mu = 0.05;
         s.k0 = 0.3;
         s.k1 = 0.2;
         return s;
       }()}) {
    const CriticalNumbers cn = critical_numbers(p, c, g);
    o.require(cn.C1 && cn.C2, "C1, C2 available");
    if (!cn.C1 || !cn.C2) continue;
    const FormAssembler a(p, c, g);
    const Band& band = cn.constants_band;
    for (double t : {0.02, 0.3, 0.6, 0.98}) {
      const ModifiedProblem problem(a.assemble(band.a + t * (band.b - band.a)));
      const FrakS fs = frak_s(problem);
      o.require(fs.status == FrakS::Status::Bracketed, "frak S bracketed");
      double previous = problem.alpha_value(0.0);
      bool increasing = true;
      for (int i = 1; i <= 20; ++i) {
        const double value = problem.alpha_value(fs.value * i / 21.0);
        increasing = increasing && value > previous;
        previous = value;
        ++checks;
      }
      o.require(increasing, "alpha strictly increasing on (0, frak S)");
      bool below = true;
      for (int i = 1; i <= 20; ++i) {
        const double s = 2.0 * fs.value * i / 20.0;
        below = below && problem.alpha_value(s) <= s * *cn.C2 - *cn.C1 + 1e-12;
        ++checks;
      }
      o.require(below, "alpha(s) <= s C2 - C1");
    }
    const DispersionResult d = scan_band(p, c, g, cn.band, 32);
    for (const auto& s : d.samples) {
      if (!s.lambda) continue;
      o.require(*s.lambda * *s.lambda <= growth_rate_bound(p, c, *s.lambda), "quadratic lambda bound");
      ++checks;
    }
  }

  for (auto [mu, k0, k1] : std::vector<std::tuple<double, double, double>>{{0.1, 1, 1}, {0.5, 6, 6}, {0.2, 3, 0}, {1.0, 1, 4}}) {
    SlabConfig c;
    c.mu = mu;
    c.k0 = k0;
    c.k1 = k1;
    if (!(mu < critical_viscosity_closed_form(c))) continue;
    const double xi_c = critical_frequency(p, c, g);
    o.require(xi_c <= std::sqrt(c0_constant(c) / (2.0 * mu)), "xi_c <= sqrt(C0 / (2 mu))");
    ++checks;
  }
  o.note(std::to_string(checks) + " sampled inequalities");
  return o;
}

Outcome time_domain() {
  Outcome o;
  const SpectralGrid g(128);
  const SlabConfig c;
  const auto p = DensityProfile::linear_up();
  const FormSet f = assemble_forms(p, c, g, 2.0);
  const auto mode = growth_rate(ModifiedProblem(f), p, c, g);
  o.require(mode.has_value(), "growing mode");
  if (!mode) return o;
  const double lam = mode->lambda;

  const double dt = 1e-3 / lam;
  const LinearizedEvolver ev(f, c, dt);
  EvolveState s = mode_initial_state(*mode, f, 1e-3, dt);
  ev.run(s, 6.0 / lam);
  const auto& h = s.history;
  const double window = lam * (h.back().t - h[h.size() / 2].t);
  const double fit = fit_growth_rate(h);
  o.require(window >= 3.0 - 1e-9, "fit window spans >= 3 e-folds");
  o.require(rel(fit, lam) <= 1e-3, "fitted rate within 1e-3");
  o.note("fit rel diff " + fmt("%.2e", rel(fit, lam)) + " over " + fmt("%.2f", window) + " e-folds");

  const LinearizedEvolver fine(f, c, 1e-4);
  EvolveState t = mode_initial_state(*mode, f, 1e-3, 1e-4);
  double worst = 0.0;
  for (int i = 0; i < 2000; ++i) {
    EvolveState next = fine.step(t);
    worst = std::max(worst, fine.energy_balance_residual(t, next));
    t = std::move(next);
  }
  o.require(worst <= 1e-6, "balance residual <= 1e-6 at dt = 1e-4");

  std::vector<double> residuals;
  for (double step : {0.4, 0.2, 0.1, 0.05}) {
    const LinearizedEvolver coarse(f, c, step);
    const EvolveState a = mode_initial_state(*mode, f, 1e-3, step);
    residuals.push_back(coarse.energy_balance_residual(a, coarse.step(a)));
  }
  std::string ratios;
  for (std::size_t i = 1; i < residuals.size(); ++i) {
    const double r = residuals[i - 1] / residuals[i];
    o.require(r > 3.6 && r < 4.4, "second-order ratio under halving");
    ratios += (i > 1 ? "," : "") + fmt("%.3f", r);
  }
  o.note("max balance residual " + fmt("%.1e", worst) + " at dt=1e-4, halving ratios " + ratios);
  return o;
}

Outcome stability_control() {
  Outcome o;
  const SpectralGrid g(128);
  const auto p = DensityProfile::linear_down();
  int scanned = 0;
  for (auto [k0, k1] : std::vector<std::pair<double, double>>{{0, 0}, {-0.5, -1.0}}) {
    SlabConfig c;
    c.k0 = k0;
    c.k1 = k1;
    const DispersionResult d = scan_band(p, c, g, admissible_band(critical_frequency(p, c, g)), 64);
    for (const auto& s : d.samples) {
      o.require(!s.lambda, "no growing mode at xi = " + fmt("%g", s.xi));
      ++scanned;
    }
    o.require(!d.Lambda, "no lattice rate");

    const FormSet f = assemble_forms(p, c, g, 2.0);
    const LinearizedEvolver ev(f, c, 1e-2);
    EvolveState s = random_initial_state(f, g, 1e-2, 11);
    auto energy = ev.total_energy(s);
    o.require(energy.has_value(), "energy defined for stable layering");
    if (!energy) continue;
    bool monotone = true;
    for (int i = 0; i < 2000; ++i) {
      s = ev.step(s);
      const double e = *ev.total_energy(s);
      monotone = monotone && e <= *energy * (1.0 + 1e-14);
      energy = e;
    }
    o.require(monotone, "discrete energy non-increasing");
  }
  o.note(std::to_string(scanned) + " scanned frequencies, all NoGrowingMode");
  return o;
}

int run_cli(const std::string& args) {
#ifdef SLABRT_CLI_PATH
  const std::string cmd = std::string("\"") + SLABRT_CLI_PATH + "\" " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
#else
  (void)args;
  return -1;
#endif
}

Outcome structural() {
  Outcome o;
  const SpectralGrid g(128);
  const SlabConfig c;
  const auto p = DensityProfile::linear_up();
  const FormAssembler a(p, c, g);
  const DispersionResult d = scan_band(p, c, g, Band{0.0, 10.0}, 32);

  const std::size_t n = d.samples.size();
  bool parity = n % 2 == 0;
  for (std::size_t i = 0; i < n && parity; ++i) {
    parity = d.samples[i].xi == -d.samples[n - 1 - i].xi && d.samples[i].lambda == d.samples[n - 1 - i].lambda;
  }
  o.require(parity, "mirrored scan parity");

  double div = 0.0, jdev = 0.0;
  for (const auto& s : d.samples) {
    const auto mode = growth_rate(ModifiedProblem(a.assemble(s.xi)), p, c, g);
    if (!mode) continue;
    div = std::max(div, mode->residuals.div_res);
    jdev = std::max(jdev, std::abs(quadratic_value(a.assemble(s.xi).Jm, mode->psi) - 1.0));
    const RealModeField f = real_fields(*mode, *d.LambdaStar, Eigen::VectorXd::LinSpaced(9, 0.0, 6.0), p, g);
    const Eigen::ArrayXd cx = (mode->xi * f.x.array()).cos();
    const Eigen::MatrixXd du1 = 2.0 * *d.LambdaStar * mode->xi * cx.matrix() * mode->phi.transpose();
    div = std::max(div, (du1 + f.u2 * g.d1().transpose()).cwiseAbs().maxCoeff());
  }
  o.require(div <= 1e-8, "div-free reconstruction <= 1e-8");
  o.require(jdev <= 1e-10, "J-normalization <= 1e-10");
  o.note("max div " + fmt("%.1e", div) + ", max |J-1| " + fmt("%.1e", jdev));

#ifdef SLABRT_CLI_PATH
  const auto dir = slabrt::test::scratch_dir("acceptance-cli");
  const std::string cfg = std::string("\"") + SLABRT_CONFIG_DIR + "/default.ini\"";
  bool same = true;
  for (const char* cmd : {"dispersion", "mode", "evolve", "critical"}) {
    const std::string extra = std::string(cmd) == "evolve" ? " --set grid.n=64" : "";
    const int c1 = run_cli(std::string(cmd) + " --config " + cfg + extra + " --out \"" + (dir / "a").string() + "\"");
    const int c2 = run_cli(std::string(cmd) + " --config " + cfg + extra + " --out \"" + (dir / "b").string() + "\"");
    o.require(c1 == 0 && c2 == 0, std::string("slab-rt ") + cmd + " exit 0");
  }
  for (const auto& entry : std::filesystem::directory_iterator(dir / "a")) {
    same = same && slabrt::test::slurp(entry.path()) == slabrt::test::slurp(dir / "b" / entry.path().filename());
  }
  o.require(same, "byte-identical CLI reruns");
  o.note("CLI reruns byte-identical");
#else
  o.require(false, "CLI not built, rerun determinism unchecked");
#endif
  return o;
}

Outcome grid_convergence() {
  Outcome o;
  const SlabConfig c;
  const SpectralGrid coarse(64), fine(128);
  double worst = 0.0;
  for (const auto& p : {DensityProfile::linear_up(), DensityProfile::exp(), DensityProfile::tanh_layer(0.5, 0.3)}) {
    for (double xi : {0.5, 1.5, 2.0, 3.0, 6.0, 9.5}) {
      const auto a = growth_rate(p, c, coarse, xi);
      const auto b = growth_rate(p, c, fine, xi);
      o.require(a && b, p.name() + " growing at xi = " + fmt("%g", xi));
      if (!a || !b) continue;
      worst = std::max(worst, rel(a->lambda, b->lambda));
    }
  }
  o.require(worst <= 1e-8, "|lambda_64 - lambda_128| / lambda_128 <= 1e-8");
  o.note("max relative change " + fmt("%.2e", worst));
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "critical viscosity dual-path", 5.0, critical_viscosity},
      {2, "fixed-point correctness", 30.0, fixed_point},
      {3, "Euler-Lagrange and natural BCs", 30.0, euler_lagrange},
      {4, "monotonicity and bounds", 60.0, monotonicity_and_bounds},
      {5, "time-domain cross-validation", 60.0, time_domain},
      {6, "stability negative control", 30.0, stability_control},
      {7, "structural invariants", 30.0, structural},
      {8, "grid convergence", 30.0, grid_convergence},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.note(std::string("exception: ") + e.what());
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (seconds > c.limit) o.require(false, "runtime " + fmt("%.1f", seconds) + " s over limit");
    if (!o.pass) ++failures;
    std::printf("criterion %d %s: %s (%.2f s, limit %.0f s) %s\n", c.id, o.pass ? "PASS" : "FAIL", c.name,
                seconds, c.limit, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
