#include "slabrt_cli/commands.hpp"

#include <cmath>
#include <filesystem>
#include <map>
#include <ostream>

#include <slabrt/slabrt.hpp>

#include "slabrt_cli/writers.hpp"

namespace slabrt::cli {

using nlohmann::json;

namespace {

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json band_json(const Band& band) { return {{"a", band.a}, {"b", band.b}}; }

std::filesystem::path prepare(const RunConfig& config) {
  std::error_code ec;
  std::filesystem::create_directories(config.out_dir, ec);
  if (ec) throw Error(ErrorCode::InvalidInput, "cannot create " + config.out_dir.string());
  return config.out_dir;
}

struct Setup {
  DensityProfile profile;
  ValidationReport report;
  SpectralGrid grid;
};

Setup setup(const RunConfig& config) {
  DensityProfile profile = config.make_profile();
  ValidationReport report = validate_profile(profile);
  return {std::move(profile), report, SpectralGrid(config.n)};
}

Band resolve_band(const RunConfig& config, const FormAssembler& assembler) {
  const double a = config.band_a ? *config.band_a : critical_frequency(assembler).xi_c;
  return admissible_band(a, config.band_b);
}

}  // namespace

ExitCode exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EigensolveFailure:
    case ErrorCode::ConvergenceFailure:
    case ErrorCode::SingularStep:
    case ErrorCode::InsufficientGrowth:
      return ExitCode::ConvergenceFailure;
    default:
      return ExitCode::InvalidInput;
  }
}

json cmd_check(const RunConfig& config, std::ostream& log) {
  const auto s = setup(config);
  const auto dir = prepare(config);
  json doc{{"profile", s.profile.name()},
           {"positive", s.report.positive},
           {"rt_condition", s.report.rt_condition},
           {"y0_witness", optional_number(s.report.y0_witness)},
           {"inf_rho", s.report.inf_rho},
           {"sup_rho", s.report.sup_rho}};
  if (config.wants(Format::Json)) write_json(dir / "check.json", doc);
  log << "profile " << s.profile.name() << ": positive, rt_condition="
      << (s.report.rt_condition ? "true" : "false") << '\n';
  return doc;
}

json cmd_critical(const RunConfig& config, std::ostream& log) {
  const auto s = setup(config);
  const auto dir = prepare(config);
  const CriticalNumbers c =
      critical_numbers(s.profile, config.slab, s.grid, config.band_b, config.band_a);
  json doc{{"mu_c_closed", c.mu_c},
           {"mu_c_numerical", c.mu_c_numerical},
           {"xi_c", c.xi_c},
           {"xi_c_residual", c.xi_c_residual},
           {"C0", c.C0},
           {"C1", optional_number(c.C1)},
           {"C2", optional_number(c.C2)},
           {"band", band_json(c.band)},
           {"constants_band", band_json(c.constants_band)},
           {"frak_s", optional_number(c.frak_s)},
           {"frak_s_xi", c.frak_s_xi}};
  if (config.wants(Format::Json)) write_json(dir / "critical.json", doc);
  log << "mu_c = " << format_double(c.mu_c) << ", xi_c = " << format_double(c.xi_c)
      << ", band = (" << format_double(c.band.a) << ", " << format_double(c.band.b) << ")\n";
  return doc;
}

json cmd_dispersion(const RunConfig& config, std::ostream& log) {
  const auto s = setup(config);
  const auto dir = prepare(config);
  const FormAssembler assembler(s.profile, config.slab, s.grid);
  const Band band = resolve_band(config, assembler);
  const DispersionResult r = scan_band(s.profile, config.slab, s.grid, band, config.n_samples);

  std::vector<std::vector<double>> rows;
  Series curve{"lambda(xi)", {}, {}};
  for (const auto& sample : r.samples) {
    if (!sample.lambda) continue;
    rows.push_back({sample.xi, *sample.lambda, sample.alpha_residual,
                    static_cast<double>(sample.iterations)});
    curve.x.push_back(sample.xi);
    curve.y.push_back(*sample.lambda);
  }
  json lattice = json::array();
  for (const auto& l : r.lattice) lattice.push_back({{"xi", l.xi}, {"lambda", optional_number(l.lambda)}});
  const bool none = rows.empty();
  json doc{{"Lambda", optional_number(r.Lambda)},
           {"LambdaStar", optional_number(r.LambdaStar)},
           {"xi_star", optional_number(r.xi_star)},
           {"lattice", lattice},
           {"band", band_json(band)},
           {"n_samples", config.n_samples},
           {"status", none ? "NoGrowingMode" : "ok"}};

  if (config.wants(Format::Csv)) {
    write_csv(dir / "dispersion.csv", {"xi", "lambda", "alpha_residual", "iters"}, rows);
  }
  if (config.wants(Format::Json)) write_json(dir / "summary.json", doc);
  if (config.wants(Format::Svg)) {
    write_svg(dir / "dispersion.svg", {"Dispersion curve", "xi", "lambda", {curve}});
  }
  if (none) {
    log << "no growing mode at any sampled xi in (" << format_double(band.a) << ", "
        << format_double(band.b) << ")\n";
  } else {
    log << "Lambda = " << format_double(r.Lambda.value_or(NAN)) << " at xi* = "
        << format_double(r.xi_star.value_or(NAN)) << '\n';
  }
  return doc;
}

json cmd_mode(const RunConfig& config, std::ostream& log) {
  const auto s = setup(config);
  const auto dir = prepare(config);
  const auto mode = growth_rate(s.profile, config.slab, s.grid, config.xi);
  if (!mode) throw NoGrowingMode("no growing mode at xi = " + format_double(config.xi));

  const ModeResiduals& res = mode->residuals;
  const auto [r0, r1] = natural_bc_residual(*mode, config.slab, s.grid);
  const FormSet forms = assemble_forms(s.profile, config.slab, s.grid, config.xi);
  json doc{{"xi", mode->xi},
           {"lambda", mode->lambda},
           {"iterations", mode->iterations},
           {"ode_res", res.ode_res},
           {"bc_res_0", r0},
           {"bc_res_1", r1},
           {"div_res", res.div_res},
           {"fixed_point_res", res.fixed_point_res},
           {"momentum_x_res", res.momentum_x_res},
           {"momentum_y_res", res.momentum_y_res},
           {"J_norm", quadratic_value(forms.Jm, mode->psi)}};

  const Eigen::VectorXd psi = s.grid.embed_interior(mode->psi);
  const Eigen::VectorXd& y = s.grid.nodes();
  if (config.wants(Format::Csv)) {
    std::vector<std::vector<double>> rows;
    for (Eigen::Index i = 0; i < y.size(); ++i) rows.push_back({y(i), psi(i), mode->phi(i), mode->pi(i)});
    write_csv(dir / "mode.csv", {"y", "psi", "phi", "pi"}, rows);
  }
  if (config.wants(Format::Json)) write_json(dir / "residuals.json", doc);
  if (config.wants(Format::Svg)) {
    auto series = [&](const char* label, const Eigen::VectorXd& v) {
      return Series{label, std::vector<double>(y.begin(), y.end()), std::vector<double>(v.begin(), v.end())};
    };
    write_svg(dir / "mode.svg", {"Mode shapes at xi = " + format_double(config.xi), "y", "amplitude",
                                 {series("psi", psi), series("phi", mode->phi), series("pi", mode->pi)}});
  }
  log << "lambda(" << format_double(mode->xi) << ") = " << format_double(mode->lambda)
      << ", ode residual " << format_double(res.ode_res) << '\n';
  return doc;
}

json cmd_evolve(const RunConfig& config, std::ostream& log) {
  const auto s = setup(config);
  const auto dir = prepare(config);
  const FormSet forms = assemble_forms(s.profile, config.slab, s.grid, config.xi);
  const ModifiedProblem problem(forms);
  const auto mode = growth_rate(problem, s.profile, config.slab, s.grid);

  std::string init = config.evolve.init;
  if (init == "auto") init = mode ? "mode" : "random";
  if (init == "mode" && !mode) throw NoGrowingMode("mode initial data needs a growing mode");

  const double dt = config.evolve.dt.value_or(mode ? 1e-3 / mode->lambda : 1e-3);
  const double t_end = config.evolve.t_end.value_or(mode ? 6.0 / mode->lambda : 10.0);
  const LinearizedEvolver evolver(forms, config.slab, dt);

  EvolveState state;
  if (init == "mode") {
    state = mode_initial_state(*mode, forms, config.evolve.epsilon, dt);
  } else if (init == "random") {
    state = random_initial_state(forms, s.grid, dt, config.evolve.seed);
    state.w *= config.evolve.epsilon;
  } else {
    state.xi = config.xi;
    state.dt = dt;
    state.w = Eigen::VectorXd::Zero(forms.dimension());
    state.sigma = Eigen::VectorXd::Zero(forms.dimension());
  }
  evolver.run(state, t_end, config.evolve.sample_every);

  std::vector<std::vector<double>> rows;
  Series log_amp{"log amplitude", {}, {}};
  double max_balance = 0.0;
  for (const auto& h : state.history) {
    rows.push_back({h.t, h.amplitude, h.energy, h.balance_residual});
    max_balance = std::max(max_balance, h.balance_residual);
    if (h.amplitude > 0.0) {
      log_amp.x.push_back(h.t);
      log_amp.y.push_back(std::log(h.amplitude));
    }
  }
  if (config.wants(Format::Csv)) {
    write_csv(dir / "trajectory.csv", {"t", "amplitude", "energy", "balance_residual"}, rows);
  }
  if (config.wants(Format::Svg)) {
    write_svg(dir / "trajectory.svg", {"Linearized evolution at xi = " + format_double(config.xi), "t",
                                       "log amplitude", {log_amp}});
  }

  const double fit = fit_growth_rate(state.history, mode.has_value());
  json doc{{"lambda_fit", fit},
           {"lambda_variational", mode ? json(mode->lambda) : json(nullptr)},
           {"rel_diff", mode ? json(std::abs(fit - mode->lambda) / mode->lambda) : json(nullptr)},
           {"xi", config.xi},
           {"dt", dt},
           {"t_end", state.t},
           {"samples", state.history.size()},
           {"init", init},
           {"max_balance_residual", max_balance}};
  if (config.wants(Format::Json)) write_json(dir / "fit.json", doc);
  log << "fitted rate " << format_double(fit);
  if (mode) log << " vs lambda " << format_double(mode->lambda);
  log << '\n';
  return doc;
}

json cmd_escape(const RunConfig& config, std::ostream& log) {
  const auto& e = config.escape;
  const EscapeVariant variant = e.variant == "B" ? EscapeVariant::B : EscapeVariant::A;
  std::optional<double> lambda = e.lambda;
  std::optional<double> lambda_star = e.lambda;
  if (!lambda) {
    const auto s = setup(config);
    const FormAssembler assembler(s.profile, config.slab, s.grid);
    const DispersionResult r =
        scan_band(s.profile, config.slab, s.grid, resolve_band(config, assembler), config.n_samples);
    if (!r.Lambda) throw NoGrowingMode("no growing lattice mode, escape time undefined");
    lambda = r.Lambda;
    lambda_star = r.LambdaStar;
  }
  const double rate = variant == EscapeVariant::A ? *lambda : *lambda_star;
  const auto dir = prepare(config);
  const double T = escape_time(rate, e.epsilon, e.m0, e.delta, variant);
  json doc{{"T", T},
           {"variant", e.variant},
           {"rate", rate},
           {"epsilon", e.epsilon},
           {"m0", variant == EscapeVariant::A ? json(e.m0) : json(nullptr)},
           {"delta", e.delta}};
  if (config.wants(Format::Json)) write_json(dir / "escape.json", doc);
  log << "T = " << format_double(T) << " (variant " << e.variant << ")\n";
  return doc;
}

int run_command(const std::string& name, const RunConfig& config, std::ostream& log,
                std::ostream& err) {
  using Handler = json (*)(const RunConfig&, std::ostream&);
  static const std::map<std::string, Handler> handlers{
      {"check", cmd_check},           {"critical", cmd_critical}, {"dispersion", cmd_dispersion},
      {"mode", cmd_mode},             {"evolve", cmd_evolve},     {"escape", cmd_escape}};
  const auto it = handlers.find(name);
  if (it == handlers.end()) {
    err << "slab-rt: unknown command '" << name << "'\n";
    return ExitCode::InvalidInput;
  }
  try {
    it->second(config, log);
    return ExitCode::Success;
  } catch (const NoGrowingMode& e) {
    err << "slab-rt: NoGrowingMode: " << e.what() << '\n';
    return ExitCode::NoGrowth;
  } catch (const Error& e) {
    err << "slab-rt: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "slab-rt: " << e.what() << '\n';
    return ExitCode::InvalidInput;
  }
}

}  // namespace slabrt::cli
