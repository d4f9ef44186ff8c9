#include "slabrt/profile.hpp"

#include <charconv>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>

#include "slabrt/errors.hpp"

namespace slabrt {

namespace {

constexpr int kSampleLobatto = 128;
constexpr int kSampleOversample = 10;

// Shortest representation that round-trips.
std::string format_value(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

// Barycentric interpolant through arbitrary distinct nodes.
struct BarycentricPolynomial {
  std::vector<double> x;
  std::vector<double> f;
  std::vector<double> w;

  BarycentricPolynomial(std::vector<double> nodes, std::vector<double> values)
      : x(std::move(nodes)), f(std::move(values)), w(x.size(), 1.0) {
    const std::size_t n = x.size();
    // Capacity scaling (interval length 1 -> factor 4) keeps the products in range.
    for (std::size_t j = 0; j < n; ++j) {
      double prod = 1.0;
      for (std::size_t k = 0; k < n; ++k) {
        if (k != j) prod *= 4.0 * (x[j] - x[k]);
      }
      w[j] = 1.0 / prod;
    }
    const double scale = std::abs(*std::max_element(
        w.begin(), w.end(), [](double a, double b) { return std::abs(a) < std::abs(b); }));
    for (double& wj : w) wj /= scale;
  }

  std::optional<std::size_t> node_index(double y) const {
    const auto it = std::find(x.begin(), x.end(), y);
    if (it == x.end()) return std::nullopt;
    return static_cast<std::size_t>(it - x.begin());
  }

  double value(double y) const {
    if (auto j = node_index(y)) return f[*j];
    double num = 0.0;
    double den = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double q = w[j] / (y - x[j]);
      num += q * f[j];
      den += q;
    }
    return num / den;
  }

  double derivative(double y) const {
    if (auto j = node_index(y)) {
      double d = 0.0;
      for (std::size_t k = 0; k < x.size(); ++k) {
        if (k != *j) d += (w[k] / w[*j]) * (f[k] - f[*j]) / (x[*j] - x[k]);
      }
      return d;
    }
    // Schneider-Werner: p'(y) is the interpolant of the divided differences p[y, x_j].
    const double p = value(y);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double q = w[j] / (y - x[j]);
      num += q * (p - f[j]) / (y - x[j]);
      den += q;
    }
    return num / den;
  }
};

}  // namespace

DensityProfile::DensityProfile(ProfileKind kind, std::string name,
                               std::function<double(double)> rho,
                               std::function<double(double)> drho)
    : kind_(kind), name_(std::move(name)), rho_(std::move(rho)), drho_(std::move(drho)) {
  compute_statistics();
}

const std::vector<double>& DensityProfile::sample_points() {
  static const std::vector<double> points = [] {
    std::vector<double> pts;
    const SpectralGrid grid(kSampleLobatto);
    pts.assign(grid.nodes().begin(), grid.nodes().end());
    const int m = kSampleOversample * kSampleLobatto;
    for (int i = 0; i <= m; ++i) pts.push_back(static_cast<double>(i) / m);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
  }();
  return points;
}

void DensityProfile::compute_statistics() {
  inf_rho_ = std::numeric_limits<double>::infinity();
  sup_rho_ = -std::numeric_limits<double>::infinity();
  sup_drho_over_rho_ = 0.0;
  for (double y : sample_points()) {
    const double r = rho_(y);
    const double dr = drho_(y);
    if (r < inf_rho_) {
      inf_rho_ = r;
      argmin_rho_ = y;
    }
    sup_rho_ = std::max(sup_rho_, r);
    if (r > 0.0) sup_drho_over_rho_ = std::max(sup_drho_over_rho_, std::abs(dr / r));
  }
  sup_inv_rho_ = inf_rho_ > 0.0 ? 1.0 / inf_rho_ : std::numeric_limits<double>::infinity();
}

Eigen::VectorXd DensityProfile::rho(const Eigen::VectorXd& y) const {
  return y.unaryExpr([this](double t) { return rho_(t); });
}

Eigen::VectorXd DensityProfile::drho(const Eigen::VectorXd& y) const {
  return y.unaryExpr([this](double t) { return drho_(t); });
}

DensityProfile DensityProfile::exp() {
  return {ProfileKind::AnalyticPreset, "exp", [](double y) { return std::exp(y); },
          [](double y) { return std::exp(y); }};
}

DensityProfile DensityProfile::linear_up() {
  return {ProfileKind::AnalyticPreset, "linear-up", [](double y) { return 1.0 + y; },
          [](double) { return 1.0; }};
}

DensityProfile DensityProfile::linear_down() {
  return {ProfileKind::AnalyticPreset, "linear-down", [](double y) { return 2.0 - y; },
          [](double) { return -1.0; }};
}

DensityProfile DensityProfile::tanh_layer(double center, double width) {
  if (!(width > 0.0) || !std::isfinite(width) || !std::isfinite(center)) {
    throw Error(ErrorCode::InvalidInput, "tanh-layer needs a finite center and width > 0");
  }
  return {ProfileKind::AnalyticPreset, "tanh-layer",
          [=](double y) { return 2.0 + std::tanh((y - center) / width); },
          [=](double y) {
            const double t = std::tanh((y - center) / width);
            return (1.0 - t * t) / width;
          }};
}

DensityProfile DensityProfile::constant(double value) {
  if (!std::isfinite(value)) throw Error(ErrorCode::InvalidInput, "constant density must be finite");
  return {ProfileKind::AnalyticPreset, "constant", [=](double) { return value; },
          [](double) { return 0.0; }};
}

DensityProfile DensityProfile::preset(std::string_view name, double center, double width) {
  if (name == "exp") return exp();
  if (name == "linear-up") return linear_up();
  if (name == "linear-down") return linear_down();
  if (name == "tanh-layer") return tanh_layer(center, width);
  if (name == "constant") return constant(1.0);
  throw Error(ErrorCode::InvalidInput, "unknown profile preset '" + std::string(name) + "'");
}

DensityProfile DensityProfile::tabulated(std::vector<double> y, std::vector<double> rho) {
  if (y.size() != rho.size()) {
    throw Error(ErrorCode::InvalidInput, "tabulated profile: y and rho lengths differ");
  }
  if (y.size() < 8) {
    throw Error(ErrorCode::InvalidInput,
                "tabulated profile needs at least 8 points, got " + std::to_string(y.size()));
  }
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!std::isfinite(y[i]) || !std::isfinite(rho[i])) {
      throw Error(ErrorCode::InvalidInput,
                  "tabulated profile has a non-finite entry at row " + std::to_string(i + 1));
    }
    if (i > 0 && !(y[i] > y[i - 1])) {
      throw Error(ErrorCode::InvalidInput,
                  "tabulated profile y must be strictly increasing (row " + std::to_string(i + 1) +
                      ")");
    }
  }
  constexpr double kCoverTol = 1e-12;
  if (std::abs(y.front()) > kCoverTol || std::abs(y.back() - 1.0) > kCoverTol) {
    throw Error(ErrorCode::InvalidInput, "tabulated profile must cover [0, 1]");
  }
  y.front() = 0.0;
  y.back() = 1.0;

  std::optional<double> bad;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (rho[i] <= 0.0) {
      bad = y[i];
      break;
    }
  }
  auto poly = std::make_shared<const BarycentricPolynomial>(std::move(y), std::move(rho));
  DensityProfile p(ProfileKind::Tabulated, "tabulated",
                   [poly](double t) { return poly->value(t); },
                   [poly](double t) { return poly->derivative(t); });
  p.bad_datum_ = bad;
  return p;
}

DensityProfile DensityProfile::from_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot open profile file '" + path.string() + "'");
  std::vector<double> ys;
  std::vector<double> rhos;
  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (row == 1) {
      if (line != "y,rho") {
        throw Error(ErrorCode::InvalidInput,
                    "profile CSV must start with the header 'y,rho', got '" + line + "'");
      }
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw Error(ErrorCode::InvalidInput, "profile CSV row " + std::to_string(row) +
                                               " does not have two columns");
    }
    try {
      std::size_t used = 0;
      const std::string a = line.substr(0, comma);
      const std::string b = line.substr(comma + 1);
      const double yv = std::stod(a, &used);
      if (used != a.size()) throw std::invalid_argument(a);
      const double rv = std::stod(b, &used);
      if (used != b.size()) throw std::invalid_argument(b);
      ys.push_back(yv);
      rhos.push_back(rv);
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::InvalidInput,
                  "profile CSV row " + std::to_string(row) + " is not numeric: '" + line + "'");
    }
  }
  return tabulated(std::move(ys), std::move(rhos));
}

void SlabConfig::validate() const {
  if (!std::isfinite(mu) || !std::isfinite(g) || !std::isfinite(k0) || !std::isfinite(k1) ||
      !std::isfinite(L)) {
    throw Error(ErrorCode::InvalidInput, "slab parameters must be finite");
  }
  if (!(mu > 0.0)) throw Error(ErrorCode::InvalidInput, "viscosity mu must be positive");
  if (!(L > 0.0)) throw Error(ErrorCode::InvalidInput, "period scale L must be positive");
  if (g < 0.0) throw Error(ErrorCode::InvalidInput, "gravity g must be non-negative");
}

ValidationReport validate_profile(const DensityProfile& profile) {
  if (auto bad = profile.first_nonpositive_datum()) {
    throw Error(ErrorCode::NonPositiveDensity,
                "density is not positive at y = " + format_value(*bad));
  }
  if (!(profile.inf_rho() > 0.0)) {
    throw Error(ErrorCode::NonPositiveDensity,
                "density is not positive at y = " + format_value(profile.argmin_rho()) +
                    " (rho = " + format_value(profile.inf_rho()) + ")");
  }

  ValidationReport report;
  report.positive = true;
  report.inf_rho = profile.inf_rho();
  report.sup_rho = profile.sup_rho();

  double best = 0.0;
  std::optional<double> witness;
  for (double y : DensityProfile::sample_points()) {
    if (y <= 0.0 || y >= 1.0) continue;
    const double d = profile.drho(y);
    if (d <= 0.0) continue;
    const bool better = !witness || d > best ||
                        (d == best && std::abs(y - 0.5) < std::abs(*witness - 0.5));
    if (better) {
      best = d;
      witness = y;
    }
  }
  report.rt_condition = witness.has_value();
  report.y0_witness = witness;
  return report;
}

HydrostaticPressure::HydrostaticPressure(const SpectralGrid& grid, Eigen::VectorXd nodal)
    : grid_(grid), nodal_(std::move(nodal)) {}

double HydrostaticPressure::operator()(double y) const { return grid_.interpolate(nodal_, y); }

HydrostaticPressure hydrostatic_pressure(const DensityProfile& profile, double g,
                                         const SpectralGrid& grid) {
  const Eigen::VectorXd rho = profile.rho(grid.nodes());
  return HydrostaticPressure(grid, -g * grid.cumulative_integral(rho));
}

}  // namespace slabrt
