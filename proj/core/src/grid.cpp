#include "slabrt/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "slabrt/errors.hpp"

namespace slabrt {

namespace {

constexpr double kPi = std::numbers::pi;

// Clenshaw-Curtis weights on [-1, 1] for the points -cos(theta_j).
Eigen::VectorXd clenshaw_curtis(const Eigen::VectorXd& theta) {
  const int n = static_cast<int>(theta.size());
  const int N = n - 1;
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  if (N % 2 == 0) {
    w[0] = w[N] = 1.0 / (static_cast<double>(N) * N - 1.0);
  } else {
    w[0] = w[N] = 1.0 / (static_cast<double>(N) * N);
  }
  for (int j = 1; j < N; ++j) {
    double v = 1.0;
    if (N % 2 == 0) {
      for (int k = 1; k < N / 2; ++k) {
        v -= 2.0 * std::cos(2.0 * k * theta[j]) / (4.0 * k * k - 1.0);
      }
      v -= std::cos(N * theta[j]) / (static_cast<double>(N) * N - 1.0);
    } else {
      for (int k = 1; k <= (N - 1) / 2; ++k) {
        v -= 2.0 * std::cos(2.0 * k * theta[j]) / (4.0 * k * k - 1.0);
      }
    }
    w[j] = 2.0 * v / N;
  }
  return w;
}

}  // namespace

SpectralGrid::SpectralGrid(int n) {
  if (n < kMinNodes) {
    throw Error(ErrorCode::GridTooSmall,
                "grid needs at least " + std::to_string(kMinNodes) + " nodes, got " +
                    std::to_string(n));
  }
  const int N = n - 1;
  theta_.resize(n);
  nodes_.resize(n);
  bary_.resize(n);
  for (int j = 0; j < n; ++j) {
    theta_[j] = kPi * j / N;
    const double s = std::sin(0.5 * theta_[j]);
    nodes_[j] = s * s;
    bary_[j] = (j % 2 == 0 ? 1.0 : -1.0) * ((j == 0 || j == N) ? 0.5 : 1.0);
  }
  nodes_[0] = 0.0;
  nodes_[N] = 1.0;

  // x_i - x_j for x = -cos(theta) written as a product of sines to avoid
  // cancellation near the endpoints.
  d1_.resize(n, n);
  for (int i = 0; i < n; ++i) {
    double diag = 0.0;
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double dx =
          2.0 * std::sin(0.5 * (theta_[i] + theta_[j])) * std::sin(0.5 * (theta_[i] - theta_[j]));
      const double entry = (bary_[j] / bary_[i]) / dx;
      d1_(i, j) = entry;
      diag -= entry;
    }
    d1_(i, i) = diag;
  }
  d1_ *= 2.0;  // d/dy = 2 d/dx
  d2_ = d1_ * d1_;
  d3_ = d2_ * d1_;
  d4_ = d3_ * d1_;

  weights_ = 0.5 * clenshaw_curtis(theta_);
}

void SpectralGrid::check_length(const Eigen::VectorXd& f) const {
  if (f.size() != nodes_.size()) {
    throw Error(ErrorCode::LengthMismatch, "expected " + std::to_string(nodes_.size()) +
                                               " nodal values, got " + std::to_string(f.size()));
  }
}

double SpectralGrid::integrate(const Eigen::VectorXd& f) const {
  check_length(f);
  return weights_.dot(f);
}

Eigen::VectorXd SpectralGrid::chebyshev_coefficients(const Eigen::VectorXd& f) const {
  check_length(f);
  const int n = size();
  const int N = n - 1;
  Eigen::VectorXd c(n);
  for (int k = 0; k < n; ++k) {
    double sum = 0.0;
    for (int j = 0; j < n; ++j) {
      // T_k(-cos t) = (-1)^k cos(k t)
      double term = f[j] * std::cos(k * theta_[j]);
      if (j == 0 || j == N) term *= 0.5;
      sum += term;
    }
    double ck = (k % 2 == 0 ? 1.0 : -1.0) * 2.0 * sum / N;
    if (k == 0 || k == N) ck *= 0.5;
    c[k] = ck;
  }
  return c;
}

Eigen::VectorXd SpectralGrid::cumulative_integral(const Eigen::VectorXd& f) const {
  const Eigen::VectorXd c = chebyshev_coefficients(f);
  const int n = size();
  // Antiderivative coefficients in x, one degree higher.
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n + 1);
  auto coef = [&](int k) { return (k >= 0 && k < n) ? c[k] : 0.0; };
  for (int k = 1; k <= n; ++k) {
    const double lower = (k == 1) ? 2.0 * coef(0) : coef(k - 1);
    b[k] = (lower - coef(k + 1)) / (2.0 * k);
  }
  // Fix the constant so the antiderivative vanishes at x = -1.
  double at_minus_one = 0.0;
  for (int k = 1; k <= n; ++k) at_minus_one += (k % 2 == 0 ? 1.0 : -1.0) * b[k];
  b[0] = -at_minus_one;

  Eigen::VectorXd out(n);
  for (int j = 0; j < n; ++j) {
    double sum = 0.0;
    for (int k = 0; k <= n; ++k) {
      sum += b[k] * (k % 2 == 0 ? 1.0 : -1.0) * std::cos(k * theta_[j]);
    }
    out[j] = 0.5 * sum;  // dy = dx / 2
  }
  out[0] = 0.0;
  return out;
}

Eigen::MatrixXd SpectralGrid::interpolation_matrix(const Eigen::VectorXd& targets) const {
  const int n = size();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(targets.size(), n);
  for (Eigen::Index i = 0; i < targets.size(); ++i) {
    const double y = targets[i];
    int exact = -1;
    for (int j = 0; j < n; ++j) {
      if (y == nodes_[j]) {
        exact = j;
        break;
      }
    }
    if (exact >= 0) {
      m(i, exact) = 1.0;
      continue;
    }
    double denom = 0.0;
    for (int j = 0; j < n; ++j) {
      const double q = bary_[j] / (y - nodes_[j]);
      m(i, j) = q;
      denom += q;
    }
    m.row(i) /= denom;
  }
  return m;
}

double SpectralGrid::interpolate(const Eigen::VectorXd& f, double y) const {
  check_length(f);
  Eigen::VectorXd t(1);
  t[0] = y;
  return (interpolation_matrix(t) * f)(0);
}

Eigen::VectorXd SpectralGrid::embed_interior(const Eigen::VectorXd& interior) const {
  if (interior.size() != interior_size()) {
    throw Error(ErrorCode::LengthMismatch, "expected " + std::to_string(interior_size()) +
                                               " interior values, got " +
                                               std::to_string(interior.size()));
  }
  Eigen::VectorXd full = Eigen::VectorXd::Zero(size());
  full.segment(1, interior_size()) = interior;
  return full;
}

Eigen::MatrixXd SpectralGrid::interior_embedding() const {
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(size(), interior_size());
  p.block(1, 0, interior_size(), interior_size()).setIdentity();
  return p;
}

SpectralGrid build_grid(int n) { return SpectralGrid(n); }

double integrate(const SpectralGrid& grid, const Eigen::VectorXd& f) { return grid.integrate(f); }

}  // namespace slabrt
