#pragma once

#include <Eigen/Dense>

namespace slabrt {

/// Chebyshev-Gauss-Lobatto collocation on [0, 1].
///
/// Nodes are ascending with nodes()[0] == 0 and nodes()[n-1] == 1 exactly.
/// D1 comes from the barycentric formula (with the negative-sum diagonal);
/// D2..D4 are powers of D1. Weights are Clenshaw-Curtis, scaled so that they
/// sum to one.
class SpectralGrid {
 public:
  static constexpr int kMinNodes = 16;

  explicit SpectralGrid(int n);

  int size() const noexcept { return static_cast<int>(nodes_.size()); }
  int interior_size() const noexcept { return size() - 2; }

  const Eigen::VectorXd& nodes() const noexcept { return nodes_; }
  const Eigen::VectorXd& weights() const noexcept { return weights_; }
  const Eigen::MatrixXd& d1() const noexcept { return d1_; }
  const Eigen::MatrixXd& d2() const noexcept { return d2_; }
  const Eigen::MatrixXd& d3() const noexcept { return d3_; }
  const Eigen::MatrixXd& d4() const noexcept { return d4_; }

  /// Clenshaw-Curtis value of the integral over [0, 1] of nodal data f.
  double integrate(const Eigen::VectorXd& f) const;

  /// Values of y -> int_0^y f at every node, through the Chebyshev series.
  Eigen::VectorXd cumulative_integral(const Eigen::VectorXd& f) const;

  /// Chebyshev coefficients c_k of the interpolant in x = 2y - 1.
  Eigen::VectorXd chebyshev_coefficients(const Eigen::VectorXd& f) const;

  /// Rows evaluate the nodal interpolant at each target point in [0, 1].
  Eigen::MatrixXd interpolation_matrix(const Eigen::VectorXd& targets) const;

  double interpolate(const Eigen::VectorXd& f, double y) const;

  /// Zero-pads an interior vector (length n-2) with the two endpoint values.
  Eigen::VectorXd embed_interior(const Eigen::VectorXd& interior) const;

  /// n x (n-2) matrix that injects interior values into the full grid.
  Eigen::MatrixXd interior_embedding() const;

 private:
  void check_length(const Eigen::VectorXd& f) const;

  Eigen::VectorXd theta_;
  Eigen::VectorXd nodes_;
  Eigen::VectorXd bary_;
  Eigen::VectorXd weights_;
  Eigen::MatrixXd d1_, d2_, d3_, d4_;
};

SpectralGrid build_grid(int n);

double integrate(const SpectralGrid& grid, const Eigen::VectorXd& f);

}  // namespace slabrt
