#include <doctest.h>

#include <cmath>
#include <numbers>

#include "support.hpp"

using namespace slabrt;
using std::numbers::pi;

TEST_CASE("grid rejects fewer than 16 nodes") {
  CHECK_THROWS_AS(SpectralGrid(15), Error);
  try {
    SpectralGrid bad(8);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::GridTooSmall);
  }
  CHECK_NOTHROW(build_grid(16));
}

TEST_CASE("nodes are ascending with exact endpoints") {
  for (int n : {16, 33, 128}) {
    const SpectralGrid g(n);
    REQUIRE(g.size() == n);
    CHECK(g.nodes()(0) == 0.0);
    CHECK(g.nodes()(n - 1) == 1.0);
    for (int i = 1; i < n; ++i) CHECK(g.nodes()(i) > g.nodes()(i - 1));
  }
}

TEST_CASE("D1 differentiates monomials exactly") {
  for (int n : {16, 64, 128}) {
    const SpectralGrid g(n);
    const Eigen::ArrayXd y = g.nodes().array();
    for (int k = 0; k <= std::min(n - 1, 10); ++k) {
      const Eigen::VectorXd f = y.pow(k).matrix();
      const Eigen::VectorXd exact = k == 0 ? Eigen::VectorXd::Zero(n) : Eigen::VectorXd(k * y.pow(k - 1).matrix());
      CHECK((g.d1() * f - exact).cwiseAbs().maxCoeff() <= 1e-9);
    }
  }
}

TEST_CASE("D1 on sin(pi y) matches pi cos(pi y) at n = 32") {
  const SpectralGrid g(32);
  const Eigen::ArrayXd y = g.nodes().array();
  const Eigen::VectorXd f = (pi * y).sin().matrix();
  const Eigen::VectorXd df = (pi * (pi * y).cos()).matrix();
  CHECK((g.d1() * f - df).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("higher derivatives annihilate constants and match powers of D1") {
  const SpectralGrid g64(64);
  CHECK((g64.d2() * Eigen::VectorXd::Ones(64)).cwiseAbs().maxCoeff() <= 1e-8);
  CHECK((g64.d2() - g64.d1() * g64.d1()).cwiseAbs().maxCoeff() == 0.0);
  // Roundoff in D3 and D4 grows like n^6 and n^8; check them on a small grid.
  const SpectralGrid g(16);
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(16);
  const Eigen::ArrayXd y = g.nodes().array();
  const Eigen::VectorXd y4 = y.pow(4).matrix();
  CHECK((g.d4() * y4 - 24.0 * one).cwiseAbs().maxCoeff() <= 1e-6 * 24.0);
  const Eigen::VectorXd y3 = y.pow(3).matrix();
  CHECK((g.d3() * y3 - 6.0 * one).cwiseAbs().maxCoeff() <= 1e-7 * 6.0);
}

TEST_CASE("Clenshaw-Curtis weights") {
  for (int n : {16, 64, 128}) {
    const SpectralGrid g(n);
    CHECK(std::abs(g.weights().sum() - 1.0) <= 1e-13);
    const Eigen::ArrayXd y = g.nodes().array();
    for (int k = 0; k <= 10; ++k) {
      CHECK(std::abs(g.integrate(y.pow(k).matrix()) - 1.0 / (k + 1)) <= 1e-10);
    }
  }
  const SpectralGrid g16(16);
  const Eigen::ArrayXd y16 = g16.nodes().array();
  CHECK(std::abs(g16.integrate(y16.square().matrix()) - 1.0 / 3.0) <= 1e-12);
}

TEST_CASE("integrate examples") {
  const SpectralGrid g(64);
  const Eigen::ArrayXd y = g.nodes().array();
  CHECK(integrate(g, Eigen::VectorXd::Ones(64)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(integrate(g, g.nodes()) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(std::abs(integrate(g, y.exp().matrix()) - (std::exp(1.0) - 1.0)) <= 1e-12);
  CHECK_THROWS_AS(g.integrate(Eigen::VectorXd::Ones(63)), Error);
  try {
    g.integrate(Eigen::VectorXd::Ones(10));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::LengthMismatch);
  }
}

TEST_CASE("cumulative integral of e^y is e^y - 1") {
  const SpectralGrid g(48);
  const Eigen::ArrayXd y = g.nodes().array();
  const Eigen::VectorXd F = g.cumulative_integral(y.exp().matrix());
  CHECK((F.array() - (y.exp() - 1.0)).abs().maxCoeff() <= 1e-12);
}

TEST_CASE("Chebyshev coefficients of T_3 mapped to [0,1]") {
  const SpectralGrid g(20);
  const Eigen::ArrayXd x = 2.0 * g.nodes().array() - 1.0;
  const Eigen::VectorXd t3 = (4.0 * x.cube() - 3.0 * x).matrix();
  const Eigen::VectorXd c = g.chebyshev_coefficients(t3);
  for (int k = 0; k < c.size(); ++k) CHECK(std::abs(c(k) - (k == 3 ? 1.0 : 0.0)) <= 1e-13);
}

TEST_CASE("interpolation reproduces smooth functions between nodes") {
  const SpectralGrid g(40);
  const Eigen::VectorXd f = (g.nodes().array() * 3.0).sin().matrix();
  for (double y : {0.013, 0.25, 0.5, 0.777, 0.999}) {
    CHECK(std::abs(g.interpolate(f, y) - std::sin(3.0 * y)) <= 1e-12);
  }
  Eigen::VectorXd targets(3);
  targets << 0.0, 0.3, 1.0;
  const Eigen::VectorXd v = g.interpolation_matrix(targets) * f;
  CHECK(v(0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(std::abs(v(1) - std::sin(0.9)) <= 1e-12);
}

TEST_CASE("interior embedding pads zero endpoints") {
  const SpectralGrid g(16);
  const Eigen::VectorXd inner = Eigen::VectorXd::LinSpaced(14, 1.0, 14.0);
  const Eigen::VectorXd full = g.embed_interior(inner);
  CHECK(full(0) == 0.0);
  CHECK(full(15) == 0.0);
  CHECK(full.segment(1, 14) == inner);
  CHECK((g.interior_embedding() * inner - full).norm() == 0.0);
}

TEST_CASE("curvature integral stable under grid doubling") {
  // psi = y^2 (1-y)^2 e^y sin(2y) fixed; compare int |psi''|^2 at 64 and 128.
  auto curvature = [](int n) {
    const SpectralGrid g(n);
    const Eigen::ArrayXd y = g.nodes().array();
    const Eigen::VectorXd psi = (y.square() * (1.0 - y).square() * y.exp() * (2.0 * y).sin()).matrix();
    const Eigen::VectorXd d2 = g.d2() * psi;
    return g.integrate(d2.cwiseAbs2());
  };
  CHECK(slabrt::test::rel(curvature(64), curvature(128)) <= 1e-10);
}
