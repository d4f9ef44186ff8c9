#include <doctest.h>

#include <cmath>
#include <numbers>

#include "support.hpp"

using namespace slabrt;
using std::numbers::pi;

namespace {

// Interior values of sin(pi y), whose integrals are known in closed form:
//   int psi^2 = 1/2, int psi'^2 = pi^2/2, int psi''^2 = pi^4/2,
//   int y psi^2 = int y psi'^2 / pi^2 = 1/4.
Eigen::VectorXd sine_interior(const SpectralGrid& g) {
  return (pi * g.nodes().segment(1, g.interior_size()).array()).sin().matrix();
}

}  // namespace

TEST_CASE("forms reproduce closed-form integrals of sin(pi y)") {
  const SpectralGrid g(64);
  SlabConfig c;
  c.mu = 0.3;
  c.g = 2.0;
  c.k0 = 0.7;
  c.k1 = -0.4;
  const double xi = 1.7, xi2 = xi * xi;
  const FormSet f = assemble_forms(DensityProfile::linear_up(), c, g, xi);
  const Eigen::VectorXd v = sine_interior(g);

  CHECK(f.dimension() == 62);
  CHECK(f.xi == xi);
  CHECK(quadratic_value(f.mass, v) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(quadratic_value(f.E1m, v) == doctest::Approx(c.mu * (pi * pi + 0.5 * xi2)).epsilon(1e-12));
  const double e0 = c.mu * std::pow(pi, 4) / 2.0 - (c.k0 + c.k1) * pi * pi;
  CHECK(quadratic_value(f.E0m, v) == doctest::Approx(e0).epsilon(1e-9));
  CHECK(quadratic_value(f.Gm, v) == doctest::Approx(e0 + xi2 * c.mu * (pi * pi + 0.5 * xi2)).epsilon(1e-9));
  CHECK(quadratic_value(f.E2m, v) == doctest::Approx(c.g * xi2 * 0.5).epsilon(1e-12));
  const double j = xi2 * 0.75 + pi * pi * 0.75;
  CHECK(quadratic_value(f.Jm, v) == doctest::Approx(j).epsilon(1e-12));
  CHECK(f.trace_d1_0.dot(v) == doctest::Approx(pi).epsilon(1e-11));
  CHECK(f.trace_d1_1.dot(v) == doctest::Approx(-pi).epsilon(1e-11));
}

TEST_CASE("form matrices are symmetric and J is positive definite") {
  const SpectralGrid g(40);
  const FormSet f = assemble_forms(DensityProfile::exp(), SlabConfig{}, g, 2.5);
  for (const Eigen::MatrixXd* m : {&f.E0m, &f.E1m, &f.E2m, &f.Gm, &f.Jm}) {
    CHECK((*m - m->transpose()).cwiseAbs().maxCoeff() == 0.0);
  }
  Eigen::LLT<Eigen::MatrixXd> llt(f.Jm);
  CHECK(llt.info() == Eigen::Success);
  CHECK((f.Gm - (f.E0m + 6.25 * f.E1m)).cwiseAbs().maxCoeff() <= 1e-12 * f.Gm.cwiseAbs().maxCoeff());
}

TEST_CASE("forms depend on xi only through xi^2") {
  const SpectralGrid g(32);
  const FormAssembler a(DensityProfile::exp(), SlabConfig{}, g);
  const FormSet plus = a.assemble(1.3), minus = a.assemble(-1.3);
  CHECK(plus.Gm == minus.Gm);
  CHECK(plus.Jm == minus.Jm);
  CHECK(plus.E2m == minus.E2m);
  CHECK_THROWS_AS(a.assemble(0.0), Error);
}

TEST_CASE("boundary form is the slip numerator") {
  const SpectralGrid g(32);
  SlabConfig c;
  c.k0 = 2.0;
  c.k1 = 3.0;
  const FormAssembler a(DensityProfile::linear_up(), c, g);
  const Eigen::VectorXd v = sine_interior(g);
  CHECK(quadratic_value(a.boundary_form(), v) == doctest::Approx(5.0 * pi * pi).epsilon(1e-10));
}

TEST_CASE("c0_constant") {
  SlabConfig c;
  CHECK(c0_constant(c) == 0.0);
  c.mu = 0.5;
  c.k0 = 1.0;
  c.k1 = -3.0;
  // |k0+k1| + max(k0^2, k1^2)/mu = 2 + 9/0.5
  CHECK(c0_constant(c) == doctest::Approx(20.0));
  // Brute-force maximum of |k0+k1| + ((k0+k1) y - k0)^2 / mu over y.
  double brute = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double y = i / 1000.0;
    brute = std::max(brute, std::abs(c.k0 + c.k1) + std::pow((c.k0 + c.k1) * y - c.k0, 2) / c.mu);
  }
  CHECK(c0_constant(c) == doctest::Approx(brute).epsilon(1e-12));
}

TEST_CASE("quadrature is exact enough to be grid independent") {
  SlabConfig c;
  c.k0 = 0.3;
  const auto p = DensityProfile::tanh_layer(0.5, 0.2);
  auto energy = [&](int n) {
    const SpectralGrid g(n);
    const FormSet f = assemble_forms(p, c, g, 2.0);
    const Eigen::ArrayXd y = g.nodes().segment(1, g.interior_size()).array();
    const Eigen::VectorXd v = (y * (1.0 - y) * (3.0 * y).cos()).matrix();
    return std::array<double, 3>{quadratic_value(f.Gm, v), quadratic_value(f.Jm, v), quadratic_value(f.E2m, v)};
  };
  const auto a = energy(48), b = energy(96);
  for (int k = 0; k < 3; ++k) CHECK(slabrt::test::rel(a[k], b[k]) <= 1e-10);
}
