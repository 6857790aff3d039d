#include <doctest.h>

#include <cmath>

#include "kgtau/serialization.hpp"
#include "kgtau/spectral.hpp"
#include "oracles.hpp"

using namespace kgtau;
namespace kt = kgtau::testing;

namespace {

SpectralMeasure uniform_density(double a, double b, int n, const std::function<double(double)>& f) {
  std::vector<double> grid(n), values(n);
  for (int i = 0; i < n; ++i) {
    grid[i] = a + (b - a) * i / (n - 1);
    values[i] = f(grid[i]);
  }
  return SpectralMeasure::from_density(std::move(grid), std::move(values));
}

}  // namespace

TEST_SUITE_BEGIN("spectral");

TEST_CASE("laplace_forward: point atom") {
  const SpectralMeasure m = SpectralMeasure::from_atom(3.0, 2.0);
  CHECK(laplace_forward(m, 1.0) == doctest::Approx(2.0 * std::exp(-3.0)).epsilon(1e-15));
  CHECK_THROWS_AS(laplace_forward(m, -0.1), std::domain_error);
}

TEST_CASE("laplace_forward: unit density on [0, a]") {
  const double a = 2.0, tau = 0.7;
  const SpectralMeasure m = uniform_density(0.0, a, 2001, [](double) { return 1.0; });
  const double expected = (1.0 - std::exp(-tau * a)) / tau;
  CHECK(laplace_forward(m, tau) == doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("laplace_forward: exponential density against the closed form") {
  const double tau = 0.5;
  const SpectralMeasure m = uniform_density(0.0, 40.0, 30001, [](double xi) { return std::exp(-xi); });
  CHECK(laplace_forward(m, tau) == doctest::Approx(2.0 / 3.0).epsilon(1e-6));
}

TEST_CASE("laplace_forward: linear in the measure, exactly") {
  SpectralMeasure a = SpectralMeasure::from_atom(1.0, 0.75);
  SpectralMeasure b = SpectralMeasure::from_atom(4.0, -0.25);
  SpectralMeasure both;
  both.atoms = {a.atoms[0], b.atoms[0]};
  for (double tau : {0.0, 0.3, 2.0})
    CHECK(laplace_forward(both, tau) == laplace_forward(a, tau) + laplace_forward(b, tau));
}

TEST_CASE("laplace_forward: nonincreasing in tau for nonnegative measures") {
  SpectralMeasure m = uniform_density(0.0, 10.0, 501, [](double xi) { return 1.0 / (1.0 + xi); });
  m.atoms = {{0.5, 1.0}, {2.5, 0.25}};
  double prev = laplace_forward(m, 0.0);
  for (double tau = 0.1; tau <= 3.0; tau += 0.1) {
    const double cur = laplace_forward(m, tau);
    CHECK(cur <= prev);
    prev = cur;
  }
}

TEST_CASE("inverse_laplace_expstep: atom family and theta cut") {
  const SpectralMeasure full = inverse_laplace_expstep(3.0, false);
  REQUIRE(full.atoms.size() == 1);
  CHECK(full.atoms[0].xi == 3.0);
  CHECK(full.atoms[0].weight == 1.0);

  const SpectralMeasure half = inverse_laplace_expstep(1.75, true);
  REQUIRE(half.atoms.size() == 1);
  CHECK(half.atoms[0].xi == 1.75);
  CHECK(half.atoms[0].weight == 0.5);

  CHECK(inverse_laplace_expstep(-1.0, false).empty());
  CHECK(inverse_laplace_expstep(-1.0, true).empty());
  CHECK(inverse_laplace_expstep(0.0, false).empty());
}

TEST_CASE("inverse_laplace_expstep: exact round trip through laplace_forward") {
  SplitMix64 rng(31);
  for (int i = 0; i < 50; ++i) {
    const double a = rng.uniform(0.01, 8.0);
    const double tau = rng.uniform(0.0, 3.0);
    CHECK(laplace_forward(inverse_laplace_expstep(a, false), tau) == std::exp(-a * tau));
  }
}

TEST_CASE("xi_convolution: constant functions give the interval length") {
  auto one = [](double) { return 1.0; };
  CHECK(xi_convolution(one, one, 0.0) == 0.0);
  CHECK(xi_convolution(one, one, 2.5) == doctest::Approx(2.5).epsilon(1e-14));
}

TEST_CASE("xi_convolution: narrow bump acts like a point mass") {
  const double a = 0.7, w = 0.02;
  auto bump = [=](double s) {
    const double d = (s - a) / w;
    return std::exp(-0.5 * d * d) / (w * std::sqrt(2.0 * 3.14159265358979323846));
  };
  auto g = [](double s) { return 2.0 + std::sin(s); };
  const double xi = 2.0;
  const double got = xi_convolution(bump, g, xi, 256);
  CHECK(got == doctest::Approx(g(xi - a)).epsilon(1e-3));
}

TEST_CASE("xi_convolution: convolution theorem against laplace_forward") {
  SplitMix64 rng(32);
  for (int rep = 0; rep < 3; ++rep) {
    double ca[3], cb[3];
    for (double& c : ca) c = rng.uniform(-0.3, 0.3);
    for (double& c : cb) c = rng.uniform(-0.3, 0.3);
    auto f = [&](double s) { return (ca[0] + ca[1] * s + ca[2] * s * s) * std::exp(-s); };
    auto g = [&](double s) { return (cb[0] + cb[1] * s + cb[2] * s * s) * std::exp(-s); };

    const double top = 50.0;
    const int n = 50001;
    const SpectralMeasure mf = uniform_density(0.0, top, n, f);
    const SpectralMeasure mg = uniform_density(0.0, top, n, g);
    const SpectralMeasure mfg =
        uniform_density(0.0, top, n, [&](double s) { return xi_convolution(f, g, s, 16); });

    for (double tau : {0.5, 1.0, 2.0}) {
      const double lhs = laplace_forward(mfg, tau);
      const double rhs = laplace_forward(mf, tau) * laplace_forward(mg, tau);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-6));
    }
  }
}

TEST_CASE("xi_convolution: theorem error tightens at second order under grid refinement") {
  auto f = [](double s) { return (1.0 + 0.5 * s) * std::exp(-s); };
  auto g = [](double s) { return (0.3 + 0.2 * s * s) * std::exp(-s); };
  const double top = 50.0, tau = 1.0;
  auto error_at = [&](int n) {
    const SpectralMeasure mf = uniform_density(0.0, top, n, f);
    const SpectralMeasure mg = uniform_density(0.0, top, n, g);
    const SpectralMeasure mfg =
        uniform_density(0.0, top, n, [&](double s) { return xi_convolution(f, g, s, 16); });
    return std::abs(laplace_forward(mfg, tau) - laplace_forward(mf, tau) * laplace_forward(mg, tau));
  };
  const double e1 = error_at(801);
  const double e2 = error_at(1601);
  CHECK(kt::observed_order(e1, e2) > 1.9);
}

TEST_CASE("kl_spectral_integral: atoms") {
  auto kernel = [](double xi, const FourVector& x) {
    return Complex{std::cos(xi * x.t), std::sin(xi * x.x)};
  };
  const FourVector x{0.4, 1.2, 0.0, -0.3};
  const SpectralMeasure one = SpectralMeasure::from_atom(1.7, 1.0);
  CHECK(kl_spectral_integral(one, kernel, x) == kernel(1.7, x));

  SpectralMeasure two;
  two.atoms = {{0.5, 0.6}, {2.0, -1.1}};
  const Complex expected = 0.6 * kernel(0.5, x) + (-1.1) * kernel(2.0, x);
  CHECK(kl_spectral_integral(two, kernel, x).real() == doctest::Approx(expected.real()).epsilon(1e-15));
  CHECK(kl_spectral_integral(two, kernel, x).imag() == doctest::Approx(expected.imag()).epsilon(1e-15));
}

TEST_CASE("kl_spectral_integral: gridded resonance density vs a finer-grid oracle") {
  auto kernel = [](double xi, const FourVector& x) {
    return std::exp(Complex{0.0, -1.0} * (xi * x.t)) / (1.0 + xi);
  };
  auto breit_wigner = [](double xi) {
    const double m2 = 2.0, gamma = 0.3;
    return gamma / ((xi - m2) * (xi - m2) + gamma * gamma);
  };
  const FourVector x{0.8, 0.1, 0.0, 0.0};
  const SpectralMeasure coarse = uniform_density(0.0, 12.0, 1201, breit_wigner);
  const SpectralMeasure fine = uniform_density(0.0, 12.0, 19201, breit_wigner);
  const Complex got = kl_spectral_integral(coarse, kernel, x);
  const Complex ref = kl_spectral_integral(fine, kernel, x);
  CHECK(std::abs(got - ref) / std::abs(ref) < 1e-4);
}

TEST_CASE("spectral measure serialization round trip") {
  SpectralMeasure m;
  m.atoms = {{0.25, 1.5}, {3.0, -0.5}};
  m.grid = {0.0, 1.0, 2.5};
  m.values = {0.1, 0.2, 0.05};
  const SpectralMeasure back = spectral_measure_from_json(to_json(m));
  CHECK(back.atoms.size() == 2);
  CHECK(back.atoms[1].xi == 3.0);
  CHECK(back.grid == m.grid);
  CHECK(back.values == m.values);

  SpectralMeasure bad;
  bad.atoms = {{-1.0, 1.0}};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_SUITE_END();
