#include <doctest.h>

#include <cmath>
#include <numbers>

#include "kgtau/positivity.hpp"
#include "kgtau/serialization.hpp"
#include "oracles.hpp"

using namespace kgtau;
namespace kt = kgtau::testing;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

TestFunction small_packet(SplitMix64& rng, const BoxGrid& grid) {
  auto fam = make_packet_family(1, grid, rng.next_u64());
  return fam[0];
}

}  // namespace

TEST_SUITE_BEGIN("positivity");

TEST_CASE("functional_direct: rank-one kernel is a squared overlap") {
  const BoxGrid grid{1.0, 4, 1.5, 4};
  SplitMix64 rng(81);
  TestFunction h = small_packet(rng, grid);
  TestFunction f = small_packet(rng, grid);

  auto kernel = [&](const FourVector& x, const FourVector& y) {
    return h.eval_packet(x) * std::conj(h.eval_packet(y));
  };
  const Complex sigma = functional_direct(kernel, f, grid);

  // factored oracle: | int conj(h) f d^4x |^2
  const std::vector<Complex> fh = h.sample_on(grid);
  const std::vector<Complex> fv = f.sample_on(grid);
  Complex overlap{0.0, 0.0};
  for (std::size_t i = 0; i < fv.size(); ++i) overlap += std::conj(fh[i]) * fv[i];
  overlap *= grid.cell_volume4();
  const double expected = std::norm(overlap);

  CHECK(sigma.real() >= 0.0);
  CHECK(std::abs(sigma.real() - expected) <= 1e-10 * expected);
  CHECK(std::abs(sigma.imag()) <= 1e-12 * expected);
}

TEST_CASE("functional_direct: identity kernel gives the squared norm") {
  const BoxGrid grid{1.0, 4, 1.5, 4};
  SplitMix64 rng(82);
  const TestFunction f = small_packet(rng, grid);
  const double h4 = grid.cell_volume4();

  std::vector<FourVector> coords;
  auto kernel = [&](const FourVector& x, const FourVector& y) {
    const bool same = x.t == y.t && x.x == y.x && x.y == y.y && x.z == y.z;
    return Complex{same ? 1.0 / h4 : 0.0, 0.0};
  };
  const Complex sigma = functional_direct(kernel, f, grid);

  const std::vector<Complex> fv = f.sample_on(grid);
  double norm2 = 0.0;
  for (const Complex& v : fv) norm2 += std::norm(v);
  norm2 *= h4;

  CHECK(sigma.real() >= 0.0);
  CHECK(sigma.real() == doctest::Approx(norm2).epsilon(1e-12));
}

TEST_CASE("functional_direct: purely imaginary kernels have zero real part") {
  const BoxGrid grid{1.0, 4, 1.5, 4};
  SplitMix64 rng(83);
  TestFunction h = small_packet(rng, grid);
  TestFunction f = small_packet(rng, grid);
  auto kernel = [&](const FourVector& x, const FourVector& y) {
    return Complex{0.0, 1.0} * (h.eval_packet(x) * std::conj(h.eval_packet(y)));
  };
  const Complex sigma = functional_direct(kernel, f, grid);
  CHECK(std::abs(sigma.real()) <= 1e-12 * std::abs(sigma.imag()));
}

TEST_CASE("functional_direct: oversized grids are rejected with advice") {
  const BoxGrid grid{1.0, 8, 1.5, 8};
  SplitMix64 rng(84);
  const TestFunction f = small_packet(rng, grid);
  auto kernel = [](const FourVector&, const FourVector&) { return Complex{1.0, 0.0}; };
  CHECK_THROWS_AS(functional_direct(kernel, f, grid, 1000), std::invalid_argument);
}

TEST_CASE("momentum path: real part is nonnegative by construction") {
  const BoxGrid grid{1.0, 4, 1.5, 4};
  const QuadratureConfig q{5.0, 8, 6, QuadScheme::gauss_legendre};
  SplitMix64 rng(85);
  const ZetaParams zeta{{0.2, 0.1, 0.0, 0.3}};
  for (int i = 0; i < 10; ++i) {
    const TestFunction f = small_packet(rng, grid);
    CHECK(functional_momentum_noisy(f, 0.7, zeta, grid, q).real() >= 0.0);
    CHECK(functional_momentum_free(f, 0.7, grid, q).real() >= 0.0);
  }
  for (const TestFunction& f : make_noise_family(5, grid, 999)) {
    CHECK(functional_momentum_noisy(f, 0.7, zeta, grid, q).real() >= 0.0);
    CHECK(functional_momentum_free(f, 0.7, grid, q).real() >= 0.0);
  }
}

TEST_CASE("momentum path agrees with the direct double integral on 6^4 grids") {
  const BoxGrid grid{1.0, 6, 1.5, 6};
  const QuadratureConfig q{6.0, 16, 8, QuadScheme::gauss_legendre};
  SplitMix64 rng(86);

  std::vector<TestFunction> funcs = make_packet_family(3, grid, 4242);
  for (TestFunction& f : make_noise_family(2, grid, 4243)) funcs.push_back(std::move(f));

  // With a spatially isotropic weight the direct path collapses to the
  // axisymmetric kernel reduction while the momentum path keeps full
  // angular tensor nodes, so the phi direction needs enough resolution.
  const QuadratureConfig q_iso{6.0, 24, 16, QuadScheme::gauss_legendre};

  SUBCASE("noisy kernel, timelike zeta") {
    KernelSpec spec;
    spec.kind = KernelKind::noisy_feynman;
    spec.xi = 0.5;
    spec.zeta = ZetaParams{{0.1, 0.0, 0.0, 0.0}};
    for (const TestFunction& f : funcs) {
      const Complex direct = functional_direct_stationary(spec, f, grid, q_iso);
      const Complex momentum = functional_momentum_noisy(f, spec.xi, spec.zeta, grid, q_iso);
      CHECK(std::abs(direct - momentum) <= 2e-2 * std::abs(direct));
    }
  }

  SUBCASE("noisy kernel, mixed zeta") {
    KernelSpec spec;
    spec.kind = KernelKind::noisy_feynman;
    spec.xi = 1.0;
    spec.zeta = ZetaParams{{0.2, 0.2, 0.0, 0.0}};
    for (const TestFunction& f : funcs) {
      const Complex direct = functional_direct_stationary(spec, f, grid, q);
      const Complex momentum = functional_momentum_noisy(f, spec.xi, spec.zeta, grid, q);
      CHECK(std::abs(direct - momentum) <= 2e-2 * std::abs(direct));
    }
  }

  SUBCASE("free kernel") {
    KernelSpec spec;
    spec.kind = KernelKind::feynman;
    spec.xi = 1.0;
    for (const TestFunction& f : funcs) {
      const Complex direct = functional_direct_stationary(spec, f, grid, q_iso);
      const Complex momentum = functional_momentum_free(f, spec.xi, grid, q_iso);
      CHECK(std::abs(direct - momentum) <= 2e-2 * std::abs(direct));
    }
  }
}

TEST_CASE("stationary kernel table reproduces the general pair loop") {
  // the wightman kernel is not symmetric under dx -> -dx, so a transposed
  // offset in the table would show up here
  const BoxGrid grid{1.0, 4, 1.2, 4};
  const QuadratureConfig q{4.0, 8, 4, QuadScheme::gauss_legendre};
  SplitMix64 rng(91);
  const TestFunction f = small_packet(rng, grid);

  KernelSpec spec;
  spec.kind = KernelKind::wightman;
  spec.xi = 1.0;
  const Complex table_value = functional_direct_stationary(spec, f, grid, q);

  auto pair_kernel = [&](const FourVector& x, const FourVector& y) {
    return wightman(x - y, spec.xi, q);
  };
  const Complex pair_value = functional_direct(pair_kernel, f, grid);
  CHECK(std::abs(table_value - pair_value) <= 1e-12 * std::abs(pair_value));
}

TEST_CASE("sweep takes the direct path for the equal-tau kernel and finds it positive") {
  const BoxGrid grid{1.0, 4, 1.2, 4};
  const QuadratureConfig q{4.0, 8, 4, QuadScheme::gauss_legendre};
  KernelSpec spec;
  spec.kind = KernelKind::phi_tau;
  spec.tau = 0.4;
  spec.xi_max = 10.0;
  SweepOptions opt;
  opt.seed = 31;
  const KernelReport report = sweep(spec, make_packet_family(8, grid, opt.seed), grid, q, opt);
  CHECK(report.verdict_re == Verdict::positive);
}

TEST_CASE("path agreement tightens below 5e-3 on 8^4 grids for the noisy kernel") {
  const BoxGrid grid{1.0, 8, 1.5, 8};
  const QuadratureConfig q{6.0, 24, 16, QuadScheme::gauss_legendre};
  KernelSpec spec;
  spec.kind = KernelKind::noisy_feynman;
  spec.xi = 0.5;
  spec.zeta = ZetaParams{{0.1, 0.0, 0.0, 0.0}};
  std::vector<TestFunction> funcs = make_packet_family(2, grid, 515);
  for (TestFunction& f : make_noise_family(1, grid, 516)) funcs.push_back(std::move(f));
  for (const TestFunction& f : funcs) {
    const Complex direct = functional_direct_stationary(spec, f, grid, q);
    const Complex momentum = functional_momentum_noisy(f, spec.xi, spec.zeta, grid, q);
    CHECK(std::abs(direct - momentum) <= 5e-3 * std::abs(direct));
  }
}

TEST_CASE("zeta = 0 momentum path is the free functional times the documented constant") {
  const BoxGrid grid{1.0, 6, 1.5, 6};
  const QuadratureConfig q{6.0, 16, 8, QuadScheme::gauss_legendre};
  SplitMix64 rng(87);
  const double xi = 0.8;
  const double constant = 2.0 * std::pow(kTwoPi, 1.5);
  for (int i = 0; i < 5; ++i) {
    const TestFunction f = small_packet(rng, grid);
    const Complex noisy = functional_momentum_noisy(f, xi, ZetaParams{}, grid, q);
    const Complex free = functional_momentum_free(f, xi, grid, q);
    CHECK(noisy.real() == doctest::Approx(constant * free.real()).epsilon(1e-12));
    KernelSpec spec;
    spec.kind = KernelKind::feynman;
    spec.xi = xi;
    const Complex direct = functional_direct_stationary(spec, f, grid, q);
    CHECK(noisy.real() == doctest::Approx(constant * direct.real()).epsilon(1e-3));
  }
}

TEST_CASE("homogeneity: sigma[alpha f] = |alpha|^2 sigma[f] on both paths") {
  const BoxGrid grid{1.0, 4, 1.5, 4};
  const QuadratureConfig q{5.0, 8, 6, QuadScheme::gauss_legendre};
  SplitMix64 rng(88);
  TestFunction f = small_packet(rng, grid);
  const Complex alpha{1.3, -0.6};

  TestFunction scaled = f;
  scaled.amplitude *= alpha;

  const ZetaParams zeta{{0.15, 0.1, 0.0, 0.0}};
  const Complex base_m = functional_momentum_noisy(f, 0.5, zeta, grid, q);
  const Complex scaled_m = functional_momentum_noisy(scaled, 0.5, zeta, grid, q);
  CHECK(std::abs(scaled_m - std::norm(alpha) * base_m) <= 5e-14 * std::abs(scaled_m));

  KernelSpec spec;
  spec.kind = KernelKind::noisy_feynman;
  spec.xi = 0.5;
  spec.zeta = zeta;
  const Complex base_d = functional_direct_stationary(spec, f, grid, q);
  const Complex scaled_d = functional_direct_stationary(spec, scaled, grid, q);
  CHECK(std::abs(scaled_d - std::norm(alpha) * base_d) <= 5e-14 * std::abs(scaled_d));
}

TEST_CASE("parallelogram law on grid-form functions") {
  const BoxGrid grid{1.0, 4, 1.5, 4};
  const QuadratureConfig q{5.0, 8, 6, QuadScheme::gauss_legendre};
  SplitMix64 rng(89);
  const TestFunction fa = small_packet(rng, grid);
  const TestFunction fb = small_packet(rng, grid);

  auto to_grid = [&](const std::vector<Complex>& values) {
    TestFunction g;
    g.form = TestFunction::Form::grid;
    g.samples.grid = grid;
    g.samples.values = values;
    return g;
  };
  const std::vector<Complex> va = fa.sample_on(grid), vb = fb.sample_on(grid);
  std::vector<Complex> vsum(va.size()), vdiff(va.size());
  for (std::size_t i = 0; i < va.size(); ++i) {
    vsum[i] = va[i] + vb[i];
    vdiff[i] = va[i] - vb[i];
  }

  const ZetaParams zeta{{0.1, 0.0, 0.2, 0.0}};
  auto eval = [&](const TestFunction& g) {
    return functional_momentum_noisy(g, 0.5, zeta, grid, q);
  };
  const Complex lhs = eval(to_grid(vsum)) + eval(to_grid(vdiff));
  const Complex rhs = 2.0 * (eval(to_grid(va)) + eval(to_grid(vb)));
  CHECK(std::abs(lhs - rhs) <= 1e-10 * std::abs(rhs));
}

TEST_CASE("imaginary antisymmetry: the theta term has no real part") {
  const BoxGrid grid{1.0, 4, 1.5, 4};
  const QuadratureConfig q{5.0, 8, 6, QuadScheme::gauss_legendre};
  SplitMix64 rng(90);
  const ZetaParams zeta{{0.2, 0.1, -0.1, 0.0}};
  for (int i = 0; i < 5; ++i) {
    const TestFunction f = small_packet(rng, grid);
    const double residual = imaginary_antisymmetry_check(f, 0.6, zeta, grid, q);
    const double scale = std::abs(functional_momentum_noisy(f, 0.6, zeta, grid, q));
    CHECK(residual <= 1e-8 * scale);
  }

  // real, spatially even function: the structure is preserved
  TestFunction even;
  even.form = TestFunction::Form::gaussian_packet;
  even.center = {};
  even.widths = {0.4, 0.5, 0.5, 0.5};
  even.carrier = {};
  even.amplitude = {1.0, 0.0};
  const double r = imaginary_antisymmetry_check(even, 0.6, zeta, grid, q);
  const double s = std::abs(functional_momentum_noisy(even, 0.6, zeta, grid, q));
  CHECK(r <= 1e-8 * s);
}

TEST_CASE("sweep: free kernel verdict is positive and the report is consistent") {
  const BoxGrid grid{1.0, 4, 1.5, 4};
  const QuadratureConfig q{5.0, 8, 6, QuadScheme::gauss_legendre};
  KernelSpec spec;
  spec.kind = KernelKind::feynman;
  spec.xi = 1.0;
  SweepOptions opt;
  opt.tolerance = 1e-8;
  opt.seed = 7;
  const std::vector<TestFunction> family = make_packet_family(30, grid, opt.seed);
  const KernelReport report = sweep(spec, family, grid, q, opt);

  CHECK(report.verdict_re == Verdict::positive);
  CHECK(report.per_function.size() == family.size());
  double min_re = 1e300, scale = 0.0;
  for (const PerFunctionResult& r : report.per_function) {
    REQUIRE(r.ok);
    min_re = std::min(min_re, r.re);
    scale = std::max(scale, std::hypot(r.re, r.im));
  }
  CHECK(report.min_re == min_re);
  CHECK(report.scale == scale);
  CHECK(report.min_re >= 0.0);

  const Json j = to_json(report);
  CHECK(j["verdict_re"] == "positive");
  CHECK(j["per_function"].size() == family.size());
}

TEST_CASE("sweep: noisy kernel verdicts across zeta choices") {
  const BoxGrid grid{1.0, 4, 1.5, 4};
  const QuadratureConfig q{5.0, 8, 6, QuadScheme::gauss_legendre};
  const std::vector<TestFunction> family = make_packet_family(20, grid, 11);
  for (const FourVector z : {FourVector{0.1, 0, 0, 0}, FourVector{0, 0.3, 0, 0}}) {
    KernelSpec spec;
    spec.kind = KernelKind::noisy_feynman;
    spec.xi = 0.5;
    spec.zeta = ZetaParams{z};
    SweepOptions opt;
    opt.seed = 11;
    const KernelReport report = sweep(spec, family, grid, q, opt);
    CHECK(report.verdict_re == Verdict::positive);
    CHECK(report.min_re >= 0.0);
  }
}

TEST_CASE("sweep: deliberately negated kernel is flagged as violated") {
  const BoxGrid grid{1.0, 4, 1.5, 4};
  const QuadratureConfig q{5.0, 8, 6, QuadScheme::gauss_legendre};
  KernelSpec spec;
  spec.kind = KernelKind::feynman;
  spec.xi = 1.0;
  const std::vector<TestFunction> family = make_packet_family(20, grid, 12);
  SweepOptions opt;
  opt.seed = 12;
  auto negated = [&](const TestFunction& f) {
    const Complex v = functional_momentum_free(f, spec.xi, grid, q);
    return Complex{-v.real(), v.imag()};
  };
  const KernelReport report = sweep_with(negated, spec, family, q, opt);
  CHECK(report.verdict_re == Verdict::violated);
}

TEST_CASE("sweep: too many per-function failures turn the verdict inconclusive") {
  const BoxGrid grid{1.0, 4, 1.5, 4};
  const QuadratureConfig q{5.0, 8, 6, QuadScheme::gauss_legendre};
  KernelSpec spec;
  spec.kind = KernelKind::feynman;
  spec.xi = 1.0;
  const std::vector<TestFunction> family = make_packet_family(10, grid, 13);
  int counter = 0;
  auto flaky = [&](const TestFunction& f) -> Complex {
    if (++counter % 3 == 0) throw std::runtime_error("synthetic failure");
    return functional_momentum_free(f, spec.xi, grid, q);
  };
  const KernelReport report = sweep_with(flaky, spec, family, q, SweepOptions{});
  CHECK(report.verdict_re == Verdict::inconclusive);
  int failed = 0;
  for (const PerFunctionResult& r : report.per_function)
    if (!r.ok) {
      ++failed;
      CHECK(r.error == "synthetic failure");
    }
  CHECK(failed >= 3);
}

TEST_CASE("sweep: empty family is rejected") {
  const BoxGrid grid{1.0, 4, 1.5, 4};
  const QuadratureConfig q{5.0, 8, 6, QuadScheme::gauss_legendre};
  KernelSpec spec;
  spec.kind = KernelKind::feynman;
  CHECK_THROWS_AS(sweep(spec, {}, grid, q, SweepOptions{}), std::invalid_argument);
}

TEST_CASE("packet family generation is deterministic in the seed") {
  const BoxGrid grid{1.0, 4, 1.5, 4};
  const auto a = make_packet_family(5, grid, 99);
  const auto b = make_packet_family(5, grid, 99);
  const auto c = make_packet_family(5, grid, 100);
  for (int i = 0; i < 5; ++i) {
    CHECK(a[i].center == b[i].center);
    CHECK(a[i].carrier == b[i].carrier);
    CHECK(a[i].amplitude == b[i].amplitude);
  }
  bool any_diff = false;
  for (int i = 0; i < 5; ++i) any_diff = any_diff || !(a[i].center == c[i].center);
  CHECK(any_diff);
}

TEST_CASE("noise family: smoothed grids with finite norm") {
  const BoxGrid grid{1.0, 4, 1.5, 4};
  const auto family = make_noise_family(3, grid, 55);
  for (const TestFunction& f : family) {
    REQUIRE(f.form == TestFunction::Form::grid);
    CHECK_NOTHROW(f.validate());
    CHECK(f.samples.values.size() == grid.n_points());
  }
}

TEST_CASE("test function validation") {
  TestFunction bad;
  bad.form = TestFunction::Form::gaussian_packet;
  bad.widths = {1.0, -0.5, 1.0, 1.0};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  TestFunction zero;
  zero.form = TestFunction::Form::grid;
  zero.samples = SpacetimeField::zeros(BoxGrid{1.0, 4, 1.5, 4});
  CHECK_THROWS_AS(zero.validate(), std::invalid_argument);
}

TEST_SUITE_END();
