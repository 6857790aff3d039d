#include <doctest.h>

#include <cmath>
#include <numbers>

#include "kgtau/fields.hpp"
#include "kgtau/semigroup.hpp"
#include "oracles.hpp"

using namespace kgtau;
namespace kt = kgtau::testing;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// box-normalized on-shell mode: amplitude 1/sqrt(2 omega V)
Mode box_mode(const BoxGrid& grid, int nx, int ny, int nz, double xi, Complex coeff) {
  const ThreeVector kv{grid.lattice_momentum(nx), grid.lattice_momentum(ny),
                       grid.lattice_momentum(nz)};
  const double w = omega(kv, xi);
  const double norm = 1.0 / std::sqrt(2.0 * w * grid.box_volume());
  return Mode{{w, kv.x, kv.y, kv.z}, coeff * norm, 0.0};
}

}  // namespace

TEST_SUITE_BEGIN("fields");

TEST_CASE("box grid validation") {
  CHECK_THROWS_AS((BoxGrid{1.0, 3, 1.0, 4}.validate()), std::invalid_argument);   // odd
  CHECK_THROWS_AS((BoxGrid{1.0, 2, 1.0, 4}.validate()), std::invalid_argument);   // too small
  CHECK_THROWS_AS((BoxGrid{-1.0, 4, 1.0, 4}.validate()), std::invalid_argument);  // bad extent
  CHECK_NOTHROW((BoxGrid{1.0, 4, 1.0, 2}.validate()));
}

TEST_CASE("mode_function: value at the origin is the bare normalization") {
  const FourVector k{2.0, 1.0, 0.5, 0.0};
  const Complex kg = mode_function(k, {}, ModeNormalization::kg);
  CHECK(kg.imag() == 0.0);
  CHECK(kg.real() == doctest::Approx(1.0 / std::sqrt(kTwoPi * kTwoPi * kTwoPi * 4.0)).epsilon(1e-15));
  const Complex pc = mode_function(k, {}, ModeNormalization::pc);
  CHECK(pc.real() == doctest::Approx(1.0 / (kTwoPi * kTwoPi * 2.0)).epsilon(1e-15));
}

TEST_CASE("mode_function: constant modulus and dot-product phase") {
  SplitMix64 rng(41);
  const FourVector k = kt::random_cone_momentum(rng, 3.0);
  const double expected_mod = 1.0 / std::sqrt(kTwoPi * kTwoPi * kTwoPi * 2.0 * k.t);
  for (int i = 0; i < 100; ++i) {
    const FourVector x = kt::random_four_vector(rng, 4.0);
    const Complex v = mode_function(k, x, ModeNormalization::kg);
    CHECK(std::abs(v) == doctest::Approx(expected_mod).epsilon(1e-14));
    const double arg = -minkowski_dot(k, x);
    CHECK(v.real() == doctest::Approx(expected_mod * std::cos(arg)).epsilon(1e-15));
    CHECK(v.imag() == doctest::Approx(expected_mod * std::sin(arg)).epsilon(1e-15));
  }
}

TEST_CASE("mode_function: rejects momenta outside the cone") {
  CHECK_THROWS_AS(mode_function({1.0, 3.0, 0.0, 0.0}, {}, ModeNormalization::kg),
                  std::invalid_argument);
  CHECK_THROWS_AS(mode_function({-1.0, 0.0, 0.0, 0.0}, {}, ModeNormalization::kg),
                  std::invalid_argument);
}

TEST_CASE("kg_inner_product: commensurate-mode orthonormality") {
  const BoxGrid grid{std::numbers::pi, 8, 2.0, 8};
  const double xi = 1.3;
  const double t = 0.37;

  const ModeLattice m1{{box_mode(grid, 1, 0, 0, xi, 1.0)}};
  const ModeLattice m2{{box_mode(grid, 0, 1, -1, xi, 1.0)}};
  const FieldSlice s1 = sample_mode_lattice_slice(m1, grid, t);
  const FieldSlice s2 = sample_mode_lattice_slice(m2, grid, t);

  const Complex norm = kg_inner_product(s1, s1, grid);
  CHECK(std::abs(norm - Complex{1.0, 0.0}) < 1e-10);
  CHECK(std::abs(kg_inner_product(s2, s2, grid) - Complex{1.0, 0.0}) < 1e-10);
  CHECK(std::abs(kg_inner_product(s1, s2, grid)) < 1e-10);
}

TEST_CASE("kg_inner_product: two-slice central differencing approximates the analytic slice") {
  const BoxGrid grid{std::numbers::pi, 8, 2.0, 8};
  const double xi = 1.3, t = 0.1, dt = 1e-3;
  const ModeLattice m{{box_mode(grid, 1, 1, 0, xi, 1.0)}};
  const FieldSlice lower = sample_mode_lattice_slice(m, grid, t - 0.5 * dt);
  const FieldSlice upper = sample_mode_lattice_slice(m, grid, t + 0.5 * dt);
  const FieldSlice numeric = FieldSlice::from_two_slices(lower.value, upper.value, dt);
  const Complex norm = kg_inner_product(numeric, numeric, grid);
  CHECK(std::abs(norm - Complex{1.0, 0.0}) < 1e-5);
}

TEST_CASE("kg_inner_product: sesquilinear and conjugate-symmetric") {
  const BoxGrid grid{std::numbers::pi, 8, 2.0, 8};
  const double xi = 0.9;
  SplitMix64 rng(42);
  ModeLattice phi, psi;
  const int ns[5][3] = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {-1, 0, 1}, {1, 1, -1}};
  for (auto& n : ns) {
    phi.modes.push_back(box_mode(grid, n[0], n[1], n[2], xi,
                                 Complex{rng.uniform(-1, 1), rng.uniform(-1, 1)}));
    psi.modes.push_back(box_mode(grid, n[0], n[1], n[2], xi,
                                 Complex{rng.uniform(-1, 1), rng.uniform(-1, 1)}));
  }
  const double t = -0.21;
  const FieldSlice sphi = sample_mode_lattice_slice(phi, grid, t);
  const FieldSlice spsi = sample_mode_lattice_slice(psi, grid, t);
  const Complex ab = kg_inner_product(sphi, spsi, grid);
  const Complex ba = kg_inner_product(spsi, sphi, grid);
  CHECK(std::abs(ab - std::conj(ba)) < 1e-12);
}

TEST_CASE("kg_inner_product: Parseval identity on random 5-mode superpositions") {
  const BoxGrid grid{std::numbers::pi, 8, 2.0, 8};
  const double xi = 2.0;
  SplitMix64 rng(43);
  const int ns[5][3] = {{0, 0, 0}, {1, 0, 0}, {0, -1, 0}, {2, 1, 0}, {-1, 1, 1}};
  for (int rep = 0; rep < 10; ++rep) {
    ModeLattice phi, psi;
    Complex expected{0.0, 0.0};
    for (auto& n : ns) {
      const Complex a{rng.uniform(-1, 1), rng.uniform(-1, 1)};
      const Complex b{rng.uniform(-1, 1), rng.uniform(-1, 1)};
      phi.modes.push_back(box_mode(grid, n[0], n[1], n[2], xi, a));
      psi.modes.push_back(box_mode(grid, n[0], n[1], n[2], xi, b));
      expected += std::conj(a) * b;
    }
    const double t = rng.uniform(-0.5, 0.5);
    const Complex got = kg_inner_product(sample_mode_lattice_slice(phi, grid, t),
                                         sample_mode_lattice_slice(psi, grid, t), grid);
    CHECK(std::abs(got - expected) <= 1e-8 * std::max(1.0, std::abs(expected)));
  }
}

TEST_CASE("kg_inner_product: mismatched grids are rejected") {
  const BoxGrid g1{std::numbers::pi, 8, 2.0, 8};
  const BoxGrid g2{std::numbers::pi, 6, 2.0, 8};
  const ModeLattice m{{box_mode(g1, 1, 0, 0, 1.0, 1.0)}};
  const FieldSlice s = sample_mode_lattice_slice(m, g1, 0.0);
  CHECK_THROWS_AS(kg_inner_product(s, s, g2), std::invalid_argument);
}

TEST_CASE("el_residual: on-shell wave vanishes at second order under refinement") {
  const double xi = 1.0;
  auto residual_at = [&](int n) {
    const BoxGrid grid{std::numbers::pi, n, 2.0, n};
    ModeLattice m{{Mode{{omega({1.0, 0.0, 0.0}, xi), 1.0, 0.0, 0.0}, 1.0, 0.0}}};
    const SpacetimeField phi = sample_mode_lattice(m, grid);
    return max_abs_interior(el_residual(phi, xi));
  };
  const double e1 = residual_at(8);
  const double e2 = residual_at(16);
  const double order = kt::observed_order(e1, e2);
  CHECK(order > 1.8);
  CHECK(order < 2.2);
}

TEST_CASE("el_residual: off-shell wave leaves the algebraic mismatch") {
  const BoxGrid grid{std::numbers::pi, 16, 2.0, 16};
  const FourVector k{2.0, 1.0, 0.0, 0.0};  // k.k = 3
  const double xi = 1.0;
  ModeLattice m{{Mode{k, 1.0, 0.0}}};
  const SpacetimeField phi = sample_mode_lattice(m, grid);
  const SpacetimeField res = el_residual(phi, xi);
  const double mismatch = xi - minkowski_norm2(k);  // -2
  const BoxGrid& g = grid;
  for (int it = 1; it < g.n_time - 1; it += 5)
    for (int ix = 1; ix < g.n_space - 1; ix += 5)
      for (int iy = 1; iy < g.n_space - 1; iy += 5)
        for (int iz = 1; iz < g.n_space - 1; iz += 5) {
          const std::size_t idx = g.index(it, ix, iy, iz);
          CHECK(std::abs(res.values[idx] - mismatch * phi.values[idx]) < 0.05);
        }
}

TEST_CASE("el_residual: zero field gives exactly zero") {
  const BoxGrid grid{1.0, 4, 1.0, 4};
  const SpacetimeField zero = SpacetimeField::zeros(grid);
  const SpacetimeField res = el_residual(zero, 2.0);
  for (const Complex& v : res.values) CHECK(v == Complex{0.0, 0.0});
}

TEST_CASE("el_residual: too-small grids are rejected") {
  BoxGrid grid{1.0, 4, 1.0, 2};
  const SpacetimeField f = SpacetimeField::zeros(grid);
  CHECK_THROWS_AS(el_residual(f, 1.0), std::invalid_argument);
}

TEST_CASE("mike_residual: empty lattice") {
  const BoxGrid grid{1.0, 4, 1.0, 4};
  CHECK(mike_residual(ModeLattice{}, 1.0, 0.1, grid) == 0.0);
}

TEST_CASE("mike_residual: second order in the tau step") {
  // spatially constant mode: the grid contributes no spatial error and the
  // fine time step keeps the box part negligible
  const double xi = 4.0;
  ModeLattice m{{Mode{{std::sqrt(xi), 0.0, 0.0, 0.0}, 1.0, 0.0}}};
  const BoxGrid grid{1.0, 4, 2.0, 200};
  const double e1 = mike_residual(m, 1.0, 0.3, grid);
  const double e2 = mike_residual(m, 1.0, 0.15, grid);
  const double order = kt::observed_order(e1, e2);
  CHECK(order > 1.8);
  CHECK(order < 2.2);
}

TEST_CASE("mike_residual: second order under grid refinement") {
  const double xi = 1.0;
  ModeLattice m{{Mode{{omega({1.0, 0.0, 0.0}, xi), 1.0, 0.0, 0.0}, 1.0, 0.0}}};
  auto residual_at = [&](int n) {
    const BoxGrid grid{std::numbers::pi, n, 2.0, n};
    return mike_residual(m, 0.5, 1e-3, grid);
  };
  const double order = kt::observed_order(residual_at(8), residual_at(16));
  CHECK(order > 1.8);
  CHECK(order < 2.2);
}

TEST_CASE("mike_residual: single-mode exponential law is exact") {
  const FourVector k{2.0, 1.0, 1.0, 0.0};  // k.k = 2
  const double k2 = minkowski_norm2(k);
  ModeLattice m{{Mode{k, Complex{0.3, -0.7}, 0.0}}};
  const ModeLattice once = mike_evolve(m, 0.8);
  CHECK(std::abs(once.modes[0].amp_particle - m.modes[0].amp_particle * std::exp(-k2 * 0.8)) == 0.0);
  // derivative of the damping factor equals -k^2 times the factor
  const double h = 1e-6, tau = 0.5;
  const double fd =
      (std::exp(-k2 * (tau + h)) - std::exp(-k2 * (tau - h))) / (2.0 * h);
  CHECK(fd == doctest::Approx(-k2 * std::exp(-k2 * tau)).epsilon(1e-9));
}

TEST_CASE("energy_functional") {
  CHECK(energy_functional(ModeLattice{}) == 0.0);
  ModeLattice single{{Mode{{2.0, 0.0, 0.0, 0.0}, 1.0, 0.0}}};
  CHECK(energy_functional(single) == 2.0);

  SplitMix64 rng(44);
  ModeLattice many;
  long double oracle = 0.0L;
  for (int i = 0; i < 50; ++i) {
    Mode m;
    m.k = kt::random_cone_momentum(rng, 4.0);
    m.amp_particle = {rng.uniform(-2, 2), rng.uniform(-2, 2)};
    m.amp_antiparticle = {rng.uniform(-2, 2), rng.uniform(-2, 2)};
    many.modes.push_back(m);
    oracle += static_cast<long double>(m.k.t) *
              (std::norm(m.amp_particle) + std::norm(m.amp_antiparticle));
  }
  const double got = energy_functional(many);
  CHECK(std::abs(got - static_cast<double>(oracle)) <= 1e-14 * std::abs(got));
}

TEST_CASE("phase_evolve: identity, group law, conservation") {
  SplitMix64 rng(45);
  ModeLattice state;
  for (int i = 0; i < 8; ++i) {
    Mode m;
    m.k = kt::random_cone_momentum(rng, 3.0);
    m.amp_particle = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
    m.amp_antiparticle = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
    state.modes.push_back(m);
  }

  const ModeLattice same = phase_evolve(state, 0.0);
  for (std::size_t i = 0; i < state.modes.size(); ++i) {
    CHECK(same.modes[i].amp_particle == state.modes[i].amp_particle);
    CHECK(same.modes[i].amp_antiparticle == state.modes[i].amp_antiparticle);
  }

  const double t1 = 0.7, t2 = -1.3;
  const ModeLattice split = phase_evolve(phase_evolve(state, t1), t2);
  const ModeLattice joint = phase_evolve(state, t1 + t2);
  for (std::size_t i = 0; i < state.modes.size(); ++i) {
    CHECK(std::abs(split.modes[i].amp_particle - joint.modes[i].amp_particle) < 1e-14);
    CHECK(std::abs(split.modes[i].amp_antiparticle - joint.modes[i].amp_antiparticle) < 1e-14);
  }

  const double e0 = energy_functional(state);
  ModeLattice cur = state;
  for (int i = 0; i < 100; ++i) cur = phase_evolve(cur, rng.uniform(-2.0, 2.0));
  CHECK(energy_functional(cur) == doctest::Approx(e0).epsilon(1e-12));
  for (std::size_t i = 0; i < state.modes.size(); ++i)
    CHECK(std::abs(cur.modes[i].amp_particle) ==
          doctest::Approx(std::abs(state.modes[i].amp_particle)).epsilon(1e-12));
}

TEST_CASE("windowed mode overlap: peaks on the diagonal, width shrinks like 1/T") {
  const ThreeVector k{1.0, 0.0, 0.0};
  const double xi = 2.0, V = 8.0;

  auto overlap = [&](double xi_prime, double T) {
    return std::abs(windowed_xi_overlap(k, xi, xi_prime, T, 4001, V));
  };

  for (double T : {10.0, 20.0}) {
    const double peak = overlap(xi, T);
    for (double dxi : {0.5, 1.0, 2.0}) {
      CHECK(peak > overlap(xi + dxi, T));
      CHECK(peak > overlap(xi - std::min(dxi, 1.9), T));
    }
  }

  // half-maximum width halves when the window doubles
  auto half_width = [&](double T) {
    const double peak = overlap(xi, T);
    double dxi = 0.0;
    const double step = 1e-3;
    while (overlap(xi + dxi, T) > 0.5 * peak) dxi += step;
    return dxi;
  };
  const double w1 = half_width(10.0);
  const double w2 = half_width(20.0);
  CHECK(w1 / w2 == doctest::Approx(2.0).epsilon(0.15));
}

TEST_SUITE_END();
