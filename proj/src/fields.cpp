#include "kgtau/fields.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace kgtau {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Complex phase_exp(double arg) { return {std::cos(arg), std::sin(arg)}; }

void require_cone_or_shell(const FourVector& k) {
  const double k2 = minkowski_norm2(k);
  if (!(k.t > 0.0) || k2 < -1e-9 * std::max(1.0, k.t * k.t))
    throw std::invalid_argument("mode momentum must have k^0 > 0 and k.k >= 0");
}

}  // namespace

Complex mode_function(const FourVector& k, const FourVector& x, ModeNormalization normalization) {
  require_cone_or_shell(k);
  const double w = k.t;
  double norm = 0.0;
  switch (normalization) {
    case ModeNormalization::kg:
      norm = 1.0 / std::sqrt(kTwoPi * kTwoPi * kTwoPi * 2.0 * w);
      break;
    case ModeNormalization::pc:
      norm = 1.0 / (kTwoPi * kTwoPi * std::sqrt(2.0 * w));
      break;
  }
  return norm * phase_exp(-minkowski_dot(k, x));
}

void ModeLattice::validate() const {
  for (const Mode& m : modes) require_cone_or_shell(m.k);
  for (std::size_t i = 0; i < modes.size(); ++i)
    for (std::size_t j = i + 1; j < modes.size(); ++j)
      if (modes[i].k == modes[j].k)
        throw std::invalid_argument("ModeLattice: mode momenta must be distinct");
}

void BoxGrid::validate() const {
  if (!(L > 0.0) || !(t_window > 0.0)) throw std::invalid_argument("BoxGrid: extents must be positive");
  if (n_space < 4 || n_space % 2 != 0)
    throw std::invalid_argument("BoxGrid: n_space must be even and >= 4");
  if (n_time < 2) throw std::invalid_argument("BoxGrid: n_time must be >= 2");
}

double BoxGrid::lattice_momentum(int n) const { return std::numbers::pi * n / L; }

FieldSlice FieldSlice::from_two_slices(const std::vector<Complex>& lower,
                                       const std::vector<Complex>& upper, double dt) {
  if (lower.size() != upper.size())
    throw std::invalid_argument("FieldSlice: slice size mismatch");
  if (!(dt > 0.0)) throw std::invalid_argument("FieldSlice: dt must be positive");
  FieldSlice s;
  s.value.resize(lower.size());
  s.dvalue_dt.resize(lower.size());
  for (std::size_t i = 0; i < lower.size(); ++i) {
    s.value[i] = 0.5 * (lower[i] + upper[i]);
    s.dvalue_dt[i] = (upper[i] - lower[i]) / dt;
  }
  return s;
}

FieldSlice sample_mode_lattice_slice(const ModeLattice& state, const BoxGrid& grid, double t) {
  grid.validate();
  state.validate();
  FieldSlice s;
  const std::size_t n = grid.n_spatial_points();
  s.value.assign(n, Complex{0.0, 0.0});
  s.dvalue_dt.assign(n, Complex{0.0, 0.0});
  const Complex i_unit{0.0, 1.0};
  for (const Mode& m : state.modes) {
    const Complex dp = -i_unit * m.k.t;  // d/dt of e^{-i k.x}
    for (int ix = 0; ix < grid.n_space; ++ix)
      for (int iy = 0; iy < grid.n_space; ++iy)
        for (int iz = 0; iz < grid.n_space; ++iz) {
          const FourVector x{t, grid.space_coord(ix), grid.space_coord(iy), grid.space_coord(iz)};
          const Complex p = phase_exp(-minkowski_dot(m.k, x));
          const std::size_t idx = grid.spatial_index(ix, iy, iz);
          s.value[idx] += m.amp_particle * p + m.amp_antiparticle * std::conj(p);
          s.dvalue_dt[idx] += m.amp_particle * dp * p + m.amp_antiparticle * std::conj(dp * p);
        }
  }
  return s;
}

SpacetimeField sample_mode_lattice(const ModeLattice& state, const BoxGrid& grid) {
  grid.validate();
  state.validate();
  SpacetimeField f = SpacetimeField::zeros(grid);
  for (const Mode& m : state.modes)
    for (int it = 0; it < grid.n_time; ++it)
      for (int ix = 0; ix < grid.n_space; ++ix)
        for (int iy = 0; iy < grid.n_space; ++iy)
          for (int iz = 0; iz < grid.n_space; ++iz) {
            const FourVector x{grid.time_coord(it), grid.space_coord(ix), grid.space_coord(iy),
                               grid.space_coord(iz)};
            const Complex p = phase_exp(-minkowski_dot(m.k, x));
            f.values[grid.index(it, ix, iy, iz)] += m.amp_particle * p + m.amp_antiparticle * std::conj(p);
          }
  return f;
}

Complex kg_inner_product(const FieldSlice& phi, const FieldSlice& psi, const BoxGrid& grid) {
  grid.validate();
  const std::size_t n = grid.n_spatial_points();
  if (phi.value.size() != n || psi.value.size() != n || phi.dvalue_dt.size() != n ||
      psi.dvalue_dt.size() != n)
    throw std::invalid_argument("kg_inner_product: fields not sampled on this grid");
  Complex acc{0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i)
    acc += std::conj(phi.value[i]) * psi.dvalue_dt[i] - std::conj(phi.dvalue_dt[i]) * psi.value[i];
  return Complex{0.0, 1.0} * acc * grid.cell_volume3();
}

SpacetimeField el_residual(const SpacetimeField& phi, double xi) {
  const BoxGrid& g = phi.grid;
  g.validate();
  if (g.n_time < 3 || g.n_space < 3)
    throw std::invalid_argument("el_residual: need >= 3 points per axis for second differences");
  if (phi.values.size() != g.n_points())
    throw std::invalid_argument("el_residual: field size does not match grid");
  SpacetimeField res = SpacetimeField::zeros(g);
  const double inv_dt2 = 1.0 / (g.dt() * g.dt());
  const double inv_dx2 = 1.0 / (g.dx() * g.dx());
  const auto& v = phi.values;
  for (int it = 1; it < g.n_time - 1; ++it)
    for (int ix = 1; ix < g.n_space - 1; ++ix)
      for (int iy = 1; iy < g.n_space - 1; ++iy)
        for (int iz = 1; iz < g.n_space - 1; ++iz) {
          const Complex c = v[g.index(it, ix, iy, iz)];
          const Complex d2t = (v[g.index(it + 1, ix, iy, iz)] - 2.0 * c + v[g.index(it - 1, ix, iy, iz)]) * inv_dt2;
          const Complex d2x = (v[g.index(it, ix + 1, iy, iz)] - 2.0 * c + v[g.index(it, ix - 1, iy, iz)]) * inv_dx2;
          const Complex d2y = (v[g.index(it, ix, iy + 1, iz)] - 2.0 * c + v[g.index(it, ix, iy - 1, iz)]) * inv_dx2;
          const Complex d2z = (v[g.index(it, ix, iy, iz + 1)] - 2.0 * c + v[g.index(it, ix, iy, iz - 1)]) * inv_dx2;
          res.values[g.index(it, ix, iy, iz)] = d2t - d2x - d2y - d2z + xi * c;
        }
  return res;
}

double max_abs_interior(const SpacetimeField& field) {
  double m = 0.0;
  for (const Complex& c : field.values) m = std::max(m, std::abs(c));
  return m;
}

namespace {

// Phi(x, tau) for the mike evolution of a mode superposition
SpacetimeField sample_tau_field(const ModeLattice& state, const BoxGrid& grid, double tau) {
  ModeLattice damped = state;
  for (Mode& m : damped.modes) {
    const double k2 = minkowski_norm2(m.k);
    const double f = std::exp(-k2 * tau);
    m.amp_particle *= f;
    m.amp_antiparticle *= f;
  }
  return sample_mode_lattice(damped, grid);
}

}  // namespace

double mike_residual(const ModeLattice& state, double tau, double dtau, const BoxGrid& grid) {
  if (!(tau > 0.0) || !(dtau > 0.0)) throw std::domain_error("mike_residual: tau and dtau must be > 0");
  if (!(dtau < tau)) throw std::domain_error("mike_residual: need dtau < tau");
  grid.validate();
  if (state.modes.empty()) return 0.0;

  const SpacetimeField mid = sample_tau_field(state, grid, tau);
  const SpacetimeField lo = sample_tau_field(state, grid, tau - dtau);
  const SpacetimeField hi = sample_tau_field(state, grid, tau + dtau);
  const SpacetimeField box = el_residual(mid, 0.0);  // (box + 0) phi

  const BoxGrid& g = grid;
  double worst = 0.0;
  for (int it = 1; it < g.n_time - 1; ++it)
    for (int ix = 1; ix < g.n_space - 1; ++ix)
      for (int iy = 1; iy < g.n_space - 1; ++iy)
        for (int iz = 1; iz < g.n_space - 1; ++iz) {
          const std::size_t idx = g.index(it, ix, iy, iz);
          const Complex dtau_phi = (hi.values[idx] - lo.values[idx]) / (2.0 * dtau);
          worst = std::max(worst, std::abs(dtau_phi - box.values[idx]));
        }
  return worst;
}

double pairwise_sum(const std::vector<double>& terms) {
  struct Rec {
    static double sum(const double* p, std::size_t n) {
      if (n == 0) return 0.0;
      if (n == 1) return p[0];
      if (n == 2) return p[0] + p[1];
      const std::size_t half = n / 2;
      return sum(p, half) + sum(p + half, n - half);
    }
  };
  return Rec::sum(terms.data(), terms.size());
}

double energy_functional(const ModeLattice& state) {
  state.validate();
  std::vector<double> terms;
  terms.reserve(state.modes.size());
  for (const Mode& m : state.modes)
    terms.push_back(m.k.t * (std::norm(m.amp_particle) + std::norm(m.amp_antiparticle)));
  return pairwise_sum(terms);
}

ModeLattice phase_evolve(const ModeLattice& state, double t) {
  ModeLattice out = state;
  for (Mode& m : out.modes) {
    const Complex p = phase_exp(-m.k.t * t);
    m.amp_particle *= p;
    m.amp_antiparticle *= std::conj(p);
  }
  return out;
}

Complex windowed_xi_overlap(const ThreeVector& kvec, double xi, double xi_prime, double t_window,
                            int n_time, double box_volume) {
  if (n_time < 2) throw std::invalid_argument("windowed_xi_overlap: n_time must be >= 2");
  const double w = omega(kvec, xi);
  const double wp = omega(kvec, xi_prime);
  // product of the two pc normalizations 1/[(2pi)^2 sqrt(2 omega)]
  const double pc_norm = 1.0 / (std::pow(kTwoPi, 4.0) * 2.0 * std::sqrt(w * wp));
  const double dt = t_window / (n_time - 1);
  Complex acc{0.0, 0.0};
  for (int j = 0; j < n_time; ++j) {
    const double t = -0.5 * t_window + j * dt;
    const double weight = (j == 0 || j == n_time - 1) ? 0.5 * dt : dt;
    acc += weight * phase_exp((w - wp) * t);
  }
  return box_volume * pc_norm * acc;
}

}  // namespace kgtau
