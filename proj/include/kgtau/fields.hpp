#pragma once

#include <complex>
#include <vector>

#include "kgtau/kinematics.hpp"

namespace kgtau {

using Complex = std::complex<double>;

enum class ModeNormalization { kg, pc };

/// Normalized positive-energy plane wave at spacetime point x.
/// kg: [(2pi)^3 2 k^0]^{-1/2} e^{-i k.x};  pc: [(2pi)^2 (2 k^0)^{1/2}]^{-1} e^{-i k.x}.
Complex mode_function(const FourVector& k, const FourVector& x, ModeNormalization normalization);

struct Mode {
  FourVector k;
  Complex amp_particle{0.0, 0.0};
  Complex amp_antiparticle{0.0, 0.0};
};

/// Finite list of distinct momenta in (the closure of) the positive cone
/// with complex particle/antiparticle amplitudes.
struct ModeLattice {
  std::vector<Mode> modes;

  void validate() const;
};

/// Periodic spatial box [-L, L)^3 sampled at n_space points per axis
/// (x_i = -L + i * 2L/n_space, uniform cell weight), plus a time window
/// [-t_window/2, t_window/2) with n_time uniform samples. Commensurate
/// lattice momenta are pi*n/L, for which the uniform-weight sum is an exact
/// quadrature below the Nyquist mode.
struct BoxGrid {
  double L = 1.0;
  int n_space = 8;
  double t_window = 2.0;
  int n_time = 8;

  void validate() const;

  double dx() const { return 2.0 * L / n_space; }
  double dt() const { return t_window / n_time; }
  double cell_volume3() const { return dx() * dx() * dx(); }
  double cell_volume4() const { return cell_volume3() * dt(); }
  double box_volume() const { return 8.0 * L * L * L; }

  double space_coord(int i) const { return -L + i * dx(); }
  double time_coord(int j) const { return -0.5 * t_window + j * dt(); }

  std::size_t n_spatial_points() const {
    return static_cast<std::size_t>(n_space) * n_space * n_space;
  }
  std::size_t n_points() const { return n_spatial_points() * static_cast<std::size_t>(n_time); }

  std::size_t spatial_index(int ix, int iy, int iz) const {
    return (static_cast<std::size_t>(ix) * n_space + iy) * n_space + iz;
  }
  std::size_t index(int it, int ix, int iy, int iz) const {
    return static_cast<std::size_t>(it) * n_spatial_points() + spatial_index(ix, iy, iz);
  }

  /// Commensurate lattice momentum pi*n/L per axis.
  double lattice_momentum(int n) const;
};

/// Complex field sampled on the full spacetime lattice of a BoxGrid,
/// time-major: values[index(it, ix, iy, iz)].
struct SpacetimeField {
  BoxGrid grid;
  std::vector<Complex> values;

  static SpacetimeField zeros(const BoxGrid& grid) {
    return {grid, std::vector<Complex>(grid.n_points(), Complex{0.0, 0.0})};
  }
};

/// One spatial slice of a field together with its time derivative, the two
/// ingredients of the Klein-Gordon inner product. Built either from two
/// adjacent sampled slices (central difference) or analytically from a
/// mode lattice.
struct FieldSlice {
  std::vector<Complex> value;      // n_space^3 samples
  std::vector<Complex> dvalue_dt;  // same layout

  static FieldSlice from_two_slices(const std::vector<Complex>& lower,
                                    const std::vector<Complex>& upper, double dt);
};

/// Analytic sampling of sum_m [a_m e^{-i k.x} + b_m e^{+i k.x}] and its exact
/// time derivative on the spatial grid at time t.
FieldSlice sample_mode_lattice_slice(const ModeLattice& state, const BoxGrid& grid, double t);

/// Sample the same superposition on the full spacetime lattice.
SpacetimeField sample_mode_lattice(const ModeLattice& state, const BoxGrid& grid);

/// Discrete Klein-Gordon inner product
///   i * sum_x [phi^*(x) dpsi/dt - dphi^*/dt psi(x)] * dx^3.
Complex kg_inner_product(const FieldSlice& phi, const FieldSlice& psi, const BoxGrid& grid);

/// (box + xi) phi by second-order central differences in all four
/// coordinates; boundary points of the result are zero.
SpacetimeField el_residual(const SpacetimeField& phi, double xi);

double max_abs_interior(const SpacetimeField& field);

/// Max-norm residual of dPhi/dtau = box Phi for the mode superposition
/// Phi(x, tau) = sum_m amp e^{-k^2 tau} e^{-+i k.x}, with dPhi/dtau by
/// central difference in tau and box by central differences on the grid.
double mike_residual(const ModeLattice& state, double tau, double dtau, const BoxGrid& grid);

/// sum_m k^0 (|amp_particle|^2 + |amp_antiparticle|^2), pairwise-summed.
double energy_functional(const ModeLattice& state);

/// Heisenberg phase evolution: particle amplitudes pick up e^{-i k^0 t},
/// antiparticle amplitudes e^{+i k^0 t}.
ModeLattice phase_evolve(const ModeLattice& state, double t);

/// Finite-window overlap of two pc-normalized modes sharing the spatial
/// momentum kvec: box_volume * int_{-T/2}^{T/2} g*_{k,xi} g_{k,xi'} dt by
/// trapezoid. Peaks at xi = xi' with width shrinking like 1/T.
Complex windowed_xi_overlap(const ThreeVector& kvec, double xi, double xi_prime, double t_window,
                            int n_time, double box_volume);

/// Deterministic pairwise reduction; summation order is a balanced binary
/// tree over the input order.
double pairwise_sum(const std::vector<double>& terms);

}  // namespace kgtau
