#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include "kgtau/kinematics.hpp"

namespace kgtau {

/// Measure on the mass-squared axis xi in [0, inf): a finite sum of point
/// atoms plus an optional density sampled on an ascending grid. Atoms are
/// first-class so that exact delta contributions never pass through a
/// quadrature.
struct SpectralMeasure {
  struct Atom {
    double xi = 0.0;
    double weight = 0.0;
  };

  std::vector<Atom> atoms;
  std::vector<double> grid;    // strictly ascending, >= 2 points when present
  std::vector<double> values;  // density samples, same length as grid

  bool has_density() const { return !grid.empty(); }
  bool empty() const { return atoms.empty() && grid.empty(); }

  void validate() const;

  static SpectralMeasure from_atom(double xi, double weight) {
    SpectralMeasure m;
    m.atoms.push_back({xi, weight});
    m.validate();
    return m;
  }

  static SpectralMeasure from_density(std::vector<double> xi_grid, std::vector<double> density) {
    SpectralMeasure m;
    m.grid = std::move(xi_grid);
    m.values = std::move(density);
    m.validate();
    return m;
  }
};

/// Laplace transform of the measure at tau >= 0:
///   sum_i w_i e^{-tau xi_i} + trapezoid of density(xi) e^{-tau xi}.
double laplace_forward(const SpectralMeasure& measure, double tau);

/// Inverse Laplace transform on the exponential-step family.
/// half_scaling=false: L^{-1}[e^{-a tau} theta(a)] = delta(xi - a), an atom
/// of weight 1 at xi=a for a > 0 and the empty measure otherwise.
/// half_scaling=true: the transform taken at argument 2*xi, which halves the
/// atom weight: delta at xi=a with weight 1/2.
SpectralMeasure inverse_laplace_expstep(double a, bool half_scaling);

/// Convolution on the mass axis: int_0^xi f(xi - s) g(s) ds, composite
/// Gauss-Legendre with `panels` panels of 8 nodes.
double xi_convolution(const std::function<double(double)>& f,
                      const std::function<double(double)>& g, double xi, int panels = 32);

/// Spectral integral of a two-point kernel against the measure:
///   sum_i w_i K(xi_i, x) + trapezoid of density(xi) K(xi, x).
std::complex<double> kl_spectral_integral(
    const SpectralMeasure& rho,
    const std::function<std::complex<double>(double, const FourVector&)>& kernel,
    const FourVector& x);

}  // namespace kgtau
