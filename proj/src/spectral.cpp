#include "kgtau/spectral.hpp"

#include <cmath>

#include "kgtau/quadrature.hpp"

namespace kgtau {

void SpectralMeasure::validate() const {
  for (const Atom& a : atoms)
    if (a.xi < 0.0) throw std::invalid_argument("SpectralMeasure: atom location must be >= 0");
  if (!grid.empty()) {
    if (grid.size() < 2) throw std::invalid_argument("SpectralMeasure: density grid needs >= 2 points");
    if (grid.size() != values.size())
      throw std::invalid_argument("SpectralMeasure: grid/values size mismatch");
    if (grid.front() < 0.0) throw std::invalid_argument("SpectralMeasure: grid must lie in [0, inf)");
    for (std::size_t i = 1; i < grid.size(); ++i)
      if (!(grid[i] > grid[i - 1]))
        throw std::invalid_argument("SpectralMeasure: grid must be strictly ascending");
  } else if (!values.empty()) {
    throw std::invalid_argument("SpectralMeasure: density values without a grid");
  }
}

namespace {

// trapezoid over a (possibly nonuniform) ascending grid
template <typename F>
auto grid_trapezoid(const std::vector<double>& grid, const std::vector<double>& values, F&& weight) {
  using R = decltype(weight(0.0) * 0.0);
  R acc{};
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double h = grid[i + 1] - grid[i];
    acc += 0.5 * h * (values[i] * weight(grid[i]) + values[i + 1] * weight(grid[i + 1]));
  }
  return acc;
}

}  // namespace

double laplace_forward(const SpectralMeasure& measure, double tau) {
  if (tau < 0.0) throw std::domain_error("laplace_forward: tau must be >= 0");
  measure.validate();
  double acc = 0.0;
  for (const SpectralMeasure::Atom& a : measure.atoms) acc += a.weight * std::exp(-tau * a.xi);
  if (measure.has_density())
    acc += grid_trapezoid(measure.grid, measure.values, [tau](double xi) { return std::exp(-tau * xi); });
  return acc;
}

SpectralMeasure inverse_laplace_expstep(double a, bool half_scaling) {
  SpectralMeasure m;
  if (a > 0.0) m.atoms.push_back({a, half_scaling ? 0.5 : 1.0});
  return m;
}

double xi_convolution(const std::function<double(double)>& f,
                      const std::function<double(double)>& g, double xi, int panels) {
  if (xi < 0.0) throw std::domain_error("xi_convolution: xi must be >= 0");
  if (panels < 1) throw std::invalid_argument("xi_convolution: panels must be >= 1");
  if (xi == 0.0) return 0.0;
  const QuadRule base = gauss_legendre(8);
  const double h = xi / panels;
  double acc = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double a = p * h;
    const double mid = a + 0.5 * h;
    for (std::size_t i = 0; i < base.size(); ++i) {
      const double s = mid + 0.5 * h * base.nodes[i];
      acc += 0.5 * h * base.weights[i] * f(xi - s) * g(s);
    }
  }
  return acc;
}

std::complex<double> kl_spectral_integral(
    const SpectralMeasure& rho,
    const std::function<std::complex<double>(double, const FourVector&)>& kernel,
    const FourVector& x) {
  rho.validate();
  std::complex<double> acc = 0.0;
  for (const SpectralMeasure::Atom& a : rho.atoms) acc += a.weight * kernel(a.xi, x);
  for (std::size_t i = 0; i + 1 < rho.grid.size(); ++i) {
    const double h = rho.grid[i + 1] - rho.grid[i];
    acc += 0.5 * h *
           (rho.values[i] * kernel(rho.grid[i], x) + rho.values[i + 1] * kernel(rho.grid[i + 1], x));
  }
  return acc;
}

}  // namespace kgtau
