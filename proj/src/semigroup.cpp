#include "kgtau/semigroup.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "kgtau/quadrature.hpp"

namespace kgtau {

void CoeffMatrix::validate() const {
  if (rho.size() != lattice.size() * lattice.size())
    throw std::invalid_argument("CoeffMatrix: rho must be n x n over the lattice");
  for (const FourVector& k : lattice)
    if (!in_positive_cone(k))
      throw std::invalid_argument("CoeffMatrix: lattice momenta must lie in the positive cone");
  for (std::size_t i = 0; i < lattice.size(); ++i)
    for (std::size_t j = i + 1; j < lattice.size(); ++j)
      if (lattice[i] == lattice[j])
        throw std::invalid_argument("CoeffMatrix: lattice momenta must be distinct");
}

bool CoeffMatrix::is_hermitian(double tol) const {
  double scale = 0.0;
  for (const Complex& v : rho) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return true;
  for (std::size_t i = 0; i < n(); ++i)
    for (std::size_t j = 0; j <= i; ++j)
      if (std::abs(at(i, j) - std::conj(at(j, i))) > tol * scale) return false;
  return true;
}

CoeffMatrix CoeffMatrix::zeros(std::vector<FourVector> lattice) {
  CoeffMatrix m;
  m.lattice = std::move(lattice);
  m.rho.assign(m.lattice.size() * m.lattice.size(), Complex{0.0, 0.0});
  m.validate();
  return m;
}

double semigroup_lambda(const FourVector& ki, const FourVector& kj, const ZetaParams& zeta) {
  const double zi = minkowski_dot(zeta.zeta(), ki);
  const double zj = minkowski_dot(zeta.zeta(), kj);
  return minkowski_norm2(ki) + minkowski_norm2(kj) - (zi + zj) * (zi + zj);
}

ModeLattice mike_evolve(const ModeLattice& state, double tau) {
  if (tau < 0.0) throw std::domain_error("mike_evolve: tau must be >= 0");
  ModeLattice out = state;
  for (Mode& m : out.modes) {
    const double f = std::exp(-minkowski_norm2(m.k) * tau);
    m.amp_particle *= f;
    m.amp_antiparticle *= f;
  }
  return out;
}

CoeffMatrix liouville_apply(const CoeffMatrix& rho, const ZetaParams& zeta) {
  rho.validate();
  CoeffMatrix out = rho;
  for (std::size_t i = 0; i < rho.n(); ++i)
    for (std::size_t j = 0; j < rho.n(); ++j)
      out.at(i, j) *= semigroup_lambda(rho.lattice[i], rho.lattice[j], zeta);
  return out;
}

CoeffMatrix gaussian_kraus_map(const CoeffMatrix& rho, const ZetaParams& zeta, double tau,
                               KrausMode mode, int order) {
  if (tau < 0.0) throw std::domain_error("gaussian_kraus_map: tau must be >= 0");
  rho.validate();
  const std::size_t n = rho.n();
  std::vector<double> zk(n);
  for (std::size_t i = 0; i < n; ++i) zk[i] = minkowski_dot(zeta.zeta(), rho.lattice[i]);

  CoeffMatrix out = rho;
  const double sqrt_tau = std::sqrt(tau);
  if (mode == KrausMode::closed_form) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const double c = (zk[i] + zk[j]) * sqrt_tau;
        out.at(i, j) *= std::exp(c * c);
      }
    return out;
  }
  // quadrature: (2 sqrt(pi))^{-1} int du e^{-u^2/4} e^{-u c} with u = 2v
  // becomes pi^{-1/2} sum_m w_m e^{-2 v_m c} on the e^{-v^2} weight.
  const QuadRule gh = gauss_hermite(order);
  const double inv_sqrt_pi = 1.0 / std::sqrt(std::numbers::pi);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double c = (zk[i] + zk[j]) * sqrt_tau;
      double avg = 0.0;
      for (std::size_t m = 0; m < gh.size(); ++m) avg += gh.weights[m] * std::exp(-2.0 * gh.nodes[m] * c);
      out.at(i, j) *= inv_sqrt_pi * avg;
    }
  return out;
}

CoeffMatrix full_semigroup_step(const CoeffMatrix& rho, const ZetaParams& zeta, double tau) {
  if (tau < 0.0) throw std::domain_error("full_semigroup_step: tau must be >= 0");
  rho.validate();
  const std::size_t n = rho.n();
  std::vector<double> free_factor(n), zk(n);
  for (std::size_t i = 0; i < n; ++i) {
    free_factor[i] = std::exp(-minkowski_norm2(rho.lattice[i]) * tau);
    zk[i] = minkowski_dot(zeta.zeta(), rho.lattice[i]);
  }
  const double sqrt_tau = std::sqrt(tau);
  CoeffMatrix out = rho;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double c = (zk[i] + zk[j]) * sqrt_tau;
      out.at(i, j) *= free_factor[i] * free_factor[j] * std::exp(c * c);
    }
  return out;
}

CoeffMatrix stability_filter(const CoeffMatrix& rho, const ZetaParams& zeta) {
  rho.validate();
  CoeffMatrix out = rho;
  const std::size_t n = rho.n();
  std::vector<bool> keep(n);
  for (std::size_t i = 0; i < n; ++i)
    keep[i] = lambda_noisy(rho.lattice[i], zeta) > 0.0 && rho.lattice[i].t > 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (!keep[i] || !keep[j]) out.at(i, j) = Complex{0.0, 0.0};
  return out;
}

CoeffMatrix outer_product(const ModeLattice& state) {
  state.validate();
  CoeffMatrix m;
  m.lattice.reserve(state.modes.size());
  for (const Mode& mode : state.modes) m.lattice.push_back(mode.k);
  m.rho.resize(m.lattice.size() * m.lattice.size());
  for (std::size_t i = 0; i < state.modes.size(); ++i)
    for (std::size_t j = 0; j < state.modes.size(); ++j)
      m.rho[i * m.lattice.size() + j] =
          state.modes[i].amp_particle * std::conj(state.modes[j].amp_particle);
  m.validate();
  return m;
}

double von_neumann_residual(const ModeLattice& state, double tau, double h) {
  if (!(tau > 0.0) || !(h > 0.0)) throw std::domain_error("von_neumann_residual: tau, h must be > 0");
  if (!(h < tau)) throw std::domain_error("von_neumann_residual: need h < tau");
  state.validate();

  // amplitude labels: both sectors, each carrying its momentum's k^2
  std::vector<double> k2;
  std::vector<Complex> amp;
  for (const Mode& m : state.modes) {
    const double kk = minkowski_norm2(m.k);
    k2.push_back(kk);
    amp.push_back(m.amp_particle);
    k2.push_back(kk);
    amp.push_back(m.amp_antiparticle);
  }
  const std::size_t n = amp.size();
  auto damped = [&](double t, std::size_t i) { return amp[i] * std::exp(-k2[i] * t); };

  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const Complex mid = damped(tau, i) * std::conj(damped(tau, j));
      const Complex hi = damped(tau + h, i) * std::conj(damped(tau + h, j));
      const Complex lo = damped(tau - h, i) * std::conj(damped(tau - h, j));
      const Complex residual = (hi - lo) / (2.0 * h) + (k2[i] + k2[j]) * mid;
      worst = std::max(worst, std::abs(residual));
    }
  return worst;
}

}  // namespace kgtau
