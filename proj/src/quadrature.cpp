#include "kgtau/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace kgtau {

QuadRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  QuadRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);

  const int m = (n + 1) / 2;  // roots come in +- pairs
  for (int i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1);
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - z * z) * pp * pp);
    rule.nodes[i] = -z;
    rule.nodes[n - 1 - i] = z;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

QuadRule gauss_legendre(int n, double a, double b) {
  QuadRule rule = gauss_legendre(n);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = mid + half * rule.nodes[i];
    rule.weights[i] *= half;
  }
  return rule;
}

QuadRule trapezoid_rule(int n, double a, double b) {
  if (n < 2) throw std::invalid_argument("trapezoid_rule: n must be >= 2");
  QuadRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double h = (b - a) / (n - 1);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = a + i * h;
    rule.weights[i] = (i == 0 || i == n - 1) ? 0.5 * h : h;
  }
  return rule;
}

QuadRule gauss_hermite(int n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite: n must be >= 1");
  QuadRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);

  // Newton iteration on orthonormal Hermite polynomials; the normalized
  // recurrence keeps values bounded for large n.
  const double pim4 = 0.7511255444649425;  // pi^{-1/4}
  const int m = (n + 1) / 2;
  double z = 0.0;
  for (int i = 0; i < m; ++i) {
    if (i == 0) {
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
    } else if (i == 1) {
      z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * rule.nodes[n - 1];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * rule.nodes[n - 2];
    } else {
      z = 2.0 * z - rule.nodes[n - i + 1];
    }
    double pp = 0.0;
    for (int iter = 0; iter < 200; ++iter) {
      double p1 = pim4, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1.0)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1.0)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-14) break;
    }
    rule.nodes[n - 1 - i] = z;
    rule.nodes[i] = -z;
    rule.weights[n - 1 - i] = 2.0 / (pp * pp);
    rule.weights[i] = rule.weights[n - 1 - i];
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;  // symmetric rule, center node exact
  return rule;
}

QuadRule QuadratureConfig::rule_on(double a, double b, int n) const {
  if (scheme == QuadScheme::gauss_legendre) return gauss_legendre(n, a, b);
  // uniform composite trapezoid
  return trapezoid_rule(n, a, b);
}

QuadRule QuadratureConfig::radial_rule() const { return rule_on(0.0, k_max, n_radial); }

QuadRule QuadratureConfig::cos_theta_rule() const { return rule_on(-1.0, 1.0, n_angular); }

QuadRule QuadratureConfig::phi_rule() const {
  // periodic direction: the uniform midpoint rule is spectrally accurate and
  // avoids the duplicated endpoint of a closed trapezoid
  QuadRule rule;
  rule.nodes.resize(n_angular);
  rule.weights.resize(n_angular);
  const double h = 2.0 * std::numbers::pi / n_angular;
  for (int i = 0; i < n_angular; ++i) {
    rule.nodes[i] = (i + 0.5) * h;
    rule.weights[i] = h;
  }
  return rule;
}

}  // namespace kgtau
