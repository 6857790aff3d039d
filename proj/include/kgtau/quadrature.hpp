#pragma once

#include <stdexcept>
#include <vector>

namespace kgtau {

/// One-dimensional quadrature rule: paired nodes and weights.
struct QuadRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }

  template <typename F>
  auto integrate(F&& f) const {
    using R = decltype(f(0.0));
    R acc{};
    for (std::size_t i = 0; i < nodes.size(); ++i) acc += weights[i] * f(nodes[i]);
    return acc;
  }
};

/// Gauss-Legendre nodes/weights on [-1, 1], computed by Newton iteration
/// on the Legendre recurrence.
QuadRule gauss_legendre(int n);

/// Gauss-Legendre rule mapped onto [a, b].
QuadRule gauss_legendre(int n, double a, double b);

/// Composite trapezoid rule on [a, b] with n points (n >= 2).
QuadRule trapezoid_rule(int n, double a, double b);

/// Gauss-Hermite nodes/weights for the weight e^{-v^2} on (-inf, inf).
QuadRule gauss_hermite(int n);

enum class QuadScheme { gauss_legendre, trapezoid };

/// Node layout for the momentum-space integrals. Radial coordinate runs on
/// [0, k_max]; angular coordinates cover cos(theta) in [-1, 1] and
/// phi in [0, 2*pi) with n_angular nodes each.
struct QuadratureConfig {
  double k_max = 10.0;
  int n_radial = 48;
  int n_angular = 16;
  QuadScheme scheme = QuadScheme::gauss_legendre;

  void validate() const {
    if (!(k_max > 0.0)) throw std::invalid_argument("QuadratureConfig: k_max must be > 0");
    if (n_radial < 2 || n_angular < 2)
      throw std::invalid_argument("QuadratureConfig: node counts must be >= 2");
  }

  QuadRule radial_rule() const;           // on [0, k_max]
  QuadRule cos_theta_rule() const;        // on [-1, 1]
  QuadRule phi_rule() const;              // on [0, 2*pi), uniform weights for trig
  QuadRule rule_on(double a, double b, int n) const;

  QuadratureConfig refined(int factor = 2) const {
    QuadratureConfig q = *this;
    q.n_radial *= factor;
    q.n_angular *= factor;
    return q;
  }
};

}  // namespace kgtau
