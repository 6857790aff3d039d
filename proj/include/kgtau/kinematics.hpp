#pragma once

#include <cmath>
#include <stdexcept>

namespace kgtau {

struct ThreeVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr double dot(const ThreeVector& o) const { return x * o.x + y * o.y + z * o.z; }
  constexpr double norm2() const { return dot(*this); }
  double norm() const { return std::sqrt(norm2()); }

  constexpr ThreeVector operator+(const ThreeVector& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr ThreeVector operator-(const ThreeVector& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr ThreeVector operator-() const { return {-x, -y, -z}; }
  constexpr ThreeVector operator*(double s) const { return {x * s, y * s, z * s}; }
};

/// Four-vector with metric signature (+,-,-,-). The zeroth component is
/// energy or time depending on context, in natural units.
struct FourVector {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr ThreeVector spatial() const { return {x, y, z}; }

  constexpr FourVector operator+(const FourVector& o) const { return {t + o.t, x + o.x, y + o.y, z + o.z}; }
  constexpr FourVector operator-(const FourVector& o) const { return {t - o.t, x - o.x, y - o.y, z - o.z}; }
  constexpr FourVector operator-() const { return {-t, -x, -y, -z}; }
  constexpr FourVector operator*(double s) const { return {t * s, x * s, y * s, z * s}; }

  constexpr bool operator==(const FourVector& o) const = default;
};

constexpr double minkowski_dot(const FourVector& a, const FourVector& b) {
  return a.t * b.t - a.x * b.x - a.y * b.y - a.z * b.z;
}

constexpr double minkowski_norm2(const FourVector& a) { return minkowski_dot(a, a); }

/// Dispersion relation: sqrt(|kvec|^2 + xi) for mass-squared xi >= 0.
/// Negative xi is rejected outright; imaginary masses are out of domain.
double omega(const ThreeVector& kvec, double xi);

/// True iff k is timelike with positive energy (k^0 > 0 and k.k > 0).
constexpr bool in_positive_cone(const FourVector& k) {
  return k.t > 0.0 && minkowski_norm2(k) > 0.0;
}

/// Noise coupling four-vector. Construction enforces the admissibility
/// condition 1 - 2*(zeta^0)^2 > 0 with a small safety margin, since the
/// shifted-frequency formulas divide by that factor.
class ZetaParams {
 public:
  static constexpr double kAdmissibilityMargin = 1e-12;

  ZetaParams() = default;  // zeta = 0, always admissible
  explicit ZetaParams(const FourVector& zeta) : zeta_(zeta) {
    if (!(time_factor() > kAdmissibilityMargin))
      throw std::invalid_argument("ZetaParams: 1 - 2*(zeta^0)^2 must exceed the admissibility margin");
  }

  const FourVector& zeta() const { return zeta_; }
  double zeta0() const { return zeta_.t; }
  ThreeVector zeta_spatial() const { return zeta_.spatial(); }

  /// 1 - 2*(zeta^0)^2, strictly positive by construction.
  double time_factor() const { return 1.0 - 2.0 * zeta_.t * zeta_.t; }

  bool is_zero() const { return zeta_ == FourVector{}; }

 private:
  FourVector zeta_{};
};

/// Diagonal Liouville eigenvalue 2*[k^2 - 2*(zeta.k)^2]; reduces to 2*k^2
/// for zeta = 0.
double lambda_noisy(const FourVector& k, const ZetaParams& zeta);

/// Discriminant of the shifted mass-shell quadratic,
///   (1 - 2*(zeta^0)^2) * (|kvec|^2 + xi) + 2*(zeta_s . kvec)^2,
/// shared by varpi and the noisy propagator weight.
double shell_discriminant(const ThreeVector& kvec, double xi, const ZetaParams& zeta);

/// Positive root of xi = K^2 - 2*(zeta.K)^2 in K^0 with K = (varpi, kvec).
/// Closed form; collapses to omega(kvec, xi) at zeta = 0.
double varpi(const ThreeVector& kvec, double xi, const ZetaParams& zeta);

}  // namespace kgtau
