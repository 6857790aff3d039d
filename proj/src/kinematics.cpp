#include "kgtau/kinematics.hpp"

#include <cassert>

namespace kgtau {

double omega(const ThreeVector& kvec, double xi) {
  if (xi < 0.0) throw std::domain_error("omega: xi (mass squared) must be >= 0");
  return std::sqrt(kvec.norm2() + xi);
}

double lambda_noisy(const FourVector& k, const ZetaParams& zeta) {
  const double zk = minkowski_dot(zeta.zeta(), k);
  return 2.0 * (minkowski_norm2(k) - 2.0 * zk * zk);
}

double shell_discriminant(const ThreeVector& kvec, double xi, const ZetaParams& zeta) {
  const double zs_k = zeta.zeta_spatial().dot(kvec);
  return zeta.time_factor() * (kvec.norm2() + xi) + 2.0 * zs_k * zs_k;
}

double varpi(const ThreeVector& kvec, double xi, const ZetaParams& zeta) {
  if (xi < 0.0) throw std::domain_error("varpi: xi (mass squared) must be >= 0");
  const double disc = shell_discriminant(kvec, xi, zeta);
  // Nonnegative under admissibility and xi >= 0; anything else is a logic bug.
  assert(disc >= 0.0);
  if (disc < 0.0) throw std::logic_error("varpi: negative shell discriminant");
  const double zs_k = zeta.zeta_spatial().dot(kvec);
  return (std::sqrt(disc) - 2.0 * zeta.zeta0() * zs_k) / zeta.time_factor();
}

}  // namespace kgtau
