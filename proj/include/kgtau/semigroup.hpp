#pragma once

#include <complex>
#include <vector>

#include "kgtau/fields.hpp"
#include "kgtau/kinematics.hpp"

namespace kgtau {

/// Density coefficients over a finite momentum lattice: rho(i, j) multiplies
/// the dyad |k_i><k_j|. Every map in this module is an entrywise multiplier
/// in this basis, where all the generators are diagonal functions of the
/// momentum operator.
struct CoeffMatrix {
  std::vector<FourVector> lattice;
  std::vector<Complex> rho;  // row-major, lattice.size()^2 entries

  std::size_t n() const { return lattice.size(); }

  Complex& at(std::size_t i, std::size_t j) { return rho[i * n() + j]; }
  const Complex& at(std::size_t i, std::size_t j) const { return rho[i * n() + j]; }

  void validate() const;
  bool is_hermitian(double tol = 1e-14) const;

  static CoeffMatrix zeros(std::vector<FourVector> lattice);
};

/// Entrywise eigenvalue of the Liouville map on |k_i><k_j|:
///   k_i^2 + k_j^2 - (zeta.k_i + zeta.k_j)^2.
double semigroup_lambda(const FourVector& ki, const FourVector& kj, const ZetaParams& zeta);

/// tau-evolution of a mode superposition: every amplitude damped by
/// e^{-k.k tau}.
ModeLattice mike_evolve(const ModeLattice& state, double tau);

/// Liouville operator applied once: entry (i, j) scaled by
/// semigroup_lambda(k_i, k_j, zeta).
CoeffMatrix liouville_apply(const CoeffMatrix& rho, const ZetaParams& zeta);

enum class KrausMode { closed_form, quadrature };

/// Gaussian-averaged conjugation by e^{-u zeta.k sqrt(tau)} with weight
/// e^{-u^2/4} / (2 sqrt(pi)). closed_form multiplies entry (i, j) by
/// e^{tau (zeta.k_i + zeta.k_j)^2}; quadrature performs the same average with
/// a Gauss-Hermite rule of the given order (substituting u = 2v onto the
/// standard e^{-v^2} weight).
CoeffMatrix gaussian_kraus_map(const CoeffMatrix& rho, const ZetaParams& zeta, double tau,
                               KrausMode mode, int order = 48);

/// Free damping composed with the closed-form noise average: entry (i, j)
/// multiplied by e^{-k_i^2 tau} e^{-k_j^2 tau} e^{tau (zeta.k_i + zeta.k_j)^2},
/// i.e. e^{-lambda_ij tau}.
CoeffMatrix full_semigroup_step(const CoeffMatrix& rho, const ZetaParams& zeta, double tau);

/// Removes unstable modes: rows and columns of momenta with
/// lambda_noisy(k, zeta) <= 0 or k^0 <= 0 are zeroed.
CoeffMatrix stability_filter(const CoeffMatrix& rho, const ZetaParams& zeta);

/// Builds rho(tau) as the outer product of the mike-evolved amplitude vector
/// (both sectors; each label carries its momentum's k^2) and returns the
/// max-norm of [rho(tau+h) - rho(tau-h)] / (2h) + (k_i^2 + k_j^2) rho_ij(tau).
double von_neumann_residual(const ModeLattice& state, double tau, double h);

/// Outer product of the particle-sector amplitudes over the mode lattice.
CoeffMatrix outer_product(const ModeLattice& state);

}  // namespace kgtau
