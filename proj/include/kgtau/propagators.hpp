#pragma once

#include <complex>
#include <vector>

#include "kgtau/kinematics.hpp"
#include "kgtau/quadrature.hpp"

namespace kgtau {

enum class KernelKind {
  wightman,
  feynman,
  phi_tau,
  noisy_feynman,
  commutator_fixed_mass,
  commutator_cutoff,
};

/// Parameter bundle for a two-point kernel. Only the fields relevant to
/// `kind` are read; validate() checks those and ignores the rest.
struct KernelSpec {
  KernelKind kind = KernelKind::feynman;
  double xi = 1.0;
  double tau = 0.0;
  double xi_max = 0.0;
  ZetaParams zeta{};

  void validate() const;
};

/// Vacuum two-point function without time ordering, cut off at |k| <= k_max:
///   int d^3k e^{-i(omega dx^0 - k.dx)} / ((2pi)^3 2 omega).
/// Spatially isotropic arguments collapse to the radial reduction.
std::complex<double> wightman(const FourVector& dx, double xi, const QuadratureConfig& q);

/// Time-ordered two-point function: the wightman branch selected by the sign
/// of x^0 - y^0; the equal-time tie averages the two branches.
std::complex<double> feynman(const FourVector& x, const FourVector& y, double xi,
                             const QuadratureConfig& q);

/// Equal-tau kernel of the tau-evolved field:
///   (2pi)^{-3} int_{cone} d^4k e^{-2 k.k tau} e^{-i k.dx},
/// with |k| <= k_max and k^0 in (|k|, sqrt(k_max^2 + xi_max)].
std::complex<double> phi_tau_kernel(const FourVector& dx, double tau, double xi_max,
                                    const QuadratureConfig& q);

/// Noise-averaged time-ordered kernel:
///   (2pi)^{-3/2} int d^3k D(k)^{-1/2} [theta(dt) e^{-i(varpi dt - k.dx)} + theta(-dt) e^{+i(...)}]
/// with D = (1 - 2 zeta0^2)(|k|^2 + xi) + 2 (zeta_s.k)^2 and frequency varpi.
std::complex<double> noisy_feynman(const FourVector& x, const FourVector& y, double xi,
                                   const ZetaParams& zeta, const QuadratureConfig& q);

/// c-number commutator kernels. kind = commutator_fixed_mass integrates the
/// antisymmetrized on-shell measure at mass spec.xi; commutator_cutoff
/// integrates the positive cone up to mass-squared spec.xi_max.
std::complex<double> commutator_kernel(const FourVector& dx, const KernelSpec& spec,
                                       const QuadratureConfig& q);

/// Stationary dispatch: every kernel kind evaluated as a function of the
/// separation dx = x - y.
std::complex<double> evaluate_kernel(const FourVector& dx, const KernelSpec& spec,
                                     const QuadratureConfig& q);

// --- shared momentum-space machinery -------------------------------------

struct MomentumNode {
  ThreeVector k;
  double weight;  // includes r^2 and the angular measure
};

/// Tensorized spherical nodes for int d^3k over |k| <= k_max.
std::vector<MomentumNode> tensor_momentum_nodes(const QuadratureConfig& q);

/// Integrand weights shared between the kernels and the positivity
/// functionals. free: 1 / ((2pi)^3 2 omega); noisy: (2pi)^{-3/2} / sqrt(D).
double free_kernel_weight(const ThreeVector& k, double xi);
double noisy_kernel_weight(const ThreeVector& k, double xi, const ZetaParams& zeta);

}  // namespace kgtau
