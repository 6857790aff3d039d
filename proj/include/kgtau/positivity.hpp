#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "kgtau/fields.hpp"
#include "kgtau/propagators.hpp"

namespace kgtau {

/// Test function on the spacetime box: either explicit grid samples or a
/// parametric Gaussian wave packet
///   f(x) = amplitude * exp(-sum_mu (x_mu - center_mu)^2 / (2 widths_mu^2))
///          * e^{-i carrier.x}   (Minkowski dot in the carrier phase).
struct TestFunction {
  enum class Form { grid, gaussian_packet };

  Form form = Form::gaussian_packet;

  // gaussian_packet parameters
  FourVector center{};
  std::array<double, 4> widths{1.0, 1.0, 1.0, 1.0};
  FourVector carrier{};
  Complex amplitude{1.0, 0.0};

  // grid samples (form == grid)
  SpacetimeField samples;

  void validate() const;

  Complex eval_packet(const FourVector& x) const;

  /// Samples on the given grid (packets are evaluated, grid form must match).
  std::vector<Complex> sample_on(const BoxGrid& grid) const;

  /// Per-axis factors for separable (packet) functions:
  /// f = amplitude * axis[0][it] * axis[1][ix] * axis[2][iy] * axis[3][iz].
  struct Separable {
    std::array<std::vector<Complex>, 4> axis;
    Complex amplitude;
  };
  std::optional<Separable> separable_on(const BoxGrid& grid) const;
};

enum class Verdict { positive, violated, inconclusive };

std::string to_string(Verdict v);

struct PerFunctionResult {
  int id = 0;
  double re = 0.0;
  double im = 0.0;
  bool ok = true;
  std::string error;
};

/// Result of a positivity sweep over a family of test functions.
struct KernelReport {
  KernelSpec kernel;
  QuadratureConfig quadrature;
  double tolerance = 1e-8;
  std::uint64_t seed = 0;
  std::vector<PerFunctionResult> per_function;
  double min_re = 0.0;
  double min_im = 0.0;
  double scale = 0.0;  // max |sigma[f]| over the sweep
  Verdict verdict_re = Verdict::inconclusive;
};

/// Direct double spacetime integral of f^* sigma f for an arbitrary
/// two-point kernel. Cost is quadratic in grid points; pair_cap guards
/// against accidental huge grids.
Complex functional_direct(
    const std::function<Complex(const FourVector&, const FourVector&)>& kernel,
    const TestFunction& f, const BoxGrid& grid, std::size_t pair_cap = 4'000'000);

/// Direct path for stationary kernels sigma(x, y) = K(x - y): the kernel is
/// tabulated once over all lattice separations, then the double sum runs on
/// table lookups.
Complex functional_direct_stationary(const KernelSpec& spec, const TestFunction& f,
                                     const BoxGrid& grid, const QuadratureConfig& q);

/// Momentum-factorized functional for the noisy time-ordered kernel.
/// The real part is assembled as sum_k w(k) (|C(k)|^2 + |S(k)|^2) with
/// C = int f cos(kx), S = int f sin(kx) and k^0 = varpi, so it is
/// nonnegative term by term. The imaginary part carries the
/// theta-difference sine term.
Complex functional_momentum_noisy(const TestFunction& f, double xi, const ZetaParams& zeta,
                                  const BoxGrid& grid, const QuadratureConfig& q);

/// Same factorization for the fixed-mass time-ordered kernel
/// (weight 1/((2pi)^3 2 omega), frequency omega).
Complex functional_momentum_free(const TestFunction& f, double xi, const BoxGrid& grid,
                                 const QuadratureConfig& q);

/// Magnitude of the real part of the theta-difference term alone, after
/// symmetrizing over the two integration variables. Vanishing values
/// confirm that the term is purely imaginary.
double imaginary_antisymmetry_check(const TestFunction& f, double xi, const ZetaParams& zeta,
                                    const BoxGrid& grid, const QuadratureConfig& q);

struct SweepOptions {
  double tolerance = 1e-8;
  std::uint64_t seed = 0;  // recorded in the report
  int threads = 0;         // 0: hardware concurrency
};

using FunctionalEvaluator = std::function<Complex(const TestFunction&)>;

/// Evaluate sigma[f] over the family and assemble verdicts. The momentum
/// path is used for the time-ordered kinds, the stationary direct path for
/// everything else.
KernelReport sweep(const KernelSpec& spec, const std::vector<TestFunction>& family,
                   const BoxGrid& grid, const QuadratureConfig& q, const SweepOptions& options);

/// Sweep against a caller-supplied functional; used for sanity inversions
/// and custom kernels.
KernelReport sweep_with(const FunctionalEvaluator& evaluate, const KernelSpec& spec_recorded,
                        const std::vector<TestFunction>& family, const QuadratureConfig& q,
                        const SweepOptions& options);

struct PacketRanges {
  double center_frac = 0.35;   // of the half-extent per axis
  double width_frac_min = 0.10;  // of the full extent per axis
  double width_frac_max = 0.30;
  double carrier_max = 2.5;
  double amp_min = 0.5;
  double amp_max = 2.0;
};

/// Seeded Gaussian-packet family with randomized centers, widths, carriers
/// and amplitudes drawn from the configured ranges.
std::vector<TestFunction> make_packet_family(int n, const BoxGrid& grid, std::uint64_t seed,
                                             const PacketRanges& ranges = {});

/// Seeded rough family: complex grid noise smoothed by one diffusion pass.
std::vector<TestFunction> make_noise_family(int n, const BoxGrid& grid, std::uint64_t seed);

}  // namespace kgtau
