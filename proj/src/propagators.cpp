#include "kgtau/propagators.hpp"

#include <cmath>
#include <numbers>

namespace kgtau {

namespace {

using Complex = std::complex<double>;

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const double kInvTwoPiCubed = 1.0 / (kTwoPi * kTwoPi * kTwoPi);

Complex phase_exp(double arg) { return {std::cos(arg), std::sin(arg)}; }

}  // namespace

void KernelSpec::validate() const {
  switch (kind) {
    case KernelKind::wightman:
    case KernelKind::feynman:
    case KernelKind::noisy_feynman:
    case KernelKind::commutator_fixed_mass:
      if (xi < 0.0) throw std::invalid_argument("KernelSpec: xi must be >= 0");
      break;
    case KernelKind::phi_tau:
      if (!(tau > 0.0)) throw std::invalid_argument("KernelSpec: tau must be > 0");
      if (!(xi_max > 0.0)) throw std::invalid_argument("KernelSpec: xi_max must be > 0");
      break;
    case KernelKind::commutator_cutoff:
      if (!(xi_max > 0.0)) throw std::invalid_argument("KernelSpec: xi_max must be > 0");
      break;
  }
}

double free_kernel_weight(const ThreeVector& k, double xi) {
  return kInvTwoPiCubed / (2.0 * std::sqrt(k.norm2() + xi));
}

double noisy_kernel_weight(const ThreeVector& k, double xi, const ZetaParams& zeta) {
  return std::pow(kTwoPi, -1.5) / std::sqrt(shell_discriminant(k, xi, zeta));
}

std::vector<MomentumNode> tensor_momentum_nodes(const QuadratureConfig& q) {
  q.validate();
  const QuadRule rad = q.radial_rule();
  const QuadRule ct = q.cos_theta_rule();
  const QuadRule ph = q.phi_rule();
  std::vector<MomentumNode> nodes;
  nodes.reserve(rad.size() * ct.size() * ph.size());
  for (std::size_t ir = 0; ir < rad.size(); ++ir) {
    const double r = rad.nodes[ir];
    const double wr = rad.weights[ir] * r * r;
    for (std::size_t iu = 0; iu < ct.size(); ++iu) {
      const double u = ct.nodes[iu];
      const double s = std::sqrt(std::max(0.0, 1.0 - u * u));
      for (std::size_t ip = 0; ip < ph.size(); ++ip) {
        const double phi = ph.nodes[ip];
        nodes.push_back({{r * s * std::cos(phi), r * s * std::sin(phi), r * u},
                         wr * ct.weights[iu] * ph.weights[ip]});
      }
    }
  }
  return nodes;
}

namespace {

// int d^3k f(r, k.e) for an integrand axisymmetric about the unit vector e;
// the phi integral contributes the exact factor 2*pi.
template <typename F>
Complex integrate_axisymmetric(const QuadratureConfig& q, F&& f) {
  const QuadRule rad = q.radial_rule();
  const QuadRule ct = q.cos_theta_rule();
  Complex acc{0.0, 0.0};
  for (std::size_t ir = 0; ir < rad.size(); ++ir) {
    const double r = rad.nodes[ir];
    const double wr = rad.weights[ir] * r * r;
    Complex inner{0.0, 0.0};
    for (std::size_t iu = 0; iu < ct.size(); ++iu)
      inner += ct.weights[iu] * f(r, r * ct.nodes[iu]);
    acc += wr * inner;
  }
  return kTwoPi * acc;
}

// int d^3k f(r) for a fully isotropic integrand: 4*pi * int r^2 f(r) dr.
template <typename F>
Complex integrate_radial(const QuadratureConfig& q, F&& f) {
  const QuadRule rad = q.radial_rule();
  Complex acc{0.0, 0.0};
  for (std::size_t ir = 0; ir < rad.size(); ++ir) {
    const double r = rad.nodes[ir];
    acc += rad.weights[ir] * r * r * f(r);
  }
  return 2.0 * kTwoPi * acc;
}

}  // namespace

Complex wightman(const FourVector& dx, double xi, const QuadratureConfig& q) {
  if (xi < 0.0) throw std::domain_error("wightman: xi must be >= 0");
  q.validate();
  const ThreeVector dxs = dx.spatial();
  const double dr = dxs.norm();
  if (dr == 0.0) {
    return integrate_radial(q, [&](double r) {
      const double w = std::sqrt(r * r + xi);
      return kInvTwoPiCubed / (2.0 * w) * phase_exp(-w * dx.t);
    });
  }
  // axisymmetric about dx: k.dx = k_parallel * dr
  return integrate_axisymmetric(q, [&](double r, double k_par) {
    const double w = std::sqrt(r * r + xi);
    return kInvTwoPiCubed / (2.0 * w) * phase_exp(-(w * dx.t - k_par * dr));
  });
}

Complex feynman(const FourVector& x, const FourVector& y, double xi, const QuadratureConfig& q) {
  const double dt = x.t - y.t;
  if (dt > 0.0) return wightman(x - y, xi, q);
  if (dt < 0.0) return wightman(y - x, xi, q);
  return 0.5 * (wightman(x - y, xi, q) + wightman(y - x, xi, q));
}

Complex phi_tau_kernel(const FourVector& dx, double tau, double xi_max, const QuadratureConfig& q) {
  if (!(tau > 0.0)) throw std::domain_error("phi_tau_kernel: tau must be > 0 (integral diverges)");
  if (!(xi_max > 0.0)) throw std::domain_error("phi_tau_kernel: xi_max must be > 0");
  q.validate();
  const double k0_top = std::sqrt(q.k_max * q.k_max + xi_max);
  const ThreeVector dxs = dx.spatial();
  const double dr = dxs.norm();

  auto k0_integral = [&](double r, double spatial_phase_arg) {
    const QuadRule e = q.rule_on(r, k0_top, q.n_radial);
    Complex acc{0.0, 0.0};
    for (std::size_t i = 0; i < e.size(); ++i) {
      const double k0 = e.nodes[i];
      const double ksq = k0 * k0 - r * r;
      acc += e.weights[i] * std::exp(-2.0 * ksq * tau) * phase_exp(-(k0 * dx.t - spatial_phase_arg));
    }
    return acc;
  };

  Complex result;
  if (dr == 0.0) {
    result = integrate_radial(q, [&](double r) { return k0_integral(r, 0.0); });
  } else {
    result = integrate_axisymmetric(q, [&](double r, double k_par) { return k0_integral(r, k_par * dr); });
  }
  return kInvTwoPiCubed * result;
}

namespace {

Complex noisy_branch(const FourVector& dx, double xi, const ZetaParams& zeta,
                     const QuadratureConfig& q) {
  // evaluates int d^3k w(k) e^{-i (varpi dx^0 - k.dx)}
  const ThreeVector zs = zeta.zeta_spatial();
  const ThreeVector dxs = dx.spatial();
  if (zs.norm2() == 0.0) {
    // varpi and the weight depend on |k| only
    const double dr = dxs.norm();
    auto integrand = [&](double r, double k_par) {
      const ThreeVector kv{0.0, 0.0, r};
      const double w = noisy_kernel_weight(kv, xi, zeta);
      const double freq = varpi(kv, xi, zeta);
      return w * phase_exp(-(freq * dx.t - k_par * dr));
    };
    if (dr == 0.0) return integrate_radial(q, [&](double r) { return integrand(r, 0.0); });
    return integrate_axisymmetric(q, integrand);
  }
  Complex acc{0.0, 0.0};
  for (const MomentumNode& n : tensor_momentum_nodes(q)) {
    const double w = noisy_kernel_weight(n.k, xi, zeta);
    const double freq = varpi(n.k, xi, zeta);
    acc += n.weight * w * phase_exp(-(freq * dx.t - n.k.dot(dxs)));
  }
  return acc;
}

}  // namespace

Complex noisy_feynman(const FourVector& x, const FourVector& y, double xi, const ZetaParams& zeta,
                      const QuadratureConfig& q) {
  if (xi < 0.0) throw std::domain_error("noisy_feynman: xi must be >= 0");
  q.validate();
  const double dt = x.t - y.t;
  if (dt > 0.0) return noisy_branch(x - y, xi, zeta, q);
  if (dt < 0.0) return noisy_branch(y - x, xi, zeta, q);
  return 0.5 * (noisy_branch(x - y, xi, zeta, q) + noisy_branch(y - x, xi, zeta, q));
}

Complex commutator_kernel(const FourVector& dx, const KernelSpec& spec, const QuadratureConfig& q) {
  spec.validate();
  q.validate();
  const ThreeVector dxs = dx.spatial();
  const double dr = dxs.norm();

  if (spec.kind == KernelKind::commutator_fixed_mass) {
    const double xi = spec.xi;
    auto antisym = [&](double r, double k_par) {
      const double w = std::sqrt(r * r + xi);
      const double a = w * dx.t - k_par * dr;
      return kInvTwoPiCubed / (2.0 * w) * (phase_exp(-a) - phase_exp(a));
    };
    if (dr == 0.0) return integrate_radial(q, [&](double r) { return antisym(r, 0.0); });
    return integrate_axisymmetric(q, antisym);
  }

  if (spec.kind != KernelKind::commutator_cutoff)
    throw std::invalid_argument("commutator_kernel: spec.kind must be a commutator kind");

  // positive cone up to mass-squared xi_max, plain d^4k measure
  auto k0_integral = [&](double r, double spatial_phase_arg) {
    const double k0_top = std::sqrt(r * r + spec.xi_max);
    const QuadRule e = q.rule_on(r, k0_top, q.n_radial);
    Complex acc{0.0, 0.0};
    for (std::size_t i = 0; i < e.size(); ++i) {
      const double a = e.nodes[i] * dx.t - spatial_phase_arg;
      acc += e.weights[i] * (phase_exp(-a) - phase_exp(a));
    }
    return acc;
  };
  if (dr == 0.0) return integrate_radial(q, [&](double r) { return k0_integral(r, 0.0); });
  return integrate_axisymmetric(q, [&](double r, double k_par) { return k0_integral(r, k_par * dr); });
}

Complex evaluate_kernel(const FourVector& dx, const KernelSpec& spec, const QuadratureConfig& q) {
  spec.validate();
  switch (spec.kind) {
    case KernelKind::wightman:
      return wightman(dx, spec.xi, q);
    case KernelKind::feynman:
      return feynman(dx, FourVector{}, spec.xi, q);
    case KernelKind::phi_tau:
      return phi_tau_kernel(dx, spec.tau, spec.xi_max, q);
    case KernelKind::noisy_feynman:
      return noisy_feynman(dx, FourVector{}, spec.xi, spec.zeta, q);
    case KernelKind::commutator_fixed_mass:
    case KernelKind::commutator_cutoff:
      return commutator_kernel(dx, spec, q);
  }
  throw std::logic_error("evaluate_kernel: unhandled kind");
}

}  // namespace kgtau
