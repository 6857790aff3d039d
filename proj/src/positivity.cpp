#include "kgtau/positivity.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <memory>
#include <thread>

#include "kgtau/rng.hpp"

namespace kgtau {

namespace {

Complex phase_exp(double arg) { return {std::cos(arg), std::sin(arg)}; }

bool same_grid(const BoxGrid& a, const BoxGrid& b) {
  return a.L == b.L && a.n_space == b.n_space && a.t_window == b.t_window && a.n_time == b.n_time;
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t, std::size_t)>& body) {
  unsigned hw = threads > 0 ? static_cast<unsigned>(threads) : std::thread::hardware_concurrency();
  if (hw < 1) hw = 1;
  if (hw == 1 || n < 2) {
    body(0, n);
    return;
  }
  const std::size_t chunk = (n + hw - 1) / hw;
  std::vector<std::future<void>> futures;
  for (std::size_t start = 0; start < n; start += chunk) {
    const std::size_t stop = std::min(n, start + chunk);
    futures.push_back(std::async(std::launch::async, [&body, start, stop] { body(start, stop); }));
  }
  for (auto& f : futures) f.get();
}

}  // namespace

void TestFunction::validate() const {
  if (form == Form::gaussian_packet) {
    for (double w : widths)
      if (!(w > 0.0)) throw std::invalid_argument("TestFunction: widths must be positive");
    if (amplitude == Complex{0.0, 0.0})
      throw std::invalid_argument("TestFunction: amplitude must be nonzero");
  } else {
    if (samples.values.empty()) throw std::invalid_argument("TestFunction: empty grid samples");
    bool nonzero = false;
    for (const Complex& v : samples.values)
      if (v != Complex{0.0, 0.0}) {
        nonzero = true;
        break;
      }
    if (!nonzero) throw std::invalid_argument("TestFunction: grid samples have zero norm");
  }
}

Complex TestFunction::eval_packet(const FourVector& x) const {
  const double args[4] = {x.t - center.t, x.x - center.x, x.y - center.y, x.z - center.z};
  double expo = 0.0;
  for (int i = 0; i < 4; ++i) expo += args[i] * args[i] / (2.0 * widths[i] * widths[i]);
  return amplitude * std::exp(-expo) * phase_exp(-minkowski_dot(carrier, x));
}

std::vector<Complex> TestFunction::sample_on(const BoxGrid& grid) const {
  grid.validate();
  if (form == Form::grid) {
    if (!same_grid(samples.grid, grid))
      throw std::invalid_argument("TestFunction: grid samples live on a different grid");
    return samples.values;
  }
  std::vector<Complex> out(grid.n_points());
  for (int it = 0; it < grid.n_time; ++it)
    for (int ix = 0; ix < grid.n_space; ++ix)
      for (int iy = 0; iy < grid.n_space; ++iy)
        for (int iz = 0; iz < grid.n_space; ++iz)
          out[grid.index(it, ix, iy, iz)] = eval_packet(
              {grid.time_coord(it), grid.space_coord(ix), grid.space_coord(iy), grid.space_coord(iz)});
  return out;
}

std::optional<TestFunction::Separable> TestFunction::separable_on(const BoxGrid& grid) const {
  if (form != Form::gaussian_packet) return std::nullopt;
  Separable s;
  s.amplitude = amplitude;
  const double centers[4] = {center.t, center.x, center.y, center.z};
  // carrier phase e^{-i carrier.x} = e^{-i c^0 t} e^{+i c_s . x_s}
  const double carrier_sign[4] = {-carrier.t, carrier.x, carrier.y, carrier.z};
  for (int axis = 0; axis < 4; ++axis) {
    const int n = axis == 0 ? grid.n_time : grid.n_space;
    s.axis[axis].resize(n);
    for (int i = 0; i < n; ++i) {
      const double c = axis == 0 ? grid.time_coord(i) : grid.space_coord(i);
      const double d = c - centers[axis];
      s.axis[axis][i] =
          std::exp(-d * d / (2.0 * widths[axis] * widths[axis])) * phase_exp(carrier_sign[axis] * c);
    }
  }
  return s;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::positive: return "positive";
    case Verdict::violated: return "violated";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

namespace {

// Per-node slice sums P(t) = h^3 sum_x f(t,x) e^{+i k.x},
// M(t) = h^3 sum_x f(t,x) e^{-i k.x}.
struct SliceSums {
  std::vector<Complex> P, M;
};

SliceSums dense_slice_sums(const std::vector<Complex>& samples, const BoxGrid& grid,
                           const ThreeVector& k) {
  SliceSums out;
  out.P.assign(grid.n_time, Complex{0.0, 0.0});
  out.M.assign(grid.n_time, Complex{0.0, 0.0});
  const int ns = grid.n_space;
  std::vector<Complex> tx(ns), ty(ns), tz(ns);
  for (int i = 0; i < ns; ++i) {
    const double c = grid.space_coord(i);
    tx[i] = phase_exp(k.x * c);
    ty[i] = phase_exp(k.y * c);
    tz[i] = phase_exp(k.z * c);
  }
  const double h3 = grid.cell_volume3();
  for (int it = 0; it < grid.n_time; ++it) {
    Complex accP{0.0, 0.0}, accM{0.0, 0.0};
    const Complex* slice = samples.data() + static_cast<std::size_t>(it) * grid.n_spatial_points();
    std::size_t idx = 0;
    for (int ix = 0; ix < ns; ++ix) {
      for (int iy = 0; iy < ns; ++iy) {
        const Complex pxy = tx[ix] * ty[iy];
        for (int iz = 0; iz < ns; ++iz, ++idx) {
          const Complex p = pxy * tz[iz];
          const Complex v = slice[idx];
          accP += v * p;
          accM += v * std::conj(p);
        }
      }
    }
    out.P[it] = accP * h3;
    out.M[it] = accM * h3;
  }
  return out;
}

SliceSums separable_slice_sums(const TestFunction::Separable& sep, const BoxGrid& grid,
                               const ThreeVector& k) {
  const int ns = grid.n_space;
  const double h = grid.dx();
  const double kc[3] = {k.x, k.y, k.z};
  Complex plus{1.0, 0.0}, minus{1.0, 0.0};
  for (int axis = 0; axis < 3; ++axis) {
    Complex sp{0.0, 0.0}, sm{0.0, 0.0};
    for (int i = 0; i < ns; ++i) {
      const Complex p = phase_exp(kc[axis] * grid.space_coord(i));
      sp += sep.axis[axis + 1][i] * p;
      sm += sep.axis[axis + 1][i] * std::conj(p);
    }
    plus *= sp * h;
    minus *= sm * h;
  }
  SliceSums out;
  out.P.resize(grid.n_time);
  out.M.resize(grid.n_time);
  for (int it = 0; it < grid.n_time; ++it) {
    const Complex base = sep.amplitude * sep.axis[0][it];
    out.P[it] = base * plus;
    out.M[it] = base * minus;
  }
  return out;
}

struct MomentumPathResult {
  double re = 0.0;             // sum_k w (|C|^2 + |S|^2)
  double im = 0.0;             // -sum_k w Re(J)
  Complex theta_unsym{0.0, 0.0};
  Complex theta_swap{0.0, 0.0};
};

MomentumPathResult momentum_functional(const TestFunction& f, const BoxGrid& grid,
                                       const QuadratureConfig& q,
                                       const std::function<double(const ThreeVector&)>& weight,
                                       const std::function<double(const ThreeVector&)>& frequency) {
  grid.validate();
  f.validate();
  const auto sep = f.separable_on(grid);
  std::vector<Complex> dense;
  if (!sep) dense = f.sample_on(grid);

  const double ht = grid.dt();
  const int nt = grid.n_time;
  std::vector<Complex> c(nt), s(nt);
  const Complex half_i{0.0, 0.5};

  MomentumPathResult out;
  for (const MomentumNode& node : tensor_momentum_nodes(q)) {
    const double w = node.weight * weight(node.k);
    const double freq = frequency(node.k);
    const SliceSums sums =
        sep ? separable_slice_sums(*sep, grid, node.k) : dense_slice_sums(dense, grid, node.k);

    Complex C{0.0, 0.0}, S{0.0, 0.0};
    for (int it = 0; it < nt; ++it) {
      const Complex ep = phase_exp(freq * grid.time_coord(it));
      const Complex a = ep * sums.M[it];            // int f e^{+i k.x} on the slice
      const Complex b = std::conj(ep) * sums.P[it]; // int f e^{-i k.x}
      c[it] = 0.5 * (a + b);
      s[it] = -half_i * (a - b);  // (a - b) / (2i)
      C += c[it];
      S += s[it];
    }
    C *= ht;
    S *= ht;
    out.re += w * (std::norm(C) + std::norm(S));

    Complex J{0.0, 0.0}, Jswap{0.0, 0.0};
    for (int a = 0; a < nt; ++a)
      for (int b = 0; b < nt; ++b) {
        if (a == b) continue;
        const double sgn = a > b ? 1.0 : -1.0;
        J += sgn * (std::conj(s[a]) * c[b] - std::conj(c[a]) * s[b]);
        Jswap += sgn * (s[a] * std::conj(c[b]) - c[a] * std::conj(s[b]));
      }
    J *= ht * ht;
    Jswap *= ht * ht;
    out.im += w * (-J.real());
    const Complex minus_i{0.0, -1.0};
    out.theta_unsym += w * (minus_i * J);
    out.theta_swap += w * (minus_i * Jswap);
  }
  return out;
}

}  // namespace

Complex functional_momentum_noisy(const TestFunction& f, double xi, const ZetaParams& zeta,
                                  const BoxGrid& grid, const QuadratureConfig& q) {
  if (xi < 0.0) throw std::domain_error("functional_momentum_noisy: xi must be >= 0");
  const MomentumPathResult r = momentum_functional(
      f, grid, q, [&](const ThreeVector& k) { return noisy_kernel_weight(k, xi, zeta); },
      [&](const ThreeVector& k) { return varpi(k, xi, zeta); });
  return {r.re, r.im};
}

Complex functional_momentum_free(const TestFunction& f, double xi, const BoxGrid& grid,
                                 const QuadratureConfig& q) {
  if (xi < 0.0) throw std::domain_error("functional_momentum_free: xi must be >= 0");
  const MomentumPathResult r = momentum_functional(
      f, grid, q, [&](const ThreeVector& k) { return free_kernel_weight(k, xi); },
      [&](const ThreeVector& k) { return omega(k, xi); });
  return {r.re, r.im};
}

double imaginary_antisymmetry_check(const TestFunction& f, double xi, const ZetaParams& zeta,
                                    const BoxGrid& grid, const QuadratureConfig& q) {
  const MomentumPathResult r = momentum_functional(
      f, grid, q, [&](const ThreeVector& k) { return noisy_kernel_weight(k, xi, zeta); },
      [&](const ThreeVector& k) { return varpi(k, xi, zeta); });
  return std::abs(0.5 * (r.theta_unsym + r.theta_swap).real());
}

Complex functional_direct(
    const std::function<Complex(const FourVector&, const FourVector&)>& kernel,
    const TestFunction& f, const BoxGrid& grid, std::size_t pair_cap) {
  grid.validate();
  f.validate();
  const std::size_t n = grid.n_points();
  if (n * n > pair_cap)
    throw std::invalid_argument(
        "functional_direct: grid too large for the quadratic direct path; use the momentum path");
  const std::vector<Complex> fv = f.sample_on(grid);
  std::vector<FourVector> coords(n);
  for (int it = 0; it < grid.n_time; ++it)
    for (int ix = 0; ix < grid.n_space; ++ix)
      for (int iy = 0; iy < grid.n_space; ++iy)
        for (int iz = 0; iz < grid.n_space; ++iz)
          coords[grid.index(it, ix, iy, iz)] = {grid.time_coord(it), grid.space_coord(ix),
                                                grid.space_coord(iy), grid.space_coord(iz)};
  Complex acc{0.0, 0.0};
  for (std::size_t a = 0; a < n; ++a) {
    Complex row{0.0, 0.0};
    for (std::size_t b = 0; b < n; ++b) row += kernel(coords[a], coords[b]) * fv[b];
    acc += std::conj(fv[a]) * row;
  }
  const double h4 = grid.cell_volume4();
  return acc * h4 * h4;
}

namespace {

struct StationaryKernelTable {
  BoxGrid grid;
  std::vector<Complex> table;  // indexed by lattice offsets

  std::size_t offset_index(int dt, int dx, int dy, int dz) const {
    const int ws = 2 * grid.n_space - 1;
    std::size_t idx = static_cast<std::size_t>(dt + grid.n_time - 1);
    idx = idx * ws + (dx + grid.n_space - 1);
    idx = idx * ws + (dy + grid.n_space - 1);
    idx = idx * ws + (dz + grid.n_space - 1);
    return idx;
  }
};

StationaryKernelTable build_kernel_table(const KernelSpec& spec, const BoxGrid& grid,
                                         const QuadratureConfig& q, int threads) {
  StationaryKernelTable t;
  t.grid = grid;
  const int nt = grid.n_time, ns = grid.n_space;
  const int wt = 2 * nt - 1, ws = 2 * ns - 1;
  const std::size_t total = static_cast<std::size_t>(wt) * ws * ws * ws;
  t.table.resize(total);
  parallel_for(total, threads, [&](std::size_t start, std::size_t stop) {
    for (std::size_t idx = start; idx < stop; ++idx) {
      std::size_t rest = idx;
      const int dz = static_cast<int>(rest % ws) - (ns - 1);
      rest /= ws;
      const int dy = static_cast<int>(rest % ws) - (ns - 1);
      rest /= ws;
      const int dx = static_cast<int>(rest % ws) - (ns - 1);
      rest /= ws;
      const int dt = static_cast<int>(rest) - (nt - 1);
      const FourVector sep{dt * grid.dt(), dx * grid.dx(), dy * grid.dx(), dz * grid.dx()};
      t.table[idx] = evaluate_kernel(sep, spec, q);
    }
  });
  return t;
}

Complex functional_from_table(const StationaryKernelTable& t, const TestFunction& f) {
  const BoxGrid& g = t.grid;
  const std::vector<Complex> fv = f.sample_on(g);
  const int nt = g.n_time, ns = g.n_space;
  Complex acc{0.0, 0.0};
  for (int at = 0; at < nt; ++at)
    for (int ax = 0; ax < ns; ++ax)
      for (int ay = 0; ay < ns; ++ay)
        for (int az = 0; az < ns; ++az) {
          const Complex fa = std::conj(fv[g.index(at, ax, ay, az)]);
          if (fa == Complex{0.0, 0.0}) continue;
          Complex row{0.0, 0.0};
          for (int bt = 0; bt < nt; ++bt)
            for (int bx = 0; bx < ns; ++bx)
              for (int by = 0; by < ns; ++by)
                for (int bz = 0; bz < ns; ++bz)
                  row += t.table[t.offset_index(at - bt, ax - bx, ay - by, az - bz)] *
                         fv[g.index(bt, bx, by, bz)];
          acc += fa * row;
        }
  const double h4 = g.cell_volume4();
  return acc * h4 * h4;
}

}  // namespace

Complex functional_direct_stationary(const KernelSpec& spec, const TestFunction& f,
                                     const BoxGrid& grid, const QuadratureConfig& q) {
  const StationaryKernelTable t = build_kernel_table(spec, grid, q, 0);
  return functional_from_table(t, f);
}

KernelReport sweep_with(const FunctionalEvaluator& evaluate, const KernelSpec& spec_recorded,
                        const std::vector<TestFunction>& family, const QuadratureConfig& q,
                        const SweepOptions& options) {
  if (family.empty()) throw std::invalid_argument("sweep: test-function family must be nonempty");
  KernelReport report;
  report.kernel = spec_recorded;
  report.quadrature = q;
  report.tolerance = options.tolerance;
  report.seed = options.seed;
  report.per_function.resize(family.size());

  parallel_for(family.size(), options.threads, [&](std::size_t start, std::size_t stop) {
    for (std::size_t i = start; i < stop; ++i) {
      PerFunctionResult& r = report.per_function[i];
      r.id = static_cast<int>(i);
      try {
        const Complex v = evaluate(family[i]);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
          throw std::runtime_error("non-finite functional value");
        r.re = v.real();
        r.im = v.imag();
      } catch (const std::exception& e) {
        r.ok = false;
        r.error = e.what();
      }
    }
  });

  std::size_t failures = 0;
  bool first = true;
  for (const PerFunctionResult& r : report.per_function) {
    if (!r.ok) {
      ++failures;
      continue;
    }
    const double mag = std::hypot(r.re, r.im);
    if (first) {
      report.min_re = r.re;
      report.min_im = r.im;
      report.scale = mag;
      first = false;
    } else {
      report.min_re = std::min(report.min_re, r.re);
      report.min_im = std::min(report.min_im, r.im);
      report.scale = std::max(report.scale, mag);
    }
  }
  if (failures * 10 > family.size() || first) {
    report.verdict_re = Verdict::inconclusive;
  } else if (report.min_re >= -options.tolerance * report.scale) {
    report.verdict_re = Verdict::positive;
  } else {
    report.verdict_re = Verdict::violated;
  }
  return report;
}

KernelReport sweep(const KernelSpec& spec, const std::vector<TestFunction>& family,
                   const BoxGrid& grid, const QuadratureConfig& q, const SweepOptions& options) {
  spec.validate();
  grid.validate();
  q.validate();

  FunctionalEvaluator evaluate;
  std::shared_ptr<StationaryKernelTable> table;
  switch (spec.kind) {
    case KernelKind::feynman:
      evaluate = [spec, grid, q](const TestFunction& f) {
        return functional_momentum_free(f, spec.xi, grid, q);
      };
      break;
    case KernelKind::noisy_feynman:
      evaluate = [spec, grid, q](const TestFunction& f) {
        return functional_momentum_noisy(f, spec.xi, spec.zeta, grid, q);
      };
      break;
    default:
      table = std::make_shared<StationaryKernelTable>(build_kernel_table(spec, grid, q, options.threads));
      evaluate = [table](const TestFunction& f) { return functional_from_table(*table, f); };
      break;
  }
  return sweep_with(evaluate, spec, family, q, options);
}

std::vector<TestFunction> make_packet_family(int n, const BoxGrid& grid, std::uint64_t seed,
                                             const PacketRanges& ranges) {
  grid.validate();
  SplitMix64 rng(seed);
  std::vector<TestFunction> family;
  family.reserve(n);
  const double half_extent[4] = {0.5 * grid.t_window, grid.L, grid.L, grid.L};
  for (int i = 0; i < n; ++i) {
    TestFunction f;
    f.form = TestFunction::Form::gaussian_packet;
    double center[4], width[4], carrier[4];
    for (int axis = 0; axis < 4; ++axis) {
      center[axis] = rng.uniform(-ranges.center_frac, ranges.center_frac) * half_extent[axis];
      width[axis] =
          rng.uniform(ranges.width_frac_min, ranges.width_frac_max) * 2.0 * half_extent[axis];
      carrier[axis] = rng.uniform(-ranges.carrier_max, ranges.carrier_max);
    }
    f.center = {center[0], center[1], center[2], center[3]};
    f.widths = {width[0], width[1], width[2], width[3]};
    f.carrier = {carrier[0], carrier[1], carrier[2], carrier[3]};
    const double mag = rng.uniform(ranges.amp_min, ranges.amp_max);
    const double ph = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
    f.amplitude = mag * phase_exp(ph);
    family.push_back(std::move(f));
  }
  return family;
}

std::vector<TestFunction> make_noise_family(int n, const BoxGrid& grid, std::uint64_t seed) {
  grid.validate();
  SplitMix64 rng(seed);
  std::vector<TestFunction> family;
  family.reserve(n);
  const int nt = grid.n_time, ns = grid.n_space;
  for (int i = 0; i < n; ++i) {
    SpacetimeField raw = SpacetimeField::zeros(grid);
    for (Complex& v : raw.values) v = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    // one diffusion pass: average with the eight axis neighbors, periodic in
    // space, clamped in time
    SpacetimeField smooth = SpacetimeField::zeros(grid);
    for (int it = 0; it < nt; ++it)
      for (int ix = 0; ix < ns; ++ix)
        for (int iy = 0; iy < ns; ++iy)
          for (int iz = 0; iz < ns; ++iz) {
            Complex acc = raw.values[grid.index(it, ix, iy, iz)];
            int count = 1;
            if (it > 0) {
              acc += raw.values[grid.index(it - 1, ix, iy, iz)];
              ++count;
            }
            if (it < nt - 1) {
              acc += raw.values[grid.index(it + 1, ix, iy, iz)];
              ++count;
            }
            const int xm = (ix + ns - 1) % ns, xp = (ix + 1) % ns;
            const int ym = (iy + ns - 1) % ns, yp = (iy + 1) % ns;
            const int zm = (iz + ns - 1) % ns, zp = (iz + 1) % ns;
            acc += raw.values[grid.index(it, xm, iy, iz)] + raw.values[grid.index(it, xp, iy, iz)];
            acc += raw.values[grid.index(it, ix, ym, iz)] + raw.values[grid.index(it, ix, yp, iz)];
            acc += raw.values[grid.index(it, ix, iy, zm)] + raw.values[grid.index(it, ix, iy, zp)];
            count += 6;
            smooth.values[grid.index(it, ix, iy, iz)] = acc / static_cast<double>(count);
          }
    TestFunction f;
    f.form = TestFunction::Form::grid;
    f.samples = std::move(smooth);
    family.push_back(std::move(f));
  }
  return family;
}

}  // namespace kgtau
