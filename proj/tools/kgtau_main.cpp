// kgtau: configuration-driven runner for dispersion, propagator-kernel,
// positivity, laplace-transform, semigroup and residual-convergence
// experiments. Writes report.json plus summary.csv (and plot-ready .dat
// files) into the output directory.
//
// Exit codes: 0 success, 1 verdict violation, 2 config error, 3 numerical
// failure.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "kgtau/fields.hpp"
#include "kgtau/kinematics.hpp"
#include "kgtau/positivity.hpp"
#include "kgtau/propagators.hpp"
#include "kgtau/rng.hpp"
#include "kgtau/semigroup.hpp"
#include "kgtau/serialization.hpp"
#include "kgtau/spectral.hpp"

namespace fs = std::filesystem;
using namespace kgtau;

namespace {

constexpr const char* kArtifactName = "kgtau";
constexpr const char* kArtifactVersion = "0.1.0";

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct VerdictViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&tt));
  return buf;
}

FourVector four_vector_from(const std::vector<double>& v, const std::string& what) {
  if (v.size() != 4) throw ConfigError(what + " needs exactly 4 components (t,x,y,z)");
  return {v[0], v[1], v[2], v[3]};
}

std::vector<FourVector> four_vector_list_from(const std::vector<double>& flat,
                                              const std::string& what) {
  if (flat.size() % 4 != 0) throw ConfigError(what + " needs groups of 4 components (t,x,y,z)");
  std::vector<FourVector> out;
  for (std::size_t i = 0; i + 3 < flat.size(); i += 4)
    out.push_back({flat[i], flat[i + 1], flat[i + 2], flat[i + 3]});
  return out;
}

struct GlobalOptions {
  std::string out_dir = "kgtau_out";
  std::uint64_t seed = 7;
  double tolerance = -1.0;  // <0: per-command default
  int threads = 0;
};

struct QuadOptions {
  double k_max = 8.0;
  int n_radial = 48;
  int n_angular = 16;
  std::string scheme = "gauss_legendre";

  QuadratureConfig build() const {
    QuadratureConfig q;
    q.k_max = k_max;
    q.n_radial = n_radial;
    q.n_angular = n_angular;
    if (scheme == "gauss_legendre") {
      q.scheme = QuadScheme::gauss_legendre;
    } else if (scheme == "trapezoid") {
      q.scheme = QuadScheme::trapezoid;
    } else {
      throw ConfigError("unknown quadrature scheme: " + scheme);
    }
    try {
      q.validate();
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
    return q;
  }

  void add_options(CLI::App* cmd) {
    cmd->add_option("--k-max", k_max, "Radial momentum cutoff");
    cmd->add_option("--n-radial", n_radial, "Radial quadrature nodes");
    cmd->add_option("--n-angular", n_angular, "Angular quadrature nodes per angle");
    cmd->add_option("--scheme", scheme, "gauss_legendre or trapezoid");
  }

  Json to_config() const {
    return Json{{"k_max", k_max}, {"n_radial", n_radial}, {"n_angular", n_angular}, {"scheme", scheme}};
  }
};

struct GridOptions {
  double box_l = 1.0;
  int n_space = 8;
  double t_window = 1.5;
  int n_time = 8;

  BoxGrid build() const {
    BoxGrid g{box_l, n_space, t_window, n_time};
    try {
      g.validate();
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
    return g;
  }

  void add_options(CLI::App* cmd) {
    cmd->add_option("--box-l", box_l, "Half-width of the periodic spatial box");
    cmd->add_option("--n-space", n_space, "Grid points per spatial axis (even, >= 4)");
    cmd->add_option("--t-window", t_window, "Length of the time window");
    cmd->add_option("--n-time", n_time, "Grid points on the time axis");
  }

  Json to_config() const {
    return Json{
        {"box_l", box_l}, {"n_space", n_space}, {"t_window", t_window}, {"n_time", n_time}};
  }
};

ZetaParams make_zeta(const std::vector<double>& components) {
  try {
    return ZetaParams{four_vector_from(components, "zeta")};
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

class ReportWriter {
 public:
  ReportWriter(const GlobalOptions& global, const std::string& command, Json config)
      : command_(command) {
    dir_ = fs::path(global.out_dir);
    config_ = std::move(config);
    config_["seed"] = global.seed;
    config_["threads"] = global.threads;
  }

  const fs::path& dir() const { return dir_; }
  const Json& config() const { return config_; }

  std::string config_comment() const {
    Json line{{"artifact", kArtifactName}, {"version", kArtifactVersion}, {"command", command_},
              {"config", config_}};
    return "# " + line.dump();
  }

  void write_report(const Json& results) const {
    fs::create_directories(dir_);
    Json report{{"header",
                 Json{{"artifact", kArtifactName},
                      {"version", kArtifactVersion},
                      {"generated_at", iso_timestamp()}}},
                {"command", command_},
                {"config", config_},
                {"results", results}};
    std::ofstream out(dir_ / "report.json");
    out << report.dump(2) << '\n';
  }

  CsvWriter open_csv(const std::string& name, const std::vector<std::string>& columns) const {
    fs::create_directories(dir_);
    CsvWriter csv((dir_ / name).string());
    csv.row({config_comment()});
    csv.header(columns);
    return csv;
  }

  void write_json(const std::string& name, const Json& payload) const {
    fs::create_directories(dir_);
    std::ofstream out(dir_ / name);
    out << Json{{"artifact", kArtifactName},
                {"version", kArtifactVersion},
                {"config", config_},
                {"data", payload}}
               .dump()
        << '\n';
  }

  void write_dat(const std::string& name, const std::vector<std::array<double, 3>>& rows,
                 int n_columns = 3) const {
    fs::create_directories(dir_);
    std::ofstream out(dir_ / name);
    out << config_comment() << '\n';
    for (const auto& r : rows) {
      out << format_double(r[0]);
      for (int c = 1; c < n_columns; ++c) out << ' ' << format_double(r[c]);
      out << '\n';
    }
  }

 private:
  fs::path dir_;
  std::string command_;
  Json config_;
};

void require_finite(double v, const std::string& what) {
  if (!std::isfinite(v)) throw std::runtime_error("non-finite value in " + what);
}

// ---------------------------------------------------------------- dispersion

struct DispersionCmd {
  std::vector<double> xi_values{0.5, 2.0};
  std::vector<double> zeta_components{0, 0, 0, 0};
  std::vector<double> k_direction{1, 0, 0};
  double k_top = 5.0;
  int n_k = 21;

  int run(const GlobalOptions& global) const {
    const ZetaParams zeta = make_zeta(zeta_components);
    for (double xi : xi_values)
      if (xi < 0.0) throw ConfigError("xi must be >= 0");
    if (k_direction.size() != 3) throw ConfigError("k-direction needs 3 components");
    const double d[3] = {k_direction[0], k_direction[1], k_direction[2]};
    const double dn = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
    if (dn == 0.0) throw ConfigError("k-direction must be nonzero");

    ReportWriter report(global, "dispersion",
                        Json{{"xi", xi_values},
                             {"zeta", zeta_components},
                             {"k_direction", k_direction},
                             {"k_top", k_top},
                             {"n_k", n_k}});
    CsvWriter csv = report.open_csv(
        "summary.csv", {"k", "xi", "omega", "varpi", "lambda_on_shifted_shell", "shell_residual"});
    Json rows = Json::array();
    std::vector<std::array<double, 3>> dat;
    for (double xi : xi_values) {
      for (int i = 0; i < n_k; ++i) {
        const double kn = k_top * i / std::max(1, n_k - 1);
        const ThreeVector kv{kn * d[0] / dn, kn * d[1] / dn, kn * d[2] / dn};
        const double w = omega(kv, xi);
        const double vp = varpi(kv, xi, zeta);
        const FourVector K{vp, kv.x, kv.y, kv.z};
        const double lam = lambda_noisy(K, zeta);
        const double shell = xi - (minkowski_norm2(K) -
                                   2.0 * std::pow(minkowski_dot(zeta.zeta(), K), 2.0));
        require_finite(vp, "dispersion");
        csv.row({CsvWriter::cell(kn), CsvWriter::cell(xi), CsvWriter::cell(w), CsvWriter::cell(vp),
                 CsvWriter::cell(lam), CsvWriter::cell(shell)});
        rows.push_back(Json{{"k", kn}, {"xi", xi}, {"omega", w}, {"varpi", vp}});
        dat.push_back({kn, w, vp});
      }
    }
    report.write_dat("dispersion.dat", dat);
    report.write_report(Json{{"table", rows}});
    return 0;
  }
};

// ---------------------------------------------------------------- propagator

struct PropagatorCmd {
  std::string kind = "feynman";
  double xi = 1.0;
  double tau = 0.5;
  double xi_max = 10.0;
  std::vector<double> zeta_components{0, 0, 0, 0};
  std::vector<double> dx_flat;
  std::vector<double> xi_max_ladder;
  QuadOptions quad;

  int run(const GlobalOptions& global) const {
    KernelSpec spec;
    spec.kind = kernel_kind_from_name(kind);
    spec.xi = xi;
    spec.tau = tau;
    spec.xi_max = xi_max;
    spec.zeta = make_zeta(zeta_components);
    try {
      spec.validate();
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
    const QuadratureConfig q = quad.build();

    std::vector<FourVector> seps = four_vector_list_from(dx_flat, "dx");
    if (seps.empty()) seps = {{0.2, 0.0, 0.0, 0.0}, {0.4, 0.3, 0.0, 0.0}, {0.1, 0.5, 0.2, 0.0}};

    ReportWriter report(global, "propagator",
                        Json{{"kind", kind},
                             {"xi", xi},
                             {"tau", tau},
                             {"xi_max", xi_max},
                             {"zeta", zeta_components},
                             {"xi_max_ladder", xi_max_ladder},
                             {"quad", quad.to_config()}});
    CsvWriter csv = report.open_csv(
        "summary.csv",
        {"dx_t", "dx_x", "dx_y", "dx_z", "xi", "tau", "xi_max", "zeta_t", "zeta_x", "zeta_y",
         "zeta_z", "re", "im", "k_max", "n_radial", "n_angular", "scheme"});
    Json rows = Json::array();
    std::vector<std::array<double, 3>> dat;

    auto emit = [&](const FourVector& dx, const KernelSpec& s) {
      const Complex v = evaluate_kernel(dx, s, q);
      require_finite(v.real(), "propagator kernel");
      require_finite(v.imag(), "propagator kernel");
      const FourVector& z = s.zeta.zeta();
      csv.row({CsvWriter::cell(dx.t), CsvWriter::cell(dx.x), CsvWriter::cell(dx.y),
               CsvWriter::cell(dx.z), CsvWriter::cell(s.xi), CsvWriter::cell(s.tau),
               CsvWriter::cell(s.xi_max), CsvWriter::cell(z.t), CsvWriter::cell(z.x),
               CsvWriter::cell(z.y), CsvWriter::cell(z.z), CsvWriter::cell(v.real()),
               CsvWriter::cell(v.imag()), CsvWriter::cell(quad.k_max),
               CsvWriter::cell(quad.n_radial), CsvWriter::cell(quad.n_angular), quad.scheme});
      rows.push_back(Json{{"dx", to_json(dx)},
                          {"xi", s.xi},
                          {"tau", s.tau},
                          {"xi_max", s.xi_max},
                          {"re", v.real()},
                          {"im", v.imag()}});
      dat.push_back({dx.t, v.real(), v.imag()});
    };

    if (!xi_max_ladder.empty() && spec.kind == KernelKind::commutator_cutoff) {
      for (const FourVector& dx : seps)
        for (double cap : xi_max_ladder) {
          KernelSpec s = spec;
          s.xi_max = cap;
          emit(dx, s);
        }
    } else {
      for (const FourVector& dx : seps) emit(dx, spec);
    }
    report.write_dat("kernel.dat", dat);
    report.write_report(Json{{"table", rows}});
    return 0;
  }
};

// ----------------------------------------------------------- noisy-propagator

struct NoisyPropagatorCmd {
  double xi = 1.0;
  std::vector<double> zeta_components{0, 0, 0, 0};
  int n_pairs = 24;
  QuadOptions quad;

  int run(const GlobalOptions& global) const {
    if (xi < 0.0) throw ConfigError("xi must be >= 0");
    const ZetaParams zeta = make_zeta(zeta_components);
    const QuadratureConfig q = quad.build();

    ReportWriter report(global, "noisy-propagator",
                        Json{{"xi", xi},
                             {"zeta", zeta_components},
                             {"n_pairs", n_pairs},
                             {"quad", quad.to_config()}});
    CsvWriter csv = report.open_csv(
        "summary.csv", {"x_t", "x_x", "x_y", "x_z", "y_t", "y_x", "y_y", "y_z", "noisy_re",
                        "noisy_im", "free_re", "free_im", "ratio_re", "ratio_im"});

    SplitMix64 rng(global.seed);
    Json rows = Json::array();
    double ratio_min = 0.0, ratio_max = 0.0;
    bool first = true;
    for (int i = 0; i < n_pairs; ++i) {
      FourVector x{rng.uniform(-0.8, 0.8), rng.uniform(-0.8, 0.8), rng.uniform(-0.8, 0.8),
                   rng.uniform(-0.8, 0.8)};
      FourVector y{rng.uniform(-0.8, 0.8), rng.uniform(-0.8, 0.8), rng.uniform(-0.8, 0.8),
                   rng.uniform(-0.8, 0.8)};
      if (x.t == y.t) x.t += 0.05;
      const Complex noisy = noisy_feynman(x, y, xi, zeta, q);
      const Complex free = feynman(x, y, xi, q);
      const Complex ratio = noisy / free;
      require_finite(noisy.real(), "noisy propagator");
      csv.row({CsvWriter::cell(x.t), CsvWriter::cell(x.x), CsvWriter::cell(x.y),
               CsvWriter::cell(x.z), CsvWriter::cell(y.t), CsvWriter::cell(y.x),
               CsvWriter::cell(y.y), CsvWriter::cell(y.z), CsvWriter::cell(noisy.real()),
               CsvWriter::cell(noisy.imag()), CsvWriter::cell(free.real()),
               CsvWriter::cell(free.imag()), CsvWriter::cell(ratio.real()),
               CsvWriter::cell(ratio.imag())});
      rows.push_back(Json{{"noisy", Json::array({noisy.real(), noisy.imag()})},
                          {"free", Json::array({free.real(), free.imag()})},
                          {"ratio", Json::array({ratio.real(), ratio.imag()})}});
      if (first) {
        ratio_min = ratio_max = ratio.real();
        first = false;
      } else {
        ratio_min = std::min(ratio_min, ratio.real());
        ratio_max = std::max(ratio_max, ratio.real());
      }
    }
    Json results{{"pairs", rows}};
    if (zeta.is_zero()) {
      results["free_ratio"] = Json{{"min", ratio_min},
                                   {"max", ratio_max},
                                   {"spread", (ratio_max - ratio_min) / std::abs(ratio_max)}};
    }
    report.write_report(results);
    return 0;
  }
};

// ----------------------------------------------------------------- positivity

struct PositivityCmd {
  std::string kernel = "feynman";
  double xi = 1.0;
  double tau = 0.5;
  double xi_max = 10.0;
  std::vector<double> zeta_components{0, 0, 0, 0};
  int n_functions = 200;
  std::string family = "packets";
  GridOptions grid;
  QuadOptions quad;

  int run(const GlobalOptions& global) const {
    KernelSpec spec;
    spec.kind = kernel_kind_from_name(kernel);
    spec.xi = xi;
    spec.tau = tau;
    spec.xi_max = xi_max;
    spec.zeta = make_zeta(zeta_components);
    try {
      spec.validate();
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
    if (n_functions < 1) throw ConfigError("n-functions must be >= 1");
    const BoxGrid box = grid.build();
    const QuadratureConfig q = quad.build();
    const double tolerance = global.tolerance > 0.0 ? global.tolerance : 1e-8;

    std::vector<TestFunction> functions;
    if (family == "packets") {
      functions = make_packet_family(n_functions, box, global.seed);
    } else if (family == "noise") {
      functions = make_noise_family(n_functions, box, global.seed);
    } else if (family == "mixed") {
      functions = make_packet_family(n_functions - n_functions / 4, box, global.seed);
      for (TestFunction& f : make_noise_family(n_functions / 4, box, global.seed + 1))
        functions.push_back(std::move(f));
    } else {
      throw ConfigError("unknown family: " + family);
    }

    SweepOptions opt;
    opt.tolerance = tolerance;
    opt.seed = global.seed;
    opt.threads = global.threads;
    const KernelReport result = sweep(spec, functions, box, q, opt);

    ReportWriter report(global, "positivity",
                        Json{{"kernel", kernel},
                             {"xi", xi},
                             {"tau", tau},
                             {"xi_max", xi_max},
                             {"zeta", zeta_components},
                             {"n_functions", n_functions},
                             {"family", family},
                             {"tolerance", tolerance},
                             {"grid", grid.to_config()},
                             {"quad", quad.to_config()}});
    CsvWriter csv = report.open_csv("summary.csv", {"id", "re", "im", "ok"});
    for (const PerFunctionResult& r : result.per_function)
      csv.row({CsvWriter::cell(r.id), CsvWriter::cell(r.re), CsvWriter::cell(r.im),
               std::string(r.ok ? "1" : "0")});
    report.write_report(to_json(result));

    if (result.verdict_re == Verdict::violated)
      throw VerdictViolation("positivity sweep found Re sigma[f] below -tolerance*scale");
    if (result.verdict_re == Verdict::inconclusive)
      throw std::runtime_error("positivity sweep inconclusive (too many evaluation failures)");
    return 0;
  }
};

// -------------------------------------------------------------- laplace-check

struct LaplaceCheckCmd {
  std::vector<double> dx_flat;
  std::vector<double> tau_values{0.2, 0.65, 1.2, 2.0};
  double xi_max = 40.0;
  int n_xi = 3001;
  bool emit_measures = false;
  QuadOptions quad{6.0, 48, 24, "gauss_legendre"};

  int run(const GlobalOptions& global) const {
    std::vector<FourVector> seps = four_vector_list_from(dx_flat, "dx");
    if (seps.empty())
      seps = {{0.1, 0.0, 0.0, 0.0},
              {0.3, 0.0, 0.0, 0.0},
              {0.2, 0.4, 0.0, 0.0},
              {0.4, 0.2, 0.2, 0.0}};
    if (n_xi < 2) throw ConfigError("n-xi must be >= 2");
    if (!(xi_max > 0.0)) throw ConfigError("xi-max must be > 0");
    for (double tau : tau_values)
      if (!(tau > 0.0)) throw ConfigError("tau values must be > 0");
    const QuadratureConfig q = quad.build();
    const double tolerance = global.tolerance > 0.0 ? global.tolerance : 1e-3;

    ReportWriter report(global, "laplace-check",
                        Json{{"tau", tau_values},
                             {"xi_max", xi_max},
                             {"n_xi", n_xi},
                             {"tolerance", tolerance},
                             {"quad", quad.to_config()}});
    CsvWriter csv = report.open_csv("summary.csv",
                                    {"dx_t", "dx_x", "dx_y", "dx_z", "tau", "lhs_re", "lhs_im",
                                     "rhs_re", "rhs_im", "rel_err"});
    Json rows = Json::array();
    std::vector<std::array<double, 3>> dat;
    double worst = 0.0;

    int sep_index = 0;
    for (const FourVector& dx : seps) {
      std::vector<double> grid(n_xi), re(n_xi), im(n_xi);
      for (int i = 0; i < n_xi; ++i) {
        grid[i] = xi_max * i / (n_xi - 1);
        const Complex w = wightman(dx, grid[i], q);
        re[i] = w.real();
        im[i] = w.imag();
      }
      const SpectralMeasure mre = SpectralMeasure::from_density(grid, re);
      const SpectralMeasure mim = SpectralMeasure::from_density(grid, im);
      if (emit_measures)
        report.write_json("measure_" + std::to_string(sep_index) + ".json",
                          Json{{"dx", to_json(dx)}, {"re", to_json(mre)}, {"im", to_json(mim)}});
      ++sep_index;
      for (double tau : tau_values) {
        const Complex lhs{laplace_forward(mre, 2.0 * tau), laplace_forward(mim, 2.0 * tau)};
        const Complex rhs = phi_tau_kernel(dx, tau, xi_max, q);
        const double rel = std::abs(lhs - rhs) / std::abs(rhs);
        require_finite(rel, "laplace-check");
        worst = std::max(worst, rel);
        csv.row({CsvWriter::cell(dx.t), CsvWriter::cell(dx.x), CsvWriter::cell(dx.y),
                 CsvWriter::cell(dx.z), CsvWriter::cell(tau), CsvWriter::cell(lhs.real()),
                 CsvWriter::cell(lhs.imag()), CsvWriter::cell(rhs.real()),
                 CsvWriter::cell(rhs.imag()), CsvWriter::cell(rel)});
        rows.push_back(Json{{"dx", to_json(dx)}, {"tau", tau}, {"rel_err", rel}});
        dat.push_back({tau, rel, 0.0});
      }
    }
    report.write_dat("laplace_check.dat", dat, 2);
    report.write_report(Json{{"max_rel_err", worst}, {"tolerance", tolerance}, {"rows", rows}});
    if (worst >= tolerance)
      throw VerdictViolation("laplace-check exceeded tolerance: max rel err " +
                             format_double(worst));
    return 0;
  }
};

// ------------------------------------------------------------------ semigroup

struct SemigroupCmd {
  int n_modes = 6;
  std::vector<double> zeta_components{0.2, 0.3, 0, 0};
  std::vector<double> tau_values{0.25, 0.5, 1.0, 2.0};
  int kraus_order = 48;

  int run(const GlobalOptions& global) const {
    const ZetaParams zeta = make_zeta(zeta_components);
    if (n_modes < 1) throw ConfigError("n-modes must be >= 1");
    for (double tau : tau_values)
      if (tau < 0.0) throw ConfigError("tau values must be >= 0");

    SplitMix64 rng(global.seed);
    CoeffMatrix rho;
    for (int i = 0; i < n_modes; ++i) {
      const ThreeVector ks{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
      const double xi = rng.uniform(0.1, 4.0);
      rho.lattice.push_back({std::sqrt(ks.norm2() + xi), ks.x, ks.y, ks.z});
    }
    rho.rho.assign(n_modes * n_modes, Complex{0, 0});
    for (int i = 0; i < n_modes; ++i) {
      rho.at(i, i) = Complex{rng.uniform(0.2, 1.0), 0.0};
      for (int j = i + 1; j < n_modes; ++j) {
        const Complex v{rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)};
        rho.at(i, j) = v;
        rho.at(j, i) = std::conj(v);
      }
    }
    rho.validate();

    const CoeffMatrix filtered = stability_filter(rho, zeta);
    int kept = 0;
    Json lambda_rows = Json::array();
    for (int i = 0; i < n_modes; ++i) {
      if (lambda_noisy(rho.lattice[i], zeta) > 0.0) ++kept;
      Json row = Json::array();
      for (int j = 0; j < n_modes; ++j)
        row.push_back(semigroup_lambda(rho.lattice[i], rho.lattice[j], zeta));
      lambda_rows.push_back(row);
    }

    // finite-difference generator of the noise average at tau = 0: the map
    // grows along +[zeta k, [zeta k, .]_+]_+, recorded as sign +1
    double fd_err1 = 0.0, fd_err2 = 0.0;
    {
      auto gen_err = [&](double h) {
        const CoeffMatrix stepped = gaussian_kraus_map(rho, zeta, h, KrausMode::closed_form);
        double worst = 0.0;
        for (int i = 0; i < n_modes; ++i)
          for (int j = 0; j < n_modes; ++j) {
            const double zi = minkowski_dot(zeta.zeta(), rho.lattice[i]);
            const double zj = minkowski_dot(zeta.zeta(), rho.lattice[j]);
            const Complex fd = (stepped.at(i, j) - rho.at(i, j)) / h;
            worst = std::max(worst, std::abs(fd - (zi + zj) * (zi + zj) * rho.at(i, j)));
          }
        return worst;
      };
      fd_err1 = gen_err(1e-3);
      fd_err2 = gen_err(5e-4);
    }

    double kraus_err = 0.0;
    {
      const double tau_probe = tau_values.empty() ? 0.5 : tau_values.front();
      const CoeffMatrix closed = gaussian_kraus_map(filtered, zeta, tau_probe, KrausMode::closed_form);
      const CoeffMatrix quad =
          gaussian_kraus_map(filtered, zeta, tau_probe, KrausMode::quadrature, kraus_order);
      for (std::size_t i = 0; i < closed.rho.size(); ++i) {
        const double denom = std::abs(closed.rho[i]);
        if (denom > 0.0) kraus_err = std::max(kraus_err, std::abs(quad.rho[i] - closed.rho[i]) / denom);
      }
    }

    ReportWriter report(global, "semigroup",
                        Json{{"n_modes", n_modes},
                             {"zeta", zeta_components},
                             {"tau", tau_values},
                             {"kraus_order", kraus_order}});
    CsvWriter csv = report.open_csv(
        "summary.csv", {"tau", "max_abs_entry", "hermitian", "contracting"});
    report.write_json("rho_initial.json", to_json(filtered));
    Json steps = Json::array();
    bool contraction_ok = true;
    std::vector<std::array<double, 3>> dat;
    CoeffMatrix last = filtered;
    for (double tau : tau_values) {
      const CoeffMatrix stepped = full_semigroup_step(filtered, zeta, tau);
      last = stepped;
      double max_entry = 0.0;
      bool contracting = true;
      for (std::size_t i = 0; i < stepped.rho.size(); ++i) {
        max_entry = std::max(max_entry, std::abs(stepped.rho[i]));
        if (std::abs(stepped.rho[i]) > std::abs(filtered.rho[i]) + 1e-15)
          contracting = false;
      }
      require_finite(max_entry, "semigroup step");
      const bool herm = stepped.is_hermitian();
      contraction_ok = contraction_ok && contracting;
      csv.row({CsvWriter::cell(tau), CsvWriter::cell(max_entry), std::string(herm ? "1" : "0"),
               std::string(contracting ? "1" : "0")});
      steps.push_back(Json{{"tau", tau},
                           {"max_abs_entry", max_entry},
                           {"hermitian", herm},
                           {"contracting", contracting}});
      dat.push_back({tau, max_entry, 0.0});
    }
    report.write_json("rho_final.json", to_json(last));
    report.write_dat("semigroup.dat", dat, 2);
    report.write_report(Json{
        {"lattice_size", n_modes},
        {"modes_kept_by_filter", kept},
        {"lambda_matrix", lambda_rows},
        {"generator",
         Json{{"sign", 1},
              {"fd_error_h1e-3", fd_err1},
              {"fd_error_h5e-4", fd_err2},
              {"observed_order", std::log2(fd_err1 / fd_err2)}}},
        {"kraus_quadrature_max_rel_error", kraus_err},
        {"steps", steps}});
    if (!contraction_ok)
      throw VerdictViolation("a filtered semigroup entry grew under the step");
    return 0;
  }
};

// ------------------------------------------------------------------ mike-check

struct MikeCheckCmd {
  double tau = 0.5;
  double dtau = 0.1;
  int levels = 3;
  double box_l = 3.14159265358979323846;
  int n_space = 8;
  int n_time = 8;
  double t_window = 2.0;

  int run(const GlobalOptions& global) const {
    if (levels < 2) throw ConfigError("levels must be >= 2");
    if (!(tau > 0.0) || !(dtau > 0.0) || dtau >= tau)
      throw ConfigError("need 0 < dtau < tau");

    ModeLattice state;
    state.modes.push_back({{omega({1.0, 0.0, 0.0}, 1.0), 1.0, 0.0, 0.0}, Complex{1.0, 0.0}, 0.0});
    state.modes.push_back(
        {{omega({0.0, 1.0, 1.0}, 0.5), 0.0, 1.0, 1.0}, Complex{0.4, -0.2}, Complex{0.1, 0.3}});

    ReportWriter report(global, "mike-check",
                        Json{{"tau", tau},
                             {"dtau", dtau},
                             {"levels", levels},
                             {"box_l", box_l},
                             {"n_space", n_space},
                             {"n_time", n_time},
                             {"t_window", t_window}});
    CsvWriter csv = report.open_csv(
        "summary.csv",
        {"level", "n_space", "n_time", "dtau", "mike_residual", "vn_h", "vn_residual"});
    Json rows = Json::array();
    std::vector<double> mike_res, vn_res;
    std::vector<std::array<double, 3>> dat;
    for (int level = 0; level < levels; ++level) {
      const int ns = n_space << level;
      const int nt = n_time << level;
      const double dt_level = dtau / (1 << level);
      const BoxGrid grid{box_l, ns, t_window, nt};
      const double mr = mike_residual(state, tau, dt_level, grid);
      const double vh = 0.2 / (1 << level);
      const double vr = von_neumann_residual(state, tau, vh);
      require_finite(mr, "mike residual");
      require_finite(vr, "von Neumann residual");
      mike_res.push_back(mr);
      vn_res.push_back(vr);
      csv.row({CsvWriter::cell(level), CsvWriter::cell(ns), CsvWriter::cell(nt),
               CsvWriter::cell(dt_level), CsvWriter::cell(mr), CsvWriter::cell(vh),
               CsvWriter::cell(vr)});
      rows.push_back(Json{{"level", level}, {"mike_residual", mr}, {"vn_residual", vr}});
      dat.push_back({static_cast<double>(level), mr, vr});
    }
    Json orders = Json::array();
    bool ok = true;
    for (int level = 0; level + 1 < levels; ++level) {
      const double mike_order = std::log2(mike_res[level] / mike_res[level + 1]);
      const double vn_order = std::log2(vn_res[level] / vn_res[level + 1]);
      orders.push_back(Json{{"mike", mike_order}, {"vn", vn_order}});
      ok = ok && mike_order > 1.8 && mike_order < 2.2 && vn_order > 1.8 && vn_order < 2.2;
    }
    report.write_dat("mike_check.dat", dat);
    report.write_report(Json{{"rows", rows}, {"orders", orders}, {"orders_in_window", ok}});
    if (!ok) throw VerdictViolation("residual convergence order outside [1.8, 2.2]");
    return 0;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"variable-mass Klein-Gordon toolkit: propagator kernels, positivity sweeps, "
               "tau-semigroup evolution"};
  app.set_version_flag("--version", std::string(kArtifactVersion));
  app.set_config("--config", "", "INI config file with one section per command");
  app.require_subcommand(1);

  GlobalOptions global;
  app.add_option("--out", global.out_dir, "Output directory");
  app.add_option("--seed", global.seed, "Random seed recorded in every report");
  app.add_option("--tolerance", global.tolerance, "Verdict tolerance override");
  app.add_option("--threads", global.threads, "Worker threads (0 = hardware)");

  DispersionCmd dispersion;
  CLI::App* c_dispersion = app.add_subcommand("dispersion", "Frequency tables omega and varpi");
  c_dispersion->fallthrough();
  c_dispersion->add_option("--xi", dispersion.xi_values, "Mass-squared values");
  c_dispersion->add_option("--zeta", dispersion.zeta_components, "Noise four-vector t,x,y,z")
      ->delimiter(',');
  c_dispersion->add_option("--k-direction", dispersion.k_direction, "Direction of the k ladder")
      ->delimiter(',');
  c_dispersion->add_option("--k-top", dispersion.k_top, "Largest |k|");
  c_dispersion->add_option("--n-k", dispersion.n_k, "Ladder length");

  PropagatorCmd propagator;
  CLI::App* c_propagator = app.add_subcommand("propagator", "Two-point kernel tables");
  c_propagator->fallthrough();
  c_propagator->add_option("--kind", propagator.kind,
                           "wightman|feynman|phi_tau|noisy_feynman|commutator_fixed_mass|"
                           "commutator_cutoff");
  c_propagator->add_option("--xi", propagator.xi, "Mass squared");
  c_propagator->add_option("--tau", propagator.tau, "Evolution parameter (phi_tau)");
  c_propagator->add_option("--xi-max", propagator.xi_max, "Mass-squared cutoff");
  c_propagator->add_option("--zeta", propagator.zeta_components, "Noise four-vector t,x,y,z")
      ->delimiter(',');
  c_propagator->add_option("--dx", propagator.dx_flat, "Separation t,x,y,z (repeatable)")
      ->delimiter(',');
  c_propagator->add_option("--xi-max-ladder", propagator.xi_max_ladder,
                           "Cutoff ladder for commutator_cutoff");
  propagator.quad.add_options(c_propagator);

  NoisyPropagatorCmd noisy;
  CLI::App* c_noisy = app.add_subcommand("noisy-propagator",
                                         "Noise-averaged kernel with free-ratio recording");
  c_noisy->fallthrough();
  c_noisy->add_option("--xi", noisy.xi, "Mass squared");
  c_noisy->add_option("--zeta", noisy.zeta_components, "Noise four-vector t,x,y,z")
      ->delimiter(',');
  c_noisy->add_option("--n-pairs", noisy.n_pairs, "Number of sampled point pairs");
  noisy.quad.add_options(c_noisy);

  PositivityCmd positivity;
  CLI::App* c_positivity = app.add_subcommand("positivity", "Kernel positivity sweep");
  c_positivity->fallthrough();
  c_positivity->add_option("--kernel", positivity.kernel, "Kernel kind");
  c_positivity->add_option("--xi", positivity.xi, "Mass squared");
  c_positivity->add_option("--tau", positivity.tau, "Evolution parameter (phi_tau)");
  c_positivity->add_option("--xi-max", positivity.xi_max, "Mass-squared cutoff");
  c_positivity->add_option("--zeta", positivity.zeta_components, "Noise four-vector t,x,y,z")
      ->delimiter(',');
  c_positivity->add_option("--n-functions", positivity.n_functions, "Family size");
  c_positivity->add_option("--family", positivity.family, "packets|noise|mixed");
  positivity.grid.add_options(c_positivity);
  positivity.quad.add_options(c_positivity);

  LaplaceCheckCmd laplace;
  CLI::App* c_laplace = app.add_subcommand(
      "laplace-check", "Transform of the fixed-mass kernel family vs the tau kernel");
  c_laplace->fallthrough();
  c_laplace->add_option("--dx", laplace.dx_flat, "Separation t,x,y,z (repeatable)")
      ->delimiter(',');
  c_laplace->add_option("--tau", laplace.tau_values, "Tau values");
  c_laplace->add_option("--xi-max", laplace.xi_max, "Mass-squared cutoff");
  c_laplace->add_option("--n-xi", laplace.n_xi, "Mass-grid points");
  c_laplace->add_flag("--emit-measures", laplace.emit_measures,
                      "Write the sampled spectral measures as JSON");
  laplace.quad.add_options(c_laplace);

  SemigroupCmd semigroup;
  CLI::App* c_semigroup = app.add_subcommand("semigroup", "Filtered semigroup evolution audit");
  c_semigroup->fallthrough();
  c_semigroup->add_option("--n-modes", semigroup.n_modes, "Lattice size");
  c_semigroup->add_option("--zeta", semigroup.zeta_components, "Noise four-vector t,x,y,z")
      ->delimiter(',');
  c_semigroup->add_option("--tau", semigroup.tau_values, "Tau ladder");
  c_semigroup->add_option("--kraus-order", semigroup.kraus_order, "Gauss-Hermite order");

  MikeCheckCmd mike;
  CLI::App* c_mike = app.add_subcommand("mike-check", "Residual convergence for the tau evolution");
  c_mike->fallthrough();
  c_mike->add_option("--tau", mike.tau, "Expansion point");
  c_mike->add_option("--dtau", mike.dtau, "Base tau step");
  c_mike->add_option("--levels", mike.levels, "Refinement levels");
  c_mike->add_option("--box-l", mike.box_l, "Spatial half-width");
  c_mike->add_option("--n-space", mike.n_space, "Base spatial resolution");
  c_mike->add_option("--n-time", mike.n_time, "Base time resolution");
  c_mike->add_option("--t-window", mike.t_window, "Time window");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    Json err{{"error", Json{{"exit_code", 2}, {"message", e.what()}}}};
    std::cerr << err.dump() << '\n';
    return 2;
  }

  try {
    if (c_dispersion->parsed()) return dispersion.run(global);
    if (c_propagator->parsed()) return propagator.run(global);
    if (c_noisy->parsed()) return noisy.run(global);
    if (c_positivity->parsed()) return positivity.run(global);
    if (c_laplace->parsed()) return laplace.run(global);
    if (c_semigroup->parsed()) return semigroup.run(global);
    if (c_mike->parsed()) return mike.run(global);
  } catch (const ConfigError& e) {
    Json err{{"error", Json{{"exit_code", 2}, {"message", e.what()}}}};
    std::cerr << err.dump() << '\n';
    return 2;
  } catch (const VerdictViolation& e) {
    Json err{{"error", Json{{"exit_code", 1}, {"message", e.what()}}}};
    std::cerr << err.dump() << '\n';
    return 1;
  } catch (const std::exception& e) {
    Json err{{"error", Json{{"exit_code", 3}, {"message", e.what()}}}};
    std::cerr << err.dump() << '\n';
    return 3;
  }
  return 2;
}
