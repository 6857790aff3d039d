#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "kgtau/fields.hpp"
#include "kgtau/kinematics.hpp"
#include "kgtau/positivity.hpp"
#include "kgtau/propagators.hpp"
#include "kgtau/semigroup.hpp"
#include "kgtau/serialization.hpp"
#include "kgtau/spectral.hpp"

namespace py = pybind11;
using namespace kgtau;

PYBIND11_MODULE(_core, m) {
  m.doc() = "variable-mass Klein-Gordon toolkit: kinematics, spectral transforms, "
            "propagator kernels, positivity functionals and the tau semigroup";

  // ---------------------------------------------------------------- kinematics
  py::class_<ThreeVector>(m, "ThreeVector")
      .def(py::init<>())
      .def(py::init<double, double, double>(), py::arg("x"), py::arg("y"), py::arg("z"))
      .def_readwrite("x", &ThreeVector::x)
      .def_readwrite("y", &ThreeVector::y)
      .def_readwrite("z", &ThreeVector::z)
      .def("dot", &ThreeVector::dot)
      .def("norm", &ThreeVector::norm)
      .def("__repr__", [](const ThreeVector& v) {
        return "ThreeVector(" + format_double(v.x) + ", " + format_double(v.y) + ", " +
               format_double(v.z) + ")";
      });

  py::class_<FourVector>(m, "FourVector")
      .def(py::init<>())
      .def(py::init<double, double, double, double>(), py::arg("t"), py::arg("x"), py::arg("y"),
           py::arg("z"))
      .def_readwrite("t", &FourVector::t)
      .def_readwrite("x", &FourVector::x)
      .def_readwrite("y", &FourVector::y)
      .def_readwrite("z", &FourVector::z)
      .def("spatial", &FourVector::spatial)
      .def("__neg__", [](const FourVector& v) { return -v; })
      .def("__add__", [](const FourVector& a, const FourVector& b) { return a + b; })
      .def("__sub__", [](const FourVector& a, const FourVector& b) { return a - b; })
      .def("__mul__", [](const FourVector& a, double s) { return a * s; })
      .def("__rmul__", [](const FourVector& a, double s) { return a * s; })
      .def("__repr__", [](const FourVector& v) {
        return "FourVector(" + format_double(v.t) + ", " + format_double(v.x) + ", " +
               format_double(v.y) + ", " + format_double(v.z) + ")";
      });

  py::class_<ZetaParams>(m, "ZetaParams")
      .def(py::init<>())
      .def(py::init<const FourVector&>(), py::arg("zeta"))
      .def_property_readonly("zeta", &ZetaParams::zeta)
      .def("time_factor", &ZetaParams::time_factor)
      .def("is_zero", &ZetaParams::is_zero);

  m.def("minkowski_dot", &minkowski_dot, py::arg("a"), py::arg("b"));
  m.def("minkowski_norm2", &minkowski_norm2, py::arg("a"));
  m.def("omega", &omega, py::arg("kvec"), py::arg("xi"));
  m.def("in_positive_cone", &in_positive_cone, py::arg("k"));
  m.def("lambda_noisy", &lambda_noisy, py::arg("k"), py::arg("zeta"));
  m.def("shell_discriminant", &shell_discriminant, py::arg("kvec"), py::arg("xi"), py::arg("zeta"));
  m.def("varpi", &varpi, py::arg("kvec"), py::arg("xi"), py::arg("zeta"));

  // ------------------------------------------------------------------ spectral
  py::class_<SpectralMeasure::Atom>(m, "SpectralAtom")
      .def(py::init<double, double>(), py::arg("xi"), py::arg("weight"))
      .def_readwrite("xi", &SpectralMeasure::Atom::xi)
      .def_readwrite("weight", &SpectralMeasure::Atom::weight);

  py::class_<SpectralMeasure>(m, "SpectralMeasure")
      .def(py::init<>())
      .def_readwrite("atoms", &SpectralMeasure::atoms)
      .def_readwrite("grid", &SpectralMeasure::grid)
      .def_readwrite("values", &SpectralMeasure::values)
      .def_static("from_atom", &SpectralMeasure::from_atom, py::arg("xi"), py::arg("weight"))
      .def_static("from_density", &SpectralMeasure::from_density, py::arg("xi_grid"),
                  py::arg("density"))
      .def("validate", &SpectralMeasure::validate)
      .def("empty", &SpectralMeasure::empty)
      .def("to_json", [](const SpectralMeasure& s) { return to_json(s).dump(); });

  m.def("laplace_forward", &laplace_forward, py::arg("measure"), py::arg("tau"));
  m.def("inverse_laplace_expstep", &inverse_laplace_expstep, py::arg("a"), py::arg("half_scaling"));
  m.def("xi_convolution", &xi_convolution, py::arg("f"), py::arg("g"), py::arg("xi"),
        py::arg("panels") = 32);
  m.def("kl_spectral_integral", &kl_spectral_integral, py::arg("rho"), py::arg("kernel"),
        py::arg("x"));

  // -------------------------------------------------------------------- fields
  py::enum_<ModeNormalization>(m, "ModeNormalization")
      .value("kg", ModeNormalization::kg)
      .value("pc", ModeNormalization::pc);

  py::class_<Mode>(m, "Mode")
      .def(py::init<>())
      .def(py::init([](const FourVector& k, Complex ap, Complex aa) {
             return Mode{k, ap, aa};
           }),
           py::arg("k"), py::arg("amp_particle") = Complex{1.0, 0.0},
           py::arg("amp_antiparticle") = Complex{0.0, 0.0})
      .def_readwrite("k", &Mode::k)
      .def_readwrite("amp_particle", &Mode::amp_particle)
      .def_readwrite("amp_antiparticle", &Mode::amp_antiparticle);

  py::class_<ModeLattice>(m, "ModeLattice")
      .def(py::init<>())
      .def(py::init([](std::vector<Mode> modes) {
             ModeLattice l{std::move(modes)};
             l.validate();
             return l;
           }),
           py::arg("modes"))
      .def_readwrite("modes", &ModeLattice::modes)
      .def("validate", &ModeLattice::validate);

  py::class_<BoxGrid>(m, "BoxGrid")
      .def(py::init<>())
      .def(py::init([](double L, int n_space, double t_window, int n_time) {
             BoxGrid g{L, n_space, t_window, n_time};
             g.validate();
             return g;
           }),
           py::arg("L"), py::arg("n_space"), py::arg("t_window"), py::arg("n_time"))
      .def_readwrite("L", &BoxGrid::L)
      .def_readwrite("n_space", &BoxGrid::n_space)
      .def_readwrite("t_window", &BoxGrid::t_window)
      .def_readwrite("n_time", &BoxGrid::n_time)
      .def("lattice_momentum", &BoxGrid::lattice_momentum)
      .def("box_volume", &BoxGrid::box_volume);

  py::class_<FieldSlice>(m, "FieldSlice")
      .def_readonly("value", &FieldSlice::value)
      .def_readonly("dvalue_dt", &FieldSlice::dvalue_dt)
      .def_static("from_two_slices", &FieldSlice::from_two_slices, py::arg("lower"),
                  py::arg("upper"), py::arg("dt"));

  m.def("mode_function", &mode_function, py::arg("k"), py::arg("x"), py::arg("normalization"));
  m.def("sample_mode_lattice_slice", &sample_mode_lattice_slice, py::arg("state"), py::arg("grid"),
        py::arg("t"));
  m.def("kg_inner_product", &kg_inner_product, py::arg("phi"), py::arg("psi"), py::arg("grid"));
  m.def("mike_residual", &mike_residual, py::arg("state"), py::arg("tau"), py::arg("dtau"),
        py::arg("grid"));
  m.def("energy_functional", &energy_functional, py::arg("state"));
  m.def("phase_evolve", &phase_evolve, py::arg("state"), py::arg("t"));
  m.def("windowed_xi_overlap", &windowed_xi_overlap, py::arg("kvec"), py::arg("xi"),
        py::arg("xi_prime"), py::arg("t_window"), py::arg("n_time"), py::arg("box_volume"));

  // --------------------------------------------------------------- propagators
  py::enum_<QuadScheme>(m, "QuadScheme")
      .value("gauss_legendre", QuadScheme::gauss_legendre)
      .value("trapezoid", QuadScheme::trapezoid);

  py::class_<QuadratureConfig>(m, "QuadratureConfig")
      .def(py::init<>())
      .def(py::init([](double k_max, int n_radial, int n_angular, QuadScheme scheme) {
             QuadratureConfig q{k_max, n_radial, n_angular, scheme};
             q.validate();
             return q;
           }),
           py::arg("k_max"), py::arg("n_radial"), py::arg("n_angular"),
           py::arg("scheme") = QuadScheme::gauss_legendre)
      .def_readwrite("k_max", &QuadratureConfig::k_max)
      .def_readwrite("n_radial", &QuadratureConfig::n_radial)
      .def_readwrite("n_angular", &QuadratureConfig::n_angular)
      .def_readwrite("scheme", &QuadratureConfig::scheme);

  py::enum_<KernelKind>(m, "KernelKind")
      .value("wightman", KernelKind::wightman)
      .value("feynman", KernelKind::feynman)
      .value("phi_tau", KernelKind::phi_tau)
      .value("noisy_feynman", KernelKind::noisy_feynman)
      .value("commutator_fixed_mass", KernelKind::commutator_fixed_mass)
      .value("commutator_cutoff", KernelKind::commutator_cutoff);

  py::class_<KernelSpec>(m, "KernelSpec")
      .def(py::init<>())
      .def_readwrite("kind", &KernelSpec::kind)
      .def_readwrite("xi", &KernelSpec::xi)
      .def_readwrite("tau", &KernelSpec::tau)
      .def_readwrite("xi_max", &KernelSpec::xi_max)
      .def_readwrite("zeta", &KernelSpec::zeta)
      .def("validate", &KernelSpec::validate);

  m.def("wightman", &wightman, py::arg("dx"), py::arg("xi"), py::arg("q"));
  m.def("feynman", &feynman, py::arg("x"), py::arg("y"), py::arg("xi"), py::arg("q"));
  m.def("phi_tau_kernel", &phi_tau_kernel, py::arg("dx"), py::arg("tau"), py::arg("xi_max"),
        py::arg("q"));
  m.def("noisy_feynman", &noisy_feynman, py::arg("x"), py::arg("y"), py::arg("xi"),
        py::arg("zeta"), py::arg("q"));
  m.def("commutator_kernel", &commutator_kernel, py::arg("dx"), py::arg("spec"), py::arg("q"));
  m.def("evaluate_kernel", &evaluate_kernel, py::arg("dx"), py::arg("spec"), py::arg("q"));

  // ---------------------------------------------------------------- positivity
  py::class_<TestFunction>(m, "TestFunction")
      .def(py::init([](const FourVector& center, std::array<double, 4> widths,
                       const FourVector& carrier, Complex amplitude) {
             TestFunction f;
             f.form = TestFunction::Form::gaussian_packet;
             f.center = center;
             f.widths = widths;
             f.carrier = carrier;
             f.amplitude = amplitude;
             f.validate();
             return f;
           }),
           py::arg("center"), py::arg("widths"), py::arg("carrier"),
           py::arg("amplitude") = Complex{1.0, 0.0})
      .def_readwrite("center", &TestFunction::center)
      .def_readwrite("widths", &TestFunction::widths)
      .def_readwrite("carrier", &TestFunction::carrier)
      .def_readwrite("amplitude", &TestFunction::amplitude)
      .def("eval_packet", &TestFunction::eval_packet);

  py::enum_<Verdict>(m, "Verdict")
      .value("positive", Verdict::positive)
      .value("violated", Verdict::violated)
      .value("inconclusive", Verdict::inconclusive);

  py::class_<PerFunctionResult>(m, "PerFunctionResult")
      .def_readonly("id", &PerFunctionResult::id)
      .def_readonly("re", &PerFunctionResult::re)
      .def_readonly("im", &PerFunctionResult::im)
      .def_readonly("ok", &PerFunctionResult::ok);

  py::class_<KernelReport>(m, "KernelReport")
      .def_readonly("per_function", &KernelReport::per_function)
      .def_readonly("min_re", &KernelReport::min_re)
      .def_readonly("min_im", &KernelReport::min_im)
      .def_readonly("scale", &KernelReport::scale)
      .def_readonly("verdict_re", &KernelReport::verdict_re)
      .def("to_json", [](const KernelReport& r) { return to_json(r).dump(); });

  m.def("functional_momentum_noisy", &functional_momentum_noisy, py::arg("f"), py::arg("xi"),
        py::arg("zeta"), py::arg("grid"), py::arg("q"));
  m.def("functional_momentum_free", &functional_momentum_free, py::arg("f"), py::arg("xi"),
        py::arg("grid"), py::arg("q"));
  m.def("functional_direct_stationary", &functional_direct_stationary, py::arg("spec"),
        py::arg("f"), py::arg("grid"), py::arg("q"));
  m.def("imaginary_antisymmetry_check", &imaginary_antisymmetry_check, py::arg("f"), py::arg("xi"),
        py::arg("zeta"), py::arg("grid"), py::arg("q"));
  m.def(
      "sweep",
      [](const KernelSpec& spec, const std::vector<TestFunction>& family, const BoxGrid& grid,
         const QuadratureConfig& q, double tolerance, std::uint64_t seed, int threads) {
        SweepOptions opt;
        opt.tolerance = tolerance;
        opt.seed = seed;
        opt.threads = threads;
        return sweep(spec, family, grid, q, opt);
      },
      py::arg("spec"), py::arg("family"), py::arg("grid"), py::arg("q"),
      py::arg("tolerance") = 1e-8, py::arg("seed") = 0, py::arg("threads") = 0);
  m.def("make_packet_family",
        [](int n, const BoxGrid& grid, std::uint64_t seed) {
          return make_packet_family(n, grid, seed);
        },
        py::arg("n"), py::arg("grid"), py::arg("seed"));
  m.def("make_noise_family", &make_noise_family, py::arg("n"), py::arg("grid"), py::arg("seed"));

  // ------------------------------------------------------------------ semigroup
  py::class_<CoeffMatrix>(m, "CoeffMatrix")
      .def(py::init<>())
      .def(py::init([](std::vector<FourVector> lattice, std::vector<Complex> rho) {
             CoeffMatrix c;
             c.lattice = std::move(lattice);
             c.rho = std::move(rho);
             c.validate();
             return c;
           }),
           py::arg("lattice"), py::arg("rho"))
      .def_readwrite("lattice", &CoeffMatrix::lattice)
      .def_readwrite("rho", &CoeffMatrix::rho)
      .def("at", [](const CoeffMatrix& c, std::size_t i, std::size_t j) { return c.at(i, j); })
      .def("is_hermitian", &CoeffMatrix::is_hermitian, py::arg("tol") = 1e-14)
      .def("to_json", [](const CoeffMatrix& c) { return to_json(c).dump(); });

  py::enum_<KrausMode>(m, "KrausMode")
      .value("closed_form", KrausMode::closed_form)
      .value("quadrature", KrausMode::quadrature);

  m.def("semigroup_lambda", &semigroup_lambda, py::arg("ki"), py::arg("kj"), py::arg("zeta"));
  m.def("mike_evolve", &mike_evolve, py::arg("state"), py::arg("tau"));
  m.def("liouville_apply", &liouville_apply, py::arg("rho"), py::arg("zeta"));
  m.def("gaussian_kraus_map", &gaussian_kraus_map, py::arg("rho"), py::arg("zeta"), py::arg("tau"),
        py::arg("mode") = KrausMode::closed_form, py::arg("order") = 48);
  m.def("full_semigroup_step", &full_semigroup_step, py::arg("rho"), py::arg("zeta"),
        py::arg("tau"));
  m.def("stability_filter", &stability_filter, py::arg("rho"), py::arg("zeta"));
  m.def("von_neumann_residual", &von_neumann_residual, py::arg("state"), py::arg("tau"),
        py::arg("h"));
  m.def("outer_product", &outer_product, py::arg("state"));

#ifdef VERSION_INFO
  m.attr("__version__") = VERSION_INFO;
#else
  m.attr("__version__") = "0.1.0";
#endif
}
