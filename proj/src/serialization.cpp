#include "kgtau/serialization.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

namespace kgtau {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

Json to_json(const FourVector& v) { return Json::array({v.t, v.x, v.y, v.z}); }

FourVector four_vector_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 4)
    throw std::invalid_argument("FourVector: expected a 4-element array");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
}

Json to_json(const SpectralMeasure& m) {
  Json atoms = Json::array();
  for (const SpectralMeasure::Atom& a : m.atoms) atoms.push_back(Json::array({a.xi, a.weight}));
  return Json{{"atoms", atoms}, {"grid", m.grid}, {"values", m.values}};
}

SpectralMeasure spectral_measure_from_json(const Json& j) {
  SpectralMeasure m;
  for (const Json& a : j.at("atoms")) m.atoms.push_back({a.at(0).get<double>(), a.at(1).get<double>()});
  if (j.contains("grid")) m.grid = j.at("grid").get<std::vector<double>>();
  if (j.contains("values")) m.values = j.at("values").get<std::vector<double>>();
  m.validate();
  return m;
}

Json to_json(const CoeffMatrix& m) {
  Json lattice = Json::array();
  for (const FourVector& k : m.lattice) lattice.push_back(to_json(k));
  Json entries = Json::array();
  for (const Complex& v : m.rho) entries.push_back(Json::array({v.real(), v.imag()}));
  return Json{{"lattice", lattice}, {"rho", entries}};
}

CoeffMatrix coeff_matrix_from_json(const Json& j) {
  CoeffMatrix m;
  for (const Json& k : j.at("lattice")) m.lattice.push_back(four_vector_from_json(k));
  for (const Json& v : j.at("rho")) m.rho.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
  m.validate();
  return m;
}

Json to_json(const QuadratureConfig& q) {
  return Json{{"k_max", q.k_max},
              {"n_radial", q.n_radial},
              {"n_angular", q.n_angular},
              {"scheme", q.scheme == QuadScheme::gauss_legendre ? "gauss_legendre" : "trapezoid"}};
}

std::string kernel_kind_name(KernelKind kind) {
  switch (kind) {
    case KernelKind::wightman: return "wightman";
    case KernelKind::feynman: return "feynman";
    case KernelKind::phi_tau: return "phi_tau";
    case KernelKind::noisy_feynman: return "noisy_feynman";
    case KernelKind::commutator_fixed_mass: return "commutator_fixed_mass";
    case KernelKind::commutator_cutoff: return "commutator_cutoff";
  }
  return "unknown";
}

KernelKind kernel_kind_from_name(const std::string& name) {
  if (name == "wightman") return KernelKind::wightman;
  if (name == "feynman") return KernelKind::feynman;
  if (name == "phi_tau") return KernelKind::phi_tau;
  if (name == "noisy_feynman") return KernelKind::noisy_feynman;
  if (name == "commutator_fixed_mass") return KernelKind::commutator_fixed_mass;
  if (name == "commutator_cutoff") return KernelKind::commutator_cutoff;
  throw std::invalid_argument("unknown kernel kind: " + name);
}

Json to_json(const KernelSpec& spec) {
  return Json{{"kind", kernel_kind_name(spec.kind)},
              {"xi", spec.xi},
              {"tau", spec.tau},
              {"xi_max", spec.xi_max},
              {"zeta", to_json(spec.zeta.zeta())}};
}

Json to_json(const KernelReport& report) {
  Json per = Json::array();
  for (const PerFunctionResult& r : report.per_function) {
    Json entry{{"id", r.id}, {"re", r.re}, {"im", r.im}, {"ok", r.ok}};
    if (!r.ok) entry["error"] = r.error;
    per.push_back(entry);
  }
  return Json{{"kernel", to_json(report.kernel)},
              {"quadrature", to_json(report.quadrature)},
              {"tolerance", report.tolerance},
              {"seed", report.seed},
              {"per_function", per},
              {"min_re", report.min_re},
              {"min_im", report.min_im},
              {"scale", report.scale},
              {"verdict_re", to_string(report.verdict_re)}};
}

struct CsvWriter::Impl {
  std::ofstream out;
};

CsvWriter::CsvWriter(std::string path) : impl_(new Impl) {
  impl_->out.open(path);
  if (!impl_->out) throw std::runtime_error("CsvWriter: cannot open " + path);
}

CsvWriter::~CsvWriter() { delete impl_; }

void CsvWriter::header(const std::vector<std::string>& columns) { row(columns); }

void CsvWriter::row(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) impl_->out << ',';
    impl_->out << cells[i];
  }
  impl_->out << '\n';
}

}  // namespace kgtau
