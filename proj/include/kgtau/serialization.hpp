#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "kgtau/positivity.hpp"
#include "kgtau/semigroup.hpp"
#include "kgtau/spectral.hpp"

namespace kgtau {

using Json = nlohmann::ordered_json;

/// Shortest decimal representation that reparses to the same double.
std::string format_double(double v);

Json to_json(const FourVector& v);
FourVector four_vector_from_json(const Json& j);

Json to_json(const SpectralMeasure& m);
SpectralMeasure spectral_measure_from_json(const Json& j);

Json to_json(const CoeffMatrix& m);
CoeffMatrix coeff_matrix_from_json(const Json& j);

Json to_json(const QuadratureConfig& q);
Json to_json(const KernelSpec& spec);
Json to_json(const KernelReport& report);

std::string kernel_kind_name(KernelKind kind);
KernelKind kernel_kind_from_name(const std::string& name);

/// One CSV row; doubles are rendered with format_double.
class CsvWriter {
 public:
  explicit CsvWriter(std::string path);
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;
  CsvWriter(CsvWriter&& other) noexcept : impl_(other.impl_) { other.impl_ = nullptr; }

  void header(const std::vector<std::string>& columns);
  void row(const std::vector<std::string>& cells);

  static std::string cell(double v) { return format_double(v); }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(std::size_t v) { return std::to_string(v); }
  static std::string cell(const std::string& v) { return v; }

 private:
  struct Impl;
  Impl* impl_;
};

}  // namespace kgtau
