#include "cohwit/io.hpp"

#include <fstream>
#include <sstream>

namespace cohwit::io {
namespace {

Index read_dim(const json& doc) {
  if (!doc.is_object()) throw FormatError("expected an object with fields 'dim' and 'data'");
  const auto it = doc.find("dim");
  if (it == doc.end() || !it->is_number_integer()) {
    throw FormatError("field 'dim' missing or not an integer");
  }
  const auto d = it->get<long long>();
  if (d < 1) throw FormatError("field 'dim' must be >= 1, got " + std::to_string(d));
  if (d > 4096) throw FormatError("field 'dim' exceeds 4096");
  return static_cast<Index>(d);
}

Complex read_pair(const json& entry, std::size_t k) {
  if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() || !entry[1].is_number()) {
    throw FormatError("data[" + std::to_string(k) + "] is not a [re, im] pair");
  }
  return {entry[0].get<double>(), entry[1].get<double>()};
}

const json& read_data(const json& doc, std::size_t expected) {
  const auto it = doc.find("data");
  if (it == doc.end() || !it->is_array()) throw FormatError("field 'data' missing or not an array");
  if (it->size() != expected) {
    throw FormatError("field 'data' has " + std::to_string(it->size()) + " entries, expected " +
                      std::to_string(expected));
  }
  return *it;
}

json pair(const Complex& z) { return json::array({z.real(), z.imag()}); }

}  // namespace

json matrix_to_json(const ComplexMatrix& m) {
  json data = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) data.push_back(pair(m(i, j)));
  }
  return json{{"dim", m.rows()}, {"data", std::move(data)}};
}

ComplexMatrix matrix_from_json(const json& doc) {
  const Index d = read_dim(doc);
  const json& data = read_data(doc, static_cast<std::size_t>(d * d));
  ComplexMatrix m(d, d);
  std::size_t k = 0;
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j, ++k) m(i, j) = read_pair(data[k], k);
  }
  return m;
}

json vector_to_json(const ComplexVector& v) {
  json data = json::array();
  for (Index i = 0; i < v.size(); ++i) data.push_back(pair(v(i)));
  return json{{"dim", v.size()}, {"data", std::move(data)}};
}

ComplexVector vector_from_json(const json& doc) {
  const Index d = read_dim(doc);
  const json& data = read_data(doc, static_cast<std::size_t>(d));
  ComplexVector v(d);
  for (Index i = 0; i < d; ++i) v(i) = read_pair(data[static_cast<std::size_t>(i)], i);
  return v;
}

json measurement_to_json(const ProjectorSet& p) {
  json ops = json::array();
  for (const auto& m : p.projectors()) ops.push_back(matrix_to_json(m));
  return json{{"dim", p.dim()}, {"kind", "projectors"}, {"operators", std::move(ops)}};
}

json measurement_to_json(const Reference& ref) {
  if (const auto* p = std::get_if<ProjectorSet>(&ref)) return measurement_to_json(*p);
  const auto& e = std::get<PovmSet>(ref);
  json ops = json::array();
  for (const auto& m : e.effects()) ops.push_back(matrix_to_json(m));
  return json{{"dim", e.dim()}, {"kind", "povm"}, {"operators", std::move(ops)}};
}

Reference measurement_from_json(const json& doc, double tol) {
  const Index d = read_dim(doc);
  const auto kind = doc.find("kind");
  if (kind == doc.end() || !kind->is_string()) throw FormatError("field 'kind' missing");
  const auto ops_it = doc.find("operators");
  if (ops_it == doc.end() || !ops_it->is_array()) {
    throw FormatError("field 'operators' missing or not an array");
  }
  std::vector<ComplexMatrix> ops;
  for (std::size_t i = 0; i < ops_it->size(); ++i) {
    try {
      ops.push_back(matrix_from_json((*ops_it)[i]));
    } catch (const FormatError& e) {
      throw FormatError("operators[" + std::to_string(i) + "]: " + e.what());
    }
    if (ops.back().rows() != d) {
      throw InvalidMeasurement("dimension", i,
                               "operator dim " + std::to_string(ops.back().rows()) +
                                   " differs from document dim " + std::to_string(d));
    }
  }
  const auto k = kind->get<std::string>();
  if (k == "projectors") return ProjectorSet(std::move(ops), tol);
  if (k == "povm") return PovmSet(std::move(ops), tol);
  throw FormatError("field 'kind' must be \"projectors\" or \"povm\", got \"" + k + "\"");
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::string canonical(const json& doc) { return doc.dump() + "\n"; }

void write_json_file(const std::filesystem::path& path, const json& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  out << canonical(doc);
}

}  // namespace cohwit::io
