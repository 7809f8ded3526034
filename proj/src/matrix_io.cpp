#include "hvt/matrix_io.hpp"

#include <fstream>
#include <sstream>

namespace hvt {

using nlohmann::json;

json matrix_to_json(const ComplexMatrix& m) {
  json entries = json::array();
  for (Index r = 0; r < m.rows(); ++r)
    for (Index c = 0; c < m.cols(); ++c) entries.push_back({m(r, c).real(), m(r, c).imag()});
  return {{"dim", m.rows()}, {"entries", std::move(entries)}};
}

json matrix_to_json(const RealMatrix& m) { return matrix_to_json(ComplexMatrix(m.cast<Complex>())); }

ComplexMatrix matrix_from_json(const json& doc) {
  if (!doc.is_object()) throw ValidationError("matrix: document must be an object");
  if (!doc.contains("dim") || !doc["dim"].is_number_integer())
    throw ValidationError("matrix: missing integer field 'dim'");
  if (!doc.contains("entries") || !doc["entries"].is_array())
    throw ValidationError("matrix: missing array field 'entries'");
  const auto n = doc["dim"].get<long long>();
  if (n < 1) throw ValidationError("matrix: 'dim' must be positive");
  const auto& entries = doc["entries"];
  if (static_cast<long long>(entries.size()) != n * n) {
    std::ostringstream os;
    os << "matrix: expected " << n * n << " entries for dim " << n << ", got " << entries.size();
    throw ValidationError(os.str());
  }
  ComplexMatrix m(n, n);
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const auto& e = entries[k];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
      std::ostringstream os;
      os << "matrix: entry " << k << " (row " << k / n << ", column " << k % n
         << ") must be a [re, im] pair of numbers";
      throw ValidationError(os.str());
    }
    m(static_cast<Index>(k) / n, static_cast<Index>(k) % n) = Complex(e[0].get<double>(), e[1].get<double>());
  }
  return m;
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(path + ": cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

void save_json(const std::string& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << doc.dump(2) << '\n';
}

ComplexMatrix load_matrix(const std::string& path) {
  try {
    return matrix_from_json(load_json(path));
  } catch (const ValidationError& e) {
    const std::string what = e.what();
    if (what.rfind(path, 0) == 0) throw;
    throw ValidationError(path + ": " + what);
  }
}

Unitary load_unitary(const std::string& path, double tol) {
  try {
    return Unitary::validated(load_matrix(path), tol);
  } catch (const ValidationError& e) {
    const std::string what = e.what();
    if (what.rfind(path, 0) == 0) throw;
    throw ValidationError(path + ": " + what);
  }
}

DensityMatrix load_density(const std::string& path, double tol) {
  try {
    return DensityMatrix::validated(load_matrix(path), tol);
  } catch (const ValidationError& e) {
    const std::string what = e.what();
    if (what.rfind(path, 0) == 0) throw;
    throw ValidationError(path + ": " + what);
  }
}

}  // namespace hvt
