#include "qel/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "qel/error.hpp"

namespace qel::io {

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io_error, "cannot open " + path.string());
  try {
    json j;
    in >> j;
    return j;
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::parse_error, path.string() + ": " + e.what());
  }
}

void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(Errc::io_error, "cannot write " + tmp.string());
    out << content;
    if (!out.good()) fail(Errc::io_error, "short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) fail(Errc::io_error, "cannot rename " + tmp.string() + " to " + path.string());
}

namespace {
// Converts nlohmann type errors raised inside f into ParseError.
template <typename F>
auto guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const Error&) {
    throw;
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::parse_error, std::string(what) + ": " + e.what());
  }
}
}  // namespace

void check_fields(const json& j, std::initializer_list<const char*> allowed, const std::string& what) {
  if (!j.is_object()) fail(Errc::parse_error, what + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed)
      if (key == a) {
        ok = true;
        break;
      }
    if (!ok) fail(Errc::parse_error, what + ": unknown field '" + key + "'");
  }
}

namespace {

const json& require(const json& j, const char* key, const std::string& what) {
  auto it = j.find(key);
  if (it == j.end()) fail(Errc::parse_error, what + ": missing field '" + key + "'");
  return *it;
}

int require_int(const json& j, const std::string& what) {
  if (!j.is_number_integer()) fail(Errc::parse_error, what + ": expected an integer");
  return j.get<int>();
}

double require_real(const json& j, const std::string& what) {
  if (!j.is_number()) fail(Errc::parse_error, what + ": expected a number");
  return j.get<double>();
}

}  // namespace

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 2)
    fail(Errc::parse_error, what + ": complex values are [re, im] pairs");
  return {require_real(j[0], what), require_real(j[1], what)};
}

namespace {
CayleyTable cayley_from_json_impl(const json& j) {
  check_fields(j, {"name", "order", "table"}, "cayley table");
  const int n = require_int(require(j, "order", "cayley table"), "order");
  const json& t = require(j, "table", "cayley table");
  if (!t.is_array() || int(t.size()) != n) fail(Errc::parse_error, "cayley table: wrong row count");
  std::vector<std::vector<int>> rows;
  for (const json& row : t) {
    if (!row.is_array() || int(row.size()) != n)
      fail(Errc::parse_error, "cayley table: wrong column count");
    std::vector<int> r;
    for (const json& v : row) r.push_back(require_int(v, "table entry"));
    rows.push_back(std::move(r));
  }
  return CayleyTable::validate(std::move(rows));
}
}  // namespace

CayleyTable cayley_from_json(const json& j) {
  return guarded("cayley table", [&] { return cayley_from_json_impl(j); });
}

json cayley_to_json(const CayleyTable& g) {
  json j;
  j["order"] = g.order;
  j["table"] = g.table;
  return j;
}

namespace {

CMatrix matrix_from_json(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) fail(Errc::parse_error, what + ": expected a nonempty matrix");
  const int rows = int(j.size());
  const int cols = int(j[0].size());
  CMatrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    if (!j[r].is_array() || int(j[r].size()) != cols) fail(Errc::parse_error, what + ": ragged matrix");
    for (int c = 0; c < cols; ++c) m.at(r, c) = complex_from_json(j[r][c], what);
  }
  return m;
}

json matrix_to_json(const CMatrix& m) {
  json rows = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m.at(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

CVec values_from_json(const json& j, int expect, const std::string& what) {
  if (!j.is_array() || int(j.size()) != expect)
    fail(Errc::parse_error, what + ": expected " + std::to_string(expect) + " values");
  CVec v;
  for (const json& e : j) v.push_back(complex_from_json(e, what));
  return v;
}

json values_to_json(const CVec& v) {
  json out = json::array();
  for (Complex z : v) out.push_back(complex_to_json(z));
  return out;
}

struct AlgebraDoc {
  std::string name;
  std::vector<int> block_dims;
  std::vector<CMatrix> basis;
  CVec unit;
};

AlgebraDoc algebra_doc_from_json(const json& j) {
  check_fields(j, {"name", "block_dims", "basis", "unit"}, "algebra");
  AlgebraDoc doc;
  if (j.contains("name")) doc.name = j["name"].get<std::string>();
  for (const json& d : require(j, "block_dims", "algebra")) doc.block_dims.push_back(require_int(d, "block dim"));
  const json& basis = require(j, "basis", "algebra");
  if (!basis.is_array() || basis.empty()) fail(Errc::parse_error, "algebra: empty basis");
  for (const json& b : basis) doc.basis.push_back(matrix_from_json(b, "basis matrix"));
  doc.unit = values_from_json(require(j, "unit", "algebra"), int(doc.basis.size()), "unit");
  return doc;
}

std::shared_ptr<const StarAlgebra> build_algebra(AlgebraDoc doc) {
  auto alg = StarAlgebra::validate(std::move(doc.basis), std::move(doc.block_dims), 1e-9, doc.name);
  if (max_abs_diff(alg->unit_coeffs(), doc.unit) > 1e-9)
    fail(Errc::parse_error, "algebra: declared unit coefficients are wrong");
  return alg;
}

}  // namespace

std::shared_ptr<const StarAlgebra> algebra_from_json(const json& j) {
  return guarded("algebra", [&] { return build_algebra(algebra_doc_from_json(j)); });
}

json algebra_to_json(const StarAlgebra& a, const std::string& name) {
  json j;
  if (!name.empty()) j["name"] = name;
  j["block_dims"] = a.block_dims();
  json basis = json::array();
  for (const CMatrix& b : a.basis()) basis.push_back(matrix_to_json(b));
  j["basis"] = std::move(basis);
  j["unit"] = values_to_json(a.unit_coeffs());
  return j;
}

namespace {
std::shared_ptr<const QuantumGroup> quantum_group_from_json_impl(const json& j) {
  check_fields(j, {"name", "block_dims", "basis", "unit", "delta", "haar"}, "quantum group");
  std::string name;
  if (j.contains("name")) name = j["name"].get<std::string>();
  AlgebraDoc doc;
  doc.name = name;
  for (const json& d : require(j, "block_dims", "quantum group"))
    doc.block_dims.push_back(require_int(d, "block dim"));
  for (const json& b : require(j, "basis", "quantum group"))
    doc.basis.push_back(matrix_from_json(b, "basis matrix"));
  const int dim = int(doc.basis.size());
  doc.unit = values_from_json(require(j, "unit", "quantum group"), dim, "unit");
  auto alg = build_algebra(std::move(doc));

  CMatrix delta(dim, dim * dim);
  for (const json& t : require(j, "delta", "quantum group")) {
    if (!t.is_array() || t.size() != 5)
      fail(Errc::parse_error, "quantum group: delta entries are [i, j, k, re, im]");
    const int i = require_int(t[0], "delta index"), jj = require_int(t[1], "delta index"),
              k = require_int(t[2], "delta index");
    if (i < 0 || i >= dim || jj < 0 || jj >= dim || k < 0 || k >= dim)
      fail(Errc::parse_error, "quantum group: delta index out of range");
    delta.at(i, jj * dim + k) = Complex(require_real(t[3], "delta"), require_real(t[4], "delta"));
  }

  std::optional<CVec> haar;
  if (j.contains("haar")) haar = values_from_json(j["haar"], dim, "haar");
  return std::make_shared<QuantumGroup>(alg, std::move(delta), std::move(haar), 1e-9, name);
}
}  // namespace

std::shared_ptr<const QuantumGroup> quantum_group_from_json(const json& j) {
  return guarded("quantum group", [&] { return quantum_group_from_json_impl(j); });
}

json quantum_group_to_json(const QuantumGroup& qg, bool include_haar) {
  const StarAlgebra& a = *qg.algebra();
  json j = algebra_to_json(a, qg.name());
  json delta = json::array();
  const int dim = a.dim();
  for (int i = 0; i < dim; ++i)
    for (int jj = 0; jj < dim; ++jj)
      for (int k = 0; k < dim; ++k) {
        const Complex c = qg.delta().at(i, jj * dim + k);
        if (c != 0.0) delta.push_back(json::array({i, jj, k, c.real(), c.imag()}));
      }
  j["delta"] = std::move(delta);
  if (include_haar) j["haar"] = values_to_json(qg.haar().values);
  return j;
}

std::shared_ptr<const QuantumGroup> load_quantum_group(const std::filesystem::path& path) {
  return quantum_group_from_json(read_json_file(path));
}

json report_to_json(const ErgodicReport& r) {
  json j;
  j["scenario"] = r.scenario;
  j["seed"] = r.seed;
  j["net"] = r.net;
  j["dim_H"] = r.dim_H;
  j["dim_V"] = r.dim_V;
  if (r.cyclic_vector_residual)
    j["cyclic_vector_residual"] = *r.cyclic_vector_residual;
  else
    j["cyclic_vector_residual"] = nullptr;
  json rows = json::array();
  for (const DeviationRow& row : r.rows) {
    json e;
    e["n"] = row.n;
    e["dev"] = row.dev;
    e["amenability_defect"] = row.amenability_defect;
    e["correlation_defect"] = row.correlation_defect;
    rows.push_back(std::move(e));
  }
  j["deviations"] = std::move(rows);
  json fin;
  fin["n"] = r.rows.empty() ? 0 : r.rows.back().n;
  fin["dev"] = r.final_dev;
  fin["amenability_defect"] = r.final_amenability;
  fin["correlation_defect"] = r.final_correlation;
  fin["tolerance"] = r.final_tolerance;
  fin["converged"] = r.converged;
  j["final"] = std::move(fin);
  j["verdict"] = r.verdict;
  j["warnings"] = r.warnings;
  return j;
}

std::string report_csv(const ErgodicReport& r) {
  std::string out = "n,dev,amenability_defect,correlation_defect\n";
  char buf[160];
  for (const DeviationRow& row : r.rows) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g\n", row.n, row.dev,
                  row.amenability_defect, row.correlation_defect);
    out += buf;
  }
  return out;
}

}  // namespace qel::io
