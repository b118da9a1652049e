#ifndef QEL_IO_HPP
#define QEL_IO_HPP

#include <filesystem>
#include <string>

#include "json.hpp"
#include "qel/ergodic.hpp"
#include "qel/quantum_group.hpp"

namespace qel::io {

using json = nlohmann::ordered_json;

/// Reads and parses; throws IoError / ParseError.
json read_json_file(const std::filesystem::path& path);
/// Writes through a temp file and renames, so readers never see partial
/// output.
void write_text_atomic(const std::filesystem::path& path, const std::string& content);

/// Every parser rejects unknown fields.
void check_fields(const json& j, std::initializer_list<const char*> allowed, const std::string& what);

json complex_to_json(Complex z);
Complex complex_from_json(const json& j, const std::string& what);

CayleyTable cayley_from_json(const json& j);
json cayley_to_json(const CayleyTable& g);

/// Algebra document: { name?, block_dims, basis, unit }.
std::shared_ptr<const StarAlgebra> algebra_from_json(const json& j);
json algebra_to_json(const StarAlgebra& a, const std::string& name);

/// Quantum group document: { name?, block_dims, basis, unit, delta, haar? }.
/// delta holds the nonzero coefficients as [i, j, k, re, im] quintuples.
std::shared_ptr<const QuantumGroup> quantum_group_from_json(const json& j);
json quantum_group_to_json(const QuantumGroup& qg, bool include_haar = true);

std::shared_ptr<const QuantumGroup> load_quantum_group(const std::filesystem::path& path);

json report_to_json(const ErgodicReport& r);
std::string report_csv(const ErgodicReport& r);

}  // namespace qel::io

#endif
