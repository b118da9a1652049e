#ifndef QEL_SCENARIO_HPP
#define QEL_SCENARIO_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "qel/classical.hpp"
#include "qel/ergodic.hpp"
#include "qel/io.hpp"

namespace qel {

struct Tolerances {
  double validation = 1e-9;
  double final_tol = 5e-3;
  double gns_cutoff = 1e-12;
};

struct NetSpec {
  std::string kind = "constant_haar";  // or "cesaro"
  io::json generator;                  // "haar" | "uniform" | "delta:g" | "lazy:g" | {"values": [...]}
  int n_max = 25;
};

/// Parsed scenario document.  Input files referenced by the scenario are
/// resolved relative to the scenario file; output paths relative to the
/// working directory.
struct Scenario {
  std::string name;
  std::string group_spec;
  std::string action_spec = "translation";
  io::json algebra_spec;  // optional source algebra for trivial actions
  io::json omega_spec = "haar-induced";
  NetSpec net;
  Tolerances tol;
  std::string report_path;
  std::string csv_path;
  std::uint64_t seed = 0;
};

Scenario parse_scenario(const io::json& j);

/// All objects built and validated.
struct ResolvedScenario {
  Scenario spec;
  std::shared_ptr<const QuantumGroup> group;
  std::shared_ptr<const StarAlgebra> source;
  std::optional<Action> action;
  Functional omega;
  std::vector<Functional> thetas;
  std::optional<AveragingNet> net;
  bool function_algebra_group = false;
  std::optional<CayleyTable> table;
};

/// Builds every scenario object; throws the first validation error.
ResolvedScenario resolve_scenario(const Scenario& s, const std::filesystem::path& base_dir);
ResolvedScenario load_and_resolve(const std::filesystem::path& scenario_file);

/// Group spec resolution is also exposed for tools.
std::shared_ptr<const QuantumGroup> resolve_group(const std::string& spec,
                                                  const std::filesystem::path& base_dir);

struct ValidationReport {
  std::string scenario;
  double coassociativity = 0.0;
  double group_homomorphism = 0.0;
  double action_homomorphism = 0.0;
  double coaction = 0.0;
  double invariance = 0.0;
  double tolerance = 0.0;
  bool ok = false;
};

ValidationReport run_validation(const ResolvedScenario& r);
io::json validation_to_json(const ValidationReport& v);

/// gns -> fixed space -> projection -> averaging experiment -> verdict;
/// writes the report and CSV when the scenario asks for them.
ErgodicReport run_experiment(const ResolvedScenario& r);
void write_report_files(const ErgodicReport& report, const std::string& report_path,
                        const std::string& csv_path);

/// State resolution shared by net generators and the spectrum command.
Functional resolve_state(const ResolvedScenario& r, const io::json& spec, const std::string& what);

struct SpectralReport {
  std::string scenario;
  std::string state;
  std::vector<double> singular_values;
  CVec eigenvalues;
  double spectral_radius = 0.0;
  double peripheral_distance_to_fixed_space = 0.0;
};

SpectralReport run_spectrum(const ResolvedScenario& r, const Functional& mu);
io::json spectral_to_json(const SpectralReport& s);

/// Classical averaging runner config:
/// { name, system, n_max, output? } with system one of
/// "cyclic_shift:d", "scalar:x", "regular:<group spec>", {"matrix": [...]}.
struct ClassicalReport {
  std::string name;
  int dim = 0;
  bool finite = false;
  std::vector<std::pair<int, double>> deviations;  // n, max-entry |A_n - P|
  double final_deviation = 0.0;
  std::optional<double> deviation_at_group_order;
};

ClassicalReport run_classical(const io::json& config, const std::filesystem::path& base_dir);
io::json classical_to_json(const ClassicalReport& c);
std::string classical_csv(const ClassicalReport& c);

}  // namespace qel

#endif
