#include "qel/scenario.hpp"

#include <cmath>
#include <cstdio>

#include "qel/eig.hpp"
#include "qel/error.hpp"

namespace qel {

namespace {

std::vector<std::string> split_spec(const std::string& s) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = s.find(':', pos);
    if (next == std::string::npos) {
      parts.push_back(s.substr(pos));
      break;
    }
    parts.push_back(s.substr(pos, next - pos));
    pos = next + 1;
  }
  return parts;
}

int parse_int(const std::string& s, int min, const std::string& what) {
  try {
    const int n = std::stoi(s);
    if (n < min) fail(Errc::parse_error, what + ": value too small");
    return n;
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    fail(Errc::parse_error, what + ": expected a number, got '" + s + "'");
  }
}

int parse_count(const std::string& s, const std::string& what) { return parse_int(s, 1, what); }

std::filesystem::path join_path(const std::filesystem::path& base, const std::string& rel) {
  const std::filesystem::path p(rel);
  return p.is_absolute() ? p : base / p;
}

CayleyTable resolve_table(const std::vector<std::string>& parts, std::size_t from,
                          const std::filesystem::path& base_dir) {
  if (from >= parts.size()) fail(Errc::parse_error, "group spec: missing group name");
  const std::string& kind = parts[from];
  if (kind == "cyclic") {
    if (from + 1 >= parts.size()) fail(Errc::parse_error, "group spec: cyclic:<n>");
    return CayleyTable::cyclic(parse_count(parts[from + 1], "cyclic order"));
  }
  if (kind == "klein4") return CayleyTable::klein4();
  if (kind == "symmetric") {
    if (from + 1 >= parts.size() || parts[from + 1] != "3")
      fail(Errc::parse_error, "group spec: only symmetric:3 is built in");
    return CayleyTable::symmetric3();
  }
  if (kind == "file") {
    if (from + 1 >= parts.size()) fail(Errc::parse_error, "group spec: file:<path>");
    std::string rest = parts[from + 1];
    for (std::size_t i = from + 2; i < parts.size(); ++i) rest += ":" + parts[i];
    return io::cayley_from_json(io::read_json_file(join_path(base_dir, rest)));
  }
  fail(Errc::parse_error, "group spec: unknown group '" + kind + "'");
}

CMatrix alpha_from_triples(const io::json& triples, int da, int dr) {
  CMatrix alpha(da, dr * da);
  if (!triples.is_array()) fail(Errc::parse_error, "alpha: expected an array of quintuples");
  for (const io::json& t : triples) {
    if (!t.is_array() || t.size() != 5)
      fail(Errc::parse_error, "alpha entries are [i, j, k, re, im]");
    const int i = t[0].get<int>(), j = t[1].get<int>(), k = t[2].get<int>();
    if (i < 0 || i >= da || j < 0 || j >= dr || k < 0 || k >= da)
      fail(Errc::parse_error, "alpha index out of range");
    alpha.at(i, j * da + k) = Complex(t[3].get<double>(), t[4].get<double>());
  }
  return alpha;
}

std::shared_ptr<const StarAlgebra> builtin_m2() {
  std::vector<CMatrix> basis;
  for (int p = 0; p < 2; ++p)
    for (int q = 0; q < 2; ++q) {
      CMatrix e(2, 2);
      e.at(p, q) = 1.0;
      basis.push_back(std::move(e));
    }
  return StarAlgebra::validate(std::move(basis), {2}, 1e-9, "M2");
}

}  // namespace

namespace {
Scenario parse_scenario_impl(const io::json& j) {
  io::check_fields(j, {"name", "group", "action", "algebra", "omega", "net", "tolerances", "output", "seed"},
                   "scenario");
  Scenario s;
  if (!j.contains("name")) fail(Errc::parse_error, "scenario: missing 'name'");
  s.name = j["name"].get<std::string>();
  if (!j.contains("group")) fail(Errc::parse_error, "scenario: missing 'group'");
  s.group_spec = j["group"].get<std::string>();
  if (j.contains("action")) s.action_spec = j["action"].get<std::string>();
  if (j.contains("algebra")) s.algebra_spec = j["algebra"];
  if (j.contains("omega")) s.omega_spec = j["omega"];
  if (j.contains("net")) {
    const io::json& n = j["net"];
    io::check_fields(n, {"kind", "generator", "n_max"}, "net");
    if (n.contains("kind")) s.net.kind = n["kind"].get<std::string>();
    if (s.net.kind != "constant_haar" && s.net.kind != "cesaro")
      fail(Errc::parse_error, "net: kind must be constant_haar or cesaro");
    if (n.contains("generator")) s.net.generator = n["generator"];
    if (n.contains("n_max")) {
      s.net.n_max = n["n_max"].get<int>();
      if (s.net.n_max < 1) fail(Errc::parse_error, "net: n_max must be positive");
    }
  }
  if (j.contains("tolerances")) {
    const io::json& t = j["tolerances"];
    io::check_fields(t, {"validation", "final", "gns_cutoff"}, "tolerances");
    if (t.contains("validation")) s.tol.validation = t["validation"].get<double>();
    if (t.contains("final")) s.tol.final_tol = t["final"].get<double>();
    if (t.contains("gns_cutoff")) s.tol.gns_cutoff = t["gns_cutoff"].get<double>();
    if (s.tol.validation <= 0 || s.tol.final_tol <= 0 || s.tol.gns_cutoff <= 0)
      fail(Errc::parse_error, "tolerances must be positive");
  }
  if (j.contains("output")) {
    const io::json& o = j["output"];
    io::check_fields(o, {"report", "csv"}, "output");
    if (o.contains("report")) s.report_path = o["report"].get<std::string>();
    if (o.contains("csv")) s.csv_path = o["csv"].get<std::string>();
  }
  if (j.contains("seed")) s.seed = j["seed"].get<std::uint64_t>();
  return s;
}
}  // namespace

Scenario parse_scenario(const io::json& j) {
  try {
    return parse_scenario_impl(j);
  } catch (const Error&) {
    throw;
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::parse_error, std::string("scenario: ") + e.what());
  }
}

std::shared_ptr<const QuantumGroup> resolve_group(const std::string& spec,
                                                  const std::filesystem::path& base_dir) {
  const auto parts = split_spec(spec);
  if (parts.empty()) fail(Errc::parse_error, "empty group spec");
  if (parts[0] == "function_algebra") return build_function_algebra(resolve_table(parts, 1, base_dir));
  if (parts[0] == "group_algebra") {
    const CayleyTable t = resolve_table(parts, 1, base_dir);
    if (t.is_abelian()) return build_group_algebra(t);
    if (parts.size() >= 3 && parts[1] == "symmetric" && parts[2] == "3")
      return build_group_algebra(t, symmetric3_irreps());
    fail(Errc::missing_block_data,
         "group spec: nonabelian group algebra needs builtin irreps (only symmetric:3)");
  }
  if (parts[0] == "file") {
    std::string rest = spec.substr(5);
    return io::load_quantum_group(join_path(base_dir, rest));
  }
  fail(Errc::parse_error, "group spec: expected function_algebra:..., group_algebra:... or file:...");
}

namespace {
ResolvedScenario resolve_scenario_impl(const Scenario& s, const std::filesystem::path& base_dir) {
  ResolvedScenario r;
  r.spec = s;

  const auto gparts = split_spec(s.group_spec);
  r.function_algebra_group = !gparts.empty() && gparts[0] == "function_algebra";
  if (!gparts.empty() && gparts[0] != "file") {
    // Builtins come from a table we keep for permutation actions.
    r.table = resolve_table(gparts, 1, base_dir);
  }

  const auto aparts = split_spec(s.action_spec);
  if (aparts[0] == "permutation") {
    if (!r.function_algebra_group || !r.table)
      fail(Errc::parse_error, "permutation actions need a function_algebra group");
    if (aparts.size() < 2) fail(Errc::parse_error, "action spec: permutation:<path>");
    std::string rest = s.action_spec.substr(std::string("permutation:").size());
    const io::json doc = io::read_json_file(join_path(base_dir, rest));
    io::check_fields(doc, {"name", "points", "maps", "measure"}, "permutation action");
    const int points = doc.at("points").get<int>();
    std::vector<std::vector<int>> maps;
    for (const io::json& row : doc.at("maps")) maps.push_back(row.get<std::vector<int>>());
    std::vector<double> measure(points, 1.0 / points);
    if (doc.contains("measure")) measure = doc["measure"].get<std::vector<double>>();
    // Explicit omega overrides the file measure.
    if (s.omega_spec.is_object()) {
      io::check_fields(s.omega_spec, {"values"}, "omega");
      const auto vals = s.omega_spec["values"];
      if (int(vals.size()) != points) fail(Errc::parse_error, "omega: value count mismatch");
      for (int p = 0; p < points; ++p) {
        const Complex z = io::complex_from_json(vals[p], "omega value");
        if (std::abs(z.imag()) > 1e-12)
          fail(Errc::parse_error, "omega: the measure of a permutation action must be real");
        measure[p] = z.real();
      }
    }
    BridgedSystem bridged = bridge_to_quantum(*r.table, maps, measure);
    r.group = bridged.group;
    r.source = bridged.algebra;
    r.action = std::move(bridged.action);
    r.omega = bridged.omega;
  } else {
    r.group = resolve_group(s.group_spec, base_dir);
    if (aparts[0] == "translation") {
      r.source = r.group->algebra();
      r.action = translation_action(r.group);
    } else if (aparts[0] == "trivial") {
      if (s.algebra_spec.is_null()) {
        r.source = r.group->algebra();
      } else if (s.algebra_spec.is_string()) {
        const std::string a = s.algebra_spec.get<std::string>();
        if (a == "m2")
          r.source = builtin_m2();
        else if (a == "group")
          r.source = r.group->algebra();
        else
          fail(Errc::parse_error, "algebra: unknown builtin '" + a + "'");
      } else {
        r.source = io::algebra_from_json(s.algebra_spec);
      }
      r.action = trivial_action(r.group, r.source);
    } else if (aparts[0] == "file") {
      const io::json doc = io::read_json_file(join_path(base_dir, s.action_spec.substr(5)));
      io::check_fields(doc, {"name", "group", "algebra", "alpha"}, "action");
      if (doc.at("group").is_string())
        r.group = resolve_group(doc["group"].get<std::string>(), base_dir);
      else
        r.group = io::quantum_group_from_json(doc["group"]);
      r.source = io::algebra_from_json(doc.at("algebra"));
      r.action = Action::validate(r.source, r.group,
                                  alpha_from_triples(doc.at("alpha"), r.source->dim(),
                                                     r.group->algebra()->dim()));
    } else {
      fail(Errc::parse_error, "action spec: translation, trivial, permutation:<path> or file:<path>");
    }

    // omega
    if (s.omega_spec.is_string()) {
      const std::string o = s.omega_spec.get<std::string>();
      if (o == "haar-induced") {
        r.omega = aparts[0] == "translation" ? r.group->haar() : trace_state(r.source);
      } else if (o == "uniform") {
        r.omega = trace_state(r.source);
      } else {
        fail(Errc::parse_error, "omega: haar-induced, uniform or {\"values\": [...]}");
      }
    } else {
      io::check_fields(s.omega_spec, {"values"}, "omega");
      CVec vals;
      for (const io::json& v : s.omega_spec.at("values"))
        vals.push_back(io::complex_from_json(v, "omega value"));
      if (int(vals.size()) != r.source->dim()) fail(Errc::parse_error, "omega: value count mismatch");
      r.omega = Functional{r.source, std::move(vals)};
    }
  }
  if (s.omega_spec.is_string() && aparts[0] == "permutation") {
    // handled above: haar-induced/uniform mean the (invariant) measure
    const std::string o = s.omega_spec.get<std::string>();
    if (o != "haar-induced" && o != "uniform")
      fail(Errc::parse_error, "omega: haar-induced, uniform or {\"values\": [...]}");
  }

  r.thetas = state_spanning_family(r.group->algebra());

  if (s.net.kind == "constant_haar") {
    r.net = constant_haar_net(s.net.n_max, *r.group);
  } else {
    if (s.net.generator.is_null()) fail(Errc::parse_error, "net: cesaro needs a generator");
    const Functional gen = resolve_state(r, s.net.generator, "net generator");
    r.net = cesaro_net(gen, s.net.n_max, *r.group);
  }
  return r;
}
}  // namespace

ResolvedScenario resolve_scenario(const Scenario& s, const std::filesystem::path& base_dir) {
  try {
    return resolve_scenario_impl(s, base_dir);
  } catch (const Error&) {
    throw;
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::parse_error, std::string("scenario: ") + e.what());
  }
}

ResolvedScenario load_and_resolve(const std::filesystem::path& scenario_file) {
  const io::json j = io::read_json_file(scenario_file);
  return resolve_scenario(parse_scenario(j), scenario_file.parent_path());
}

Functional resolve_state(const ResolvedScenario& r, const io::json& spec, const std::string& what) {
  const auto& alg = r.group->algebra();
  if (spec.is_string()) {
    const std::string g = spec.get<std::string>();
    if (g == "haar") return r.group->haar();
    if (g == "uniform") return trace_state(alg);
    const auto parts = split_spec(g);
    if (parts[0] == "delta" || parts[0] == "lazy") {
      if (!r.function_algebra_group)
        fail(Errc::parse_error, what + ": '" + parts[0] + "' generators need a function_algebra group");
      if (parts.size() < 2) fail(Errc::parse_error, what + ": " + parts[0] + ":<element>");
      const int g0 = parse_int(parts[1], 0, what);
      if (g0 >= alg->dim()) fail(Errc::parse_error, what + ": element index out of range");
      CVec v(alg->dim(), 0.0);
      if (parts[0] == "delta") {
        v[g0] = 1.0;
      } else {
        v[0] = 0.5;
        v[g0] += 0.5;
      }
      return Functional{alg, std::move(v)};
    }
    fail(Errc::parse_error, what + ": unknown state spec '" + g + "'");
  }
  io::check_fields(spec, {"values"}, what);
  CVec vals;
  for (const io::json& v : spec.at("values")) vals.push_back(io::complex_from_json(v, what));
  if (int(vals.size()) != alg->dim()) fail(Errc::parse_error, what + ": value count mismatch");
  return Functional{alg, std::move(vals)};
}

ValidationReport run_validation(const ResolvedScenario& r) {
  ValidationReport v;
  v.scenario = r.spec.name;
  v.tolerance = r.spec.tol.validation;
  v.coassociativity = r.group->coassociativity_defect();
  v.group_homomorphism = r.group->homomorphism_defect();
  v.action_homomorphism = r.action->homomorphism_defect();
  v.coaction = r.action->coaction_defect();
  v.invariance = invariance_check(r.omega, *r.action, r.thetas);
  v.ok = v.coassociativity <= v.tolerance && v.group_homomorphism <= v.tolerance &&
         v.action_homomorphism <= v.tolerance && v.coaction <= v.tolerance &&
         v.invariance <= v.tolerance;
  return v;
}

io::json validation_to_json(const ValidationReport& v) {
  io::json j;
  j["scenario"] = v.scenario;
  j["coassociativity_defect"] = v.coassociativity;
  j["group_homomorphism_defect"] = v.group_homomorphism;
  j["action_homomorphism_defect"] = v.action_homomorphism;
  j["coaction_defect"] = v.coaction;
  j["invariance_defect"] = v.invariance;
  j["tolerance"] = v.tolerance;
  j["ok"] = v.ok;
  return j;
}

ErgodicReport run_experiment(const ResolvedScenario& r) {
  const GnsSpace g = gns(r.source, r.omega, r.spec.tol.gns_cutoff);
  ExperimentOptions opts;
  opts.validation_tol = r.spec.tol.validation;
  opts.final_tol = r.spec.tol.final_tol;
  opts.seed = r.spec.seed;
  ErgodicReport report = ergodic_average_experiment(*r.net, *r.action, g, r.thetas, opts);
  report.scenario = r.spec.name;
  write_report_files(report, r.spec.report_path, r.spec.csv_path);
  return report;
}

void write_report_files(const ErgodicReport& report, const std::string& report_path,
                        const std::string& csv_path) {
  if (!report_path.empty())
    io::write_text_atomic(report_path, io::report_to_json(report).dump(2) + "\n");
  if (!csv_path.empty()) io::write_text_atomic(csv_path, io::report_csv(report));
}

SpectralReport run_spectrum(const ResolvedScenario& r, const Functional& mu) {
  const GnsSpace g = gns(r.source, r.omega, r.spec.tol.gns_cutoff);
  const TransferOperator k = transfer_operator(mu, *r.action, g, r.spec.tol.validation);
  SpectralReport s;
  s.scenario = r.spec.name;
  s.singular_values = jacobi_svd(k.matrix).singular_values;
  s.eigenvalues = general_eigenvalues(k.matrix);
  s.spectral_radius = s.eigenvalues.empty() ? 0.0 : std::abs(s.eigenvalues.front());
  const CMatrix p = mean_projection(*r.action, g, r.thetas);
  double dist = 0.0;
  for (Complex lambda : s.eigenvalues) {
    if (std::abs(lambda) < s.spectral_radius - 1e-9) continue;
    CMatrix shifted = k.matrix;
    for (int i = 0; i < shifted.rows(); ++i) shifted.at(i, i) -= lambda;
    const CMatrix vecs = null_space(shifted, 1e-8);
    for (int c = 0; c < vecs.cols(); ++c) {
      const CVec v = vecs.col(c);
      dist = std::max(dist, vec_norm(v - matvec(p, v)));
    }
  }
  s.peripheral_distance_to_fixed_space = dist;
  return s;
}

io::json spectral_to_json(const SpectralReport& s) {
  io::json j;
  j["scenario"] = s.scenario;
  j["state"] = s.state;
  j["singular_values"] = s.singular_values;
  io::json eigs = io::json::array();
  for (Complex z : s.eigenvalues) eigs.push_back(io::complex_to_json(z));
  j["eigenvalues"] = std::move(eigs);
  j["spectral_radius"] = s.spectral_radius;
  j["peripheral_distance_to_fixed_space"] = s.peripheral_distance_to_fixed_space;
  return j;
}

namespace {
ClassicalReport run_classical_impl(const io::json& config, const std::filesystem::path& base_dir) {
  io::check_fields(config, {"name", "system", "n_max", "output"}, "classical config");
  ClassicalReport rep;
  rep.name = config.at("name").get<std::string>();
  int n_max = 100;
  if (config.contains("n_max")) n_max = config["n_max"].get<int>();
  if (n_max < 1) fail(Errc::parse_error, "classical: n_max must be positive");

  std::optional<ClassicalSystem> sys;
  const io::json& sspec = config.at("system");
  if (sspec.is_string()) {
    const auto parts = split_spec(sspec.get<std::string>());
    if (parts[0] == "cyclic_shift") {
      const int d = parse_count(parts.at(1), "cyclic_shift");
      CMatrix u(d, d);
      for (int j = 0; j < d; ++j) u.at((j + 1) % d, j) = 1.0;
      sys = ClassicalSystem::integers(std::move(u));
    } else if (parts[0] == "scalar") {
      CMatrix u(1, 1);
      u.at(0, 0) = std::stod(parts.at(1));
      sys = ClassicalSystem::integers(std::move(u));
    } else if (parts[0] == "regular") {
      std::string rest = sspec.get<std::string>().substr(std::string("regular:").size());
      const auto gp = split_spec("x:" + rest);  // reuse table resolution below
      const CayleyTable t = resolve_table(gp, 1, base_dir);
      std::vector<CMatrix> reps;
      for (int g = 0; g < t.order; ++g) {
        CMatrix l(t.order, t.order);
        for (int h = 0; h < t.order; ++h) l.at(t.mul(g, h), h) = 1.0;
        reps.push_back(std::move(l));
      }
      sys = ClassicalSystem::finite_group(t, std::move(reps));
    } else {
      fail(Errc::parse_error, "classical system: cyclic_shift:<d>, scalar:<x>, regular:<group> or {matrix}");
    }
  } else {
    io::check_fields(sspec, {"matrix"}, "classical system");
    CMatrix u(int(sspec.at("matrix").size()), int(sspec.at("matrix").size()));
    const io::json& rows = sspec["matrix"];
    for (int i = 0; i < u.rows(); ++i)
      for (int j = 0; j < u.cols(); ++j) u.at(i, j) = io::complex_from_json(rows[i][j], "matrix entry");
    sys = ClassicalSystem::integers(std::move(u));
  }

  rep.dim = sys->space_dim();
  rep.finite = sys->kind == ClassicalSystem::Kind::finite_group;
  const CMatrix p = classical_fixed_projection(*sys);
  const int last = rep.finite ? int(sys->operators.size()) : n_max;
  for (int n = 1; n <= last; ++n) {
    const double dev = max_abs_diff(folner_average(*sys, n), p);
    rep.deviations.emplace_back(n, dev);
  }
  rep.final_deviation = rep.deviations.back().second;
  if (rep.finite) rep.deviation_at_group_order = rep.deviations.back().second;

  if (config.contains("output")) {
    const io::json& o = config["output"];
    io::check_fields(o, {"report", "csv"}, "output");
    if (o.contains("report"))
      io::write_text_atomic(o["report"].get<std::string>(), classical_to_json(rep).dump(2) + "\n");
    if (o.contains("csv")) io::write_text_atomic(o["csv"].get<std::string>(), classical_csv(rep));
  }
  return rep;
}
}  // namespace

ClassicalReport run_classical(const io::json& config, const std::filesystem::path& base_dir) {
  try {
    return run_classical_impl(config, base_dir);
  } catch (const Error&) {
    throw;
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::parse_error, std::string("classical config: ") + e.what());
  }
}

io::json classical_to_json(const ClassicalReport& c) {
  io::json j;
  j["name"] = c.name;
  j["dim"] = c.dim;
  j["finite_group"] = c.finite;
  io::json rows = io::json::array();
  for (const auto& [n, dev] : c.deviations) {
    io::json e;
    e["n"] = n;
    e["deviation"] = dev;
    rows.push_back(std::move(e));
  }
  j["deviations"] = std::move(rows);
  j["final_deviation"] = c.final_deviation;
  if (c.deviation_at_group_order)
    j["deviation_at_group_order"] = *c.deviation_at_group_order;
  return j;
}

std::string classical_csv(const ClassicalReport& c) {
  std::string out = "n,deviation\n";
  char buf[80];
  for (const auto& [n, dev] : c.deviations) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g\n", n, dev);
    out += buf;
  }
  return out;
}

}  // namespace qel
