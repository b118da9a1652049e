// Scenario-driven front end: validate structures, compute invariant
// states, run averaging experiments, report transfer-operator spectra and
// classical averages.  Exit codes: 0 ok, 2 validation failure,
// 3 convergence-verdict failure, 4 I/O or parse failure.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "qel/error.hpp"
#include "qel/io.hpp"
#include "qel/scenario.hpp"

namespace {

using qel::Errc;

int exit_code_for(const qel::Error& e) {
  switch (e.code()) {
    case Errc::parse_error:
    case Errc::io_error:
      return 4;
    case Errc::inconsistent_verdict:
      return 3;
    case Errc::internal:
      return 1;
    default:
      return 2;
  }
}

struct CommonArgs {
  std::string scenario_file;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::string out;
};

qel::ResolvedScenario load(const CommonArgs& args) {
  const std::filesystem::path file(args.scenario_file);
  qel::Scenario s = qel::parse_scenario(qel::io::read_json_file(file));
  if (args.tol) s.tol.validation = *args.tol;
  if (args.seed) s.seed = *args.seed;
  if (!args.out.empty()) {
    s.report_path = args.out;
    s.csv_path = std::filesystem::path(args.out).replace_extension(".csv").string();
  }
  return qel::resolve_scenario(s, file.parent_path());
}

int cmd_validate(const CommonArgs& args) {
  const auto r = load(args);
  const auto v = qel::run_validation(r);
  std::cout << qel::validation_to_json(v).dump(2) << "\n";
  return v.ok ? 0 : 2;
}

int cmd_haar(const CommonArgs& args) {
  const auto r = load(args);
  qel::io::json j;
  j["scenario"] = r.spec.name;
  j["group"] = r.group->name();
  qel::io::json vals = qel::io::json::array();
  for (qel::Complex z : r.group->haar().values) vals.push_back(qel::io::complex_to_json(z));
  j["haar"] = std::move(vals);
  const std::string text = j.dump(2) + "\n";
  if (!args.out.empty())
    qel::io::write_text_atomic(args.out, text);
  else
    std::cout << text;
  return 0;
}

int cmd_run(const CommonArgs& args) {
  const auto r = load(args);
  const auto report = qel::run_experiment(r);
  std::cout << "scenario " << report.scenario << ": dim H = " << report.dim_H
            << ", dim V = " << report.dim_V << ", verdict " << report.verdict
            << ", final dev " << report.final_dev << (report.converged ? " (converged)" : "")
            << "\n";
  if (!r.spec.report_path.empty()) std::cout << "report: " << r.spec.report_path << "\n";
  if (!r.spec.csv_path.empty()) std::cout << "csv: " << r.spec.csv_path << "\n";
  return 0;
}

int cmd_spectrum(const CommonArgs& args, const std::string& state_spec) {
  const auto r = load(args);
  qel::io::json sj;
  try {
    sj = qel::io::json::parse(state_spec);
  } catch (const nlohmann::json::exception&) {
    sj = state_spec;  // plain string spec
  }
  const qel::Functional mu = qel::resolve_state(r, sj, "state");
  auto rep = qel::run_spectrum(r, mu);
  rep.state = sj.is_string() ? sj.get<std::string>() : sj.dump();
  const std::string text = qel::spectral_to_json(rep).dump(2) + "\n";
  if (!args.out.empty())
    qel::io::write_text_atomic(args.out, text);
  else
    std::cout << text;
  return 0;
}

int cmd_classical(const CommonArgs& args) {
  const std::filesystem::path file(args.scenario_file);
  auto config = qel::io::read_json_file(file);
  if (!args.out.empty()) {
    config["output"]["report"] = args.out;
    config["output"]["csv"] =
        std::filesystem::path(args.out).replace_extension(".csv").string();
  }
  const auto rep = qel::run_classical(config, file.parent_path());
  std::cout << "classical " << rep.name << ": dim " << rep.dim << ", final deviation "
            << rep.final_deviation << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-dimensional averaging laboratory for quantum group actions"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string state_spec;

  auto add_common = [&](CLI::App* cmd, bool needs_state = false) {
    cmd->add_option("scenario", args.scenario_file, "scenario JSON file")->required();
    cmd->add_option("--tol", args.tol, "override the validation tolerance");
    cmd->add_option("--seed", args.seed, "seed recorded in reports");
    cmd->add_option("--out", args.out, "override the report output path");
    if (needs_state) cmd->add_option("--state", state_spec, "state spec for the operator")->required();
  };

  auto* validate = app.add_subcommand("validate", "structural and invariance checks");
  add_common(validate);
  auto* haar = app.add_subcommand("haar", "print or write the invariant state");
  add_common(haar);
  auto* run = app.add_subcommand("run", "full averaging experiment with report output");
  add_common(run);
  auto* spectrum = app.add_subcommand("spectrum", "spectral report of one transfer operator");
  add_common(spectrum, true);
  auto* classical = app.add_subcommand("classical", "classical averaging runner");
  add_common(classical);

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) return cmd_validate(args);
    if (haar->parsed()) return cmd_haar(args);
    if (run->parsed()) return cmd_run(args);
    if (spectrum->parsed()) return cmd_spectrum(args, state_spec);
    if (classical->parsed()) return cmd_classical(args);
  } catch (const qel::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
