// qcft: experiment runner.
//   qcft run <config>       run an experiment, write <out>/summary.json and CSVs
//   qcft validate <config>  list every violated rule
//   qcft constants          print the SI constants report
// Exit codes: 0 all checks pass, 1 a physics check failed, 2 configuration error.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qcft/experiments.hpp"

namespace fs = std::filesystem;
namespace ex = qcft::experiments;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitPhysicsFail = 1;
constexpr int kExitConfigError = 2;

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json summary_json(const ex::ResultRecord& r) {
  json j;
  j["experiment"] = r.experiment;
  j["version"] = ex::kVersion;
  j["seed"] = r.seed;
  json inputs = json::object();
  for (const auto& [k, v] : r.inputs) inputs[k] = v;
  j["inputs"] = inputs;
  json metrics = json::object();
  for (const auto& [k, v] : r.metrics) metrics[k] = number(v);
  j["metrics"] = metrics;
  json checks = json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name}, {"pass", c.pass}, {"value", number(c.value)}, {"tolerance", number(c.tolerance)},
                      {"rule", c.rule}});
  j["checks"] = checks;
  json files = json::array();
  for (const auto& t : r.tables) files.push_back(t.name + ".csv");
  for (const auto& [name, content] : r.text_files) files.push_back(name);
  j["files"] = files;
  j["pass"] = r.pass();
  return j;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

void write_outputs(const ex::ResultRecord& r, const fs::path& dir) {
  fs::create_directories(dir);
  write_file(dir / "summary.json", summary_json(r).dump(2) + "\n");
  for (const auto& t : r.tables) write_file(dir / (t.name + ".csv"), ex::write_csv(t));
  for (const auto& [name, content] : r.text_files) write_file(dir / name, content);
}

void print_checks(const ex::ResultRecord& r) {
  for (const auto& c : r.checks)
    std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << "  value=" << ex::fmt(c.value)
              << " tolerance=" << ex::fmt(c.tolerance) << "  (" << c.rule << ")\n";
}

struct Overrides {
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
};

ex::RawConfig apply_overrides(ex::RawConfig raw, const Overrides& o) {
  if (o.out) raw["output_dir"] = *o.out;
  if (o.seed) raw["seed"] = std::to_string(*o.seed);
  if (o.threads) raw["threads"] = std::to_string(*o.threads);
  return raw;
}

int cmd_run(const std::string& path, const Overrides& o) {
  const ex::ExperimentConfig config = ex::load_config(apply_overrides(ex::parse_config_file(path), o));
  const ex::ResultRecord record = ex::run(config);
  write_outputs(record, config.output_dir);
  print_checks(record);
  std::cout << (record.pass() ? "PASS " : "FAIL ") << record.experiment << " -> " << config.output_dir << "\n";
  return record.pass() ? kExitPass : kExitPhysicsFail;
}

int cmd_validate(const std::string& path, const Overrides& o) {
  const auto diags = ex::validate(apply_overrides(ex::parse_config_file(path), o));
  for (const auto& d : diags) std::cout << d << "\n";
  if (diags.empty()) std::cout << "ok\n";
  return diags.empty() ? kExitPass : kExitConfigError;
}

int cmd_constants(const Overrides& o) {
  ex::RawConfig raw{{"experiment", "constants"}};
  const ex::ExperimentConfig config = ex::load_config(apply_overrides(raw, o));
  const ex::ResultRecord record = ex::run(config);
  std::cout << ex::constants_text(record);
  if (o.out) write_outputs(record, *o.out);
  return record.pass() ? kExitPass : kExitPhysicsFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qcft: quantum-computational field theory laboratory"};
  app.require_subcommand(1);
  Overrides o;
  std::string config_path;

  auto add_flags = [&](CLI::App* sub) {
    sub->add_option("--out", o.out, "output directory (overrides output_dir)");
    sub->add_option("--seed", o.seed, "seed for randomized sampling (overrides seed)");
    sub->add_option("--threads", o.threads, "worker threads for sweep points")->check(CLI::PositiveNumber);
  };
  auto* run = app.add_subcommand("run", "run the experiment described by a config file");
  run->add_option("config", config_path, "config file")->required();
  add_flags(run);
  auto* validate = app.add_subcommand("validate", "list violated rules of a config file");
  validate->add_option("config", config_path, "config file")->required();
  add_flags(validate);
  auto* constants = app.add_subcommand("constants", "print the SI constants report");
  add_flags(constants);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitConfigError;
  }

  try {
    if (run->parsed()) return cmd_run(config_path, o);
    if (validate->parsed()) return cmd_validate(config_path, o);
    return cmd_constants(o);
  } catch (const ex::ConfigError& e) {
    for (const auto& d : e.diagnostics()) std::cerr << "config error: " << d << "\n";
    return kExitConfigError;
  } catch (const qcft::PreconditionError& e) {
    std::cerr << "precondition violated: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
}
