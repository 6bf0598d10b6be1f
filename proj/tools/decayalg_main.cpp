// decayalg: batch runner for the inverse-closedness, Wiener and kernel experiments.
//
//   decayalg gen           --config cfg.json [--seed S] [--trials T] --out DIR
//   decayalg invert        --config cfg.json [--format csv|json] --out DIR
//   decayalg wiener        --config cfg.json --out DIR
//   decayalg kernel        --config cfg.json --out DIR
//   decayalg verify-report DIR/report.json
//
// Exit codes: 0 ok, 2 config error, 3 every trial failed numerically,
// 4 report verification failed.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "decayalg/error.hpp"
#include "decayalg/experiment.hpp"
#include "decayalg/serialize.hpp"

namespace fs = std::filesystem;
using namespace decayalg;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitVerify = 4;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::string out;
  std::string format = "csv";
  std::string report;
};

json read_json_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open " + path);
  try {
    return json::parse(is);
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

ExperimentConfig load_config(const Options& o) {
  ExperimentConfig cfg = o.config.empty() ? ExperimentConfig{} : config_from_json(read_json_file(o.config));
  if (o.seed) cfg.seed = *o.seed;
  if (o.trials) cfg.trials = *o.trials;
  if (!o.out.empty()) cfg.output_dir = o.out;
  cfg.validate();
  return cfg;
}

void write_json(const fs::path& path, const json& j) {
  fs::create_directories(path.parent_path());
  std::ofstream os(path);
  os << j.dump(2) << "\n";
}

std::string numbered(const char* prefix, int i, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s%03d%s", prefix, i, ext);
  return buf;
}

int cmd_gen(const Options& o) {
  const ExperimentConfig cfg = load_config(o);
  const fs::path out = cfg.output_dir;
  write_json(out / "config.json", to_json(cfg));
  for (int t = 0; t < cfg.trials; ++t) write_json(out / numbered("operator_trial_", t, ".json"), to_json(generate_operator(cfg, t)));
  std::cout << "wrote " << cfg.trials << " operator(s) to " << out.string() << "\n";
  return kExitOk;
}

int cmd_invert(const Options& o) {
  const ExperimentConfig cfg = load_config(o);
  const ExperimentReport rep = run_inverse_closedness(cfg);
  write_report(rep, cfg.output_dir, o.format == "csv");
  std::cout << "trials " << rep.records.size() << ", failed " << rep.failed_trials << ", max residual "
            << format_double(rep.max_residual) << ", median slope "
            << (rep.median_slope ? format_double(*rep.median_slope) : std::string("n/a")) << "\n";
  return rep.failed_trials == static_cast<int>(rep.records.size()) ? kExitNumerical : kExitOk;
}

int cmd_wiener(const Options& o) {
  const ExperimentConfig cfg = load_config(o);
  const WienerReport rep = run_wiener(cfg);
  write_wiener_report(rep, cfg.output_dir, o.format == "csv");
  if (rep.status != "ok") {
    std::cout << "status " << rep.status << ", min |symbol| " << format_double(rep.min_modulus) << "\n";
    return kExitNumerical;
  }
  std::cout << "residual " << format_double(rep.residual) << ", min |symbol| " << format_double(rep.min_modulus);
  if (rep.closed_form_error) std::cout << ", closed-form error " << format_double(*rep.closed_form_error);
  std::cout << "\n";
  return kExitOk;
}

int cmd_kernel(const Options& o) {
  const ExperimentConfig cfg = load_config(o);
  const KernelReport rep = run_kernel(cfg);
  write_json(fs::path(cfg.output_dir) / "kernel_report.json", to_json(rep));
  std::cout << "max relative error " << format_double(rep.max_relative_error) << "\n";
  return kExitOk;
}

int cmd_verify(const Options& o) {
  std::string path = o.report;
  if (path.empty()) path = (fs::path(o.out.empty() ? "." : o.out) / "report.json").string();
  const VerifyResult v = verify_report(read_json_file(path));
  for (const auto& p : v.problems) std::cerr << path << ": " << p << "\n";
  if (!v.ok) return kExitVerify;
  std::cout << path << ": ok\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted decay algebras: inversion and envelope experiments"};
  app.require_subcommand(1);
  Options o;

  const auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "experiment config (JSON)")->check(CLI::ExistingFile);
    sub->add_option("--seed", o.seed, "override the config seed");
    sub->add_option("--trials", o.trials, "override the trial count");
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--format", o.format, "csv writes per-trial CSVs next to the JSON report")
        ->check(CLI::IsMember({"csv", "json"}));
  };

  auto* gen = app.add_subcommand("gen", "generate random operators");
  auto* invert = app.add_subcommand("invert", "inverse-closedness experiment");
  auto* wiener = app.add_subcommand("wiener", "scalar symbol inversion");
  auto* kernel = app.add_subcommand("kernel", "kernel assembly vs blockwise application");
  auto* verify = app.add_subcommand("verify-report", "recheck a report's aggregates and envelopes");
  for (auto* sub : {gen, invert, wiener, kernel}) common(sub);
  verify->add_option("report", o.report, "report.json to check");
  verify->add_option("--out", o.out, "directory holding report.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*gen) return cmd_gen(o);
    if (*invert) return cmd_invert(o);
    if (*wiener) return cmd_wiener(o);
    if (*kernel) return cmd_kernel(o);
    return cmd_verify(o);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    if (e.kind() == ErrorKind::InvalidArgument || e.kind() == ErrorKind::Format) return kExitConfig;
    return kExitNumerical;
  }
}
