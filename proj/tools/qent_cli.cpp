// Command-line front end over the C interface.
//
// Exit codes: 0 success, 2 invalid configuration, 3 numerical failure
// (truncation, memory cap, solver failure).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "qent/qent.h"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

int exit_code(qent_status status) {
  switch (status) {
    case QENT_OK: return 0;
    case QENT_INVALID_ARGUMENT:
    case QENT_DIMENSION_MISMATCH:
    case QENT_NOT_HERMITIAN:
    case QENT_IO: return kExitConfig;
    default: return kExitNumerical;
  }
}

struct CliError {
  int code;
};

void check(qent_status status) {
  if (status == QENT_OK) return;
  std::cerr << "error: " << qent_status_string(status) << ": " << qent_last_error_message() << "\n";
  throw CliError{exit_code(status)};
}

void config_error(const std::string& message) {
  std::cerr << "error: " << message << "\n";
  throw CliError{kExitConfig};
}

struct Options {
  std::string out;
  std::string cutoff = "";
  std::optional<double> tail_tol;
  std::optional<int> theta_points;
  std::vector<std::string> grids;
  std::string threads = "1";
  std::uint64_t seed = 1;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<int> family;
  std::string alpha_list;
  std::string config;
};

void write_output(const Options& opt, const std::string& text) {
  if (opt.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(opt.out, std::ios::binary);
  if (!f) config_error("cannot write '" + opt.out + "'");
  f << text;
  if (!f) config_error("failed writing '" + opt.out + "'");
}

int parse_threads(const std::string& text) {
  if (text == "auto") return std::max(1u, std::thread::hardware_concurrency());
  try {
    std::size_t pos = 0;
    const int n = std::stoi(text, &pos);
    if (pos == text.size() && n >= 1) return n;
  } catch (const std::exception&) {
  }
  config_error("--threads must be a positive integer or 'auto'");
  return 1;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      config_error("--alpha-list: '" + item + "' is not a number");
    }
  }
  if (out.empty()) config_error("--alpha-list is empty");
  return out;
}

int run_sweep(const std::string& experiment, const Options& opt) {
  qent_sweep_config* cfg = nullptr;
  check(qent_sweep_config_new(experiment.c_str(), &cfg));
  struct Guard {
    qent_sweep_config* c;
    ~Guard() { qent_sweep_config_free(c); }
  } guard{cfg};

  for (const std::string& g : opt.grids) {
    const auto eq = g.find('=');
    if (eq == std::string::npos) config_error("--grid expects name=start:stop:count, got '" + g + "'");
    check(qent_sweep_config_set_grid(cfg, g.substr(0, eq).c_str(), g.substr(eq + 1).c_str()));
  }
  if (!opt.cutoff.empty()) {
    if (opt.cutoff == "auto") {
      check(qent_sweep_config_set_cutoff(cfg, 0));
    } else {
      int n = 0;
      try {
        std::size_t pos = 0;
        n = std::stoi(opt.cutoff, &pos);
        if (pos != opt.cutoff.size()) n = 0;
      } catch (const std::exception&) {
      }
      if (n < 1) config_error("--cutoff must be a positive integer or 'auto'");
      check(qent_sweep_config_set_cutoff(cfg, n));
    }
  }
  if (opt.tail_tol) check(qent_sweep_config_set_tail_tolerance(cfg, *opt.tail_tol));
  if (opt.theta_points) check(qent_sweep_config_set_theta_points(cfg, *opt.theta_points));
  check(qent_sweep_config_set_threads(cfg, parse_threads(opt.threads)));
  if (opt.alpha) check(qent_sweep_config_set_alpha(cfg, *opt.alpha));
  if (opt.beta) check(qent_sweep_config_set_beta(cfg, *opt.beta));
  if (opt.family) check(qent_sweep_config_set_family(cfg, *opt.family));
  if (!opt.alpha_list.empty()) {
    const std::vector<double> list = parse_list(opt.alpha_list);
    check(qent_sweep_config_set_alpha_list(cfg, list.data(), list.size()));
  }

  qent_sweep_result* result = nullptr;
  check(qent_sweep_run(cfg, &result));
  const std::string csv = qent_sweep_result_csv(result);
  const std::string summary = qent_sweep_result_summary(result);
  qent_sweep_result_free(result);

  write_output(opt, csv);
  if (!summary.empty()) (opt.out.empty() ? std::cerr : std::cout) << summary;
  return 0;
}

int run_witness(const Options& opt) {
  if (opt.config.empty()) config_error("witness needs --config <file>");
  char* csv = nullptr;
  check(qent_run_witness_config(opt.config.c_str(), opt.tail_tol.value_or(0.0), &csv));
  const std::string text = csv;
  qent_string_free(csv);
  write_output(opt, text);
  return 0;
}

int run_selftest(const Options& opt) {
  char* report = nullptr;
  int passed = 0;
  check(qent_selftest(opt.seed, &report, &passed));
  const std::string text = report;
  qent_string_free(report);
  write_output(opt, text);
  return passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement criteria on truncated bipartite systems"};
  app.require_subcommand(1);

  Options opt;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", opt.out, "Output path (default: stdout)");
    sub->add_option("--cutoff", opt.cutoff, "Fock cutoff N or 'auto'");
    sub->add_option("--tail-tol", opt.tail_tol, "Maximum discarded probability weight");
    sub->add_option("--theta-points", opt.theta_points, "Quadrature angles scanned for the Kerr witness");
    sub->add_option("--grid", opt.grids, "name=start:stop:count (repeatable)")->take_all();
    sub->add_option("--threads", opt.threads, "Worker threads, or 'auto'");
    sub->add_option("--alpha", opt.alpha, "Coherent amplitude of mode a");
    sub->add_option("--beta", opt.beta, "Coherent amplitude of mode b");
    sub->add_option("--family", opt.family, "Werner family (1 or 2)");
    sub->add_option("--alpha-list", opt.alpha_list, "Comma separated amplitudes for the scaling study");
  };

  const std::vector<std::pair<std::string, std::string>> sweeps{
      {"bell", "Criteria on the two Bell states"},
      {"werner", "Werner-state sweep over p"},
      {"region", "Squeezed-thermal mixture over (p, r)"},
      {"kerr", "Cross-Kerr time sweep (needs --alpha and --beta)"},
      {"scaling", "Detection-time scaling with the coherent amplitude"}};
  std::vector<std::pair<CLI::App*, std::string>> sweep_cmds;
  for (const auto& [name, help] : sweeps) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_common(sub);
    sweep_cmds.emplace_back(sub, name);
  }
  CLI::App* witness = app.add_subcommand("witness", "Evaluate a witness described by a key-value file");
  witness->add_option("--config", opt.config, "Witness description file")->required();
  witness->add_option("--out", opt.out, "Output path (default: stdout)");
  witness->add_option("--tail-tol", opt.tail_tol, "Maximum discarded probability weight");
  CLI::App* selftest = app.add_subcommand("selftest", "Randomised property checks");
  selftest->add_option("--seed", opt.seed, "Random seed");
  selftest->add_option("--out", opt.out, "Output path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    for (const auto& [sub, name] : sweep_cmds)
      if (sub->parsed()) return run_sweep(name, opt);
    if (witness->parsed()) return run_witness(opt);
    if (selftest->parsed()) return run_selftest(opt);
  } catch (const CliError& e) {
    return e.code;
  }
  return kExitConfig;
}
