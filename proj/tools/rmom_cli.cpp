// rmom gen|run|compare|certify

#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rmom/errors.hpp"
#include "rmom/harness.hpp"
#include "rmom/trace_io.hpp"

namespace {

using rmom::ExperimentConfig;

struct Flags {
  std::string config;
  std::map<std::string, std::string> values;
  std::vector<std::string> optimizers;
  bool certify = false;
  bool observed_d = false;
  bool no_timing = false;
};

const std::vector<std::pair<std::string, std::string>> kValueFlags = {
    {"problem", "rayleigh | karcher | scaling"},
    {"d", "dimension"},
    {"n", "columns of B (rayleigh)"},
    {"m", "number of matrices (karcher, scaling)"},
    {"cond", "condition number bound (karcher)"},
    {"seed", "instance and start seed"},
    {"iters", "iteration budget"},
    {"gs-iters", "golden-section iterations per step"},
    {"beta-rule", "search | nesterov"},
    {"L", "smoothness constant"},
    {"mu", "strong convexity modulus (ragd)"},
    {"D", "diameter bound"},
    {"zeta", "override the curvature-derived zeta"},
    {"alpha", "weak quasi-convexity constant (restart)"},
    {"c", "restart contraction constant"},
    {"shift", "add shift * I to the rayleigh matrix"},
    {"grad-tol", "stop once the gradient norm is below this"},
    {"target", "restart variant: stop once f - f* <= target"},
    {"threshold", "suboptimality threshold for iteration counts"},
    {"out", "output path prefix"},
    {"instance", "instance file written by gen"},
};

void add_common(CLI::App* app, Flags& f, bool multi_optimizer) {
  app->add_option("--config", f.config, "TOML config or run manifest");
  for (const auto& [key, help] : kValueFlags) {
    app->add_option_function<std::string>(
        "--" + key, [&f, key = key](const std::string& v) { f.values[key] = v; }, help);
  }
  if (multi_optimizer) {
    app->add_option("--optimizer", f.optimizers, "optimizers to compare")->delimiter(',');
  } else {
    app->add_option_function<std::string>(
        "--optimizer", [&f](const std::string& v) { f.values["optimizer"] = v; },
        "rgd | ragdsdr | ragdsdr-restart | linear-coupling | ragd | gurvits");
  }
  app->add_flag("--certify", f.certify, "check the convergence certificate");
  app->add_flag("--observed-D", f.observed_d, "certify with the observed diameter");
  app->add_flag("--no-timing", f.no_timing, "zero the wall_ns column");
}

ExperimentConfig resolve(const Flags& f) {
  ExperimentConfig cfg;
  if (!f.config.empty()) cfg = rmom::parse_config_file(f.config);
  // problem first: the count flags are checked against it
  if (auto it = f.values.find("problem"); it != f.values.end()) {
    rmom::apply_setting(cfg, it->first, it->second);
  }
  for (const auto& [key, value] : f.values) {
    if (key != "problem") rmom::apply_setting(cfg, key, value);
  }
  if (f.certify) cfg.certify = true;
  if (f.observed_d) cfg.observed_diameter = true;
  if (f.no_timing) cfg.timing = false;
  cfg.validate();
  return cfg;
}

int cmd_gen(const Flags& f) {
  const ExperimentConfig cfg = resolve(f);
  const rmom::InstanceRecord rec = rmom::generate_instance(cfg);
  const std::string text = rmom::instance_to_json(rec);
  std::string path = cfg.out;
  if (std::filesystem::path(path).extension() != ".json") path += ".instance.json";
  rmom::atomic_write(path, text);
  std::cout << path << " sha256=" << rmom::sha256_hex(text) << "\n";
  return rmom::kExitOk;
}

void print_summary(const ExperimentConfig& cfg, const rmom::RunOutput& run) {
  std::cout << rmom::to_string(cfg.optimizer) << ": " << run.trace.rows.size()
            << " iterations, final f = " << rmom::format_double(run.trace.final_f);
  if (!run.metric.empty()) {
    std::cout << ", final " << (cfg.problem == rmom::ProblemKind::kScaling ? "ds" : "gap")
              << " = " << rmom::format_double(run.metric.back());
  }
  std::cout << ", iterations to " << rmom::format_double(cfg.threshold_value()) << " = "
            << rmom::iterations_to(run.metric, cfg.threshold_value());
  if (!run.trace.restarts.empty()) std::cout << ", restarts = " << run.trace.restarts.size();
  std::cout << "\n";
  for (const rmom::SegmentCheck& s : run.segments) {
    if (!s.contracted || !s.within_bound) {
      std::cout << "restart segment at row " << s.start_row << ": " << s.steps
                << " steps, bound " << s.bound << (s.contracted ? "" : ", not contracted")
                << "\n";
    }
  }
}

int cmd_run(const Flags& f) {
  const ExperimentConfig cfg = resolve(f);
  const rmom::ProblemSetup setup = rmom::build_problem(cfg);
  const rmom::RunOutput run = rmom::execute(cfg, setup);
  const int code = rmom::write_run(cfg, setup, run);
  print_summary(cfg, run);
  if (run.certificate) {
    std::cout << "certificate: " << (run.certificate->verdict() ? "pass" : "fail") << "\n";
  }
  return code;
}

int cmd_certify(const Flags& f) {
  ExperimentConfig cfg = resolve(f);
  cfg.certify = true;
  cfg.validate();
  const rmom::ProblemSetup setup = rmom::build_problem(cfg);
  const rmom::RunOutput run = rmom::execute(cfg, setup);
  const int code = rmom::write_run(cfg, setup, run);
  std::cout << rmom::curvature_block(run.certificate->curvature);
  std::cout << run.certificate->to_json();
  return code;
}

int cmd_compare(const Flags& f) {
  const ExperimentConfig base = resolve(f);
  std::vector<ExperimentConfig> cfgs;
  if (f.optimizers.empty()) {
    cfgs.push_back(base);
  } else {
    for (const std::string& name : f.optimizers) {
      ExperimentConfig c = base;
      c.optimizer = rmom::parse_optimizer(name);
      c.validate();
      cfgs.push_back(c);
    }
  }
  const rmom::CompareResult res = rmom::compare(cfgs);
  const std::string path = base.out + ".compare.csv";
  rmom::atomic_write(path, res.csv);
  std::cout << "wrote " << path << "\n";
  std::cout << "iterations to " << rmom::format_double(res.threshold) << ":\n";
  for (const auto& [name, k] : res.iterations_to_threshold) {
    std::cout << "  " << name << " " << k << "\n";
  }
  return rmom::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Momentum methods on Riemannian manifolds: experiments and certificates"};
  app.require_subcommand(1);

  Flags gen_f, run_f, cmp_f, cert_f;
  CLI::App* gen = app.add_subcommand("gen", "write a problem instance file");
  CLI::App* run = app.add_subcommand("run", "run one optimizer, write trace and manifest");
  CLI::App* cmp = app.add_subcommand("compare", "run several optimizers on one instance");
  CLI::App* cert = app.add_subcommand("certify", "run with certification and print the report");
  add_common(gen, gen_f, false);
  add_common(run, run_f, false);
  add_common(cmp, cmp_f, true);
  add_common(cert, cert_f, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? rmom::kExitOk : rmom::kExitConfig;
  }

  try {
    if (gen->parsed()) return cmd_gen(gen_f);
    if (run->parsed()) return cmd_run(run_f);
    if (cmp->parsed()) return cmd_compare(cmp_f);
    if (cert->parsed()) return cmd_certify(cert_f);
  } catch (const rmom::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return rmom::kExitConfig;
  } catch (const rmom::NumericalAbort& e) {
    std::cerr << "numerical abort at " << e.what() << "\n";
    return rmom::kExitNumerical;
  } catch (const rmom::DomainError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return rmom::kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return rmom::kExitConfig;
}
