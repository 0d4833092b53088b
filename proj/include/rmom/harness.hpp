#pragma once

// Experiment driver behind the CLI: configuration, problem setup with an
// independent optimum witness, execution, certification and output files.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rmom/certifier.hpp"
#include "rmom/instance_io.hpp"
#include "rmom/optimizers.hpp"
#include "rmom/problems.hpp"

namespace rmom {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitCertification = 3,
  kExitNumerical = 4,
};

enum class ProblemKind { kRayleigh, kKarcher, kScaling };
enum class OptimizerKind { kRgd, kRagdsdr, kRagdsdrRestart, kLinearCoupling, kRagd, kGurvits };

std::string to_string(ProblemKind p);
std::string to_string(OptimizerKind o);
ProblemKind parse_problem(const std::string& s);
OptimizerKind parse_optimizer(const std::string& s);

struct ExperimentConfig {
  ProblemKind problem = ProblemKind::kRayleigh;
  OptimizerKind optimizer = OptimizerKind::kRagdsdr;
  std::optional<int> d;
  std::optional<int> n;
  std::optional<int> m;
  std::optional<double> cond;
  std::uint64_t seed = 1;
  long iters = 300;
  int gs_iters = 10;
  BetaRule beta_rule = BetaRule::kSearch;
  std::optional<double> lipschitz;  // key "L"
  std::optional<double> mu;
  std::optional<double> diameter;   // key "D"
  std::optional<double> zeta;       // overrides the curvature-derived value in the step rule
  double alpha = 1.0;
  double c = 2.0;
  double shift = 0.0;
  double grad_tol = 1e-10;
  double target = 0.0;
  std::optional<double> threshold;
  bool certify = false;
  bool observed_diameter = false;  // key "observed-D"
  bool timing = true;              // key "no-timing" inverts it
  std::string out = "run";
  std::string instance;            // optional instance file

  int dim() const;
  int count() const;  // n for rayleigh, m otherwise
  double cond_value() const;
  double threshold_value() const;

  /// Throws ConfigError on invalid values or incompatible problem/optimizer.
  void validate() const;

  /// Resolved settings keyed like the TOML file / CLI flags.
  std::string echo_json() const;
};

/// Every accepted key, identical for TOML files, manifests and CLI flags.
const std::vector<std::string>& config_keys();

/// Sets one key from its textual value. Unknown keys throw ConfigError.
void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value);

/// Reads a TOML file, or a run manifest (.json) whose "config" echo is reused.
ExperimentConfig parse_config_file(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text, bool json);

struct ProblemSetup {
  std::unique_ptr<Objective> objective;
  std::optional<RayleighInstance> rayleigh;
  std::optional<KarcherInstance> karcher;
  std::optional<ScalingInstance> scaling;
  Point x0;
  OptimumWitness witness;
  double lipschitz = 1.0;
  std::optional<double> mu;
  double diameter = 1.0;
  InstanceRecord record;
  std::string instance_sha256;
};

InstanceRecord generate_instance(const ExperimentConfig& cfg);
ProblemSetup build_problem(const ExperimentConfig& cfg);

OptConfig opt_config_for(const ExperimentConfig& cfg, const ProblemSetup& setup);

struct RunOutput {
  Trace trace;
  std::vector<double> metric;  // suboptimality (ds_distance for scaling) per iterate
  std::optional<Certificate> certificate;
  std::vector<SegmentCheck> segments;
  OptConfig opt;
  double wall_seconds = 0.0;
};

RunOutput execute(const ExperimentConfig& cfg, const ProblemSetup& setup);

/// Gurvits alternating scaling; rows carry the log-capacity at the implied X.
RunOutput run_gurvits(const ScalingInstance& inst, long iters, bool timing);

/// First index whose metric is <= threshold, or -1.
long iterations_to(const std::vector<double>& metric, double threshold);

std::string manifest_json(const ExperimentConfig& cfg, const ProblemSetup& setup,
                          const RunOutput& run);

/// Writes <out>.csv, <out>.manifest.json, and when applicable
/// <out>.restarts.json and <out>.certificate.json. Returns the exit code.
int write_run(const ExperimentConfig& cfg, const ProblemSetup& setup, const RunOutput& run);

struct CompareResult {
  std::string csv;  // optimizer,k,suboptimality,wall_ns
  std::vector<std::pair<std::string, long>> iterations_to_threshold;
  double threshold = 0.0;
};

/// Runs configs that differ only in the optimizer on one shared instance.
CompareResult compare(const std::vector<ExperimentConfig>& cfgs);

/// "zeta=...\ndelta=...\ndiscrepancy=...\nhorizon=...\n"
std::string curvature_block(const CurvatureConstants& c);

}  // namespace rmom
