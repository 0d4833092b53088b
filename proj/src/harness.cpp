#include "rmom/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <limits>
#include <numbers>
#include <sstream>

#include <json.hpp>
#include <toml.hpp>

#include "rmom/errors.hpp"
#include "rmom/rng.hpp"
#include "rmom/trace_io.hpp"

#ifndef RMOM_GIT_DESCRIBE
#define RMOM_GIT_DESCRIBE "unknown"
#endif

namespace rmom {

using ojson = nlohmann::ordered_json;

namespace {

constexpr int kFullScaleDim = 2000;

double parse_double(const std::string& key, const std::string& s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw ConfigError(key + ": expected a finite number, got '" + s + "'");
  }
  return v;
}

long parse_long(const std::string& key, const std::string& s) {
  long v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ConfigError(key + ": expected an integer, got '" + s + "'");
  }
  return v;
}

int parse_int(const std::string& key, const std::string& s) {
  const long v = parse_long(key, s);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    throw ConfigError(key + ": out of range");
  }
  return static_cast<int>(v);
}

std::uint64_t parse_u64(const std::string& key, const std::string& s) {
  std::uint64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ConfigError(key + ": expected a non-negative integer, got '" + s + "'");
  }
  return v;
}

bool parse_bool(const std::string& key, const std::string& s) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw ConfigError(key + ": expected true or false, got '" + s + "'");
}

std::string beta_rule_name(BetaRule r) { return r == BetaRule::kSearch ? "search" : "nesterov"; }

template <class T>
ojson opt_json(const std::optional<T>& v) {
  return v ? ojson(*v) : ojson(nullptr);
}

bool uses_count_n(ProblemKind p) { return p == ProblemKind::kRayleigh; }

std::int64_t now_ns() {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

/// Unit vector e_1 direction of largest |entry| made positive, so the
/// witness does not depend on the eigensolver's sign convention.
Vector canonical_sign(Vector u) {
  Eigen::Index i = 0;
  u.cwiseAbs().maxCoeff(&i);
  if (u(i) < 0.0) u = -u;
  return u;
}

/// Uniform point on the sphere, re-drawn until it lies in the open
/// hemisphere around u1.
Vector rayleigh_start(const Vector& u1, std::uint64_t seed) {
  Rng rng = init_stream(seed);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Vector x(u1.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = standard_normal(rng);
    const double nrm = x.norm();
    if (!(nrm > 0.0)) continue;
    x /= nrm;
    if (x.dot(u1) > 0.0) return x;
  }
  throw DomainError("could not draw a start point in the dominant hemisphere");
}

}  // namespace

std::string to_string(ProblemKind p) {
  switch (p) {
    case ProblemKind::kRayleigh: return "rayleigh";
    case ProblemKind::kKarcher: return "karcher";
    case ProblemKind::kScaling: return "scaling";
  }
  return "?";
}

std::string to_string(OptimizerKind o) {
  switch (o) {
    case OptimizerKind::kRgd: return "rgd";
    case OptimizerKind::kRagdsdr: return "ragdsdr";
    case OptimizerKind::kRagdsdrRestart: return "ragdsdr-restart";
    case OptimizerKind::kLinearCoupling: return "linear-coupling";
    case OptimizerKind::kRagd: return "ragd";
    case OptimizerKind::kGurvits: return "gurvits";
  }
  return "?";
}

ProblemKind parse_problem(const std::string& s) {
  for (ProblemKind p : {ProblemKind::kRayleigh, ProblemKind::kKarcher, ProblemKind::kScaling}) {
    if (to_string(p) == s) return p;
  }
  throw ConfigError("unknown problem '" + s + "' (rayleigh, karcher, scaling)");
}

OptimizerKind parse_optimizer(const std::string& s) {
  for (OptimizerKind o : {OptimizerKind::kRgd, OptimizerKind::kRagdsdr,
                          OptimizerKind::kRagdsdrRestart, OptimizerKind::kLinearCoupling,
                          OptimizerKind::kRagd, OptimizerKind::kGurvits}) {
    if (to_string(o) == s) return o;
  }
  throw ConfigError("unknown optimizer '" + s +
                    "' (rgd, ragdsdr, ragdsdr-restart, linear-coupling, ragd, gurvits)");
}

// -- ExperimentConfig -------------------------------------------------------

int ExperimentConfig::dim() const {
  if (d) return *d;
  switch (problem) {
    case ProblemKind::kRayleigh: return 200;
    case ProblemKind::kKarcher: return 20;
    case ProblemKind::kScaling: return 10;
  }
  return 0;
}

int ExperimentConfig::count() const {
  if (uses_count_n(problem)) return n ? *n : 210;
  if (m) return *m;
  return problem == ProblemKind::kKarcher ? 20 : 3;
}

double ExperimentConfig::cond_value() const { return cond ? *cond : 1e4; }

double ExperimentConfig::threshold_value() const {
  if (threshold) return *threshold;
  switch (problem) {
    case ProblemKind::kRayleigh: return 1e-6;
    case ProblemKind::kKarcher: return 1e-8;
    case ProblemKind::kScaling: return 1e-4;
  }
  return 0.0;
}

void ExperimentConfig::validate() const {
  if (dim() < 1) throw ConfigError("d must be >= 1");
  if (count() < 1) throw ConfigError(std::string(uses_count_n(problem) ? "n" : "m") + " must be >= 1");
  if (problem == ProblemKind::kRayleigh && dim() < 2) throw ConfigError("rayleigh needs d >= 2");
  if (uses_count_n(problem) && m) throw ConfigError("m is not a rayleigh parameter (use n)");
  if (!uses_count_n(problem) && n) throw ConfigError("n is only a rayleigh parameter (use m)");
  if (cond) {
    if (problem != ProblemKind::kKarcher) throw ConfigError("cond is only a karcher parameter");
    if (!(*cond >= 1.0)) throw ConfigError("cond must be >= 1");
  }
  if (iters < 1) throw ConfigError("iters must be >= 1");
  if (gs_iters < 1) throw ConfigError("gs-iters must be >= 1");
  if (lipschitz && !(*lipschitz > 0.0)) throw ConfigError("L must be > 0");
  if (mu && !(*mu > 0.0)) throw ConfigError("mu must be > 0");
  if (diameter && !(*diameter > 0.0)) throw ConfigError("D must be > 0");
  if (zeta && !(*zeta >= 1.0)) throw ConfigError("zeta must be >= 1");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in (0, 1]");
  if (!(c > 1.0)) throw ConfigError("c must be > 1");
  if (!(grad_tol >= 0.0)) throw ConfigError("grad-tol must be >= 0");
  if (!(target >= 0.0)) throw ConfigError("target must be >= 0");
  if (threshold && !(*threshold > 0.0)) throw ConfigError("threshold must be > 0");
  if (shift != 0.0 && problem != ProblemKind::kRayleigh) {
    throw ConfigError("shift only applies to rayleigh");
  }
  if (out.empty()) throw ConfigError("out must not be empty");

  if (optimizer == OptimizerKind::kRagd && problem == ProblemKind::kScaling) {
    throw ConfigError(
        "RAGD is not applicable to operator scaling: the log-capacity is geodesically "
        "convex but not strongly convex, so there is no modulus mu for RAGD's step rule");
  }
  if (optimizer == OptimizerKind::kGurvits && problem != ProblemKind::kScaling) {
    throw ConfigError("gurvits only applies to the scaling problem");
  }
  if (certify && optimizer != OptimizerKind::kRagdsdr &&
      optimizer != OptimizerKind::kLinearCoupling) {
    throw ConfigError("certify is available for ragdsdr and linear-coupling only, not " +
                      to_string(optimizer));
  }
}

std::string ExperimentConfig::echo_json() const {
  ojson j;
  j["problem"] = to_string(problem);
  j["optimizer"] = to_string(optimizer);
  j["d"] = dim();
  if (uses_count_n(problem)) {
    j["n"] = count();
  } else {
    j["m"] = count();
  }
  if (problem == ProblemKind::kKarcher) j["cond"] = cond_value();
  j["seed"] = seed;
  j["iters"] = iters;
  j["gs-iters"] = gs_iters;
  j["beta-rule"] = beta_rule_name(beta_rule);
  j["L"] = opt_json(lipschitz);
  j["mu"] = opt_json(mu);
  j["D"] = opt_json(diameter);
  j["zeta"] = opt_json(zeta);
  j["alpha"] = alpha;
  j["c"] = c;
  j["shift"] = shift;
  j["grad-tol"] = grad_tol;
  j["target"] = target;
  j["threshold"] = threshold_value();
  j["certify"] = certify;
  j["observed-D"] = observed_diameter;
  j["no-timing"] = !timing;
  j["out"] = out;
  j["instance"] = instance;
  return j.dump(2);
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "problem", "optimizer", "d",     "n",        "m",         "cond",   "seed",
      "iters",   "gs-iters",  "beta-rule", "L",    "mu",        "D",      "zeta",
      "alpha",   "c",         "shift", "grad-tol", "target",    "threshold",
      "certify", "observed-D", "no-timing", "out", "instance"};
  return keys;
}

void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "problem") {
    cfg.problem = parse_problem(value);
  } else if (key == "optimizer") {
    cfg.optimizer = parse_optimizer(value);
  } else if (key == "d") {
    cfg.d = parse_int(key, value);
  } else if (key == "n") {
    cfg.n = parse_int(key, value);
  } else if (key == "m") {
    cfg.m = parse_int(key, value);
  } else if (key == "cond") {
    cfg.cond = parse_double(key, value);
  } else if (key == "seed") {
    cfg.seed = parse_u64(key, value);
  } else if (key == "iters") {
    cfg.iters = parse_long(key, value);
  } else if (key == "gs-iters") {
    cfg.gs_iters = parse_int(key, value);
  } else if (key == "beta-rule") {
    if (value == "search") {
      cfg.beta_rule = BetaRule::kSearch;
    } else if (value == "nesterov") {
      cfg.beta_rule = BetaRule::kNesterov;
    } else {
      throw ConfigError("beta-rule: expected search or nesterov, got '" + value + "'");
    }
  } else if (key == "L") {
    cfg.lipschitz = parse_double(key, value);
  } else if (key == "mu") {
    cfg.mu = parse_double(key, value);
  } else if (key == "D") {
    cfg.diameter = parse_double(key, value);
  } else if (key == "zeta") {
    cfg.zeta = parse_double(key, value);
  } else if (key == "alpha") {
    cfg.alpha = parse_double(key, value);
  } else if (key == "c") {
    cfg.c = parse_double(key, value);
  } else if (key == "shift") {
    cfg.shift = parse_double(key, value);
  } else if (key == "grad-tol") {
    cfg.grad_tol = parse_double(key, value);
  } else if (key == "target") {
    cfg.target = parse_double(key, value);
  } else if (key == "threshold") {
    cfg.threshold = parse_double(key, value);
  } else if (key == "certify") {
    cfg.certify = parse_bool(key, value);
  } else if (key == "observed-D") {
    cfg.observed_diameter = parse_bool(key, value);
  } else if (key == "no-timing") {
    cfg.timing = !parse_bool(key, value);
  } else if (key == "out") {
    cfg.out = value;
  } else if (key == "instance") {
    cfg.instance = value;
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

ExperimentConfig parse_config_text(const std::string& text, bool json) {
  ExperimentConfig cfg;
  std::vector<std::pair<std::string, std::string>> settings;
  if (json) {
    ojson j;
    try {
      j = ojson::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("config JSON: ") + e.what());
    }
    const ojson& body = j.contains("config") ? j["config"] : j;
    if (!body.is_object()) throw ConfigError("config JSON: expected an object");
    for (const auto& [key, v] : body.items()) {
      if (v.is_null()) {
        if (std::find(config_keys().begin(), config_keys().end(), key) == config_keys().end()) {
          throw ConfigError("unknown config key '" + key + "'");
        }
        continue;
      }
      if (v.is_string()) {
        settings.emplace_back(key, v.get<std::string>());
      } else if (v.is_boolean()) {
        settings.emplace_back(key, v.get<bool>() ? "true" : "false");
      } else if (v.is_number_unsigned()) {
        settings.emplace_back(key, std::to_string(v.get<std::uint64_t>()));
      } else if (v.is_number_integer()) {
        settings.emplace_back(key, std::to_string(v.get<std::int64_t>()));
      } else if (v.is_number_float()) {
        settings.emplace_back(key, format_double(v.get<double>()));
      } else {
        throw ConfigError("config key '" + key + "': unsupported value type");
      }
    }
  } else {
    toml::table tbl;
    try {
      tbl = toml::parse(text);
    } catch (const toml::parse_error& e) {
      std::ostringstream os;
      os << "config TOML: " << e.description() << " at " << e.source().begin;
      throw ConfigError(os.str());
    }
    for (const auto& [k, node] : tbl) {
      const std::string key(k.str());
      if (auto s = node.value_exact<std::string>()) {
        settings.emplace_back(key, *s);
      } else if (auto b = node.value_exact<bool>()) {
        settings.emplace_back(key, *b ? "true" : "false");
      } else if (auto i = node.value_exact<std::int64_t>()) {
        settings.emplace_back(key, std::to_string(*i));
      } else if (auto f = node.value_exact<double>()) {
        settings.emplace_back(key, format_double(*f));
      } else {
        throw ConfigError("config key '" + key + "': unsupported value type");
      }
    }
  }
  // problem first: count keys (n vs m) are checked against it
  std::stable_partition(settings.begin(), settings.end(),
                        [](const auto& kv) { return kv.first == "problem"; });
  for (const auto& [key, value] : settings) apply_setting(cfg, key, value);
  cfg.validate();
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  const std::string text = read_file(path);
  const bool json = std::filesystem::path(path).extension() == ".json";
  return parse_config_text(text, json);
}

// -- problem setup ----------------------------------------------------------

InstanceRecord generate_instance(const ExperimentConfig& cfg) {
  cfg.validate();
  switch (cfg.problem) {
    case ProblemKind::kRayleigh: return record_of(gen_rayleigh(cfg.dim(), cfg.count(), cfg.seed));
    case ProblemKind::kKarcher:
      return record_of(gen_spd_set(cfg.count(), cfg.dim(), cfg.cond_value(), cfg.seed));
    case ProblemKind::kScaling: return record_of(gen_scaling(cfg.count(), cfg.dim(), cfg.seed));
  }
  throw ConfigError("unknown problem");
}

ProblemSetup build_problem(const ExperimentConfig& cfg) {
  cfg.validate();
  ProblemSetup s;
  if (!cfg.instance.empty()) {
    s.record = instance_from_json(read_file(cfg.instance));
    if (s.record.kind != to_string(cfg.problem)) {
      throw ConfigError("instance file holds a " + s.record.kind + " instance, config says " +
                        to_string(cfg.problem));
    }
  } else {
    s.record = generate_instance(cfg);
  }
  s.instance_sha256 = sha256_hex(instance_to_json(s.record));

  switch (cfg.problem) {
    case ProblemKind::kRayleigh: {
      RayleighInstance inst = rayleigh_from(s.record);
      if (cfg.shift != 0.0) inst = shifted(inst, cfg.shift);
      const linalg::EigDecomp eig = linalg::sym_eig(inst.a);
      const Eigen::Index top = eig.eigenvalues.size() - 1;
      const Vector u1 = canonical_sign(eig.eigenvectors.col(top));
      s.rayleigh = inst;
      s.objective = std::make_unique<RayleighObjective>(inst);
      s.x0 = Point{rayleigh_start(u1, cfg.seed)};
      s.witness = OptimumWitness::make(*s.objective, Point{u1},
                                       WitnessProvenance::kEigendecomposition);
      s.lipschitz = cfg.lipschitz.value_or(inst.lipschitz);
      s.mu = cfg.mu.value_or(inst.mu_hint);
      const double r0 = s.objective->manifold().dist(s.x0, s.witness.x_star);
      s.diameter = cfg.diameter.value_or(std::min(2.0 * r0, std::numbers::pi - 1e-3));
      break;
    }
    case ProblemKind::kKarcher: {
      KarcherInstance inst = karcher_from(s.record);
      const int d = inst.d();
      s.karcher = inst;
      s.objective = std::make_unique<KarcherObjective>(std::move(inst));
      s.x0 = Point{Matrix::Identity(d, d)};
      s.lipschitz = cfg.lipschitz.value_or(5.0);
      s.mu = cfg.mu.value_or(1.0);
      s.witness = presolve_witness(*s.objective, s.x0, s.lipschitz, 10 * cfg.iters);
      const double r0 = s.objective->manifold().dist(s.x0, s.witness.x_star);
      s.diameter = cfg.diameter.value_or(r0 > 0.0 ? 2.0 * r0 : 1.0);
      break;
    }
    case ProblemKind::kScaling: {
      ScalingInstance inst = scaling_from(s.record);
      const int d = inst.d();
      s.scaling = inst;
      s.objective = std::make_unique<CapacityObjective>(std::move(inst));
      s.x0 = Point{Matrix::Identity(d, d)};
      s.lipschitz = cfg.lipschitz.value_or(1.0);
      s.mu = cfg.mu;
      s.witness = presolve_witness(*s.objective, s.x0, s.lipschitz, 10 * cfg.iters);
      const double r0 = s.objective->manifold().dist(s.x0, s.witness.x_star);
      s.diameter = cfg.diameter.value_or(std::max(1.0, 2.0 * r0));
      break;
    }
  }
  return s;
}

OptConfig opt_config_for(const ExperimentConfig& cfg, const ProblemSetup& setup) {
  OptConfig o = make_opt_config(setup.objective->manifold(), setup.lipschitz, setup.diameter);
  if (cfg.zeta) o.curvature.zeta = *cfg.zeta;
  o.search.max_iters = cfg.gs_iters;
  o.max_iters = cfg.iters;
  o.grad_tol = cfg.grad_tol;
  o.timing = cfg.timing;
  o.beta_rule =
      cfg.optimizer == OptimizerKind::kLinearCoupling ? BetaRule::kNesterov : cfg.beta_rule;
  o.record_points = cfg.certify || cfg.problem == ProblemKind::kScaling;
  return o;
}

// -- execution --------------------------------------------------------------

RunOutput run_gurvits(const ScalingInstance& inst, long iters, bool timing) {
  RunOutput out;
  const int d = inst.d();
  const Matrix eye = Matrix::Identity(d, d);
  const Spd spd(d);
  ScalingInstance tuple = inst;
  Matrix r = eye;  // scaled tuple = L A_i R, with X = R R^T
  const std::int64_t t0 = timing ? now_ns() : 0;
  auto x_of = [&] { return Point{linalg::symmetrize(r * r.transpose())}; };

  for (long k = 0; k < iters; ++k) {
    const Point x = x_of();
    IterRecord row;
    row.k = k;
    try {
      row.f_x = capacity_value(inst, x);
      row.f_y = row.f_x;
      const Tangent g = capacity_grad(inst, x);
      row.grad_norm_y = spd.norm(x, g);
      row.dist_x0 = spd.dist(Point{eye}, x);
      out.metric.push_back(ds_distance(tuple, eye, eye));

      const Matrix nr = scaling_normalizer(tuple, ScalingSide::kRight);
      for (Matrix& a : tuple.ops) a = a * nr;
      r = r * nr;
      const Matrix nl = scaling_normalizer(tuple, ScalingSide::kLeft);
      for (Matrix& a : tuple.ops) a = nl * a;
    } catch (const DomainError& e) {
      throw NumericalAbort(e.what(), k);
    }
    row.beta = 1.0;
    row.wall_ns = timing ? now_ns() - t0 : 0;
    out.trace.rows.push_back(row);
  }
  try {
    out.trace.final_x = x_of();
    out.trace.final_v = out.trace.final_x;
    out.trace.final_f = capacity_value(inst, out.trace.final_x);
    out.metric.push_back(ds_distance(tuple, eye, eye));
  } catch (const DomainError& e) {
    throw NumericalAbort(e.what(), iters);
  }
  return out;
}

RunOutput execute(const ExperimentConfig& cfg, const ProblemSetup& setup) {
  const Objective& f = *setup.objective;
  const auto t0 = std::chrono::steady_clock::now();
  RunOutput out;
  out.opt = opt_config_for(cfg, setup);
  switch (cfg.optimizer) {
    case OptimizerKind::kRgd:
      out.trace = run_rgd(f, setup.x0, out.opt);
      break;
    case OptimizerKind::kRagdsdr:
    case OptimizerKind::kLinearCoupling:
      out.trace = run_ragdsdr(f, setup.x0, out.opt);
      break;
    case OptimizerKind::kRagdsdrRestart: {
      RestartConfig rc;
      rc.alpha = cfg.alpha;
      rc.c = cfg.c;
      rc.f_star = setup.witness.f_star;
      rc.target = cfg.target;
      out.trace = run_restarted(f, setup.x0, out.opt, rc);
      double eps_tilde = 0.0;
      for (const IterRecord& row : out.trace.rows) eps_tilde = std::max(eps_tilde, -row.cond2_margin);
      out.segments = check_restart_segments(out.trace, out.opt, rc, eps_tilde);
      break;
    }
    case OptimizerKind::kRagd: {
      if (!setup.mu) throw ConfigError("ragd requires mu");
      RagdParams p;
      p.lipschitz = setup.lipschitz;
      p.mu = *setup.mu;
      out.trace = run_ragd(f, setup.x0, p, cfg.iters, cfg.grad_tol, cfg.timing);
      break;
    }
    case OptimizerKind::kGurvits: {
      RunOutput g = run_gurvits(*setup.scaling, cfg.iters, cfg.timing);
      out.trace = std::move(g.trace);
      out.metric = std::move(g.metric);
      break;
    }
  }

  if (cfg.optimizer != OptimizerKind::kGurvits) {
    if (cfg.problem == ProblemKind::kScaling && !out.trace.points.empty()) {
      for (const StepPoints& p : out.trace.points) {
        out.metric.push_back(ds_distance_at(*setup.scaling, p.x.coords));
      }
      out.metric.push_back(ds_distance_at(*setup.scaling, out.trace.final_x.coords));
    } else if (cfg.problem == ProblemKind::kScaling) {
      // baselines that do not record points: only the final iterate is known
      for (std::size_t i = 0; i < out.trace.rows.size(); ++i) {
        out.metric.push_back(std::numeric_limits<double>::quiet_NaN());
      }
      out.metric.push_back(ds_distance_at(*setup.scaling, out.trace.final_x.coords));
    } else {
      for (double v : out.trace.values()) out.metric.push_back(v - setup.witness.f_star);
    }
  }

  if (cfg.certify) {
    CertifyOptions co;
    co.observed_diameter = cfg.observed_diameter;
    co.seed = cfg.seed;
    co.hessian_distances = {0.1, 0.5, 1.0};
    co.hessian_per_distance = 1;
    out.certificate = certify(f, out.trace, setup.witness, out.opt, setup.x0, co);
  }
  out.wall_seconds =
      cfg.timing ? std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()
                 : 0.0;
  return out;
}

long iterations_to(const std::vector<double>& metric, double threshold) {
  for (std::size_t k = 0; k < metric.size(); ++k) {
    if (metric[k] <= threshold) return static_cast<long>(k);
  }
  return -1;
}

// -- output -----------------------------------------------------------------

std::string manifest_json(const ExperimentConfig& cfg, const ProblemSetup& setup,
                          const RunOutput& run) {
  const Manifold& m = setup.objective->manifold();
  ojson j;
  j["config"] = ojson::parse(cfg.echo_json());
  j["git_describe"] = RMOM_GIT_DESCRIBE;
  j["instance_sha256"] = setup.instance_sha256;
  j["scale"] = cfg.dim() >= kFullScaleDim ? "paper" : "desk";
  j["wall_seconds"] = run.wall_seconds;

  ojson resolved;
  resolved["L"] = setup.lipschitz;
  resolved["mu"] = opt_json(setup.mu);
  resolved["D"] = setup.diameter;
  resolved["zeta"] = run.opt.curvature.zeta;
  resolved["delta"] = run.opt.curvature.delta;
  resolved["beta_rule"] = beta_rule_name(run.opt.beta_rule);
  j["resolved"] = resolved;

  ojson witness;
  witness["provenance"] = to_string(setup.witness.provenance);
  witness["f_star"] = setup.witness.f_star;
  witness["grad_norm"] = setup.witness.grad_norm;
  witness["dist_x0"] = m.dist(setup.x0, setup.witness.x_star);
  j["witness"] = witness;

  ojson summary;
  summary["iterations"] = run.trace.rows.size();
  summary["final_f"] = run.trace.final_f;
  double final_grad = std::numeric_limits<double>::quiet_NaN();
  try {
    final_grad = m.norm(run.trace.final_x, setup.objective->grad(run.trace.final_x));
  } catch (const DomainError&) {
  }
  summary["final_grad_norm"] = final_grad;
  summary["final_suboptimality"] = run.metric.empty() ? ojson(nullptr) : ojson(run.metric.back());
  summary["metric"] = cfg.problem == ProblemKind::kScaling ? "ds_distance" : "f - f_star";
  summary["iterations_to_threshold"] = iterations_to(run.metric, cfg.threshold_value());
  summary["restarts"] = run.trace.restarts;
  if (run.certificate) summary["certificate"] = run.certificate->verdict() ? "pass" : "fail";
  j["summary"] = summary;

  if (!run.segments.empty()) {
    ojson segs = ojson::array();
    for (const SegmentCheck& sc : run.segments) {
      ojson s;
      s["start_row"] = sc.start_row;
      s["steps"] = sc.steps;
      s["start_gap"] = sc.start_gap;
      s["end_gap"] = sc.end_gap;
      s["bound"] = std::isfinite(sc.bound) ? ojson(sc.bound) : ojson("inf");
      s["contracted"] = sc.contracted;
      s["within_bound"] = sc.within_bound;
      segs.push_back(s);
    }
    j["restart_segments"] = segs;
  }
  return j.dump(2) + "\n";
}

int write_run(const ExperimentConfig& cfg, const ProblemSetup& setup, const RunOutput& run) {
  atomic_write(cfg.out + ".csv", trace_to_csv(run.trace.rows));
  atomic_write(cfg.out + ".manifest.json", manifest_json(cfg, setup, run));
  if (cfg.optimizer == OptimizerKind::kRagdsdrRestart) {
    atomic_write(cfg.out + ".restarts.json", restarts_to_json(run.trace.restarts));
  }
  if (run.certificate) {
    atomic_write(cfg.out + ".certificate.json", run.certificate->to_json());
    if (!run.certificate->verdict()) return kExitCertification;
  }
  return kExitOk;
}

CompareResult compare(const std::vector<ExperimentConfig>& cfgs) {
  if (cfgs.empty()) throw ConfigError("compare needs at least one configuration");
  auto instance_key = [](ExperimentConfig c) {
    c.optimizer = OptimizerKind::kRagdsdr;
    c.out = "run";
    c.certify = false;
    return c.echo_json();
  };
  const std::string key0 = instance_key(cfgs.front());
  for (const ExperimentConfig& c : cfgs) {
    c.validate();
    if (instance_key(c) != key0) {
      throw ConfigError("compare: configurations differ in more than the optimizer");
    }
  }
  const ProblemSetup setup = build_problem(cfgs.front());
  for (const ExperimentConfig& c : cfgs) {
    if (sha256_hex(instance_to_json(c.instance.empty() ? generate_instance(c)
                                                        : instance_from_json(read_file(c.instance)))) !=
        setup.instance_sha256) {
      throw ConfigError("compare: mismatched instances");
    }
  }

  CompareResult res;
  res.threshold = cfgs.front().threshold_value();
  res.csv = "optimizer,k,suboptimality,wall_ns\n";
  for (const ExperimentConfig& c : cfgs) {
    const RunOutput run = execute(c, setup);
    const std::string name = to_string(c.optimizer);
    for (std::size_t k = 0; k < run.metric.size(); ++k) {
      std::int64_t wall = 0;
      if (!run.trace.rows.empty()) {
        wall = run.trace.rows[std::min(k, run.trace.rows.size() - 1)].wall_ns;
      }
      res.csv += name + "," + std::to_string(k) + "," + format_double(run.metric[k]) + "," +
                 std::to_string(wall) + "\n";
    }
    res.iterations_to_threshold.emplace_back(name, iterations_to(run.metric, res.threshold));
  }
  return res;
}

std::string curvature_block(const CurvatureConstants& c) {
  auto fmt = [](double v) { return std::isfinite(v) ? format_double(v) : std::string("inf"); };
  return "zeta=" + fmt(c.zeta) + "\ndelta=" + fmt(c.delta) + "\ndiscrepancy=" +
         fmt(c.discrepancy) + "\nhorizon=" + fmt(c.horizon) + "\n";
}

}  // namespace rmom
