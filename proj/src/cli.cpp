// Copyright 2026 The qsblab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qsblab/cli.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <random>
#include <regex>
#include <sstream>

#include "CLI11.hpp"
#include "qsblab/json_io.hpp"
#include "qsblab/optimize.hpp"
#include "qsblab/properties.hpp"
#include "qsblab/qsb.hpp"

#ifndef QSBLAB_VERSION
#define QSBLAB_VERSION "0.0.0"
#endif

namespace qsblab::cli {

namespace fs = std::filesystem;
using io::Json;

bool parse_integer_literal(const std::string& text, double& value) {
  static const std::regex pattern(R"(([0-9]+)([eE]\+?([0-9]+))?)");
  std::smatch m;
  if (!std::regex_match(text, m, pattern)) return false;
  const double v = std::strtod(text.c_str(), nullptr);
  if (!std::isfinite(v) || v < 1.0) return false;
  value = v;
  return true;
}

std::string shortest_scientific(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::scientific);
  return std::string(buf, res.ptr);
}

namespace {

std::string sig6(double x) {
  std::ostringstream os;
  os << std::setprecision(6) << x;
  return os.str();
}

std::string fixed6(double x) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(6) << x;
  return os.str();
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNoPerfectQsb:
    case ErrorCode::kChainNotApplicable:
    case ErrorCode::kBoundVacuous:
    case ErrorCode::kBadDim:
      return kExitImpossible;
    case ErrorCode::kIo:
    case ErrorCode::kParse:
      return kExitIo;
    case ErrorCode::kBadConfig:
    case ErrorCode::kTooLarge:
    case ErrorCode::kBadEpsilon:
      return kExitUsage;
    default:
      return kExitInvariant;
  }
}

/// Raised while loading a user-supplied instance: anything but a read or
/// parse failure is an invariant violation of the file's contents. Optimizer
/// output is accepted too.
QsbInstance load_instance(const fs::path& path) {
  const Json j = io::read_json(path);
  const bool wrapped = j.is_object() && j.contains("instance") && !j.contains("channel");
  try {
    return io::instance_from_json(wrapped ? j["instance"] : j);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kParse) throw;
    throw std::runtime_error(std::string("invalid instance: ") + e.what());
  }
}

struct Context {
  std::ostream& out;
  std::ostream& err;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  Json extra = Json::object();
};

// --- Options ------------------------------------------------------------------

struct DimsOpt {
  std::size_t s = 0, a = 0, b = 0, c = 0;
  QsbDims dims() const { return QsbDims{s, a, b, c}; }
};

void add_dims(CLI::App* app, DimsOpt& d, bool require_bc = true) {
  app->add_option("--ds", d.s, "source dimension d_S")->required()->check(CLI::PositiveNumber);
  app->add_option("--da", d.a, "shared output dimension d_A")->required()->check(CLI::PositiveNumber);
  auto* b = app->add_option("--db", d.b, "dimension d_B")->check(CLI::PositiveNumber);
  auto* c = app->add_option("--dc", d.c, "dimension d_C")->check(CLI::PositiveNumber);
  if (require_bc) {
    b->required();
    c->required();
  }
}

struct OptimizeOpt {
  std::size_t env = 0;
  std::size_t restarts = 16;
  std::size_t iters = 2000;
  double step = 1.0;
  std::string objective = "worst";
  std::size_t haar = 200;
  std::size_t threads = 0;

  OptimizeConfig config(const QsbDims& dims, std::uint64_t seed) const {
    OptimizeConfig c;
    c.dims = dims;
    c.env_dim = env;
    c.restarts = restarts;
    c.max_iters = iters;
    c.step_init = step;
    c.objective = objective == "average" ? Objective::kAverage : Objective::kWorstCase;
    c.samples.haar_count = haar;
    c.samples.seed = seed;
    c.seed = seed;
    c.threads = threads;
    return c;
  }
};

void add_optimize(CLI::App* app, OptimizeOpt& o) {
  app->add_option("--env", o.env, "environment dimension (0: min(d_S d_A d_B d_C, 16))");
  app->add_option("--restarts", o.restarts, "random restarts")->check(CLI::PositiveNumber);
  app->add_option("--iters", o.iters, "iterations per restart")->check(CLI::PositiveNumber);
  app->add_option("--step", o.step, "initial line-search step")->check(CLI::PositiveNumber);
  app->add_option("--objective", o.objective, "worst | average")
      ->check(CLI::IsMember({"worst", "average"}));
  app->add_option("--haar", o.haar, "Haar samples in the objective");
  app->add_option("--threads", o.threads, "worker threads (0: all cores, capped by QSBLAB_THREADS)");
}

// --- Subcommands -----------------------------------------------------------------

int cmd_construct(Context& ctx, const DimsOpt& d, const std::string& out_path, std::size_t samples,
                  std::uint64_t seed) {
  const QsbInstance instance = perfect_qsb_construct(d.dims());
  std::mt19937_64 seeder(seed);
  std::vector<PureState> states;
  for (std::size_t i = 0; i < samples; ++i) states.push_back(random_pure(d.dims().source(), seeder()));
  double min_ab = 1.0;
  double min_ac = 1.0;
  if (!states.empty()) {
    const auto est = measure_eps(instance, states);
    for (const auto& f : est.per_state) {
      min_ab = std::min(min_ab, f.f_ab);
      min_ac = std::min(min_ac, f.f_ac);
    }
  }
  ctx.out << "constructed isometric instance d_S=" << d.s << " d_A=" << d.a << " d_B=" << d.b
          << " d_C=" << d.c << "\n";
  ctx.out << "min F_AB over " << samples << " Haar inputs: " << fixed6(min_ab) << "\n";
  ctx.out << "min F_AC over " << samples << " Haar inputs: " << fixed6(min_ac) << "\n";
  if (!out_path.empty()) {
    io::write_text(out_path, io::to_json(instance).dump(2) + "\n");
    ctx.outputs.push_back(out_path);
  }
  ctx.extra["min_f_ab"] = min_ab;
  ctx.extra["min_f_ac"] = min_ac;
  return kExitOk;
}

std::string status_of(const ChainCheck& c) {
  if (!c.applicable) return "n/a";
  if (c.vacuous) return "vacuous";
  return c.check.satisfied ? "pass" : "FAIL";
}

int cmd_verify(Context& ctx, const std::string& path, std::size_t haar, std::uint64_t seed,
               bool chain, bool force, const std::string& report_path, const std::string& csv_path) {
  ctx.inputs.push_back(path);
  const QsbInstance instance = load_instance(path);
  const auto states = standard_sample_states(instance.dims().s, haar, seed);
  const auto est = measure_eps(instance, states);
  double min_ab = 1.0;
  double min_ac = 1.0;
  for (const auto& f : est.per_state) {
    min_ab = std::min(min_ab, f.f_ab);
    min_ac = std::min(min_ac, f.f_ac);
  }
  ctx.out << "states " << states.size() << "\n";
  ctx.out << "eps_hat " << sig6(est.eps_hat) << "\n";
  ctx.out << "min F_AB " << fixed6(min_ab) << "\n";
  ctx.out << "min F_AC " << fixed6(min_ac) << "\n";

  Json report{{"eps_hat", est.eps_hat}, {"min_f_ab", min_ab}, {"min_f_ac", min_ac},
              {"states", states.size()}};
  int rc = kExitOk;
  if (chain) {
    std::vector<PureState> basis;
    for (std::size_t k = 0; k < instance.dims().s; ++k) {
      basis.push_back(PureState::basis(instance.dims().source(), k));
    }
    ChainOptions options;
    options.enforce_applicability = !force;
    options.seed = seed;
    const auto r = chain_verify(instance, basis, est.eps_hat, options);
    std::size_t counted = 0;
    std::size_t failed = 0;
    ctx.out << std::left << std::setw(40) << "stage" << std::setw(14) << "lhs" << std::setw(14)
            << "rhs" << std::setw(14) << "slack" << "status\n";
    for (const auto& c : r.checks) {
      ctx.out << std::setw(40) << c.stage << std::setw(14) << sig6(c.check.lhs) << std::setw(14)
              << sig6(c.check.rhs) << std::setw(14) << sig6(c.check.slack) << status_of(c) << "\n";
      if (c.counts()) {
        ++counted;
        if (!c.check.satisfied) ++failed;
      }
    }
    ctx.out << std::right;
    ctx.out << "chain eps " << sig6(r.eps) << ": " << counted << " counted checks, " << failed
            << " failed\n";
    ctx.out << "cloning contradiction: " << (r.cloning_contradiction ? "yes" : "no") << "\n";
    report["chain"] = io::to_json(r);
    if (!csv_path.empty()) {
      io::write_text(csv_path, io::chain_report_csv(r));
      ctx.outputs.push_back(csv_path);
    }
    if (failed > 0) rc = kExitInvariant;
  }
  if (!report_path.empty()) {
    io::write_text(report_path, report.dump(2) + "\n");
    ctx.outputs.push_back(report_path);
  }
  ctx.extra["eps_hat"] = est.eps_hat;
  return rc;
}

int cmd_threshold(Context& ctx, const std::string& d_a_text) {
  double d_a = 0.0;
  if (!parse_integer_literal(d_a_text, d_a)) {
    ctx.err << "error: --da must be a positive integer (digits, optionally with an integer "
               "exponent such as 1e21), got '"
            << d_a_text << "'\n";
    return kExitUsage;
  }
  const auto t = epsilon_threshold(d_a);
  ctx.out << "eps0 " << shortest_scientific(t.value) << "\n";
  ctx.out << "candidates " << shortest_scientific(t.first) << " " << shortest_scientific(t.second)
          << "\n";
  ctx.out << "binding " << (t.second_wins ? "second (2.4e-14 d_A^-8)" : "first (0.6e-175)") << "\n";
  ctx.extra["eps0"] = shortest_scientific(t.value);
  ctx.extra["candidates"] = {shortest_scientific(t.first), shortest_scientific(t.second)};
  return kExitOk;
}

int cmd_properties(Context& ctx, std::size_t samples, std::uint64_t seed, std::size_t max_dim,
                   const std::string& csv_path) {
  PropertyOptions options;
  options.samples = samples;
  options.seed = seed;
  options.max_dim = max_dim;
  options.keep_records = !csv_path.empty();
  const auto report = run_property_suite(options);
  for (const auto& t : report.tallies) {
    ctx.out << std::left << std::setw(24) << t.name << std::right << t.count << " checks, "
            << t.violations << " violations, min slack " << sig6(t.min_slack) << "\n";
  }
  for (const auto& v : report.violations) {
    ctx.err << "violation " << v.property << " lhs=" << std::setprecision(17) << v.check.lhs
            << " rhs=" << v.check.rhs << " slack=" << v.check.slack << " seed=" << v.seed
            << " dim=" << v.dim << "\n";
  }
  if (!csv_path.empty()) {
    std::ostringstream csv;
    csv << "property,lhs,rhs,slack,seed\n" << std::setprecision(17);
    for (const auto& r : report.records) {
      csv << r.property << ',' << r.check.lhs << ',' << r.check.rhs << ',' << r.check.slack << ','
          << r.seed << '\n';
    }
    io::write_text(csv_path, csv.str());
    ctx.outputs.push_back(csv_path);
  }
  ctx.extra["violations"] = report.violations.size();
  return report.ok() ? kExitOk : kExitInvariant;
}

bool drifted(const FrontierPoint& p, Context& ctx) {
  const double drift = std::abs(p.best_worst_fidelity - p.verified_fidelity);
  if (drift > 1e-8) {
    ctx.err << "error: optimizer value " << p.best_worst_fidelity
            << " does not re-verify (measured " << p.verified_fidelity << ")\n";
    return true;
  }
  return false;
}

int cmd_optimize(Context& ctx, const DimsOpt& d, const OptimizeOpt& o, std::uint64_t seed,
                 const std::string& out_path, const std::string& csv_path) {
  const auto point = optimize_qsb(o.config(d.dims(), seed));
  ctx.out << "best worst-case fidelity " << fixed6(point.best_worst_fidelity) << "\n";
  ctx.out << "re-verified " << fixed6(point.verified_fidelity) << " (restart " << point.restart
          << ", " << point.iterations << " iterations, env " << point.env_dim << ")\n";
  if (!out_path.empty()) {
    io::write_text(out_path, io::to_json(point).dump(2) + "\n");
    ctx.outputs.push_back(out_path);
  }
  if (!csv_path.empty()) {
    io::write_text(csv_path, io::frontier_csv({point}));
    ctx.outputs.push_back(csv_path);
  }
  ctx.extra["best_worst_fidelity"] = point.best_worst_fidelity;
  return drifted(point, ctx) ? kExitInvariant : kExitOk;
}

bool parse_range(const std::string& text, std::size_t& lo, std::size_t& hi) {
  static const std::regex pattern(R"(([0-9]+)(\.\.([0-9]+))?)");
  std::smatch m;
  if (!std::regex_match(text, m, pattern)) return false;
  lo = std::stoul(m[1].str());
  hi = m[3].matched ? std::stoul(m[3].str()) : lo;
  return lo >= 1 && lo <= hi;
}

int cmd_sweep(Context& ctx, std::size_t d_s, const std::string& range, std::size_t d_b,
              std::size_t d_c, const OptimizeOpt& o, std::uint64_t seed,
              const std::string& csv_path, const std::string& json_path) {
  std::size_t lo = 0;
  std::size_t hi = 0;
  if (!parse_range(range, lo, hi)) {
    ctx.err << "error: --da expects N or LO..HI with 1 <= LO <= HI, got '" << range << "'\n";
    return kExitUsage;
  }
  if (d_b == 0) d_b = d_s;
  if (d_c == 0) d_c = d_s;
  const auto points = frontier_sweep(d_s, lo, hi, d_b, d_c, o.config(QsbDims{d_s, lo, d_b, d_c}, seed));
  const std::string csv = io::frontier_csv(points);
  ctx.out << csv;
  int rc = kExitOk;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (drifted(points[i], ctx)) rc = kExitInvariant;
    if (i > 0 && points[i].best_worst_fidelity < points[i - 1].best_worst_fidelity) {
      ctx.err << "error: frontier decreases from d_A=" << points[i - 1].dims.a << " to d_A="
              << points[i].dims.a << "\n";
      rc = kExitInvariant;
    }
  }
  if (!csv_path.empty()) {
    io::write_text(csv_path, csv);
    ctx.outputs.push_back(csv_path);
  }
  if (!json_path.empty()) {
    Json arr = Json::array();
    for (const auto& p : points) arr.push_back(io::to_json(p));
    io::write_text(json_path, arr.dump(2) + "\n");
    ctx.outputs.push_back(json_path);
  }
  return rc;
}

Json flags_of(const CLI::App* sub) {
  Json flags = Json::object();
  for (const CLI::Option* opt : sub->get_options()) {
    if (opt->get_name() == "--help" || opt->get_name() == "-h") continue;
    std::string key = opt->get_single_name();
    if (opt->count() > 0) {
      const auto& res = opt->results();
      if (opt->get_type_size() == 0) {
        flags[key] = true;
      } else {
        flags[key] = res.size() == 1 ? Json(res[0]) : Json(res);
      }
    } else if (!opt->get_default_str().empty()) {
      flags[key] = opt->get_default_str();
    }
  }
  return flags;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  CLI::App app{"qsblab: shared-broadcasting toolkit"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  app.set_version_flag("--version", QSBLAB_VERSION);

  std::uint64_t seed = 42;
  std::string manifest_path;
  DimsOpt dims;
  OptimizeOpt opt;
  std::string out_path, csv_path, report_path, instance_path, d_a_text, range;
  std::size_t samples = 100;
  std::size_t haar = 200;
  std::size_t prop_samples = 10000;
  std::size_t max_dim = 16;
  std::size_t sweep_ds = 0, sweep_db = 0, sweep_dc = 0;
  bool chain = false;
  bool force = false;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "random seed");
    sub->add_option("--manifest", manifest_path, "manifest path");
  };

  auto* construct = app.add_subcommand("construct", "build the exact instance for d_S <= d_A");
  add_dims(construct, dims);
  construct->add_option("-o,--out", out_path, "instance JSON output");
  construct->add_option("--samples", samples, "Haar inputs for the fidelity printout");
  common(construct);

  auto* verify = app.add_subcommand("verify", "measure eps on an instance, optionally run the chain");
  verify->add_option("instance", instance_path, "instance JSON")->required();
  verify->add_option("--samples", haar, "Haar inputs on top of basis and pair superpositions");
  verify->add_flag("--chain", chain, "run the inequality chain");
  verify->add_flag("--force", force, "run the chain even when d_S <= d_A");
  verify->add_option("--report", report_path, "report JSON output");
  verify->add_option("--csv", csv_path, "chain CSV output");
  common(verify);

  auto* threshold = app.add_subcommand("threshold", "evaluate the eps0 threshold");
  threshold->add_option("--da", d_a_text, "d_A (integer, e.g. 2 or 1e21)")->required();
  common(threshold);

  auto* properties = app.add_subcommand("properties", "randomized fidelity inequality sweep");
  properties->add_option("--samples", prop_samples, "instances per property");
  properties->add_option("--max-dim", max_dim, "largest Hilbert-space dimension")
      ->check(CLI::Range(std::size_t{2}, std::size_t{64}));
  properties->add_option("--csv", csv_path, "CSV of every check (property,lhs,rhs,slack,seed)");
  common(properties);

  auto* optimize = app.add_subcommand("optimize", "variational search at fixed dimensions");
  add_dims(optimize, dims);
  add_optimize(optimize, opt);
  optimize->add_option("-o,--out", out_path, "frontier point JSON output");
  optimize->add_option("--csv", csv_path, "frontier CSV output");
  common(optimize);

  auto* sweep = app.add_subcommand("sweep", "optimize over a range of d_A");
  sweep->add_option("--ds", sweep_ds, "source dimension d_S")->required()->check(CLI::PositiveNumber);
  sweep->add_option("--da", range, "d_A range LO..HI")->required();
  sweep->add_option("--db", sweep_db, "dimension d_B (default d_S)");
  sweep->add_option("--dc", sweep_dc, "dimension d_C (default d_S)");
  add_optimize(sweep, opt);
  sweep->add_option("-o,--csv", csv_path, "frontier CSV output");
  sweep->add_option("--json", report_path, "frontier JSON output");
  common(sweep);

  std::vector<std::string> argv_store{"qsblab"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  Context ctx{out, err, {}, {}};
  int rc = kExitOk;
  try {
    if (sub == construct) {
      rc = cmd_construct(ctx, dims, out_path, samples, seed);
    } else if (sub == verify) {
      rc = cmd_verify(ctx, instance_path, haar, seed, chain, force, report_path, csv_path);
    } else if (sub == threshold) {
      rc = cmd_threshold(ctx, d_a_text);
    } else if (sub == properties) {
      rc = cmd_properties(ctx, prop_samples, seed, max_dim, csv_path);
    } else if (sub == optimize) {
      rc = cmd_optimize(ctx, dims, opt, seed, out_path, csv_path);
    } else if (sub == sweep) {
      rc = cmd_sweep(ctx, sweep_ds, range, sweep_db, sweep_dc, opt, seed, csv_path, report_path);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    rc = exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    rc = kExitInvariant;
  }

  const std::string name = sub->get_name();
  fs::path manifest = manifest_path;
  if (manifest.empty()) {
    manifest = ctx.outputs.empty() ? fs::path("qsblab_" + name + ".manifest.json")
                                   : fs::path(ctx.outputs.front() + ".manifest.json");
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const Json m{{"subcommand", name},
               {"args", args},
               {"flags", flags_of(sub)},
               {"seed", seed},
               {"inputs", ctx.inputs},
               {"outputs", ctx.outputs},
               {"version", QSBLAB_VERSION},
               {"duration_seconds", seconds},
               {"exit_code", rc},
               {"results", ctx.extra}};
  try {
    io::write_text(manifest, m.dump(2) + "\n");
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return rc == kExitOk ? kExitIo : rc;
  }
  return rc;
}

}  // namespace qsblab::cli
