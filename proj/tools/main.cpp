// Command-line front end: one-off estimates, the classical and variational
// solvers, the stretched-family sweep, the two-solution experiment, the
// verification suite, and format conversion for stored results.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "CLI11.hpp"
#include "chords/body.hpp"
#include "chords/construction.hpp"
#include "chords/errors.hpp"
#include "chords/grid.hpp"
#include "chords/harness.hpp"
#include "chords/json_io.hpp"
#include "chords/measure.hpp"
#include "chords/minkowski.hpp"
#include "chords/params.hpp"
#include "chords/variational.hpp"
#include "chords/verify.hpp"

namespace {

using namespace chords;

struct GlobalOpts {
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::string out;  // empty: stdout
};

void emit(const GlobalOpts& g, const std::string& text) {
  if (g.out.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    if (text.empty() || text.back() != '\n') std::fputc('\n', stdout);
  } else {
    write_text_file(g.out, text);
  }
}

ExperimentConfig load_config(const std::string& path, const GlobalOpts& g) {
  ExperimentConfig cfg;
  if (!path.empty()) cfg = ExperimentConfig::from_json(read_text_file(path));
  if (g.seed) {
    cfg.seed = *g.seed;
    cfg.mc.seed = *g.seed;
  }
  if (g.threads) cfg.mc.threads = *g.threads;
  cfg.validate();
  return cfg;
}

GridPtr make_grid(int n, int rings) {
  return std::make_shared<const SphericalGrid>(SphericalGrid::zonal_rings(n, rings));
}

ClassicalProblem weighted_density_problem(const ProblemParams& params, int rings) {
  const auto grid = make_grid(params.n, rings);
  return discretize_density(
      [&](const Eigen::VectorXd& x) { return construction_density(x, params); }, *grid);
}

std::string estimate_line(const Estimate& e) { return to_json(e); }

int cmd_compute(const GlobalOpts& g, const std::string& body_path, const std::string& quantity,
                double q, double p, const std::string& method, std::uint64_t samples,
                const std::vector<double>& z_raw) {
  const Body body = body_from_json(read_text_file(body_path));
  LineSamplerConfig mc;
  mc.n_samples = samples;
  if (g.seed) mc.seed = *g.seed;
  if (g.threads) mc.threads = *g.threads;

  if (quantity == "chord-integral") {
    Estimate e;
    if (method == "boundary") {
      e = chord_integral_boundary(body, q);
    } else if (method == "crofton-mc") {
      e = chord_integral_crofton(body, q, mc);
    } else {
      throw ConfigError("chord-integral supports methods crofton-mc and boundary");
    }
    emit(g, estimate_line(e));
    return 0;
  }
  if (quantity == "dual-quermass") {
    Eigen::VectorXd z = Eigen::VectorXd::Zero(body.dim());
    if (!z_raw.empty()) {
      if (static_cast<int>(z_raw.size()) != body.dim())
        throw ConfigError("--z needs exactly one coordinate per dimension");
      for (int i = 0; i < body.dim(); ++i) z(i) = z_raw[i];
    }
    const Method m = method_from_name(method.empty() ? "radial-quadrature" : method);
    emit(g, estimate_line(dual_quermass(body, z, q, m, {}, mc)));
    return 0;
  }
  if (quantity == "chord-measure") {
    emit(g, to_json(chord_measure_polytope(body, q)));
    return 0;
  }
  if (quantity == "lp-chord-measure") {
    emit(g, to_json(lp_chord_measure(body, p, q)));
    return 0;
  }
  throw ConfigError("unknown quantity \"" + quantity +
                    "\" (chord-integral, dual-quermass, chord-measure, lp-chord-measure)");
}

int cmd_classical(const GlobalOpts& g, const std::string& config_path, double eps_override,
                  int rings_override, bool stretch) {
  ExperimentConfig cfg = load_config(config_path, g);
  if (eps_override > 0) cfg.params.epsilon = eps_override;
  if (rings_override > 0) cfg.rings = rings_override;
  cfg.params.validate_for_construction();

  const ClassicalProblem problem = weighted_density_problem(cfg.params, cfg.rings);
  const SolveReport report = solve_classical_minkowski(problem);
  if (stretch) {
    emit(g, to_json(build_stretched_solution(report.body, cfg.params)));
  } else {
    emit(g, to_json(report));
  }
  return 0;
}

int cmd_sweep(const GlobalOpts& g, const std::string& config_path, const std::string& format) {
  ExperimentConfig cfg = load_config(config_path, g);
  cfg.params.validate_for_construction();
  const SweepResult sw = epsilon_sweep(cfg.params, cfg.eps_list, cfg.rings, cfg.res);
  emit(g, format == "json" ? to_json(sw) : sweep_csv(sw));
  for (const auto& rec : sw.records) {
    if (!rec.ok)
      std::fprintf(stderr, "epsilon %s failed: %s\n", format_double(rec.epsilon).c_str(),
                   rec.error.c_str());
  }
  return 0;
}

int cmd_variational(const GlobalOpts& g, const std::string& config_path,
                    const std::string& measure_path, bool uniform) {
  ExperimentConfig cfg = load_config(config_path, g);
  const auto grid = make_grid(cfg.params.n, cfg.rings);

  DiscreteMeasure f;
  if (uniform) {
    f.directions = grid->directions;
    f.weights = grid->weights;
  } else if (!measure_path.empty()) {
    f = measure_from_json(read_text_file(measure_path));
  } else {
    throw ConfigError("variational-solve needs --measure FILE or --uniform");
  }

  VariationalOptions opts;
  opts.res = cfg.res;
  const VariationalState state = maximize(f, cfg.params, grid, opts);
  const RescaleResult scaled = euler_lagrange_rescale(state, f, cfg.params);

  std::string out = "{\"objective\":" + format_double(state.objective);
  out += ",\"iterations\":" + std::to_string(state.iteration);
  out += ",\"stationarity\":" + format_double(state.stationarity);
  out += ",\"converged\":";
  out += state.converged ? "true" : "false";
  out += ",\"chord\":" + to_json(state.chord);
  out += ",\"support\":[";
  for (int i = 0; i < state.h.values.size(); ++i) {
    if (i) out += ',';
    out += format_double(state.h.values(i));
  }
  out += "],\"lagrange_constant\":" + format_double(scaled.lagrange_constant);
  out += ",\"rescale_factor\":" + format_double(scaled.rescale_factor);
  out += ",\"rescaled_iq\":" + to_json(scaled.iq);
  out += ",\"predicted_iq\":" + format_double(scaled.predicted_iq);
  out += ",\"rel_err\":" + format_double(scaled.rel_err);
  out += ",\"body\":" + to_json(scaled.body) + "}";
  emit(g, out);
  return state.converged ? 0 : 1;
}

int cmd_nonuniq(const GlobalOpts& g, const std::string& config_path) {
  const ExperimentConfig cfg = load_config(config_path, g);
  const NonuniquenessReport report = run_nonuniqueness(cfg);
  emit(g, to_json(report));
  if (!report.failed_stage.empty()) {
    std::fprintf(stderr, "pipeline failed at %s: %s\n", report.failed_stage.c_str(),
                 report.failure.c_str());
    return 1;
  }
  return 0;
}

int cmd_verify(const GlobalOpts& g, const std::string& level_name) {
  const VerifyLevel level = verify_level_from_name(level_name);
  const VerificationReport report = run_verification_suite(level, g.seed.value_or(0xC0FFEE));
  for (const auto& c : report.checks) {
    std::fprintf(stderr, "[%s] %-32s value %-12.4g limit %-10.4g (%.2fs)%s%s\n",
                 c.pass ? "PASS" : "FAIL", c.name.c_str(), c.value, c.limit, c.seconds,
                 c.detail.empty() ? "" : "  ", c.detail.c_str());
  }
  std::fprintf(stderr, "%zu checks, %s (%.1fs)\n", report.checks.size(),
               report.all_pass ? "all passed" : "FAILURES PRESENT", report.seconds);
  emit(g, to_json(report));
  return report.all_pass ? 0 : 1;
}

int cmd_export(const GlobalOpts& g, const std::string& in_path, const std::string& format) {
  const std::string text = read_text_file(in_path);
  const SweepResult sw = sweep_from_json(text);
  emit(g, format == "csv" ? sweep_csv(sw) : to_json(sw));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"chord-integral geometry toolkit"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the verb

  GlobalOpts g;
  std::uint64_t seed_raw = 0;
  int threads_raw = 0;
  auto* seed_opt = app.add_option("--seed", seed_raw, "Monte Carlo seed override");
  auto* threads_opt = app.add_option("--threads", threads_raw, "sampler thread count");
  app.add_option("--out", g.out, "output path (default: stdout)");

  // compute
  auto* compute = app.add_subcommand("compute", "one-off estimate on a stored body");
  std::string body_path, quantity = "chord-integral", method = "crofton-mc";
  double q = 2.5, p = -1.0;
  std::uint64_t samples = 1ull << 16;
  std::vector<double> z_raw;
  compute->add_option("--body", body_path, "body JSON file")->required();
  compute->add_option("--quantity", quantity,
                      "chord-integral | dual-quermass | chord-measure | lp-chord-measure");
  compute->add_option("--q", q, "integral order");
  compute->add_option("--p", p, "L_p exponent (lp-chord-measure)");
  compute->add_option("--method", method, "crofton-mc | boundary | radial-quadrature | riesz-mc");
  compute->add_option("--samples", samples, "Monte Carlo sample count");
  compute->add_option("--z", z_raw, "base point for dual-quermass");

  // classical-solve
  auto* classical = app.add_subcommand("classical-solve", "facet-area prescription solver");
  std::string cfg_path;
  double eps_override = 0.0;
  int rings_override = 0;
  bool stretch = false;
  classical->add_option("--config", cfg_path, "experiment config JSON");
  classical->add_option("--eps", eps_override, "density anisotropy override");
  classical->add_option("--rings", rings_override, "grid rings override");
  classical->add_flag("--stretch", stretch, "emit the stretched body instead of the report");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "chord-integral decay across the epsilon list");
  std::string sweep_cfg, sweep_format = "csv";
  sweep->add_option("--config", sweep_cfg, "experiment config JSON");
  sweep->add_option("--format", sweep_format, "csv | json");

  // variational-solve
  auto* variational = app.add_subcommand("variational-solve", "constrained maximization solver");
  std::string var_cfg, measure_path;
  bool uniform = false;
  variational->add_option("--config", var_cfg, "experiment config JSON");
  variational->add_option("--measure", measure_path, "prescription measure JSON");
  variational->add_flag("--uniform", uniform, "use the uniform prescription on the grid");

  // nonuniq
  auto* nonuniq = app.add_subcommand("nonuniq", "end-to-end two-solution experiment");
  std::string nu_cfg;
  nonuniq->add_option("--config", nu_cfg, "experiment config JSON");

  // verify
  auto* verify = app.add_subcommand("verify", "oracle and invariant suite");
  std::string level = "fast";
  verify->add_option("--level", level, "fast | full");

  // export
  auto* exporter = app.add_subcommand("export", "convert stored sweep results");
  std::string in_path, out_format = "csv";
  exporter->add_option("--in", in_path, "sweep result JSON file")->required();
  exporter->add_option("--format", out_format, "csv | json");

  CLI11_PARSE(app, argc, argv);
  if (*seed_opt) g.seed = seed_raw;
  if (*threads_opt) g.threads = threads_raw;

  try {
    if (*compute)
      return cmd_compute(g, body_path, quantity, q, p, method, samples, z_raw);
    if (*classical) return cmd_classical(g, cfg_path, eps_override, rings_override, stretch);
    if (*sweep) return cmd_sweep(g, sweep_cfg, sweep_format);
    if (*variational) return cmd_variational(g, var_cfg, measure_path, uniform);
    if (*nonuniq) return cmd_nonuniq(g, nu_cfg);
    if (*verify) return cmd_verify(g, level);
    if (*exporter) return cmd_export(g, in_path, out_format);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
