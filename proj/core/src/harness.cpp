#include "chords/harness.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <memory>
#include <set>

#include "chords/errors.hpp"
#include "chords/json_io.hpp"
#include "chords/minkowski.hpp"
#include "json.hpp"

namespace chords {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) {
      throw ConfigError("config: unknown key '" + it.key() + "' in " + where);
    }
  }
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config parse failure: ") + e.what());
  }
  reject_unknown_keys(
      j, {"params", "eps_list", "rings", "resolution", "mc", "seed", "out_path"}, "root");

  ExperimentConfig cfg;
  if (j.contains("params")) {
    const json& pj = j.at("params");
    reject_unknown_keys(pj, {"n", "p", "q", "alpha", "beta", "gamma", "epsilon"}, "params");
    if (pj.contains("n")) cfg.params.n = pj.at("n").get<int>();
    if (pj.contains("p")) cfg.params.p = pj.at("p").get<double>();
    if (pj.contains("q")) cfg.params.q = pj.at("q").get<double>();
    if (pj.contains("alpha")) cfg.params.alpha = pj.at("alpha").get<double>();
    if (pj.contains("beta")) cfg.params.beta = pj.at("beta").get<double>();
    if (pj.contains("gamma")) cfg.params.gamma = pj.at("gamma").get<double>();
    if (pj.contains("epsilon")) cfg.params.epsilon = pj.at("epsilon").get<double>();
  }
  if (j.contains("eps_list")) {
    for (const json& e : j.at("eps_list")) cfg.eps_list.push_back(e.get<double>());
  }
  if (j.contains("rings")) cfg.rings = j.at("rings").get<int>();
  if (j.contains("resolution")) {
    const json& rj = j.at("resolution");
    reject_unknown_keys(rj, {"facet_nodes", "arc_nodes", "rings"}, "resolution");
    if (rj.contains("facet_nodes")) cfg.res.facet_nodes = rj.at("facet_nodes").get<int>();
    if (rj.contains("arc_nodes")) cfg.res.arc_nodes = rj.at("arc_nodes").get<int>();
    if (rj.contains("rings")) cfg.res.rings = rj.at("rings").get<int>();
  }
  if (j.contains("mc")) {
    const json& mj = j.at("mc");
    reject_unknown_keys(mj, {"n_samples", "seed", "threads", "bounding_radius"}, "mc");
    if (mj.contains("n_samples")) cfg.mc.n_samples = mj.at("n_samples").get<std::uint64_t>();
    if (mj.contains("seed")) cfg.mc.seed = mj.at("seed").get<std::uint64_t>();
    if (mj.contains("threads")) cfg.mc.threads = mj.at("threads").get<int>();
    if (mj.contains("bounding_radius")) {
      cfg.mc.bounding_radius = mj.at("bounding_radius").get<double>();
    }
  }
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("out_path")) cfg.out_path = j.at("out_path").get<std::string>();
  cfg.validate();
  return cfg;
}

std::string ExperimentConfig::to_json() const {
  std::string out = "{\"params\":{";
  out += "\"n\":" + std::to_string(params.n);
  out += ",\"p\":" + format_double(params.p);
  out += ",\"q\":" + format_double(params.q);
  out += ",\"alpha\":" + format_double(params.alpha);
  out += ",\"beta\":" + format_double(params.beta);
  out += ",\"gamma\":" + format_double(params.gamma);
  out += ",\"epsilon\":" + format_double(params.epsilon);
  out += "},\"eps_list\":[";
  for (size_t i = 0; i < eps_list.size(); ++i) {
    if (i) out += ',';
    out += format_double(eps_list[i]);
  }
  out += "],\"rings\":" + std::to_string(rings);
  out += ",\"resolution\":{\"facet_nodes\":" + std::to_string(res.facet_nodes);
  out += ",\"arc_nodes\":" + std::to_string(res.arc_nodes);
  out += ",\"rings\":" + std::to_string(res.rings);
  out += "},\"mc\":{\"n_samples\":" + std::to_string(mc.n_samples);
  out += ",\"seed\":" + std::to_string(mc.seed);
  out += ",\"threads\":" + std::to_string(mc.threads);
  out += ",\"bounding_radius\":" + format_double(mc.bounding_radius);
  out += "},\"seed\":" + std::to_string(seed);
  out += ",\"out_path\":\"" + out_path + "\"}";
  return out;
}

void ExperimentConfig::validate() const {
  params.validate();
  for (size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] > 0.0) || !(eps_list[i] <= 0.5)) {
      throw ConfigError("config: eps_list entries must lie in (0, 1/2]");
    }
    if (i && !(eps_list[i - 1] > eps_list[i])) {
      throw ConfigError("config: eps_list must be strictly descending");
    }
  }
  if (rings < 2 || rings % 2) throw ConfigError("config: rings must be even and >= 2");
}

NonuniquenessReport run_nonuniqueness(const ExperimentConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  NonuniquenessReport rep;
  std::string stage = "validate";
  try {
    ProblemParams params = config.params;
    params.validate_for_construction();

    stage = "classical-solve";
    const SphericalGrid grid_val = SphericalGrid::zonal_rings(params.n, config.rings);
    auto grid = std::make_shared<const SphericalGrid>(grid_val);
    const ClassicalProblem classical = discretize_density(
        [&](const Eigen::VectorXd& u) { return construction_density(u, params); }, grid_val);
    const SolveReport solve = solve_classical_minkowski(classical);

    stage = "stretch";
    rep.body_constructed = build_stretched_solution(solve.body, params);
    rep.iq_constructed = chord_integral_boundary(rep.body_constructed, params.q, config.res);

    stage = "induced-density";
    auto density = [&](const Eigen::VectorXd& x) {
      return induced_density_eval(x, solve.body, params, config.res);
    };
    DiscreteMeasure mu;
    mu.directions = grid->directions;
    mu.weights = Eigen::VectorXd(grid->size());
    for (int i = 0; i < grid->size(); ++i) {
      mu.weights(i) = density(grid->directions.row(i)) * grid->weights(i);
    }
    for (int i = 0; i < grid->size(); ++i) {
      const int j = grid->antipode[i];
      if (j > i) {
        const double avg = 0.5 * (mu.weights(i) + mu.weights(j));
        mu.weights(i) = avg;
        mu.weights(j) = avg;
      }
    }

    stage = "variational-solve";
    VariationalOptions opts;
    opts.res = config.res;
    const VariationalState state = maximize(mu, params, grid, opts);
    if (state.hit_box) {
      throw ConvergenceError("variational iterate left the solver box");
    }
    if (!state.converged) {
      throw ConvergenceError("variational ascent did not reach the stationarity tolerance");
    }
    const RescaleResult rescaled = euler_lagrange_rescale(state, mu, params, config.res);
    rep.body_variational = rescaled.body;
    rep.iq_variational = rescaled.iq;

    stage = "residuals";
    rep.residual_variational =
        stationarity_residual(rep.body_variational, mu, params, config.res);
    // The constructed body's facets sit at the images of the grid directions
    // under the stretch's normal map, so the density is binned by pushing the
    // grid cells through that map; bisector cells around the stretched
    // normals would misplace mass where the map bends the fan sharply.
    const DiscreteMeasure mu_facets = pushforward_density(*grid, params.epsilon, density);
    rep.residual_constructed =
        stationarity_residual(rep.body_constructed, mu_facets, params, config.res);

    stage = "report";
    rep.iq_ratio = rep.iq_variational.value / rep.iq_constructed.value;
    double gap = 0.0;
    for (int i = 0; i < grid->size(); ++i) {
      const Eigen::VectorXd u = grid->directions.row(i);
      const double ha = support_eval(rep.body_constructed, u);
      const double hb = support_eval(rep.body_variational, u);
      gap = std::max(gap, std::abs(ha - hb) / std::max(ha, hb));
    }
    rep.support_gap = gap;
    rep.distinct = rep.iq_ratio >= rep.threshold_ratio && rep.support_gap >= rep.threshold_gap;
  } catch (const std::exception& e) {
    rep.failed_stage = stage;
    rep.failure = e.what();
  }
  rep.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

std::string to_json(const NonuniquenessReport& r) {
  std::string out = "{\"body_constructed\":";
  out += r.body_constructed.dim() ? to_json(r.body_constructed) : "null";
  out += ",\"body_variational\":";
  out += r.body_variational.dim() ? to_json(r.body_variational) : "null";
  out += ",\"iq_constructed\":" + to_json(r.iq_constructed);
  out += ",\"iq_variational\":" + to_json(r.iq_variational);
  auto num = [](double v) {
    if (std::isnan(v)) return std::string("\"nan\"");
    if (std::isinf(v)) return std::string(v > 0 ? "\"inf\"" : "\"-inf\"");
    return format_double(v);
  };
  out += ",\"residual_constructed\":" + num(r.residual_constructed);
  out += ",\"residual_variational\":" + num(r.residual_variational);
  out += ",\"iq_ratio\":" + num(r.iq_ratio);
  out += ",\"support_gap\":" + num(r.support_gap);
  out += ",\"threshold_ratio\":" + num(r.threshold_ratio);
  out += ",\"threshold_gap\":" + num(r.threshold_gap);
  out += ",\"distinct\":";
  out += r.distinct ? "true" : "false";
  // wall_time stays out of the serialized report so identical runs produce
  // byte-identical files.
  out += ",\"failed_stage\":\"" + r.failed_stage + "\"";
  out += ",\"failure\":\"" + r.failure + "\"";
  out += '}';
  return out;
}

}  // namespace chords
