#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chords/body.hpp"
#include "chords/construction.hpp"
#include "chords/measure.hpp"
#include "chords/params.hpp"
#include "chords/variational.hpp"

namespace chords {

// Experiment configuration. JSON loading is strict: unknown keys anywhere
// are rejected, so a typo in an exponent name cannot silently revert to a
// default.
struct ExperimentConfig {
  ProblemParams params;
  std::vector<double> eps_list;  // descending, within (0, 1/2]
  int rings = 64;
  Resolution res;
  LineSamplerConfig mc;
  std::uint64_t seed = 0xC0FFEE;
  std::string out_path;

  static ExperimentConfig from_json(const std::string& text);
  std::string to_json() const;
  void validate() const;
};

struct NonuniquenessReport {
  Body body_constructed;   // stretched classical solution
  Body body_variational;   // rescaled maximizer
  Estimate iq_constructed;
  Estimate iq_variational;
  double residual_constructed = 0.0;  // both against the same induced density
  double residual_variational = 0.0;
  double iq_ratio = 0.0;     // variational / constructed
  double support_gap = 0.0;  // max relative support difference, raw scale
  double threshold_ratio = 4.0;
  double threshold_gap = 0.25;
  bool distinct = false;
  std::string failed_stage;  // empty when the whole pipeline ran
  std::string failure;       // error text when failed_stage is set
  double wall_time = 0.0;
};

// End-to-end pipeline: classical solve for the weighted density, stretch,
// evaluate the induced density, solve the variational problem against it,
// rescale, and check both bodies against the same density. A stage failure
// produces a partial report naming the stage.
NonuniquenessReport run_nonuniqueness(const ExperimentConfig& config);

std::string to_json(const NonuniquenessReport& r);

}  // namespace chords
