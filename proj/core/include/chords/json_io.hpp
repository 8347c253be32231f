#pragma once

#include <string>

#include "chords/body.hpp"
#include "chords/construction.hpp"
#include "chords/measure.hpp"
#include "chords/minkowski.hpp"
#include "chords/variational.hpp"

namespace chords {

// Writers emit ordered keys and floats at 17 significant digits, so equal
// inputs give byte-identical files. Non-finite values appear as the strings
// "inf" / "-inf" / "nan" (JSON has no numeric spelling for them).
std::string to_json(const Body& body);
std::string to_json(const DiscreteMeasure& m);
std::string to_json(const Estimate& e);
std::string to_json(const SolveReport& r);
std::string to_json(const SweepResult& s);

Body body_from_json(const std::string& text);
DiscreteMeasure measure_from_json(const std::string& text);
SweepResult sweep_from_json(const std::string& text);

// CSV with the fixed header
// epsilon,Iq,Iq_stderr,decay_bound,ratio,solver_residual; one row per sweep
// entry (failed entries keep their epsilon and carry nan columns).
std::string sweep_csv(const SweepResult& s);

// Least-squares log-log slope recomputed from CSV text; matches the sweep's
// reported slope exactly (same arithmetic).
double sweep_csv_slope(const std::string& csv);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// Shared numeric formatting (17 significant digits, stable).
std::string format_double(double v);

}  // namespace chords
