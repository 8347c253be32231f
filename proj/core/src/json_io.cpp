#include "chords/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "chords/errors.hpp"
#include "json.hpp"

namespace chords {

namespace {

using nlohmann::json;

Eigen::MatrixXd matrix_from(const json& j) {
  if (!j.is_array() || j.empty()) throw IoError("json: expected a nonempty array of rows");
  const int rows = static_cast<int>(j.size());
  const int cols = static_cast<int>(j.at(0).size());
  Eigen::MatrixXd m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const json& row = j.at(r);
    if (static_cast<int>(row.size()) != cols) throw IoError("json: ragged matrix");
    for (int c = 0; c < cols; ++c) m(r, c) = row.at(c).get<double>();
  }
  return m;
}

Eigen::VectorXd vector_from(const json& j) {
  if (!j.is_array()) throw IoError("json: expected an array");
  Eigen::VectorXd v(j.size());
  for (size_t i = 0; i < j.size(); ++i) v(static_cast<int>(i)) = j.at(i).get<double>();
  return v;
}

double number_from(const json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    throw IoError("json: unrecognized numeric token '" + s + "'");
  }
  return j.get<double>();
}

void append_num(std::string& out, double v) {
  if (std::isnan(v)) {
    out += "\"nan\"";
  } else if (std::isinf(v)) {
    out += v > 0 ? "\"inf\"" : "\"-inf\"";
  } else {
    out += format_double(v);
  }
}

void append_vector(std::string& out, const Eigen::VectorXd& v) {
  out += '[';
  for (int i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    append_num(out, v(i));
  }
  out += ']';
}

void append_matrix(std::string& out, const Eigen::MatrixXd& m) {
  out += '[';
  for (int r = 0; r < m.rows(); ++r) {
    if (r) out += ',';
    out += '[';
    for (int c = 0; c < m.cols(); ++c) {
      if (c) out += ',';
      append_num(out, m(r, c));
    }
    out += ']';
  }
  out += ']';
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string to_json(const Body& body) {
  std::string out = "{";
  switch (body.kind()) {
    case Body::Kind::hpolytope:
    case Body::Kind::vpolytope: {
      const PolytopeData& p = body.poly();
      out += "\"type\":\"hpolytope\",\"normals\":";
      append_matrix(out, p.normals);
      out += ",\"offsets\":";
      append_vector(out, p.offsets);
      break;
    }
    case Body::Kind::ellipsoid: {
      const EllipsoidData& e = body.ellipsoid_data();
      out += "\"type\":\"ellipsoid\",\"semi_axes\":";
      append_vector(out, e.semi_axes);
      out += ",\"rotation\":";
      append_matrix(out, e.rotation);
      out += ",\"center\":";
      append_vector(out, e.center);
      break;
    }
    case Body::Kind::ball: {
      const BallData& b = body.ball_data();
      out += "\"type\":\"ball\",\"radius\":";
      append_num(out, b.radius);
      out += ",\"center\":";
      append_vector(out, b.center);
      break;
    }
  }
  out += '}';
  return out;
}

Body body_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw IoError(std::string("json parse failure: ") + e.what());
  }
  const std::string type = j.at("type").get<std::string>();
  if (type == "hpolytope") {
    return Body::hpolytope(matrix_from(j.at("normals")), vector_from(j.at("offsets")));
  }
  if (type == "vpolytope") {
    return Body::vpolytope(matrix_from(j.at("vertices")));
  }
  if (type == "ellipsoid") {
    return Body::ellipsoid(vector_from(j.at("semi_axes")), matrix_from(j.at("rotation")),
                           vector_from(j.at("center")));
  }
  if (type == "ball") {
    return Body::ball(j.at("radius").get<double>(), vector_from(j.at("center")));
  }
  throw IoError("json: unknown body type '" + type + "'");
}

std::string to_json(const DiscreteMeasure& m) {
  std::string out = "{\"directions\":";
  append_matrix(out, m.directions);
  out += ",\"weights\":";
  append_vector(out, m.weights);
  out += '}';
  return out;
}

DiscreteMeasure measure_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw IoError(std::string("json parse failure: ") + e.what());
  }
  DiscreteMeasure m;
  m.directions = matrix_from(j.at("directions"));
  m.weights = vector_from(j.at("weights"));
  m.validate();
  return m;
}

std::string to_json(const Estimate& e) {
  std::string out = "{\"value\":";
  append_num(out, e.value);
  out += ",\"std_error\":";
  append_num(out, e.std_error);
  out += ",\"n_samples\":" + std::to_string(e.n_samples);
  out += ",\"seed\":" + std::to_string(e.seed);
  out += ",\"method\":\"";
  out += method_name(e.method);
  out += "\"}";
  return out;
}

std::string to_json(const SolveReport& r) {
  std::string out = "{\"body\":" + to_json(r.body);
  out += ",\"iterations\":" + std::to_string(r.iterations);
  out += ",\"residual\":";
  append_num(out, r.residual);
  out += ",\"objective_trace\":[";
  for (size_t i = 0; i < r.objective_trace.size(); ++i) {
    if (i) out += ',';
    append_num(out, r.objective_trace[i]);
  }
  out += "],\"wall_time\":";
  append_num(out, r.wall_time);
  out += '}';
  return out;
}

std::string to_json(const SweepResult& s) {
  std::string out = "{\"records\":[";
  for (size_t i = 0; i < s.records.size(); ++i) {
    const SweepRecord& r = s.records[i];
    if (i) out += ',';
    out += "{\"epsilon\":";
    append_num(out, r.epsilon);
    out += ",\"iq\":" + to_json(r.iq);
    out += ",\"decay_bound\":";
    append_num(out, r.decay_bound);
    out += ",\"ratio\":";
    append_num(out, r.ratio);
    out += ",\"solver_residual\":";
    append_num(out, r.solver_residual);
    out += ",\"ok\":";
    out += r.ok ? "true" : "false";
    out += ",\"error\":\"" + r.error + "\"}";
  }
  out += "],\"fitted_slope\":";
  append_num(out, s.fitted_slope);
  out += '}';
  return out;
}

SweepResult sweep_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw IoError(std::string("json parse failure: ") + e.what());
  }
  SweepResult s;
  for (const json& rj : j.at("records")) {
    SweepRecord r;
    r.epsilon = number_from(rj.at("epsilon"));
    const json& ej = rj.at("iq");
    r.iq.value = number_from(ej.at("value"));
    r.iq.std_error = number_from(ej.at("std_error"));
    r.iq.n_samples = ej.at("n_samples").get<std::uint64_t>();
    r.iq.seed = ej.at("seed").get<std::uint64_t>();
    r.iq.method = method_from_name(ej.at("method").get<std::string>());
    r.decay_bound = number_from(rj.at("decay_bound"));
    r.ratio = number_from(rj.at("ratio"));
    r.solver_residual = number_from(rj.at("solver_residual"));
    r.ok = rj.at("ok").get<bool>();
    r.error = rj.at("error").get<std::string>();
    s.records.push_back(r);
  }
  s.fitted_slope = number_from(j.at("fitted_slope"));
  return s;
}

std::string sweep_csv(const SweepResult& s) {
  std::string out = "epsilon,Iq,Iq_stderr,decay_bound,ratio,solver_residual\n";
  for (const SweepRecord& r : s.records) {
    out += format_double(r.epsilon);
    out += ',';
    out += r.ok ? format_double(r.iq.value) : "nan";
    out += ',';
    out += r.ok ? format_double(r.iq.std_error) : "nan";
    out += ',';
    out += format_double(r.decay_bound);
    out += ',';
    out += r.ok ? format_double(r.ratio) : "nan";
    out += ',';
    out += r.ok ? format_double(r.solver_residual) : "nan";
    out += '\n';
  }
  return out;
}

double sweep_csv_slope(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line)) throw IoError("sweep csv: empty");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    std::vector<double> vals;
    while (std::getline(row, cell, ',')) {
      vals.push_back(cell == "nan" ? std::numeric_limits<double>::quiet_NaN()
                                   : std::stod(cell));
    }
    if (vals.size() != 6 || std::isnan(vals[1]) || !(vals[1] > 0.0)) continue;
    const double lx = std::log(vals[0]), ly = std::log(vals[1]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++cnt;
  }
  return cnt >= 2 ? (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx) : 0.0;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << content;
  if (!out) throw IoError("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace chords
