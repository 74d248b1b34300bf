#include "beesim/trajectory.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace beesim {

std::string to_string(Phase phase) {
  switch (phase) {
    case Phase::kOutbound: return "outbound";
    case Phase::kReturn: return "return";
    case Phase::kLooping: return "looping";
  }
  return "?";
}

Phase phase_from_string(const std::string& s) {
  if (s == "outbound") return Phase::kOutbound;
  if (s == "return") return Phase::kReturn;
  if (s == "looping") return Phase::kLooping;
  throw std::runtime_error("unknown phase label: " + s);
}

Phase phase_of_update(long update_index, const JourneyConfig& config) {
  const long n_ret = config.n_return_updates();
  if (update_index < n_ret) return Phase::kOutbound;
  if (update_index < 2 * n_ret) return Phase::kReturn;
  return Phase::kLooping;
}

PositionRecorder::PositionRecorder(FidelityMode mode, int max_records)
    : mode_(mode), max_records_(max_records) {}

namespace {
double clamp_int16(double v, bool& clamped) {
  // round half away from zero, then saturate like the on-chip int16 store
  const double r = std::round(v);
  if (r > 32767.0) { clamped = true; return 32767.0; }
  if (r < -32768.0) { clamped = true; return -32768.0; }
  return r;
}
}  // namespace

bool PositionRecorder::record(Trajectory& trajectory,
                              const TrajectorySample& sample) {
  if (mode_ == FidelityMode::kFullPrecision) {
    trajectory.samples.push_back(sample);
    return true;
  }
  if (static_cast<int>(trajectory.samples.size()) >= max_records_) {
    trajectory.capacity_flag = true;
    return false;
  }
  TrajectorySample s = sample;
  bool clamped = false;
  s.x = clamp_int16(s.x, clamped);
  s.y = clamp_int16(s.y, clamped);
  if (clamped) trajectory.overflow_flag = true;
  trajectory.samples.push_back(s);
  return true;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory) {
  out << "step,t_bio_ms,x,y,phi,phase\n";
  char buf[256];
  for (const auto& s : trajectory.samples) {
    std::snprintf(buf, sizeof(buf), "%ld,%.17g,%.17g,%.17g,%.17g,%s\n", s.step,
                  s.t_ms, s.x, s.y, s.phi, to_string(s.phase).c_str());
    out << buf;
  }
}

namespace {
double parse_field(const std::string& line, size_t& pos, int lineno) {
  const size_t comma = line.find(',', pos);
  const size_t end = comma == std::string::npos ? line.size() : comma;
  double value = 0.0;
  const auto res =
      std::from_chars(line.data() + pos, line.data() + end, value);
  if (res.ec != std::errc() || res.ptr != line.data() + end)
    throw std::runtime_error("trajectory csv line " + std::to_string(lineno) +
                             ": bad number");
  pos = end + (comma == std::string::npos ? 0 : 1);
  return value;
}
}  // namespace

Trajectory read_trajectory_csv(std::istream& in) {
  Trajectory t;
  std::string line;
  if (!std::getline(in, line) || line.rfind("step,", 0) != 0)
    throw std::runtime_error("trajectory csv: missing header");
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    TrajectorySample s;
    size_t pos = 0;
    s.step = static_cast<long>(parse_field(line, pos, lineno));
    s.t_ms = parse_field(line, pos, lineno);
    s.x = parse_field(line, pos, lineno);
    s.y = parse_field(line, pos, lineno);
    s.phi = parse_field(line, pos, lineno);
    s.phase = phase_from_string(line.substr(pos));
    t.samples.push_back(s);
  }
  return t;
}

}  // namespace beesim
