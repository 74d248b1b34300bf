#include "beesim/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace beesim {

std::string to_string(SimMode mode) {
  return mode == SimMode::kRate ? "rate" : "spiking";
}

std::string to_string(FidelityMode mode) {
  return mode == FidelityMode::kFullPrecision ? "full" : "hardware16";
}

int ScheduleConfig::slots_per_update() const {
  return static_cast<int>(std::lround(dt_update_ms / dt_spike_slot_ms));
}

int ScheduleConfig::neuron_steps_per_slot() const {
  return static_cast<int>(std::lround(dt_spike_slot_ms / dt_neuron_ms));
}

namespace {
bool divides(double small, double big) {
  const double q = big / small;
  return std::abs(q - std::lround(q)) < 1e-9 && std::lround(q) >= 1;
}
}  // namespace

void ScheduleConfig::validate() const {
  if (!(dt_update_ms > 0 && dt_spike_slot_ms > 0 && dt_neuron_ms > 0))
    throw std::invalid_argument("ScheduleConfig: time steps must be > 0");
  if (!divides(dt_spike_slot_ms, dt_update_ms))
    throw std::invalid_argument(
        "ScheduleConfig: dt_spike_slot must divide dt_update");
  if (!divides(dt_neuron_ms, dt_spike_slot_ms))
    throw std::invalid_argument(
        "ScheduleConfig: dt_neuron must divide dt_spike_slot");
  if (record_stride < 1)
    throw std::invalid_argument("ScheduleConfig: record_stride must be >= 1");
  if (max_records < 1)
    throw std::invalid_argument("ScheduleConfig: max_records must be >= 1");
}

long JourneyConfig::n_updates() const {
  return std::lround(t_stop_s * 1000.0 / schedule.dt_update_ms);
}

long JourneyConfig::n_return_updates() const {
  return std::lround(t_return_s * 1000.0 / schedule.dt_update_ms);
}

void JourneyConfig::validate() const {
  world.validate();
  schedule.validate();
  if (!(t_return_s > 0.0 && t_return_s < t_stop_s))
    throw std::invalid_argument("JourneyConfig: need 0 < t_return < t_stop");
  const double updates = t_stop_s * 1000.0 / schedule.dt_update_ms;
  if (std::abs(updates - std::lround(updates)) > 1e-9)
    throw std::invalid_argument(
        "JourneyConfig: t_stop must be an integral number of updates");
  if (!(h > 0.0)) throw std::invalid_argument("JourneyConfig: h must be > 0");
  if (!(k >= 0.0)) throw std::invalid_argument("JourneyConfig: k must be >= 0");
  if (noise.cv < 0.0)
    throw std::invalid_argument("JourneyConfig: noise cv must be >= 0");
  if (es.population < 2)
    throw std::invalid_argument("JourneyConfig: es population must be >= 2");
  if (es.generations < 1 || es.runs_per_eval < 1)
    throw std::invalid_argument("JourneyConfig: bad evolution settings");
  if (!(es.sigma > 0.0))
    throw std::invalid_argument("JourneyConfig: es sigma must be > 0");
}

// --- config text format ---------------------------------------------------

namespace {

struct Field {
  std::function<void(JourneyConfig&, const std::string&)> set;
  std::function<std::string(const JourneyConfig&)> get;
};

double parse_double(const std::string& v) {
  size_t pos = 0;
  const double d = std::stod(v, &pos);
  if (pos != v.size()) throw std::runtime_error("trailing characters");
  return d;
}

std::uint64_t parse_u64(const std::string& v) {
  size_t pos = 0;
  const std::uint64_t u = std::stoull(v, &pos);
  if (pos != v.size()) throw std::runtime_error("trailing characters");
  return u;
}

int parse_int(const std::string& v) {
  size_t pos = 0;
  const int i = std::stoi(v, &pos);
  if (pos != v.size()) throw std::runtime_error("trailing characters");
  return i;
}

std::string fmt(double d) {
  std::ostringstream os;
  os.precision(17);
  os << d;
  return os.str();
}

Field dbl(double JourneyConfig::* m) {
  return {[m](JourneyConfig& c, const std::string& v) { c.*m = parse_double(v); },
          [m](const JourneyConfig& c) { return fmt(c.*m); }};
}

template <typename Sub, typename T>
Field field(Sub JourneyConfig::* sub, T Sub::* m) {
  return {[sub, m](JourneyConfig& c, const std::string& v) {
            if constexpr (std::is_same_v<T, double>)
              (c.*sub).*m = parse_double(v);
            else if constexpr (std::is_same_v<T, std::uint64_t>)
              (c.*sub).*m = parse_u64(v);
            else
              (c.*sub).*m = parse_int(v);
          },
          [sub, m](const JourneyConfig& c) {
            if constexpr (std::is_same_v<T, double>)
              return fmt((c.*sub).*m);
            else
              return std::to_string((c.*sub).*m);
          }};
}

const std::map<std::string, Field>& field_table() {
  static const std::map<std::string, Field> table = {
      {"journey.t_stop_s", dbl(&JourneyConfig::t_stop_s)},
      {"journey.t_return_s", dbl(&JourneyConfig::t_return_s)},
      {"journey.h", dbl(&JourneyConfig::h)},
      {"journey.k", dbl(&JourneyConfig::k)},
      {"journey.seed",
       {[](JourneyConfig& c, const std::string& v) { c.seed = parse_u64(v); },
        [](const JourneyConfig& c) { return std::to_string(c.seed); }}},
      {"journey.mode",
       {[](JourneyConfig& c, const std::string& v) {
          if (v == "rate")
            c.mode = SimMode::kRate;
          else if (v == "spiking")
            c.mode = SimMode::kSpiking;
          else
            throw std::runtime_error("mode must be rate|spiking");
        },
        [](const JourneyConfig& c) { return to_string(c.mode); }}},
      {"journey.fidelity",
       {[](JourneyConfig& c, const std::string& v) {
          if (v == "full")
            c.fidelity = FidelityMode::kFullPrecision;
          else if (v == "hardware16")
            c.fidelity = FidelityMode::kHardware16Bit;
          else
            throw std::runtime_error("fidelity must be full|hardware16");
        },
        [](const JourneyConfig& c) { return to_string(c.fidelity); }}},
      {"world.rho", field(&JourneyConfig::world, &WorldParams::rho)},
      {"world.phi_tn", field(&JourneyConfig::world, &WorldParams::phi_tn)},
      {"world.mu", field(&JourneyConfig::world, &WorldParams::mu)},
      {"world.v_max", field(&JourneyConfig::world, &WorldParams::v_max)},
      {"world.sigma_walk",
       field(&JourneyConfig::world, &WorldParams::sigma_walk)},
      {"world.outbound_speed",
       field(&JourneyConfig::world, &WorldParams::outbound_speed)},
      {"schedule.dt_update_ms",
       field(&JourneyConfig::schedule, &ScheduleConfig::dt_update_ms)},
      {"schedule.dt_spike_slot_ms",
       field(&JourneyConfig::schedule, &ScheduleConfig::dt_spike_slot_ms)},
      {"schedule.dt_neuron_ms",
       field(&JourneyConfig::schedule, &ScheduleConfig::dt_neuron_ms)},
      {"schedule.record_stride",
       field(&JourneyConfig::schedule, &ScheduleConfig::record_stride)},
      {"schedule.max_records",
       field(&JourneyConfig::schedule, &ScheduleConfig::max_records)},
      {"noise.cv", field(&JourneyConfig::noise, &NoiseConfig::cv)},
      {"noise.seed", field(&JourneyConfig::noise, &NoiseConfig::seed)},
      {"evolution.population",
       field(&JourneyConfig::es, &EsConfig::population)},
      {"evolution.generations",
       field(&JourneyConfig::es, &EsConfig::generations)},
      {"evolution.sigma", field(&JourneyConfig::es, &EsConfig::sigma)},
      {"evolution.runs_per_eval",
       field(&JourneyConfig::es, &EsConfig::runs_per_eval)},
      {"evolution.snapshot_every",
       field(&JourneyConfig::es, &EsConfig::snapshot_every)},
  };
  return table;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

JourneyConfig JourneyConfig::load(std::istream& in) {
  JourneyConfig cfg;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::runtime_error("config line " + std::to_string(lineno) +
                                 ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line " + std::to_string(lineno) +
                               ": expected key = value");
    const std::string key = section + "." + trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = field_table().find(key);
    if (it == field_table().end())
      throw std::runtime_error("config line " + std::to_string(lineno) +
                               ": unknown key '" + key + "'");
    try {
      it->second.set(cfg, value);
    } catch (const std::exception& e) {
      throw std::runtime_error("config line " + std::to_string(lineno) +
                               ": bad value for '" + key + "': " + e.what());
    }
  }
  cfg.validate();
  return cfg;
}

JourneyConfig JourneyConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  return load(in);
}

void JourneyConfig::save(std::ostream& out) const {
  std::string last_section;
  for (const auto& [key, fld] : field_table()) {
    const auto dot = key.find('.');
    const std::string section = key.substr(0, dot);
    if (section != last_section) {
      if (!last_section.empty()) out << "\n";
      out << "[" << section << "]\n";
      last_section = section;
    }
    out << key.substr(dot + 1) << " = " << fld.get(*this) << "\n";
  }
}

}  // namespace beesim
