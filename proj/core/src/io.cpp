#include "beesim/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "beesim/calibration.hpp"

#include "json.hpp"

namespace beesim {

std::string genome_to_json(const Genome& g) {
  nlohmann::ordered_json j;
  j["schema"] = "beesim-genome/1";
  j["tb1_to_cpu1"] = g.tb1_to_cpu1;
  j["cpu4_to_cpu1_exc"] = g.cpu4_to_cpu1_exc;
  j["cpu4_to_cpu1_inh"] = g.cpu4_to_cpu1_inh;
  j["cpu1_to_m"] = g.cpu1_to_m;
  return j.dump(2) + "\n";
}

Genome genome_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  if (j.value("schema", "") != "beesim-genome/1")
    throw std::runtime_error("genome json: unknown schema");
  Genome g;
  j.at("tb1_to_cpu1").get_to(g.tb1_to_cpu1);
  j.at("cpu4_to_cpu1_exc").get_to(g.cpu4_to_cpu1_exc);
  j.at("cpu4_to_cpu1_inh").get_to(g.cpu4_to_cpu1_inh);
  j.at("cpu1_to_m").get_to(g.cpu1_to_m);
  return g;
}

std::string calibration_to_json(const CalibrationTable& table) {
  nlohmann::ordered_json j;
  j["schema"] = "beesim-calibration/1";
  j["noise_cv"] = table.noise_cv;
  j["noise_seed"] = table.noise_seed;
  auto neurons = nlohmann::ordered_json::array();
  for (int i = 0; i < kNumNeurons; ++i) {
    nlohmann::ordered_json n;
    n["id"] = i;
    n["population"] = population_of(i);
    n["gain_mult"] = table.noise[i].gain_mult;
    n["threshold_add"] = table.noise[i].threshold_add;
    n["gain_correction"] = table.fit[i].gain_correction;
    n["offset_correction"] = table.fit[i].offset_correction;
    n["fit_residual"] = table.fit[i].fit_residual;
    n["calibrated"] = table.fit[i].calibrated;
    neurons.push_back(std::move(n));
  }
  j["neurons"] = std::move(neurons);
  return j.dump(2) + "\n";
}

CalibrationTable calibration_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  if (j.value("schema", "") != "beesim-calibration/1")
    throw std::runtime_error("calibration json: unknown schema");
  CalibrationTable table;
  table.noise_cv = j.at("noise_cv").get<double>();
  table.noise_seed = j.at("noise_seed").get<std::uint64_t>();
  for (const auto& n : j.at("neurons")) {
    const int id = n.at("id").get<int>();
    if (id < 0 || id >= kNumNeurons)
      throw std::runtime_error("calibration json: bad neuron id");
    table.noise[id].gain_mult = n.at("gain_mult").get<double>();
    table.noise[id].threshold_add = n.at("threshold_add").get<double>();
    table.fit[id].gain_correction = n.at("gain_correction").get<double>();
    table.fit[id].offset_correction = n.at("offset_correction").get<double>();
    table.fit[id].fit_residual = n.at("fit_residual").get<double>();
    table.fit[id].calibrated = n.at("calibrated").get<bool>();
  }
  return table;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace beesim
