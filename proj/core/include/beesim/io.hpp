#pragma once

#include <string>

#include "beesim/genome.hpp"

namespace beesim {

// Schema-tagged JSON documents for the file interfaces.
std::string genome_to_json(const Genome& genome);
Genome genome_from_json(const std::string& text);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace beesim
