#include "properpairs/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace properpairs {

void RunConfig::applyKeyValue(const std::string& key, const std::string& value) {
  auto d = [&] { return std::stod(value); };
  auto i = [&] { return std::stoi(value); };
  if (key == "tol_alg") tolAlg = d();
  else if (key == "tol_geo") tolGeo = d();
  else if (key == "res_tol") resTol = d();
  else if (key == "ball_r") ballR = d();
  else if (key == "div_min") divMin = d();
  else if (key == "t_exp_max") tExpMax = i();
  else if (key == "ci_samples") ciSamples = i();
  else if (key == "multistarts") multistarts = i();
  else if (key == "max_iters") maxIters = i();
  else if (key == "seed") seed = std::stoull(value);
  else if (key == "format") format = value;
  else if (key == "out") out = value;
  else throw std::invalid_argument("unknown config key: " + key);
}

void RunConfig::loadFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!key.empty()) applyKeyValue(key, value);
  }
}

RunConfig RunConfig::fromEnvironment() {
  RunConfig cfg;
  if (const char* path = std::getenv("PROPER_PAIRS_CONFIG")) cfg.loadFile(path);
  return cfg;
}

void RunConfig::validate() const {
  if (tolAlg <= 0 || tolGeo <= 0 || resTol <= 0 || ballR <= 0 || divMin <= 0)
    throw std::invalid_argument("config: tolerance fields must be strictly positive");
  if (format != "text" && format != "csv" && format != "json")
    throw std::invalid_argument("config: format must be text, csv or json");
}

}  // namespace properpairs
