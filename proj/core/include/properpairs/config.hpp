#pragma once

#include <cstdint>
#include <string>

namespace properpairs {

/// Run configuration: tolerances, budgets, seed, output. Loaded from a flat
/// key=value file (PROPER_PAIRS_CONFIG), then overridden by CLI flags.
struct RunConfig {
  double tolAlg = 1e-9;
  double tolGeo = 1e-6;
  double resTol = 1e-6;
  double ballR = 10.0;
  double divMin = 1e6;
  int tExpMax = 20;
  int ciSamples = 200;
  int multistarts = 6;
  int maxIters = 140;
  uint64_t seed = 20250809;
  std::string format = "text";  // text | csv | json
  std::string out;

  void applyKeyValue(const std::string& key, const std::string& value);
  void loadFile(const std::string& path);
  /// Reads PROPER_PAIRS_CONFIG when set.
  static RunConfig fromEnvironment();
  void validate() const;  // throws on nonpositive tolerances
};

}  // namespace properpairs
