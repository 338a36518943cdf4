#pragma once

#include "properpairs/catalog.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace properpairs {

// ---------------------------------------------------------------------------
// Empirical asymptotic comparators for real sequences.
// ---------------------------------------------------------------------------

enum class SeqRelation {
  LesssimPlus,   // a_n - b_n bounded above on the tail
  AsympPlus,     // both additive bounds
  LesssimTimes,  // a_n / b_n bounded above on the tail
  AsympTimes,    // both multiplicative bounds
  GnsimTimes,    // a_n / b_n tends to infinity
};

enum class SeqDecision { True, False, Indeterminate };

struct AsymptoticSample {
  int n0 = 8;
  int n1 = 4096;
  std::function<double(double)> value;
};

/// Empirical tail evaluation with a stability check across two window sizes.
/// Unstable decisions are reported as Indeterminate, never guessed.
SeqDecision compareAsymptotic(const AsymptoticSample& a, const AsymptoticSample& b,
                              SeqRelation rel);

// ---------------------------------------------------------------------------
// Non-properness witness search.
// ---------------------------------------------------------------------------

struct WitnessBudget {
  int tExpMax = 20;      // divergence grid 2^0 .. 2^tExpMax
  double ballR = 10.0;   // conjugator norm bound
  double resTol = 1e-6;  // acceptance residual
  double divMin = 1e6;   // required divergence at the largest grid point
  int multistarts = 6;
  int maxIters = 140;
  uint64_t seed = 20250809;
};

struct WitnessPoint {
  double t = 0.0;  // divergence target
  AffineElement h, s, sPrime;
  double residual = 0.0;
  double divergence = 0.0;
  bool accepted = false;
};

struct WitnessCertificate {
  std::string pairL, pairH;
  uint64_t seed = 0;
  std::vector<WitnessPoint> points;
  bool accepted = false;
  double bestResidual = 0.0;
  std::string summary;
};

/// Searches for bounded conjugators carrying a divergent sequence of H into L.
/// An accepted certificate is numeric evidence that the pair is not proper.
WitnessCertificate searchWitness(const SubgroupSpec& l, const SubgroupSpec& h,
                                 const WitnessBudget& budget = {});

/// Witness search against a caller-supplied probe set instead of a catalog
/// subgroup: `probe` maps a real parameter to an element of the set.
WitnessCertificate searchWitnessAgainstSet(const SubgroupSpec& l,
                                           const std::function<AffineElement(double)>& probe,
                                           const std::string& probeName,
                                           const WitnessBudget& budget = {});

/// True when the generator spans literally share a noncompact one-parameter
/// subgroup; such pairs are never proper and admit identity-conjugator
/// certificates.
bool intersectionDiverges(const SubgroupSpec& l, const SubgroupSpec& h);

}  // namespace properpairs
