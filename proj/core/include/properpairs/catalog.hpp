#pragma once

#include "properpairs/affine.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace properpairs {

enum class Ambient { GL2xR2, SL2xR2, GL2 };

/// Catalog family tags. Affine families carry an index i (the i-th analytic
/// subgroup with that linear part) and, where the family is parametric, a
/// real parameter gamma.
enum class Family {
  // Parametrized affine catalog, grouped by linear part.
  Z,        // linear part: homotheties, indices 1..3
  A,        // linear part: diag(e^{(g+1)t}, e^{(g-1)t}), indices 1..5
  U,        // linear part: unipotent-times-homothety curve, indices 1..3
  B,        // linear part: lower triangular with coupled diagonal, indices 1..7
  Bp,       // linear part: homothety + lower nilpotent, indices 1..3
  D,        // linear part: full diagonal, indices 1..3
  Oprime,   // linear part: rotation + homothety, indices 1..2
  CO,       // linear part: conformal, indices 1..2
  P,        // linear part: lower triangular Borel + center, indices 1..2
  Uprime,   // linear part: lower nilpotent line, indices 1..5
  Trans,    // trivial linear part, indices 1..2 (pure translations)
  // Canonical classes inside SL2(R) |x R^2 (no index/parameter).
  Trivial, R2, SL2, S, L, M, N, SL2R2,
  // Large groups.
  GL2, GL2R2,
};

struct SubgroupSpec {
  Family family = Family::Trivial;
  int index = 0;        // 0 when the family has no index
  double param = 0.0;   // gamma where applicable
  Ambient ambient = Ambient::GL2xR2;

  bool operator==(const SubgroupSpec& o) const;
};

bool familyHasIndex(Family f);
bool familyHasParam(Family f, int index);
/// Fixed parameter value for families whose index pins gamma (e.g. index 2 of
/// the A family is gamma = 1); nullopt when gamma is free.
std::optional<double> familyFixedParam(Family f, int index);

std::string formatSpec(const SubgroupSpec& spec);
/// Parses the CLI grammar `FAMILY(param)[,index]`, e.g. "A(0.5),3", "B(-3),6",
/// "N", "Z,2", "GL2", "SL2xR2". Case-insensitive, whitespace ignored.
SubgroupSpec parseSpec(const std::string& text);

/// Concrete geometry of a catalog subgroup: generators, a sampler over the
/// parameter cube, and a closed-form membership residual.
struct SubgroupGeometry {
  SubgroupSpec spec;
  int dim = 0;
  std::vector<AffineLieElement> generators;

  /// Ordered product of one-parameter factors exp(t_1 X_1) ... exp(t_d X_d).
  AffineElement sample(const Eigen::VectorXd& t) const;

  /// Left-invariant membership deviation: the element is projected onto the
  /// subgroup through its coordinate chart and compared in the group metric.
  /// Zero exactly on the subgroup; a small value certifies that a bounded
  /// correction lands exactly inside.
  Eigen::VectorXd membershipResidualVector(const AffineElement& g) const;
  double membershipResidual(const AffineElement& g) const;

  /// Scale-relative variant of the same deviation. Zero on the subgroup, but
  /// judged relative to the element size; it has much wider optimization
  /// basins and is used to steer searches, never to accept certificates.
  Eigen::VectorXd membershipResidualVectorSoft(const AffineElement& g) const;

 private:
  friend SubgroupGeometry realize(const SubgroupSpec&);
  std::function<Eigen::VectorXd(const AffineElement&)> residual_;
  std::function<Eigen::VectorXd(const AffineElement&)> residualSoft_;
};

/// Builds the geometry for a valid catalog spec. Throws std::invalid_argument
/// for unknown families, bad indices, or parameters outside the family domain.
SubgroupGeometry realize(const SubgroupSpec& spec);

/// Canonical representative of the ~ equivalence class. Idempotent.
SubgroupSpec normalizeEquivalence(const SubgroupSpec& spec);

/// The subgroup's linear part as a spec in the GL2 catalog.
SubgroupSpec linearClass(const SubgroupSpec& spec);

/// Intersection with the determinant-one subgroup, as the canonical class of
/// the SL2(R) |x R^2 catalog. Computed by solving trace(linearGen) = 0 on the
/// generator span and classifying the resulting subalgebra.
SubgroupSpec intersectWithSL(const SubgroupSpec& spec);

/// Classifies a subalgebra of sl2(R) |x R^2 (given by a spanning set) as one
/// of the eight canonical classes.
SubgroupSpec classifySLSubalgebra(const std::vector<AffineLieElement>& gens);

/// How an inclusion edge couples the child parameter to the parent parameter.
enum class EdgeParamRule { NoParams, SameParam, NegatedParam, ChildFixed, BothFixed };

struct LatticeEdge {
  SubgroupSpec child;   // pattern; param is a placeholder for parametric edges
  SubgroupSpec parent;
  EdgeParamRule rule = EdgeParamRule::NoParams;
  /// Conjugator certifying Ad(g) child-generators lie in span(parent-generators).
  AffineElement conjugator;
  std::string label;
};

/// The inclusion lattice among the A- and B-linear affine families.
std::vector<LatticeEdge> inclusionLattice();

/// Instantiates the edge at a parameter value and checks the generator
/// inclusion certificate: Ad(g) X lies in span(parent generators) within tol.
bool certifyEdge(const LatticeEdge& edge, double param, double tol = 1e-7);

/// True when the spec's group is compact (the trivial class here).
bool isCompactClass(const SubgroupSpec& normalized);

/// True when the normalized class lies in the SL2(R) |x R^2 block.
bool inSLBlock(const SubgroupSpec& normalized);

/// Pure-translation subspace dimension of the Lie algebra span.
int translationSubspaceDim(const SubgroupGeometry& geo);

}  // namespace properpairs
