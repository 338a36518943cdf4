#pragma once

#include "properpairs/affine.hpp"

#include <optional>
#include <vector>

namespace properpairs {

/// Orthonormal basis (columns) of the coordinate span of the given elements.
Eigen::MatrixXd lieSpanBasis(const std::vector<AffineLieElement>& gens, double tol = 1e-9);

struct LieIntersection {
  int dim = 0;
  std::vector<AffineLieElement> basis;
  double gap = 0.0;  // smallest principal-angle sine between the two spans
};

/// Intersection of two subspaces given by orthonormal coordinate bases.
LieIntersection intersectSpans(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                               double tol = 1e-7);

/// True when exp(t X) is unbounded: the linear part has an eigenvalue with
/// nonzero real part, or is nonzero nilpotent, or vanishes while the
/// translation generator does not.
bool noncompactType(const AffineLieElement& x, double tol = 1e-9);

/// A noncompact element of the subspace spanned by the given basis, if any.
std::optional<AffineLieElement> noncompactElement(const std::vector<AffineLieElement>& basis);

}  // namespace properpairs
