#include "properpairs/lie_tools.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <optional>

namespace properpairs {

Eigen::MatrixXd lieSpanBasis(const std::vector<AffineLieElement>& gens, double tol) {
  if (gens.empty()) return Eigen::MatrixXd(6, 0);
  Eigen::MatrixXd m(gens.front().coords().size(), static_cast<int>(gens.size()));
  for (size_t i = 0; i < gens.size(); ++i) {
    Eigen::VectorXd c = gens[i].coords();
    const double n = c.norm();
    m.col(static_cast<int>(i)) = n > 0 ? Eigen::VectorXd(c / n) : c;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  const double cutoff = tol * std::max(1.0, s.size() > 0 ? s(0) : 0.0);
  int r = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > cutoff) ++r;
  return svd.matrixU().leftCols(r);
}

LieIntersection intersectSpans(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double tol) {
  LieIntersection out;
  if (a.cols() == 0 || b.cols() == 0) {
    out.gap = 1.0;
    return out;
  }
  // Principal angles via the SVD of a^T b: cos(theta_i) = s_i. Intersection
  // directions correspond to s_i = 1.
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a.transpose() * b,
                                        Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  out.gap = 1.0;
  const int n = static_cast<int>(a.rows());
  for (int i = 0; i < s.size(); ++i) {
    const double sinTheta = std::sqrt(std::max(0.0, 1.0 - std::min(s(i), 1.0) * std::min(s(i), 1.0)));
    if (i == 0 || sinTheta < out.gap) out.gap = std::min(out.gap, sinTheta);
    if (1.0 - s(i) <= tol) {
      Eigen::VectorXd dir = a * svd.matrixU().col(i);
      out.basis.push_back(AffineLieElement::fromCoords(dir, (n == 6) ? 2 : static_cast<int>((std::sqrt(4.0 * n + 1.0) - 1.0) / 2.0)));
      ++out.dim;
    }
  }
  return out;
}

bool noncompactType(const AffineLieElement& x, double tol) {
  const Eigen::MatrixXd& a = x.linearGen();
  const double scale = std::max(1.0, a.norm());
  if (a.norm() <= tol) return x.translationGen().norm() > tol;
  if (a.rows() == 2) {
    const double tr = a.trace();
    const double det = a.determinant();
    const double disc = tr * tr - 4.0 * det;
    if (disc < -tol * scale * scale) return std::abs(tr) > tol * scale;  // spiral type
    const double root = std::sqrt(std::max(disc, 0.0));
    const double lamMax = std::max(std::abs((tr + root) / 2.0), std::abs((tr - root) / 2.0));
    if (lamMax > tol * scale) return true;
    return true;  // nonzero nilpotent
  }
  // Generic dimension: real parts of eigenvalues, nilpotent fallback.
  Eigen::EigenSolver<Eigen::MatrixXd> es(a);
  for (int i = 0; i < es.eigenvalues().size(); ++i)
    if (std::abs(es.eigenvalues()(i).real()) > tol * scale) return true;
  for (int i = 0; i < es.eigenvalues().size(); ++i)
    if (std::abs(es.eigenvalues()(i).imag()) > tol * scale) return false;  // pure rotation
  return a.norm() > tol;  // nilpotent, nonzero
}

std::optional<AffineLieElement> noncompactElement(const std::vector<AffineLieElement>& basis) {
  for (const auto& x : basis)
    if (noncompactType(x)) return x;
  // A couple of fixed combinations in case every basis vector is compact type
  // while the span still contains noncompact directions.
  if (basis.size() >= 2) {
    for (size_t i = 0; i + 1 < basis.size(); ++i) {
      AffineLieElement s(basis[i].linearGen() + basis[i + 1].linearGen(),
                         basis[i].translationGen() + basis[i + 1].translationGen());
      if (noncompactType(s)) return s;
    }
  }
  return std::nullopt;
}

}  // namespace properpairs
