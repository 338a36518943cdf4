#include "properpairs/affine.hpp"

#include <cmath>

namespace properpairs {

AffineElement compose(const AffineElement& a, const AffineElement& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("compose: dimension mismatch");
  return AffineElement(a.linear() * b.linear(), a.linear() * b.translation() + a.translation());
}

AffineElement inverse(const AffineElement& a) {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a.linear());
  if (!lu.isInvertible()) throw std::invalid_argument("inverse: singular linear part");
  Eigen::MatrixXd gi = lu.inverse();
  return AffineElement(gi, -(gi * a.translation()));
}

AffineLieElement bracket(const AffineLieElement& x, const AffineLieElement& y) {
  return AffineLieElement(
      x.linearGen() * y.linearGen() - y.linearGen() * x.linearGen(),
      x.linearGen() * y.translationGen() - y.linearGen() * x.translationGen());
}

AffineLieElement adjoint(const AffineElement& g, const AffineLieElement& x) {
  const Eigen::MatrixXd h = g.linear();
  const Eigen::MatrixXd hi = h.inverse();
  Eigen::MatrixXd a = h * x.linearGen() * hi;
  Eigen::VectorXd b = h * x.translationGen() - a * g.translation();
  return AffineLieElement(std::move(a), std::move(b));
}

double affineDistance(const AffineElement& a, const AffineElement& b) {
  return (a.linear() - b.linear()).norm() + (a.translation() - b.translation()).norm();
}

namespace {

bool isNilpotentOrderTwo(const Eigen::MatrixXd& a) {
  const double scale = a.norm();
  if (scale == 0.0) return true;
  return (a * a).norm() <= 1e-12 * scale * scale;
}

Eigen::MatrixXd expTaylorScaled(const Eigen::MatrixXd& m) {
  // Scaling and squaring with a truncated series on the scaled matrix.
  const double norm = m.norm();
  int squarings = 0;
  double s = 1.0;
  while (norm * s > 0.5) {
    s *= 0.5;
    ++squarings;
  }
  const Eigen::MatrixXd ms = m * s;
  const int n = static_cast<int>(m.rows());
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd sum = term;
  for (int k = 1; k <= 14; ++k) {
    term = (term * ms) / static_cast<double>(k);
    sum += term;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

}  // namespace

AffineElement exponential(const AffineLieElement& x, double t) {
  const int n = x.dim();
  const Eigen::MatrixXd a = t * x.linearGen();
  const Eigen::VectorXd b = t * x.translationGen();

  if (isNilpotentOrderTwo(a)) {
    // [[A,b],[0,0]]^3 = 0 when A^2 = 0, so the series terminates exactly.
    Eigen::MatrixXd lin = Eigen::MatrixXd::Identity(n, n) + a;
    Eigen::VectorXd tr = b + 0.5 * (a * b);
    return AffineElement(std::move(lin), std::move(tr));
  }

  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n + 1, n + 1);
  m.topLeftCorner(n, n) = a;
  m.topRightCorner(n, 1) = b;
  Eigen::MatrixXd e = expTaylorScaled(m);
  return AffineElement(e.topLeftCorner(n, n), e.topRightCorner(n, 1));
}

namespace basis {

namespace {
AffineLieElement make(double a11, double a12, double a21, double a22, double b1, double b2) {
  Eigen::Matrix2d a;
  a << a11, a12, a21, a22;
  Eigen::Vector2d b(b1, b2);
  return AffineLieElement(a, b);
}
}  // namespace

AffineLieElement e1() { return make(0, 0, 1, 0, 0, 0); }
AffineLieElement e2() { return make(1, 0, 0, -1, 0, 0); }
AffineLieElement e3() { return make(0, -1, 0, 0, 0, 0); }
AffineLieElement e4() { return make(1, 0, 0, 1, 0, 0); }
AffineLieElement f1() { return make(0, 0, 0, 0, 1, 0); }
AffineLieElement f2() { return make(0, 0, 0, 0, 0, 1); }

}  // namespace basis

}  // namespace properpairs
