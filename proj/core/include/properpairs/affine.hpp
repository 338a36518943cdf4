#pragma once

#include <Eigen/Core>
#include <Eigen/Dense>

#include <stdexcept>
#include <vector>

namespace properpairs {

// Algebraic identity tolerance shared across the library.
inline constexpr double kTolAlg = 1e-9;

/// Element (g, v) of GL_n(R) |x R^n, acting on R^n by x -> g x + v.
/// Realized as the (n+1)x(n+1) block matrix [[g, v], [0, 1]].
class AffineElement {
 public:
  AffineElement() : linear_(Eigen::Matrix2d::Identity()), translation_(Eigen::Vector2d::Zero()) {}

  AffineElement(Eigen::MatrixXd linear, Eigen::VectorXd translation)
      : linear_(std::move(linear)), translation_(std::move(translation)) {
    if (linear_.rows() != linear_.cols() || linear_.rows() != translation_.size()) {
      throw std::invalid_argument("affine element: inconsistent dimensions");
    }
  }

  static AffineElement identity(int n = 2) {
    return AffineElement(Eigen::MatrixXd::Identity(n, n), Eigen::VectorXd::Zero(n));
  }

  int dim() const { return static_cast<int>(translation_.size()); }
  const Eigen::MatrixXd& linear() const { return linear_; }
  const Eigen::VectorXd& translation() const { return translation_; }

  /// Block embedding into GL_{n+1}(R).
  Eigen::MatrixXd embed() const {
    const int n = dim();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n + 1, n + 1);
    m.topLeftCorner(n, n) = linear_;
    m.topRightCorner(n, 1) = translation_;
    m(n, n) = 1.0;
    return m;
  }

  double frobeniusNorm() const {
    return std::sqrt(linear_.squaredNorm() + translation_.squaredNorm() + 1.0);
  }

 private:
  Eigen::MatrixXd linear_;
  Eigen::VectorXd translation_;
};

/// Lie algebra element (A, b) of gl_n(R) |x R^n, embedded as [[A, b], [0, 0]].
class AffineLieElement {
 public:
  AffineLieElement() : linearGen_(Eigen::Matrix2d::Zero()), translationGen_(Eigen::Vector2d::Zero()) {}

  AffineLieElement(Eigen::MatrixXd linearGen, Eigen::VectorXd translationGen)
      : linearGen_(std::move(linearGen)), translationGen_(std::move(translationGen)) {
    if (linearGen_.rows() != linearGen_.cols() || linearGen_.rows() != translationGen_.size()) {
      throw std::invalid_argument("affine lie element: inconsistent dimensions");
    }
  }

  int dim() const { return static_cast<int>(translationGen_.size()); }
  const Eigen::MatrixXd& linearGen() const { return linearGen_; }
  const Eigen::VectorXd& translationGen() const { return translationGen_; }

  /// Coordinates in R^{n(n+1)}: linear part rows, then translation part.
  Eigen::VectorXd coords() const {
    const int n = dim();
    Eigen::VectorXd c(n * n + n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) c(i * n + j) = linearGen_(i, j);
    c.tail(n) = translationGen_;
    return c;
  }

  static AffineLieElement fromCoords(const Eigen::VectorXd& c, int n) {
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = c(i * n + j);
    return AffineLieElement(a, c.tail(n));
  }

  double norm() const {
    return std::sqrt(linearGen_.squaredNorm() + translationGen_.squaredNorm());
  }

 private:
  Eigen::MatrixXd linearGen_;
  Eigen::VectorXd translationGen_;
};

AffineElement compose(const AffineElement& a, const AffineElement& b);
AffineElement inverse(const AffineElement& a);

inline const Eigen::MatrixXd& linearPart(const AffineElement& a) { return a.linear(); }
inline const Eigen::VectorXd& translationPart(const AffineElement& a) { return a.translation(); }

/// exp(t X) as a group element. Exact polynomial evaluation when the linear
/// generator is nilpotent of order <= 2, scaling-and-squaring otherwise.
AffineElement exponential(const AffineLieElement& x, double t = 1.0);

/// Lie bracket [X, Y] = (AB - BA, A b_Y - B b_X).
AffineLieElement bracket(const AffineLieElement& x, const AffineLieElement& y);

/// Adjoint action Ad(g)(A, b) = (h A h^-1, h b - h A h^-1 w) for g = (h, w).
AffineLieElement adjoint(const AffineElement& g, const AffineLieElement& x);

/// Distance bound used by algebraic identity checks.
double affineDistance(const AffineElement& a, const AffineElement& b);

// Basis of gl_2(R) |x R^2 used throughout the subgroup catalog.
namespace basis {
AffineLieElement e1();  // lower-left nilpotent
AffineLieElement e2();  // diag(1, -1)
AffineLieElement e3();  // minus upper-right nilpotent
AffineLieElement e4();  // identity (homothety direction)
AffineLieElement f1();  // translation (1, 0)
AffineLieElement f2();  // translation (0, 1)
}  // namespace basis

}  // namespace properpairs
