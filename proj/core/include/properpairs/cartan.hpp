#pragma once

#include "properpairs/catalog.hpp"

#include <Eigen/Core>

#include <string>
#include <vector>

namespace properpairs {

// Containment tolerance for chamber geometry.
inline constexpr double kTolGeo = 1e-6;

/// Point of the closed Weyl chamber a+ = {x >= y}.
struct CartanPoint {
  double x = 0.0;
  double y = 0.0;
  double norm() const { return std::hypot(x, y); }
};

/// Cartan projection of an invertible 2x2 matrix: half-logs of the singular
/// value squares of g, ordered so that x >= y. The y coordinate is computed
/// as log|det g| - x, which makes the determinant rule an exact identity.
CartanPoint mu(const Eigen::Matrix2d& g);

enum class RegionKind { Line, VRays, SweptCone, UnipotentCurve, FullChamber, Origin };

/// Closed subset of a+ describing the Cartan image of a linear catalog
/// subgroup: the diagonal line, a pair of rays, a swept cone, the
/// log-corrected unipotent curve, the full chamber, or the origin.
class Region {
 public:
  static Region line();
  static Region vRays(double gamma);
  static Region sweptCone(double gamma);
  static Region unipotentCurve();
  static Region fullChamber();
  static Region origin();

  RegionKind kind() const { return kind_; }
  double gamma() const { return gamma_; }

  bool contains(const CartanPoint& p, double tol = kTolGeo) const;
  double distance(const CartanPoint& p) const;

  /// Asymptotic unit directions with their offset classes.
  struct Ray {
    double angle = 0.0;  // radians, via atan2
    bool logOffset = false;
  };
  struct Fan {
    double lo = 0.0, hi = 0.0;  // angular interval
  };
  struct Directions {
    std::vector<Ray> rays;
    std::vector<Fan> fans;
  };
  Directions directions() const;

  std::string describe() const;

 private:
  RegionKind kind_ = RegionKind::Origin;
  double gamma_ = 0.0;
};

/// Point of the unipotent curve at parameter t.
CartanPoint unipotentCurvePoint(double t);

/// Cartan image region of a linear catalog subgroup (GL2 ambient; affine
/// specs are projected to their linear class first).
Region regionOf(const SubgroupSpec& spec);

/// Exact decision of the chamber properness criterion: true iff every
/// r-neighborhood of R2 meets R1 in a bounded set. Decided on recession
/// directions and their offset classes.
bool chamberProper(const Region& r1, const Region& r2);

/// Numeric cross-check of chamberProper by direct sampling.
struct NeighborhoodReport {
  std::vector<double> horizons;
  std::vector<double> largestNormWithin;  // per horizon
  bool unboundedFlag = false;
};
NeighborhoodReport neighborhoodSampler(const Region& r1, const Region& r2, double radius,
                                       const std::vector<double>& horizons = {1e2, 1e3, 1e4});

}  // namespace properpairs
