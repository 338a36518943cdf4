#include "properpairs/cartan.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace properpairs {

namespace {

constexpr double kAngleEps = 1e-9;

double rayAngle(double x, double y) { return std::atan2(y, x); }

Eigen::Vector2d unitDir(double x, double y) {
  Eigen::Vector2d v(x, y);
  return v / v.norm();
}

// Boundary directions of the swept cone / V-rays for parameter gamma:
// u+ from the t > 0 start ray, u- from the sorted t < 0 start ray. Their sum
// is always proportional to (1, -1), the sweep direction.
Eigen::Vector2d dirPlus(double gamma) { return unitDir(gamma + 1.0, gamma - 1.0); }
Eigen::Vector2d dirMinus(double gamma) { return unitDir(1.0 - gamma, -1.0 - gamma); }

double distanceToRay(const CartanPoint& p, const Eigen::Vector2d& dir) {
  const Eigen::Vector2d v(p.x, p.y);
  const double proj = std::max(0.0, v.dot(dir));
  return (v - proj * dir).norm();
}

}  // namespace

CartanPoint mu(const Eigen::Matrix2d& g) {
  const double det = g.determinant();
  if (std::abs(det) <= 0.0) throw std::invalid_argument("mu: singular matrix");
  const double t = g.squaredNorm();
  const double disc = std::sqrt(std::max(t * t - 4.0 * det * det, 0.0));
  const double sigma1 = 0.5 * (t + disc);
  CartanPoint p;
  p.x = 0.5 * std::log(sigma1);
  p.y = std::log(std::abs(det)) - p.x;
  return p;
}

Region Region::line() {
  Region r;
  r.kind_ = RegionKind::Line;
  return r;
}
Region Region::vRays(double gamma) {
  Region r;
  r.kind_ = RegionKind::VRays;
  r.gamma_ = gamma;
  return r;
}
Region Region::sweptCone(double gamma) {
  Region r;
  r.kind_ = RegionKind::SweptCone;
  r.gamma_ = gamma;
  return r;
}
Region Region::unipotentCurve() {
  Region r;
  r.kind_ = RegionKind::UnipotentCurve;
  return r;
}
Region Region::fullChamber() {
  Region r;
  r.kind_ = RegionKind::FullChamber;
  return r;
}
Region Region::origin() { return Region{}; }

CartanPoint unipotentCurvePoint(double t) {
  // mu of (e^t, 0; t e^t, e^t); the lower branch uses the product identity
  // (t^2+2-s)(t^2+2+s) = 4 to avoid cancellation.
  const double s = std::sqrt(t * t * t * t + 4.0 * t * t);
  const double big = 0.5 * (t * t + 2.0 + s);
  CartanPoint p;
  p.x = t + 0.5 * std::log(big);
  p.y = t - 0.5 * std::log(big);
  return p;
}

double Region::distance(const CartanPoint& p) const {
  const Eigen::Vector2d v(p.x, p.y);
  switch (kind_) {
    case RegionKind::Origin:
      return v.norm();
    case RegionKind::FullChamber:
      return std::max(0.0, (p.y - p.x) / std::sqrt(2.0));
    case RegionKind::Line:
      return std::abs(p.x - p.y) / std::sqrt(2.0);
    case RegionKind::VRays:
      return std::min(distanceToRay(p, dirPlus(gamma_)), distanceToRay(p, dirMinus(gamma_)));
    case RegionKind::SweptCone: {
      const Eigen::Vector2d up = dirPlus(gamma_);
      const Eigen::Vector2d um = dirMinus(gamma_);
      Eigen::Matrix2d cols;
      cols.col(0) = um;
      cols.col(1) = up;
      const double det = cols.determinant();
      if (std::abs(det) > 1e-12) {
        const Eigen::Vector2d ab = cols.inverse() * v;
        if (ab(0) >= -1e-12 && ab(1) >= -1e-12) return 0.0;
      }
      return std::min(distanceToRay(p, up), distanceToRay(p, um));
    }
    case RegionKind::UnipotentCurve: {
      // Coarse grid then local refinement over the curve parameter.
      double best = std::numeric_limits<double>::infinity();
      double bestT = 0.0;
      const double scale = std::max(1.0, v.norm());
      for (double t = -2.0 * scale; t <= 2.0 * scale; t += scale / 200.0) {
        const CartanPoint q = unipotentCurvePoint(t);
        const double d = std::hypot(p.x - q.x, p.y - q.y);
        if (d < best) {
          best = d;
          bestT = t;
        }
      }
      double lo = bestT - scale / 200.0, hi = bestT + scale / 200.0;
      for (int i = 0; i < 80; ++i) {
        const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
        const CartanPoint q1 = unipotentCurvePoint(m1), q2 = unipotentCurvePoint(m2);
        if (std::hypot(p.x - q1.x, p.y - q1.y) < std::hypot(p.x - q2.x, p.y - q2.y))
          hi = m2;
        else
          lo = m1;
      }
      const CartanPoint q = unipotentCurvePoint(0.5 * (lo + hi));
      return std::min(best, std::hypot(p.x - q.x, p.y - q.y));
    }
  }
  return 0.0;
}

bool Region::contains(const CartanPoint& p, double tol) const { return distance(p) <= tol; }

Region::Directions Region::directions() const {
  Directions d;
  switch (kind_) {
    case RegionKind::Origin:
      break;
    case RegionKind::Line:
      d.rays.push_back({rayAngle(1, 1), false});
      d.rays.push_back({rayAngle(-1, -1), false});
      break;
    case RegionKind::UnipotentCurve:
      d.rays.push_back({rayAngle(1, 1), true});
      d.rays.push_back({rayAngle(-1, -1), true});
      break;
    case RegionKind::VRays: {
      const Eigen::Vector2d up = dirPlus(gamma_), um = dirMinus(gamma_);
      d.rays.push_back({rayAngle(up(0), up(1)), false});
      const double am = rayAngle(um(0), um(1));
      if (std::abs(am - d.rays[0].angle) > kAngleEps) d.rays.push_back({am, false});
      break;
    }
    case RegionKind::SweptCone: {
      const Eigen::Vector2d up = dirPlus(gamma_), um = dirMinus(gamma_);
      const double ap = rayAngle(up(0), up(1));
      const double am = rayAngle(um(0), um(1));
      d.rays.push_back({ap, false});
      if (std::abs(am - ap) > kAngleEps) {
        d.rays.push_back({am, false});
        d.fans.push_back({std::min(ap, am), std::max(ap, am)});
      }
      break;
    }
    case RegionKind::FullChamber:
      d.rays.push_back({rayAngle(1, 1), false});
      d.rays.push_back({rayAngle(-1, -1), false});
      d.fans.push_back({rayAngle(-1, -1), rayAngle(1, 1)});
      break;
  }
  return d;
}

std::string Region::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case RegionKind::Line: os << "line x=y"; break;
    case RegionKind::VRays: os << "ray pair, gamma=" << gamma_; break;
    case RegionKind::SweptCone: os << "swept cone, gamma=" << gamma_; break;
    case RegionKind::UnipotentCurve: os << "log-corrected curve"; break;
    case RegionKind::FullChamber: os << "full chamber"; break;
    case RegionKind::Origin: os << "origin"; break;
  }
  return os.str();
}

Region regionOf(const SubgroupSpec& input) {
  SubgroupSpec spec = input.ambient == Ambient::GL2 ? normalizeEquivalence(input)
                                                    : normalizeEquivalence(linearClass(input));
  switch (spec.family) {
    case Family::Trivial: return Region::origin();
    case Family::Z: return Region::line();
    case Family::A: return Region::vRays(spec.param);
    case Family::SL2: return Region::vRays(0.0);
    case Family::U: return Region::unipotentCurve();
    case Family::B: return Region::sweptCone(spec.param);
    case Family::GL2: return Region::fullChamber();
    default:
      throw std::invalid_argument("regionOf: linear image outside the GL2 catalog: " +
                                  formatSpec(input));
  }
}

bool chamberProper(const Region& r1, const Region& r2) {
  const auto d1 = r1.directions();
  const auto d2 = r2.directions();
  auto sameAngle = [](double a, double b) { return std::abs(a - b) <= kAngleEps; };
  auto inFan = [](double a, const Region::Fan& f) {
    return a >= f.lo - kAngleEps && a <= f.hi + kAngleEps;
  };

  for (const auto& ra : d1.rays)
    for (const auto& rb : d2.rays)
      if (sameAngle(ra.angle, rb.angle)) {
        // A log-offset curve drifts away from any exact ray in its limit
        // direction; two exact rays (or two log curves) stay together.
        if (ra.logOffset != rb.logOffset) continue;
        return false;
      }
  for (const auto& ra : d1.rays)
    for (const auto& fb : d2.fans)
      if (inFan(ra.angle, fb)) return false;
  for (const auto& rb : d2.rays)
    for (const auto& fa : d1.fans)
      if (inFan(rb.angle, fa)) return false;
  for (const auto& fa : d1.fans)
    for (const auto& fb : d2.fans)
      if (std::max(fa.lo, fb.lo) <= std::min(fa.hi, fb.hi) + kAngleEps) return false;
  return true;
}

namespace {

std::vector<CartanPoint> sampleRegion(const Region& r, double horizon) {
  std::vector<CartanPoint> pts;
  const int n = 400;
  auto pushRay = [&](const Eigen::Vector2d& dir) {
    for (int i = 1; i <= n; ++i) {
      const double s = horizon * i / n;
      pts.push_back({s * dir(0), s * dir(1)});
    }
  };
  switch (r.kind()) {
    case RegionKind::Origin:
      pts.push_back({0, 0});
      break;
    case RegionKind::Line:
      pushRay(unitDir(1, 1));
      pushRay(unitDir(-1, -1));
      break;
    case RegionKind::VRays:
      pushRay(dirPlus(r.gamma()));
      pushRay(dirMinus(r.gamma()));
      break;
    case RegionKind::SweptCone: {
      const Eigen::Vector2d up = dirPlus(r.gamma());
      const Eigen::Vector2d um = dirMinus(r.gamma());
      for (int i = 0; i <= 40; ++i) {
        const double w = i / 40.0;
        Eigen::Vector2d dir = (1.0 - w) * um + w * up;
        if (dir.norm() < 1e-12) continue;
        dir.normalize();
        pushRay(dir);
      }
      break;
    }
    case RegionKind::UnipotentCurve:
      for (int i = -n; i <= n; ++i) {
        const double t = horizon * i / n;
        const CartanPoint q = unipotentCurvePoint(t);
        if (q.norm() <= horizon * std::sqrt(2.0) + 10.0) pts.push_back(q);
      }
      break;
    case RegionKind::FullChamber:
      for (int i = 0; i <= 60; ++i)
        for (int j = 0; j <= 60; ++j) {
          const double x = -horizon + 2.0 * horizon * i / 60.0;
          const double y = -horizon + 2.0 * horizon * j / 60.0;
          if (x >= y) pts.push_back({x, y});
        }
      break;
  }
  return pts;
}

}  // namespace

NeighborhoodReport neighborhoodSampler(const Region& r1, const Region& r2, double radius,
                                       const std::vector<double>& horizons) {
  if (radius <= 0.0) throw std::invalid_argument("neighborhoodSampler: radius must be positive");
  NeighborhoodReport rep;
  rep.horizons = horizons;
  for (double h : horizons) {
    double largest = 0.0;
    for (const auto& p : sampleRegion(r1, h))
      if (r2.distance(p) <= radius) largest = std::max(largest, p.norm());
    rep.largestNormWithin.push_back(largest);
  }
  // Unbounded when the in-neighborhood reach keeps scaling with the horizon.
  rep.unboundedFlag = true;
  for (size_t i = 0; i < horizons.size(); ++i) {
    if (rep.largestNormWithin[i] < 0.25 * horizons[i]) rep.unboundedFlag = false;
    if (i > 0 && rep.largestNormWithin[i] < 2.0 * rep.largestNormWithin[i - 1])
      rep.unboundedFlag = false;
  }
  return rep;
}

}  // namespace properpairs
