#include "properpairs/catalog.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace properpairs {

namespace {

constexpr double kParamEps = 1e-12;

bool nearly(double a, double b) { return std::abs(a - b) <= 1e-9; }

using basis::e1;
using basis::e2;
using basis::e3;
using basis::e4;
using basis::f1;
using basis::f2;

AffineLieElement lie(std::initializer_list<std::pair<double, AffineLieElement>> combo) {
  Eigen::Matrix2d a = Eigen::Matrix2d::Zero();
  Eigen::Vector2d b = Eigen::Vector2d::Zero();
  for (const auto& [c, x] : combo) {
    a += c * x.linearGen();
    b += c * x.translationGen();
  }
  return AffineLieElement(a, b);
}

// ---------------------------------------------------------------------------
// Membership residuals. Each family projects an arbitrary element onto the
// subgroup through its coordinate chart (free coordinates copied, constrained
// coordinates reconstructed), and the residual is the left-invariant
// deviation proj^-1 * x - identity. This metric is what makes witness
// certificates sound: a small residual means a bounded correction of the
// conjugators lands exactly inside the subgroup, which is impossible along a
// divergent sequence when the pair is proper.
// ---------------------------------------------------------------------------

struct Parts {
  double g11, g12, g21, g22, v1, v2;
};

Parts parts(const AffineElement& e) {
  const auto& g = e.linear();
  const auto& v = e.translation();
  return Parts{g(0, 0), g(0, 1), g(1, 0), g(1, 1), v(0), v(1)};
}

// Positivity guard; 0 for x >= eps, growing as x drops below.
double posGuard(double x) {
  constexpr double eps = 1e-12;
  return x >= eps ? 0.0 : 1.0 + std::log1p(eps - x);
}

double slog(double x) { return std::log(std::max(x, 1e-300)); }

// Diagonal-family exponent: least-squares fit of (log g11, log g22) along the
// direction (gamma+1, gamma-1).
double diagExponent(double gamma, const Parts& p) {
  const double c1 = gamma + 1.0, c2 = gamma - 1.0;
  return (c1 * slog(p.g11) + c2 * slog(p.g22)) / (c1 * c1 + c2 * c2);
}

using ResidualFn = std::function<Eigen::VectorXd(const AffineElement&)>;

ResidualFn makeResidual(Family fam, int index, double gamma, Ambient ambient, bool soft) {
  const bool linearOnly = (ambient == Ambient::GL2);
  return [fam, index, gamma, linearOnly, soft](const AffineElement& e) -> Eigen::VectorXd {
    const Parts p = parts(e);
    std::vector<double> extra;  // positivity and branch guards

    Eigen::Matrix2d G = Eigen::Matrix2d::Identity();
    Eigen::Vector2d V = Eigen::Vector2d::Zero();
    auto posDiag = [&] {
      extra.push_back(posGuard(p.g11));
      extra.push_back(posGuard(p.g22));
    };
    auto setDiag = [&](double a, double d) { G << a, 0.0, 0.0, d; };
    auto setLower = [&](double a, double c, double d) { G << a, 0.0, c, d; };

    // vFree selects which translation coordinates are free (copied from x).
    bool v1Free = false, v2Free = false;
    const bool vConstrained = !linearOnly;

    switch (fam) {
      case Family::Z: {
        posDiag();
        const double t = 0.5 * (slog(p.g11) + slog(p.g22));
        setDiag(std::exp(t), std::exp(t));
        if (vConstrained) {
          v1Free = index >= 2;
          v2Free = index >= 3;
        }
        break;
      }
      case Family::A: {
        posDiag();
        if (index == 2 || index == 4) {
          const double t = 0.5 * slog(p.g11);
          setDiag(std::exp(2.0 * t), 1.0);
          V(1) = t;
          v1Free = index == 4;
        } else {
          const double t = diagExponent(gamma, p);
          setDiag(std::exp((gamma + 1.0) * t), std::exp((gamma - 1.0) * t));
          v1Free = index >= 3;
          v2Free = index == 5;
        }
        break;
      }
      case Family::U: {
        extra.push_back(posGuard(p.g11));
        const double t = 0.5 * (slog(p.g11) + slog(p.g22));
        const double et = std::exp(t);
        G << et, 0.0, t * et, et;
        v2Free = index == 2 || index == 3;
        v1Free = index == 3;
        break;
      }
      case Family::B: {
        posDiag();
        switch (index) {
          case 1:
          case 4:
          case 7: {
            const double t = diagExponent(gamma, p);
            setLower(std::exp((gamma + 1.0) * t), p.g21, std::exp((gamma - 1.0) * t));
            v2Free = index >= 4;
            v1Free = index == 7;
            break;
          }
          case 2: {
            const double t = 0.5 * slog(p.g11);
            setLower(std::exp(2.0 * t), p.g21, 1.0);
            V(1) = t;
            break;
          }
          case 3:
          case 6: {
            const double x = diagExponent(-3.0, p);
            const double y = p.g21 / std::max(std::abs(p.g22), 1e-300) *
                             (p.g22 < 0 ? -1.0 : 1.0);
            const double e2 = std::exp(-2.0 * x), e4 = std::exp(-4.0 * x);
            setLower(e2, e4 * y, e4);
            V(0) = e2 * y;
            if (index == 3)
              V(1) = 0.5 * e4 * y * y;
            else
              v2Free = true;
            break;
          }
          case 5: {
            const double t = -0.5 * slog(p.g22);
            setLower(1.0, p.g21, std::exp(-2.0 * t));
            V(0) = t;
            v2Free = true;
            break;
          }
        }
        break;
      }
      case Family::Bp: {
        posDiag();
        const double t = 0.5 * (slog(p.g11) + slog(p.g22));
        setLower(std::exp(t), p.g21, std::exp(t));
        if (vConstrained) {
          v2Free = index == 1 || index == 3;
          v1Free = index == 3;
        }
        break;
      }
      case Family::D: {
        posDiag();
        setDiag(std::max(p.g11, 1e-300), std::max(p.g22, 1e-300));
        if (vConstrained) {
          v1Free = index == 1 || index == 3;
          v2Free = index == 3;
        }
        break;
      }
      case Family::Oprime:
      case Family::CO: {
        const double det = p.g11 * p.g22 - p.g12 * p.g21;
        extra.push_back(posGuard(det));
        const double r = 0.5 * slog(std::max(det, 1e-300));
        const double theta = std::atan2(p.g21, p.g11);
        double rr = r;
        if (fam == Family::Oprime) {
          // Spiral branch: the radial log is pinned to gamma times the angle.
          if (std::abs(gamma) > kParamEps) {
            const int kmax = static_cast<int>(std::abs(r / gamma) / (2.0 * M_PI)) + 2;
            double best = gamma * theta;
            for (int k = -kmax; k <= kmax; ++k) {
              const double cand = gamma * (theta + 2.0 * M_PI * k);
              if (std::abs(r - cand) < std::abs(r - best)) best = cand;
            }
            rr = best;
          } else {
            rr = 0.0;
          }
        }
        const double er = std::exp(rr);
        G << er * std::cos(theta), -er * std::sin(theta), er * std::sin(theta),
            er * std::cos(theta);
        if (vConstrained && index == 2) v1Free = v2Free = true;
        break;
      }
      case Family::P: {
        posDiag();
        setLower(std::max(p.g11, 1e-300), p.g21, std::max(p.g22, 1e-300));
        if (vConstrained && index == 2) v1Free = v2Free = true;
        break;
      }
      case Family::Uprime: {
        setLower(1.0, p.g21, 1.0);
        switch (index) {
          case 2:
            V(0) = p.g21;
            V(1) = 0.5 * p.g21 * p.g21;
            break;
          case 3: v2Free = true; break;
          case 4:
            V(0) = p.g21;
            v2Free = true;
            break;
          case 5: v1Free = v2Free = true; break;
          default: break;
        }
        break;
      }
      case Family::Trans: {
        v1Free = true;
        v2Free = index == 2;
        break;
      }
      case Family::Trivial:
        break;
      case Family::R2:
        v1Free = v2Free = true;
        break;
      case Family::SL2:
      case Family::SL2R2: {
        const double det = p.g11 * p.g22 - p.g12 * p.g21;
        extra.push_back(posGuard(det));
        const double s = 1.0 / std::sqrt(std::max(det, 1e-300));
        G << p.g11 * s, p.g12 * s, p.g21 * s, p.g22 * s;
        if (fam == Family::SL2R2) v1Free = v2Free = true;
        break;
      }
      case Family::S: {
        posDiag();
        const double t = 0.5 * (slog(p.g11) - slog(p.g22));
        setDiag(std::exp(t), std::exp(-t));
        v1Free = true;
        break;
      }
      case Family::L: {
        setLower(1.0, p.g21, 1.0);
        v2Free = true;
        break;
      }
      case Family::M: {
        setLower(1.0, p.g21, 1.0);
        V(0) = p.g21;
        v2Free = true;
        break;
      }
      case Family::N: {
        setLower(1.0, p.g21, 1.0);
        V(0) = p.g21;
        V(1) = 0.5 * p.g21 * p.g21;
        break;
      }
      case Family::GL2: {
        const double det = p.g11 * p.g22 - p.g12 * p.g21;
        extra.push_back(posGuard(std::abs(det)));
        G << p.g11, p.g12, p.g21, p.g22;
        if (std::abs(det) < 1e-300) G = Eigen::Matrix2d::Identity();
        break;
      }
      case Family::GL2R2: {
        const double det = p.g11 * p.g22 - p.g12 * p.g21;
        extra.push_back(posGuard(std::abs(det)));
        G << p.g11, p.g12, p.g21, p.g22;
        if (std::abs(det) < 1e-300) G = Eigen::Matrix2d::Identity();
        v1Free = v2Free = true;
        break;
      }
    }

    if (linearOnly) v1Free = v2Free = false;
    if (v1Free) V(0) = p.v1;
    if (v2Free) V(1) = p.v2;

    Eigen::Matrix2d dLin;
    Eigen::Vector2d dTr;
    if (soft) {
      // Scale-relative deviation of the projection.
      const double gs = 1.0 + e.linear().norm();
      dLin = (e.linear() - G) / gs;
      dTr = (e.translation() - V) / gs;
    } else {
      // Left-invariant deviation proj^-1 * x - identity.
      const Eigen::Matrix2d Gi = G.inverse();
      dLin = Gi * e.linear() - Eigen::Matrix2d::Identity();
      dTr = Gi * (e.translation() - V);
    }

    Eigen::VectorXd out(6 + static_cast<int>(extra.size()));
    out(0) = dLin(0, 0);
    out(1) = dLin(0, 1);
    out(2) = dLin(1, 0);
    out(3) = dLin(1, 1);
    out(4) = dTr(0);
    out(5) = dTr(1);
    for (size_t i = 0; i < extra.size(); ++i) out(6 + static_cast<int>(i)) = extra[i];
    return out;
  };
}

struct FamilyInfo {
  int minIndex, maxIndex;
  const char* name;
};

FamilyInfo familyInfo(Family f) {
  switch (f) {
    case Family::Z: return {1, 3, "Z"};
    case Family::A: return {1, 5, "A"};
    case Family::U: return {1, 3, "U"};
    case Family::B: return {1, 7, "B"};
    case Family::Bp: return {1, 3, "B'"};
    case Family::D: return {1, 3, "D"};
    case Family::Oprime: return {1, 2, "O'"};
    case Family::CO: return {1, 2, "CO"};
    case Family::P: return {1, 2, "P"};
    case Family::Uprime: return {1, 5, "U'"};
    case Family::Trans: return {1, 2, "0"};
    case Family::Trivial: return {0, 0, "TRIVIAL"};
    case Family::R2: return {0, 0, "R2"};
    case Family::SL2: return {0, 0, "SL2"};
    case Family::S: return {0, 0, "S"};
    case Family::L: return {0, 0, "L"};
    case Family::M: return {0, 0, "M"};
    case Family::N: return {0, 0, "N"};
    case Family::SL2R2: return {0, 0, "SL2xR2"};
    case Family::GL2: return {0, 0, "GL2"};
    case Family::GL2R2: return {0, 0, "GL2xR2"};
  }
  return {0, 0, "?"};
}

std::vector<AffineLieElement> rawGenerators(Family fam, int index, double g, Ambient ambient) {
  const bool lin = (ambient == Ambient::GL2);
  switch (fam) {
    case Family::Z:
      if (lin) return {e4()};
      if (index == 1) return {e4()};
      if (index == 2) return {e4(), f1()};
      return {e4(), f1(), f2()};
    case Family::A: {
      AffineLieElement diag = lie({{1, e2()}, {g, e4()}});
      if (lin) return {diag};
      switch (index) {
        case 1: return {diag};
        case 2: return {lie({{1, e2()}, {1, e4()}, {1, f2()}})};
        case 3: return {diag, f1()};
        case 4: return {lie({{1, e2()}, {1, e4()}, {1, f2()}}), f1()};
        default: return {diag, f1(), f2()};
      }
    }
    case Family::U: {
      AffineLieElement u = lie({{1, e1()}, {1, e4()}});
      if (lin) return {u};
      if (index == 1) return {u};
      if (index == 2) return {u, f2()};
      return {u, f1(), f2()};
    }
    case Family::B: {
      AffineLieElement diag = lie({{1, e2()}, {g, e4()}});
      if (lin) return {diag, e1()};
      switch (index) {
        case 1: return {diag, e1()};
        case 2: return {lie({{1, e2()}, {1, e4()}, {1, f2()}}), e1()};
        case 3: return {lie({{1, e2()}, {-3, e4()}}), lie({{1, e1()}, {1, f1()}})};
        case 4: return {diag, e1(), f2()};
        case 5: return {lie({{1, e2()}, {-1, e4()}, {1, f1()}}), e1(), f2()};
        case 6: return {lie({{1, e2()}, {-3, e4()}}), lie({{1, e1()}, {1, f1()}}), f2()};
        default: return {diag, e1(), f1(), f2()};
      }
    }
    case Family::Bp:
      if (lin) return {e1(), e4()};
      if (index == 1) return {e1(), e4(), f2()};
      if (index == 2) return {e1(), e4()};
      return {e1(), e4(), f1(), f2()};
    case Family::D:
      if (lin) return {e2(), e4()};
      if (index == 1) return {e2(), e4(), f1()};
      if (index == 2) return {e2(), e4()};
      return {e2(), e4(), f1(), f2()};
    case Family::Oprime: {
      AffineLieElement rot = lie({{1, e1()}, {1, e3()}, {g, e4()}});
      if (lin || index == 1) return {rot};
      return {rot, f1(), f2()};
    }
    case Family::CO: {
      AffineLieElement rot = lie({{1, e1()}, {1, e3()}});
      if (lin || index == 1) return {rot, e4()};
      return {rot, e4(), f1(), f2()};
    }
    case Family::P:
      if (lin || index == 1) return {e1(), e2(), e4()};
      return {e1(), e2(), e4(), f1(), f2()};
    case Family::Uprime: {
      if (lin) return {e1()};
      switch (index) {
        case 1: return {e1()};
        case 2: return {lie({{1, e1()}, {1, f1()}})};
        case 3: return {e1(), f2()};
        case 4: return {lie({{1, e1()}, {1, f1()}}), f2()};
        default: return {e1(), f1(), f2()};
      }
    }
    case Family::Trans:
      if (index == 1) return {f1()};
      return {f1(), f2()};
    case Family::Trivial: return {};
    case Family::R2: return {f1(), f2()};
    case Family::SL2: return {e1(), e2(), e3()};
    case Family::S: return {e2(), f1()};
    case Family::L: return {e1(), f2()};
    case Family::M: return {lie({{1, e1()}, {1, f1()}}), f2()};
    case Family::N: return {lie({{1, e1()}, {1, f1()}})};
    case Family::SL2R2: return {e1(), e2(), e3(), f1(), f2()};
    case Family::GL2: return {e1(), e2(), e3(), e4()};
    case Family::GL2R2: return {e1(), e2(), e3(), e4(), f1(), f2()};
  }
  return {};
}

}  // namespace

bool SubgroupSpec::operator==(const SubgroupSpec& o) const {
  return family == o.family && index == o.index && ambient == o.ambient &&
         nearly(param, o.param);
}

bool familyHasIndex(Family f) { return familyInfo(f).minIndex > 0; }

bool familyHasParam(Family f, int index) {
  if (f == Family::A) return index == 1 || index == 3 || index == 5;
  if (f == Family::B) return index == 1 || index == 4 || index == 7;
  if (f == Family::Oprime) return true;
  return false;
}

std::optional<double> familyFixedParam(Family f, int index) {
  if (f == Family::A && (index == 2 || index == 4)) return 1.0;
  if (f == Family::B) {
    if (index == 2) return 1.0;
    if (index == 3 || index == 6) return -3.0;
    if (index == 5) return -1.0;
  }
  return std::nullopt;
}

std::string formatSpec(const SubgroupSpec& spec) {
  const FamilyInfo info = familyInfo(spec.family);
  std::ostringstream os;
  os << info.name;
  const bool hasParam = familyHasParam(spec.family, spec.index) ||
                        familyFixedParam(spec.family, spec.index).has_value();
  if (hasParam) {
    double p = familyFixedParam(spec.family, spec.index).value_or(spec.param);
    os << "(" << p << ")";
  }
  if (familyHasIndex(spec.family) && spec.ambient != Ambient::GL2) os << "," << spec.index;
  return os.str();
}

namespace {

std::string canonicalizeText(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(static_cast<char>(std::toupper(ch)));
  return s;
}

}  // namespace

SubgroupSpec parseSpec(const std::string& text) {
  std::string s = canonicalizeText(text);
  if (s.empty()) throw std::invalid_argument("empty subgroup spec");

  static const std::vector<std::pair<std::string, Family>> fixedNames = {
      {"TRIVIAL", Family::Trivial}, {"SL2XR2", Family::SL2R2}, {"GL2XR2", Family::GL2R2},
      {"SL2", Family::SL2},         {"GL2", Family::GL2},      {"R2", Family::R2},
  };
  for (const auto& [name, fam] : fixedNames)
    if (s == name) return SubgroupSpec{fam, 0, 0.0, Ambient::GL2xR2};
  if (s == "S") return {Family::S, 0, 0.0, Ambient::GL2xR2};
  if (s == "L") return {Family::L, 0, 0.0, Ambient::GL2xR2};
  if (s == "M") return {Family::M, 0, 0.0, Ambient::GL2xR2};
  if (s == "N") return {Family::N, 0, 0.0, Ambient::GL2xR2};
  if (s == "R") return {Family::Trans, 1, 0.0, Ambient::GL2xR2};

  // FAMILY [ (param) ] [ , index ]
  Family fam;
  size_t pos = 0;
  auto starts = [&](const char* prefix) {
    const size_t n = std::strlen(prefix);
    if (s.compare(0, n, prefix) == 0) {
      pos = n;
      return true;
    }
    return false;
  };
  if (starts("B'") || starts("BP")) fam = Family::Bp;
  else if (starts("O'") || starts("OP")) fam = Family::Oprime;
  else if (starts("U'") || starts("UP")) fam = Family::Uprime;
  else if (starts("CO")) fam = Family::CO;
  else if (starts("Z")) fam = Family::Z;
  else if (starts("A")) fam = Family::A;
  else if (starts("U")) fam = Family::U;
  else if (starts("B")) fam = Family::B;
  else if (starts("D")) fam = Family::D;
  else if (starts("P")) fam = Family::P;
  else if (starts("0")) fam = Family::Trans;
  else throw std::invalid_argument("unknown subgroup family: " + text);

  std::optional<double> param;
  if (pos < s.size() && s[pos] == '(') {
    const size_t close = s.find(')', pos);
    if (close == std::string::npos) throw std::invalid_argument("unbalanced '(' in spec: " + text);
    try {
      param = std::stod(s.substr(pos + 1, close - pos - 1));
    } catch (const std::exception&) {
      throw std::invalid_argument("bad parameter in spec: " + text);
    }
    pos = close + 1;
  }
  std::optional<int> index;
  if (pos < s.size() && s[pos] == ',') {
    try {
      index = std::stoi(s.substr(pos + 1));
    } catch (const std::exception&) {
      throw std::invalid_argument("bad index in spec: " + text);
    }
    pos = s.size();
  } else if (pos != s.size()) {
    throw std::invalid_argument("trailing characters in spec: " + text);
  }

  SubgroupSpec spec;
  spec.family = fam;
  if (index) {
    const FamilyInfo info = familyInfo(fam);
    if (*index < info.minIndex || *index > info.maxIndex)
      throw std::invalid_argument("index out of range in spec: " + text);
    spec.index = *index;
    spec.ambient = Ambient::GL2xR2;
  } else {
    spec.index = 0;
    spec.ambient = Ambient::GL2;
  }
  if (auto fixed = familyFixedParam(fam, spec.index)) {
    if (param && !nearly(*param, *fixed))
      throw std::invalid_argument("parameter of " + text + " is fixed");
    spec.param = *fixed;
  } else if (familyHasParam(fam, spec.index) || (spec.ambient == Ambient::GL2 && familyHasParam(fam, 1))) {
    if (!param) throw std::invalid_argument("spec requires a parameter: " + text);
    spec.param = *param;
  } else if (param) {
    throw std::invalid_argument("spec does not take a parameter: " + text);
  }
  return spec;
}

AffineElement SubgroupGeometry::sample(const Eigen::VectorXd& t) const {
  if (t.size() != dim) throw std::invalid_argument("sampler: parameter count mismatch");
  AffineElement g = AffineElement::identity(2);
  for (int i = 0; i < dim; ++i) g = compose(g, exponential(generators[static_cast<size_t>(i)], t(i)));
  return g;
}

Eigen::VectorXd SubgroupGeometry::membershipResidualVector(const AffineElement& g) const {
  return residual_(g);
}

Eigen::VectorXd SubgroupGeometry::membershipResidualVectorSoft(const AffineElement& g) const {
  return residualSoft_(g);
}

double SubgroupGeometry::membershipResidual(const AffineElement& g) const {
  return residual_(g).norm();
}

SubgroupGeometry realize(const SubgroupSpec& input) {
  SubgroupSpec spec = input;
  const FamilyInfo info = familyInfo(spec.family);
  if (spec.ambient != Ambient::GL2) {
    if (familyHasIndex(spec.family) &&
        (spec.index < info.minIndex || spec.index > info.maxIndex))
      throw std::invalid_argument("realize: bad index for family " + std::string(info.name));
  }
  if (auto fixed = familyFixedParam(spec.family, spec.index)) spec.param = *fixed;
  // Families printed with gamma >= 0 accept negatives via the conjugacy that
  // flips the parameter sign; the signed families keep their parameter.
  if (spec.family == Family::A && (spec.index == 1 || spec.index == 5))
    spec.param = std::abs(spec.param);

  SubgroupGeometry geo;
  geo.spec = spec;
  geo.generators = rawGenerators(spec.family, spec.index, spec.param, spec.ambient);
  geo.dim = static_cast<int>(geo.generators.size());
  geo.residual_ = makeResidual(spec.family, spec.index, spec.param, spec.ambient, false);
  geo.residualSoft_ = makeResidual(spec.family, spec.index, spec.param, spec.ambient, true);
  return geo;
}

SubgroupSpec normalizeEquivalence(const SubgroupSpec& input) {
  SubgroupSpec s = input;
  if (auto fixed = familyFixedParam(s.family, s.index)) s.param = *fixed;
  const bool zero = std::abs(s.param) <= kParamEps;
  auto canonical = [&](Family f) { return SubgroupSpec{f, 0, 0.0, input.ambient == Ambient::GL2 ? Ambient::GL2 : Ambient::GL2xR2}; };

  if (s.ambient == Ambient::GL2) {
    switch (s.family) {
      case Family::A: return zero ? canonical(Family::SL2) : SubgroupSpec{Family::A, 0, std::abs(s.param), Ambient::GL2};
      case Family::B: return zero ? canonical(Family::SL2) : s;
      case Family::Bp:
      case Family::D:
      case Family::P: return canonical(Family::GL2);
      case Family::Oprime: return zero ? canonical(Family::Trivial) : canonical(Family::Z);
      case Family::CO: return canonical(Family::Z);
      case Family::Uprime: return canonical(Family::SL2);
      default: return s;
    }
  }

  switch (s.family) {
    case Family::Z:
      if (s.index == 3) s.index = 2;
      return s;
    case Family::A:
      switch (s.index) {
        case 1: return zero ? canonical(Family::SL2) : SubgroupSpec{Family::A, 1, std::abs(s.param), Ambient::GL2xR2};
        case 3: return zero ? canonical(Family::S) : s;
        case 5: return zero ? canonical(Family::SL2R2) : SubgroupSpec{Family::A, 5, std::abs(s.param), Ambient::GL2xR2};
        default: return s;
      }
    case Family::U: return s;
    case Family::B:
      if (s.index == 1 && zero) return canonical(Family::SL2);
      if ((s.index == 4 || s.index == 7) && zero) return canonical(Family::SL2R2);
      return s;
    case Family::Bp:
      if (s.index == 2) return canonical(Family::GL2);
      if (s.index == 3) return canonical(Family::GL2R2);
      return s;
    case Family::D:
      if (s.index == 2) return canonical(Family::GL2);
      if (s.index == 3) return canonical(Family::GL2R2);
      return s;
    case Family::Oprime:
      if (s.index == 1) return zero ? canonical(Family::Trivial) : SubgroupSpec{Family::Z, 1, 0.0, Ambient::GL2xR2};
      return zero ? canonical(Family::R2) : SubgroupSpec{Family::Z, 2, 0.0, Ambient::GL2xR2};
    case Family::CO:
      return SubgroupSpec{Family::Z, s.index == 1 ? 1 : 2, 0.0, Ambient::GL2xR2};
    case Family::P:
      return canonical(s.index == 1 ? Family::GL2 : Family::GL2R2);
    case Family::Uprime:
      switch (s.index) {
        case 1: return canonical(Family::SL2);
        case 2: return canonical(Family::N);
        case 3: return canonical(Family::L);
        case 4: return canonical(Family::M);
        default: return canonical(Family::SL2R2);
      }
    case Family::Trans: return canonical(Family::R2);
    default: {
      SubgroupSpec out = s;
      if (out.ambient == Ambient::SL2xR2) out.ambient = Ambient::GL2xR2;
      return out;
    }
  }
}

SubgroupSpec linearClass(const SubgroupSpec& input) {
  SubgroupSpec s = normalizeEquivalence(input);
  auto gl = [](Family f, double p = 0.0) { return SubgroupSpec{f, 0, p, Ambient::GL2}; };
  if (s.ambient == Ambient::GL2) return s;
  switch (s.family) {
    case Family::Z: return gl(Family::Z);
    case Family::A: return gl(Family::A, s.param);
    case Family::U: return gl(Family::U);
    case Family::B: return gl(Family::B, s.param);
    case Family::Bp: return gl(Family::Bp);
    case Family::D: return gl(Family::D);
    case Family::Trivial:
    case Family::R2: return gl(Family::Trivial);
    case Family::S: return gl(Family::A, 0.0);
    case Family::L:
    case Family::M:
    case Family::N: return gl(Family::Uprime);
    case Family::SL2:
    case Family::SL2R2: return gl(Family::SL2);
    default: return gl(Family::GL2);
  }
}

namespace {

Eigen::MatrixXd coordsMatrix(const std::vector<AffineLieElement>& gens) {
  Eigen::MatrixXd m(6, static_cast<int>(gens.size()));
  for (size_t i = 0; i < gens.size(); ++i) m.col(static_cast<int>(i)) = gens[i].coords();
  return m;
}

int numericalRank(const Eigen::MatrixXd& m, double tol = 1e-9) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  const double cutoff = tol * std::max(1.0, s.size() > 0 ? s(0) : 0.0);
  int r = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > cutoff) ++r;
  return r;
}

/// Orthonormal basis (columns) of the span of the given coordinate columns.
Eigen::MatrixXd spanBasis(const Eigen::MatrixXd& m, double tol = 1e-9) {
  if (m.cols() == 0) return Eigen::MatrixXd(m.rows(), 0);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  const double cutoff = tol * std::max(1.0, s(0));
  int r = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > cutoff) ++r;
  return svd.matrixU().leftCols(r);
}

enum class LinearType { Rotation, RealSemisimple, Nilpotent, Zero };

LinearType linearTypeOf(const Eigen::Matrix2d& a) {
  if (a.norm() <= 1e-9) return LinearType::Zero;
  const double tr = a.trace();
  const double det = a.determinant();
  const double disc = tr * tr - 4.0 * det;
  if (disc < -1e-9 * std::max(1.0, a.squaredNorm())) return LinearType::Rotation;
  const double lamMax = std::max(std::abs((tr + std::sqrt(std::max(disc, 0.0))) / 2.0),
                                 std::abs((tr - std::sqrt(std::max(disc, 0.0))) / 2.0));
  if (lamMax <= 1e-9 * std::max(1.0, a.norm())) return LinearType::Nilpotent;
  return LinearType::RealSemisimple;
}

}  // namespace

int translationSubspaceDim(const SubgroupGeometry& geo) {
  if (geo.dim == 0) return 0;
  Eigen::MatrixXd basisM = spanBasis(coordsMatrix(geo.generators));
  // Elements of the span whose linear block vanishes.
  Eigen::MatrixXd linRows = basisM.topRows(4);
  return static_cast<int>(basisM.cols()) - numericalRank(linRows);
}

SubgroupSpec classifySLSubalgebra(const std::vector<AffineLieElement>& gens) {
  auto sl = [](Family f) { return SubgroupSpec{f, 0, 0.0, Ambient::SL2xR2}; };
  Eigen::MatrixXd basisM = spanBasis(coordsMatrix(gens));
  const int dim = static_cast<int>(basisM.cols());
  if (dim == 0) return sl(Family::Trivial);

  const int linDim = numericalRank(basisM.topRows(4));
  const int transDim = dim - linDim;

  auto columnElement = [&](int j) { return AffineLieElement::fromCoords(basisM.col(j), 2); };
  // A representative with nonzero linear part (maximizing the linear norm).
  auto linearRep = [&]() -> AffineLieElement {
    int best = 0;
    double bestN = -1.0;
    for (int j = 0; j < dim; ++j) {
      const double n = basisM.col(j).head(4).norm();
      if (n > bestN) {
        bestN = n;
        best = j;
      }
    }
    return columnElement(best);
  };

  if (dim == 1) {
    if (transDim == 1) return sl(Family::R2);  // one-parameter translation group
    AffineLieElement x = linearRep();
    Eigen::Matrix2d a = x.linearGen();
    switch (linearTypeOf(a)) {
      case LinearType::Rotation: return sl(Family::Trivial);  // SO(2) conjugate
      case LinearType::RealSemisimple: return sl(Family::SL2);
      case LinearType::Nilpotent: {
        // Translation component transverse to Im(A) distinguishes N from <e1>.
        Eigen::Vector2d im = a.col(0).norm() > a.col(1).norm() ? a.col(0) : a.col(1);
        im.normalize();
        Eigen::Vector2d b = x.translationGen();
        const double transverse = std::abs(-im(1) * b(0) + im(0) * b(1));
        return transverse > 1e-9 * (1.0 + b.norm()) ? sl(Family::N) : sl(Family::SL2);
      }
      case LinearType::Zero: return sl(Family::Trivial);
    }
  }

  if (dim == 2) {
    if (transDim == 2) return sl(Family::R2);
    if (linDim == 2) return sl(Family::SL2);  // Borel of sl2
    // linDim = 1, transDim = 1.
    AffineLieElement x = linearRep();
    const Eigen::Matrix2d a = x.linearGen();
    if (linearTypeOf(a) == LinearType::RealSemisimple) return sl(Family::S);
    if (linearTypeOf(a) == LinearType::Nilpotent) {
      // Translation direction inside the span.
      Eigen::MatrixXd linRows = basisM.topRows(4);
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(linRows, Eigen::ComputeFullV);
      Eigen::VectorXd nullCoef = svd.matrixV().col(1);
      Eigen::VectorXd tcoords = basisM * nullCoef;
      Eigen::Vector2d tdir = tcoords.tail(2);
      tdir.normalize();
      Eigen::Vector2d im = a.col(0).norm() > a.col(1).norm() ? a.col(0) : a.col(1);
      im.normalize();
      // Residue of b modulo Im(A) + translation direction.
      Eigen::Matrix2d cols;
      cols.col(0) = im;
      cols.col(1) = tdir;
      Eigen::Vector2d b = x.translationGen();
      if (numericalRank(cols) == 2) return sl(Family::L);  // b absorbable
      const double transverse = std::abs(-im(1) * b(0) + im(0) * b(1));
      return transverse > 1e-9 * (1.0 + b.norm()) ? sl(Family::M) : sl(Family::L);
    }
    throw std::runtime_error("classifySLSubalgebra: unexpected 2-dim subalgebra");
  }

  if (dim == 3) {
    if (linDim == 3) return sl(Family::SL2);
    if (transDim == 2 && linDim == 1) {
      AffineLieElement x = linearRep();
      if (linearTypeOf(x.linearGen()) == LinearType::Rotation) return sl(Family::R2);
      return sl(Family::SL2R2);
    }
    return sl(Family::SL2R2);
  }
  return sl(Family::SL2R2);
}

SubgroupSpec intersectWithSL(const SubgroupSpec& input) {
  SubgroupSpec s = normalizeEquivalence(input);
  if (inSLBlock(s)) return SubgroupSpec{s.family, s.index, s.param, Ambient::SL2xR2};
  SubgroupGeometry geo = realize(s);
  // Solve trace(linearGen) = 0 on the generator span.
  Eigen::MatrixXd basisM = spanBasis(coordsMatrix(geo.generators));
  const int d = static_cast<int>(basisM.cols());
  Eigen::RowVectorXd traceFn(d);
  for (int j = 0; j < d; ++j) traceFn(j) = basisM(0, j) + basisM(3, j);
  std::vector<AffineLieElement> kernel;
  if (traceFn.norm() <= 1e-12) {
    for (int j = 0; j < d; ++j) kernel.push_back(AffineLieElement::fromCoords(basisM.col(j), 2));
  } else {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(traceFn, Eigen::ComputeFullV);
    for (int j = 1; j < d; ++j) {
      Eigen::VectorXd combo = basisM * svd.matrixV().col(j);
      kernel.push_back(AffineLieElement::fromCoords(combo, 2));
    }
  }
  return classifySLSubalgebra(kernel);
}

bool isCompactClass(const SubgroupSpec& normalized) {
  return normalized.family == Family::Trivial;
}

bool inSLBlock(const SubgroupSpec& normalized) {
  switch (normalized.family) {
    case Family::Trivial:
    case Family::R2:
    case Family::SL2:
    case Family::S:
    case Family::L:
    case Family::M:
    case Family::N:
    case Family::SL2R2:
      return true;
    default:
      return false;
  }
}

namespace {

AffineElement conjSwap() {
  Eigen::Matrix2d m;
  m << 0, 1, 1, 0;
  return AffineElement(m, Eigen::Vector2d::Zero());
}

AffineElement conjRot90() {
  Eigen::Matrix2d m;
  m << 0, -1, 1, 0;
  return AffineElement(m, Eigen::Vector2d::Zero());
}

SubgroupSpec pat(Family f, int index, double param = 0.0) {
  return SubgroupSpec{f, index, param, Ambient::GL2xR2};
}

}  // namespace

std::vector<LatticeEdge> inclusionLattice() {
  const AffineElement id = AffineElement::identity(2);
  const AffineElement sw = conjSwap();
  const AffineElement rot = conjRot90();
  std::vector<LatticeEdge> edges;
  auto add = [&](SubgroupSpec c, SubgroupSpec p, EdgeParamRule r, AffineElement g,
                 std::string label) {
    edges.push_back(LatticeEdge{c, p, r, std::move(g), std::move(label)});
  };
  add(pat(Family::B, 6), pat(Family::B, 7, -3), EdgeParamRule::BothFixed, id, "B6<B7(-3)");
  add(pat(Family::A, 5), pat(Family::B, 7), EdgeParamRule::SameParam, id, "A5(a)<B7(a)");
  add(pat(Family::B, 4), pat(Family::B, 7), EdgeParamRule::SameParam, id, "B4(b)<B7(b)");
  add(pat(Family::B, 5), pat(Family::B, 7, -1), EdgeParamRule::BothFixed, id, "B5<B7(-1)");
  add(pat(Family::B, 3), pat(Family::B, 6), EdgeParamRule::BothFixed, id, "B3<B6");
  add(pat(Family::A, 1, 3), pat(Family::B, 3), EdgeParamRule::BothFixed, sw, "A1(3)<B3");
  add(pat(Family::A, 3), pat(Family::A, 5), EdgeParamRule::SameParam, id, "A3(a)<A5(a)");
  add(pat(Family::A, 1), pat(Family::A, 3), EdgeParamRule::SameParam, id, "A1(a)<A3(a)");
  add(pat(Family::B, 1), pat(Family::B, 4), EdgeParamRule::SameParam, id, "B1(b)<B4(b)");
  add(pat(Family::A, 1), pat(Family::B, 1), EdgeParamRule::SameParam, id, "A1(b)<B1(b)");
  add(pat(Family::A, 3), pat(Family::B, 4), EdgeParamRule::NegatedParam, sw, "A3(a)<B4(-a)");
  add(pat(Family::B, 2), pat(Family::B, 4, 1), EdgeParamRule::BothFixed, id, "B2<B4(1)");
  add(pat(Family::A, 4), pat(Family::B, 5), EdgeParamRule::BothFixed, rot, "A4<B5");
  add(pat(Family::A, 2), pat(Family::A, 4), EdgeParamRule::BothFixed, id, "A2<A4");
  add(pat(Family::A, 2), pat(Family::B, 2), EdgeParamRule::BothFixed, id, "A2<B2");
  add(pat(Family::A, 2), pat(Family::A, 3, -1), EdgeParamRule::BothFixed, sw, "A2<A3(-1)");
  add(pat(Family::A, 4), pat(Family::A, 5, 1), EdgeParamRule::BothFixed, id, "A4<A5(1)");
  return edges;
}

bool certifyEdge(const LatticeEdge& edge, double param, double tol) {
  double childParam = edge.child.param;
  double parentParam = edge.parent.param;
  if (edge.rule == EdgeParamRule::SameParam) {
    childParam = param;
    parentParam = param;
  } else if (edge.rule == EdgeParamRule::NegatedParam) {
    childParam = param;
    parentParam = -param;
  }
  auto childGens = rawGenerators(edge.child.family, edge.child.index, childParam, Ambient::GL2xR2);
  auto parentGens =
      rawGenerators(edge.parent.family, edge.parent.index, parentParam, Ambient::GL2xR2);
  Eigen::MatrixXd parentSpan = spanBasis(coordsMatrix(parentGens));
  for (const auto& x : childGens) {
    AffineLieElement moved = adjoint(edge.conjugator, x);
    Eigen::VectorXd c = moved.coords();
    Eigen::VectorXd residual = c - parentSpan * (parentSpan.transpose() * c);
    if (residual.norm() > tol * (1.0 + c.norm())) return false;
  }
  return true;
}

}  // namespace properpairs
