#pragma once

// Closed expression trees for orientation-preserving analytic maps of I, S1
// and R, with pointwise evaluation, derivatives and inversion.

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "cliqueforest/errors.hpp"
#include "cliqueforest/manifold.hpp"

namespace cliqueforest {

enum class BumpBasis { Polynomial, Trigonometric };

/// One perturbation term of a synthesized map.
///
/// Polynomial (interval):  c * x^k (1-x)^k * T(x),  T(x) = sum_j shape[j] x^j.
/// Trigonometric (circle lifts):  c * (shape[0] sin(2 pi k x) + shape[1] cos(2 pi k x)).
///
/// Polynomial bumps vanish at 0 and 1; trigonometric ones are 1-periodic, so
/// adding them to a degree-one lift keeps it a lift.
struct Bump {
  BumpBasis basis = BumpBasis::Polynomial;
  double coefficient = 0.0;
  int stage = 1;
  int shape_exponent = 1;
  std::vector<double> shape{1.0};

  double shape_value(double x) const {
    if (basis == BumpBasis::Polynomial) {
      return std::pow(x * (1.0 - x), shape_exponent) * horner(x);
    }
    const double w = 2.0 * std::numbers::pi * shape_exponent;
    return trig(0) * std::sin(w * x) + trig(1) * std::cos(w * x);
  }

  double shape_derivative(double x) const {
    if (basis == BumpBasis::Polynomial) {
      const int k = shape_exponent;
      const double q = x * (1.0 - x);
      const double dq = k * std::pow(q, k - 1) * (1.0 - 2.0 * x);
      return dq * horner(x) + std::pow(q, k) * horner_derivative(x);
    }
    const double w = 2.0 * std::numbers::pi * shape_exponent;
    return w * (trig(0) * std::cos(w * x) - trig(1) * std::sin(w * x));
  }

  double value(double x) const { return coefficient * shape_value(x); }
  double derivative(double x) const { return coefficient * shape_derivative(x); }

  friend bool operator==(const Bump&, const Bump&) = default;

 private:
  double horner(double x) const {
    double acc = 0.0;
    for (auto it = shape.rbegin(); it != shape.rend(); ++it) acc = acc * x + *it;
    return acc;
  }
  double horner_derivative(double x) const {
    double acc = 0.0;
    for (std::size_t j = shape.size(); j-- > 1;) acc = acc * x + static_cast<double>(j) * shape[j];
    return acc;
  }
  double trig(std::size_t j) const { return j < shape.size() ? shape[j] : 0.0; }
};

namespace detail {
struct ExprNode;
}

/// Immutable, shareable expression tree. Copies share structure.
class DiffeoExpr {
 public:
  enum class Kind { Identity, Mobius, Rotation, SineShear, Translation, Perturbed, Compose, Inverse, Power };

  DiffeoExpr();

  static DiffeoExpr identity(Manifold m);
  /// x -> a x / ((a-1) x + 1) on I.
  static DiffeoExpr mobius(double alpha);
  /// Rotation of S1 by theta radians; lift x -> x + theta / (2 pi).
  static DiffeoExpr rotation(double theta);
  /// x -> sin(a x) / 2 + x on R. Strictly increasing only for 0 < |a| <= 2.
  static DiffeoExpr sine_shear(double a);
  static DiffeoExpr translation(double c);
  /// x -> x + sum of bumps, on I (polynomial bumps) or S1 (trigonometric bumps).
  static DiffeoExpr perturbed(Manifold m, std::vector<Bump> bumps);
  /// compose({a, b, c}) is a o b o c (c applied first).
  static DiffeoExpr compose(std::vector<DiffeoExpr> parts);
  static DiffeoExpr inverse(DiffeoExpr e);
  static DiffeoExpr power(DiffeoExpr e, int k);

  Kind kind() const;
  Manifold manifold() const;
  /// alpha, theta, a or c for the primitive kinds; 0 otherwise.
  double parameter() const;
  int exponent() const;
  const std::vector<DiffeoExpr>& children() const;
  const std::vector<Bump>& bumps() const;

 private:
  explicit DiffeoExpr(std::shared_ptr<const detail::ExprNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const detail::ExprNode> node_;
};

namespace detail {

struct ExprNode {
  DiffeoExpr::Kind kind = DiffeoExpr::Kind::Identity;
  Manifold manifold = Manifold::IntervalI;
  double parameter = 0.0;
  int exponent = 0;
  std::vector<DiffeoExpr> children;
  std::vector<Bump> bumps;
};

inline constexpr double kInverseTolerance = 1e-14;
inline constexpr int kInverseMaxIterations = 200;

inline double clamp_to_model(Manifold m, double x) {
  return m == Manifold::IntervalI ? std::clamp(x, 0.0, 1.0) : x;
}

double apply(const DiffeoExpr& e, double x);
double apply_inverse(const DiffeoExpr& e, double y);
double slope(const DiffeoExpr& e, double x);

/// Monotone root search for e(x) = y: bracket, then Newton safeguarded by
/// bisection.
inline double numeric_inverse(const DiffeoExpr& e, double y) {
  const Manifold m = e.manifold();
  double lo = 0.0;
  double hi = 1.0;
  if (m == Manifold::IntervalI) {
    y = std::clamp(y, 0.0, 1.0);
  } else {
    double width = 1.0;
    lo = y - width;
    hi = y + width;
    int expand = 0;
    while (apply(e, lo) > y) {
      if (++expand > 64) throw InvariantBreach("inverse: cannot bracket from below", y);
      width *= 2.0;
      lo = y - width;
    }
    width = 1.0;
    expand = 0;
    while (apply(e, hi) < y) {
      if (++expand > 64) throw InvariantBreach("inverse: cannot bracket from above", y);
      width *= 2.0;
      hi = y + width;
    }
  }

  double x = std::clamp(y, lo, hi);
  for (int iter = 0; iter < kInverseMaxIterations; ++iter) {
    const double fx = apply(e, x) - y;
    if (fx == 0.0) return x;
    if (fx < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    const double scale = std::max(1.0, std::fabs(x));
    if (hi - lo <= 1e-16 * scale) return 0.5 * (lo + hi);
    const double d = slope(e, x);
    double next = d > 0.0 ? x - fx / d : lo - 1.0;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::fabs(next - x) <= 1e-16 * scale) return next;
    x = next;
  }
  if (hi - lo > kInverseTolerance * std::max(1.0, std::fabs(x))) {
    throw InvariantBreach("inverse: root search did not converge (non-monotone expression?)", y);
  }
  return x;
}

inline double apply(const DiffeoExpr& e, double x) {
  using K = DiffeoExpr::Kind;
  switch (e.kind()) {
    case K::Identity: return x;
    case K::Mobius: {
      const double a = e.parameter();
      return std::clamp(a * x / ((a - 1.0) * x + 1.0), 0.0, 1.0);
    }
    case K::Rotation: return x + e.parameter() / (2.0 * std::numbers::pi);
    case K::SineShear: return 0.5 * std::sin(e.parameter() * x) + x;
    case K::Translation: return x + e.parameter();
    case K::Perturbed: {
      double y = x;
      for (const Bump& b : e.bumps()) y += b.value(x);
      return clamp_to_model(e.manifold(), y);
    }
    case K::Compose: {
      const auto& parts = e.children();
      for (auto it = parts.rbegin(); it != parts.rend(); ++it) x = apply(*it, x);
      return x;
    }
    case K::Inverse: return apply_inverse(e.children().front(), x);
    case K::Power: {
      const auto& base = e.children().front();
      const int k = e.exponent();
      for (int i = 0; i < std::abs(k); ++i) x = k > 0 ? apply(base, x) : apply_inverse(base, x);
      return x;
    }
  }
  return x;
}

inline double apply_inverse(const DiffeoExpr& e, double y) {
  using K = DiffeoExpr::Kind;
  switch (e.kind()) {
    case K::Identity: return y;
    case K::Mobius: {
      const double a = e.parameter();
      return std::clamp(y / ((1.0 - a) * y + a), 0.0, 1.0);
    }
    case K::Rotation: return y - e.parameter() / (2.0 * std::numbers::pi);
    case K::Translation: return y - e.parameter();
    case K::SineShear:
    case K::Perturbed: return numeric_inverse(e, y);
    case K::Compose: {
      for (const auto& part : e.children()) y = apply_inverse(part, y);
      return y;
    }
    case K::Inverse: return apply(e.children().front(), y);
    case K::Power: {
      const auto& base = e.children().front();
      const int k = e.exponent();
      for (int i = 0; i < std::abs(k); ++i) y = k > 0 ? apply_inverse(base, y) : apply(base, y);
      return y;
    }
  }
  return y;
}

inline double slope(const DiffeoExpr& e, double x) {
  using K = DiffeoExpr::Kind;
  switch (e.kind()) {
    case K::Identity:
    case K::Rotation:
    case K::Translation: return 1.0;
    case K::Mobius: {
      const double a = e.parameter();
      const double den = (a - 1.0) * x + 1.0;
      return a / (den * den);
    }
    case K::SineShear: {
      const double a = e.parameter();
      return 0.5 * a * std::cos(a * x) + 1.0;
    }
    case K::Perturbed: {
      double d = 1.0;
      for (const Bump& b : e.bumps()) d += b.derivative(x);
      return d;
    }
    case K::Compose: {
      double d = 1.0;
      const auto& parts = e.children();
      for (auto it = parts.rbegin(); it != parts.rend(); ++it) {
        d *= slope(*it, x);
        x = apply(*it, x);
      }
      return d;
    }
    case K::Inverse: {
      const auto& base = e.children().front();
      return 1.0 / slope(base, apply_inverse(base, x));
    }
    case K::Power: {
      const auto& base = e.children().front();
      const int k = e.exponent();
      double d = 1.0;
      for (int i = 0; i < std::abs(k); ++i) {
        if (k > 0) {
          d *= slope(base, x);
          x = apply(base, x);
        } else {
          x = apply_inverse(base, x);
          d /= slope(base, x);
        }
      }
      return d;
    }
  }
  return 1.0;
}

inline std::shared_ptr<const ExprNode> identity_node(Manifold m) {
  auto n = std::make_shared<ExprNode>();
  n->kind = DiffeoExpr::Kind::Identity;
  n->manifold = m;
  return n;
}

inline void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw DomainError(std::string(what) + " must be finite");
}

}  // namespace detail

inline DiffeoExpr::DiffeoExpr() : node_(detail::identity_node(Manifold::IntervalI)) {}

inline DiffeoExpr::Kind DiffeoExpr::kind() const { return node_->kind; }
inline Manifold DiffeoExpr::manifold() const { return node_->manifold; }
inline double DiffeoExpr::parameter() const { return node_->parameter; }
inline int DiffeoExpr::exponent() const { return node_->exponent; }
inline const std::vector<DiffeoExpr>& DiffeoExpr::children() const { return node_->children; }
inline const std::vector<Bump>& DiffeoExpr::bumps() const { return node_->bumps; }

inline DiffeoExpr DiffeoExpr::identity(Manifold m) { return DiffeoExpr(detail::identity_node(m)); }

inline DiffeoExpr DiffeoExpr::mobius(double alpha) {
  detail::require_finite(alpha, "mobius alpha");
  if (!(alpha > 0.0)) throw DomainError("mobius alpha must be positive");
  auto n = std::make_shared<detail::ExprNode>();
  n->kind = Kind::Mobius;
  n->manifold = Manifold::IntervalI;
  n->parameter = alpha;
  return DiffeoExpr(std::move(n));
}

inline DiffeoExpr DiffeoExpr::rotation(double theta) {
  detail::require_finite(theta, "rotation angle");
  auto n = std::make_shared<detail::ExprNode>();
  n->kind = Kind::Rotation;
  n->manifold = Manifold::CircleS1;
  n->parameter = theta;
  return DiffeoExpr(std::move(n));
}

inline DiffeoExpr DiffeoExpr::sine_shear(double a) {
  detail::require_finite(a, "sine shear parameter");
  if (a == 0.0) throw DomainError("sine shear parameter must be nonzero");
  if (std::fabs(a) > 2.0) {
    throw InvariantBreach("sine shear with |a| > 2 is not monotone", a);
  }
  auto n = std::make_shared<detail::ExprNode>();
  n->kind = Kind::SineShear;
  n->manifold = Manifold::LineR;
  n->parameter = a;
  return DiffeoExpr(std::move(n));
}

inline DiffeoExpr DiffeoExpr::translation(double c) {
  detail::require_finite(c, "translation");
  auto n = std::make_shared<detail::ExprNode>();
  n->kind = Kind::Translation;
  n->manifold = Manifold::LineR;
  n->parameter = c;
  return DiffeoExpr(std::move(n));
}

inline DiffeoExpr DiffeoExpr::perturbed(Manifold m, std::vector<Bump> bumps) {
  if (m == Manifold::LineR) throw DomainError("perturbed maps live on I or S1");
  const BumpBasis want = m == Manifold::IntervalI ? BumpBasis::Polynomial : BumpBasis::Trigonometric;
  for (const Bump& b : bumps) {
    if (b.basis != want) throw DomainError("bump basis does not match the manifold");
    if (b.shape_exponent < 1) throw DomainError("bump shape exponent must be positive");
    if (b.shape.empty()) throw DomainError("bump shape polynomial is empty");
    detail::require_finite(b.coefficient, "bump coefficient");
    for (double t : b.shape) detail::require_finite(t, "bump shape coefficient");
  }
  auto n = std::make_shared<detail::ExprNode>();
  n->kind = Kind::Perturbed;
  n->manifold = m;
  n->bumps = std::move(bumps);
  DiffeoExpr e(std::move(n));

  // Monotonicity on the default grid.
  const Grid grid = default_grid(m);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(detail::slope(e, grid[i]) > 0.0)) {
      throw InvariantBreach("perturbed map is not increasing", grid[i]);
    }
  }
  return e;
}

inline DiffeoExpr DiffeoExpr::compose(std::vector<DiffeoExpr> parts) {
  if (parts.empty()) throw DomainError("compose needs at least one part");
  const Manifold m = parts.front().manifold();
  for (const auto& p : parts) {
    if (p.manifold() != m) throw DomainError("compose: manifold tags differ");
  }
  auto n = std::make_shared<detail::ExprNode>();
  n->kind = Kind::Compose;
  n->manifold = m;
  n->children = std::move(parts);
  return DiffeoExpr(std::move(n));
}

inline DiffeoExpr DiffeoExpr::inverse(DiffeoExpr e) {
  auto n = std::make_shared<detail::ExprNode>();
  n->kind = Kind::Inverse;
  n->manifold = e.manifold();
  n->children.push_back(std::move(e));
  return DiffeoExpr(std::move(n));
}

inline DiffeoExpr DiffeoExpr::power(DiffeoExpr e, int k) {
  auto n = std::make_shared<detail::ExprNode>();
  n->kind = Kind::Power;
  n->manifold = e.manifold();
  n->exponent = k;
  n->children.push_back(std::move(e));
  return DiffeoExpr(std::move(n));
}

namespace detail {

inline void check_domain(Manifold m, double x) {
  if (!std::isfinite(x)) throw DomainError("evaluation point must be finite");
  if (m == Manifold::IntervalI && (x < 0.0 || x > 1.0)) {
    throw DomainError("point " + std::to_string(x) + " outside [0, 1]");
  }
}

}  // namespace detail

/// Value in model coordinates: [0,1] for I, the lift value for S1, R for R.
inline double evaluate_lift(const DiffeoExpr& e, double x) {
  detail::check_domain(e.manifold(), x);
  return detail::apply(e, x);
}

/// Circle results are reduced into [0, 1).
inline double evaluate(const DiffeoExpr& e, double x) {
  const double y = evaluate_lift(e, x);
  return e.manifold() == Manifold::CircleS1 ? wrap_unit(y) : y;
}

inline double evaluate_inverse(const DiffeoExpr& e, double y) {
  detail::check_domain(e.manifold(), y);
  return detail::apply_inverse(e, y);
}

inline double derivative(const DiffeoExpr& e, double x) {
  detail::check_domain(e.manifold(), x);
  const double d = detail::slope(e, x);
  if (!(d > 0.0)) {
    throw InvariantBreach("derivative " + std::to_string(d) + " is not positive at x = " + std::to_string(x), x);
  }
  return d;
}

/// [a, b] = a o b o a^-1 o b^-1.
inline DiffeoExpr commutator(const DiffeoExpr& a, const DiffeoExpr& b) {
  return DiffeoExpr::compose({a, b, DiffeoExpr::inverse(a), DiffeoExpr::inverse(b)});
}

/// f^i o g o f^-i; returns g itself for i = 0.
inline DiffeoExpr conjugate(const DiffeoExpr& f, const DiffeoExpr& g, int i) {
  if (i == 0) return g;
  return DiffeoExpr::compose({DiffeoExpr::power(f, i), g, DiffeoExpr::power(f, -i)});
}

}  // namespace cliqueforest
