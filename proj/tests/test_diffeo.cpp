#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "cliqueforest/diffeo.hpp"
#include "cliqueforest/dynamics.hpp"
#include "cliqueforest/expr_io.hpp"

using namespace cliqueforest;

namespace {

// Projective action of [[a, b], [c, d]] on the line: x -> (a x + b) / (c x + d).
using Mat2 = std::array<double, 4>;

Mat2 mobius_matrix(double alpha) { return {alpha, 0.0, alpha - 1.0, 1.0}; }

Mat2 mul(const Mat2& p, const Mat2& q) {
  return {p[0] * q[0] + p[1] * q[2], p[0] * q[1] + p[1] * q[3], p[2] * q[0] + p[3] * q[2],
          p[2] * q[1] + p[3] * q[3]};
}

double act(const Mat2& m, double x) { return (m[0] * x + m[1]) / (m[2] * x + m[3]); }

std::vector<DiffeoExpr> interval_samples() {
  Bump b;
  b.coefficient = 0.1;
  b.shape = {1.0, 1.0};
  return {DiffeoExpr::identity(Manifold::IntervalI),
          DiffeoExpr::mobius(2.0),
          DiffeoExpr::mobius(0.3),
          DiffeoExpr::perturbed(Manifold::IntervalI, {b}),
          DiffeoExpr::compose({DiffeoExpr::mobius(2.0), DiffeoExpr::perturbed(Manifold::IntervalI, {b})}),
          DiffeoExpr::inverse(DiffeoExpr::perturbed(Manifold::IntervalI, {b})),
          DiffeoExpr::power(DiffeoExpr::mobius(1.7), -3),
          commutator(DiffeoExpr::mobius(2.5), DiffeoExpr::perturbed(Manifold::IntervalI, {b}))};
}

}  // namespace

TEST(Mobius, PointValues) {
  EXPECT_EQ(evaluate(DiffeoExpr::mobius(2.0), 0.0), 0.0);
  EXPECT_EQ(evaluate(DiffeoExpr::mobius(2.0), 1.0), 1.0);
  EXPECT_EQ(evaluate(DiffeoExpr::mobius(1.37), 1.0), 1.0);
  EXPECT_NEAR(evaluate(DiffeoExpr::mobius(2.0), 0.5), 2.0 / 3.0, 1e-16);
  EXPECT_DOUBLE_EQ(derivative(DiffeoExpr::mobius(2.0), 0.0), 2.0);
  EXPECT_DOUBLE_EQ(derivative(DiffeoExpr::mobius(2.0), 1.0), 0.5);
  EXPECT_EQ(derivative(DiffeoExpr::identity(Manifold::IntervalI), 0.3), 1.0);
}

TEST(Mobius, MatrixOracleCompositionLaw) {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> u(1.0, std::numbers::pi);
  const Grid grid = default_grid(Manifold::IntervalI, 1000);
  for (int t = 0; t < 50; ++t) {
    const double a = u(rng);
    const double b = u(rng);
    const Mat2 ab = mul(mobius_matrix(a), mobius_matrix(b));
    const DiffeoExpr comp = DiffeoExpr::compose({DiffeoExpr::mobius(a), DiffeoExpr::mobius(b)});
    const DiffeoExpr prod = DiffeoExpr::mobius(a * b);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double x = grid[i];
      EXPECT_NEAR(evaluate(comp, x), act(ab, x), 1e-14);
      EXPECT_NEAR(evaluate(comp, x), evaluate(prod, x), 1e-12);
    }
    EXPECT_LT(commutator_residual(DiffeoExpr::mobius(a), DiffeoExpr::mobius(b)), 1e-12);
  }
}

TEST(Mobius, InverseIsReciprocalParameter) {
  const Grid grid = default_grid(Manifold::IntervalI, 256);
  for (double a : {0.2, 1.5, 2.9}) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      EXPECT_NEAR(evaluate_inverse(DiffeoExpr::mobius(a), grid[i]), evaluate(DiffeoExpr::mobius(1.0 / a), grid[i]),
                  1e-14);
    }
  }
}

TEST(Mobius, PowerMatchesParameterPower) {
  const Grid grid = default_grid(Manifold::IntervalI, 128);
  for (int k : {-3, -1, 0, 2, 5}) {
    const DiffeoExpr p = DiffeoExpr::power(DiffeoExpr::mobius(1.3), k);
    const DiffeoExpr q = DiffeoExpr::mobius(std::pow(1.3, k));
    for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_NEAR(evaluate(p, grid[i]), evaluate(q, grid[i]), 1e-13);
  }
}

TEST(Constructors, RejectBadParameters) {
  EXPECT_THROW(DiffeoExpr::mobius(0.0), DomainError);
  EXPECT_THROW(DiffeoExpr::mobius(-1.0), DomainError);
  EXPECT_THROW(DiffeoExpr::mobius(std::nan("")), DomainError);
  EXPECT_THROW(DiffeoExpr::sine_shear(0.0), DomainError);
  EXPECT_THROW(DiffeoExpr::sine_shear(2.5), InvariantBreach);
  EXPECT_NO_THROW(DiffeoExpr::sine_shear(2.0));
  EXPECT_THROW(DiffeoExpr::compose({DiffeoExpr::mobius(2.0), DiffeoExpr::rotation(1.0)}), DomainError);
  EXPECT_THROW(DiffeoExpr::compose({}), DomainError);

  Bump big;
  big.coefficient = 10.0;
  EXPECT_THROW(DiffeoExpr::perturbed(Manifold::IntervalI, {big}), InvariantBreach);
  Bump trig;
  trig.basis = BumpBasis::Trigonometric;
  EXPECT_THROW(DiffeoExpr::perturbed(Manifold::IntervalI, {trig}), DomainError);
  EXPECT_THROW(DiffeoExpr::perturbed(Manifold::LineR, {}), DomainError);
}

TEST(Constructors, DomainChecks) {
  EXPECT_THROW(evaluate(DiffeoExpr::mobius(2.0), 1.5), DomainError);
  EXPECT_THROW(evaluate(DiffeoExpr::mobius(2.0), -0.1), DomainError);
  EXPECT_THROW(evaluate(DiffeoExpr::translation(1.0), INFINITY), DomainError);
  EXPECT_NO_THROW(evaluate(DiffeoExpr::translation(1.0), -100.0));
}

TEST(Invariants, EndpointsFixedOnInterval) {
  for (const auto& e : interval_samples()) {
    EXPECT_LT(std::fabs(evaluate(e, 0.0)), 1e-14) << to_text(e);
    EXPECT_LT(std::fabs(evaluate(e, 1.0) - 1.0), 1e-14) << to_text(e);
  }
}

TEST(Invariants, MonotoneAndPositiveDerivative) {
  const Grid grid = default_grid(Manifold::IntervalI, 1000);
  for (const auto& e : interval_samples()) {
    double prev = -1.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      EXPECT_GT(derivative(e, grid[i]), 0.0) << to_text(e) << " at " << grid[i];
      const double y = evaluate(e, grid[i]);
      EXPECT_GT(y, prev - 1e-15);
      prev = y;
    }
  }
}

TEST(Invariants, DerivativeMatchesFiniteDifference) {
  const double h = 1e-6;
  for (const auto& e : interval_samples()) {
    for (double x : {0.1, 0.35, 0.5, 0.77, 0.9}) {
      const double fd = (evaluate(e, x + h) - evaluate(e, x - h)) / (2 * h);
      EXPECT_NEAR(derivative(e, x), fd, 1e-6) << to_text(e);
    }
  }
}

TEST(Invariants, InversionConsistency) {
  const Grid grid = default_grid(Manifold::IntervalI, 1000);
  for (const auto& e : interval_samples()) {
    const DiffeoExpr inv = DiffeoExpr::inverse(e);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      EXPECT_LT(std::fabs(evaluate(inv, evaluate(e, grid[i])) - grid[i]), 1e-10) << to_text(e);
    }
  }
}

TEST(Circle, RotationLiftsAndCommutes) {
  const DiffeoExpr r = DiffeoExpr::rotation(std::numbers::pi);
  EXPECT_NEAR(evaluate_lift(r, 0.25), 0.75, 1e-16);
  EXPECT_NEAR(evaluate(r, 0.75), 0.25, 1e-15);
  EXPECT_LT(commutator_residual(DiffeoExpr::rotation(1.0), DiffeoExpr::rotation(2.3)), 1e-15);

  Bump b;
  b.basis = BumpBasis::Trigonometric;
  b.coefficient = 0.05;
  b.shape = {1.0, 0.0};
  const DiffeoExpr p = DiffeoExpr::perturbed(Manifold::CircleS1, {b});
  for (double x : {0.0, 0.1, 0.6}) {
    EXPECT_NEAR(evaluate_lift(p, x + 1.0), evaluate_lift(p, x) + 1.0, 1e-14);
    EXPECT_NEAR(evaluate_lift(DiffeoExpr::inverse(p), evaluate_lift(p, x)), x, 1e-13);
  }
}

TEST(Line, SineShearCommutesWithPeriodTranslation) {
  for (double a : {1.0, 2.0, -1.5, 0.3}) {
    const DiffeoExpr f = DiffeoExpr::sine_shear(a);
    const double period = 2.0 * std::numbers::pi / a;
    const DiffeoExpr g = DiffeoExpr::translation(period);
    EXPECT_LT(commutator_residual(f, g), 1e-12);
    for (double x : {0.0, 1.0, 7.5}) EXPECT_NEAR(evaluate(f, x + period), evaluate(f, x) + period, 1e-12);
    EXPECT_LT(commutator_residual(g, DiffeoExpr::translation(1.7)), 1e-13);
  }
  // a = 2: derivative 1 + cos(2x) vanishes at x = pi/2, but the map stays increasing.
  EXPECT_THROW(derivative(DiffeoExpr::sine_shear(2.0), std::numbers::pi / 2), InvariantBreach);
  const DiffeoExpr f2 = DiffeoExpr::sine_shear(2.0);
  EXPECT_NEAR(evaluate_inverse(f2, evaluate(f2, std::numbers::pi / 2)), std::numbers::pi / 2, 1e-7);
}

TEST(Conjugation, ZeroExponentIsIdentityConjugation) {
  const DiffeoExpr g = DiffeoExpr::mobius(2.0);
  const DiffeoExpr f = DiffeoExpr::mobius(3.0);
  EXPECT_EQ(conjugate(f, g, 0).kind(), DiffeoExpr::Kind::Mobius);
  // Mobius maps commute, so any conjugate by f equals g.
  for (double x : {0.2, 0.7}) EXPECT_NEAR(evaluate(conjugate(f, g, 2), x), evaluate(g, x), 1e-13);
}

TEST(Serialization, JsonRoundTripIsExact) {
  for (const auto& e : interval_samples()) {
    const json doc = expr_document(e);
    const DiffeoExpr back = expr_from_document(json::parse(doc.dump()));
    EXPECT_EQ(expr_document(back), doc);
    for (double x : {0.0, 0.13, 0.5, 0.99}) EXPECT_EQ(evaluate(back, x), evaluate(e, x));
  }
}

TEST(Serialization, TextRoundTripIsExact) {
  for (const auto& e : interval_samples()) {
    const DiffeoExpr back = parse_expr(to_text(e));
    EXPECT_EQ(to_text(back), to_text(e));
    for (double x : {0.0, 0.13, 0.5, 0.99}) EXPECT_EQ(evaluate(back, x), evaluate(e, x));
  }
  const DiffeoExpr s = parse_expr("(compose (sine 1) (inverse (translate 6.2831853071795862)))");
  EXPECT_EQ(s.manifold(), Manifold::LineR);
  EXPECT_EQ(s.children().size(), 2u);
}

TEST(Serialization, DecimalStringsCarry17Digits) {
  const double v = 0.1 + 0.2;
  EXPECT_EQ(parse_decimal(format_decimal(v)), v);
  EXPECT_EQ(format_decimal(2.0), "2");
}

TEST(Serialization, MalformedInputRejected) {
  EXPECT_THROW(parse_expr("(mobius)"), Error);
  EXPECT_THROW(parse_expr("(mobius 2"), Error);
  EXPECT_THROW(parse_expr("(frobnicate 2)"), Error);
  EXPECT_THROW(parse_expr("(mobius 2) extra"), Error);
  EXPECT_THROW(expr_from_json(json{{"kind", "mobius"}}), std::exception);
  EXPECT_THROW(expr_from_document(json{{"manifold", "S1"}, {"expr", {{"kind", "mobius"}, {"alpha", "2"}}}}), Error);
}
