#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <numeric>
#include <sstream>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "cliqueforest/obstructions/heisenberg.hpp"
#include "cliqueforest/obstructions/quadruple.hpp"
#include "cliqueforest/obstructions/remark.hpp"
#include "oracles.hpp"

using namespace cliqueforest;
using Real = boost::multiprecision::cpp_bin_float_50;

namespace {

CommutationOracle abelian_ball(int radius) {
  std::vector<std::pair<int, int>> elems;
  std::vector<std::string> labels;
  for (int a = -radius; a <= radius; ++a)
    for (int b = -radius; b <= radius; ++b)
      if (std::abs(a) + std::abs(b) <= radius) {
        elems.emplace_back(a, b);
        labels.push_back("(" + std::to_string(a) + "," + std::to_string(b) + ")");
      }
  return make_group_oracle(elems, labels, std::pair{0, 0}, [](auto p, auto q) {
    return std::pair{p.first + q.first, p.second + q.second};
  });
}

CommutationOracle symmetric_group_3() {
  std::vector<std::array<int, 3>> perms;
  std::array<int, 3> p{0, 1, 2};
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  std::vector<std::string> labels;
  for (const auto& q : perms) labels.push_back(std::to_string(q[0]) + std::to_string(q[1]) + std::to_string(q[2]));
  return make_group_oracle(perms, labels, std::array<int, 3>{0, 1, 2}, [](const auto& a, const auto& b) {
    std::array<int, 3> c{};
    for (int i = 0; i < 3; ++i) c[i] = a[b[i]];
    return c;
  });
}

Real hp_shear(const Real& a, const Real& x) { return sin(a * x) / 2 + x; }

// Inverse of x -> sin(a x)/2 + x by bisection on [y - 1/2, y + 1/2]. Newton
// is unsafe here: for a = 2 the derivative vanishes at isolated points.
Real hp_shear_inverse(const Real& a, const Real& y) {
  Real lo = y - Real(0.5), hi = y + Real(0.5);
  for (int i = 0; i < 180; ++i) {
    const Real mid = (lo + hi) / 2;
    (hp_shear(a, mid) < y ? lo : hi) = mid;
  }
  return (lo + hi) / 2;
}

}  // namespace

TEST(Heisenberg, MatrixLaw) {
  EXPECT_EQ(commutator(kHeisenbergX, kHeisenbergY), kHeisenbergZ);
  EXPECT_EQ(commutator(kHeisenbergY, kHeisenbergX), kHeisenbergZ.inverse());
  const UnipotentMatrix m{3, -2, 7};
  EXPECT_EQ(m * m.inverse(), UnipotentMatrix{});
  EXPECT_EQ(m.inverse() * m, UnipotentMatrix{});
  // Product agrees with full 3x3 integer multiplication.
  const UnipotentMatrix n{-1, 4, 2};
  const auto mm = m.matrix(), nn = n.matrix();
  oracle::Mat3 a{}, b{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a[3 * i + j] = mm[i][j], b[3 * i + j] = nn[i][j];
  const oracle::Mat3 c = oracle::mat_mul(a, b);
  const auto pm = (m * n).matrix();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_EQ(pm[i][j], c[3 * i + j]);
  EXPECT_THROW(UnipotentMatrix::from_matrix({{{1, 0, 0}, {1, 1, 0}, {0, 0, 1}}}), DomainError);
}

TEST(Heisenberg, BallSizesMatchIndependentEnumeration) {
  const auto sizes = oracle::heisenberg_ball_sizes(4);
  EXPECT_EQ(sizes[1], 7u);
  for (int r = 1; r <= 4; ++r) {
    const ElementBall ball = heisenberg_ball_elements(r);
    EXPECT_EQ(ball.elements.size(), sizes[r]) << r;
    EXPECT_EQ(ball.labels.size(), ball.elements.size());
    if (r > 1) {
      EXPECT_GT(sizes[r], sizes[r - 1]);
    }
  }
  EXPECT_THROW(heisenberg_ball(0), DomainError);
}

TEST(Heisenberg, OracleBasics) {
  const CommutationOracle o = heisenberg_ball(1);
  ASSERT_EQ(o.size(), 7u);
  EXPECT_EQ(o.labels(), (std::vector<std::string>{"e", "x", "x^-1", "y", "y^-1", "z", "z^-1"}));
  EXPECT_TRUE(o.is_identity(0));
  for (std::size_t i = 0; i < o.size(); ++i) {
    EXPECT_TRUE(o.commute(0, i));
    EXPECT_TRUE(o.commute(i, i));
    EXPECT_TRUE(o.commute(5, i));
  }
  EXPECT_FALSE(o.commute(1, 3));
}

TEST(Quadruple, HeisenbergRadiusTwo) {
  const CommutationOracle o = heisenberg_ball(2);
  const auto cert = find_centralizer_quadruple(o);
  ASSERT_TRUE(cert.has_value());
  EXPECT_TRUE(cert->reverify(o));
  const std::array<std::size_t, 4> ids{cert->g1, cert->h1, cert->g2, cert->h2};
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_FALSE(o.is_identity(ids[i]));
    for (std::size_t j = i + 1; j < 4; ++j) EXPECT_NE(ids[i], ids[j]);
  }
  // Re-verify with exact matrices, independent of the tabulated predicate.
  const ElementBall ball = heisenberg_ball_elements(2);
  const auto& E = ball.elements;
  EXPECT_EQ(commutator(E[cert->g1], E[cert->h1]), UnipotentMatrix{});
  EXPECT_EQ(commutator(E[cert->g2], E[cert->h1]), UnipotentMatrix{});
  EXPECT_EQ(commutator(E[cert->g2], E[cert->h2]), UnipotentMatrix{});
  EXPECT_NE(commutator(E[cert->g1], E[cert->h2]), UnipotentMatrix{});
  // Deterministic.
  const auto again = find_centralizer_quadruple(heisenberg_ball(2));
  EXPECT_EQ(again->g1_label + again->h1_label + again->g2_label + again->h2_label,
            cert->g1_label + cert->h1_label + cert->g2_label + cert->h2_label);
  const json j = to_json(*cert, o);
  EXPECT_TRUE(j["reverified"].get<bool>());
  EXPECT_EQ(j["facts"].size(), 4u);
}

TEST(Quadruple, NoneForAbelianOrFreeLike) {
  EXPECT_FALSE(find_centralizer_quadruple(abelian_ball(3)).has_value());
  const CommutationOracle lonely({"e", "a", "b", "A", "B"}, {true, false, false, false, false},
                                 [](std::size_t i, std::size_t j) { return i == j || i == 0 || j == 0; });
  EXPECT_FALSE(find_centralizer_quadruple(lonely).has_value());
  EXPECT_FALSE(find_centralizer_quadruple(symmetric_group_3()).has_value());
}

TEST(Center, ExamplesAndConsistency) {
  const CommutationOracle h2 = heisenberg_ball(2);
  const CenterCheck c = center_nonabelian_check(h2);
  ASSERT_TRUE(c.found);
  EXPECT_EQ(h2.label(c.z), "z");
  EXPECT_FALSE(h2.commute(c.a, c.b));
  EXPECT_FALSE(center_nonabelian_check(abelian_ball(2)).found);
  EXPECT_FALSE(center_nonabelian_check(symmetric_group_3()).found);
  for (int r = 1; r <= 3; ++r) {
    if (center_nonabelian_check(heisenberg_ball(r)).found) {
      EXPECT_TRUE(find_centralizer_quadruple(heisenberg_ball(r + 1)).has_value()) << r;
    }
  }
}

TEST(Oracle, RejectsInconsistentPredicates) {
  EXPECT_THROW(CommutationOracle({"a", "b"}, {false, false}, [](std::size_t i, std::size_t j) { return i <= j; }),
               DomainError);
  EXPECT_THROW(CommutationOracle({"a"}, {false}, [](std::size_t, std::size_t) { return false; }), DomainError);
  EXPECT_THROW(CommutationOracle({"e", "a", "b"}, {true, false, false},
                                 [](std::size_t i, std::size_t j) { return i == j || (i + j == 3); }),
               DomainError);
  EXPECT_THROW(CommutationOracle({"a"}, {}, [](std::size_t, std::size_t) { return true; }), DomainError);
}

TEST(OracleText, ListAndBall) {
  std::istringstream list("# elements\nx: 1 1 0  0 1 0  0 0 1\ny: 1 0 0 0 1 1 0 0 1\n");
  const ElementBall plain = parse_oracle_text(list);
  EXPECT_EQ(plain.labels, (std::vector<std::string>{"x", "y"}));
  std::istringstream gens("radius 1\nx: 1 1 0  0 1 0  0 0 1\ny: 1 0 0 0 1 1 0 0 1\n");
  const ElementBall ball = parse_oracle_text(gens);
  EXPECT_EQ(ball.elements.size(), 5u);
  EXPECT_EQ(ball.labels.front(), "e");
}

TEST(OracleText, ErrorsCarryLineNumbers) {
  auto line_of = [](const std::string& text) -> std::size_t {
    std::istringstream in(text);
    try {
      parse_oracle_text(in);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  EXPECT_EQ(line_of("x: 1 1 0 0 1 0 0 0 1\ny: 2 0 0 0 1 0 0 0 1\n"), 2u);
  EXPECT_EQ(line_of("x: 1 1 0 0 1 0 0 0\n"), 1u);
  EXPECT_EQ(line_of("\nx 1 1 0 0 1 0 0 0 1\n"), 2u);
  EXPECT_EQ(line_of("x: 1 1 0 0 1 0 0 0 1\nw: 1 1 0 0 1 0 0 0 1\n"), 2u);
  EXPECT_EQ(line_of("radius zero\n"), 1u);
  EXPECT_EQ(line_of("# nothing\n"), 1u);
  EXPECT_EQ(line_of("x: 1 1 0 0 1 0 0 0 1 5\n"), 1u);
}

TEST(Remark, ShearTranslationFamily) {
  const RemarkReport r = remark_counterexample_suite(1.0, 2.0, 3);
  EXPECT_EQ(r.grid.size(), 2048u);
  EXPECT_LT(r.shear_translation.sup, 1e-12);
  EXPECT_LT(r.translations.sup, 1e-12);
  ASSERT_EQ(r.powers.size(), 3u);
  for (const auto& p : r.powers) EXPECT_GT(p.sup, 1e-3) << p.n;
  EXPECT_THROW(remark_counterexample_suite(1.0, 1.0, 1), DomainError);
  EXPECT_THROW(remark_counterexample_suite(0.0, 1.0, 1), DomainError);
  EXPECT_THROW(remark_counterexample_suite(1.0, 2.0, 0), DomainError);
}

TEST(Remark, PeriodicityOfShear) {
  for (double a : {0.5, 1.0, 1.7, 2.0}) {
    const DiffeoExpr f = DiffeoExpr::sine_shear(a);
    const double t = 2.0 * std::numbers::pi / a;
    const Grid grid = remark_grid(512);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      EXPECT_LT(std::fabs(evaluate(f, grid[i] + t) - evaluate(f, grid[i]) - t), 1e-12);
    }
  }
}

// 50-digit evaluation of [f1, f2] = f1 f2 f1^-1 f2^-1 on the same grid.
TEST(Remark, HighPrecisionAgreement) {
  const RemarkReport r = remark_counterexample_suite(1.0, 2.0, 1);
  const Grid grid = r.grid;
  const Real one = 1, two = 2;
  Real best = 0;
  std::size_t at = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Real x = boost::multiprecision::cpp_bin_float_50(grid[i]);
    const Real y = hp_shear(one, hp_shear(two, hp_shear_inverse(one, hp_shear_inverse(two, x))));
    const Real d = abs(y - x);
    if (d > best) best = d, at = i;
  }
  EXPECT_NEAR(static_cast<double>(best), r.powers[0].sup, 1e-12);
  EXPECT_EQ(grid[at], r.powers[0].at);
  EXPECT_GT(best, Real("1e-3"));
  // Frozen from an independent 40-digit evaluation on 2048 points over [0, 4 pi].
  EXPECT_NEAR(static_cast<double>(best), 0.4810706480012357, 1e-12);
}
