#pragma once

// On the real line f_a(x) = sin(ax)/2 + x commutes with the translation
// g_a(x) = x + 2pi/a, and translations commute with each other, yet powers of
// f_a and f_b need not commute. Commutation is not transitive there.

#include <cmath>
#include <numbers>
#include <vector>

#include <json.hpp>

#include "cliqueforest/dynamics.hpp"
#include "cliqueforest/expr_io.hpp"

namespace cliqueforest {

struct PowerResidual {
  int n = 0;
  double sup = 0.0;
  double at = 0.0;
};

struct RemarkReport {
  double a = 0.0;
  double b = 0.0;
  Grid grid;
  Residual shear_translation;  // [f_a, g_a]
  Residual translations;       // [g_a, g_b]
  std::vector<PowerResidual> powers;  // [f_a^n, f_b^n]
};

/// Default grid: 2048 points spanning [0, 4pi] with both ends included.
inline Grid remark_grid(std::size_t points = 2048) { return Grid::closed(0.0, kLineWindow, points - 1); }

inline RemarkReport remark_counterexample_suite(double a, double b, int n_max, const Grid& grid = remark_grid()) {
  if (a == 0.0 || b == 0.0) throw DomainError("remark suite: a and b must be nonzero");
  if (a == b) throw DomainError("remark suite: a and b must differ");
  if (n_max < 1) throw DomainError("remark suite: n_max must be positive");
  const DiffeoExpr fa = DiffeoExpr::sine_shear(a);
  const DiffeoExpr fb = DiffeoExpr::sine_shear(b);
  const DiffeoExpr ga = DiffeoExpr::translation(2.0 * std::numbers::pi / a);
  const DiffeoExpr gb = DiffeoExpr::translation(2.0 * std::numbers::pi / b);
  RemarkReport r;
  r.a = a;
  r.b = b;
  r.grid = grid;
  r.shear_translation = commutator_residual_detail(fa, ga, grid);
  r.translations = commutator_residual_detail(ga, gb, grid);
  for (int n = 1; n <= n_max; ++n) {
    const Residual res = commutator_residual_detail(DiffeoExpr::power(fa, n), DiffeoExpr::power(fb, n), grid);
    r.powers.push_back({n, res.sup, res.at});
  }
  return r;
}

inline nlohmann::json to_json(const RemarkReport& r) {
  nlohmann::json powers = nlohmann::json::array();
  for (const auto& p : r.powers) {
    powers.push_back({{"n", p.n}, {"residual", format_decimal(p.sup)}, {"at", format_decimal(p.at)}});
  }
  return nlohmann::json{{"a", format_decimal(r.a)},
                        {"b", format_decimal(r.b)},
                        {"grid", {{"lo", format_decimal(r.grid.lo)}, {"hi", format_decimal(r.grid.hi)}, {"points", r.grid.size()}}},
                        {"shear_translation", format_decimal(r.shear_translation.sup)},
                        {"translations", format_decimal(r.translations.sup)},
                        {"powers", std::move(powers)}};
}

}  // namespace cliqueforest
