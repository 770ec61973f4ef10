#pragma once

// Pointwise analysis of expression trees: fixed points, commutator residuals
// and evaluation of words over named generators.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cliqueforest/diffeo.hpp"

namespace cliqueforest {

enum class FixedPointKind { Transverse, TangencySuspect };

struct FixedPoint {
  double x = 0.0;
  FixedPointKind kind = FixedPointKind::Transverse;
};

/// Open stretch between consecutive fixed points with the sign of f - id there.
struct FixedPointGap {
  double lo = 0.0;
  double hi = 0.0;
  int sign = 0;
};

struct FixedPointSet {
  Manifold manifold = Manifold::IntervalI;
  std::vector<FixedPoint> points;
  std::vector<FixedPointGap> gaps;
  double residual_tol = 0.0;
  std::size_t grid_cells = 0;
  /// Every grid point is within tolerance of being fixed (identity in disguise).
  bool degenerate = false;

  std::vector<double> xs() const {
    std::vector<double> out;
    out.reserve(points.size());
    for (const auto& p : points) out.push_back(p.x);
    return out;
  }
};

namespace detail {

/// Signed f(x) - x; on the circle the integer part of the lift displacement is
/// removed relative to `shift`.
inline double signed_displacement(const DiffeoExpr& e, double x, double shift) {
  return apply(e, x) - x - shift;
}

}  // namespace detail

/// Fixed points from a grid sign scan refined by bisection. Grid points where
/// |f - id| < tol are reported rather than discarded; those that do not sit
/// between values of opposite sign are flagged as tangency suspects.
inline FixedPointSet fixed_points(const DiffeoExpr& e, std::size_t grid_n = 1024, double tol = 1e-12,
                                  std::optional<Grid> window = std::nullopt) {
  if (grid_n < 2) throw DomainError("fixed_points needs grid_n >= 2");
  if (!(tol > 0.0)) throw DomainError("fixed_points needs a positive tolerance");
  const Manifold m = e.manifold();
  const Grid grid = window ? *window : default_grid(m, grid_n);

  FixedPointSet out;
  out.manifold = m;
  out.residual_tol = tol;
  out.grid_cells = grid.cells;

  const std::size_t n = grid.size();
  double shift = 0.0;
  if (m == Manifold::CircleS1) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += detail::apply(e, grid[i]) - grid[i];
    shift = std::round(mean / static_cast<double>(n));
  }
  auto disp = [&](double x) { return detail::signed_displacement(e, x, shift); };

  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = disp(grid[i]);
  auto near = [&](std::size_t i) { return std::fabs(d[i]) < tol; };

  bool all_near = true;
  for (std::size_t i = 0; i < n; ++i) all_near = all_near && near(i);
  out.degenerate = all_near;

  auto neighbour = [&](std::size_t i, int dir) -> std::optional<std::size_t> {
    if (dir < 0) {
      if (i > 0) return i - 1;
      return grid.periodic ? std::optional<std::size_t>(n - 1) : std::nullopt;
    }
    if (i + 1 < n) return i + 1;
    return grid.periodic ? std::optional<std::size_t>(0) : std::nullopt;
  };

  std::vector<FixedPoint> found;
  for (std::size_t i = 0; i < n; ++i) {
    if (!near(i)) continue;
    const auto left = neighbour(i, -1);
    const auto right = neighbour(i, +1);
    FixedPointKind kind = FixedPointKind::Transverse;
    if ((left && near(*left)) || (right && near(*right))) {
      kind = FixedPointKind::TangencySuspect;
    } else if (left && right && d[*left] * d[*right] > 0.0) {
      kind = FixedPointKind::TangencySuspect;
    }
    found.push_back({grid[i], kind});
  }

  const std::size_t cells = grid.periodic ? n : n - 1;
  for (std::size_t i = 0; i < cells; ++i) {
    const std::size_t j = (i + 1) % n;
    if (near(i) || near(j) || d[i] * d[j] >= 0.0) continue;
    double lo = grid[i];
    double hi = j == 0 ? grid.hi : grid[j];
    double dlo = d[i];
    while (hi - lo > tol) {
      const double mid = 0.5 * (lo + hi);
      const double dm = disp(mid);
      if (dm == 0.0) {
        lo = hi = mid;
        break;
      }
      if ((dm < 0.0) == (dlo < 0.0)) {
        lo = mid;
        dlo = dm;
      } else {
        hi = mid;
      }
    }
    double x = 0.5 * (lo + hi);
    if (grid.periodic) x = wrap_unit(x);
    found.push_back({x, FixedPointKind::Transverse});
  }

  std::sort(found.begin(), found.end(), [](const FixedPoint& a, const FixedPoint& b) { return a.x < b.x; });
  for (const auto& p : found) {
    if (!out.points.empty() && p.x - out.points.back().x <= tol) {
      if (p.kind == FixedPointKind::TangencySuspect) out.points.back().kind = p.kind;
      continue;
    }
    out.points.push_back(p);
  }

  auto gap_sign = [&](double lo, double hi) {
    const double v = disp(0.5 * (lo + hi));
    if (std::fabs(v) < tol) return 0;
    return v > 0.0 ? 1 : -1;
  };
  auto push_gap = [&](double lo, double hi) {
    if (hi - lo > tol) out.gaps.push_back({lo, hi, gap_sign(lo, hi)});
  };
  if (!out.degenerate) {
    if (out.points.empty()) {
      push_gap(grid.lo, grid.hi);
    } else if (grid.periodic) {
      for (std::size_t k = 0; k + 1 < out.points.size(); ++k) push_gap(out.points[k].x, out.points[k + 1].x);
      push_gap(out.points.back().x, out.points.front().x + 1.0);
    } else {
      push_gap(grid.lo, out.points.front().x);
      for (std::size_t k = 0; k + 1 < out.points.size(); ++k) push_gap(out.points[k].x, out.points[k + 1].x);
      push_gap(out.points.back().x, grid.hi);
    }
  }
  return out;
}

struct Residual {
  double sup = 0.0;
  double at = 0.0;
  std::size_t grid_cells = 0;
};

/// Grid sup of the displacement of e from the identity.
inline Residual identity_residual(const DiffeoExpr& e, const Grid& grid) {
  Residual r;
  r.grid_cells = grid.cells;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid[i];
    const double v = displacement(e.manifold(), detail::apply(e, x), x);
    if (v > r.sup || std::isnan(v)) {
      r.sup = v;
      r.at = x;
    }
  }
  return r;
}

inline Residual commutator_residual_detail(const DiffeoExpr& e1, const DiffeoExpr& e2, const Grid& grid) {
  if (e1.manifold() != e2.manifold()) throw DomainError("commutator_residual: manifold tags differ");
  return identity_residual(commutator(e1, e2), grid);
}

/// sup over the grid of |[e1, e2](x) - x| with [e1, e2] = e1 e2 e1^-1 e2^-1.
inline double commutator_residual(const DiffeoExpr& e1, const DiffeoExpr& e2, std::size_t grid_n = 1024) {
  return commutator_residual_detail(e1, e2, default_grid(e1.manifold(), grid_n)).sup;
}

struct NamedLetter {
  std::string name;
  int exponent = 1;
};
using NamedWord = std::vector<NamedLetter>;

/// Applies the letters right to left: word a b c sends x to a(b(c(x))).
inline double word_evaluate(const NamedWord& word, const std::map<std::string, DiffeoExpr>& assignment, double x) {
  std::optional<Manifold> tag;
  for (const auto& letter : word) {
    const auto it = assignment.find(letter.name);
    if (it == assignment.end()) throw DomainError("word_evaluate: generator '" + letter.name + "' is unassigned");
    if (tag && *tag != it->second.manifold()) throw DomainError("word_evaluate: manifold tags differ");
    tag = it->second.manifold();
  }
  if (!tag) return x;
  detail::check_domain(*tag, x);
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    const DiffeoExpr& g = assignment.at(it->name);
    for (int i = 0; i < std::abs(it->exponent); ++i) {
      x = it->exponent > 0 ? detail::apply(g, x) : detail::apply_inverse(g, x);
    }
  }
  return *tag == Manifold::CircleS1 ? wrap_unit(x) : x;
}

}  // namespace cliqueforest
