#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <string_view>

#include "cliqueforest/errors.hpp"

namespace cliqueforest {

/// Circle maps are stored through degree-one lifts on R with period 1, so a
/// circle point is a real number taken mod 1.
enum class Manifold { IntervalI, CircleS1, LineR };

inline std::string_view to_string(Manifold m) {
  switch (m) {
    case Manifold::IntervalI: return "I";
    case Manifold::CircleS1: return "S1";
    case Manifold::LineR: return "R";
  }
  return "?";
}

inline Manifold manifold_from_string(std::string_view s) {
  if (s == "I") return Manifold::IntervalI;
  if (s == "S1") return Manifold::CircleS1;
  if (s == "R") return Manifold::LineR;
  throw DomainError("unknown manifold '" + std::string(s) + "' (expected I, S1 or R)");
}

/// Reduce a lift coordinate into [0, 1).
inline double wrap_unit(double x) {
  double r = x - std::floor(x);
  return r >= 1.0 ? 0.0 : r;
}

/// Distance between two circle points given by lift coordinates.
inline double circle_distance(double a, double b) {
  double d = a - b;
  d -= std::round(d);
  return std::fabs(d);
}

/// |y - x| on I and R; angular distance on S1.
inline double displacement(Manifold m, double y, double x) {
  return m == Manifold::CircleS1 ? circle_distance(y, x) : std::fabs(y - x);
}

/// Sample points for grid sups. Closed grids carry `cells + 1` points with both
/// endpoints; the periodic circle grid carries `cells` points in [0, 1).
struct Grid {
  double lo = 0.0;
  double hi = 1.0;
  std::size_t cells = 1024;
  bool periodic = false;

  std::size_t size() const { return periodic ? cells : cells + 1; }

  double operator[](std::size_t i) const {
    if (i == cells && !periodic) return hi;
    return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(cells);
  }

  static Grid closed(double lo, double hi, std::size_t cells) {
    if (cells < 1) throw DomainError("grid needs at least one cell");
    return Grid{lo, hi, cells, false};
  }
};

/// Default window on R used by the sine-shear family: [0, 4*pi].
inline constexpr double kLineWindow = 4.0 * std::numbers::pi;

inline Grid default_grid(Manifold m, std::size_t cells = 1024) {
  if (cells < 1) throw DomainError("grid needs at least one cell");
  switch (m) {
    case Manifold::IntervalI: return Grid{0.0, 1.0, cells, false};
    case Manifold::CircleS1: return Grid{0.0, 1.0, cells, true};
    case Manifold::LineR: return Grid{0.0, kLineWindow, cells, false};
  }
  return Grid{};
}

}  // namespace cliqueforest
