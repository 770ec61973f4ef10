#pragma once

#include <span>
#include <vector>

#include <json.hpp>

#include "cliqueforest/dynamics.hpp"
#include "cliqueforest/expr_io.hpp"
#include "cliqueforest/graph.hpp"
#include "cliqueforest/parallel.hpp"

namespace cliqueforest {

struct CommutationGraphOptions {
  double tol = 1e-9;
  /// Circle only: powers m = 1..power_bound are searched for commuting pairs.
  int power_bound = 12;
  std::size_t grid_n = 1024;
};

struct CommutationGraph {
  SimpleGraph graph;
  Manifold manifold = Manifold::IntervalI;
  double tol = 0.0;
  /// 1 on the interval; the search cap M on the circle. A missing circle edge
  /// means no commuting powers were found up to M.
  int power_bound = 1;
  std::size_t grid_cells = 0;
  /// Smallest residual seen per pair, and the power that achieved an edge (0 if none).
  std::vector<std::vector<double>> residual;
  std::vector<std::vector<int>> power;
};

/// Edge iff the commutator residual is below tol (interval), or iff some
/// powers f_i^m, f_j^m with m <= power_bound commute (circle). Numerically
/// trivial inputs are rejected, as are circle maps with a trivial power up to
/// the cap (finite order).
inline CommutationGraph commutation_graph(std::span<const DiffeoExpr> fs, const CommutationGraphOptions& opts = {}) {
  if (!(opts.tol > 0.0)) throw DomainError("commutation_graph needs a positive tolerance");
  if (opts.power_bound < 1) throw DomainError("commutation_graph needs power_bound >= 1");
  CommutationGraph out;
  out.graph = SimpleGraph(fs.size());
  out.tol = opts.tol;
  out.grid_cells = opts.grid_n;
  if (fs.empty()) return out;

  const Manifold m = fs.front().manifold();
  for (const auto& f : fs) {
    if (f.manifold() != m) throw DomainError("commutation_graph: mixed manifold tags");
  }
  out.manifold = m;
  const bool circle = m == Manifold::CircleS1;
  const int max_power = circle ? opts.power_bound : 1;
  out.power_bound = max_power;
  const Grid grid = default_grid(m, opts.grid_n);

  for (std::size_t i = 0; i < fs.size(); ++i) {
    for (int k = 1; k <= max_power; ++k) {
      if (identity_residual(DiffeoExpr::power(fs[i], k), grid).sup < opts.tol) {
        throw DegenerateInput("commutation_graph: input " + std::to_string(i) +
                              (k == 1 ? " is numerically the identity" : " has finite order " + std::to_string(k)));
      }
    }
  }

  const std::size_t n = fs.size();
  out.residual.assign(n, std::vector<double>(n, 0.0));
  out.power.assign(n, std::vector<int>(n, 0));
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  }
  std::vector<double> best(pairs.size(), 0.0);
  std::vector<int> hit(pairs.size(), 0);
  parallel_for(pairs.size(), [&](std::size_t p) {
    const auto [i, j] = pairs[p];
    double lowest = 0.0;
    for (int k = 1; k <= max_power; ++k) {
      const DiffeoExpr a = k == 1 ? fs[i] : DiffeoExpr::power(fs[i], k);
      const DiffeoExpr b = k == 1 ? fs[j] : DiffeoExpr::power(fs[j], k);
      const double r = commutator_residual_detail(a, b, grid).sup;
      if (k == 1 || r < lowest) lowest = r;
      if (r < opts.tol) {
        hit[p] = k;
        break;
      }
    }
    best[p] = lowest;
  });
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto [i, j] = pairs[p];
    out.residual[i][j] = out.residual[j][i] = best[p];
    out.power[i][j] = out.power[j][i] = hit[p];
    if (hit[p] > 0) out.graph.add_edge(i, j);
  }
  return out;
}

inline nlohmann::json to_json(const CommutationGraph& g) {
  nlohmann::json edges = nlohmann::json::array();
  for (auto [u, v] : g.graph.edges()) {
    edges.push_back({{"u", u}, {"v", v}, {"power", g.power[u][v]}, {"residual", format_decimal(g.residual[u][v])}});
  }
  nlohmann::json non_edges = nlohmann::json::array();
  for (std::size_t u = 0; u < g.graph.size(); ++u) {
    for (std::size_t v = u + 1; v < g.graph.size(); ++v) {
      if (!g.graph.adjacent(u, v)) {
        non_edges.push_back({{"u", u}, {"v", v}, {"min_residual", format_decimal(g.residual[u][v])}});
      }
    }
  }
  return nlohmann::json{{"manifold", to_string(g.manifold)},
                        {"vertices", g.graph.size()},
                        {"tol", format_decimal(g.tol)},
                        {"power_bound", g.power_bound},
                        {"grid_cells", g.grid_cells},
                        {"edges", std::move(edges)},
                        {"non_edges", std::move(non_edges)}};
}

}  // namespace cliqueforest
