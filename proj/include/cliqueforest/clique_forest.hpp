#pragma once

// The embeddability criterion: a RAAG embeds in the analytic diffeomorphism
// group of I or S1 exactly when every connected component of its graph is
// complete.

#include <optional>
#include <variant>
#include <vector>

#include <json.hpp>

#include "cliqueforest/graph.hpp"
#include "cliqueforest/manifold.hpp"

namespace cliqueforest {

/// Disjoint complete components covering the vertex set.
struct CliqueForest {
  std::vector<std::vector<int>> components;
  /// Per vertex: component index and position inside that component.
  std::vector<int> component_of;
  std::vector<int> slot_of;

  std::vector<std::size_t> sizes() const {
    std::vector<std::size_t> out;
    for (const auto& c : components) out.push_back(c.size());
    return out;
  }

  std::size_t vertex_count() const { return component_of.size(); }

  std::size_t max_component_size() const {
    std::size_t m = 0;
    for (const auto& c : components) m = std::max(m, c.size());
    return m;
  }

  static CliqueForest from_components(std::vector<std::vector<int>> comps, std::size_t n) {
    CliqueForest f;
    f.components = std::move(comps);
    f.component_of.assign(n, -1);
    f.slot_of.assign(n, -1);
    for (std::size_t c = 0; c < f.components.size(); ++c) {
      for (std::size_t s = 0; s < f.components[c].size(); ++s) {
        f.component_of[f.components[c][s]] = static_cast<int>(c);
        f.slot_of[f.components[c][s]] = static_cast<int>(s);
      }
    }
    return f;
  }
};

/// Two vertices of one component with no edge between them, plus a path
/// joining them.
struct MissingEdgeWitness {
  int u = 0;
  int v = 0;
  std::vector<int> path;
};

using CliqueForestResult = std::variant<CliqueForest, MissingEdgeWitness>;

namespace detail {

/// First non-adjacent pair (u < v) inside a component, in lexicographic order.
inline std::optional<MissingEdgeWitness> missing_edge(const SimpleGraph& g, const std::vector<int>& comp) {
  for (std::size_t i = 0; i < comp.size(); ++i) {
    for (std::size_t j = i + 1; j < comp.size(); ++j) {
      if (!g.adjacent(comp[i], comp[j])) {
        return MissingEdgeWitness{comp[i], comp[j], shortest_path(g, comp[i], comp[j])};
      }
    }
  }
  return std::nullopt;
}

}  // namespace detail

inline CliqueForestResult is_clique_forest(const SimpleGraph& g) {
  auto comps = connected_components(g);
  for (const auto& comp : comps) {
    if (auto w = detail::missing_edge(g, comp)) return *w;
  }
  return CliqueForest::from_components(std::move(comps), g.size());
}

struct EmbeddabilityDecision {
  bool embeddable = false;
  Manifold manifold = Manifold::IntervalI;
  std::optional<CliqueForest> forest;
  std::optional<MissingEdgeWitness> witness;
};

/// Same criterion for I and S1. R is rejected: commutation transitivity fails
/// there (see the sine-shear family in obstructions/remark.hpp).
inline EmbeddabilityDecision embeddable_raag(const SimpleGraph& g, Manifold m) {
  if (m == Manifold::LineR) throw DomainError("embeddability is decided for I and S1 only, not R");
  EmbeddabilityDecision d;
  d.manifold = m;
  auto r = is_clique_forest(g);
  if (auto* f = std::get_if<CliqueForest>(&r)) {
    d.embeddable = true;
    d.forest = std::move(*f);
  } else {
    d.witness = std::get<MissingEdgeWitness>(std::move(r));
  }
  return d;
}

struct ComponentReport {
  std::vector<int> vertices;
  bool complete = true;
  std::optional<MissingEdgeWitness> witness;
};

struct CompletenessReport {
  std::vector<ComponentReport> components;

  bool passed() const {
    for (const auto& c : components) {
      if (!c.complete) return false;
    }
    return true;
  }
};

/// Every component is listed; incomplete ones carry a witness. On a
/// commutation graph of nontrivial interval maps an incomplete component
/// contradicts commutation transitivity (up to tolerance artifacts).
inline CompletenessReport check_component_completeness(const SimpleGraph& g) {
  CompletenessReport report;
  for (auto& comp : connected_components(g)) {
    ComponentReport c;
    c.witness = detail::missing_edge(g, comp);
    c.complete = !c.witness.has_value();
    c.vertices = std::move(comp);
    report.components.push_back(std::move(c));
  }
  return report;
}

inline nlohmann::json to_json(const MissingEdgeWitness& w) {
  return nlohmann::json{{"u", w.u}, {"v", w.v}, {"path", w.path}};
}

inline nlohmann::json to_json(const CliqueForest& f) {
  return nlohmann::json{{"components", f.components}, {"sizes", f.sizes()}};
}

inline nlohmann::json to_json(const EmbeddabilityDecision& d) {
  nlohmann::json j{{"embeddable", d.embeddable}, {"manifold", to_string(d.manifold)}};
  if (d.forest) j["clique_forest"] = to_json(*d.forest);
  if (d.witness) j["missing_edge"] = to_json(*d.witness);
  return j;
}

inline nlohmann::json to_json(const CompletenessReport& r) {
  nlohmann::json comps = nlohmann::json::array();
  for (const auto& c : r.components) {
    nlohmann::json j{{"vertices", c.vertices}, {"complete", c.complete}};
    if (c.witness) j["missing_edge"] = to_json(*c.witness);
    comps.push_back(std::move(j));
  }
  return nlohmann::json{{"passed", r.passed()}, {"components", std::move(comps)}};
}

}  // namespace cliqueforest
