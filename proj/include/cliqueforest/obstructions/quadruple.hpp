#pragma once

// Centralizer quadruples: g1, h1, g2, h2 with [g1,h1] = [g2,h1] = [g2,h2] = 1
// and [g1,h2] != 1. The commutation graph of such elements has a connected
// component that is not complete, which no subgroup of analytic interval
// diffeomorphisms allows.

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cliqueforest/obstructions/oracle.hpp"

namespace cliqueforest {

struct ObstructionCertificate {
  std::size_t g1 = 0, h1 = 0, g2 = 0, h2 = 0;
  std::string g1_label, h1_label, g2_label, h2_label;

  /// Re-checks the four facts against `o`.
  bool reverify(const CommutationOracle& o) const {
    const std::size_t n = o.size();
    if (g1 >= n || h1 >= n || g2 >= n || h2 >= n) return false;
    return o.commute(g1, h1) && o.commute(g2, h1) && o.commute(g2, h2) && !o.commute(g1, h2);
  }
};

namespace detail {

inline std::vector<std::size_t> label_order(const CommutationOracle& o) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < o.size(); ++i) {
    if (!o.is_identity(i)) idx.push_back(i);
  }
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return o.label(a) < o.label(b); });
  return idx;
}

}  // namespace detail

/// First quadruple of distinct non-identity elements in lexicographic label
/// order (g1, then h1, g2, h2). Nothing found means nothing within this list.
inline std::optional<ObstructionCertificate> find_centralizer_quadruple(const CommutationOracle& o) {
  const auto idx = detail::label_order(o);
  for (std::size_t g1 : idx) {
    for (std::size_t h1 : idx) {
      if (h1 == g1 || !o.commute(g1, h1)) continue;
      for (std::size_t g2 : idx) {
        if (g2 == g1 || g2 == h1 || !o.commute(g2, h1)) continue;
        for (std::size_t h2 : idx) {
          if (h2 == g1 || h2 == h1 || h2 == g2) continue;
          if (o.commute(g2, h2) && !o.commute(g1, h2)) {
            return ObstructionCertificate{g1, h1, g2, h2, o.label(g1), o.label(h1), o.label(g2), o.label(h2)};
          }
        }
      }
    }
  }
  return std::nullopt;
}

struct CenterCheck {
  bool found = false;
  std::size_t z = 0, a = 0, b = 0;
};

/// A non-identity z commuting with every listed element, together with a
/// listed non-commuting pair (a, b). First such z and pair in label order.
inline CenterCheck center_nonabelian_check(const CommutationOracle& o) {
  const auto idx = detail::label_order(o);
  std::optional<std::pair<std::size_t, std::size_t>> pair;
  for (std::size_t i = 0; i < idx.size() && !pair; ++i) {
    for (std::size_t j = i + 1; j < idx.size(); ++j) {
      if (!o.commute(idx[i], idx[j])) {
        pair = {idx[i], idx[j]};
        break;
      }
    }
  }
  if (!pair) return {};
  for (std::size_t z : idx) {
    bool central = true;
    for (std::size_t i = 0; i < o.size() && central; ++i) central = o.commute(z, i);
    if (central) return {true, z, pair->first, pair->second};
  }
  return {};
}

inline nlohmann::json to_json(const ObstructionCertificate& c, const CommutationOracle& o) {
  auto fact = [](const std::string& x, const std::string& y, bool commutes, bool holds) {
    return nlohmann::json{{"commutator", "[" + x + ", " + y + "]"},
                          {"claim", commutes ? "trivial" : "nontrivial"},
                          {"verified", holds}};
  };
  return nlohmann::json{
      {"g1", c.g1_label},
      {"h1", c.h1_label},
      {"g2", c.g2_label},
      {"h2", c.h2_label},
      {"facts",
       {fact(c.g1_label, c.h1_label, true, o.commute(c.g1, c.h1)),
        fact(c.g2_label, c.h1_label, true, o.commute(c.g2, c.h1)),
        fact(c.g2_label, c.h2_label, true, o.commute(c.g2, c.h2)),
        fact(c.g1_label, c.h2_label, false, !o.commute(c.g1, c.h2))}},
      {"reverified", c.reverify(o)}};
}

inline nlohmann::json to_json(const CenterCheck& c, const CommutationOracle& o) {
  if (!c.found) return nlohmann::json{{"found", false}};
  return nlohmann::json{{"found", true}, {"z", o.label(c.z)}, {"a", o.label(c.a)}, {"b", o.label(c.b)}};
}

}  // namespace cliqueforest
