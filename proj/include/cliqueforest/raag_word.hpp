#pragma once

// Words in a RAAG whose graph is a clique forest. Such a group is the free
// product of the free abelian groups on its components, so an element has a
// unique reduced form: alternating syllables, each an exponent vector over
// one component.

#include <sstream>
#include <string>
#include <vector>

#include "cliqueforest/clique_forest.hpp"

namespace cliqueforest {

struct RaagLetter {
  int vertex = 0;
  long exponent = 1;

  friend bool operator==(const RaagLetter&, const RaagLetter&) = default;
};
using RaagWord = std::vector<RaagLetter>;

struct Syllable {
  int component = 0;
  /// Indexed by slot inside the component.
  std::vector<long> exponents;

  friend bool operator==(const Syllable&, const Syllable&) = default;
  friend auto operator<=>(const Syllable&, const Syllable&) = default;
};

/// Empty exactly for the trivial element.
using NormalForm = std::vector<Syllable>;

inline NormalForm normal_form(const RaagWord& w, const CliqueForest& forest) {
  NormalForm stack;
  for (const auto& letter : w) {
    if (letter.vertex < 0 || static_cast<std::size_t>(letter.vertex) >= forest.vertex_count()) {
      throw DomainError("normal_form: vertex " + std::to_string(letter.vertex) + " is not in the graph");
    }
    if (letter.exponent == 0) continue;
    const int c = forest.component_of[letter.vertex];
    const int s = forest.slot_of[letter.vertex];
    if (stack.empty() || stack.back().component != c) {
      stack.push_back({c, std::vector<long>(forest.components[c].size(), 0)});
    }
    auto& top = stack.back();
    top.exponents[s] += letter.exponent;
    bool zero = true;
    for (long e : top.exponents) zero = zero && e == 0;
    if (zero) stack.pop_back();
  }
  return stack;
}

/// A word spelling the normal form, slot by slot inside each syllable.
inline RaagWord to_word(const NormalForm& nf, const CliqueForest& forest) {
  RaagWord w;
  for (const auto& syl : nf) {
    for (std::size_t s = 0; s < syl.exponents.size(); ++s) {
      if (syl.exponents[s] != 0) w.push_back({forest.components[syl.component][s], syl.exponents[s]});
    }
  }
  return w;
}

inline RaagWord inverse(const RaagWord& w) {
  RaagWord out(w.rbegin(), w.rend());
  for (auto& l : out) l.exponent = -l.exponent;
  return out;
}

inline RaagWord concat(RaagWord a, const RaagWord& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

/// "[C0: 1 -1] [C1: 0 2]" — one bracket per syllable, slot exponents in order.
inline std::string to_string(const NormalForm& nf) {
  if (nf.empty()) return "[]";
  std::ostringstream out;
  for (std::size_t i = 0; i < nf.size(); ++i) {
    if (i) out << ' ';
    out << "[C" << nf[i].component << ':';
    for (long e : nf[i].exponents) out << ' ' << e;
    out << ']';
  }
  return out.str();
}

}  // namespace cliqueforest
