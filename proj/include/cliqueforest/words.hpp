#pragma once

// Words over the alphabet {f, f^-1, g_1, g_1^-1, ..., g_N, g_N^-1}. Generator
// index 0 is f and index n is g_n.

#include <set>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "cliqueforest/diffeo.hpp"
#include "cliqueforest/raag_word.hpp"

namespace cliqueforest {

struct Letter {
  int generator = 0;
  int exponent = 1;

  friend bool operator==(const Letter&, const Letter&) = default;
};
using FreeWord = std::vector<Letter>;

inline std::string generator_name(int g) { return g == 0 ? "f" : "g" + std::to_string(g); }

/// "f g1 f^-1"; the empty word prints as "e".
inline std::string to_string(const FreeWord& w) {
  if (w.empty()) return "e";
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ' ';
    out += generator_name(w[i].generator);
    if (w[i].exponent != 1) out += "^" + std::to_string(w[i].exponent);
  }
  return out;
}

inline FreeWord parse_free_word(const std::string& text) {
  FreeWord w;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    if (tok == "e") continue;
    Letter l;
    std::string name = tok;
    if (const auto caret = tok.find('^'); caret != std::string::npos) {
      name = tok.substr(0, caret);
      try {
        l.exponent = std::stoi(tok.substr(caret + 1));
      } catch (const std::exception&) {
        throw Error("bad exponent in word token '" + tok + "'");
      }
    }
    if (name == "f") {
      l.generator = 0;
    } else if (name.size() > 1 && name[0] == 'g') {
      try {
        l.generator = std::stoi(name.substr(1));
      } catch (const std::exception&) {
        throw Error("bad generator in word token '" + tok + "'");
      }
      if (l.generator < 1) throw Error("bad generator in word token '" + tok + "'");
    } else {
      throw Error("bad word token '" + tok + "'");
    }
    w.push_back(l);
  }
  return w;
}

inline bool contains_f(const FreeWord& w) {
  for (const auto& l : w) {
    if (l.generator == 0) return true;
  }
  return false;
}

/// Clique forest of the group <f> * Z^N: f alone, the g's pairwise commuting.
inline CliqueForest free_product_forest(int num_g) {
  std::vector<int> gs;
  for (int n = 1; n <= num_g; ++n) gs.push_back(n);
  return CliqueForest::from_components({{0}, gs}, static_cast<std::size_t>(num_g) + 1);
}

inline NormalForm free_product_normal_form(const FreeWord& w, const CliqueForest& forest) {
  RaagWord rw;
  rw.reserve(w.size());
  for (const auto& l : w) rw.push_back({l.generator, l.exponent});
  return normal_form(rw, forest);
}

struct WordList {
  std::vector<FreeWord> words;
  int num_g = 0;
  int max_len = 0;
  /// Freely reduced words of the requested kind, before merging words that
  /// name the same element of <f> * Z^N.
  std::size_t reduced_count = 0;

  std::size_t count() const { return words.size(); }
};

namespace detail {

/// Freely reduced words of length 1..max_len, shortest first and
/// lexicographic within a length under the letter order f, f^-1, g1, g1^-1, ...
template <class Visit>
void for_each_reduced_word(int num_g, int max_len, Visit&& visit) {
  std::vector<Letter> alphabet;
  for (int g = 0; g <= num_g; ++g) {
    alphabet.push_back({g, 1});
    alphabet.push_back({g, -1});
  }
  std::vector<FreeWord> level{FreeWord{}};
  for (int len = 1; len <= max_len; ++len) {
    std::vector<FreeWord> next;
    for (const auto& w : level) {
      for (const auto& l : alphabet) {
        if (!w.empty() && w.back().generator == l.generator && w.back().exponent == -l.exponent) continue;
        FreeWord x = w;
        x.push_back(l);
        visit(x);
        next.push_back(std::move(x));
      }
    }
    level = std::move(next);
  }
}

inline bool has_f_syllable(const NormalForm& nf) {
  for (const auto& s : nf) {
    if (s.component == 0) return true;
  }
  return false;
}

}  // namespace detail

/// All freely reduced words of length <= max_len containing f^{+-1} whose
/// element of <f> * Z^N still involves f, one representative (the first in
/// enumeration order) per element. Words such as f g1 g2 g1^-1 g2^-1 f^-1 are
/// freely reduced but trivial once the g's commute, so no choice of f can
/// move the basepoint with them; they are dropped.
inline WordList enumerate_words(int num_g, int max_len) {
  if (num_g < 1) throw DomainError("enumerate_words: need at least one g generator");
  if (max_len < 1) throw DomainError("enumerate_words: max_len must be positive");
  WordList out;
  out.num_g = num_g;
  out.max_len = max_len;
  const CliqueForest forest = free_product_forest(num_g);
  std::set<NormalForm> seen;
  detail::for_each_reduced_word(num_g, max_len, [&](const FreeWord& w) {
    if (!contains_f(w)) return;
    ++out.reduced_count;
    NormalForm nf = free_product_normal_form(w, forest);
    if (!detail::has_f_syllable(nf)) return;
    if (seen.insert(std::move(nf)).second) out.words.push_back(w);
  });
  return out;
}

/// Nontrivial elements of Z^N spelled by reduced words in the g's alone.
inline WordList enumerate_pure_g_words(int num_g, int max_len) {
  if (num_g < 1) throw DomainError("enumerate_pure_g_words: need at least one g generator");
  WordList out;
  out.num_g = num_g;
  out.max_len = max_len;
  const CliqueForest forest = free_product_forest(num_g);
  std::set<NormalForm> seen;
  detail::for_each_reduced_word(num_g, max_len, [&](const FreeWord& w) {
    if (contains_f(w)) return;
    ++out.reduced_count;
    NormalForm nf = free_product_normal_form(w, forest);
    if (nf.empty()) return;
    if (seen.insert(std::move(nf)).second) out.words.push_back(w);
  });
  return out;
}

/// Right-to-left evaluation in model coordinates (circle results stay on the
/// lift). maps[0] is f, maps[n] is g_n.
inline double evaluate_word(const FreeWord& w, std::span<const DiffeoExpr> maps, double x) {
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    const DiffeoExpr& g = maps[static_cast<std::size_t>(it->generator)];
    for (int i = 0; i < std::abs(it->exponent); ++i) {
      x = it->exponent > 0 ? detail::apply(g, x) : detail::apply_inverse(g, x);
    }
  }
  return x;
}

}  // namespace cliqueforest
