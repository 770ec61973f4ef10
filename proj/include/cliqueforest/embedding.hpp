#pragma once

// Constructive embedding of a clique-forest RAAG. Component i (1-based) with
// vertices in slots 1..m_i is sent to the conjugates f^{i-1} g_n f^{-(i-1)},
// n = 1..m_i. The g_n commute and generate a free abelian group; the word
// margins of f make <f, g_1, g_2, ...> a free product <f> * <g_1, g_2, ...>,
// so the conjugated blocks generate their free product.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cliqueforest/alphas.hpp"
#include "cliqueforest/clique_forest.hpp"
#include "cliqueforest/dynamics.hpp"
#include "cliqueforest/expr_io.hpp"
#include "cliqueforest/parallel.hpp"
#include "cliqueforest/synthesis.hpp"
#include "cliqueforest/words.hpp"

namespace cliqueforest {

class NotEmbeddable : public Error {
 public:
  explicit NotEmbeddable(MissingEdgeWitness w)
      : Error("graph is not a disjoint union of cliques: vertices " + std::to_string(w.u) + " and " +
              std::to_string(w.v) + " share a component without an edge"),
        witness_(std::move(w)) {}

  const MissingEdgeWitness& witness() const noexcept { return witness_; }

 private:
  MissingEdgeWitness witness_;
};

struct EmbeddingOptions {
  /// Words of length <= word_len are certified; longer ones are not examined.
  int word_len = 6;
  int alpha_k = 5;
  SynthesisOptions synthesis;
};

struct VertexLayout {
  int component = 1;
  int slot = 1;
  /// Power of f conjugating g_slot; component - 1.
  int conjugation = 0;
};

struct GeneratorAssignment {
  Manifold manifold = Manifold::IntervalI;
  SimpleGraph graph;
  CliqueForest forest;
  AlphaSequence alphas;
  /// Circle only: min distance of sum k_n alpha_n / 2pi to an integer, or -1.
  double rotation_relation = -1.0;
  std::vector<DiffeoExpr> g;
  DiffeoExpr f;
  std::optional<SynthesisState> state;
  std::vector<VertexLayout> layout;
  std::vector<DiffeoExpr> generators;
  int word_len = 0;
};

inline GeneratorAssignment synthesize_embedding(const SimpleGraph& graph, Manifold m,
                                                const EmbeddingOptions& opts = {}) {
  if (m == Manifold::LineR) throw DomainError("synthesize_embedding: only I and S1 are supported");
  if (opts.word_len < 1) throw DomainError("synthesize_embedding: word_len must be positive");
  auto decided = is_clique_forest(graph);
  if (auto* w = std::get_if<MissingEdgeWitness>(&decided)) throw NotEmbeddable(*w);

  GeneratorAssignment a;
  a.manifold = m;
  a.graph = graph;
  a.forest = std::get<CliqueForest>(std::move(decided));
  a.word_len = opts.word_len;
  a.f = DiffeoExpr::identity(m);
  if (graph.size() == 0) return a;

  const int slots = static_cast<int>(a.forest.max_component_size());
  a.alphas = choose_alphas(slots, opts.alpha_k);
  for (double alpha : a.alphas.alphas) {
    a.g.push_back(m == Manifold::IntervalI ? DiffeoExpr::mobius(alpha) : DiffeoExpr::rotation(alpha));
  }
  if (m == Manifold::CircleS1) {
    a.rotation_relation = min_rotation_relation(a.alphas.alphas, opts.alpha_k);
    if (!(a.rotation_relation > kRelationThreshold)) {
      throw Error("synthesize_embedding: rotation angles nearly rationally dependent with pi");
    }
  }

  if (a.forest.components.size() > 1) {
    const WordList words = enumerate_words(slots, opts.word_len);
    PerturbResult r = perturb_f(words, a.g, opts.synthesis);
    a.f = r.f;
    a.state = std::move(r.state);
  }

  a.layout.resize(graph.size());
  a.generators.resize(graph.size());
  for (std::size_t v = 0; v < graph.size(); ++v) {
    const int c = a.forest.component_of[v];
    const int s = a.forest.slot_of[v];
    a.layout[v] = {c + 1, s + 1, c};
    a.generators[v] = conjugate(a.f, a.g[s], c);
  }
  return a;
}

struct PairCheck {
  int u = 0;
  int v = 0;
  double residual = 0.0;
  double at = 0.0;
  bool passed = false;
};

struct WordCheck {
  std::string word;
  std::string normal_form;
  /// Recorded synthesis margin D (f-words only; 0 if the word was not a stage).
  double margin = 0.0;
  bool recorded = false;
  double displacement = 0.0;
  bool passed = false;
};

struct VerificationReport {
  Manifold manifold = Manifold::IntervalI;
  int word_len = 0;
  std::size_t grid_cells = 0;
  double tol = 0.0;
  double basepoint = 0.0;
  std::vector<PairCheck> edges;
  std::vector<PairCheck> non_edges;
  std::vector<WordCheck> f_words;
  std::vector<WordCheck> g_words;
  double f_min_derivative = 1.0;
  std::vector<std::string> failures;

  bool passed() const { return failures.empty(); }

  /// min over recorded f-words of displacement / margin (> 1/2 required).
  double min_margin_ratio() const {
    double r = std::numeric_limits<double>::infinity();
    for (const auto& w : f_words) {
      if (w.recorded && w.margin > 0.0) r = std::min(r, w.displacement / w.margin);
    }
    return r;
  }
};

/// Edge pairs must commute (residual < tol); non-edge pairs need a grid point
/// moved by more than 10 tol; every f-word up to word_len must move the
/// basepoint by more than half its recorded margin (or by 10 tol when the
/// synthesis did not record it); every nontrivial pure-g word must be
/// nontrivial in normal form and move the basepoint.
inline VerificationReport verify_assignment(const GeneratorAssignment& a, const SimpleGraph& graph, int word_len,
                                            std::size_t grid_n = 1024, double tol = 1e-9) {
  if (graph.size() != a.generators.size()) throw DomainError("verify_assignment: graph and assignment sizes differ");
  if (!(tol > 0.0)) throw DomainError("verify_assignment: tolerance must be positive");
  VerificationReport rep;
  rep.manifold = a.manifold;
  rep.word_len = word_len;
  rep.grid_cells = grid_n;
  rep.tol = tol;
  rep.basepoint = a.state ? a.state->basepoint : SynthesisOptions{}.basepoint;
  const Grid grid = default_grid(a.manifold, grid_n);

  std::vector<PairCheck> pairs;
  for (std::size_t u = 0; u < graph.size(); ++u) {
    for (std::size_t v = u + 1; v < graph.size(); ++v) pairs.push_back({static_cast<int>(u), static_cast<int>(v)});
  }
  parallel_for(pairs.size(), [&](std::size_t i) {
    auto& pc = pairs[i];
    const Residual r = commutator_residual_detail(a.generators[pc.u], a.generators[pc.v], grid);
    pc.residual = r.sup;
    pc.at = r.at;
  });
  for (auto& pc : pairs) {
    if (graph.adjacent(pc.u, pc.v)) {
      pc.passed = pc.residual < tol;
      if (!pc.passed) {
        rep.failures.push_back("edge " + std::to_string(pc.u) + "-" + std::to_string(pc.v) + " residual " +
                               format_decimal(pc.residual));
      }
      rep.edges.push_back(pc);
    } else {
      pc.passed = pc.residual > 10.0 * tol;
      if (!pc.passed) {
        rep.failures.push_back("non-edge " + std::to_string(pc.u) + "-" + std::to_string(pc.v) +
                               " commutes numerically (residual " + format_decimal(pc.residual) + ")");
      }
      rep.non_edges.push_back(pc);
    }
  }

  const int slots = static_cast<int>(a.g.size());
  if (slots == 0) return rep;
  const double p = rep.basepoint;
  std::vector<DiffeoExpr> maps{a.f};
  maps.insert(maps.end(), a.g.begin(), a.g.end());
  const CliqueForest fp = free_product_forest(slots);

  if (a.state) {
    std::map<std::string, double> recorded;
    for (const auto& st : a.state->stages) recorded[to_string(a.state->words[st.word_index])] = st.margin;
    const WordList fw = enumerate_words(slots, word_len);
    rep.f_words.resize(fw.words.size());
    parallel_for(fw.words.size(), [&](std::size_t i) {
      auto& wc = rep.f_words[i];
      wc.word = to_string(fw.words[i]);
      wc.normal_form = to_string(free_product_normal_form(fw.words[i], fp));
      wc.displacement = displacement(a.manifold, evaluate_word(fw.words[i], maps, p), p);
      if (auto it = recorded.find(wc.word); it != recorded.end()) {
        wc.recorded = true;
        wc.margin = it->second;
        wc.passed = wc.margin > 0.0 && wc.displacement > wc.margin / 2.0;
      } else {
        wc.passed = wc.displacement > 10.0 * tol;
      }
    });
    for (const auto& wc : rep.f_words) {
      if (!wc.passed) {
        rep.failures.push_back("word " + wc.word + " displacement " + format_decimal(wc.displacement) +
                               (wc.recorded ? " not above half margin " + format_decimal(wc.margin) : " too small"));
      }
    }
    const Grid cert = default_grid(a.manifold, 4 * grid_n);
    for (std::size_t i = 0; i < cert.size(); ++i) rep.f_min_derivative = std::min(rep.f_min_derivative, detail::slope(a.f, cert[i]));
    if (!(rep.f_min_derivative > 0.0)) rep.failures.push_back("f is not increasing");
  }

  const WordList gw = enumerate_pure_g_words(slots, word_len);
  rep.g_words.resize(gw.words.size());
  parallel_for(gw.words.size(), [&](std::size_t i) {
    auto& wc = rep.g_words[i];
    const NormalForm nf = free_product_normal_form(gw.words[i], fp);
    wc.word = to_string(gw.words[i]);
    wc.normal_form = to_string(nf);
    wc.displacement = displacement(a.manifold, evaluate_word(gw.words[i], maps, p), p);
    wc.passed = !nf.empty() && wc.displacement > 10.0 * tol;
  });
  for (const auto& wc : rep.g_words) {
    if (!wc.passed) {
      rep.failures.push_back("pure-g word " + wc.word + " acts trivially (displacement " +
                             format_decimal(wc.displacement) + ")");
    }
  }
  return rep;
}

}  // namespace cliqueforest
