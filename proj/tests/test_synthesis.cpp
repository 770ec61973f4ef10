#include <gtest/gtest.h>

#include <cmath>

#include "cliqueforest/embedding.hpp"
#include "cliqueforest/embedding_io.hpp"

using namespace cliqueforest;

namespace {

std::vector<DiffeoExpr> mobius_gens(int n) {
  std::vector<DiffeoExpr> g;
  for (double a : choose_alphas(n, 5).alphas) g.push_back(DiffeoExpr::mobius(a));
  return g;
}

std::vector<DiffeoExpr> rotation_gens(int n) {
  std::vector<DiffeoExpr> g;
  for (double a : choose_alphas(n, 5).alphas) g.push_back(DiffeoExpr::rotation(a));
  return g;
}

void check_state_invariants(const PerturbResult& r, const std::vector<DiffeoExpr>& gens) {
  const SynthesisState& s = r.state;
  const Grid cert = default_grid(s.manifold, 4 * s.grid_cells);
  double eps = 1.0;
  int rank = 0;
  std::vector<DiffeoExpr> maps{r.f};
  maps.insert(maps.end(), gens.begin(), gens.end());
  for (const auto& st : s.stages) {
    EXPECT_LE(st.epsilon, eps);
    if (!st.zero_bump) {
      ++rank;
      EXPECT_DOUBLE_EQ(st.sup_bound, eps / std::ldexp(1.0, rank + 1));
      EXPECT_DOUBLE_EQ(st.derivative_bound, std::ldexp(1.0, -(rank + 1)));
      double s0 = 0.0, s1 = 0.0;
      for (std::size_t i = 0; i < cert.size(); ++i) {
        s0 = std::max(s0, std::fabs(st.bump.value(cert[i])));
        s1 = std::max(s1, std::fabs(st.bump.derivative(cert[i])));
      }
      EXPECT_LT(s0, st.sup_bound);
      EXPECT_LT(s1, st.derivative_bound);
    }
    EXPECT_EQ(st.rank, rank);
    EXPECT_GT(st.margin, 0.0);
    const double d = displacement(s.manifold, evaluate_word(s.words[st.word_index], maps, s.basepoint), s.basepoint);
    EXPECT_GT(d, st.margin / 2.0) << to_string(s.words[st.word_index]);
    EXPECT_DOUBLE_EQ(d, st.final_displacement);
    eps = st.epsilon;
  }
  EXPECT_GT(s.derivative_floor(), 0.5);
  for (std::size_t i = 0; i < cert.size(); ++i) EXPECT_GE(detail::slope(r.f, cert[i]), s.derivative_floor());
}

}  // namespace

TEST(PerturbF, EmptyWordListGivesIdentity) {
  const auto gens = mobius_gens(2);
  const PerturbResult r = perturb_f(WordList{}, gens);
  EXPECT_EQ(r.f.kind(), DiffeoExpr::Kind::Identity);
  EXPECT_TRUE(r.state.stages.empty());
}

TEST(PerturbF, SingleWordGetsNonzeroBump) {
  const auto gens = mobius_gens(1);
  WordList w;
  w.words = {parse_free_word("f")};
  w.num_g = 1;
  w.max_len = 1;
  const PerturbResult r = perturb_f(w, gens);
  ASSERT_EQ(r.state.stages.size(), 1u);
  EXPECT_FALSE(r.state.stages[0].zero_bump);
  EXPECT_NEAR(r.state.stages[0].margin, std::fabs(evaluate(r.f, r.state.basepoint) - r.state.basepoint), 1e-15);
  EXPECT_GT(r.state.stages[0].margin, 0.0);
}

TEST(PerturbF, IntervalScheduleInvariants) {
  const auto gens = mobius_gens(2);
  const PerturbResult r = perturb_f(enumerate_words(2, 4), gens);
  EXPECT_TRUE(r.state.rejected_basepoints.empty());
  EXPECT_EQ(r.state.basepoint, SynthesisOptions{}.basepoint);
  check_state_invariants(r, gens);
  for (double x : {0.0, 1.0}) EXPECT_EQ(evaluate(r.f, x), x);
}

TEST(PerturbF, CircleScheduleInvariants) {
  const auto gens = rotation_gens(2);
  const PerturbResult r = perturb_f(enumerate_words(2, 4), gens);
  check_state_invariants(r, gens);
  for (double x : {0.0, 0.3}) EXPECT_NEAR(evaluate_lift(r.f, x + 1.0), evaluate_lift(r.f, x) + 1.0, 1e-14);
}

TEST(PerturbF, FailureReportsStageAndRetries) {
  SynthesisOptions opts;
  opts.margin_floor = 0.9;  // unreachable with bumps this small
  try {
    perturb_f(enumerate_words(1, 2), mobius_gens(1), opts);
    FAIL() << "expected a synthesis failure";
  } catch (const SynthesisError& e) {
    EXPECT_EQ(e.stage(), 1u);
    EXPECT_EQ(e.word(), "f");
    EXPECT_NE(std::string(e.what()).find("p=0.318310"), std::string::npos);
  }
  SynthesisOptions bad;
  bad.basepoint = 1.5;
  EXPECT_THROW(perturb_f(enumerate_words(1, 1), mobius_gens(1), bad), DomainError);
  EXPECT_THROW(perturb_f(enumerate_words(3, 1), mobius_gens(2)), DomainError);
}

TEST(Embedding, TwoCliquesLayoutAndVerification) {
  const SimpleGraph g = disjoint_union(complete_graph(2), complete_graph(3));
  EmbeddingOptions opts;
  opts.word_len = 4;
  const GeneratorAssignment a = synthesize_embedding(g, Manifold::IntervalI, opts);
  ASSERT_EQ(a.generators.size(), 5u);
  EXPECT_EQ(a.g.size(), 3u);
  ASSERT_TRUE(a.state.has_value());
  EXPECT_EQ(a.layout[0].component, 1);
  EXPECT_EQ(a.layout[0].conjugation, 0);
  EXPECT_EQ(a.layout[4].component, 2);
  EXPECT_EQ(a.layout[4].slot, 3);
  EXPECT_EQ(a.layout[4].conjugation, 1);
  // Component 1 uses the g's themselves.
  EXPECT_EQ(a.generators[0].kind(), DiffeoExpr::Kind::Mobius);
  EXPECT_EQ(a.generators[2].kind(), DiffeoExpr::Kind::Compose);

  const VerificationReport rep = verify_assignment(a, g, 4);
  EXPECT_TRUE(rep.passed()) << (rep.failures.empty() ? "" : rep.failures.front());
  EXPECT_EQ(rep.edges.size(), 4u);
  EXPECT_EQ(rep.non_edges.size(), 6u);
  for (const auto& e : rep.edges) EXPECT_LT(e.residual, 1e-9);
  EXPECT_GT(rep.min_margin_ratio(), 0.5);
  EXPECT_GT(rep.f_min_derivative, 0.4);

  // Same assignment against a graph with an extra edge must fail.
  SimpleGraph wrong = g;
  wrong.add_edge(0, 2);
  EXPECT_FALSE(verify_assignment(a, wrong, 4).passed());
}

TEST(Embedding, SerializationReproducesResiduals) {
  const SimpleGraph g = disjoint_union(complete_graph(2), complete_graph(1));
  EmbeddingOptions opts;
  opts.word_len = 4;
  const GeneratorAssignment a = synthesize_embedding(g, Manifold::IntervalI, opts);
  const json doc = to_json(a);
  const GeneratorAssignment b = assignment_from_json(json::parse(doc.dump()));
  EXPECT_EQ(to_json(b), doc);
  const VerificationReport ra = verify_assignment(a, g, 4);
  const VerificationReport rb = verify_assignment(b, g, 4);
  ASSERT_EQ(ra.non_edges.size(), rb.non_edges.size());
  for (std::size_t i = 0; i < ra.non_edges.size(); ++i) {
    EXPECT_NEAR(ra.non_edges[i].residual, rb.non_edges[i].residual, 1e-12);
  }
  ASSERT_EQ(ra.f_words.size(), rb.f_words.size());
  for (std::size_t i = 0; i < ra.f_words.size(); ++i) {
    EXPECT_NEAR(ra.f_words[i].displacement, rb.f_words[i].displacement, 1e-12);
  }
  EXPECT_THROW(assignment_from_json(json{{"format", "something else"}}), Error);
}

TEST(Embedding, SingleVertexNeedsNoF) {
  const GeneratorAssignment a = synthesize_embedding(complete_graph(1), Manifold::IntervalI);
  ASSERT_EQ(a.generators.size(), 1u);
  EXPECT_FALSE(a.state.has_value());
  EXPECT_EQ(a.f.kind(), DiffeoExpr::Kind::Identity);
  EXPECT_TRUE(verify_assignment(a, complete_graph(1), 6).passed());
}

TEST(Embedding, RejectsNonCliqueForestAndLine) {
  try {
    synthesize_embedding(path_graph(3), Manifold::IntervalI);
    FAIL();
  } catch (const NotEmbeddable& e) {
    EXPECT_EQ(e.witness().u, 0);
    EXPECT_EQ(e.witness().v, 2);
  }
  EXPECT_THROW(synthesize_embedding(complete_graph(2), Manifold::LineR), DomainError);
}

TEST(Embedding, IdentityAssignmentFailsNonEdgeCheck) {
  const SimpleGraph g = disjoint_union(complete_graph(1), complete_graph(1));
  GeneratorAssignment a = synthesize_embedding(g, Manifold::IntervalI, EmbeddingOptions{3, 5, {}});
  for (auto& e : a.generators) e = DiffeoExpr::identity(Manifold::IntervalI);
  const VerificationReport rep = verify_assignment(a, g, 3);
  EXPECT_FALSE(rep.passed());
  ASSERT_EQ(rep.non_edges.size(), 1u);
  EXPECT_FALSE(rep.non_edges[0].passed);
}

TEST(Embedding, CircleTwoCliques) {
  const SimpleGraph g = disjoint_union(complete_graph(2), complete_graph(2));
  EmbeddingOptions opts;
  opts.word_len = 4;
  const GeneratorAssignment a = synthesize_embedding(g, Manifold::CircleS1, opts);
  EXPECT_GT(a.rotation_relation, kRelationThreshold);
  const VerificationReport rep = verify_assignment(a, g, 4);
  EXPECT_TRUE(rep.passed()) << (rep.failures.empty() ? "" : rep.failures.front());
}

// Products of powers of the commuting g's are Moebius maps with the product
// parameter, never the identity for small nonzero exponents.
TEST(Embedding, FreeAbelianAtDeskScale) {
  const AlphaSequence a = choose_alphas(3, 5);
  const Grid grid = default_grid(Manifold::IntervalI, 64);
  for (int i = -5; i <= 5; ++i)
    for (int j = -5; j <= 5; ++j)
      for (int k = -5; k <= 5; ++k) {
        if (i == 0 && j == 0 && k == 0) continue;
        const DiffeoExpr w = DiffeoExpr::compose({DiffeoExpr::power(DiffeoExpr::mobius(a.alphas[0]), i),
                                                  DiffeoExpr::power(DiffeoExpr::mobius(a.alphas[1]), j),
                                                  DiffeoExpr::power(DiffeoExpr::mobius(a.alphas[2]), k)});
        const double prod = std::pow(a.alphas[0], i) * std::pow(a.alphas[1], j) * std::pow(a.alphas[2], k);
        EXPECT_NE(prod, 1.0);
        EXPECT_NEAR(evaluate(w, 0.5), evaluate(DiffeoExpr::mobius(prod), 0.5), 1e-12);
        EXPECT_GT(identity_residual(w, grid).sup, 1e-9);
      }
}
