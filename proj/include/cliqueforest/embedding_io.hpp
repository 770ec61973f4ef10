#pragma once

// JSON documents for synthesis states, generator assignments and
// verification reports. Reals are decimal strings with 17 significant digits.

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "cliqueforest/embedding.hpp"
#include "cliqueforest/expr_io.hpp"

namespace cliqueforest {

inline constexpr const char* kAssignmentFormat = "cliqueforest.assignment/1";
inline constexpr const char* kReportFormat = "cliqueforest.verification/1";

inline json to_json(const SimpleGraph& g) {
  json edges = json::array();
  for (auto [u, v] : g.edges()) edges.push_back({u, v});
  return json{{"n", g.size()}, {"edges", std::move(edges)}};
}

inline SimpleGraph graph_from_json(const json& j) {
  SimpleGraph g(j.at("n").get<std::size_t>());
  for (const auto& e : j.at("edges")) g.add_edge(e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>());
  return g;
}

inline json to_json(const AlphaSequence& a) {
  json values = json::array();
  for (double v : a.alphas) values.push_back(format_decimal(v));
  return json{{"values", std::move(values)},
              {"spread", format_decimal(a.spread)},
              {"relation_bound", a.relation_bound},
              {"min_relation", format_decimal(a.min_relation)},
              {"min_relation_vector", a.min_relation_vector}};
}

inline AlphaSequence alphas_from_json(const json& j) {
  AlphaSequence a;
  for (const auto& v : j.at("values")) a.alphas.push_back(decimal_from_json(v));
  a.spread = decimal_from_json(j.at("spread"));
  a.relation_bound = j.at("relation_bound").get<int>();
  a.min_relation = decimal_from_json(j.at("min_relation"));
  a.min_relation_vector = j.at("min_relation_vector").get<std::vector<int>>();
  return a;
}

inline json to_json(const SynthesisState& s) {
  json stages = json::array();
  for (const auto& st : s.stages) {
    json j{{"word", to_string(s.words[st.word_index])},
           {"zero_bump", st.zero_bump},
           {"rank", st.rank},
           {"sup_bound", format_decimal(st.sup_bound)},
           {"derivative_bound", format_decimal(st.derivative_bound)},
           {"deviation_before", format_decimal(st.deviation_before)},
           {"margin", format_decimal(st.margin)},
           {"lipschitz", format_decimal(st.lipschitz)},
           {"epsilon", format_decimal(st.epsilon)},
           {"final_displacement", format_decimal(st.final_displacement)}};
    if (!st.zero_bump) {
      j["bump"] = bump_to_json(st.bump);
      j["sup_bump"] = format_decimal(st.sup_bump);
      j["sup_bump_derivative"] = format_decimal(st.sup_bump_derivative);
    }
    stages.push_back(std::move(j));
  }
  json rejected = json::array();
  for (double p : s.rejected_basepoints) rejected.push_back(format_decimal(p));
  return json{{"manifold", to_string(s.manifold)},
              {"basepoint", format_decimal(s.basepoint)},
              {"lambda", format_decimal(s.lambda)},
              {"safety_factor", format_decimal(s.safety_factor)},
              {"margin_floor", format_decimal(s.margin_floor)},
              {"grid_cells", s.grid_cells},
              {"rejected_basepoints", std::move(rejected)},
              {"retry_reasons", s.retry_reasons},
              {"stages", std::move(stages)}};
}

inline SynthesisState synthesis_state_from_json(const json& j) {
  SynthesisState s;
  s.manifold = manifold_from_string(j.at("manifold").get<std::string>());
  s.basepoint = decimal_from_json(j.at("basepoint"));
  s.lambda = decimal_from_json(j.at("lambda"));
  s.safety_factor = decimal_from_json(j.at("safety_factor"));
  s.margin_floor = decimal_from_json(j.at("margin_floor"));
  s.grid_cells = j.at("grid_cells").get<std::size_t>();
  for (const auto& p : j.at("rejected_basepoints")) s.rejected_basepoints.push_back(decimal_from_json(p));
  s.retry_reasons = j.at("retry_reasons").get<std::vector<std::string>>();
  for (const auto& js : j.at("stages")) {
    StageRecord st;
    st.word_index = s.words.size();
    s.words.push_back(parse_free_word(js.at("word").get<std::string>()));
    st.zero_bump = js.at("zero_bump").get<bool>();
    st.rank = js.at("rank").get<int>();
    st.sup_bound = decimal_from_json(js.at("sup_bound"));
    st.derivative_bound = decimal_from_json(js.at("derivative_bound"));
    st.deviation_before = decimal_from_json(js.at("deviation_before"));
    st.margin = decimal_from_json(js.at("margin"));
    st.lipschitz = decimal_from_json(js.at("lipschitz"));
    st.epsilon = decimal_from_json(js.at("epsilon"));
    st.final_displacement = decimal_from_json(js.at("final_displacement"));
    if (!st.zero_bump) {
      st.bump = bump_from_json(js.at("bump"));
      st.sup_bump = decimal_from_json(js.at("sup_bump"));
      st.sup_bump_derivative = decimal_from_json(js.at("sup_bump_derivative"));
    } else {
      st.bump.basis = s.manifold == Manifold::CircleS1 ? BumpBasis::Trigonometric : BumpBasis::Polynomial;
      st.bump.coefficient = 0.0;
      st.bump.stage = static_cast<int>(st.word_index) + 1;
    }
    s.stages.push_back(std::move(st));
  }
  return s;
}

inline json to_json(const GeneratorAssignment& a) {
  json g = json::array();
  for (const auto& e : a.g) g.push_back(expr_to_json(e));
  json vertices = json::array();
  for (std::size_t v = 0; v < a.generators.size(); ++v) {
    vertices.push_back({{"vertex", v},
                        {"component", a.layout[v].component},
                        {"slot", a.layout[v].slot},
                        {"conjugation", a.layout[v].conjugation},
                        {"expr", expr_to_json(a.generators[v])}});
  }
  return json{{"format", kAssignmentFormat},
              {"manifold", to_string(a.manifold)},
              {"graph", to_json(a.graph)},
              {"components", a.forest.components},
              {"alphas", to_json(a.alphas)},
              {"rotation_relation", format_decimal(a.rotation_relation)},
              {"word_len", a.word_len},
              {"g", std::move(g)},
              {"f", expr_to_json(a.f)},
              {"vertices", std::move(vertices)},
              {"synthesis", a.state ? to_json(*a.state) : json(nullptr)}};
}

inline GeneratorAssignment assignment_from_json(const json& j) {
  if (j.value("format", std::string{}) != kAssignmentFormat) {
    throw Error(std::string("not a generator assignment document (format must be ") + kAssignmentFormat + ")");
  }
  GeneratorAssignment a;
  a.manifold = manifold_from_string(j.at("manifold").get<std::string>());
  a.graph = graph_from_json(j.at("graph"));
  a.forest = CliqueForest::from_components(j.at("components").get<std::vector<std::vector<int>>>(), a.graph.size());
  a.alphas = alphas_from_json(j.at("alphas"));
  a.rotation_relation = decimal_from_json(j.at("rotation_relation"));
  a.word_len = j.at("word_len").get<int>();
  for (const auto& e : j.at("g")) a.g.push_back(expr_from_json(e));
  a.f = expr_from_json(j.at("f"));
  for (const auto& v : j.at("vertices")) {
    a.layout.push_back({v.at("component").get<int>(), v.at("slot").get<int>(), v.at("conjugation").get<int>()});
    a.generators.push_back(expr_from_json(v.at("expr")));
  }
  if (a.generators.size() != a.graph.size()) throw Error("assignment lists a different number of vertices than its graph");
  if (!j.at("synthesis").is_null()) a.state = synthesis_state_from_json(j.at("synthesis"));
  return a;
}

inline json to_json(const VerificationReport& r) {
  auto pairs = [](const std::vector<PairCheck>& v) {
    json out = json::array();
    for (const auto& p : v) {
      out.push_back({{"u", p.u},
                     {"v", p.v},
                     {"residual", format_decimal(p.residual)},
                     {"at", format_decimal(p.at)},
                     {"passed", p.passed}});
    }
    return out;
  };
  auto words = [](const std::vector<WordCheck>& v, bool with_margin) {
    json table = json::array();
    std::size_t failed = 0;
    for (const auto& w : v) {
      json row{{"word", w.word},
               {"normal_form", w.normal_form},
               {"displacement", format_decimal(w.displacement)},
               {"passed", w.passed}};
      if (with_margin) {
        row["recorded"] = w.recorded;
        row["margin"] = format_decimal(w.margin);
      }
      failed += w.passed ? 0 : 1;
      table.push_back(std::move(row));
    }
    return json{{"count", v.size()}, {"failures", failed}, {"table", std::move(table)}};
  };
  json f_words = words(r.f_words, true);
  const double ratio = r.min_margin_ratio();
  f_words["min_margin_ratio"] = std::isfinite(ratio) ? json(format_decimal(ratio)) : json(nullptr);
  return json{{"format", kReportFormat},
              {"passed", r.passed()},
              {"manifold", to_string(r.manifold)},
              {"truncation",
               {{"word_len", r.word_len},
                {"grid_cells", r.grid_cells},
                {"tol", format_decimal(r.tol)},
                {"note", "free-product condition certified for words of length <= " + std::to_string(r.word_len) +
                             " only; longer words are not examined"}}},
              {"basepoint", format_decimal(r.basepoint)},
              {"f_min_derivative", format_decimal(r.f_min_derivative)},
              {"edges", pairs(r.edges)},
              {"non_edges", pairs(r.non_edges)},
              {"f_words", std::move(f_words)},
              {"g_words", words(r.g_words, false)},
              {"failures", r.failures}};
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error("'" + path + "' is not valid JSON: " + e.what());
  }
}

}  // namespace cliqueforest
