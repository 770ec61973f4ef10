// Command-line front end.
//
// Exit codes: 0 pass / embeddable / nothing found, 1 finding (not embeddable,
// verification failure, incomplete component, obstruction found), 2 input
// error, 3 synthesis failure.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cliqueforest/cliqueforest.hpp"

namespace cf = cliqueforest;
using cf::json;

namespace {

constexpr int kPass = 0;
constexpr int kFinding = 1;
constexpr int kInputError = 2;
constexpr int kSynthesisFailure = 3;

struct Config {
  std::string input;
  std::string graph;
  std::string out;
  std::string report;
  std::string manifold = "I";
  double tol = 1e-9;
  std::size_t grid = 1024;
  int word_len = 6;
  int power_bound = 12;
  int alpha_k = 5;
  double basepoint = cf::SynthesisOptions{}.basepoint;
  double margin_floor = cf::SynthesisOptions{}.margin_floor;
  int radius = 0;
  double a = 1.0;
  double b = 2.0;
  int n_max = 3;
};

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw cf::Error("cannot write '" + path + "'");
  out << text;
}

std::string pretty(const json& j) { return j.dump(2) + "\n"; }
std::string compact(const json& j) { return j.dump() + "\n"; }

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw cf::Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

cf::Manifold parse_manifold(const std::string& name) {
  const cf::Manifold m = cf::manifold_from_string(name);
  if (m == cf::Manifold::LineR) throw cf::DomainError("--manifold must be I or S1");
  return m;
}

void check_positive(const Config& c) {
  if (!(c.tol > 0.0)) throw cf::DomainError("--tol must be positive");
  if (c.grid < 2) throw cf::DomainError("--grid must be at least 2");
  if (c.word_len < 1) throw cf::DomainError("--word-len must be positive");
  if (c.power_bound < 1) throw cf::DomainError("--power-bound must be positive");
  if (c.alpha_k < 1) throw cf::DomainError("--alpha-k must be positive");
}

bool looks_like_json(const std::string& text) {
  for (char ch : text) {
    if (std::isspace(static_cast<unsigned char>(ch))) continue;
    return ch == '{' || ch == '[';
  }
  return false;
}

/// One s-expression per line ('#' comments), or a JSON document: an array of
/// expressions, {"exprs": [...]}, or a single {"expr": ...}.
std::vector<cf::DiffeoExpr> read_expressions(const std::string& text) {
  std::vector<cf::DiffeoExpr> out;
  if (looks_like_json(text)) {
    json doc;
    try {
      doc = json::parse(text);
    } catch (const json::parse_error& e) {
      throw cf::Error(std::string("invalid JSON: ") + e.what());
    }
    try {
      if (doc.is_object() && doc.contains("expr")) {
        out.push_back(cf::expr_from_document(doc));
        return out;
      }
      const json& list = doc.is_array() ? doc : doc.at("exprs");
      if (!list.is_array()) throw cf::Error("\"exprs\" must be an array");
      // Entries are expression objects or s-expression strings.
      for (const auto& e : list) {
        out.push_back(e.is_string() ? cf::parse_expr(e.get<std::string>()) : cf::expr_from_json(e));
      }
    } catch (const json::exception& e) {
      throw cf::Error(std::string("malformed expression document: ") + e.what());
    }
    return out;
  }
  std::istringstream in(text);
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (const auto h = raw.find('#'); h != std::string::npos) raw.resize(h);
    if (raw.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(cf::parse_expr(raw));
    } catch (const cf::ParseError&) {
      throw;
    } catch (const cf::Error& e) {
      throw cf::ParseError(e.what(), line);
    }
  }
  return out;
}

/// Path to an existing file, or the expression text itself.
cf::DiffeoExpr read_single_expression(const std::string& arg) {
  std::ifstream probe(arg);
  const std::string text = probe ? slurp(arg) : arg;
  auto exprs = read_expressions(text);
  if (exprs.size() != 1) throw cf::Error("expected exactly one expression, got " + std::to_string(exprs.size()));
  return exprs.front();
}

int run_decide(const Config& c) {
  const cf::SimpleGraph g = cf::read_graph_file(c.input);
  const cf::EmbeddabilityDecision d = cf::embeddable_raag(g, parse_manifold(c.manifold));
  json j = cf::to_json(d);
  j["vertices"] = g.size();
  write_text(c.out, pretty(j));
  return d.embeddable ? kPass : kFinding;
}

int run_synthesize(const Config& c) {
  check_positive(c);
  const cf::SimpleGraph g = cf::read_graph_file(c.input);
  cf::EmbeddingOptions opts;
  opts.word_len = c.word_len;
  opts.alpha_k = c.alpha_k;
  opts.synthesis.basepoint = c.basepoint;
  opts.synthesis.margin_floor = c.margin_floor;
  opts.synthesis.grid_n = c.grid;
  cf::GeneratorAssignment a;
  try {
    a = cf::synthesize_embedding(g, parse_manifold(c.manifold), opts);
  } catch (const cf::NotEmbeddable& e) {
    json j{{"embeddable", false}, {"manifold", c.manifold}, {"missing_edge", cf::to_json(e.witness())}};
    write_text(c.out, pretty(j));
    std::cerr << "not embeddable: " << e.what() << "\n";
    return kFinding;
  }
  const cf::VerificationReport rep = cf::verify_assignment(a, g, c.word_len, c.grid, c.tol);
  write_text(c.out, compact(cf::to_json(a)));
  if (!c.report.empty()) write_text(c.report, compact(cf::to_json(rep)));
  std::cerr << (rep.passed() ? "verification passed" : "verification FAILED") << ": " << rep.edges.size()
            << " edges, " << rep.non_edges.size() << " non-edges, " << rep.f_words.size() << " f-words, "
            << rep.g_words.size() << " g-words, " << rep.failures.size() << " failures\n";
  return rep.passed() ? kPass : kFinding;
}

int run_verify(const Config& c) {
  check_positive(c);
  const cf::GeneratorAssignment a = cf::assignment_from_json(cf::read_json_file(c.input));
  const cf::SimpleGraph g = c.graph.empty() ? a.graph : cf::read_graph_file(c.graph);
  const cf::VerificationReport rep = cf::verify_assignment(a, g, c.word_len, c.grid, c.tol);
  write_text(c.out, compact(cf::to_json(rep)));
  for (const auto& f : rep.failures) std::cerr << "failure: " << f << "\n";
  return rep.passed() ? kPass : kFinding;
}

int run_fixpoints(const Config& c) {
  if (!(c.tol > 0.0)) throw cf::DomainError("--tol must be positive");
  const cf::DiffeoExpr e = read_single_expression(c.input);
  const cf::FixedPointSet s = cf::fixed_points(e, c.grid, c.tol);
  std::string line;
  for (std::size_t i = 0; i < s.points.size(); ++i) {
    if (i) line += ", ";
    line += cf::format_decimal(s.points[i].x);
  }
  std::cout << line << "\n";
  if (!c.out.empty()) {
    json points = json::array();
    for (const auto& p : s.points) {
      points.push_back({{"x", cf::format_decimal(p.x)},
                        {"kind", p.kind == cf::FixedPointKind::Transverse ? "transverse" : "tangency_suspect"}});
    }
    json gaps = json::array();
    for (const auto& gp : s.gaps) {
      gaps.push_back({{"lo", cf::format_decimal(gp.lo)}, {"hi", cf::format_decimal(gp.hi)}, {"sign", gp.sign}});
    }
    write_text(c.out, pretty(json{{"manifold", cf::to_string(s.manifold)},
                                  {"expr", cf::to_text(e)},
                                  {"grid_cells", s.grid_cells},
                                  {"residual_tol", cf::format_decimal(s.residual_tol)},
                                  {"degenerate", s.degenerate},
                                  {"points", std::move(points)},
                                  {"gaps", std::move(gaps)}}));
  }
  return kPass;
}

int run_commgraph(const Config& c) {
  check_positive(c);
  const auto exprs = read_expressions(slurp(c.input));
  cf::CommutationGraphOptions opts;
  opts.tol = c.tol;
  opts.power_bound = c.power_bound;
  opts.grid_n = c.grid;
  const cf::CommutationGraph cg = cf::commutation_graph(exprs, opts);
  const cf::CompletenessReport comp = cf::check_component_completeness(cg.graph);
  std::cout << cf::to_dot(cg.graph, "commutation");
  if (!c.out.empty()) {
    json j = cf::to_json(cg);
    j["completeness"] = cf::to_json(comp);
    write_text(c.out, pretty(j));
  }
  return comp.passed() ? kPass : kFinding;
}

int run_obstruct(const Config& c) {
  cf::ElementBall ball;
  std::string source;
  if (c.radius > 0) {
    if (!c.input.empty()) throw cf::DomainError("give either an oracle file or --heisenberg, not both");
    ball = cf::heisenberg_ball_elements(c.radius);
    source = "heisenberg ball of radius " + std::to_string(c.radius);
  } else {
    if (c.input.empty()) throw cf::DomainError("obstruct needs an oracle file or --heisenberg RADIUS");
    std::ifstream in(c.input);
    if (!in) throw cf::Error("cannot open '" + c.input + "'");
    ball = cf::parse_oracle_text(in);
    source = c.input;
  }
  const cf::CommutationOracle o = cf::oracle_from_ball(ball);
  const auto cert = cf::find_centralizer_quadruple(o);
  const cf::CenterCheck center = cf::center_nonabelian_check(o);
  json j{{"source", source},
         {"elements", o.size()},
         {"found", cert.has_value()},
         {"certificate", cert ? cf::to_json(*cert, o) : json(nullptr)},
         {"center", cf::to_json(center, o)},
         {"scope", "search covers the listed elements only; no quadruple here says nothing about the whole group"}};
  write_text(c.out, pretty(j));
  return cert ? kFinding : kPass;
}

int run_remark(const Config& c) {
  if (c.grid < 2) throw cf::DomainError("--grid must be at least 2");
  const cf::RemarkReport r = cf::remark_counterexample_suite(c.a, c.b, c.n_max, cf::remark_grid(c.grid));
  write_text(c.out, pretty(cf::to_json(r)));
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Right-angled Artin groups in analytic diffeomorphisms of I and S1"};
  app.require_subcommand(1);
  Config c;

  auto add_tol = [&](CLI::App* s) { s->add_option("--tol", c.tol, "Numerical tolerance")->capture_default_str(); };
  auto add_out = [&](CLI::App* s) { s->add_option("--out", c.out, "Output file (default stdout)"); };
  auto add_manifold = [&](CLI::App* s) {
    s->add_option("--manifold", c.manifold, "I or S1")->check(CLI::IsMember({"I", "S1"}))->capture_default_str();
  };

  auto* decide = app.add_subcommand("decide", "Decide embeddability of A(G) by the clique-forest criterion");
  decide->add_option("graph", c.input, "Edge list or DOT file")->required();
  add_manifold(decide);
  add_out(decide);

  auto* synth = app.add_subcommand("synthesize", "Build explicit generators for A(G) and verify them");
  synth->add_option("graph", c.input, "Edge list or DOT file")->required();
  add_manifold(synth);
  add_tol(synth);
  synth->add_option("--grid", c.grid, "Grid cells")->capture_default_str();
  synth->add_option("--word-len", c.word_len, "Certified word length")->capture_default_str();
  synth->add_option("--alpha-k", c.alpha_k, "Integer relation bound for the alphas")->capture_default_str();
  synth->add_option("--basepoint", c.basepoint, "Basepoint p")->capture_default_str();
  synth->add_option("--margin-floor", c.margin_floor, "Smallest accepted displacement D per word")
      ->capture_default_str();
  add_out(synth);
  synth->add_option("--report", c.report, "Verification report file");

  auto* verify = app.add_subcommand("verify", "Re-verify a serialized generator assignment");
  verify->add_option("assignment", c.input, "Assignment JSON")->required();
  verify->add_option("--graph", c.graph, "Graph to check against (default: the one stored)");
  add_tol(verify);
  verify->add_option("--grid", c.grid, "Grid cells")->capture_default_str();
  verify->add_option("--word-len", c.word_len, "Certified word length")->capture_default_str();
  add_out(verify);

  auto* fix = app.add_subcommand("fixpoints", "Fixed points of one expression");
  fix->add_option("expr", c.input, "Expression text or file")->required();
  fix->add_option("--tol", c.tol, "Residual tolerance");
  fix->add_option("--grid", c.grid, "Grid cells")->capture_default_str();
  add_out(fix);

  auto* comm = app.add_subcommand("commgraph", "Commutation graph of a list of expressions (DOT)");
  comm->add_option("exprs", c.input, "File with one expression per line, or JSON")->required();
  add_tol(comm);
  comm->add_option("--grid", c.grid, "Grid cells")->capture_default_str();
  comm->add_option("--power-bound", c.power_bound, "Circle: largest power searched")->capture_default_str();
  add_out(comm);

  auto* obs = app.add_subcommand("obstruct", "Search a finite element list for a centralizer quadruple");
  obs->add_option("oracle", c.input, "Oracle text file");
  obs->add_option("--heisenberg", c.radius, "Use the Heisenberg ball of this radius");
  add_out(obs);

  auto* rem = app.add_subcommand("remark", "Sine-shear family on R: commutation without transitivity");
  rem->add_option("--a", c.a, "Parameter a")->capture_default_str();
  rem->add_option("--b", c.b, "Parameter b")->capture_default_str();
  rem->add_option("--n-max", c.n_max, "Largest power")->capture_default_str();
  rem->add_option("--grid", c.grid, "Grid points over [0, 4pi] (default 2048)");
  add_out(rem);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kInputError;
  }

  // fixpoints uses a tighter default residual tolerance than the rest.
  if (fix->parsed() && fix->count("--tol") == 0) c.tol = 1e-12;
  if (rem->parsed() && rem->count("--grid") == 0) c.grid = 2048;

  try {
    if (decide->parsed()) return run_decide(c);
    if (synth->parsed()) return run_synthesize(c);
    if (verify->parsed()) return run_verify(c);
    if (fix->parsed()) return run_fixpoints(c);
    if (comm->parsed()) return run_commgraph(c);
    if (obs->parsed()) return run_obstruct(c);
    if (rem->parsed()) return run_remark(c);
  } catch (const cf::SynthesisError& e) {
    std::cerr << "synthesis failed at stage " << e.stage() << " (word " << e.word() << "): " << e.what() << "\n";
    return kSynthesisFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
