#pragma once

// Finite simple graphs, plus the two input formats (edge list and a DOT
// subset) and DOT output.
//
// Edge list:            DOT subset:
//   n=3                   graph G {
//   0 1                     0 -- 1;
//   1 2                     1 -- 2;
//                         }
// '#' starts a comment in the edge list.

#include <algorithm>
#include <cctype>
#include <deque>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cliqueforest/errors.hpp"

namespace cliqueforest {

class SimpleGraph {
 public:
  explicit SimpleGraph(std::size_t n = 0) : n_(n), adj_(n * n, false), neighbours_(n) {}

  std::size_t size() const { return n_; }

  /// Throws on loops and out-of-range endpoints; re-adding an edge is a no-op.
  void add_edge(std::size_t u, std::size_t v) {
    if (u >= n_ || v >= n_) throw DomainError("edge endpoint out of range");
    if (u == v) throw DomainError("loops are not allowed in a simple graph");
    if (adj_[u * n_ + v]) return;
    adj_[u * n_ + v] = adj_[v * n_ + u] = true;
    insert_sorted(neighbours_[u], static_cast<int>(v));
    insert_sorted(neighbours_[v], static_cast<int>(u));
    ++edge_count_;
  }

  bool adjacent(std::size_t u, std::size_t v) const { return u != v && adj_[u * n_ + v]; }

  const std::vector<int>& neighbours(std::size_t u) const { return neighbours_[u]; }

  std::size_t edge_count() const { return edge_count_; }

  /// Edges (u, v) with u < v in lexicographic order.
  std::vector<std::pair<int, int>> edges() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(edge_count_);
    for (std::size_t u = 0; u < n_; ++u) {
      for (int v : neighbours_[u]) {
        if (static_cast<std::size_t>(v) > u) out.emplace_back(static_cast<int>(u), v);
      }
    }
    return out;
  }

  friend bool operator==(const SimpleGraph& a, const SimpleGraph& b) { return a.n_ == b.n_ && a.adj_ == b.adj_; }

 private:
  static void insert_sorted(std::vector<int>& v, int x) { v.insert(std::lower_bound(v.begin(), v.end(), x), x); }

  std::size_t n_ = 0;
  std::vector<bool> adj_;
  std::vector<std::vector<int>> neighbours_;
  std::size_t edge_count_ = 0;
};

inline SimpleGraph complete_graph(std::size_t n) {
  SimpleGraph g(n);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) g.add_edge(u, v);
  }
  return g;
}

inline SimpleGraph path_graph(std::size_t n) {
  SimpleGraph g(n);
  for (std::size_t u = 0; u + 1 < n; ++u) g.add_edge(u, u + 1);
  return g;
}

/// Vertices of b are renumbered after those of a.
inline SimpleGraph disjoint_union(const SimpleGraph& a, const SimpleGraph& b) {
  SimpleGraph g(a.size() + b.size());
  for (auto [u, v] : a.edges()) g.add_edge(u, v);
  for (auto [u, v] : b.edges()) g.add_edge(u + a.size(), v + a.size());
  return g;
}

/// Components as sorted vertex lists, ordered by smallest vertex.
inline std::vector<std::vector<int>> connected_components(const SimpleGraph& g) {
  std::vector<std::vector<int>> comps;
  std::vector<bool> seen(g.size(), false);
  for (std::size_t s = 0; s < g.size(); ++s) {
    if (seen[s]) continue;
    std::vector<int> comp;
    std::deque<int> queue{static_cast<int>(s)};
    seen[s] = true;
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      comp.push_back(u);
      for (int v : g.neighbours(u)) {
        if (!seen[v]) {
          seen[v] = true;
          queue.push_back(v);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;
}

/// Shortest path from u to v (inclusive), empty when disconnected. Ties break
/// towards smaller vertex ids.
inline std::vector<int> shortest_path(const SimpleGraph& g, int u, int v) {
  std::vector<int> parent(g.size(), -1);
  std::vector<bool> seen(g.size(), false);
  std::deque<int> queue{u};
  seen[u] = true;
  while (!queue.empty()) {
    const int x = queue.front();
    queue.pop_front();
    if (x == v) break;
    for (int y : g.neighbours(x)) {
      if (!seen[y]) {
        seen[y] = true;
        parent[y] = x;
        queue.push_back(y);
      }
    }
  }
  if (!seen[v]) return {};
  std::vector<int> path;
  for (int x = v; x != -1; x = parent[x]) path.push_back(x);
  std::reverse(path.begin(), path.end());
  return path;
}

namespace detail {

inline std::string strip(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline long parse_vertex(const std::string& tok, std::size_t line) {
  if (tok.empty() || !std::all_of(tok.begin(), tok.end(), [](unsigned char c) { return std::isdigit(c); })) {
    throw ParseError("expected a non-negative vertex id, got '" + tok + "'", line);
  }
  try {
    return std::stol(tok);
  } catch (const std::exception&) {
    throw ParseError("vertex id out of range: '" + tok + "'", line);
  }
}

}  // namespace detail

inline SimpleGraph parse_edge_list(std::istream& in) {
  std::string raw;
  std::size_t line = 0;
  long n = -1;
  std::vector<std::pair<std::pair<long, long>, std::size_t>> pending;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string text = detail::strip(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (text.empty()) continue;
    if (n < 0) {
      const std::string compact = [&] {
        std::string s;
        for (char c : text) {
          if (!std::isspace(static_cast<unsigned char>(c))) s += c;
        }
        return s;
      }();
      if (compact.rfind("n=", 0) != 0) throw ParseError("expected header 'n=<vertex count>'", line);
      n = detail::parse_vertex(compact.substr(2), line);
      continue;
    }
    std::istringstream fields(text);
    std::string a, b, extra;
    if (!(fields >> a >> b) || (fields >> extra)) throw ParseError("expected 'u v'", line);
    pending.push_back({{detail::parse_vertex(a, line), detail::parse_vertex(b, line)}, line});
  }
  if (n < 0) throw ParseError("missing header 'n=<vertex count>'", line == 0 ? 1 : line);
  SimpleGraph g(static_cast<std::size_t>(n));
  for (const auto& [uv, at] : pending) {
    const auto [u, v] = uv;
    if (u >= n || v >= n) throw ParseError("vertex out of range 0.." + std::to_string(n - 1), at);
    if (u == v) throw ParseError("loop " + std::to_string(u) + " " + std::to_string(v), at);
    if (g.adjacent(u, v)) throw ParseError("repeated edge " + std::to_string(u) + " " + std::to_string(v), at);
    g.add_edge(u, v);
  }
  return g;
}

/// Undirected DOT without attributes: node statements "3;" and edge chains
/// "0 -- 1 -- 2;". Vertex names must be non-negative integers; the vertex
/// count is one more than the largest id.
inline SimpleGraph parse_dot(std::istream& in) {
  std::string raw;
  std::size_t line = 0;
  bool opened = false;
  bool closed = false;
  long max_id = -1;
  std::vector<std::pair<std::pair<long, long>, std::size_t>> pending;
  while (std::getline(in, raw)) {
    ++line;
    std::string text = raw;
    if (const auto c = text.find("//"); c != std::string::npos) text.resize(c);
    text = detail::strip(text);
    if (text.empty()) continue;
    if (!opened) {
      const auto brace = text.find('{');
      if (text.rfind("graph", 0) != 0 || brace == std::string::npos) {
        throw ParseError("expected 'graph <name> {'", line);
      }
      opened = true;
      text = detail::strip(text.substr(brace + 1));
      if (text.empty()) continue;
    }
    if (closed) throw ParseError("content after closing brace", line);
    if (const auto brace = text.find('}'); brace != std::string::npos) {
      if (!detail::strip(text.substr(brace + 1)).empty()) throw ParseError("content after closing brace", line);
      text = detail::strip(text.substr(0, brace));
      closed = true;
    }
    std::istringstream stmts(text);
    std::string stmt;
    while (std::getline(stmts, stmt, ';')) {
      stmt = detail::strip(stmt);
      if (stmt.empty()) continue;
      if (stmt.find('[') != std::string::npos) throw ParseError("attributes are not supported", line);
      if (stmt.find("->") != std::string::npos) throw ParseError("directed edges are not supported", line);
      std::vector<long> chain;
      std::size_t start = 0;
      while (true) {
        const auto dash = stmt.find("--", start);
        chain.push_back(detail::parse_vertex(detail::strip(stmt.substr(start, dash - start)), line));
        if (dash == std::string::npos) break;
        start = dash + 2;
      }
      for (long v : chain) max_id = std::max(max_id, v);
      for (std::size_t k = 0; k + 1 < chain.size(); ++k) pending.push_back({{chain[k], chain[k + 1]}, line});
    }
  }
  if (!opened) throw ParseError("empty DOT input", line == 0 ? 1 : line);
  if (!closed) throw ParseError("missing closing brace", line);
  SimpleGraph g(static_cast<std::size_t>(max_id + 1));
  for (const auto& [uv, at] : pending) {
    if (uv.first == uv.second) throw ParseError("loop on vertex " + std::to_string(uv.first), at);
    if (g.adjacent(uv.first, uv.second)) throw ParseError("repeated edge", at);
    g.add_edge(uv.first, uv.second);
  }
  return g;
}

/// Dispatches on the first significant token: "graph" selects DOT.
inline SimpleGraph parse_graph(const std::string& text) {
  std::istringstream probe(text);
  std::string first;
  probe >> first;
  std::istringstream in(text);
  if (first.rfind("graph", 0) == 0) return parse_dot(in);
  return parse_edge_list(in);
}

inline SimpleGraph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open graph file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_graph(buf.str());
}

inline std::string to_dot(const SimpleGraph& g, const std::string& name = "G") {
  std::ostringstream out;
  out << "graph " << name << " {\n";
  for (std::size_t v = 0; v < g.size(); ++v) out << "  " << v << ";\n";
  for (auto [u, v] : g.edges()) out << "  " << u << " -- " << v << ";\n";
  out << "}\n";
  return out.str();
}

inline std::string to_edge_list(const SimpleGraph& g) {
  std::ostringstream out;
  out << "n=" << g.size() << "\n";
  for (auto [u, v] : g.edges()) out << u << " " << v << "\n";
  return out.str();
}

}  // namespace cliqueforest
