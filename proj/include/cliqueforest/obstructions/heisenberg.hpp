#pragma once

// Integral unipotent 3x3 matrices
//
//   | 1 a c |
//   | 0 1 b |
//   | 0 0 1 |
//
// with exact integer arithmetic, finite word balls in them, and the text
// format for oracle input:
//
//   # balls of radius 2 over the listed generators (omit for a plain list)
//   radius 2
//   x: 1 1 0  0 1 0  0 0 1
//   y: 1 0 0  0 1 1  0 0 1

#include <array>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "cliqueforest/errors.hpp"
#include "cliqueforest/obstructions/oracle.hpp"

namespace cliqueforest {

struct UnipotentMatrix {
  long long a = 0;  // (1,2)
  long long b = 0;  // (2,3)
  long long c = 0;  // (1,3)

  friend bool operator==(const UnipotentMatrix&, const UnipotentMatrix&) = default;
  friend auto operator<=>(const UnipotentMatrix&, const UnipotentMatrix&) = default;

  friend UnipotentMatrix operator*(const UnipotentMatrix& x, const UnipotentMatrix& y) {
    return {x.a + y.a, x.b + y.b, x.c + y.c + x.a * y.b};
  }

  UnipotentMatrix inverse() const { return {-a, -b, a * b - c}; }

  std::array<std::array<long long, 3>, 3> matrix() const { return {{{1, a, c}, {0, 1, b}, {0, 0, 1}}}; }

  static UnipotentMatrix from_matrix(const std::array<std::array<long long, 3>, 3>& m) {
    if (m[0][0] != 1 || m[1][1] != 1 || m[2][2] != 1 || m[1][0] != 0 || m[2][0] != 0 || m[2][1] != 0) {
      throw DomainError("matrix is not upper unitriangular");
    }
    return {m[0][1], m[1][2], m[0][2]};
  }
};

inline const UnipotentMatrix kHeisenbergX{1, 0, 0};
inline const UnipotentMatrix kHeisenbergY{0, 1, 0};
inline const UnipotentMatrix kHeisenbergZ{0, 0, 1};

inline UnipotentMatrix commutator(const UnipotentMatrix& x, const UnipotentMatrix& y) {
  return x * y * x.inverse() * y.inverse();
}

struct ElementBall {
  std::vector<UnipotentMatrix> elements;
  std::vector<std::string> labels;
};

namespace detail {

using LabelWord = std::vector<std::pair<std::size_t, long>>;

inline std::string format_label(const LabelWord& w, const std::vector<std::string>& names) {
  if (w.empty()) return "e";
  std::string out;
  for (const auto& [g, e] : w) {
    if (!out.empty()) out += ' ';
    out += names[g];
    if (e != 1) out += "^" + std::to_string(e);
  }
  return out;
}

}  // namespace detail

/// All products of at most `radius` generators and inverses, deduplicated.
/// Elements appear in breadth-first order and are labelled by the first word
/// reaching them ("e" for the identity, "x^2 y^-1" and so on).
inline ElementBall unipotent_ball(const std::vector<UnipotentMatrix>& gens, const std::vector<std::string>& names,
                                  int radius) {
  if (radius < 1) throw DomainError("ball radius must be at least 1");
  if (gens.size() != names.size()) throw DomainError("generator names and matrices differ in length");
  ElementBall ball;
  std::vector<detail::LabelWord> words{{}};
  std::map<UnipotentMatrix, std::size_t> seen;
  ball.elements.push_back({});
  seen[{}] = 0;
  std::size_t frontier_begin = 0;
  for (int r = 1; r <= radius; ++r) {
    const std::size_t frontier_end = ball.elements.size();
    for (std::size_t i = frontier_begin; i < frontier_end; ++i) {
      for (std::size_t g = 0; g < gens.size(); ++g) {
        for (long sign : {1L, -1L}) {
          const UnipotentMatrix next = ball.elements[i] * (sign > 0 ? gens[g] : gens[g].inverse());
          if (seen.count(next)) continue;
          seen[next] = ball.elements.size();
          ball.elements.push_back(next);
          detail::LabelWord w = words[i];
          if (!w.empty() && w.back().first == g) {
            w.back().second += sign;
          } else {
            w.emplace_back(g, sign);
          }
          words.push_back(std::move(w));
        }
      }
    }
    frontier_begin = frontier_end;
  }
  for (const auto& w : words) ball.labels.push_back(detail::format_label(w, names));
  return ball;
}

inline CommutationOracle oracle_from_ball(const ElementBall& ball) {
  return make_group_oracle(ball.elements, ball.labels, UnipotentMatrix{},
                           [](const UnipotentMatrix& x, const UnipotentMatrix& y) { return x * y; });
}

inline ElementBall heisenberg_ball_elements(int radius) {
  return unipotent_ball({kHeisenbergX, kHeisenbergY, kHeisenbergZ}, {"x", "y", "z"}, radius);
}

/// Ball over the standard generators x, y and the central z = [x, y].
inline CommutationOracle heisenberg_ball(int radius) { return oracle_from_ball(heisenberg_ball_elements(radius)); }

/// Parses the oracle text format. With a "radius" line the listed matrices are
/// generators of a ball; otherwise they are the elements themselves.
inline ElementBall parse_oracle_text(std::istream& in) {
  std::string raw;
  std::size_t line = 0;
  int radius = 0;
  std::vector<UnipotentMatrix> mats;
  std::vector<std::string> names;
  std::map<UnipotentMatrix, std::string> listed;
  while (std::getline(in, raw)) {
    ++line;
    if (const auto h = raw.find('#'); h != std::string::npos) raw.resize(h);
    std::istringstream fields(raw);
    std::string head;
    if (!(fields >> head)) continue;
    if (head == "radius") {
      if (!(fields >> radius) || radius < 1) throw ParseError("radius must be a positive integer", line);
      continue;
    }
    if (head.back() != ':' || head.size() < 2) throw ParseError("expected '<label>: <9 integers>'", line);
    const std::string label = head.substr(0, head.size() - 1);
    std::array<std::array<long long, 3>, 3> m{};
    for (auto& row : m) {
      for (auto& v : row) {
        if (!(fields >> v)) throw ParseError("expected 9 integer matrix entries", line);
      }
    }
    std::string extra;
    if (fields >> extra) throw ParseError("trailing input after matrix entries", line);
    UnipotentMatrix u;
    try {
      u = UnipotentMatrix::from_matrix(m);
    } catch (const DomainError& e) {
      throw ParseError(e.what(), line);
    }
    if (auto it = listed.find(u); it != listed.end()) {
      throw ParseError("element '" + label + "' duplicates '" + it->second + "'", line);
    }
    listed[u] = label;
    mats.push_back(u);
    names.push_back(label);
  }
  if (mats.empty()) throw ParseError("no elements listed", line == 0 ? 1 : line);
  if (radius > 0) return unipotent_ball(mats, names, radius);
  return ElementBall{std::move(mats), std::move(names)};
}

}  // namespace cliqueforest
