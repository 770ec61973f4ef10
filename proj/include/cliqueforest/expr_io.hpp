#pragma once

// Expression serialization. JSON documents carry every real as a decimal
// string with 17 significant digits, which round-trips doubles exactly. The
// s-expression form is a compact spelling for command lines:
//
//   (compose (mobius 2) (inverse (mobius 3)))
//   (perturbed I (bump 0.01 1 1 1))        ; c k T0 T1 ...

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cliqueforest/diffeo.hpp"

namespace cliqueforest {

using json = nlohmann::json;

inline std::string format_decimal(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline double parse_decimal(std::string_view s) {
  std::string text(s);
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size()) {
    throw Error("malformed decimal '" + text + "'");
  }
  return v;
}

/// Accepts a decimal string or a plain JSON number.
inline double decimal_from_json(const json& j) {
  if (j.is_string()) return parse_decimal(j.get<std::string>());
  if (j.is_number()) return j.get<double>();
  throw Error("expected a decimal string, got " + j.dump());
}

inline std::string_view kind_name(DiffeoExpr::Kind k) {
  using K = DiffeoExpr::Kind;
  switch (k) {
    case K::Identity: return "identity";
    case K::Mobius: return "mobius";
    case K::Rotation: return "rotation";
    case K::SineShear: return "sine_shear";
    case K::Translation: return "translation";
    case K::Perturbed: return "perturbed";
    case K::Compose: return "compose";
    case K::Inverse: return "inverse";
    case K::Power: return "power";
  }
  return "?";
}

inline json bump_to_json(const Bump& b) {
  json shape = json::array();
  for (double t : b.shape) shape.push_back(format_decimal(t));
  return json{{"basis", b.basis == BumpBasis::Polynomial ? "polynomial" : "trigonometric"},
              {"coefficient", format_decimal(b.coefficient)},
              {"stage", b.stage},
              {"shape_exponent", b.shape_exponent},
              {"shape", std::move(shape)}};
}

inline Bump bump_from_json(const json& j) {
  Bump b;
  const std::string basis = j.at("basis").get<std::string>();
  if (basis == "polynomial") {
    b.basis = BumpBasis::Polynomial;
  } else if (basis == "trigonometric") {
    b.basis = BumpBasis::Trigonometric;
  } else {
    throw Error("unknown bump basis '" + basis + "'");
  }
  b.coefficient = decimal_from_json(j.at("coefficient"));
  b.stage = j.at("stage").get<int>();
  b.shape_exponent = j.at("shape_exponent").get<int>();
  b.shape.clear();
  for (const auto& t : j.at("shape")) b.shape.push_back(decimal_from_json(t));
  return b;
}

/// Tree without the root manifold tag (see expr_document).
inline json expr_to_json(const DiffeoExpr& e) {
  using K = DiffeoExpr::Kind;
  json j{{"kind", kind_name(e.kind())}};
  switch (e.kind()) {
    case K::Identity: j["manifold"] = to_string(e.manifold()); break;
    case K::Mobius: j["alpha"] = format_decimal(e.parameter()); break;
    case K::Rotation: j["theta"] = format_decimal(e.parameter()); break;
    case K::SineShear: j["a"] = format_decimal(e.parameter()); break;
    case K::Translation: j["c"] = format_decimal(e.parameter()); break;
    case K::Perturbed: {
      j["manifold"] = to_string(e.manifold());
      json bumps = json::array();
      for (const auto& b : e.bumps()) bumps.push_back(bump_to_json(b));
      j["bumps"] = std::move(bumps);
      break;
    }
    case K::Compose: {
      json parts = json::array();
      for (const auto& c : e.children()) parts.push_back(expr_to_json(c));
      j["parts"] = std::move(parts);
      break;
    }
    case K::Inverse: j["of"] = expr_to_json(e.children().front()); break;
    case K::Power:
      j["of"] = expr_to_json(e.children().front());
      j["k"] = e.exponent();
      break;
  }
  return j;
}

inline DiffeoExpr expr_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "identity") return DiffeoExpr::identity(manifold_from_string(j.at("manifold").get<std::string>()));
  if (kind == "mobius") return DiffeoExpr::mobius(decimal_from_json(j.at("alpha")));
  if (kind == "rotation") return DiffeoExpr::rotation(decimal_from_json(j.at("theta")));
  if (kind == "sine_shear") return DiffeoExpr::sine_shear(decimal_from_json(j.at("a")));
  if (kind == "translation") return DiffeoExpr::translation(decimal_from_json(j.at("c")));
  if (kind == "perturbed") {
    std::vector<Bump> bumps;
    for (const auto& b : j.at("bumps")) bumps.push_back(bump_from_json(b));
    return DiffeoExpr::perturbed(manifold_from_string(j.at("manifold").get<std::string>()), std::move(bumps));
  }
  if (kind == "compose") {
    std::vector<DiffeoExpr> parts;
    for (const auto& c : j.at("parts")) parts.push_back(expr_from_json(c));
    return DiffeoExpr::compose(std::move(parts));
  }
  if (kind == "inverse") return DiffeoExpr::inverse(expr_from_json(j.at("of")));
  if (kind == "power") return DiffeoExpr::power(expr_from_json(j.at("of")), j.at("k").get<int>());
  throw Error("unknown expression kind '" + kind + "'");
}

/// {"manifold": "I", "expr": {...}}
inline json expr_document(const DiffeoExpr& e) {
  return json{{"manifold", to_string(e.manifold())}, {"expr", expr_to_json(e)}};
}

inline DiffeoExpr expr_from_document(const json& doc) {
  DiffeoExpr e = expr_from_json(doc.at("expr"));
  if (doc.contains("manifold") && manifold_from_string(doc.at("manifold").get<std::string>()) != e.manifold()) {
    throw Error("root manifold tag disagrees with the expression");
  }
  return e;
}

inline std::string to_text(const DiffeoExpr& e) {
  using K = DiffeoExpr::Kind;
  std::string out = "(";
  switch (e.kind()) {
    case K::Identity: out += "identity " + std::string(to_string(e.manifold())); break;
    case K::Mobius: out += "mobius " + format_decimal(e.parameter()); break;
    case K::Rotation: out += "rotation " + format_decimal(e.parameter()); break;
    case K::SineShear: out += "sine " + format_decimal(e.parameter()); break;
    case K::Translation: out += "translate " + format_decimal(e.parameter()); break;
    case K::Perturbed:
      out += "perturbed " + std::string(to_string(e.manifold()));
      for (const auto& b : e.bumps()) {
        out += " (bump " + format_decimal(b.coefficient) + " " + std::to_string(b.shape_exponent);
        for (double t : b.shape) out += " " + format_decimal(t);
        out += ")";
      }
      break;
    case K::Compose:
      out += "compose";
      for (const auto& c : e.children()) out += " " + to_text(c);
      break;
    case K::Inverse: out += "inverse " + to_text(e.children().front()); break;
    case K::Power: out += "power " + to_text(e.children().front()) + " " + std::to_string(e.exponent()); break;
  }
  return out + ")";
}

namespace detail {

class SexprParser {
 public:
  explicit SexprParser(std::string_view text) : text_(text) {}

  DiffeoExpr parse_all() {
    DiffeoExpr e = parse_expr();
    skip_space();
    if (pos_ != text_.size()) fail("trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error("expression syntax error at offset " + std::to_string(pos_) + ": " + what);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  void expect(char c) {
    skip_space();
    if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  bool peek(char c) {
    skip_space();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  std::string atom() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) && text_[pos_] != '(' &&
           text_[pos_] != ')') {
      ++pos_;
    }
    if (start == pos_) fail("expected an atom");
    return std::string(text_.substr(start, pos_ - start));
  }

  double number() {
    const std::string a = atom();
    try {
      return parse_decimal(a);
    } catch (const Error&) {
      fail("expected a number, got '" + a + "'");
    }
  }

  int integer() {
    const double v = number();
    if (v != std::floor(v)) fail("expected an integer");
    return static_cast<int>(v);
  }

  DiffeoExpr parse_expr() {
    expect('(');
    const std::string head = atom();
    DiffeoExpr e;
    if (head == "identity") {
      e = DiffeoExpr::identity(manifold_from_string(atom()));
    } else if (head == "mobius") {
      e = DiffeoExpr::mobius(number());
    } else if (head == "rotation") {
      e = DiffeoExpr::rotation(number());
    } else if (head == "sine") {
      e = DiffeoExpr::sine_shear(number());
    } else if (head == "translate") {
      e = DiffeoExpr::translation(number());
    } else if (head == "compose") {
      std::vector<DiffeoExpr> parts;
      while (peek('(')) parts.push_back(parse_expr());
      e = DiffeoExpr::compose(std::move(parts));
    } else if (head == "inverse") {
      e = DiffeoExpr::inverse(parse_expr());
    } else if (head == "power") {
      DiffeoExpr base = parse_expr();
      e = DiffeoExpr::power(std::move(base), integer());
    } else if (head == "perturbed") {
      const Manifold m = manifold_from_string(atom());
      std::vector<Bump> bumps;
      while (peek('(')) {
        expect('(');
        if (atom() != "bump") fail("expected (bump ...)");
        Bump b;
        b.basis = m == Manifold::CircleS1 ? BumpBasis::Trigonometric : BumpBasis::Polynomial;
        b.stage = static_cast<int>(bumps.size()) + 1;
        b.coefficient = number();
        b.shape_exponent = integer();
        b.shape.clear();
        while (!peek(')')) b.shape.push_back(number());
        expect(')');
        bumps.push_back(std::move(b));
      }
      e = DiffeoExpr::perturbed(m, std::move(bumps));
    } else {
      fail("unknown head '" + head + "'");
    }
    expect(')');
    return e;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline DiffeoExpr parse_expr(std::string_view text) { return detail::SexprParser(text).parse_all(); }

}  // namespace cliqueforest
