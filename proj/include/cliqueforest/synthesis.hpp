#pragma once

// Builds f = id + sum of small bumps so that every listed word W in f and the
// g's moves the basepoint p. Stage m handles word W_m:
//
//   budget      sup|w_m| < eps_{m-1} / 2^{r+1},  sup|w_m'| < 1 / 2^{r+1}
//   margin      D_m = |W_m(f_m, g..)(p) - p| > 0
//   tolerance   eps_m = min(eps_{m-1}, D_m / (2 * safety * L * Lambda^L))
//
// where r counts the nonzero bumps so far (including w_m), L is the length of
// W_m and Lambda bounds the derivative of every letter map and its inverse.
// Any map within eps_m of f_m in sup norm moves W_m(p) by less than D_m / 2,
// and the tail of the bump series stays below eps_m / 2, so the limit keeps
// |W_m(f)(p) - p| > D_m / 2 for every m. Counting r over nonzero bumps only
// keeps sum |w'| <= 1/2, hence f' >= 1/2.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "cliqueforest/diffeo.hpp"
#include "cliqueforest/dynamics.hpp"
#include "cliqueforest/parallel.hpp"
#include "cliqueforest/words.hpp"

namespace cliqueforest {

class SynthesisError : public Error {
 public:
  SynthesisError(const std::string& what, std::size_t stage, std::string word)
      : Error(what), stage_(stage), word_(std::move(word)) {}

  std::size_t stage() const noexcept { return stage_; }
  const std::string& word() const noexcept { return word_; }

 private:
  std::size_t stage_;
  std::string word_;
};

struct SynthesisOptions {
  double basepoint = 0.70710678;
  /// Cells of the grid on which bump sups and f' are certified.
  std::size_t grid_n = 1024;
  double safety_factor = 4.0;
  /// Smallest margin D accepted as numerically distinct from zero.
  double margin_floor = 1e-10;
  /// Extra basepoints tried after a failed run.
  int max_retries = 4;
  /// Polynomial bumps use x^k (1-x)^k; trigonometric bumps use frequency k.
  int shape_exponent = 1;
};

struct StageRecord {
  std::size_t word_index = 0;
  bool zero_bump = true;
  /// Nonzero bumps up to and including this stage.
  int rank = 0;
  Bump bump;
  double sup_bound = 0.0;
  double derivative_bound = 0.0;
  double sup_bump = 0.0;
  double sup_bump_derivative = 0.0;
  /// |W_m(f_{m-1})(p) - p| before this stage's bump.
  double deviation_before = 0.0;
  double margin = 0.0;
  double lipschitz = 0.0;
  double epsilon = 0.0;
  /// |W_m(f)(p) - p| for the final f.
  double final_displacement = 0.0;
};

struct SynthesisState {
  Manifold manifold = Manifold::IntervalI;
  double basepoint = 0.0;
  std::vector<FreeWord> words;
  std::vector<StageRecord> stages;
  double lambda = 0.0;
  double safety_factor = 0.0;
  double margin_floor = 0.0;
  std::size_t grid_cells = 0;
  std::vector<double> rejected_basepoints;
  std::vector<std::string> retry_reasons;

  /// Nonzero bumps of stages 1..m (all stages by default).
  std::vector<Bump> active_bumps(std::size_t m = std::numeric_limits<std::size_t>::max()) const {
    std::vector<Bump> out;
    for (std::size_t i = 0; i < stages.size() && i < m; ++i) {
      if (!stages[i].zero_bump) out.push_back(stages[i].bump);
    }
    return out;
  }

  /// f_m = id + w_1 + ... + w_m.
  DiffeoExpr partial(std::size_t m) const {
    auto bumps = active_bumps(m);
    if (bumps.empty()) return DiffeoExpr::identity(manifold);
    return DiffeoExpr::perturbed(manifold, std::move(bumps));
  }

  DiffeoExpr f() const { return partial(stages.size()); }

  /// 1 - sum of the derivative budgets actually spent.
  double derivative_floor() const {
    double s = 0.0;
    for (const auto& st : stages) {
      if (!st.zero_bump) s += st.derivative_bound;
    }
    return 1.0 - s;
  }
};

struct PerturbResult {
  DiffeoExpr f;
  SynthesisState state;
};

namespace detail {

struct BumpShape {
  int exponent;
  std::vector<double> coeffs;
};

inline std::vector<BumpShape> candidate_shapes(Manifold m, int k) {
  // x(1-x) alone generates the Moebius flow and commutes with every g to first
  // order, so interval shapes always carry a non-constant factor.
  if (m == Manifold::IntervalI) return {{k, {1.0, 1.0}}, {k, {2.0, -1.0}}, {k, {1.0, 0.0, 1.0}}};
  return {{k, {1.0, 0.0}}, {k, {0.0, 1.0}}, {2 * k, {1.0, 0.0}}};
}

inline Grid certification_grid(Manifold m, std::size_t cells) { return default_grid(m, 4 * cells); }

inline std::pair<double, double> grid_sups(const Bump& b, const Grid& grid) {
  double s0 = 0.0;
  double s1 = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    s0 = std::max(s0, std::fabs(b.value(grid[i])));
    s1 = std::max(s1, std::fabs(b.derivative(grid[i])));
  }
  return {s0, s1};
}

inline double letter_lipschitz(std::span<const DiffeoExpr> gens, const Grid& grid) {
  // Every admissible f has 1/2 < f' < 3/2, so (f^-1)' < 2.
  double lambda = 2.0;
  for (const auto& g : gens) {
    const DiffeoExpr inv = DiffeoExpr::inverse(g);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      lambda = std::max({lambda, slope(g, grid[i]), slope(inv, grid[i])});
    }
  }
  return lambda;
}

inline std::size_t word_length(const FreeWord& w) {
  std::size_t n = 0;
  for (const auto& l : w) n += static_cast<std::size_t>(std::abs(l.exponent));
  return n;
}

struct StageFailure {
  std::size_t stage;
  std::string word;
  std::string reason;
};

inline PerturbResult run_synthesis(const WordList& words, std::span<const DiffeoExpr> gens, Manifold manifold,
                                   double p, const SynthesisOptions& opts, StageFailure& failure, bool& ok) {
  ok = false;
  SynthesisState state;
  state.manifold = manifold;
  state.basepoint = p;
  state.words = words.words;
  state.safety_factor = opts.safety_factor;
  state.margin_floor = opts.margin_floor;
  state.grid_cells = opts.grid_n;
  const Grid cert = certification_grid(manifold, opts.grid_n);
  state.lambda = letter_lipschitz(gens, default_grid(manifold, opts.grid_n));

  std::vector<DiffeoExpr> maps;
  maps.push_back(DiffeoExpr::identity(manifold));
  maps.insert(maps.end(), gens.begin(), gens.end());

  const auto shapes = candidate_shapes(manifold, opts.shape_exponent);
  std::vector<std::pair<double, double>> shape_sups;
  for (const auto& s : shapes) {
    Bump unit;
    unit.basis = manifold == Manifold::IntervalI ? BumpBasis::Polynomial : BumpBasis::Trigonometric;
    unit.coefficient = 1.0;
    unit.shape_exponent = s.exponent;
    unit.shape = s.coeffs;
    shape_sups.push_back(grid_sups(unit, cert));
  }

  std::vector<Bump> active;
  double eps_prev = 1.0;
  for (std::size_t m = 0; m < words.words.size(); ++m) {
    const FreeWord& w = words.words[m];
    StageRecord rec;
    rec.word_index = m;
    const int r = static_cast<int>(active.size()) + 1;
    rec.sup_bound = std::ldexp(eps_prev, -(r + 1));
    rec.derivative_bound = std::ldexp(1.0, -(r + 1));
    rec.deviation_before = displacement(manifold, evaluate_word(w, maps, p), p);

    double best = rec.deviation_before >= opts.margin_floor ? rec.deviation_before : 0.0;
    bool use_bump = false;
    Bump chosen;
    DiffeoExpr chosen_f;
    if (!(rec.deviation_before > rec.sup_bound && rec.deviation_before >= opts.margin_floor)) {
      std::vector<DiffeoExpr> trial = maps;
      for (std::size_t s = 0; s < shapes.size(); ++s) {
        const double cmax =
            std::min(rec.sup_bound / shape_sups[s].first, rec.derivative_bound / shape_sups[s].second);
        for (double frac : {0.5, 0.25, 0.125}) {
          for (double sign : {1.0, -1.0}) {
            Bump b;
            b.basis = manifold == Manifold::IntervalI ? BumpBasis::Polynomial : BumpBasis::Trigonometric;
            b.coefficient = sign * frac * cmax;
            b.stage = static_cast<int>(m) + 1;
            b.shape_exponent = shapes[s].exponent;
            b.shape = shapes[s].coeffs;
            auto bumps = active;
            bumps.push_back(b);
            trial[0] = DiffeoExpr::perturbed(manifold, std::move(bumps));
            const double d = displacement(manifold, evaluate_word(w, trial, p), p);
            if (d > best) {
              best = d;
              use_bump = true;
              chosen = b;
              chosen_f = trial[0];
            }
          }
        }
      }
    }
    if (!(best >= opts.margin_floor)) {
      failure = {m + 1, to_string(w),
                 "margin " + std::to_string(best) + " below floor (budget " + std::to_string(rec.sup_bound) + ")"};
      return {};
    }
    if (use_bump) {
      const auto [s0, s1] = grid_sups(chosen, cert);
      if (!(s0 < rec.sup_bound && s1 < rec.derivative_bound)) {
        failure = {m + 1, to_string(w), "bump violates its budget on the certification grid"};
        return {};
      }
      rec.zero_bump = false;
      rec.bump = chosen;
      rec.sup_bump = s0;
      rec.sup_bump_derivative = s1;
      active.push_back(chosen);
      maps[0] = chosen_f;
    } else {
      rec.bump.basis = manifold == Manifold::IntervalI ? BumpBasis::Polynomial : BumpBasis::Trigonometric;
      rec.bump.coefficient = 0.0;
      rec.bump.stage = static_cast<int>(m) + 1;
    }
    rec.rank = static_cast<int>(active.size());
    rec.margin = best;
    const double len = static_cast<double>(word_length(w));
    rec.lipschitz = len * std::pow(state.lambda, len);
    rec.epsilon = std::min(eps_prev, best / (2.0 * opts.safety_factor * rec.lipschitz));
    if (!(rec.epsilon > std::numeric_limits<double>::min())) {
      failure = {m + 1, to_string(w), "tolerance underflow"};
      return {};
    }
    eps_prev = rec.epsilon;
    state.stages.push_back(std::move(rec));
  }

  const DiffeoExpr f = state.f();
  maps[0] = f;
  for (std::size_t i = 0; i < cert.size(); ++i) {
    if (!(slope(f, cert[i]) >= state.derivative_floor())) {
      failure = {state.stages.size(), "", "derivative of f fell below its floor at x = " + std::to_string(cert[i])};
      return {};
    }
  }
  parallel_for(state.stages.size(), [&](std::size_t m) {
    state.stages[m].final_displacement = displacement(manifold, evaluate_word(state.words[m], maps, p), p);
  });
  for (const auto& st : state.stages) {
    if (!(st.final_displacement > st.margin / 2.0)) {
      failure = {st.word_index + 1, to_string(state.words[st.word_index]), "final map lost the half margin"};
      return {};
    }
  }
  ok = true;
  return {f, std::move(state)};
}

}  // namespace detail

/// Basepoints tried in order after opts.basepoint.
inline std::vector<double> fallback_basepoints() { return {0.6180339887, 0.41421356, 0.5772156649, 0.3183098862}; }

/// gens[n-1] is g_n. Throws SynthesisError when every basepoint fails.
inline PerturbResult perturb_f(const WordList& words, std::span<const DiffeoExpr> gens,
                               const SynthesisOptions& opts = {}) {
  if (gens.empty()) throw DomainError("perturb_f: no g generators");
  const Manifold manifold = gens.front().manifold();
  if (manifold == Manifold::LineR) throw DomainError("perturb_f: synthesis runs on I or S1");
  for (const auto& g : gens) {
    if (g.manifold() != manifold) throw DomainError("perturb_f: mixed manifold tags");
  }
  if (words.num_g > static_cast<int>(gens.size())) throw DomainError("perturb_f: words use more g's than supplied");

  std::vector<double> basepoints{opts.basepoint};
  const auto extra = fallback_basepoints();
  for (int i = 0; i < opts.max_retries && i < static_cast<int>(extra.size()); ++i) basepoints.push_back(extra[i]);

  std::vector<double> rejected;
  std::vector<std::string> reasons;
  detail::StageFailure last{};
  for (double p : basepoints) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("perturb_f: basepoint must lie in (0, 1)");
    bool ok = false;
    detail::StageFailure failure{};
    PerturbResult result = detail::run_synthesis(words, gens, manifold, p, opts, failure, ok);
    if (ok) {
      result.state.rejected_basepoints = rejected;
      result.state.retry_reasons = reasons;
      return result;
    }
    rejected.push_back(p);
    reasons.push_back("p=" + std::to_string(p) + " stage " + std::to_string(failure.stage) + " (" + failure.word +
                      "): " + failure.reason);
    last = failure;
  }
  std::string all;
  for (const auto& r : reasons) all += "\n  " + r;
  throw SynthesisError("synthesis failed for every basepoint:" + all, last.stage, last.word);
}

}  // namespace cliqueforest
