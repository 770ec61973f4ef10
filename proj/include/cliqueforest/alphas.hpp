#pragma once

// Parameters for the commuting generator family: alpha_n = exp(sqrt(p_n) / C)
// with p_n the n-th prime. Square roots of distinct primes are linearly
// independent over Q, so no integer relation among the logs exists; the
// height-bounded check below records how far from one we are numerically.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "cliqueforest/errors.hpp"

namespace cliqueforest {

inline constexpr double kRelationThreshold = 1e-9;

struct AlphaSequence {
  std::vector<double> alphas;
  double spread = 0.0;  // C
  int relation_bound = 0;  // K
  /// min over integer vectors with 0 < max|k_i| <= K of |sum k_i log alpha_i|.
  double min_relation = 0.0;
  std::vector<int> min_relation_vector;
};

inline std::vector<long> first_primes(std::size_t n) {
  std::vector<long> primes;
  for (long c = 2; primes.size() < n; ++c) {
    bool prime = true;
    for (long p : primes) {
      if (p * p > c) break;
      if (c % p == 0) {
        prime = false;
        break;
      }
    }
    if (prime) primes.push_back(c);
  }
  return primes;
}

namespace detail {

struct PartialSum {
  double value;
  std::vector<int> coeffs;
};

inline std::vector<PartialSum> all_partial_sums(std::span<const double> values, int k) {
  std::vector<PartialSum> out{{0.0, {}}};
  for (double v : values) {
    std::vector<PartialSum> next;
    next.reserve(out.size() * (2 * k + 1));
    for (const auto& ps : out) {
      for (int c = -k; c <= k; ++c) {
        auto coeffs = ps.coeffs;
        coeffs.push_back(c);
        next.push_back({ps.value + c * v, std::move(coeffs)});
      }
    }
    out = std::move(next);
  }
  return out;
}

inline bool all_zero(const std::vector<int>& v) {
  return std::all_of(v.begin(), v.end(), [](int c) { return c == 0; });
}

}  // namespace detail

/// Exact minimum of |sum k_i v_i| over nonzero integer vectors with
/// max|k_i| <= bound, by meet in the middle over the two halves of `values`.
inline double min_integer_relation(std::span<const double> values, int bound, std::vector<int>* argmin = nullptr) {
  if (values.empty()) throw DomainError("min_integer_relation: no values");
  if (bound < 1) throw DomainError("min_integer_relation: bound must be positive");
  const std::size_t half = values.size() / 2;
  const std::size_t larger = values.size() - half;
  if (std::pow(2.0 * bound + 1.0, static_cast<double>(larger)) > 2e7) {
    throw DomainError("min_integer_relation: search space too large for this bound");
  }
  const auto left = detail::all_partial_sums(values.subspan(0, half), bound);
  auto right = detail::all_partial_sums(values.subspan(half), bound);
  std::sort(right.begin(), right.end(), [](const auto& a, const auto& b) { return a.value < b.value; });

  double best = std::numeric_limits<double>::infinity();
  const std::vector<int>* best_left = nullptr;
  const std::vector<int>* best_right = nullptr;
  auto consider = [&](const detail::PartialSum& l, const detail::PartialSum& r) {
    const double v = std::fabs(l.value + r.value);
    if (v < best) {
      best = v;
      best_left = &l.coeffs;
      best_right = &r.coeffs;
    }
  };
  for (const auto& l : left) {
    if (detail::all_zero(l.coeffs)) {
      for (const auto& r : right) {
        if (!detail::all_zero(r.coeffs)) consider(l, r);
      }
      continue;
    }
    auto it = std::lower_bound(right.begin(), right.end(), -l.value,
                               [](const auto& r, double t) { return r.value < t; });
    if (it != right.end()) consider(l, *it);
    if (it != right.begin()) consider(l, *std::prev(it));
  }
  if (argmin && best_left && best_right) {
    *argmin = *best_left;
    argmin->insert(argmin->end(), best_right->begin(), best_right->end());
  }
  return best;
}

/// Rotation version for circle generators: min over nonzero k (max|k_i| <= K)
/// of the distance from sum k_i alpha_i / (2 pi) to the nearest integer.
/// Exhaustive; throws when the search space exceeds 1e7 vectors.
inline double min_rotation_relation(std::span<const double> alphas, int bound) {
  const double count = std::pow(2.0 * bound + 1.0, static_cast<double>(alphas.size()));
  if (count > 1e7) throw DomainError("min_rotation_relation: search space too large for this bound");
  std::vector<int> k(alphas.size(), -bound);
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    if (!detail::all_zero(k)) {
      double turns = 0.0;
      for (std::size_t i = 0; i < k.size(); ++i) turns += k[i] * alphas[i] / (2.0 * std::numbers::pi);
      best = std::min(best, std::fabs(turns - std::round(turns)));
    }
    std::size_t i = 0;
    while (i < k.size() && k[i] == bound) k[i++] = -bound;
    if (i == k.size()) break;
    ++k[i];
  }
  return best;
}

inline AlphaSequence choose_alphas(int count, int bound) {
  if (count < 1) throw DomainError("choose_alphas: need at least one alpha");
  if (bound < 1) throw DomainError("choose_alphas: relation bound must be positive");
  const auto primes = first_primes(static_cast<std::size_t>(count));
  AlphaSequence seq;
  seq.relation_bound = bound;
  // sqrt(p_n) / C <= 1 < log(pi) keeps every alpha inside (1, pi).
  seq.spread = std::max(2.0, std::sqrt(static_cast<double>(primes.back())));
  std::vector<double> logs;
  for (long p : primes) {
    logs.push_back(std::sqrt(static_cast<double>(p)) / seq.spread);
    seq.alphas.push_back(std::exp(logs.back()));
  }
  for (double a : seq.alphas) {
    if (!(a > 1.0 && a < std::numbers::pi)) throw Error("choose_alphas: alpha left (1, pi)");
  }
  seq.min_relation = min_integer_relation(logs, bound, &seq.min_relation_vector);
  if (!(seq.min_relation > kRelationThreshold)) {
    throw Error("choose_alphas: integer relation among log alphas below threshold at bound " + std::to_string(bound));
  }
  return seq;
}

}  // namespace cliqueforest
