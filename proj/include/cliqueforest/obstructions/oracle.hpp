#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cliqueforest/errors.hpp"

namespace cliqueforest {

/// Finite list of labelled group elements with an exact commutation predicate,
/// tabulated once at construction.
class CommutationOracle {
 public:
  CommutationOracle() = default;

  /// Throws if the predicate is not symmetric or reflexive, or if an identity
  /// element fails to commute with something.
  CommutationOracle(std::vector<std::string> labels, std::vector<bool> identity,
                    const std::function<bool(std::size_t, std::size_t)>& commute)
      : labels_(std::move(labels)), identity_(std::move(identity)) {
    const std::size_t n = labels_.size();
    if (identity_.size() != n) throw DomainError("oracle: identity flags and labels differ in length");
    table_.assign(n * n, false);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) table_[i * n + j] = commute(i, j);
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (!table_[i * n + i]) throw DomainError("oracle: element " + labels_[i] + " does not commute with itself");
      for (std::size_t j = 0; j < n; ++j) {
        if (table_[i * n + j] != table_[j * n + i]) throw DomainError("oracle: commutation is not symmetric");
        if (identity_[i] && !table_[i * n + j]) throw DomainError("oracle: identity fails to commute");
      }
    }
  }

  std::size_t size() const { return labels_.size(); }
  const std::string& label(std::size_t i) const { return labels_[i]; }
  const std::vector<std::string>& labels() const { return labels_; }
  bool is_identity(std::size_t i) const { return identity_[i]; }
  bool commute(std::size_t i, std::size_t j) const { return table_[i * labels_.size() + j]; }

 private:
  std::vector<std::string> labels_;
  std::vector<bool> identity_;
  std::vector<bool> table_;
};

/// Oracle over explicit group elements: a and b commute iff ab == ba.
template <class T, class Mul>
CommutationOracle make_group_oracle(const std::vector<T>& elements, std::vector<std::string> labels, const T& identity,
                                    Mul mul) {
  std::vector<bool> is_id;
  for (const auto& e : elements) is_id.push_back(e == identity);
  return CommutationOracle(std::move(labels), std::move(is_id), [&](std::size_t i, std::size_t j) {
    return mul(elements[i], elements[j]) == mul(elements[j], elements[i]);
  });
}

}  // namespace cliqueforest
