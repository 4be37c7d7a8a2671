#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "semap/prob.hpp"

namespace semap {

/// Ordered label vocabulary: an immutable base set plus append-only
/// expansion labels. All belief/likelihood/prior vectors in the engine are
/// indexed through this catalog.
class ClassCatalog {
 public:
  explicit ClassCatalog(std::vector<std::string> base_labels) {
    if (base_labels.empty())
      throw std::invalid_argument("catalog: base label set is empty");
    labels_ = std::move(base_labels);
    base_count_ = labels_.size();
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      if (labels_[i].empty())
        throw std::invalid_argument("catalog: empty label name");
      if (!index_.emplace(labels_[i], i).second)
        throw std::invalid_argument("catalog: duplicate label '" + labels_[i] +
                                    "'");
    }
  }

  /// Appends an expansion label; returns its index. Existing indices are
  /// never disturbed.
  std::size_t append(const std::string& name) {
    if (name.empty()) throw std::invalid_argument("catalog: empty label name");
    if (index_.count(name))
      throw std::invalid_argument("catalog: duplicate label '" + name + "'");
    labels_.push_back(name);
    std::size_t idx = labels_.size() - 1;
    index_.emplace(name, idx);
    return idx;
  }

  std::size_t size() const { return labels_.size(); }
  std::size_t base_size() const { return base_count_; }
  std::size_t expansion_size() const { return labels_.size() - base_count_; }

  bool has(const std::string& name) const { return index_.count(name) > 0; }
  bool is_expansion(std::size_t idx) const { return idx >= base_count_; }

  std::size_t index_of(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end())
      throw std::invalid_argument("catalog: unknown label '" + name + "'");
    return it->second;
  }

  const std::string& name(std::size_t idx) const {
    if (idx >= labels_.size())
      throw std::out_of_range("catalog: index out of range");
    return labels_[idx];
  }

  const std::vector<std::string>& labels() const { return labels_; }

  std::vector<std::string> base_labels() const {
    return {labels_.begin(), labels_.begin() + static_cast<long>(base_count_)};
  }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::size_t> index_;
  std::size_t base_count_ = 0;
};

/// Builds a prior that is zero outside `allowed` and proportional to
/// `weights` (uniform when absent) inside it. Normalized to sum 1.
inline Vec whitelist_prior(const ClassCatalog& catalog,
                           const std::set<std::string>& allowed,
                           const std::map<std::string, double>& weights = {}) {
  if (allowed.empty())
    throw std::invalid_argument("whitelist_prior: empty allowed set");
  Vec prior(catalog.size(), 0.0);
  for (const auto& name : allowed) {
    std::size_t idx = catalog.index_of(name);
    auto it = weights.find(name);
    double w = it == weights.end() ? 1.0 : it->second;
    if (!(w > 0.0) || !std::isfinite(w))
      throw std::invalid_argument("whitelist_prior: weight for '" + name +
                                  "' must be positive and finite");
    prior[idx] = w;
  }
  normalize(prior, "whitelist_prior");
  return prior;
}

inline Vec uniform_prior(const ClassCatalog& catalog) {
  return Vec(catalog.size(), 1.0 / static_cast<double>(catalog.size()));
}

}  // namespace semap
