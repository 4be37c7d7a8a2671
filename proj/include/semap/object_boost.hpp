#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "semap/catalog.hpp"
#include "semap/prob.hpp"

namespace semap {

struct ObjectCatalog {
  std::vector<std::string> names;

  explicit ObjectCatalog(std::vector<std::string> n) : names(std::move(n)) {
    if (names.empty()) throw std::invalid_argument("object catalog: empty");
    for (std::size_t i = 0; i < names.size(); ++i)
      for (std::size_t j = i + 1; j < names.size(); ++j)
        if (names[i] == names[j])
          throw std::invalid_argument("object catalog: duplicate '" + names[i] +
                                      "'");
  }

  std::size_t size() const { return names.size(); }

  std::size_t index_of(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == name) return i;
    throw std::invalid_argument("object catalog: unknown '" + name + "'");
  }
};

/// p(object | place) with one column per place class. Every entry is floored
/// at a small positive default before per-column renormalization, so the
/// boost product can never vanish.
class ObjectPriorTable {
 public:
  ObjectPriorTable(std::size_t num_objects, std::size_t num_places,
                   double default_prior = 1e-4)
      : num_objects_(num_objects), num_places_(num_places),
        default_prior_(default_prior) {
    if (num_objects == 0 || num_places == 0)
      throw std::invalid_argument("prior table: empty dimension");
    if (!(default_prior > 0.0))
      throw std::invalid_argument("prior table: default prior must be > 0");
    columns_.assign(num_places, Vec(num_objects, 0.0));
    finalize_columns();
  }

  /// Builds the table from (object, place, count) triples. Absent pairs get
  /// the default prior.
  static ObjectPriorTable from_counts(
      const std::vector<std::tuple<std::string, std::string, double>>& triples,
      const ObjectCatalog& objects, const ClassCatalog& places,
      double default_prior = 1e-4) {
    ObjectPriorTable table(objects.size(), places.size(), default_prior);
    table.columns_.assign(places.size(), Vec(objects.size(), 0.0));
    std::string bad;
    for (const auto& [obj, place, count] : triples) {
      bool obj_ok = std::find(objects.names.begin(), objects.names.end(),
                              obj) != objects.names.end();
      bool place_ok = places.has(place);
      if (!obj_ok) bad += " object:'" + obj + "'";
      if (!place_ok) bad += " place:'" + place + "'";
      if (!obj_ok || !place_ok) continue;
      if (count < 0.0)
        throw std::invalid_argument("prior table: negative count for " + obj);
      table.columns_[places.index_of(place)][objects.index_of(obj)] += count;
    }
    if (!bad.empty())
      throw std::invalid_argument("prior table: unknown labels:" + bad);
    table.finalize_columns();
    return table;
  }

  const Vec& column(std::size_t place) const {
    if (place >= num_places_)
      throw std::out_of_range("prior table: place index out of range");
    return columns_[place];
  }

  std::size_t object_count() const { return num_objects_; }
  std::size_t place_count() const { return num_places_; }

 private:
  // Counts -> probabilities, floored at the default prior, renormalized.
  void finalize_columns() {
    for (Vec& col : columns_) {
      double s = sum(col);
      for (double& v : col) {
        if (s > 0.0) v /= s;
        if (v < default_prior_) v = default_prior_;
      }
      normalize(col, "prior table column");
    }
  }

  std::size_t num_objects_;
  std::size_t num_places_;
  double default_prior_;
  std::vector<Vec> columns_;
};

/// Re-ranks an object likelihood by the place-conditioned prior: elementwise
/// product with the place's column, renormalized.
inline Vec boost(const Vec& likelihood, const ObjectPriorTable& table,
                 std::size_t place) {
  if (likelihood.size() != table.object_count())
    throw std::invalid_argument("boost: likelihood length != object count");
  const Vec& col = table.column(place);
  Vec out(likelihood.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!(likelihood[i] >= 0.0) || !std::isfinite(likelihood[i]))
      throw std::invalid_argument("boost: invalid likelihood entry");
    out[i] = likelihood[i] * col[i];
  }
  normalize(out, "boosted posterior");
  return out;
}

/// Top-k object hypotheses by descending probability, ties to lower index.
inline std::vector<std::pair<std::size_t, double>> top_k(const Vec& posterior,
                                                         std::size_t k) {
  if (k < 1 || k > posterior.size())
    throw std::invalid_argument("top_k: k out of range");
  std::vector<std::size_t> order(posterior.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return posterior[a] > posterior[b];
  });
  std::vector<std::pair<std::size_t, double>> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.emplace_back(order[i], posterior[order[i]]);
  return out;
}

}  // namespace semap
