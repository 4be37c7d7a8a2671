#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include "semap/catalog.hpp"
#include "semap/prob.hpp"

namespace semap {

enum class PriorMode { kAtInitOnly, kEveryStep };

struct FilterConfig {
  // 0 keeps the pure recursive product; >0 mixes the belief toward the prior
  // before each update so the filter can leave a long-established label.
  double forgetting_factor = 0.0;
  double epsilon_floor = 1e-12;
  PriorMode prior_mode = PriorMode::kEveryStep;

  void validate() const {
    if (!(forgetting_factor >= 0.0 && forgetting_factor <= 1.0))
      throw std::invalid_argument("filter: forgetting_factor outside [0,1]");
    if (!(epsilon_floor > 0.0 && epsilon_floor <= 1e-6))
      throw std::invalid_argument("filter: epsilon_floor outside (0, 1e-6]");
  }
};

/// Recursive Bayes filter over place labels. One state per stream; updates
/// are strictly sequential.
class PlaceFilter {
 public:
  PlaceFilter(const ClassCatalog& catalog, Vec prior, FilterConfig config = {})
      : config_(config) {
    config_.validate();
    if (prior.size() != catalog.size())
      throw std::invalid_argument("filter: prior length " +
                                  std::to_string(prior.size()) +
                                  " != catalog size " +
                                  std::to_string(catalog.size()));
    prior_ = make_distribution(std::move(prior), "filter prior");
    belief_ = prior_;
    step_count_ = 0;
  }

  /// One filter step: belief ∝ likelihood ⊙ belief (⊙ prior in every-step
  /// mode), renormalized, floored, with zero-prior labels pinned at 0.
  /// Throws without touching the state when the evidence is inconsistent.
  const Vec& update(const Vec& likelihood,
                    const std::string& frame_id = std::string()) {
    if (likelihood.size() != belief_.size())
      throw std::invalid_argument("filter update: likelihood length mismatch" +
                                  (frame_id.empty() ? "" : " at " + frame_id));
    for (double v : likelihood)
      if (!(v >= 0.0) || !std::isfinite(v))
        throw std::invalid_argument("filter update: invalid likelihood entry" +
                                    (frame_id.empty() ? "" : " at " + frame_id));

    const double lambda = config_.forgetting_factor;
    Vec next(belief_.size());
    double s = 0.0;
    for (std::size_t i = 0; i < next.size(); ++i) {
      double b = belief_[i];
      if (lambda > 0.0) b = (1.0 - lambda) * b + lambda * prior_[i];
      double v = likelihood[i] * b;
      if (config_.prior_mode == PriorMode::kEveryStep) v *= prior_[i];
      next[i] = v;
      s += v;
    }
    if (s <= 0.0)
      throw std::runtime_error("filter update: inconsistent evidence (posterior "
                               "vanished)" +
                               (frame_id.empty() ? "" : " at frame " + frame_id));
    for (double& v : next) v /= s;

    // Floor non-masked entries so a label can never go numerically extinct.
    bool floored = false;
    for (std::size_t i = 0; i < next.size(); ++i) {
      if (prior_[i] == 0.0) {
        next[i] = 0.0;
      } else if (next[i] < config_.epsilon_floor) {
        next[i] = config_.epsilon_floor;
        floored = true;
      }
    }
    if (floored) normalize(next, "filter posterior");

    belief_ = std::move(next);
    ++step_count_;
    return belief_;
  }

  /// MAP label: argmax of the posterior, ties to the lowest index.
  std::pair<std::size_t, double> map_label() const {
    std::size_t i = argmax_lowest_tie(belief_);
    return {i, belief_[i]};
  }

  const Vec& belief() const { return belief_; }
  const Vec& prior() const { return prior_; }
  std::size_t step_count() const { return step_count_; }
  const FilterConfig& config() const { return config_; }

 private:
  FilterConfig config_;
  Vec prior_;
  Vec belief_;
  std::size_t step_count_ = 0;
};

/// ML label of a raw per-frame likelihood (for MAP-vs-ML comparisons).
inline std::size_t ml_label(const Vec& likelihood) {
  if (likelihood.empty()) throw std::invalid_argument("ml_label: empty vector");
  return argmax_lowest_tie(likelihood);
}

}  // namespace semap
