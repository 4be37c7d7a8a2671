#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "semap/prob.hpp"

namespace semap {

// Clip applied to one-vs-all scores before fusion so renormalization never
// divides by zero or saturates.
constexpr double kScoreClip = 1e-6;

struct TrainingSet {
  std::vector<Vec> positives;
  std::vector<Vec> negatives;

  std::size_t dimension() const {
    return positives.empty() ? 0 : positives.front().size();
  }
};

struct TrainConfig {
  double learning_rate = 0.1;
  double l2_weight = 1e-3;
  int iterations = 500;
  std::uint64_t seed = 0;  // kept for scorer-contract symmetry; GD from zero
                           // init needs no randomness
};

/// Binary logistic scorer for one expansion label. Immutable after training;
/// score() is reentrant.
struct OneVsAllModel {
  std::size_t target_label = 0;
  Vec weights;
  double bias = 0.0;
  std::size_t n_positive = 0;
  std::size_t n_negative = 0;

  double score(std::span<const double> f) const {
    if (f.size() != weights.size())
      throw std::invalid_argument("score: feature dimension " +
                                  std::to_string(f.size()) + " != model " +
                                  std::to_string(weights.size()));
    double z = bias;
    for (std::size_t i = 0; i < weights.size(); ++i) z += weights[i] * f[i];
    double p = logistic(z);
    return clamp(p, 1e-12, 1.0 - 1e-12);
  }
};

namespace detail {

inline void check_training_set(const TrainingSet& set) {
  if (set.positives.empty())
    throw std::invalid_argument("train_one_vs_all: no positive examples");
  if (set.negatives.empty())
    throw std::invalid_argument("train_one_vs_all: no negative examples");
  std::size_t d = set.positives.front().size();
  if (d == 0) throw std::invalid_argument("train_one_vs_all: zero-dim features");
  auto check = [d](const std::vector<Vec>& rows, const char* tag) {
    for (const Vec& r : rows) {
      if (r.size() != d)
        throw std::invalid_argument(std::string("train_one_vs_all: inconsistent ") +
                                    tag + " dimension");
      if (!all_finite(r))
        throw std::invalid_argument(std::string("train_one_vs_all: non-finite ") +
                                    tag + " feature");
    }
  };
  check(set.positives, "positive");
  check(set.negatives, "negative");
}

}  // namespace detail

/// Trains a regularized logistic one-vs-all scorer by batch gradient descent.
/// Class imbalance is handled with inverse-frequency example weights.
/// Deterministic: zero init, fixed iteration count.
inline OneVsAllModel train_one_vs_all(const TrainingSet& set,
                                      std::size_t target,
                                      const TrainConfig& config = {}) {
  detail::check_training_set(set);
  const std::size_t d = set.positives.front().size();
  const std::size_t n_pos = set.positives.size();
  const std::size_t n_neg = set.negatives.size();
  const std::size_t n = n_pos + n_neg;

  const double w_pos = static_cast<double>(n) / (2.0 * static_cast<double>(n_pos));
  const double w_neg = static_cast<double>(n) / (2.0 * static_cast<double>(n_neg));
  const double w_total = w_pos * static_cast<double>(n_pos) +
                         w_neg * static_cast<double>(n_neg);

  // Pack the rows into one contiguous single-precision matrix: with tens of
  // thousands of high-dimensional rows the 500 full passes below are memory
  // bound, and halving the bytes per row halves the wall time. Weights,
  // gradients, and sums stay in double.
  std::vector<float> data(n * d);
  {
    float* out = data.data();
    for (const Vec& row : set.positives)
      for (double v : row) *out++ = static_cast<float>(v);
    for (const Vec& row : set.negatives)
      for (double v : row) *out++ = static_cast<float>(v);
  }

  Vec w(d, 0.0);
  double b = 0.0;
  Vec grad(d, 0.0);

  auto accumulate = [&](std::size_t i, double y, double ew, double& grad_b) {
    const float* __restrict row = data.data() + i * d;
    const double* __restrict wp = w.data();
    double* __restrict gp = grad.data();
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    std::size_t j = 0;
    for (; j + 4 <= d; j += 4) {
      s0 += wp[j] * row[j];
      s1 += wp[j + 1] * row[j + 1];
      s2 += wp[j + 2] * row[j + 2];
      s3 += wp[j + 3] * row[j + 3];
    }
    for (; j < d; ++j) s0 += wp[j] * row[j];
    const double z = b + ((s0 + s1) + (s2 + s3));
    const double r = ew * (logistic(z) - y);
    for (std::size_t k = 0; k < d; ++k) gp[k] += r * row[k];
    grad_b += r;
  };

  for (int it = 0; it < config.iterations; ++it) {
    std::fill(grad.begin(), grad.end(), 0.0);
    double grad_b = 0.0;
    for (std::size_t i = 0; i < n_pos; ++i) accumulate(i, 1.0, w_pos, grad_b);
    for (std::size_t i = n_pos; i < n; ++i) accumulate(i, 0.0, w_neg, grad_b);
    const double inv = 1.0 / w_total;
    for (std::size_t j = 0; j < d; ++j)
      w[j] -= config.learning_rate * (grad[j] * inv + config.l2_weight * w[j]);
    b -= config.learning_rate * grad_b * inv;
  }

  OneVsAllModel model;
  model.target_label = target;
  model.weights = std::move(w);
  model.bias = b;
  model.n_positive = n_pos;
  model.n_negative = n_neg;
  return model;
}

/// Mean log-loss of a model on a training set (weighted like training).
inline double mean_log_loss(const OneVsAllModel& model, const TrainingSet& set) {
  double loss = 0.0;
  std::size_t n = set.positives.size() + set.negatives.size();
  for (const Vec& r : set.positives) loss -= std::log(model.score(r));
  for (const Vec& r : set.negatives) loss -= std::log(1.0 - model.score(r));
  return loss / static_cast<double>(n);
}

/// Fuses the base-class likelihood with the one-vs-all scores into one
/// normalized likelihood over the combined catalog: concatenate base first,
/// expansion scores after, divide by the sum.
inline Vec combine_likelihood(std::span<const double> base,
                              std::span<const double> ova_scores) {
  if (base.empty())
    throw std::invalid_argument("combine_likelihood: empty base likelihood");
  Vec out;
  out.reserve(base.size() + ova_scores.size());
  for (double v : base) {
    if (!(v >= 0.0) || !std::isfinite(v))
      throw std::invalid_argument("combine_likelihood: invalid base entry");
    out.push_back(v);
  }
  for (double s : ova_scores) {
    if (!std::isfinite(s) || s < 0.0)
      throw std::invalid_argument("combine_likelihood: invalid score");
    out.push_back(clamp(s, kScoreClip, 1.0 - kScoreClip));
  }
  double s = sum(out);
  if (s <= 0.0)
    throw std::invalid_argument("combine_likelihood: degenerate likelihood");
  for (double& v : out) v /= s;
  return out;
}

}  // namespace semap
