#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "simplex/errors.hpp"
#include "simplex/gaussian_model.hpp"

namespace simplex {

inline constexpr double kLogClamp = 1e-12;

template <typename Scalar>
struct LabeledPrediction {
  SimplexVector<Scalar> probs;
  Eigen::Index label = 0;
};

using LabeledPredictiond = LabeledPrediction<double>;

/// argmax with the lowest index winning ties.
template <typename Scalar>
Eigen::Index argmax(const SimplexVector<Scalar>& p) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < p.size(); ++i) {
    if (p(i) > p(best)) {
      best = i;
    }
  }
  return best;
}

/// KL(p || q) = sum p_c (log p_c - log q_c), 0 log 0 = 0.
template <typename Scalar>
Scalar kl_simplex(const SimplexVector<Scalar>& p, const SimplexVector<Scalar>& q) {
  using std::log;
  if (p.size() != q.size()) {
    throw ValidationError(ValidationError::Kind::DimensionMismatch, "kl_simplex: vectors differ in length");
  }
  Scalar kl = 0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p(i) == Scalar(0)) {
      continue;
    }
    if (!(q(i) > Scalar(0))) {
      throw ValidationError(ValidationError::Kind::InvalidArgument,
                            "kl_simplex: q[" + std::to_string(i) + "] = 0 where p > 0");
    }
    kl += p(i) * (log(p(i)) - log(q(i)));
  }
  // Rounding can leave a tiny negative value when p == q up to ulps.
  return std::max(kl, Scalar(0));
}

template <typename Scalar>
void check_labels(const std::vector<LabeledPrediction<Scalar>>& preds) {
  for (const auto& pr : preds) {
    if (pr.label < 0 || pr.label >= pr.probs.size()) {
      throw ValidationError(ValidationError::Kind::InvalidLabel,
                            "label " + std::to_string(pr.label) + " out of range for C = " +
                                std::to_string(pr.probs.size()));
    }
  }
}

/// Expected calibration error with confidence = max probability and bins ((m-1)/M, m/M].
template <typename Scalar>
Scalar ece(const std::vector<LabeledPrediction<Scalar>>& preds, int bins = 15) {
  using std::abs;
  using std::ceil;
  if (preds.empty()) {
    throw ValidationError(ValidationError::Kind::InvalidArgument, "ece: empty prediction list");
  }
  if (bins < 1) {
    throw ValidationError(ValidationError::Kind::InvalidArgument, "ece: need at least one bin");
  }
  check_labels(preds);
  std::vector<Scalar> conf_sum(static_cast<std::size_t>(bins), Scalar(0));
  std::vector<Scalar> correct(static_cast<std::size_t>(bins), Scalar(0));
  std::vector<std::size_t> count(static_cast<std::size_t>(bins), 0);
  for (const auto& pr : preds) {
    const Scalar conf = pr.probs.probs().maxCoeff();
    // Bin m holds ((m-1)/M, m/M]; confidence 0 joins the first bin.
    auto m = static_cast<int>(ceil(conf * Scalar(bins))) - 1;
    m = std::clamp(m, 0, bins - 1);
    conf_sum[static_cast<std::size_t>(m)] += conf;
    correct[static_cast<std::size_t>(m)] += argmax(pr.probs) == pr.label ? Scalar(1) : Scalar(0);
    ++count[static_cast<std::size_t>(m)];
  }
  Scalar total = 0;
  for (std::size_t m = 0; m < count.size(); ++m) {
    if (count[m] == 0) {
      continue;
    }
    const Scalar n = Scalar(count[m]);
    total += n * abs(correct[m] / n - conf_sum[m] / n);
  }
  return total / Scalar(preds.size());
}

/// AUROC as the Mann-Whitney statistic P(s+ > s-) + P(s+ = s-)/2, computed
/// exactly from midranks. Positives are labels equal to 1.
template <typename Scalar>
Scalar auroc(const std::vector<Scalar>& scores, const std::vector<int>& labels) {
  if (scores.size() != labels.size()) {
    throw ValidationError(ValidationError::Kind::DimensionMismatch, "auroc: scores and labels differ in length");
  }
  std::size_t positives = 0;
  for (const int l : labels) {
    if (l != 0 && l != 1) {
      throw ValidationError(ValidationError::Kind::InvalidLabel, "auroc: labels must be 0 or 1");
    }
    positives += static_cast<std::size_t>(l);
  }
  const std::size_t negatives = labels.size() - positives;
  if (positives == 0 || negatives == 0) {
    throw ValidationError(ValidationError::Kind::InvalidLabel, "auroc: need at least one positive and one negative");
  }
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Sum of positive ranks, using twice the midrank to stay in integers.
  std::size_t twice_rank_sum = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      ++j;
    }
    const std::size_t twice_midrank = i + 1 + j;  // (i+1) + j are the first and last 1-based ranks
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]] == 1) {
        twice_rank_sum += twice_midrank;
      }
    }
    i = j;
  }
  // U = R+ - n+(n+ + 1)/2, doubled.
  const double twice_u = double(twice_rank_sum) - double(positives) * double(positives + 1);
  return Scalar(twice_u / (2.0 * double(positives) * double(negatives)));
}

/// Mean log probability assigned to the true class, probabilities clamped at 1e-12.
template <typename Scalar>
Scalar log_prob_score(const std::vector<LabeledPrediction<Scalar>>& preds) {
  using std::log;
  if (preds.empty()) {
    throw ValidationError(ValidationError::Kind::InvalidArgument, "log_prob_score: empty prediction list");
  }
  check_labels(preds);
  Scalar total = 0;
  for (const auto& pr : preds) {
    total += log(std::max(pr.probs(pr.label), Scalar(kLogClamp)));
  }
  return total / Scalar(preds.size());
}

/// l log c + (1 - l) log(1 - c) with c clamped to [1e-12, 1 - 1e-12].
template <typename Scalar>
Scalar binary_log_prob(Scalar confidence, bool correct) {
  using std::log;
  const Scalar c = std::clamp(confidence, Scalar(kLogClamp), Scalar(1) - Scalar(kLogClamp));
  return correct ? log(c) : log(Scalar(1) - c);
}

/// Mean binary log score for correctness prediction, confidence = max probability.
template <typename Scalar>
Scalar binary_log_prob_score(const std::vector<LabeledPrediction<Scalar>>& preds) {
  if (preds.empty()) {
    throw ValidationError(ValidationError::Kind::InvalidArgument, "binary_log_prob_score: empty prediction list");
  }
  check_labels(preds);
  Scalar total = 0;
  for (const auto& pr : preds) {
    total += binary_log_prob(pr.probs.probs().maxCoeff(), argmax(pr.probs) == pr.label);
  }
  return total / Scalar(preds.size());
}

template <typename Scalar>
Scalar accuracy(const std::vector<LabeledPrediction<Scalar>>& preds) {
  if (preds.empty()) {
    throw ValidationError(ValidationError::Kind::InvalidArgument, "accuracy: empty prediction list");
  }
  check_labels(preds);
  std::size_t hits = 0;
  for (const auto& pr : preds) {
    hits += argmax(pr.probs) == pr.label ? 1 : 0;
  }
  return Scalar(hits) / Scalar(preds.size());
}

}  // namespace simplex
