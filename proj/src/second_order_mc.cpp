#include "simplex/second_order_mc.hpp"

#include <cmath>
#include <vector>

#include "simplex/second_order.hpp"

namespace simplex {

McUncertainty mc_uncertainty(const LogitGaussiand& g, McActivation act, const McConfig& cfg) {
  validate(g);
  cfg.validate();
  const auto c = g.classes();
  const auto n = cfg.effective_samples(c);
  LogitSampler sampler(g, cfg.seed);
  std::vector<double> buffer(static_cast<std::size_t>(c));
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(c);
  double expected_entropy = 0.0;
  for (std::uint64_t s = 1; s <= n; ++s) {
    sampler.next(buffer);
    normalised_activation(act, buffer, buffer);
    double h = 0.0;
    for (const double p : buffer) {
      if (p > 0.0) {
        h -= p * std::log(p);
      }
    }
    const double inv = 1.0 / static_cast<double>(s);
    expected_entropy += (h - expected_entropy) * inv;
    for (Eigen::Index i = 0; i < c; ++i) {
      mean(i) += (buffer[static_cast<std::size_t>(i)] - mean(i)) * inv;
    }
  }
  McUncertainty out;
  out.predictive = SimplexVectord(std::move(mean));
  out.expected_entropy = expected_entropy;
  out.mutual_information = predictive_entropy(out.predictive) - expected_entropy;
  out.samples = n;
  return out;
}

double mc_expected_entropy(const LogitGaussiand& g, McActivation act, std::uint64_t samples, std::uint64_t seed) {
  return mc_uncertainty(g, act, McConfig{samples, seed, std::nullopt}).expected_entropy;
}

double mc_mutual_information(const LogitGaussiand& g, McActivation act, std::uint64_t samples, std::uint64_t seed) {
  return mc_uncertainty(g, act, McConfig{samples, seed, std::nullopt}).mutual_information;
}

}  // namespace simplex
