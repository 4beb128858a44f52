#pragma once

#include <cstdint>

#include "simplex/gaussian_model.hpp"
#include "simplex/monte_carlo.hpp"

namespace simplex {

/// Sample-based uncertainty decomposition over draws P_s = normalise(act(y_s)).
struct McUncertainty {
  SimplexVectord predictive;
  /// Mean of H(P_s).
  double expected_entropy = 0.0;
  /// H(mean P_s) - expected_entropy.
  double mutual_information = 0.0;
  std::uint64_t samples = 0;
};

McUncertainty mc_uncertainty(const LogitGaussiand& g, McActivation act, const McConfig& cfg);

double mc_expected_entropy(const LogitGaussiand& g, McActivation act, std::uint64_t samples, std::uint64_t seed);

double mc_mutual_information(const LogitGaussiand& g, McActivation act, std::uint64_t samples, std::uint64_t seed);

}  // namespace simplex
