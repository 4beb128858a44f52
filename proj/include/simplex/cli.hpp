#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "simplex/gaussian_model.hpp"
#include "simplex/metrics.hpp"

namespace simplex::cli {

/// Exit codes of the `simplex` executable.
enum ExitCode : int { kOk = 0, kBadInput = 1, kNumerical = 2 };

/// Parses {"C": int, "items": [{"mean": [...], "var": [...], "cov": [[...], ...]?}, ...]}.
/// Errors are ValidationError with a message naming the item and field.
std::vector<LogitGaussiand> parse_gaussian_batch(const std::string& text);

/// Parses {"predictions": [{"probs": [...], "label": k, "ood": 0|1?, "score": r?}, ...]}.
struct EvalRecord {
  LabeledPredictiond prediction;
  /// -1 when absent.
  int ood = -1;
  /// Uncertainty score for AUROC; NaN when absent (1 - max probability is used).
  double score = 0.0;
};

std::vector<EvalRecord> parse_eval_file(const std::string& text);

/// Entry point shared by the executable and the tests. Never throws.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace simplex::cli
