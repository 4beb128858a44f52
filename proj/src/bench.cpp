#include "simplex/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "simplex/metrics.hpp"
#include "simplex/parallel.hpp"
#include "simplex/predictives.hpp"
#include "simplex/specfun.hpp"

namespace simplex::bench {
namespace {

using Kind = ValidationError::Kind;

// Stream tags for derive_seed; changing them changes every benchmark number.
enum StreamTag : std::uint64_t {
  kDatasetStream = 1,
  kTruthStream = 2,
  kBudgetStream = 3,
  kGridStream = 10,
  kTrialParamStream = 11,
  kTrialTruthStream = 12,
  kCalibrationParamStream = 13,
  kCalibrationTruthStream = 14,
};

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t activation_code(McActivation act) { return static_cast<std::uint64_t>(act); }

void check_range(const ActivationRange& r, const char* name) {
  if (!(r.mu_lo <= r.mu_hi) || !(r.sigma_lo <= r.sigma_hi) || r.sigma_lo < 0.0) {
    throw ValidationError(Kind::InvalidArgument, std::string("bench: bad ") + name + " range");
  }
}

double uniform_in(NormalSampler& gen, double lo, double hi) { return lo + (hi - lo) * gen.uniform(); }

LogitGaussiand draw_dataset(const SyntheticConfig& cfg, McActivation act, int classes, int dataset) {
  const auto& r = cfg.range(act);
  NormalSampler gen(derive_seed(cfg.master_seed, {kDatasetStream, activation_code(act),
                                                  static_cast<std::uint64_t>(classes),
                                                  static_cast<std::uint64_t>(dataset)}));
  LogitGaussiand g;
  g.mean.resize(classes);
  g.var_diag.resize(classes);
  for (int c = 0; c < classes; ++c) {
    g.mean(c) = uniform_in(gen, r.mu_lo, r.mu_hi);
    if (cfg.uniform_variance) {
      g.var_diag(c) = uniform_in(gen, r.sigma_lo * r.sigma_lo, r.sigma_hi * r.sigma_hi);
    } else {
      const double sigma = uniform_in(gen, r.sigma_lo, r.sigma_hi);
      g.var_diag(c) = sigma * sigma;
    }
  }
  return g;
}

SimplexVectord approximate(const std::string& method, const LogitGaussiand& g, McActivation act,
                           const SyntheticConfig& cfg, int classes, int dataset) {
  if (method == "closed_form_sigmoid") {
    return closed_form_predictive(g, ActivationKind::Sigmoid);
  }
  if (method == "closed_form_normcdf") {
    return closed_form_predictive(g, ActivationKind::NormCdf);
  }
  if (method == "mean_field") {
    return mean_field_softmax_predictive(g);
  }
  if (method == "laplace_bridge") {
    return laplace_bridge_predictive(g).predictive;
  }
  if (method == "shekhovtsov_flach") {
    return shekhovtsov_flach_predictive(g);
  }
  McConfig mc;
  mc.budget = cfg.budget;
  mc.seed = derive_seed(cfg.master_seed, {kBudgetStream, activation_code(act), static_cast<std::uint64_t>(classes),
                                          static_cast<std::uint64_t>(dataset)});
  return mc_predictive_run(g, act, mc).predictive;
}

}  // namespace

std::string to_string(McActivation act) {
  switch (act) {
    case McActivation::Softmax:
      return "softmax";
    case McActivation::NormCdf:
      return "normcdf";
    case McActivation::Sigmoid:
      return "sigmoid";
  }
  return "unknown";
}

std::string to_string(BoundStatus status) {
  switch (status) {
    case BoundStatus::Satisfied:
      return "satisfied";
    case BoundStatus::Violated:
      return "violated";
    case BoundStatus::Inapplicable:
      return "inapplicable";
  }
  return "unknown";
}

void SyntheticConfig::validate() const {
  if (class_counts.empty()) {
    throw ValidationError(Kind::InvalidArgument, "bench: no class counts");
  }
  for (const int c : class_counts) {
    if (c < 2) {
      throw ValidationError(Kind::InvalidArgument, "bench: class counts must be >= 2");
    }
  }
  if (datasets_per_c < 1 || truth_samples < 1 || budget < 1 || high_truth_samples < 1 ||
      high_truth_class_budget < 1) {
    throw ValidationError(Kind::InvalidArgument, "bench: counts must be positive");
  }
  if (activations.empty()) {
    throw ValidationError(Kind::InvalidArgument, "bench: no activations selected");
  }
  check_range(sigmoid, "sigmoid");
  check_range(softmax, "softmax");
  check_range(normcdf, "normcdf");
}

std::uint64_t SyntheticConfig::truth_samples_for(int classes) const {
  if (!high_truth) {
    return truth_samples;
  }
  const auto c = static_cast<std::uint64_t>(classes);
  const std::uint64_t capped = std::min(high_truth_samples, (high_truth_class_budget + c - 1) / c);
  return std::max(truth_samples, capped);
}

const ActivationRange& SyntheticConfig::range(McActivation act) const {
  switch (act) {
    case McActivation::Softmax:
      return softmax;
    case McActivation::NormCdf:
      return normcdf;
    case McActivation::Sigmoid:
      return sigmoid;
  }
  return sigmoid;
}

const BenchRow* BenchReport::find(const std::string& method, int classes) const {
  for (const auto& row : rows) {
    if (row.method == method && row.classes == classes) {
      return &row;
    }
  }
  return nullptr;
}

std::vector<std::string> methods_for(McActivation act, bool mc_only) {
  std::vector<std::string> methods;
  switch (act) {
    case McActivation::Sigmoid:
      if (!mc_only) {
        methods.emplace_back("closed_form_sigmoid");
      }
      methods.emplace_back("mc_sigmoid");
      break;
    case McActivation::NormCdf:
      if (!mc_only) {
        methods.emplace_back("closed_form_normcdf");
      }
      methods.emplace_back("mc_normcdf");
      break;
    case McActivation::Softmax:
      if (!mc_only) {
        methods.emplace_back("mean_field");
        methods.emplace_back("laplace_bridge");
        methods.emplace_back("shekhovtsov_flach");
      }
      methods.emplace_back("mc_softmax");
      break;
  }
  return methods;
}

BenchReport run_fig1(const SyntheticConfig& cfg) {
  cfg.validate();
  BenchReport report;
  const auto datasets = static_cast<std::size_t>(cfg.datasets_per_c);
  for (const auto act : cfg.activations) {
    const auto methods = methods_for(act, cfg.mc_only);
    for (const int classes : cfg.class_counts) {
      // kls[m][d]; NaN marks an excluded dataset.
      std::vector<std::vector<double>> kls(methods.size(), std::vector<double>(datasets, kNaN));
      parallel_for(datasets, cfg.threads, [&](std::size_t d) {
        const auto g = draw_dataset(cfg, act, classes, static_cast<int>(d));
        McConfig truth_cfg;
        truth_cfg.samples = cfg.truth_samples_for(classes);
        truth_cfg.seed = derive_seed(cfg.master_seed, {kTruthStream, activation_code(act),
                                                       static_cast<std::uint64_t>(classes), d});
        const auto truth = mc_predictive_run(g, act, truth_cfg).predictive;
        for (std::size_t m = 0; m < methods.size(); ++m) {
          try {
            const auto approx = approximate(methods[m], g, act, cfg, classes, static_cast<int>(d));
            kls[m][d] = cfg.direction == KlDirection::TrueVsApprox ? kl_simplex(truth, approx)
                                                                    : kl_simplex(approx, truth);
          } catch (const NumericalError&) {
            // Counted as excluded (e.g. Laplace bridge with a non-positive or infinite gamma).
          }
        }
      });
      for (std::size_t m = 0; m < methods.size(); ++m) {
        BenchRow row;
        row.method = methods[m];
        row.activation = act;
        row.classes = classes;
        double sum = 0.0;
        for (const double v : kls[m]) {
          if (std::isnan(v)) {
            ++row.n_excluded;
          } else {
            sum += v;
            ++row.n_evaluated;
          }
        }
        if (row.n_evaluated == 0) {
          row.mean_kl = kNaN;
          row.std_kl = kNaN;
        } else {
          row.mean_kl = sum / static_cast<double>(row.n_evaluated);
          double ss = 0.0;
          for (const double v : kls[m]) {
            if (!std::isnan(v)) {
              ss += (v - row.mean_kl) * (v - row.mean_kl);
            }
          }
          row.std_kl = row.n_evaluated > 1 ? std::sqrt(ss / static_cast<double>(row.n_evaluated - 1)) : 0.0;
        }
        report.rows.push_back(std::move(row));
      }
    }
  }
  return report;
}

std::pair<double, double> loglog_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw ValidationError(Kind::InvalidArgument, "loglog_fit: need matching vectors with >= 2 points");
  }
  const auto n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return {slope, (sy - slope * sx) / n};
}

McScalingReport run_mc_scaling(const SyntheticConfig& cfg) {
  const std::set<int> distinct(cfg.class_counts.begin(), cfg.class_counts.end());
  if (distinct.size() < 3) {
    throw ValidationError(Kind::InvalidArgument, "mc scaling: need at least three distinct class counts");
  }
  if (*distinct.rbegin() < 10 * *distinct.begin()) {
    throw ValidationError(Kind::InvalidArgument, "mc scaling: class counts must span at least one decade");
  }
  SyntheticConfig run = cfg;
  run.class_counts.assign(distinct.begin(), distinct.end());
  run.mc_only = true;

  McScalingReport out;
  out.table = run_fig1(run);
  for (const auto act : run.activations) {
    const auto method = methods_for(act, true).front();
    std::vector<double> xs;
    std::vector<double> ys;
    bool degenerate = false;
    for (const int c : run.class_counts) {
      const auto* row = out.table.find(method, c);
      if (row == nullptr || !(row->mean_kl > 0.0)) {
        degenerate = true;
        continue;
      }
      xs.push_back(c);
      ys.push_back(row->mean_kl);
    }
    ScalingFit fit;
    fit.activation = act;
    fit.method = method;
    fit.degenerate = degenerate;
    if (degenerate) {
      fit.slope = kNaN;
      fit.intercept = kNaN;
    } else {
      std::tie(fit.slope, fit.intercept) = loglog_fit(xs, ys);
    }
    out.fits.push_back(fit);
  }
  return out;
}

void TheoremCheckConfig::validate() const {
  if (!(box.mu_lo <= box.mu_hi) || !(box.var_lo <= box.var_hi) || box.var_lo < 0.0) {
    throw ValidationError(Kind::InvalidArgument, "theorem check: box must be ordered with var >= 0");
  }
  if (classes < 2 || trials < 1 || calibration_trials < 1 || grid_mu < 1 || grid_var < 1 || q_samples < 1 ||
      truth_samples < 1) {
    throw ValidationError(Kind::InvalidArgument, "theorem check: counts must be positive and C >= 2");
  }
}

namespace {

/// MC estimate of q(mu, var) = E[sigmoid(Y)], running mean.
double sigmoid_mean_mc(double mu, double var, std::uint64_t samples, std::uint64_t seed) {
  NormalSampler normal(seed);
  const double sd = std::sqrt(var);
  double mean = 0.0;
  for (std::uint64_t s = 1; s <= samples; ++s) {
    const double q = sigmoid(mu + sd * normal());
    mean += (q - mean) / static_cast<double>(s);
  }
  return mean;
}

double grid_point(double lo, double hi, int i, int n) {
  return n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

TheoremTrial run_trial(const TheoremCheckConfig& cfg, std::uint64_t param_seed, std::uint64_t truth_seed) {
  NormalSampler gen(param_seed);
  LogitGaussiand g;
  g.mean.resize(cfg.classes);
  g.var_diag.resize(cfg.classes);
  for (int c = 0; c < cfg.classes; ++c) {
    g.mean(c) = uniform_in(gen, cfg.box.mu_lo, cfg.box.mu_hi);
    g.var_diag(c) = uniform_in(gen, cfg.box.var_lo, cfg.box.var_hi);
  }
  LogitSampler sampler(g, truth_seed);
  std::vector<double> q(static_cast<std::size_t>(cfg.classes));
  Eigen::VectorXd p = Eigen::VectorXd::Zero(cfg.classes);
  double sum_mean = 0.0;
  double sum_ss = 0.0;
  for (std::uint64_t s = 1; s <= cfg.truth_samples; ++s) {
    sampler.next(q);
    double total = 0.0;
    for (auto& v : q) {
      v = sigmoid(v);
      total += v;
    }
    const double inv = 1.0 / static_cast<double>(s);
    const double d = total - sum_mean;
    sum_mean += d * inv;
    sum_ss += d * (total - sum_mean);
    for (int c = 0; c < cfg.classes; ++c) {
      p(c) += (q[static_cast<std::size_t>(c)] / total - p(c)) * inv;
    }
  }
  TheoremTrial trial;
  trial.var_sum = cfg.truth_samples > 1 ? sum_ss / static_cast<double>(cfg.truth_samples - 1) : 0.0;
  trial.kl = kl_simplex(SimplexVectord(std::move(p)), closed_form_predictive(g, ActivationKind::Sigmoid));
  return trial;
}

}  // namespace

TheoremBoundReport run_theorem_check(const TheoremCheckConfig& cfg) {
  cfg.validate();
  TheoremBoundReport report;
  report.box = cfg.box;
  report.classes = cfg.classes;

  const auto points = static_cast<std::size_t>(cfg.grid_mu) * static_cast<std::size_t>(cfg.grid_var);
  std::vector<double> q(points);
  std::vector<double> q_hat(points);
  parallel_for(points, cfg.threads, [&](std::size_t k) {
    const int i = static_cast<int>(k) / cfg.grid_var;
    const int j = static_cast<int>(k) % cfg.grid_var;
    const double mu = grid_point(cfg.box.mu_lo, cfg.box.mu_hi, i, cfg.grid_mu);
    const double var = grid_point(cfg.box.var_lo, cfg.box.var_hi, j, cfg.grid_var);
    q[k] = sigmoid_mean_mc(mu, var, cfg.q_samples, derive_seed(cfg.seed, {kGridStream, k}));
    q_hat[k] = sigmoid_moments(mu, var).m1;
  });
  report.delta = -std::numeric_limits<double>::infinity();
  report.u = std::numeric_limits<double>::infinity();
  report.Delta = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < points; ++k) {
    report.delta = std::max(report.delta, q_hat[k] - q[k]);
    report.u = std::min(report.u, q[k]);
    report.Delta = std::max(report.Delta, (q[k] - q_hat[k]) / q[k]);
  }

  if (!(report.Delta < 1.0)) {
    report.M = std::numeric_limits<double>::infinity();
    report.status = BoundStatus::Inapplicable;
  } else {
    report.M = std::log((1.0 + report.delta / report.u) / (1.0 - report.Delta));
  }

  report.calibration.resize(static_cast<std::size_t>(cfg.calibration_trials));
  parallel_for(report.calibration.size(), cfg.threads, [&](std::size_t t) {
    report.calibration[t] = run_trial(cfg, derive_seed(cfg.seed, {kCalibrationParamStream, t}),
                                      derive_seed(cfg.seed, {kCalibrationTruthStream, t}));
  });
  report.trials.resize(static_cast<std::size_t>(cfg.trials));
  parallel_for(report.trials.size(), cfg.threads, [&](std::size_t t) {
    report.trials[t] =
        run_trial(cfg, derive_seed(cfg.seed, {kTrialParamStream, t}), derive_seed(cfg.seed, {kTrialTruthStream, t}));
  });

  if (report.status == BoundStatus::Inapplicable && !(report.Delta < 1.0)) {
    report.bound_satisfied = false;
    report.max_excess = kNaN;
    return report;
  }

  report.kappa = 0.0;
  for (const auto& t : report.calibration) {
    const double excess = t.kl - report.M - kBoundTolerance;
    if (excess <= 0.0) {
      continue;
    }
    report.kappa = t.var_sum > 0.0 ? std::max(report.kappa, excess / t.var_sum)
                                   : std::numeric_limits<double>::infinity();
  }
  report.max_excess = -std::numeric_limits<double>::infinity();
  report.bound_satisfied = true;
  for (const auto& t : report.trials) {
    const double slack = report.kappa == 0.0 ? 0.0 : report.kappa * t.var_sum;
    const double excess = t.kl - (report.M + slack);
    report.max_excess = std::max(report.max_excess, excess);
    if (excess > kBoundTolerance) {
      report.bound_satisfied = false;
    }
  }
  report.status = report.bound_satisfied ? BoundStatus::Satisfied : BoundStatus::Violated;
  return report;
}

std::string format_real(double v) {
  if (std::isnan(v)) {
    return "nan";
  }
  if (std::isinf(v)) {
    return v > 0 ? "inf" : "-inf";
  }
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string to_csv(const BenchReport& report) {
  std::ostringstream out;
  out << "method,C,mean_kl,std_kl,n_excluded\n";
  for (const auto& row : report.rows) {
    out << row.method << ',' << row.classes << ',' << format_real(row.mean_kl) << ',' << format_real(row.std_kl)
        << ',' << row.n_excluded << '\n';
  }
  return out.str();
}

std::string to_csv(const TheoremBoundReport& report) {
  std::ostringstream out;
  out << "set,trial,kl,var_sum\n";
  for (std::size_t t = 0; t < report.calibration.size(); ++t) {
    out << "calibration," << t << ',' << format_real(report.calibration[t].kl) << ','
        << format_real(report.calibration[t].var_sum) << '\n';
  }
  for (std::size_t t = 0; t < report.trials.size(); ++t) {
    out << "evaluation," << t << ',' << format_real(report.trials[t].kl) << ','
        << format_real(report.trials[t].var_sum) << '\n';
  }
  return out.str();
}

namespace {

nlohmann::json real(double v) {
  if (std::isfinite(v)) {
    return v;
  }
  return format_real(v);
}

nlohmann::json range_json(const ActivationRange& r) {
  return {{"mu_lo", r.mu_lo}, {"mu_hi", r.mu_hi}, {"sigma_lo", r.sigma_lo}, {"sigma_hi", r.sigma_hi}};
}

nlohmann::json config_json(const SyntheticConfig& cfg) {
  nlohmann::json acts = nlohmann::json::array();
  for (const auto a : cfg.activations) {
    acts.push_back(to_string(a));
  }
  return {
      {"class_counts", cfg.class_counts},
      {"datasets_per_c", cfg.datasets_per_c},
      {"truth_samples", cfg.truth_samples},
      {"budget", cfg.budget},
      {"master_seed", cfg.master_seed},
      {"ranges", {{"sigmoid", range_json(cfg.sigmoid)}, {"softmax", range_json(cfg.softmax)},
                  {"normcdf", range_json(cfg.normcdf)}}},
      {"uniform_variance", cfg.uniform_variance},
      {"high_truth", cfg.high_truth},
      {"high_truth_samples", cfg.high_truth_samples},
      {"high_truth_class_budget", cfg.high_truth_class_budget},
      {"kl_direction", cfg.direction == KlDirection::TrueVsApprox ? "true_vs_approx" : "approx_vs_true"},
      {"activations", acts},
      {"mc_only", cfg.mc_only},
      {"normal_generator", "mt19937_64 + ziggurat(128, R=3.442619855899)"},
      {"seed_derivation", "splitmix64 index path"},
  };
}

nlohmann::json rows_json(const BenchReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"method", r.method},
                    {"C", r.classes},
                    {"mean_kl", real(r.mean_kl)},
                    {"std_kl", real(r.std_kl)},
                    {"n_excluded", r.n_excluded},
                    {"n_evaluated", r.n_evaluated}});
  }
  return rows;
}

}  // namespace

std::string sidecar_json(const SyntheticConfig& cfg, const BenchReport& report) {
  nlohmann::json doc{{"format_version", report.format_version},
                     {"experiment", "fig1"},
                     {"config", config_json(cfg)},
                     {"rows", rows_json(report)}};
  return doc.dump(2) + "\n";
}

std::string sidecar_json(const SyntheticConfig& cfg, const McScalingReport& report) {
  nlohmann::json fits = nlohmann::json::array();
  for (const auto& f : report.fits) {
    fits.push_back({{"method", f.method},
                    {"slope", real(f.slope)},
                    {"intercept", real(f.intercept)},
                    {"degenerate", f.degenerate}});
  }
  nlohmann::json doc{{"format_version", report.table.format_version},
                     {"experiment", "mc-scaling"},
                     {"config", config_json(cfg)},
                     {"rows", rows_json(report.table)},
                     {"fits", fits}};
  return doc.dump(2) + "\n";
}

std::string sidecar_json(const TheoremCheckConfig& cfg, const TheoremBoundReport& report) {
  nlohmann::json doc{
      {"format_version", kFormatVersion},
      {"experiment", "theorem"},
      {"config",
       {{"box", {{"mu_lo", cfg.box.mu_lo}, {"mu_hi", cfg.box.mu_hi}, {"var_lo", cfg.box.var_lo},
                 {"var_hi", cfg.box.var_hi}}},
        {"classes", cfg.classes},
        {"trials", cfg.trials},
        {"calibration_trials", cfg.calibration_trials},
        {"seed", cfg.seed},
        {"grid_mu", cfg.grid_mu},
        {"grid_var", cfg.grid_var},
        {"q_samples", cfg.q_samples},
        {"truth_samples", cfg.truth_samples}}},
      {"delta", real(report.delta)},
      {"u", real(report.u)},
      {"Delta", real(report.Delta)},
      {"M", real(report.M)},
      {"kappa", real(report.kappa)},
      {"max_excess", real(report.max_excess)},
      {"status", to_string(report.status)},
      {"bound_satisfied", report.bound_satisfied},
  };
  return doc.dump(2) + "\n";
}

std::string summary(const BenchReport& report) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-22s %6s %14s %14s %9s\n", "method", "C", "mean_kl", "std_kl", "excluded");
  out << line;
  for (const auto& r : report.rows) {
    std::snprintf(line, sizeof(line), "%-22s %6d %14.6e %14.6e %9zu\n", r.method.c_str(), r.classes, r.mean_kl,
                  r.std_kl, r.n_excluded);
    out << line;
  }
  return out.str();
}

}  // namespace simplex::bench
