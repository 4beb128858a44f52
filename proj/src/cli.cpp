#include "simplex/cli.hpp"

#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "simplex/bench.hpp"
#include "simplex/monte_carlo.hpp"
#include "simplex/parallel.hpp"
#include "simplex/predictives.hpp"
#include "simplex/second_order.hpp"

namespace simplex::cli {
namespace {

using nlohmann::json;
using Kind = ValidationError::Kind;
using bench::format_real;

std::string item_prefix(std::size_t i) { return "item " + std::to_string(i) + ": "; }

/// Runs fn, prefixing any library error with the item index.
template <typename Fn>
auto for_item(std::size_t i, Fn&& fn) {
  try {
    return fn();
  } catch (const MatchingError& e) {
    throw MatchingError(item_prefix(i) + e.what(), e.class_index());
  } catch (const NumericalError& e) {
    throw NumericalError(item_prefix(i) + e.what(), e.class_index());
  } catch (const ValidationError& e) {
    throw ValidationError(e.kind(), item_prefix(i) + e.what());
  } catch (const DomainError& e) {
    throw DomainError(item_prefix(i) + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ValidationError(Kind::InvalidArgument, "cannot read " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file || !(file << text) || !file.flush()) {
    throw ValidationError(Kind::InvalidArgument, "cannot write " + path);
  }
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(Kind::InvalidArgument, std::string("malformed JSON: ") + e.what());
  }
}

Eigen::VectorXd real_vector(const json& node, const std::string& where, Eigen::Index expected) {
  if (!node.is_array()) {
    throw ValidationError(Kind::InvalidArgument, where + " must be an array of numbers");
  }
  if (expected >= 0 && static_cast<Eigen::Index>(node.size()) != expected) {
    throw ValidationError(Kind::DimensionMismatch,
                          where + " has " + std::to_string(node.size()) + " entries, expected " + std::to_string(expected));
  }
  Eigen::VectorXd v(static_cast<Eigen::Index>(node.size()));
  for (std::size_t c = 0; c < node.size(); ++c) {
    if (!node[c].is_number()) {
      throw ValidationError(Kind::InvalidArgument, where + "[" + std::to_string(c) + "] is not a number");
    }
    v(static_cast<Eigen::Index>(c)) = node[c].get<double>();
  }
  return v;
}

std::string vector_json(const Eigen::VectorXd& v) {
  std::string s = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    s += (i == 0 ? "" : ", ") + format_real(v(i));
  }
  return s + "]";
}

template <typename T, typename Fn>
std::vector<T> map_items(const std::vector<LogitGaussiand>& items, unsigned threads, Fn&& fn) {
  std::vector<std::optional<T>> slots(items.size());
  std::vector<std::exception_ptr> failures(items.size());
  parallel_for(items.size(), threads, [&](std::size_t i) {
    try {
      slots[i] = for_item(i, [&] { return fn(items[i], i); });
    } catch (...) {
      failures[i] = std::current_exception();
    }
  });
  // Report the lowest failing index regardless of the schedule.
  for (const auto& f : failures) {
    if (f) {
      std::rethrow_exception(f);
    }
  }
  std::vector<T> out;
  out.reserve(items.size());
  for (auto& s : slots) {
    out.push_back(std::move(*s));
  }
  return out;
}

const std::map<std::string, std::string> kPredictActivations{
    {"exp", "exp"},
    {"normcdf", "normcdf"},
    {"sigmoid", "sigmoid"},
    {"softmax-mf", "softmax-mf"},
    {"laplace-bridge", "laplace-bridge"},
    {"shekhovtsov", "shekhovtsov"},
    {"mc", "mc"},
};

const std::map<std::string, std::string> kDirichletActivations{
    {"exp", "exp"},
    {"normcdf", "normcdf"},
    {"sigmoid", "sigmoid"},
    {"laplace-bridge", "laplace-bridge"},
};

ActivationKind activation_kind(const std::string& name) {
  if (name == "exp") {
    return ActivationKind::Exp;
  }
  if (name == "normcdf") {
    return ActivationKind::NormCdf;
  }
  return ActivationKind::Sigmoid;
}

McActivation mc_activation_named(const std::string& name) {
  if (name == "softmax") {
    return McActivation::Softmax;
  }
  if (name == "normcdf") {
    return McActivation::NormCdf;
  }
  if (name == "sigmoid") {
    return McActivation::Sigmoid;
  }
  throw ValidationError(Kind::InvalidArgument, "unknown activation '" + name + "'");
}

struct PredictOptions {
  std::string input;
  std::string activation;
  std::uint64_t samples = 10000;
  std::uint64_t seed = 0;
  std::string out;
};

void cmd_predict(const PredictOptions& opt, unsigned threads, std::ostream& out) {
  const auto items = parse_gaussian_batch(read_file(opt.input));
  const auto rows = map_items<SimplexVectord>(items, threads, [&](const LogitGaussiand& g, std::size_t i) {
    const auto& a = opt.activation;
    if (a == "softmax-mf") {
      return mean_field_softmax_predictive(g);
    }
    if (a == "laplace-bridge") {
      return laplace_bridge_predictive(g).predictive;
    }
    if (a == "shekhovtsov") {
      return shekhovtsov_flach_predictive(g);
    }
    if (a == "mc") {
      return mc_predictive(g, McActivation::Softmax, opt.samples, derive_seed(opt.seed, {i}));
    }
    return closed_form_predictive(g, activation_kind(a));
  });
  std::string text = "[\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    text += "  " + vector_json(rows[i].probs()) + (i + 1 < rows.size() ? ",\n" : "\n");
  }
  text += "]\n";
  write_output(opt.out, text, out);
}

struct DirichletOptions {
  std::string input;
  std::string activation;
  std::string out;
};

struct DirichletSummary {
  DirichletParamsd params;
  SimplexVectord mean;
};

void cmd_dirichlet(const DirichletOptions& opt, unsigned threads, std::ostream& out) {
  const auto items = parse_gaussian_batch(read_file(opt.input));
  const auto rows = map_items<DirichletSummary>(items, threads, [&](const LogitGaussiand& g, std::size_t) {
    DirichletParamsd d = opt.activation == "laplace-bridge"
                             ? laplace_bridge_predictive(g).dirichlet
                             : match_dirichlet(pushforward_moments(g, activation_kind(opt.activation)));
    auto mean = dirichlet_mean(d);
    return DirichletSummary{std::move(d), std::move(mean)};
  });
  std::string text = "[\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    text += "  {\"gamma\": " + vector_json(r.params.gamma()) + ", \"mean\": " + vector_json(r.mean.probs()) +
            ", \"expected_entropy\": " + format_real(dirichlet_expected_entropy(r.params)) +
            ", \"mutual_information\": " + format_real(dirichlet_mutual_information(r.params)) +
            ", \"predictive_entropy\": " + format_real(predictive_entropy(r.mean)) + "}" +
            (i + 1 < rows.size() ? ",\n" : "\n");
  }
  text += "]\n";
  write_output(opt.out, text, out);
}

struct BenchOptions {
  std::string experiment;
  std::vector<int> classes;
  int datasets = 100;
  std::uint64_t truth_samples = 10000;
  std::uint64_t budget = 10000;
  std::uint64_t seed = 0;
  std::vector<std::string> activations;
  std::vector<double> mu_range;
  std::vector<double> sigma_range;
  std::vector<double> var_range;
  bool uniform_variance = false;
  bool high_truth = false;
  std::string direction = "true-vs-approx";
  bool mc_only = false;
  int trials = 100;
  int calibration_trials = 50;
  int grid_mu = 41;
  int grid_var = 21;
  std::uint64_t q_samples = 100000;
  std::string out_dir = ".";
};

std::pair<double, double> range_pair(const std::vector<double>& v, const char* flag) {
  if (v.size() != 2) {
    throw ValidationError(Kind::InvalidArgument, std::string(flag) + " expects lo,hi");
  }
  return {v[0], v[1]};
}

void write_bench_file(const std::filesystem::path& dir, const std::string& name, const std::string& text) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw ValidationError(Kind::InvalidArgument, "cannot create " + dir.string() + ": " + ec.message());
  }
  std::ofstream file(dir / name, std::ios::binary);
  if (!file || !(file << text) || !file.flush()) {
    throw ValidationError(Kind::InvalidArgument, "cannot write " + (dir / name).string());
  }
}

bench::SyntheticConfig synthetic_config(const BenchOptions& opt, unsigned threads) {
  bench::SyntheticConfig cfg;
  if (!opt.classes.empty()) {
    cfg.class_counts = opt.classes;
  }
  cfg.datasets_per_c = opt.datasets;
  cfg.truth_samples = opt.truth_samples;
  cfg.budget = opt.budget;
  cfg.master_seed = opt.seed;
  if (!opt.activations.empty()) {
    cfg.activations.clear();
    for (const auto& a : opt.activations) {
      cfg.activations.push_back(mc_activation_named(a));
    }
  }
  for (auto* r : {&cfg.sigmoid, &cfg.softmax, &cfg.normcdf}) {
    if (!opt.mu_range.empty()) {
      std::tie(r->mu_lo, r->mu_hi) = range_pair(opt.mu_range, "--mu-range");
    }
    if (!opt.sigma_range.empty()) {
      std::tie(r->sigma_lo, r->sigma_hi) = range_pair(opt.sigma_range, "--sigma-range");
    }
  }
  cfg.uniform_variance = opt.uniform_variance;
  cfg.high_truth = opt.high_truth;
  if (opt.direction == "true-vs-approx") {
    cfg.direction = bench::KlDirection::TrueVsApprox;
  } else if (opt.direction == "approx-vs-true") {
    cfg.direction = bench::KlDirection::ApproxVsTrue;
  } else {
    throw ValidationError(Kind::InvalidArgument, "--kl-direction must be true-vs-approx or approx-vs-true");
  }
  cfg.mc_only = opt.mc_only;
  cfg.threads = threads;
  cfg.validate();
  return cfg;
}

void cmd_bench(const BenchOptions& opt, unsigned threads, std::ostream& out) {
  const std::filesystem::path dir(opt.out_dir);
  if (opt.experiment == "fig1") {
    const auto cfg = synthetic_config(opt, threads);
    const auto report = bench::run_fig1(cfg);
    write_bench_file(dir, "fig1.csv", bench::to_csv(report));
    write_bench_file(dir, "fig1.json", bench::sidecar_json(cfg, report));
    out << bench::summary(report);
    return;
  }
  if (opt.experiment == "mc-scaling") {
    auto options = opt;
    if (options.classes.empty()) {
      options.classes = {10, 100, 1000};
    }
    const auto cfg = synthetic_config(options, threads);
    const auto report = bench::run_mc_scaling(cfg);
    write_bench_file(dir, "mc_scaling.csv", bench::to_csv(report.table));
    write_bench_file(dir, "mc_scaling.json", bench::sidecar_json(cfg, report));
    out << bench::summary(report.table);
    for (const auto& f : report.fits) {
      out << f.method << " log-log slope " << (f.degenerate ? "undefined (degenerate)" : format_real(f.slope))
          << '\n';
    }
    return;
  }
  // theorem
  bench::TheoremCheckConfig cfg;
  if (opt.classes.size() > 1) {
    throw ValidationError(Kind::InvalidArgument, "theorem takes a single --classes value");
  }
  if (opt.classes.size() == 1) {
    cfg.classes = opt.classes.front();
  }
  if (!opt.mu_range.empty()) {
    std::tie(cfg.box.mu_lo, cfg.box.mu_hi) = range_pair(opt.mu_range, "--mu-range");
  }
  if (!opt.sigma_range.empty() && !opt.var_range.empty()) {
    throw ValidationError(Kind::InvalidArgument, "give either --sigma-range or --var-range");
  }
  if (!opt.sigma_range.empty()) {
    const auto [lo, hi] = range_pair(opt.sigma_range, "--sigma-range");
    if (lo < 0.0) {
      throw ValidationError(Kind::InvalidArgument, "--sigma-range must be nonnegative");
    }
    cfg.box.var_lo = lo * lo;
    cfg.box.var_hi = hi * hi;
  }
  if (!opt.var_range.empty()) {
    std::tie(cfg.box.var_lo, cfg.box.var_hi) = range_pair(opt.var_range, "--var-range");
  }
  cfg.trials = opt.trials;
  cfg.calibration_trials = opt.calibration_trials;
  cfg.seed = opt.seed;
  cfg.grid_mu = opt.grid_mu;
  cfg.grid_var = opt.grid_var;
  cfg.q_samples = opt.q_samples;
  cfg.truth_samples = std::max<std::uint64_t>(opt.truth_samples, 1);
  cfg.threads = threads;
  cfg.validate();
  const auto report = bench::run_theorem_check(cfg);
  write_bench_file(dir, "theorem.csv", bench::to_csv(report));
  write_bench_file(dir, "theorem.json", bench::sidecar_json(cfg, report));
  double max_kl = 0.0;
  for (const auto& t : report.trials) {
    max_kl = std::max(max_kl, t.kl);
  }
  out << "delta      " << format_real(report.delta) << '\n'
      << "u          " << format_real(report.u) << '\n'
      << "Delta      " << format_real(report.Delta) << '\n'
      << "M          " << format_real(report.M) << '\n'
      << "kappa      " << format_real(report.kappa) << '\n'
      << "max KL     " << format_real(max_kl) << '\n'
      << "max excess " << format_real(report.max_excess) << '\n'
      << "status     " << bench::to_string(report.status) << '\n';
}

struct EvalOptions {
  std::string input;
  std::vector<std::string> metrics{"nll", "ece", "acc"};
  int bins = 15;
};

void cmd_eval(const EvalOptions& opt, std::ostream& out) {
  const auto records = parse_eval_file(read_file(opt.input));
  std::vector<LabeledPredictiond> preds;
  preds.reserve(records.size());
  for (const auto& r : records) {
    preds.push_back(r.prediction);
  }
  check_labels(preds);
  // Compute everything before printing so a failing metric leaves no partial output.
  std::vector<std::pair<std::string, double>> values;
  for (const auto& m : opt.metrics) {
    if (m == "nll") {
      values.emplace_back(m, 0.0 - log_prob_score(preds));
    } else if (m == "ece") {
      values.emplace_back(m, ece(preds, opt.bins));
    } else if (m == "acc") {
      values.emplace_back(m, accuracy(preds));
    } else if (m == "binary-logprob") {
      values.emplace_back(m, binary_log_prob_score(preds));
    } else if (m == "auroc") {
      const bool ood = records.front().ood >= 0;
      std::vector<double> scores;
      std::vector<int> labels;
      for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        if ((r.ood >= 0) != ood) {
          throw ValidationError(Kind::InvalidArgument, item_prefix(i) + "\"ood\" must be given for all or no items");
        }
        scores.push_back(std::isnan(r.score) ? 1.0 - r.prediction.probs.probs().maxCoeff() : r.score);
        labels.push_back(ood ? r.ood : (argmax(r.prediction.probs) != r.prediction.label ? 1 : 0));
      }
      values.emplace_back(m, auroc(scores, labels));
    } else {
      throw ValidationError(Kind::InvalidArgument, "unknown metric '" + m + "'");
    }
  }
  for (const auto& [name, v] : values) {
    out << name << ' ' << format_real(v) << '\n';
  }
}

}  // namespace

std::vector<LogitGaussiand> parse_gaussian_batch(const std::string& text) {
  const json doc = parse_json(text);
  if (!doc.is_object() || !doc.contains("C") || !doc["C"].is_number_integer()) {
    throw ValidationError(Kind::InvalidArgument, "field \"C\" must be an integer");
  }
  const auto classes = doc["C"].get<long long>();
  if (classes < 2) {
    throw ValidationError(Kind::TooFewClasses, "field \"C\" must be at least 2");
  }
  if (!doc.contains("items") || !doc["items"].is_array()) {
    throw ValidationError(Kind::InvalidArgument, "field \"items\" must be an array");
  }
  const auto c = static_cast<Eigen::Index>(classes);
  std::vector<LogitGaussiand> out;
  const auto& items = doc["items"];
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto& item = items[i];
    const std::string where = "item " + std::to_string(i);
    if (!item.is_object() || !item.contains("mean") || !item.contains("var")) {
      throw ValidationError(Kind::InvalidArgument, where + " needs \"mean\" and \"var\"");
    }
    LogitGaussiand g;
    g.mean = real_vector(item["mean"], where + " field \"mean\"", c);
    g.var_diag = real_vector(item["var"], where + " field \"var\"", c);
    if (item.contains("cov") && !item["cov"].is_null()) {
      const auto& cov = item["cov"];
      if (!cov.is_array() || static_cast<Eigen::Index>(cov.size()) != c) {
        throw ValidationError(Kind::DimensionMismatch, where + " field \"cov\" must be a C x C nested array");
      }
      Eigen::MatrixXd m(c, c);
      for (Eigen::Index r = 0; r < c; ++r) {
        m.row(r) = real_vector(cov[static_cast<std::size_t>(r)], where + " field \"cov\"[" + std::to_string(r) + "]", c)
                       .transpose();
      }
      g.cov_full = std::move(m);
    }
    try {
      validate(g);
    } catch (const ValidationError& e) {
      throw ValidationError(e.kind(), where + ": " + e.what());
    }
    out.push_back(std::move(g));
  }
  return out;
}

std::vector<EvalRecord> parse_eval_file(const std::string& text) {
  const json doc = parse_json(text);
  if (!doc.is_object() || !doc.contains("predictions") || !doc["predictions"].is_array()) {
    throw ValidationError(Kind::InvalidArgument, "field \"predictions\" must be an array");
  }
  const auto& preds = doc["predictions"];
  if (preds.empty()) {
    throw ValidationError(Kind::InvalidArgument, "field \"predictions\" is empty");
  }
  std::vector<EvalRecord> out;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const auto& p = preds[i];
    const std::string where = "prediction " + std::to_string(i);
    if (!p.is_object() || !p.contains("probs") || !p.contains("label") || !p["label"].is_number_integer()) {
      throw ValidationError(Kind::InvalidArgument, where + " needs \"probs\" and an integer \"label\"");
    }
    EvalRecord r;
    try {
      r.prediction.probs = SimplexVectord(real_vector(p["probs"], where + " field \"probs\"", -1));
    } catch (const ValidationError& e) {
      throw ValidationError(e.kind(), where + ": " + e.what());
    }
    r.prediction.label = p["label"].get<long long>();
    if (p.contains("ood")) {
      if (!p["ood"].is_number_integer() && !p["ood"].is_boolean()) {
        throw ValidationError(Kind::InvalidArgument, where + " field \"ood\" must be 0 or 1");
      }
      r.ood = p["ood"].is_boolean() ? int(p["ood"].get<bool>()) : p["ood"].get<int>();
      if (r.ood != 0 && r.ood != 1) {
        throw ValidationError(Kind::InvalidLabel, where + " field \"ood\" must be 0 or 1");
      }
    }
    r.score = std::numeric_limits<double>::quiet_NaN();
    if (p.contains("score")) {
      if (!p["score"].is_number()) {
        throw ValidationError(Kind::InvalidArgument, where + " field \"score\" must be a number");
      }
      r.score = p["score"].get<double>();
    }
    out.push_back(std::move(r));
  }
  return out;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gaussian logits to the probability simplex"};
  app.require_subcommand(1);
  app.fallthrough();
  std::optional<unsigned> threads_flag;
  app.add_option("--threads", threads_flag, "worker threads (SIMPLEX_THREADS overrides)")->check(CLI::PositiveNumber);

  PredictOptions predict;
  auto* predict_cmd = app.add_subcommand("predict", "approximate predictive per item");
  predict_cmd->add_option("input", predict.input, "Gaussian batch JSON")->required();
  predict_cmd->add_option("--activation", predict.activation)
      ->required()
      ->transform(CLI::IsMember(kPredictActivations));
  predict_cmd->add_option("--samples", predict.samples, "MC samples (mc only)")->check(CLI::PositiveNumber);
  predict_cmd->add_option("--seed", predict.seed);
  predict_cmd->add_option("--out", predict.out, "output JSON (default stdout)");

  DirichletOptions dirichlet;
  auto* dirichlet_cmd = app.add_subcommand("dirichlet", "moment-matched Dirichlet and uncertainty per item");
  dirichlet_cmd->add_option("input", dirichlet.input, "Gaussian batch JSON")->required();
  dirichlet_cmd->add_option("--activation", dirichlet.activation)
      ->required()
      ->transform(CLI::IsMember(kDirichletActivations));
  dirichlet_cmd->add_option("--out", dirichlet.out, "output JSON (default stdout)");

  BenchOptions bench_opt;
  auto* bench_cmd = app.add_subcommand("bench", "synthetic experiments");
  bench_cmd->add_option("experiment", bench_opt.experiment)
      ->required()
      ->check(CLI::IsMember({"fig1", "mc-scaling", "theorem"}));
  bench_cmd->add_option("--classes", bench_opt.classes)->delimiter(',');
  bench_cmd->add_option("--datasets", bench_opt.datasets);
  bench_cmd->add_option("--truth-samples", bench_opt.truth_samples);
  bench_cmd->add_option("--budget", bench_opt.budget);
  bench_cmd->add_option("--seed", bench_opt.seed);
  bench_cmd->add_option("--activations", bench_opt.activations)->delimiter(',');
  bench_cmd->add_option("--mu-range", bench_opt.mu_range, "lo,hi")->delimiter(',');
  bench_cmd->add_option("--sigma-range", bench_opt.sigma_range, "lo,hi")->delimiter(',');
  bench_cmd->add_option("--var-range", bench_opt.var_range, "lo,hi (theorem)")->delimiter(',');
  bench_cmd->add_flag("--uniform-variance", bench_opt.uniform_variance);
  bench_cmd->add_flag("--high-truth", bench_opt.high_truth);
  bench_cmd->add_option("--kl-direction", bench_opt.direction);
  bench_cmd->add_flag("--mc-only", bench_opt.mc_only);
  bench_cmd->add_option("--trials", bench_opt.trials);
  bench_cmd->add_option("--calibration-trials", bench_opt.calibration_trials);
  bench_cmd->add_option("--grid-mu", bench_opt.grid_mu);
  bench_cmd->add_option("--grid-var", bench_opt.grid_var);
  bench_cmd->add_option("--q-samples", bench_opt.q_samples);
  bench_cmd->add_option("--out-dir", bench_opt.out_dir);

  EvalOptions eval;
  auto* eval_cmd = app.add_subcommand("eval", "metrics of labelled predictions");
  eval_cmd->add_option("input", eval.input, "predictions JSON")->required();
  eval_cmd->add_option("--metrics", eval.metrics, "nll,ece,auroc,acc,binary-logprob")->delimiter(',');
  eval_cmd->add_option("--bins", eval.bins)->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kBadInput;
  }

  try {
    const unsigned threads = resolve_threads(threads_flag);
    if (*predict_cmd) {
      cmd_predict(predict, threads, out);
    } else if (*dirichlet_cmd) {
      cmd_dirichlet(dirichlet, threads, out);
    } else if (*bench_cmd) {
      cmd_bench(bench_opt, threads, out);
    } else if (*eval_cmd) {
      cmd_eval(eval, out);
    }
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what();
    if (e.class_index() != NumericalError::kNoClass) {
      err << " (class " << e.class_index() << ")";
    }
    err << '\n';
    return kNumerical;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kBadInput;
  }
  return kOk;
}

}  // namespace simplex::cli
