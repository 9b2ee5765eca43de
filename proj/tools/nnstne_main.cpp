// Command-line front end: train shapelets, evaluate clusterings, export
// artifacts. Exit codes: 0 ok, 2 usage error, 3 data error, 4 training
// diverged.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "nnstne/clustering.hpp"
#include "nnstne/dataset.hpp"
#include "nnstne/training.hpp"
#include "nnstne/version.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitDiverged = 4;

std::uint64_t fnv1a64_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::uint64_t h = 14695981039346656037ULL;
  char buf[65536];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ULL;
    }
    if (!in) break;
  }
  return h;
}

std::string hash_string(const std::filesystem::path& path) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx",
                static_cast<unsigned long long>(fnv1a64_file(path)));
  return buf;
}

char resolve_delimiter(const std::string& name) {
  if (name == "auto") return '\0';
  if (name == "comma") return ',';
  if (name == "tab") return '\t';
  throw CLI::ValidationError("--delimiter", "expected auto|comma|tab");
}

struct TimedRun {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

void write_manifest(const std::filesystem::path& out_path, const std::string& command,
                    const nlohmann::ordered_json& config,
                    const std::vector<std::filesystem::path>& inputs,
                    const std::vector<std::filesystem::path>& outputs, double seconds) {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["tool_version"] = nnstne::version();
  j["config"] = config;
  auto in_list = nlohmann::ordered_json::array();
  for (const auto& p : inputs) {
    in_list.push_back(nlohmann::ordered_json{{"path", p.string()}, {"hash", hash_string(p)}});
  }
  j["inputs"] = std::move(in_list);
  auto out_list = nlohmann::ordered_json::array();
  for (const auto& p : outputs) out_list.push_back(p.string());
  j["outputs"] = std::move(out_list);
  j["duration_seconds"] = seconds;

  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + out_path.string());
  out << j.dump(2) << "\n";
}

struct DataArgs {
  std::string data_path;
  std::string test_path;
  std::string delimiter = "auto";
};

void add_data_flags(CLI::App* cmd, DataArgs& args, const std::string& env_prefix) {
  cmd->add_option("--data", args.data_path, "training/input UCR text file")
      ->required()
      ->envname(env_prefix + "DATA");
  cmd->add_option("--test", args.test_path, "optional test split, merged for clustering")
      ->envname(env_prefix + "TEST");
  cmd->add_option("--delimiter", args.delimiter, "input delimiter: auto|comma|tab")
      ->envname(env_prefix + "DELIMITER");
}

// Loads --data (and --test when given) and returns {merged, train_n}.
std::pair<nnstne::TimeSeriesDataset, int> load_inputs(const DataArgs& args) {
  const char delim = resolve_delimiter(args.delimiter);
  nnstne::TimeSeriesDataset train = nnstne::load_ucr(args.data_path, delim);
  const int train_n = train.n_samples();
  if (!args.test_path.empty()) {
    return {nnstne::merge(train, nnstne::load_ucr(args.test_path, delim)), train_n};
  }
  return {std::move(train), train_n};
}

std::vector<std::filesystem::path> input_paths(const DataArgs& args) {
  std::vector<std::filesystem::path> v{args.data_path};
  if (!args.test_path.empty()) v.push_back(args.test_path);
  return v;
}

nlohmann::ordered_json config_json(const nnstne::TrainConfig& c) {
  return nlohmann::ordered_json{
      {"shapelet_length", c.shapelet_length},
      {"shapelet_count", c.shapelet_count},
      {"auto_count_n", c.auto_count_n},
      {"alpha", c.alpha},
      {"lambda", c.lambda},
      {"beta", c.beta},
      {"sigma_sq", c.sigma_sq},
      {"sigma_shapelet_sq", c.sigma_shapelet_sq},
      {"learning_rate", c.learning_rate},
      {"max_iters", c.max_iters},
      {"tolerance", c.tolerance},
      {"seed", c.seed},
      {"preprocess", nnstne::to_string(c.preprocess)},
      {"trim_epsilon", c.trim_epsilon},
      {"threads", c.threads},
  };
}

int run_train(const DataArgs& data_args, const std::string& count, const std::string& sigma,
              const std::string& count_basis, nnstne::TrainConfig cfg,
              const std::string& preprocess, const std::string& out_path) {
  TimedRun timer;
  if (count != "auto") cfg.shapelet_count = std::stoi(count);
  if (sigma != "auto") cfg.sigma_sq = std::stod(sigma);
  cfg.preprocess = nnstne::preprocess_from_string(preprocess);

  auto [data, train_n] = load_inputs(data_args);
  if (count_basis == "train") {
    cfg.auto_count_n = train_n;
  } else if (count_basis != "merged") {
    throw std::invalid_argument("--count-basis expects train|merged");
  }

  const nnstne::TrainedModel model = nnstne::train(data, cfg);
  nnstne::save_model(model, out_path);
  write_manifest(out_path + ".manifest.json", "train", config_json(model.config),
                 input_paths(data_args), {out_path}, timer.seconds());

  std::cout << "trained " << model.config.shapelet_count << " shapelets in "
            << model.loss_history.size() << " iterations; model written to " << out_path << "\n";
  return 0;
}

int run_evaluate(const DataArgs& data_args, const std::string& model_path,
                 const std::string& features, std::uint64_t seed, int restarts,
                 const std::string& preprocess, const std::string& out_path, int threads) {
  TimedRun timer;
  const nnstne::FeatureKind kind = nnstne::feature_kind_from_string(features);

  std::optional<nnstne::TrainedModel> model;
  if (!model_path.empty()) {
    model = nnstne::load_model(model_path);
    model->config.threads = std::max(1, threads);
  } else if (kind != nnstne::FeatureKind::raw) {
    throw std::invalid_argument("--features " + features + " requires --model");
  }

  auto [data, train_n] = load_inputs(data_args);
  (void)train_n;
  if (kind == nnstne::FeatureKind::raw) {
    data = nnstne::apply_preprocess(data, nnstne::preprocess_from_string(preprocess));
  }

  const nnstne::EvalReport report =
      nnstne::evaluate_pipeline(data, model ? &*model : nullptr, kind, seed, restarts);
  nnstne::save_report(report, out_path);
  nlohmann::ordered_json cfg{{"features", features},   {"seed", seed},
                             {"restarts", restarts},   {"preprocess", preprocess},
                             {"model", model_path},    {"n_clusters", report.n_clusters},
                             {"threads", threads}};
  std::vector<std::filesystem::path> inputs = input_paths(data_args);
  if (!model_path.empty()) inputs.push_back(model_path);
  write_manifest(out_path + ".manifest.json", "evaluate", cfg, inputs, {out_path},
                 timer.seconds());
  std::printf("RI=%.4f\n", report.rand_index);
  return 0;
}

int run_export(const std::string& model_path, const std::string& what, const DataArgs& data_args,
               const std::string& out_path) {
  TimedRun timer;
  const nnstne::TrainedModel model = nnstne::load_model(model_path);
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out.precision(17);

  std::vector<std::filesystem::path> inputs{model_path};
  if (what == "shapelets") {
    for (const auto& s : model.bank.shapelets) {
      for (long i = 0; i < s.size(); ++i) out << (i ? "," : "") << s[i];
      out << "\n";
    }
  } else if (what == "features") {
    if (data_args.data_path.empty()) throw std::invalid_argument("export features requires --data");
    auto [data, train_n] = load_inputs(data_args);
    (void)train_n;
    const nnstne::FeatureMatrix fm = nnstne::transform(model, data);
    for (long i = 0; i < fm.f.rows(); ++i) {
      for (long k = 0; k < fm.f.cols(); ++k) out << (k ? "," : "") << fm.f(i, k);
      out << "\n";
    }
    for (const auto& p : input_paths(data_args)) inputs.push_back(p);
  } else if (what == "loss") {
    out << "iteration,spectral,diversity,l1,total\n";
    for (std::size_t i = 0; i < model.loss_history.size(); ++i) {
      const auto& b = model.loss_history[i];
      out << (i + 1) << "," << b.spectral << "," << b.diversity << "," << b.l1 << "," << b.total
          << "\n";
    }
  } else {
    throw std::invalid_argument("--what expects shapelets|features|loss");
  }
  out.close();

  write_manifest(out_path + ".manifest.json", "export",
                 nlohmann::ordered_json{{"what", what}, {"model", model_path}}, inputs, {out_path},
                 timer.seconds());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nnstne: unsupervised shapelet learning and clustering"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(nnstne::version()));

  // train
  DataArgs train_data;
  nnstne::TrainConfig cfg;
  std::string count = "auto", sigma = "auto", count_basis = "train", train_preprocess = "none";
  std::string model_out = "model.json";
  CLI::App* train = app.add_subcommand("train", "learn a shapelet bank");
  add_data_flags(train, train_data, "NNSTNE_");
  train->add_option("--length", cfg.shapelet_length, "shapelet length M")
      ->required()
      ->envname("NNSTNE_LENGTH");
  train->add_option("--count", count, "shapelet count K, or 'auto'")->envname("NNSTNE_COUNT");
  train->add_option("--count-basis", count_basis,
                    "N used by the auto count rule: train|merged")
      ->envname("NNSTNE_COUNT_BASIS");
  train->add_option("--alpha", cfg.alpha, "Student-t degrees of freedom")->envname("NNSTNE_ALPHA");
  train->add_option("--lambda", cfg.lambda, "diversity weight")->envname("NNSTNE_LAMBDA");
  train->add_option("--beta", cfg.beta, "L1 weight")->envname("NNSTNE_BETA");
  train->add_option("--sigma", sigma, "affinity kernel variance, or 'auto' (median heuristic)")
      ->envname("NNSTNE_SIGMA");
  train->add_option("--lr", cfg.learning_rate, "learning rate")->envname("NNSTNE_LR");
  train->add_option("--iters", cfg.max_iters, "max iterations")->envname("NNSTNE_ITERS");
  train->add_option("--tol", cfg.tolerance, "relative loss-change stopping tolerance")
      ->envname("NNSTNE_TOL");
  train->add_option("--seed", cfg.seed, "RNG seed")->envname("NNSTNE_SEED");
  train->add_option("--preprocess", train_preprocess, "none|zscore|minmax")
      ->envname("NNSTNE_PREPROCESS");
  train->add_option("--trim-eps", cfg.trim_epsilon, "relative trim threshold")
      ->envname("NNSTNE_TRIM_EPS");
  train->add_option("--threads", cfg.threads, "worker threads (1 = deterministic default)")
      ->envname("NNSTNE_THREADS");
  train->add_option("--out", model_out, "model output path")->envname("NNSTNE_OUT");

  // evaluate
  DataArgs eval_data;
  std::string eval_model, eval_features = "F", eval_preprocess = "none";
  std::string report_out = "report.json";
  std::uint64_t eval_seed = 0;
  int eval_restarts = 10, eval_threads = 1;
  CLI::App* evaluate = app.add_subcommand("evaluate", "cluster features and score the Rand Index");
  add_data_flags(evaluate, eval_data, "NNSTNE_");
  evaluate->add_option("--model", eval_model, "trained model JSON (optional for --features raw)")
      ->envname("NNSTNE_MODEL");
  evaluate->add_option("--features", eval_features, "raw|F|q")->envname("NNSTNE_FEATURES");
  evaluate->add_option("--seed", eval_seed, "RNG seed")->envname("NNSTNE_SEED");
  evaluate->add_option("--restarts", eval_restarts, "K-means restarts")->envname("NNSTNE_RESTARTS");
  evaluate->add_option("--preprocess", eval_preprocess, "preprocessing for raw features")
      ->envname("NNSTNE_PREPROCESS");
  evaluate->add_option("--threads", eval_threads, "worker threads")->envname("NNSTNE_THREADS");
  evaluate->add_option("--out", report_out, "report output path")->envname("NNSTNE_OUT");

  // export
  DataArgs export_data;
  std::string export_model, export_what, export_out;
  CLI::App* exp = app.add_subcommand("export", "write shapelets/features/loss as CSV");
  exp->add_option("--model", export_model, "trained model JSON")
      ->required()
      ->envname("NNSTNE_MODEL");
  exp->add_option("--what", export_what, "shapelets|features|loss")
      ->required()
      ->envname("NNSTNE_WHAT");
  exp->add_option("--data", export_data.data_path, "UCR text file (features export)")
      ->envname("NNSTNE_DATA");
  exp->add_option("--test", export_data.test_path, "optional test split")->envname("NNSTNE_TEST");
  exp->add_option("--delimiter", export_data.delimiter, "auto|comma|tab")
      ->envname("NNSTNE_DELIMITER");
  exp->add_option("--out", export_out, "CSV output path")->required()->envname("NNSTNE_OUT");

  try {
    app.parse(argc, argv);
    if (train->parsed()) {
      return run_train(train_data, count, sigma, count_basis, cfg, train_preprocess, model_out);
    }
    if (evaluate->parsed()) {
      return run_evaluate(eval_data, eval_model, eval_features, eval_seed, eval_restarts,
                          eval_preprocess, report_out, eval_threads);
    }
    if (exp->parsed()) {
      return run_export(export_model, export_what, export_data, export_out);
    }
    std::cerr << app.help();
    return kExitUsage;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return kExitUsage;
  } catch (const nnstne::TrainingDiverged& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDiverged;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
}
