#include "nnstne/training.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "nnstne/kmeans.hpp"

namespace nnstne {

int shapelet_count(int n_samples, int series_length, int shapelet_length, int n_classes) {
  if (n_samples < 1) throw std::invalid_argument("shapelet_count: N must be >= 1");
  if (n_classes < 1) throw std::invalid_argument("shapelet_count: C must be >= 1");
  if (shapelet_length >= series_length) {
    throw std::invalid_argument("shapelet_count: shapelet length must be < series length");
  }
  const double v = static_cast<double>(n_samples) *
                   static_cast<double>(series_length - shapelet_length) *
                   static_cast<double>(n_classes);
  const int k = static_cast<int>(std::ceil(std::log2(v)));
  return std::max(1, k);
}

ShapeletBank init_shapelets_kmeans(const WindowSet& windows, int k, std::uint64_t seed) {
  const long total = static_cast<long>(windows.n_series()) * windows.windows_per_series;
  if (k > total) throw std::invalid_argument("init_shapelets_kmeans: K exceeds window count");

  Eigen::MatrixXd points(total, windows.window_length);
  long row = 0;
  for (int i = 0; i < windows.n_series(); ++i) {
    for (int j = 0; j < windows.windows_per_series; ++j) {
      points.row(row++) = znormalize(windows.per_series[i].col(j));
    }
  }
  const KMeansResult km = kmeans_lloyd(points, k, seed, 300, 1e-6);
  return ShapeletBank::from_matrix(km.centroids);
}

namespace {

TrainConfig resolve_config(const TimeSeriesDataset& data, const TrainConfig& config) {
  if (config.shapelet_length < 2) throw std::invalid_argument("train: shapelet length must be >= 2");
  if (!(config.learning_rate > 0.0)) throw std::invalid_argument("train: learning rate must be > 0");
  if (config.max_iters < 1) throw std::invalid_argument("train: max_iters must be >= 1");
  if (config.trim_epsilon < 0.0) throw std::invalid_argument("train: trim_epsilon must be >= 0");
  if (config.tolerance < 0.0) throw std::invalid_argument("train: tolerance must be >= 0");

  TrainConfig r = config;
  if (r.shapelet_count <= 0) {
    const int n = r.auto_count_n > 0 ? r.auto_count_n : data.n_samples();
    const int c = data.has_labels() ? data.n_classes() : 1;
    r.shapelet_count = shapelet_count(n, data.series_length(), r.shapelet_length, c);
  }
  r.auto_count_n = r.auto_count_n > 0 ? r.auto_count_n : data.n_samples();
  r.threads = std::max(1, r.threads);
  return r;
}

}  // namespace

TrainedModel train(const TimeSeriesDataset& data, const TrainConfig& config) {
  TrainConfig cfg = resolve_config(data, config);
  const TimeSeriesDataset prepared = apply_preprocess(data, cfg.preprocess);
  const WindowSet windows = slide_windows(prepared, cfg.shapelet_length);
  const NccEngine engine(windows);

  ShapeletBank bank = init_shapelets_kmeans(windows, cfg.shapelet_count, cfg.seed);
  if (cfg.sigma_shapelet_sq <= 0.0) cfg.sigma_shapelet_sq = median_shapelet_sigma(bank);
  if (cfg.sigma_sq <= 0.0) cfg.sigma_sq = median_sigma(prepared);
  const AffinityGraph graph = gaussian_affinity(prepared, cfg.sigma_sq);

  auto eval = [&](const ShapeletBank& b) {
    return loss_with_gradient(b, engine, graph, cfg.alpha, cfg.lambda, cfg.beta,
                              cfg.sigma_shapelet_sq, cfg.threads);
  };

  TrainedModel model;
  model.config = cfg;

  LossWithGradient cur = eval(bank);
  if (!std::isfinite(cur.loss.total)) throw TrainingDiverged(0);

  double eta = cfg.learning_rate;
  Eigen::MatrixXd params = bank.matrix();

  for (int iter = 1; iter <= cfg.max_iters; ++iter) {
    const double prev_total = cur.loss.total;
    bool accepted = false;
    LossWithGradient cand_eval;
    Eigen::MatrixXd cand;
    for (int backoff = 0; backoff <= 20; ++backoff) {
      cand = params - eta * cur.gradient;
      cand_eval = eval(ShapeletBank::from_matrix(cand));
      if (std::isfinite(cand_eval.loss.total) && cand_eval.loss.total <= prev_total) {
        accepted = true;
        break;
      }
      eta *= 0.5;
    }
    if (!accepted) {
      if (!std::isfinite(cand_eval.loss.total)) throw TrainingDiverged(iter);
      break;  // stalled: no step of any tried size improves the loss
    }
    params = cand;
    cur = std::move(cand_eval);
    model.loss_history.push_back(cur.loss);

    const double rel = std::abs(prev_total - cur.loss.total) / std::max(1e-12, std::abs(prev_total));
    if (rel < cfg.tolerance) break;
  }

  model.bank = trim_shapelets(ShapeletBank::from_matrix(params), cfg.trim_epsilon);
  return model;
}

ShapeletBank trim_shapelets(const ShapeletBank& bank, double trim_epsilon) {
  if (trim_epsilon < 0.0) throw std::invalid_argument("trim_shapelets: epsilon must be >= 0");
  ShapeletBank out;
  out.nominal_length = bank.nominal_length;
  out.shapelets.reserve(bank.shapelets.size());
  for (const auto& s : bank.shapelets) {
    const long m = s.size();
    const double threshold = trim_epsilon * std::max(1.0, s.cwiseAbs().maxCoeff());
    long first = 0;
    while (first < m && std::abs(s[first]) < threshold) ++first;
    long last = m - 1;
    while (last >= 0 && std::abs(s[last]) < threshold) --last;

    if (last - first + 1 >= 2) {
      out.shapelets.emplace_back(s.segment(first, last - first + 1));
      continue;
    }
    // keep the largest-magnitude contiguous pair
    long best = 0;
    double best_mag = -1.0;
    for (long i = 0; i + 1 < m; ++i) {
      const double mag = std::abs(s[i]) + std::abs(s[i + 1]);
      if (mag > best_mag) {
        best_mag = mag;
        best = i;
      }
    }
    out.shapelets.emplace_back(s.segment(best, 2));
  }
  return out;
}

namespace {

nlohmann::ordered_json breakdown_to_json(const LossBreakdown& b) {
  return nlohmann::ordered_json{
      {"spectral", b.spectral}, {"diversity", b.diversity}, {"l1", b.l1}, {"total", b.total}};
}

}  // namespace

std::string model_to_json(const TrainedModel& model) {
  nlohmann::ordered_json j;
  j["version"] = "nnstne-model-v1";
  j["config"] = nlohmann::ordered_json{
      {"shapelet_length", model.config.shapelet_length},
      {"shapelet_count", model.config.shapelet_count},
      {"auto_count_n", model.config.auto_count_n},
      {"alpha", model.config.alpha},
      {"lambda", model.config.lambda},
      {"beta", model.config.beta},
      {"sigma_sq", model.config.sigma_sq},
      {"sigma_shapelet_sq", model.config.sigma_shapelet_sq},
      {"learning_rate", model.config.learning_rate},
      {"max_iters", model.config.max_iters},
      {"tolerance", model.config.tolerance},
      {"seed", model.config.seed},
      {"preprocess", to_string(model.config.preprocess)},
      {"trim_epsilon", model.config.trim_epsilon},
      {"threads", model.config.threads},
  };
  auto shapelets = nlohmann::ordered_json::array();
  for (const auto& s : model.bank.shapelets) {
    auto row = nlohmann::ordered_json::array();
    for (long i = 0; i < s.size(); ++i) row.push_back(s[i]);
    shapelets.push_back(std::move(row));
  }
  j["shapelets"] = std::move(shapelets);
  auto history = nlohmann::ordered_json::array();
  for (const auto& b : model.loss_history) history.push_back(breakdown_to_json(b));
  j["loss_history"] = std::move(history);
  return j.dump(2) + "\n";
}

TrainedModel model_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("model parse error: ") + e.what());
  }
  if (!j.contains("version") || j["version"] != "nnstne-model-v1") {
    throw std::runtime_error("model parse error: unsupported or missing version");
  }
  TrainedModel model;
  try {
    const auto& c = j.at("config");
    model.config.shapelet_length = c.at("shapelet_length").get<int>();
    model.config.shapelet_count = c.at("shapelet_count").get<int>();
    model.config.auto_count_n = c.value("auto_count_n", 0);
    model.config.alpha = c.at("alpha").get<double>();
    model.config.lambda = c.at("lambda").get<double>();
    model.config.beta = c.at("beta").get<double>();
    model.config.sigma_sq = c.at("sigma_sq").get<double>();
    model.config.sigma_shapelet_sq = c.at("sigma_shapelet_sq").get<double>();
    model.config.learning_rate = c.at("learning_rate").get<double>();
    model.config.max_iters = c.at("max_iters").get<int>();
    model.config.tolerance = c.at("tolerance").get<double>();
    model.config.seed = c.at("seed").get<std::uint64_t>();
    model.config.preprocess = preprocess_from_string(c.at("preprocess").get<std::string>());
    model.config.trim_epsilon = c.at("trim_epsilon").get<double>();
    model.config.threads = c.value("threads", 1);

    model.bank.nominal_length = model.config.shapelet_length;
    for (const auto& row : j.at("shapelets")) {
      Eigen::VectorXd s(row.size());
      long i = 0;
      for (const auto& v : row) s[i++] = v.get<double>();
      if (s.size() < 2) throw std::runtime_error("model parse error: shapelet shorter than 2");
      model.bank.shapelets.push_back(std::move(s));
    }
    for (const auto& h : j.at("loss_history")) {
      LossBreakdown b;
      b.spectral = h.at("spectral").get<double>();
      b.diversity = h.at("diversity").get<double>();
      b.l1 = h.at("l1").get<double>();
      b.total = h.at("total").get<double>();
      b.lambda = model.config.lambda;
      b.beta = model.config.beta;
      b.sigma_shapelet_sq = model.config.sigma_shapelet_sq;
      model.loss_history.push_back(b);
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("model parse error: ") + e.what());
  } catch (const std::invalid_argument& e) {
    // a corrupt model file is a data error, not a usage error
    throw std::runtime_error(std::string("model parse error: ") + e.what());
  }
  return model;
}

void save_model(const TrainedModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << model_to_json(model);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

TrainedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return model_from_json(ss.str());
}

}  // namespace nnstne
