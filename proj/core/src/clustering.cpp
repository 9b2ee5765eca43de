#include "nnstne/clustering.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "nnstne/embedding.hpp"

namespace nnstne {

Partition partition_from_labels(const std::vector<int>& labels) {
  std::map<int, int> remap;
  for (int l : labels) remap.emplace(l, 0);
  int next = 0;
  for (auto& [label, id] : remap) id = next++;
  Partition p;
  p.n_clusters = next;
  p.assignments.reserve(labels.size());
  for (int l : labels) p.assignments.push_back(remap[l]);
  return p;
}

std::string to_string(FeatureKind k) {
  switch (k) {
    case FeatureKind::raw: return "raw";
    case FeatureKind::distances: return "F";
    case FeatureKind::memberships: return "q";
  }
  return "raw";
}

FeatureKind feature_kind_from_string(const std::string& s) {
  if (s == "raw") return FeatureKind::raw;
  if (s == "F") return FeatureKind::distances;
  if (s == "q") return FeatureKind::memberships;
  throw std::invalid_argument("unknown feature kind: " + s + " (expected raw|F|q)");
}

FeatureMatrix transform(const TrainedModel& model, const TimeSeriesDataset& data) {
  const int k_count = model.bank.count();
  if (k_count < 1) throw std::invalid_argument("transform: empty bank");
  const TimeSeriesDataset prepared = apply_preprocess(data, model.config.preprocess);

  FeatureMatrix fm;
  fm.f.resize(prepared.n_samples(), k_count);
  fm.argmin_window.resize(prepared.n_samples(), k_count);

  // Group shapelets by effective length so each length slides once.
  std::map<int, std::vector<int>> by_length;
  for (int k = 0; k < k_count; ++k) {
    const int len = static_cast<int>(model.bank.shapelets[k].size());
    if (len > prepared.series_length()) {
      throw std::runtime_error("transform: series length " +
                               std::to_string(prepared.series_length()) +
                               " is shorter than shapelet effective length " + std::to_string(len));
    }
    by_length[len].push_back(k);
  }

  for (const auto& [len, members] : by_length) {
    const WindowSet windows = slide_windows(prepared, len);
    ShapeletBank sub;
    sub.nominal_length = len;
    for (int k : members) sub.shapelets.push_back(model.bank.shapelets[k]);
    const FeatureMatrix part = min_pool(distance_tensor(sub, windows, model.config.threads));
    for (std::size_t c = 0; c < members.size(); ++c) {
      fm.f.col(members[c]) = part.f.col(static_cast<long>(c));
      fm.argmin_window.col(members[c]) = part.argmin_window.col(static_cast<long>(c));
    }
  }
  return fm;
}

Partition kmeans_cluster(const Eigen::MatrixXd& features, int n_clusters, std::uint64_t seed,
                         int restarts) {
  if (restarts < 1) throw std::invalid_argument("kmeans_cluster: restarts must be >= 1");
  if (n_clusters > features.rows()) {
    throw std::invalid_argument("kmeans_cluster: more clusters than samples");
  }
  KMeansResult best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    KMeansResult run = kmeans_lloyd(features, n_clusters, detail::mix_seed(seed + static_cast<std::uint64_t>(r)));
    if (run.inertia < best.inertia) best = std::move(run);
  }
  Partition p;
  p.assignments = std::move(best.assignments);
  p.n_clusters = n_clusters;
  return p;
}

double rand_index(const Partition& pred, const Partition& truth) {
  const int n = pred.n_samples();
  if (n != truth.n_samples()) throw std::invalid_argument("rand_index: size mismatch");
  if (n < 2) throw std::invalid_argument("rand_index: need at least two samples");
  long long agree = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const bool same_pred = pred.assignments[i] == pred.assignments[j];
      const bool same_truth = truth.assignments[i] == truth.assignments[j];
      if (same_pred == same_truth) ++agree;
    }
  }
  const long long pairs = static_cast<long long>(n) * (n - 1) / 2;
  return static_cast<double>(agree) / static_cast<double>(pairs);
}

EvalReport evaluate_pipeline(const TimeSeriesDataset& data, const TrainedModel* model,
                             FeatureKind kind, std::uint64_t seed, int restarts) {
  if (!data.has_labels()) throw std::runtime_error("evaluate_pipeline: dataset has no labels");
  if (kind != FeatureKind::raw && model == nullptr) {
    throw std::invalid_argument("evaluate_pipeline: feature kind " + to_string(kind) +
                                " requires a model");
  }
  Eigen::MatrixXd features;
  switch (kind) {
    case FeatureKind::raw:
      features = data.values;
      break;
    case FeatureKind::distances:
      features = transform(*model, data).f;
      break;
    case FeatureKind::memberships:
      features = t_membership(transform(*model, data).f, model->config.alpha).q;
      break;
  }

  const Partition truth = partition_from_labels(data.labels);
  const Partition pred = kmeans_cluster(features, truth.n_clusters, seed, restarts);

  EvalReport report;
  report.rand_index = rand_index(pred, truth);
  report.n_samples = data.n_samples();
  report.n_clusters = truth.n_clusters;
  report.feature_kind = to_string(kind);
  report.seed = seed;
  report.restarts = restarts;
  return report;
}

std::string report_to_json(const EvalReport& report) {
  nlohmann::ordered_json j{
      {"rand_index", report.rand_index},   {"n_samples", report.n_samples},
      {"n_clusters", report.n_clusters},   {"feature_kind", report.feature_kind},
      {"seed", report.seed},               {"restarts", report.restarts},
  };
  return j.dump(2) + "\n";
}

EvalReport report_from_json(const std::string& text) {
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    EvalReport r;
    r.rand_index = j.at("rand_index").get<double>();
    r.n_samples = j.at("n_samples").get<int>();
    r.n_clusters = j.at("n_clusters").get<int>();
    r.feature_kind = j.at("feature_kind").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.restarts = j.at("restarts").get<int>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("report parse error: ") + e.what());
  }
}

void save_report(const EvalReport& report, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << report_to_json(report);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

EvalReport load_report(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return report_from_json(ss.str());
}

}  // namespace nnstne
