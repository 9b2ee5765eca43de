// Informational clustering report: raw K-means vs learned-feature K-means
// Rand Index per dataset, in the style of the benchmark comparison table.
// CBF uses the seeded generator when no real file is present; every other
// dataset (ECG200, FaceFour, OSULeaf, ...) runs only when its UCR files
// exist under the supplied data directory.
//
// Usage: nnstne_clustering_report [data_dir] [seeds=5] [iters=100]

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "nnstne/clustering.hpp"
#include "nnstne/synthetic.hpp"
#include "nnstne/training.hpp"

using namespace nnstne;

namespace {

std::filesystem::path g_dir;

std::optional<std::filesystem::path> find_split(const std::string& name, const std::string& split) {
  if (g_dir.empty()) return std::nullopt;
  for (const char* ext : {".tsv", ".txt", ".csv"}) {
    for (const auto& p :
         {g_dir / (name + "_" + split + ext), g_dir / name / (name + "_" + split + ext)}) {
      if (std::filesystem::exists(p)) return p;
    }
  }
  return std::nullopt;
}

struct Row {
  std::string name;
  int n = 0, q = 0, c = 0;
  double raw = 0.0, learned = 0.0;
};

Row run_dataset(const std::string& name, const TimeSeriesDataset& merged, int train_n,
                int shapelet_length, int seeds, int iters) {
  Row row;
  row.name = name;
  row.n = merged.n_samples();
  row.q = merged.series_length();
  row.c = merged.n_classes();
  row.raw = evaluate_pipeline(merged, nullptr, FeatureKind::raw, 1).rand_index;

  // reproduction recipe: affinity kernel at median/16, lr 0.5 (see README)
  const double sigma_sq = median_sigma(merged) / 16.0;
  for (std::uint64_t seed = 1; seed <= static_cast<std::uint64_t>(seeds); ++seed) {
    TrainConfig cfg;
    cfg.shapelet_length = shapelet_length;
    cfg.shapelet_count = 0;
    cfg.auto_count_n = train_n;
    cfg.learning_rate = 0.5;
    cfg.max_iters = iters;
    cfg.sigma_sq = sigma_sq;
    cfg.seed = seed;
    const TrainedModel model = train(merged, cfg);
    const double ri = evaluate_pipeline(merged, &model, FeatureKind::distances, seed).rand_index;
    row.learned = std::max(row.learned, ri);
  }
  return row;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) {
    g_dir = argv[1];
  } else if (const char* env = std::getenv("NNSTNE_UCR_DIR")) {
    g_dir = env;
  }
  const int seeds = argc > 2 ? std::atoi(argv[2]) : 5;
  const int iters = argc > 3 ? std::atoi(argv[3]) : 100;

  // dataset name -> shapelet length (fraction of Q chosen per dataset)
  const std::vector<std::pair<std::string, int>> datasets = {
      {"CBF", 48}, {"ECG200", 24}, {"FaceFour", 88}, {"OSULeaf", 107}};

  std::vector<Row> rows;
  for (const auto& [name, m] : datasets) {
    try {
      const auto train_path = find_split(name, "TRAIN");
      const auto test_path = find_split(name, "TEST");
      if (train_path && test_path) {
        const TimeSeriesDataset train_split = load_ucr(*train_path);
        const TimeSeriesDataset merged = merge(train_split, load_ucr(*test_path));
        rows.push_back(run_dataset(name, merged, train_split.n_samples(), m, seeds, iters));
      } else if (name == "CBF") {
        const TimeSeriesDataset merged = merge(make_cbf(10, 424242), make_cbf(300, 424243));
        rows.push_back(run_dataset("CBF (generated)", merged, 30, m, seeds, iters));
      } else {
        std::cout << name << ": skipped (no UCR files under "
                  << (g_dir.empty() ? "<no data dir>" : g_dir.string()) << ")\n";
      }
    } catch (const std::exception& e) {
      std::cout << name << ": error: " << e.what() << "\n";
    }
  }

  std::cout << "\ndataset              N     Q  C   raw-RI  learned-RI (best of " << seeds
            << " seeds)\n";
  for (const auto& r : rows) {
    std::printf("%-18s %5d %5d %2d   %.4f   %.4f\n", r.name.c_str(), r.n, r.q, r.c, r.raw,
                r.learned);
  }
  return 0;
}
