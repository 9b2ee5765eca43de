#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "nnstne/dataset.hpp"
#include "nnstne/kmeans.hpp"
#include "nnstne/training.hpp"

namespace nnstne {

/// A hard clustering of N samples into clusters [0, n_clusters).
struct Partition {
  std::vector<int> assignments;
  int n_clusters = 0;

  int n_samples() const { return static_cast<int>(assignments.size()); }
};

/// Relabel arbitrary integer labels to a dense partition (sorted distinct
/// labels map to 0..C-1).
Partition partition_from_labels(const std::vector<int>& labels);

/// Which feature set the clustering consumes.
enum class FeatureKind { raw, distances, memberships };

std::string to_string(FeatureKind k);
FeatureKind feature_kind_from_string(const std::string& s);

struct EvalReport {
  double rand_index = 0.0;
  int n_samples = 0;
  int n_clusters = 0;
  std::string feature_kind;
  std::uint64_t seed = 0;
  int restarts = 0;
};

/// Min-pooled distances of every series to every (trimmed) shapelet.
/// Trimmed shapelets compare at their effective length against windows of
/// that same length. Applies the model's preprocessing flag first.
FeatureMatrix transform(const TrainedModel& model, const TimeSeriesDataset& data);

/// K-means with `restarts` independent k-means++ runs on derived sub-seeds;
/// the lowest-inertia run wins (ties to the lowest restart index).
Partition kmeans_cluster(const Eigen::MatrixXd& features, int n_clusters, std::uint64_t seed,
                         int restarts = 10);

/// Fraction of sample pairs on which the two partitions agree, by direct
/// O(N^2) pair enumeration. Requires equal sizes and N >= 2.
double rand_index(const Partition& pred, const Partition& truth);

/// Full protocol: select features (raw | distances F | memberships q),
/// cluster into n_classes groups, score against the ground-truth labels.
/// `model` may be null only for FeatureKind::raw.
EvalReport evaluate_pipeline(const TimeSeriesDataset& data, const TrainedModel* model,
                             FeatureKind kind, std::uint64_t seed, int restarts = 10);

std::string report_to_json(const EvalReport& report);
EvalReport report_from_json(const std::string& text);
void save_report(const EvalReport& report, const std::filesystem::path& path);
EvalReport load_report(const std::filesystem::path& path);

}  // namespace nnstne
