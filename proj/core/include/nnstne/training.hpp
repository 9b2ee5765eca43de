#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "nnstne/dataset.hpp"
#include "nnstne/objective.hpp"
#include "nnstne/similarity.hpp"

namespace nnstne {

/// All training knobs. Zero-valued shapelet_count / sigma_sq /
/// sigma_shapelet_sq mean "resolve automatically"; train() stores the
/// resolved values in the returned model.
struct TrainConfig {
  int shapelet_length = 0;        ///< M, required (>= 2)
  int shapelet_count = 0;         ///< K; 0 = ceil(log2(N (Q-M) C))
  int auto_count_n = 0;           ///< N used by the auto rule; 0 = dataset size
  double alpha = 1.0;             ///< Student-t degrees of freedom
  double lambda = 1.0;            ///< diversity weight
  double beta = 0.01;             ///< L1 weight
  double sigma_sq = 0.0;          ///< affinity kernel variance; 0 = median heuristic
  double sigma_shapelet_sq = 0.0; ///< diversity kernel variance; 0 = median at init
  double learning_rate = 0.2;
  int max_iters = 500;
  double tolerance = 1e-6;        ///< relative loss change stopping rule
  std::uint64_t seed = 0;
  Preprocess preprocess = Preprocess::none;
  double trim_epsilon = 0.01;
  int threads = 1;
};

/// Thrown when the loss leaves the finite range and step backoff cannot
/// recover it.
class TrainingDiverged : public std::runtime_error {
 public:
  explicit TrainingDiverged(int iteration)
      : std::runtime_error("training diverged at iteration " + std::to_string(iteration) +
                           "; lower the learning rate"),
        iteration(iteration) {}
  int iteration;
};

struct TrainedModel {
  ShapeletBank bank;  ///< trimmed; rows carry their effective lengths
  TrainConfig config; ///< resolved (no zero/auto placeholders)
  std::vector<LossBreakdown> loss_history;
};

/// K = ceil(log2(N (Q - M) C)), at least 1. Requires N >= 1, C >= 1, M < Q.
int shapelet_count(int n_samples, int series_length, int shapelet_length, int n_classes);

/// K-means over all z-normalized windows; the centroids seed the bank.
/// Deterministic for a fixed seed.
ShapeletBank init_shapelets_kmeans(const WindowSet& windows, int k, std::uint64_t seed);

/// Gradient descent on the total objective with multiplicative step
/// backoff: on a loss increase the step is halved (up to 20 times) and the
/// iterate retried, which makes the recorded loss history non-increasing.
/// Stops on relative loss change < tolerance or after max_iters steps, then
/// trims the bank. Throws TrainingDiverged when the loss turns non-finite
/// and backoff cannot cure it.
TrainedModel train(const TimeSeriesDataset& data, const TrainConfig& config);

/// Strip leading/trailing entries with |s| < eps * max(1, ||s||_inf);
/// interior entries always survive. A shapelet that would drop below
/// length 2 keeps its largest-magnitude contiguous pair instead.
ShapeletBank trim_shapelets(const ShapeletBank& bank, double trim_epsilon);

/// Model (de)serialization: a single JSON document, version
/// "nnstne-model-v1". Serialization is byte-deterministic.
std::string model_to_json(const TrainedModel& model);
TrainedModel model_from_json(const std::string& text);
void save_model(const TrainedModel& model, const std::filesystem::path& path);
TrainedModel load_model(const std::filesystem::path& path);

}  // namespace nnstne
