#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace nnstne {

struct KMeansResult {
  std::vector<int> assignments;
  Eigen::MatrixXd centroids;  ///< k x dim
  double inertia = 0.0;
  int iterations = 0;
  std::vector<double> inertia_trace;  ///< inertia after each Lloyd iteration
};

/// Lloyd's algorithm with k-means++ seeding. Deterministic for a fixed
/// seed: the RNG is a seeded mt19937_64 and all tie breaks go to the lowest
/// index. Empty clusters steal the point farthest from its centroid.
KMeansResult kmeans_lloyd(const Eigen::MatrixXd& points, int k, std::uint64_t seed,
                          int max_iters = 300, double tol = 1e-6);

namespace detail {

/// splitmix64 step, used to derive independent restart sub-seeds.
std::uint64_t mix_seed(std::uint64_t seed);

}  // namespace detail

}  // namespace nnstne
