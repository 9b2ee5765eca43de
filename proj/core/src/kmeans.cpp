#include "nnstne/kmeans.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace nnstne {

namespace detail {

std::uint64_t mix_seed(std::uint64_t seed) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace detail

namespace {

// uniform double in [0, 1), portable across standard libraries
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// squared distances of every point to one center
Eigen::VectorXd dist2_to(const Eigen::MatrixXd& points, const Eigen::RowVectorXd& center) {
  return (points.rowwise() - center).rowwise().squaredNorm();
}

Eigen::MatrixXd kmeanspp_init(const Eigen::MatrixXd& points, int k, std::mt19937_64& rng) {
  const long n = points.rows();
  Eigen::MatrixXd centers(k, points.cols());
  const long first = std::min<long>(n - 1, static_cast<long>(uniform01(rng) * static_cast<double>(n)));
  centers.row(0) = points.row(first);

  Eigen::VectorXd d2 = dist2_to(points, centers.row(0));
  for (int c = 1; c < k; ++c) {
    const double total = d2.sum();
    long pick;
    if (total <= 0.0) {
      pick = std::min<long>(n - 1, static_cast<long>(uniform01(rng) * static_cast<double>(n)));
    } else {
      double target = uniform01(rng) * total;
      pick = n - 1;
      double acc = 0.0;
      for (long i = 0; i < n; ++i) {
        acc += d2[i];
        if (acc >= target) {
          pick = i;
          break;
        }
      }
    }
    centers.row(c) = points.row(pick);
    d2 = d2.cwiseMin(dist2_to(points, centers.row(c)));
  }
  return centers;
}

}  // namespace

KMeansResult kmeans_lloyd(const Eigen::MatrixXd& points, int k, std::uint64_t seed, int max_iters,
                          double tol) {
  const long n = points.rows();
  if (k < 1) throw std::invalid_argument("kmeans: k must be >= 1");
  if (n < k) throw std::invalid_argument("kmeans: more clusters than points");

  std::mt19937_64 rng(seed);
  KMeansResult res;
  res.centroids = kmeanspp_init(points, k, rng);
  res.assignments.assign(static_cast<std::size_t>(n), 0);

  const Eigen::VectorXd point_sq = points.rowwise().squaredNorm();
  Eigen::MatrixXd dists(n, k);
  double prev_inertia = std::numeric_limits<double>::infinity();

  for (int iter = 0; iter < max_iters; ++iter) {
    // assignment step: ||x||^2 - 2 x.c + ||c||^2 via one matrix product
    dists.noalias() = -2.0 * points * res.centroids.transpose();
    dists.colwise() += point_sq;
    dists.rowwise() += res.centroids.rowwise().squaredNorm().transpose();

    bool changed = false;
    std::vector<long> counts(static_cast<std::size_t>(k), 0);
    for (long i = 0; i < n; ++i) {
      int best = 0;
      double bd = dists(i, 0);
      for (int c = 1; c < k; ++c) {
        if (dists(i, c) < bd) {
          bd = dists(i, c);
          best = c;
        }
      }
      if (res.assignments[static_cast<std::size_t>(i)] != best) changed = true;
      res.assignments[static_cast<std::size_t>(i)] = best;
      ++counts[static_cast<std::size_t>(best)];
    }

    // revive empty clusters with the worst-fitted point
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) continue;
      long worst = -1;
      double worst_d = -1.0;
      for (long i = 0; i < n; ++i) {
        const int a = res.assignments[static_cast<std::size_t>(i)];
        if (counts[static_cast<std::size_t>(a)] <= 1) continue;  // keep donors nonempty
        const double di = dists(i, a);
        if (di > worst_d) {
          worst_d = di;
          worst = i;
        }
      }
      if (worst < 0) continue;
      --counts[static_cast<std::size_t>(res.assignments[static_cast<std::size_t>(worst)])];
      res.assignments[static_cast<std::size_t>(worst)] = c;
      ++counts[static_cast<std::size_t>(c)];
      changed = true;
    }

    // update step
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, points.cols());
    for (long i = 0; i < n; ++i) sums.row(res.assignments[static_cast<std::size_t>(i)]) += points.row(i);
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) {
        res.centroids.row(c) = sums.row(c) / static_cast<double>(counts[static_cast<std::size_t>(c)]);
      }
    }

    double inertia = 0.0;
    for (long i = 0; i < n; ++i) {
      inertia += (points.row(i) - res.centroids.row(res.assignments[static_cast<std::size_t>(i)]))
                     .squaredNorm();
    }
    res.inertia = inertia;
    res.inertia_trace.push_back(inertia);
    res.iterations = iter + 1;

    if (!changed) break;
    if (std::isfinite(prev_inertia) &&
        std::abs(prev_inertia - inertia) <= tol * std::max(1.0, std::abs(prev_inertia))) {
      break;
    }
    prev_inertia = inertia;
  }
  return res;
}

}  // namespace nnstne
