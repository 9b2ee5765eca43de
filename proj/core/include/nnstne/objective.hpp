#pragma once

#include <Eigen/Dense>

#include "nnstne/dataset.hpp"
#include "nnstne/similarity.hpp"

namespace nnstne {

/// Gaussian similarity graph over the input series together with its
/// unnormalized Laplacian L_G = D_G - G. Computed once on the preprocessed
/// series and frozen for a whole training run.
struct AffinityGraph {
  Eigen::MatrixXd g;          ///< N x N, symmetric, unit diagonal
  Eigen::MatrixXd laplacian;  ///< D_G - G, PSD with zero row sums
  double sigma_sq = 1.0;

  int size() const { return static_cast<int>(g.rows()); }
};

/// G(i,j) = exp(-||t_i - t_j||^2 / sigma_sq). Requires N >= 2, sigma_sq > 0
/// and finite inputs.
AffinityGraph gaussian_affinity(const TimeSeriesDataset& data, double sigma_sq);

/// Median of the pairwise squared distances, the default kernel variance.
/// Falls back to the smallest positive pairwise distance (or 1 when every
/// pair coincides).
double median_sigma(const TimeSeriesDataset& data);

/// Same median heuristic over pairwise shapelet distances, used to fix the
/// diversity-kernel variance at initialization.
double median_shapelet_sigma(const ShapeletBank& bank);

/// tr(q^T L_G q); the production route for the spectral penalty.
double spectral_term(const Eigen::MatrixXd& q, const AffinityGraph& graph);

/// 1/2 sum_ij G(i,j) ||q_i - q_j||^2; algebraically equal to the trace form
/// and kept as the independent oracle route.
double spectral_term_pairwise(const Eigen::MatrixXd& q, const AffinityGraph& graph);

/// ||H||_F^2 with H(a,b) = exp(-||s_a - s_b||^2 / sigma_shapelet_sq),
/// diagonal included. Requires a uniform bank.
double diversity_term(const ShapeletBank& bank, double sigma_shapelet_sq);

/// Sum of |s| over every shapelet entry.
double l1_term(const ShapeletBank& bank);

/// One evaluation of the total objective, split into its components.
/// total = spectral + lambda * diversity + beta * l1.
struct LossBreakdown {
  double spectral = 0.0;
  double diversity = 0.0;
  double l1 = 0.0;
  double total = 0.0;
  double lambda = 0.0;
  double beta = 0.0;
  double sigma_shapelet_sq = 1.0;
};

LossBreakdown total_loss(const ShapeletBank& bank, const WindowSet& windows,
                         const AffinityGraph& graph, double alpha, double lambda, double beta,
                         double sigma_shapelet_sq, int threads = 1);

/// Analytic gradient of total_loss w.r.t. every shapelet entry. The
/// min-pool argmin and the NCC argmax shift are recomputed in the forward
/// pass and held fixed during differentiation; the L1 subgradient uses
/// sign(0) = 0.
Eigen::MatrixXd loss_gradient(const ShapeletBank& bank, const WindowSet& windows,
                              const AffinityGraph& graph, double alpha, double lambda, double beta,
                              double sigma_shapelet_sq, int threads = 1);

/// Engine-reusing variants for the training loop (one forward pass serves
/// both the loss and the gradient).
struct LossWithGradient {
  LossBreakdown loss;
  Eigen::MatrixXd gradient;  ///< K x M
};

LossBreakdown total_loss(const ShapeletBank& bank, const NccEngine& engine,
                         const AffinityGraph& graph, double alpha, double lambda, double beta,
                         double sigma_shapelet_sq, int threads = 1);

LossWithGradient loss_with_gradient(const ShapeletBank& bank, const NccEngine& engine,
                                    const AffinityGraph& graph, double alpha, double lambda,
                                    double beta, double sigma_shapelet_sq, int threads = 1);

}  // namespace nnstne
