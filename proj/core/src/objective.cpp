#include "nnstne/objective.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "nnstne/embedding.hpp"

namespace nnstne {

namespace {

// Median at index n/2 of the sorted values; degenerate (<= 0) medians fall
// back to the smallest positive value, then to 1.
double median_or_fallback(std::vector<double>& vals) {
  if (vals.empty()) return 1.0;
  const std::size_t mid = vals.size() / 2;
  std::nth_element(vals.begin(), vals.begin() + mid, vals.end());
  double med = vals[mid];
  if (med > 0.0) return med;
  double smallest_pos = 0.0;
  for (double v : vals) {
    if (v > 0.0 && (smallest_pos == 0.0 || v < smallest_pos)) smallest_pos = v;
  }
  return smallest_pos > 0.0 ? smallest_pos : 1.0;
}

inline double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

Eigen::MatrixXd diversity_gradient(const ShapeletBank& bank, double sigma_shapelet_sq) {
  const int k_count = bank.count();
  const int m = bank.nominal_length;
  Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(k_count, m);
  // d/ds_a sum_{ab} H_ab^2 with H_ab = exp(-||s_a - s_b||^2 / sigma^2)
  for (int a = 0; a < k_count; ++a) {
    for (int b = 0; b < k_count; ++b) {
      if (a == b) continue;
      const Eigen::VectorXd diff = bank.shapelets[a] - bank.shapelets[b];
      const double e = std::exp(-2.0 * diff.squaredNorm() / sigma_shapelet_sq);
      grad.row(a) -= (8.0 / sigma_shapelet_sq) * e * diff;
    }
  }
  return grad;
}

}  // namespace

double median_sigma(const TimeSeriesDataset& data) {
  const int n = data.n_samples();
  if (n < 2) throw std::invalid_argument("median_sigma: need at least two samples");
  std::vector<double> d2;
  d2.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      d2.push_back((data.values.row(i) - data.values.row(j)).squaredNorm());
    }
  }
  return median_or_fallback(d2);
}

double median_shapelet_sigma(const ShapeletBank& bank) {
  std::vector<double> d2;
  for (int a = 0; a < bank.count(); ++a) {
    for (int b = a + 1; b < bank.count(); ++b) {
      d2.push_back((bank.shapelets[a] - bank.shapelets[b]).squaredNorm());
    }
  }
  return median_or_fallback(d2);
}

AffinityGraph gaussian_affinity(const TimeSeriesDataset& data, double sigma_sq) {
  const int n = data.n_samples();
  if (n < 2) throw std::invalid_argument("gaussian_affinity: need at least two samples");
  if (!(sigma_sq > 0.0)) throw std::invalid_argument("gaussian_affinity: sigma_sq must be positive");
  if (!data.values.allFinite()) throw std::invalid_argument("gaussian_affinity: non-finite input");

  AffinityGraph graph;
  graph.sigma_sq = sigma_sq;
  graph.g.resize(n, n);
  for (int i = 0; i < n; ++i) {
    graph.g(i, i) = 1.0;
    for (int j = i + 1; j < n; ++j) {
      const double d2 = (data.values.row(i) - data.values.row(j)).squaredNorm();
      const double v = std::exp(-d2 / sigma_sq);
      graph.g(i, j) = v;
      graph.g(j, i) = v;
    }
  }
  graph.laplacian = Eigen::MatrixXd(graph.g.rowwise().sum().asDiagonal()) - graph.g;
  return graph;
}

double spectral_term(const Eigen::MatrixXd& q, const AffinityGraph& graph) {
  if (q.rows() != graph.g.rows()) throw std::invalid_argument("spectral_term: dimension mismatch");
  return q.cwiseProduct(graph.laplacian * q).sum();
}

double spectral_term_pairwise(const Eigen::MatrixXd& q, const AffinityGraph& graph) {
  if (q.rows() != graph.g.rows()) throw std::invalid_argument("spectral_term: dimension mismatch");
  double acc = 0.0;
  for (long i = 0; i < q.rows(); ++i) {
    for (long j = 0; j < q.rows(); ++j) {
      acc += graph.g(i, j) * (q.row(i) - q.row(j)).squaredNorm();
    }
  }
  return 0.5 * acc;
}

double diversity_term(const ShapeletBank& bank, double sigma_shapelet_sq) {
  if (!bank.is_uniform()) throw std::invalid_argument("diversity_term: ragged bank");
  if (!(sigma_shapelet_sq > 0.0)) throw std::invalid_argument("diversity_term: sigma must be positive");
  double acc = 0.0;
  for (int a = 0; a < bank.count(); ++a) {
    for (int b = 0; b < bank.count(); ++b) {
      const double d2 = (bank.shapelets[a] - bank.shapelets[b]).squaredNorm();
      const double h = std::exp(-d2 / sigma_shapelet_sq);
      acc += h * h;
    }
  }
  return acc;
}

double l1_term(const ShapeletBank& bank) {
  double acc = 0.0;
  for (const auto& s : bank.shapelets) acc += s.cwiseAbs().sum();
  return acc;
}

namespace {

LossBreakdown assemble_breakdown(double spectral, double diversity, double l1, double lambda,
                                 double beta, double sigma_shapelet_sq) {
  LossBreakdown b;
  b.spectral = spectral;
  b.diversity = diversity;
  b.l1 = l1;
  b.lambda = lambda;
  b.beta = beta;
  b.sigma_shapelet_sq = sigma_shapelet_sq;
  b.total = spectral + lambda * diversity + beta * l1;
  return b;
}

}  // namespace

LossBreakdown total_loss(const ShapeletBank& bank, const NccEngine& engine,
                         const AffinityGraph& graph, double alpha, double lambda, double beta,
                         double sigma_shapelet_sq, int threads) {
  if (graph.size() != engine.n_series()) throw std::invalid_argument("total_loss: graph size mismatch");
  const DistanceTensor d = engine.distances(bank, threads);
  const FeatureMatrix fm = min_pool(d);
  const MembershipMatrix q = t_membership(fm.f, alpha);
  return assemble_breakdown(spectral_term(q.q, graph), diversity_term(bank, sigma_shapelet_sq),
                            l1_term(bank), lambda, beta, sigma_shapelet_sq);
}

LossWithGradient loss_with_gradient(const ShapeletBank& bank, const NccEngine& engine,
                                    const AffinityGraph& graph, double alpha, double lambda,
                                    double beta, double sigma_shapelet_sq, int threads) {
  if (graph.size() != engine.n_series()) {
    throw std::invalid_argument("loss_with_gradient: graph size mismatch");
  }
  const int n = engine.n_series();
  const int k_count = bank.count();
  const int m = bank.nominal_length;

  const DistanceTensor d = engine.distances(bank, threads);
  const FeatureMatrix fm = min_pool(d);

  // Membership forward pass, keeping the kernel values and their
  // derivatives for the backward pass.
  Eigen::MatrixXd u(n, k_count), uprime(n, k_count);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < k_count; ++k) {
      u(i, k) = detail::t_kernel(fm.f(i, k), alpha);
      uprime(i, k) = detail::t_kernel_derivative(fm.f(i, k), alpha);
    }
  }
  const Eigen::VectorXd row_sum = u.rowwise().sum();
  const Eigen::MatrixXd q = u.array().colwise() / row_sum.array();

  const Eigen::MatrixXd lq = graph.laplacian * q;
  const double spectral = q.cwiseProduct(lq).sum();
  const Eigen::MatrixXd gq = 2.0 * lq;

  // d spectral / d F through the row normalization of q
  const Eigen::VectorXd row_dot = (q.cwiseProduct(gq)).rowwise().sum();
  Eigen::MatrixXd gf(n, k_count);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < k_count; ++k) {
      gf(i, k) = uprime(i, k) * (gq(i, k) - row_dot(i)) / row_sum(i);
    }
  }

  // Regularizer gradients
  Eigen::MatrixXd grad = lambda * diversity_gradient(bank, sigma_shapelet_sq);
  for (int k = 0; k < k_count; ++k) {
    for (int l = 0; l < m; ++l) grad(k, l) += beta * sign(bank.shapelets[k][l]);
  }

  // Similarity-path gradient: F(i,k) = 1 - NCC at the winning window and
  // shift, both held fixed.
  std::vector<Eigen::VectorXd> z(k_count);
  std::vector<double> sigma(k_count);
  for (int k = 0; k < k_count; ++k) {
    z[k] = znormalize(bank.shapelets[k]);
    sigma[k] = detail::pop_std(bank.shapelets[k]);
  }
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < k_count; ++k) {
      const double w = gf(i, k);
      if (w == 0.0) continue;
      const int j_star = fm.argmin_window(i, k);
      const int shift = d.argmax_shift(i, j_star, k);
      grad.row(k) -= w * detail::ncc_gradient_prepped(z[k], sigma[k], engine.zwindows(i).col(j_star),
                                                      engine.window_norm(i, j_star), shift);
    }
  }

  LossWithGradient out;
  out.loss = assemble_breakdown(spectral, diversity_term(bank, sigma_shapelet_sq), l1_term(bank),
                                lambda, beta, sigma_shapelet_sq);
  out.gradient = std::move(grad);
  return out;
}

LossBreakdown total_loss(const ShapeletBank& bank, const WindowSet& windows,
                         const AffinityGraph& graph, double alpha, double lambda, double beta,
                         double sigma_shapelet_sq, int threads) {
  return total_loss(bank, NccEngine(windows), graph, alpha, lambda, beta, sigma_shapelet_sq,
                    threads);
}

Eigen::MatrixXd loss_gradient(const ShapeletBank& bank, const WindowSet& windows,
                              const AffinityGraph& graph, double alpha, double lambda, double beta,
                              double sigma_shapelet_sq, int threads) {
  return loss_with_gradient(bank, NccEngine(windows), graph, alpha, lambda, beta, sigma_shapelet_sq,
                            threads)
      .gradient;
}

}  // namespace nnstne
