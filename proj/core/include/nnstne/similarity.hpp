#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "nnstne/dataset.hpp"

namespace nnstne {

/// The learnable parameters: K sub-sequences of nominal length M. After
/// length trimming the rows may be ragged; the ops that require a uniform
/// bank (training, distance_tensor) check is_uniform().
struct ShapeletBank {
  std::vector<Eigen::VectorXd> shapelets;
  int nominal_length = 0;

  int count() const { return static_cast<int>(shapelets.size()); }
  bool is_uniform() const;
  /// K x M view of a uniform bank; throws std::invalid_argument if ragged.
  Eigen::MatrixXd matrix() const;
  static ShapeletBank from_matrix(const Eigen::MatrixXd& m);
};

/// Zero-padded linear cross-correlation of two equal-length vectors for
/// every shift w in [-(M-1), M-1]:
///   out[w + M - 1] = sum_m x[m] * y[m - w]   (valid-overlap terms only)
/// Computed with an FFT whose length is the smallest power of two >= 2M-1.
Eigen::VectorXd cross_correlation_all_shifts(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

struct NccResult {
  double value = 0.0;  ///< in [-1, 1]
  int shift = 0;       ///< the maximizing shift w*
};

/// Shift-maximized normalized cross-correlation: both inputs are
/// z-normalized, the cross-correlation maximum is divided by the product of
/// the z-normalized norms. Constant (zero-variance) input on either side
/// yields 0. Equal-correlation ties resolve to the smallest |w|, negative
/// first.
NccResult ncc(const Eigen::VectorXd& s, const Eigen::VectorXd& w);

/// Gradient of ncc(s, w).value with respect to s, holding the alignment
/// shift fixed (the pooling subgradient convention). Zero vector when either
/// side is constant.
Eigen::VectorXd ncc_gradient_fixed_shift(const Eigen::VectorXd& s, const Eigen::VectorXd& w,
                                         int shift);

/// D(i,j,k) = 1 - NCC(s_k, window(i,j)) together with the maximizing shift
/// per entry. Entries lie in [0, 2]. Layout groups the window axis
/// innermost per (series, shapelet) pair.
struct DistanceTensor {
  int n_series = 0;
  int n_windows = 0;
  int n_shapelets = 0;
  std::vector<double> d;
  std::vector<std::int32_t> shift;

  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * n_shapelets + k) * n_windows + j;
  }
  double value(int i, int j, int k) const { return d[index(i, j, k)]; }
  std::int32_t argmax_shift(int i, int j, int k) const { return shift[index(i, j, k)]; }
};

/// N x K min-pooled distances: f(i,k) = min_j D(i,j,k), ties to the
/// smallest j, with the minimizing window recorded.
struct FeatureMatrix {
  Eigen::MatrixXd f;
  Eigen::MatrixXi argmin_window;
};

/// Precomputes the z-normalized windows and their norms once so that
/// repeated distance evaluations against changing banks only pay for the
/// shapelet side. The batch kernel is a per-series matrix product over all
/// shifts, numerically interchangeable with the FFT path (<= 1e-9).
class NccEngine {
 public:
  explicit NccEngine(const WindowSet& windows);

  int n_series() const { return static_cast<int>(zw_.size()); }
  int n_windows() const { return n_windows_; }
  int window_length() const { return window_length_; }

  /// Full distance tensor for a uniform bank with matching length.
  /// Series are partitioned across `threads`; every thread writes disjoint
  /// output slices, so the result is identical for any thread count.
  DistanceTensor distances(const ShapeletBank& bank, int threads = 1) const;

  /// z-normalized windows of series i, one column per window.
  const Eigen::MatrixXd& zwindows(int i) const { return zw_[i]; }
  /// ||w^z|| of window (i,j); 0 marks a constant window.
  double window_norm(int i, int j) const { return wnorm_[i][j]; }

 private:
  std::vector<Eigen::MatrixXd> zw_;
  std::vector<std::vector<double>> wnorm_;
  int n_windows_ = 0;
  int window_length_ = 0;
};

DistanceTensor distance_tensor(const ShapeletBank& bank, const WindowSet& windows,
                               int threads = 1);

FeatureMatrix min_pool(const DistanceTensor& d);

namespace detail {

/// Population standard deviation (1/L variance).
double pop_std(const Eigen::VectorXd& v);

/// NCC gradient with all shapelet-side quantities precomputed:
/// z = z-normalized shapelet, sigma = its population std, zw column = the
/// z-normalized window, wnorm = its norm. Returns d NCC / d s (raw s).
Eigen::VectorXd ncc_gradient_prepped(const Eigen::VectorXd& z, double sigma,
                                     const Eigen::Ref<const Eigen::VectorXd>& zwindow,
                                     double wnorm, int shift);

}  // namespace detail

}  // namespace nnstne
