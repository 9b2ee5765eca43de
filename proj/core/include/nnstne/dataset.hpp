#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <string>
#include <vector>

namespace nnstne {

/// A set of N univariate time series of equal length Q, with optional
/// integer class labels. Labels are only consumed by evaluation code and
/// by the auto shapelet-count rule; training itself never sees them.
struct TimeSeriesDataset {
  Eigen::MatrixXd values;   ///< N x Q, one series per row
  std::vector<int> labels;  ///< empty when the data is unlabeled

  int n_samples() const { return static_cast<int>(values.rows()); }
  int series_length() const { return static_cast<int>(values.cols()); }
  bool has_labels() const { return !labels.empty(); }
  /// Number of distinct labels; 0 when unlabeled.
  int n_classes() const;

  Eigen::VectorXd series(int i) const { return values.row(i); }
};

/// Per-series preprocessing applied before training/evaluation.
enum class Preprocess { none, zscore, minmax };

std::string to_string(Preprocess p);
Preprocess preprocess_from_string(const std::string& s);

/// Load a UCR-style text file: one series per line, `label v1 v2 ... vQ`,
/// delimiter-separated with the label first. Labels like "1.0" are coerced
/// to integers. delimiter == '\0' auto-detects comma vs tab from the first
/// line. Throws std::runtime_error on I/O failure, ragged rows, non-numeric
/// tokens, non-finite values or an empty file.
TimeSeriesDataset load_ucr(const std::filesystem::path& path, char delimiter = '\0');

/// Write a dataset back in the same format (used by round-trip tests and
/// the synthetic generators).
void save_ucr(const TimeSeriesDataset& data, const std::filesystem::path& path,
              char delimiter = ',');

/// Row-concatenate train and test splits. Series lengths must match; both
/// splits must be labeled or both unlabeled. An empty dataset (N == 0) acts
/// as the identity.
TimeSeriesDataset merge(const TimeSeriesDataset& train, const TimeSeriesDataset& test);

/// Zero-mean, unit population-variance rescaling. Inputs whose population
/// standard deviation falls below 1e-12 map to the all-zeros vector.
Eigen::VectorXd znormalize(const Eigen::VectorXd& series);

/// Affine map onto [0, 1]; constant input maps to all-zeros.
Eigen::VectorXd minmax_normalize(const Eigen::VectorXd& series);

/// Apply the chosen preprocessing to every series.
TimeSeriesDataset apply_preprocess(const TimeSeriesDataset& data, Preprocess mode);

/// All length-M sliding windows of every series. Windows are stored per
/// series as an M x J matrix (column j = values[i][j : j+M]) so that batch
/// similarity kernels can consume whole series as one block.
struct WindowSet {
  std::vector<Eigen::MatrixXd> per_series;  ///< N matrices, each M x J
  int window_length = 0;                    ///< M
  int windows_per_series = 0;               ///< J = Q - M + 1

  int n_series() const { return static_cast<int>(per_series.size()); }
  Eigen::VectorXd window(int i, int j) const { return per_series[i].col(j); }
};

/// Slice every series into its J = Q - M + 1 contiguous windows.
/// Requires 2 <= M <= Q.
WindowSet slide_windows(const TimeSeriesDataset& data, int window_length);

}  // namespace nnstne
