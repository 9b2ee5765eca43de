#include "nnstne/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace nnstne {

int TimeSeriesDataset::n_classes() const {
  if (labels.empty()) return 0;
  std::set<int> distinct(labels.begin(), labels.end());
  return static_cast<int>(distinct.size());
}

std::string to_string(Preprocess p) {
  switch (p) {
    case Preprocess::none: return "none";
    case Preprocess::zscore: return "zscore";
    case Preprocess::minmax: return "minmax";
  }
  return "none";
}

Preprocess preprocess_from_string(const std::string& s) {
  if (s == "none") return Preprocess::none;
  if (s == "zscore") return Preprocess::zscore;
  if (s == "minmax") return Preprocess::minmax;
  throw std::invalid_argument("unknown preprocess mode: " + s + " (expected none|zscore|minmax)");
}

namespace {

double parse_token(const std::string& tok, const std::filesystem::path& path, int line_no) {
  const char* begin = tok.data();
  const char* end = begin + tok.size();
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end) {
    throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                             ": non-numeric token '" + tok + "'");
  }
  if (!std::isfinite(v)) {
    throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                             ": non-finite value '" + tok + "'");
  }
  return v;
}

int label_from_value(double v, const std::filesystem::path& path, int line_no) {
  // UCR files store labels as floats ("1.0"); require them to be integral.
  double rounded = std::nearbyint(v);
  if (std::abs(v - rounded) > 1e-9) {
    throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                             ": label is not an integer");
  }
  return static_cast<int>(rounded);
}

void split_line(const std::string& line, char delimiter, std::vector<std::string>& out) {
  out.clear();
  std::string tok;
  std::stringstream ss(line);
  while (std::getline(ss, tok, delimiter)) {
    // trim surrounding whitespace so "1, 2" and "1,2" parse the same
    size_t b = tok.find_first_not_of(" \t\r");
    size_t e = tok.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string() : tok.substr(b, e - b + 1));
  }
  if (!out.empty() && out.back().empty()) out.pop_back();
}

}  // namespace

TimeSeriesDataset load_ucr(const std::filesystem::path& path, char delimiter) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());

  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  std::string line;
  std::vector<std::string> toks;
  int line_no = 0;
  long q = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    if (delimiter == '\0') delimiter = line.find('\t') != std::string::npos ? '\t' : ',';
    split_line(line, delimiter, toks);
    if (toks.size() < 2) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": expected `label" + std::string(1, delimiter) + "v1" +
                               std::string(1, delimiter) + "...`");
    }
    labels.push_back(label_from_value(parse_token(toks[0], path, line_no), path, line_no));
    std::vector<double> row;
    row.reserve(toks.size() - 1);
    for (size_t t = 1; t < toks.size(); ++t) row.push_back(parse_token(toks[t], path, line_no));
    if (q < 0) {
      q = static_cast<long>(row.size());
    } else if (static_cast<long>(row.size()) != q) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": ragged row, expected " + std::to_string(q) + " values, got " +
                               std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error(path.string() + ": empty file");
  if (q < 2) throw std::runtime_error(path.string() + ": series length must be >= 2");

  TimeSeriesDataset data;
  data.values.resize(static_cast<long>(rows.size()), q);
  for (size_t i = 0; i < rows.size(); ++i) {
    for (long v = 0; v < q; ++v) data.values(static_cast<long>(i), v) = rows[i][v];
  }
  data.labels = std::move(labels);
  return data;
}

void save_ucr(const TimeSeriesDataset& data, const std::filesystem::path& path, char delimiter) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.precision(17);
  for (int i = 0; i < data.n_samples(); ++i) {
    out << (data.has_labels() ? data.labels[i] : 0);
    for (int v = 0; v < data.series_length(); ++v) out << delimiter << data.values(i, v);
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

TimeSeriesDataset merge(const TimeSeriesDataset& train, const TimeSeriesDataset& test) {
  if (train.n_samples() == 0) return test;
  if (test.n_samples() == 0) return train;
  if (train.series_length() != test.series_length()) {
    throw std::runtime_error("cannot merge: series lengths differ (" +
                             std::to_string(train.series_length()) + " vs " +
                             std::to_string(test.series_length()) + ")");
  }
  if (train.has_labels() != test.has_labels()) {
    throw std::runtime_error("cannot merge: one split is labeled, the other is not");
  }
  TimeSeriesDataset out;
  out.values.resize(train.n_samples() + test.n_samples(), train.series_length());
  out.values.topRows(train.n_samples()) = train.values;
  out.values.bottomRows(test.n_samples()) = test.values;
  out.labels = train.labels;
  out.labels.insert(out.labels.end(), test.labels.begin(), test.labels.end());
  return out;
}

Eigen::VectorXd znormalize(const Eigen::VectorXd& series) {
  const auto n = series.size();
  if (n < 1) throw std::invalid_argument("znormalize: empty series");
  const double mean = series.mean();
  const double var = (series.array() - mean).square().sum() / static_cast<double>(n);
  const double sd = std::sqrt(var);
  if (sd < 1e-12) return Eigen::VectorXd::Zero(n);
  return (series.array() - mean) / sd;
}

Eigen::VectorXd minmax_normalize(const Eigen::VectorXd& series) {
  if (series.size() < 1) throw std::invalid_argument("minmax_normalize: empty series");
  const double lo = series.minCoeff();
  const double hi = series.maxCoeff();
  if (hi - lo < 1e-12) return Eigen::VectorXd::Zero(series.size());
  return (series.array() - lo) / (hi - lo);
}

TimeSeriesDataset apply_preprocess(const TimeSeriesDataset& data, Preprocess mode) {
  if (mode == Preprocess::none) return data;
  TimeSeriesDataset out = data;
  for (int i = 0; i < data.n_samples(); ++i) {
    Eigen::VectorXd row = data.values.row(i);
    out.values.row(i) = (mode == Preprocess::zscore) ? znormalize(row) : minmax_normalize(row);
  }
  return out;
}

WindowSet slide_windows(const TimeSeriesDataset& data, int window_length) {
  const int q = data.series_length();
  if (window_length < 2 || window_length > q) {
    throw std::invalid_argument("slide_windows: window length " + std::to_string(window_length) +
                                " out of range [2, " + std::to_string(q) + "]");
  }
  WindowSet ws;
  ws.window_length = window_length;
  ws.windows_per_series = q - window_length + 1;
  ws.per_series.reserve(data.n_samples());
  for (int i = 0; i < data.n_samples(); ++i) {
    Eigen::MatrixXd w(window_length, ws.windows_per_series);
    for (int j = 0; j < ws.windows_per_series; ++j) {
      w.col(j) = data.values.row(i).segment(j, window_length);
    }
    ws.per_series.push_back(std::move(w));
  }
  return ws;
}

}  // namespace nnstne
