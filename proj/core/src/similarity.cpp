#include "nnstne/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <thread>

#include "nnstne/fft.hpp"

namespace nnstne {

bool ShapeletBank::is_uniform() const {
  for (const auto& s : shapelets) {
    if (s.size() != nominal_length) return false;
  }
  return true;
}

Eigen::MatrixXd ShapeletBank::matrix() const {
  if (!is_uniform()) throw std::invalid_argument("ShapeletBank: ragged bank has no matrix view");
  Eigen::MatrixXd m(count(), nominal_length);
  for (int k = 0; k < count(); ++k) m.row(k) = shapelets[k];
  return m;
}

ShapeletBank ShapeletBank::from_matrix(const Eigen::MatrixXd& m) {
  ShapeletBank bank;
  bank.nominal_length = static_cast<int>(m.cols());
  bank.shapelets.reserve(m.rows());
  for (long k = 0; k < m.rows(); ++k) bank.shapelets.emplace_back(m.row(k));
  return bank;
}

Eigen::VectorXd cross_correlation_all_shifts(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  const long m = x.size();
  if (m != y.size()) throw std::invalid_argument("cross_correlation_all_shifts: length mismatch");
  if (m < 1) throw std::invalid_argument("cross_correlation_all_shifts: empty input");

  const std::size_t n = detail::next_pow2(static_cast<std::size_t>(2 * m - 1));
  std::vector<std::complex<double>> fx(n), fy(n);
  for (long i = 0; i < m; ++i) {
    fx[static_cast<std::size_t>(i)] = x[i];
    fy[static_cast<std::size_t>(i)] = y[i];
  }
  detail::fft(fx, false);
  detail::fft(fy, false);
  for (std::size_t i = 0; i < n; ++i) fx[i] *= std::conj(fy[i]);
  detail::fft(fx, true);

  // out[w + m - 1] = sum_m x[.]y[.-w]; negative shifts wrap to the tail bins
  Eigen::VectorXd out(2 * m - 1);
  for (long w = -(m - 1); w <= m - 1; ++w) {
    const std::size_t bin = static_cast<std::size_t>((w + static_cast<long>(n)) % static_cast<long>(n));
    out[w + m - 1] = fx[bin].real();
  }
  return out;
}

namespace {

// Tie rule shared by every argmax-over-shift scan: larger value wins,
// equal values resolve to the smaller |shift|, then to the negative shift.
inline bool better_shift(double val, int shift, double best_val, int best_shift) {
  if (val != best_val) return val > best_val;
  const int a = std::abs(shift);
  const int b = std::abs(best_shift);
  if (a != b) return a < b;
  return shift < best_shift;
}

}  // namespace

NccResult ncc(const Eigen::VectorXd& s, const Eigen::VectorXd& w) {
  if (s.size() != w.size()) throw std::invalid_argument("ncc: length mismatch");
  const Eigen::VectorXd zs = znormalize(s);
  const Eigen::VectorXd zw = znormalize(w);
  const double ns = zs.norm();
  const double nw = zw.norm();
  if (ns == 0.0 || nw == 0.0) return {0.0, 0};

  const Eigen::VectorXd cc = cross_correlation_all_shifts(zs, zw);
  const int m = static_cast<int>(s.size());
  double best = cc[0];
  int best_shift = -(m - 1);
  for (int w_idx = 1; w_idx < cc.size(); ++w_idx) {
    const int shift = w_idx - (m - 1);
    if (better_shift(cc[w_idx], shift, best, best_shift)) {
      best = cc[w_idx];
      best_shift = shift;
    }
  }
  return {std::clamp(best / (ns * nw), -1.0, 1.0), best_shift};
}

namespace detail {

double pop_std(const Eigen::VectorXd& v) {
  const double mean = v.mean();
  return std::sqrt((v.array() - mean).square().sum() / static_cast<double>(v.size()));
}

Eigen::VectorXd ncc_gradient_prepped(const Eigen::VectorXd& z, double sigma,
                                     const Eigen::Ref<const Eigen::VectorXd>& zwindow,
                                     double wnorm, int shift) {
  const long m = z.size();
  if (sigma < 1e-12 || wnorm == 0.0) return Eigen::VectorXd::Zero(m);

  // y = the window re-aligned to the winning shift, zero-padded:
  // NCC numerator at this shift is <z, y>.
  Eigen::VectorXd y = Eigen::VectorXd::Zero(m);
  for (long i = 0; i < m; ++i) {
    const long src = i - shift;
    if (src >= 0 && src < m) y[i] = zwindow[src];
  }

  const double nz = z.norm();
  if (nz == 0.0) return Eigen::VectorXd::Zero(m);
  const double c = z.dot(y);

  // d NCC / d z, then back through the z-normalization of s
  Eigen::VectorXd v = y / (nz * wnorm) - (c / (nz * nz * nz * wnorm)) * z;
  const double vmean = v.mean();
  const double vz = v.dot(z) / static_cast<double>(m);
  return (v.array() - vmean - z.array() * vz).matrix() / sigma;
}

}  // namespace detail

Eigen::VectorXd ncc_gradient_fixed_shift(const Eigen::VectorXd& s, const Eigen::VectorXd& w,
                                         int shift) {
  if (s.size() != w.size()) throw std::invalid_argument("ncc_gradient_fixed_shift: length mismatch");
  const double sigma = detail::pop_std(s);
  const Eigen::VectorXd z = znormalize(s);
  const Eigen::VectorXd zw = znormalize(w);
  return detail::ncc_gradient_prepped(z, sigma, zw, zw.norm(), shift);
}

NccEngine::NccEngine(const WindowSet& windows)
    : n_windows_(windows.windows_per_series), window_length_(windows.window_length) {
  const int n = windows.n_series();
  zw_.reserve(n);
  wnorm_.resize(n);
  for (int i = 0; i < n; ++i) {
    Eigen::MatrixXd z(window_length_, n_windows_);
    wnorm_[i].resize(n_windows_);
    for (int j = 0; j < n_windows_; ++j) {
      z.col(j) = znormalize(windows.per_series[i].col(j));
      wnorm_[i][j] = z.col(j).norm();
    }
    zw_.push_back(std::move(z));
  }
}

DistanceTensor NccEngine::distances(const ShapeletBank& bank, int threads) const {
  if (!bank.is_uniform() || bank.nominal_length != window_length_) {
    throw std::invalid_argument("distances: bank length does not match window length");
  }
  const int n = n_series();
  const int j_count = n_windows_;
  const int k_count = bank.count();
  if (k_count < 1) throw std::invalid_argument("distances: empty bank");
  const int m = window_length_;
  const int n_shifts = 2 * m - 1;

  // Shapelet-side preparation: z-normalize, then lay every shifted copy of
  // every shapelet out as rows so all correlations of one series are a
  // single matrix product.
  std::vector<double> snorm(k_count);
  Eigen::MatrixXd shifted = Eigen::MatrixXd::Zero(static_cast<long>(k_count) * n_shifts, m);
  for (int k = 0; k < k_count; ++k) {
    const Eigen::VectorXd z = znormalize(bank.shapelets[k]);
    snorm[k] = z.norm();
    for (int r = 0; r < n_shifts; ++r) {
      const int shift = r - (m - 1);
      for (int u = 0; u < m; ++u) {
        const int src = u + shift;
        if (src >= 0 && src < m) shifted(static_cast<long>(k) * n_shifts + r, u) = z[src];
      }
    }
  }

  DistanceTensor out;
  out.n_series = n;
  out.n_windows = j_count;
  out.n_shapelets = k_count;
  out.d.resize(static_cast<std::size_t>(n) * j_count * k_count);
  out.shift.resize(out.d.size());

  auto run = [&](int begin, int end) {
    Eigen::MatrixXd cc(static_cast<long>(k_count) * n_shifts, j_count);
    for (int i = begin; i < end; ++i) {
      cc.noalias() = shifted * zw_[i];
      for (int k = 0; k < k_count; ++k) {
        const long row0 = static_cast<long>(k) * n_shifts;
        double* dst_d = &out.d[out.index(i, 0, k)];
        std::int32_t* dst_s = &out.shift[out.index(i, 0, k)];
        for (int j = 0; j < j_count; ++j) {
          const double wn = wnorm_[i][j];
          if (snorm[k] == 0.0 || wn == 0.0) {
            dst_d[j] = 1.0;
            dst_s[j] = 0;
            continue;
          }
          double best = cc(row0, j);
          int best_shift = -(m - 1);
          for (int r = 1; r < n_shifts; ++r) {
            const double val = cc(row0 + r, j);
            const int shift = r - (m - 1);
            if (better_shift(val, shift, best, best_shift)) {
              best = val;
              best_shift = shift;
            }
          }
          const double v = std::clamp(best / (snorm[k] * wn), -1.0, 1.0);
          dst_d[j] = 1.0 - v;
          dst_s[j] = best_shift;
        }
      }
    }
  };

  threads = std::max(1, std::min(threads, n));
  if (threads == 1) {
    run(0, n);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    const int chunk = (n + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      const int begin = t * chunk;
      const int end = std::min(n, begin + chunk);
      if (begin < end) pool.emplace_back(run, begin, end);
    }
    for (auto& th : pool) th.join();
  }
  return out;
}

DistanceTensor distance_tensor(const ShapeletBank& bank, const WindowSet& windows, int threads) {
  return NccEngine(windows).distances(bank, threads);
}

FeatureMatrix min_pool(const DistanceTensor& d) {
  if (d.n_series < 1 || d.n_windows < 1 || d.n_shapelets < 1) {
    throw std::invalid_argument("min_pool: empty tensor");
  }
  FeatureMatrix fm;
  fm.f.resize(d.n_series, d.n_shapelets);
  fm.argmin_window.resize(d.n_series, d.n_shapelets);
  for (int i = 0; i < d.n_series; ++i) {
    for (int k = 0; k < d.n_shapelets; ++k) {
      const double* col = &d.d[d.index(i, 0, k)];
      double best = col[0];
      int best_j = 0;
      for (int j = 1; j < d.n_windows; ++j) {
        if (col[j] < best) {
          best = col[j];
          best_j = j;
        }
      }
      fm.f(i, k) = best;
      fm.argmin_window(i, k) = best_j;
    }
  }
  return fm;
}

}  // namespace nnstne
