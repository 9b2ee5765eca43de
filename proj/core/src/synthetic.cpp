#include "nnstne/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace nnstne {

namespace {

inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  const int span = hi - lo + 1;
  return lo + std::min(span - 1, static_cast<int>(uniform01(rng) * span));
}

// Box-Muller, kept explicit so draws are identical across standard libraries.
inline double normal(std::mt19937_64& rng) {
  double u1 = uniform01(rng);
  while (u1 <= 0.0) u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace

TimeSeriesDataset make_cbf(int n_per_class, std::uint64_t seed) {
  if (n_per_class < 1) throw std::invalid_argument("make_cbf: n_per_class must be >= 1");
  constexpr int q = 128;
  std::mt19937_64 rng(seed);

  TimeSeriesDataset data;
  data.values.resize(3 * n_per_class, q);
  data.labels.reserve(3 * n_per_class);

  int row = 0;
  for (int cls = 0; cls < 3; ++cls) {
    for (int s = 0; s < n_per_class; ++s) {
      const int a = uniform_int(rng, 16, 32);
      const int b = a + uniform_int(rng, 32, 96);
      const double amplitude = 6.0 + normal(rng);
      Eigen::VectorXd v(q);
      for (int t = 1; t <= q; ++t) {
        double shape = 0.0;
        if (t >= a && t <= b) {
          switch (cls) {
            case 0: shape = 1.0; break;                                             // cylinder
            case 1: shape = static_cast<double>(t - a) / (b - a); break;            // bell
            case 2: shape = static_cast<double>(b - t) / (b - a); break;            // funnel
          }
        }
        v[t - 1] = amplitude * shape + normal(rng);
      }
      data.values.row(row) = v;
      data.labels.push_back(cls);
      ++row;
    }
  }
  return data;
}

}  // namespace nnstne
