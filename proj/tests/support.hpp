// Shared helpers for the test suites: deterministic random data, toy
// datasets, temp files, and process spawning.
#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "nnstne/dataset.hpp"

namespace testsup {

inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double normal(std::mt19937_64& rng) {
  double u1 = uniform01(rng);
  while (u1 <= 0.0) u1 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * uniform01(rng));
}

inline Eigen::VectorXd random_vector(std::mt19937_64& rng, int n) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = normal(rng);
  return v;
}

inline nnstne::TimeSeriesDataset random_dataset(std::mt19937_64& rng, int n, int q,
                                                int n_classes = 2) {
  nnstne::TimeSeriesDataset d;
  d.values.resize(n, q);
  for (int i = 0; i < n; ++i) d.values.row(i) = random_vector(rng, q);
  d.labels.resize(n);
  for (int i = 0; i < n; ++i) d.labels[i] = i % n_classes;
  return d;
}

/// Two-class toy instance: noisy sinusoids whose frequency differs by
/// class. Small enough for gradient-validated training runs.
inline nnstne::TimeSeriesDataset sinusoid_pair(int n_per_class, int q, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  nnstne::TimeSeriesDataset d;
  d.values.resize(2 * n_per_class, q);
  d.labels.resize(2 * n_per_class);
  for (int i = 0; i < 2 * n_per_class; ++i) {
    const int cls = i < n_per_class ? 0 : 1;
    const double freq = cls == 0 ? 1.0 : 3.0;
    const double phase = uniform01(rng) * 2.0 * std::numbers::pi;
    for (int t = 0; t < q; ++t) {
      d.values(i, t) =
          std::sin(2.0 * std::numbers::pi * freq * t / q + phase) + 0.05 * normal(rng);
    }
    d.labels[i] = cls;
  }
  return d;
}

class TempDir {
 public:
  TempDir() {
    auto base = std::filesystem::temp_directory_path();
    std::mt19937_64 rng(std::random_device{}());
    dir_ = base / ("nnstne_test_" + std::to_string(rng()));
    std::filesystem::create_directories(dir_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(dir_, ec);
  }
  std::filesystem::path path(const std::string& name) const { return dir_ / name; }

 private:
  std::filesystem::path dir_;
};

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct CommandResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr
};

inline CommandResult run_command(const std::string& cmd) {
  CommandResult res;
  FILE* pipe = popen((cmd + " 2>&1").c_str(), "r");
  if (!pipe) return res;
  std::array<char, 4096> buf{};
  while (fgets(buf.data(), buf.size(), pipe)) res.output += buf.data();
  const int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

}  // namespace testsup
