#pragma once

#include <cstdint>

#include "nnstne/dataset.hpp"

namespace nnstne {

/// Sample the classic Cylinder-Bell-Funnel generative model: Q = 128,
/// three classes, event start a ~ U{16..32}, width b-a ~ U{32..96},
/// amplitude 6 + N(0,1), additive N(0,1) noise. Series are emitted exactly
/// as the model produces them (no per-series normalization). Labels are
/// 0 = cylinder, 1 = bell, 2 = funnel. Deterministic for a fixed seed.
TimeSeriesDataset make_cbf(int n_per_class, std::uint64_t seed);

}  // namespace nnstne
