#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

#include "gazeaudit/types.hpp"

namespace gazeaudit {

inline constexpr std::size_t kEmbeddingDim = 128;

// Block layout of the 128-dimensional descriptor (before L2 normalization):
//   [0,32)    speed histogram, log-spaced bins over [0.1, 1000] deg/s
//   [32,48)   movement-direction histogram over [-pi, pi]
//   [48,64)   spectral band energy fractions, horizontal channel
//   [64,80)   spectral band energy fractions, vertical channel
//   [80,112)  per-sample acceleration magnitude histogram, log bins [1, 1e6] deg/s^2
//   [112,128) speed quantiles at levels (2j+1)/32
inline constexpr std::size_t kSpeedHistOffset = 0;
inline constexpr std::size_t kSpeedHistBins = 32;
inline constexpr std::size_t kDirHistOffset = 32;
inline constexpr std::size_t kDirHistBins = 16;
inline constexpr std::size_t kSpectralHOffset = 48;
inline constexpr std::size_t kSpectralVOffset = 64;
inline constexpr std::size_t kSpectralBands = 16;
inline constexpr std::size_t kAccelHistOffset = 80;
inline constexpr std::size_t kAccelHistBins = 32;
inline constexpr std::size_t kQuantileOffset = 112;
inline constexpr std::size_t kQuantileCount = 16;

inline constexpr double kSpeedHistLoDps = 0.1;
inline constexpr double kSpeedHistHiDps = 1000.0;
inline constexpr double kBandLoHz = 0.2;
inline constexpr double kBandHiHz = 250.0;
inline constexpr double kAccelHistLo = 1.0;
inline constexpr double kAccelHistHi = 1e6;

struct UserEmbedding {
    std::array<double, kEmbeddingDim> v{};
};

// Forward intermediates kept for the vector-Jacobian product used by training.
// Histogram blocks are piecewise constant in the input, so only the spectral
// and quantile blocks carry gradient.
struct EncodeTape {
    std::size_t n = 0;
    std::vector<double> vx, vy, speeds, hann;
    std::vector<std::complex<double>> spec_h, spec_v;
    std::vector<int> band_of_bin;             // DFT bin -> band index or -1
    std::array<double, kSpectralBands> band_energy_h{}, band_energy_v{};
    double total_energy_h = 0.0, total_energy_v = 0.0;
    bool total_clamped_h = false, total_clamped_v = false;
    std::vector<std::size_t> speed_order;     // argsort of speeds, ascending
    std::array<double, kEmbeddingDim> u{};    // pre-normalization vector
    double u_norm = 0.0;
    bool degenerate = false;
    UserEmbedding z;
};

// Deterministic statistical descriptor of oculomotor style; unit norm for any
// input (the degenerate all-zero vector maps to e1).
UserEmbedding encode(const VelocitySignal& v);
UserEmbedding encode(const VelocitySignal& v, EncodeTape& tape);

// Given dL/dz (gradient w.r.t. the normalized embedding), returns dL/dv.
VelocitySignal encode_vjp(const EncodeTape& tape, const std::array<double, kEmbeddingDim>& dz);

// Dot product; inputs are unit-norm by construction.
double cosine_similarity(const UserEmbedding& a, const UserEmbedding& b);

}  // namespace gazeaudit
