#include "gazeaudit/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gazeaudit/error.hpp"
#include "gazeaudit/fft.hpp"

namespace gazeaudit {

namespace {

constexpr double kTinyEnergy = 1e-30;
constexpr double kTinySpeed = 1e-12;
constexpr double kDegenerateNorm = 1e-12;

std::size_t log_bin(double value, double lo, double hi, std::size_t bins) {
    if (!(value > lo)) return 0;
    if (value >= hi) return bins - 1;
    const double t = std::log(value / lo) / std::log(hi / lo);
    const auto b = static_cast<long>(std::floor(t * static_cast<double>(bins)));
    return static_cast<std::size_t>(std::clamp<long>(b, 0, static_cast<long>(bins) - 1));
}

std::vector<double> hann_window(std::size_t n) {
    std::vector<double> w(n, 1.0);
    if (n < 2) return w;
    for (std::size_t i = 0; i < n; ++i)
        w[i] = 0.5 * (1.0 - std::cos(2.0 * M_PI * static_cast<double>(i) / static_cast<double>(n - 1)));
    return w;
}

// Band index for a DFT bin frequency; -1 when outside [kBandLoHz, kBandHiHz).
int band_index(double f_hz) {
    if (!(f_hz >= kBandLoHz) || f_hz >= kBandHiHz) return -1;
    const double t = std::log(f_hz / kBandLoHz) / std::log(kBandHiHz / kBandLoHz);
    const auto b = static_cast<long>(std::floor(t * static_cast<double>(kSpectralBands)));
    return static_cast<int>(std::clamp<long>(b, 0, static_cast<long>(kSpectralBands) - 1));
}

struct QuantilePick {
    std::size_t lo;
    std::size_t hi;
    double frac;
};

QuantilePick quantile_pick(std::size_t n, std::size_t j) {
    const double p = (2.0 * static_cast<double>(j) + 1.0) / (2.0 * static_cast<double>(kQuantileCount));
    if (n == 1) return {0, 0, 0.0};
    const double h = p * static_cast<double>(n - 1);
    const std::size_t lo = static_cast<std::size_t>(h);
    const std::size_t hi = std::min(lo + 1, n - 1);
    return {lo, hi, h - static_cast<double>(lo)};
}

void spectral_block(const std::vector<double>& chan, const std::vector<double>& hann,
                    const std::vector<int>& band_of_bin, std::vector<std::complex<double>>& spec_out,
                    std::array<double, kSpectralBands>& band_energy, double& total, bool& clamped,
                    double* u_block) {
    const std::size_t n = chan.size();
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = chan[i] * hann[i];
    spec_out = rdft(w);
    band_energy.fill(0.0);
    total = 0.0;
    for (std::size_t k = 1; k < spec_out.size(); ++k) {
        const double p = std::norm(spec_out[k]);
        total += p;
        const int b = band_of_bin[k];
        if (b >= 0) band_energy[static_cast<std::size_t>(b)] += p;
    }
    clamped = !(total > kTinyEnergy);
    const double denom = clamped ? kTinyEnergy : total;
    for (std::size_t b = 0; b < kSpectralBands; ++b) u_block[b] = band_energy[b] / denom;
}

}  // namespace

UserEmbedding encode(const VelocitySignal& v, EncodeTape& tape) {
    if (!v.all_finite()) throw NumericError("encode: non-finite velocity input");
    const std::size_t n = v.length();
    if (n == 0) throw NumericError("encode: empty velocity signal");

    tape = EncodeTape{};
    tape.n = n;
    tape.vx = v.h;
    tape.vy = v.v;
    tape.speeds.resize(n);
    for (std::size_t i = 0; i < n; ++i) tape.speeds[i] = std::hypot(v.h[i], v.v[i]);
    tape.hann = hann_window(n);

    auto& u = tape.u;
    u.fill(0.0);

    // Speed and direction histograms.
    const double wt = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        u[kSpeedHistOffset + log_bin(tape.speeds[i], kSpeedHistLoDps, kSpeedHistHiDps, kSpeedHistBins)] += wt;
        if (tape.speeds[i] > kTinySpeed) {
            const double theta = std::atan2(v.v[i], v.h[i]);
            const double f = (theta + M_PI) / (2.0 * M_PI);
            const auto b = std::min<std::size_t>(kDirHistBins - 1,
                                                 static_cast<std::size_t>(f * kDirHistBins));
            u[kDirHistOffset + b] += wt;
        }
    }

    // Spectral band fractions per channel.
    const std::size_t half = n / 2 + 1;
    tape.band_of_bin.assign(half, -1);
    for (std::size_t k = 1; k < half; ++k)
        tape.band_of_bin[k] = band_index(static_cast<double>(k) * kSampleRateHz / static_cast<double>(n));
    spectral_block(v.h, tape.hann, tape.band_of_bin, tape.spec_h, tape.band_energy_h,
                   tape.total_energy_h, tape.total_clamped_h, &u[kSpectralHOffset]);
    spectral_block(v.v, tape.hann, tape.band_of_bin, tape.spec_v, tape.band_energy_v,
                   tape.total_energy_v, tape.total_clamped_v, &u[kSpectralVOffset]);

    // Acceleration magnitude histogram over consecutive velocity differences.
    if (n >= 2) {
        const double wa = 1.0 / static_cast<double>(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const double a = std::hypot(v.h[i + 1] - v.h[i], v.v[i + 1] - v.v[i]) / kSampleDtSec;
            u[kAccelHistOffset + log_bin(a, kAccelHistLo, kAccelHistHi, kAccelHistBins)] += wa;
        }
    }

    // Speed quantiles.
    tape.speed_order.resize(n);
    std::iota(tape.speed_order.begin(), tape.speed_order.end(), std::size_t{0});
    std::stable_sort(tape.speed_order.begin(), tape.speed_order.end(),
                     [&](std::size_t a, std::size_t b) { return tape.speeds[a] < tape.speeds[b]; });
    for (std::size_t j = 0; j < kQuantileCount; ++j) {
        const QuantilePick q = quantile_pick(n, j);
        const double s_lo = tape.speeds[tape.speed_order[q.lo]];
        const double s_hi = tape.speeds[tape.speed_order[q.hi]];
        u[kQuantileOffset + j] = s_lo * (1.0 - q.frac) + s_hi * q.frac;
    }

    tape.u_norm = std::sqrt(std::inner_product(u.begin(), u.end(), u.begin(), 0.0));
    if (tape.u_norm < kDegenerateNorm) {
        tape.degenerate = true;
        tape.z.v.fill(0.0);
        tape.z.v[0] = 1.0;
    } else {
        for (std::size_t i = 0; i < kEmbeddingDim; ++i) tape.z.v[i] = u[i] / tape.u_norm;
    }
    return tape.z;
}

UserEmbedding encode(const VelocitySignal& v) {
    EncodeTape tape;
    return encode(v, tape);
}

namespace {

void spectral_vjp(const EncodeTape& tape, const std::vector<std::complex<double>>& spec,
                  const std::array<double, kSpectralBands>& band_energy, double total, bool clamped,
                  const double* du_block, const std::vector<double>& hann,
                  const std::vector<int>& band_of_bin, std::vector<double>& dchan) {
    const std::size_t n = tape.n;
    const double denom = clamped ? kTinyEnergy : total;

    // d(feature_b)/dP_k = 1[k in band b]/denom - E_b/denom^2 * d(denom)/dP_k,
    // where denom depends on every non-DC bin unless the clamp is active.
    double weighted = 0.0;  // sum_b du_b * E_b
    for (std::size_t b = 0; b < kSpectralBands; ++b) weighted += du_block[b] * band_energy[b];

    std::vector<std::complex<double>> z(spec.size(), {0.0, 0.0});
    bool any = false;
    for (std::size_t k = 1; k < spec.size(); ++k) {
        double dP = 0.0;
        const int b = band_of_bin[k];
        if (b >= 0) dP += du_block[b] / denom;
        if (!clamped) dP -= weighted / (denom * denom);
        if (dP != 0.0) {
            z[k] = dP * std::conj(spec[k]);
            any = true;
        }
    }
    if (!any) return;
    const std::vector<double> r = half_spectrum_real_sum(z, n);
    for (std::size_t i = 0; i < n; ++i) dchan[i] += 2.0 * r[i] * hann[i];
}

}  // namespace

VelocitySignal encode_vjp(const EncodeTape& tape, const std::array<double, kEmbeddingDim>& dz) {
    VelocitySignal dv(tape.n);
    if (tape.degenerate) return dv;

    // Through L2 normalization: du = (dz - z (z . dz)) / ||u||.
    double zdot = 0.0;
    for (std::size_t i = 0; i < kEmbeddingDim; ++i) zdot += tape.z.v[i] * dz[i];
    std::array<double, kEmbeddingDim> du{};
    for (std::size_t i = 0; i < kEmbeddingDim; ++i)
        du[i] = (dz[i] - tape.z.v[i] * zdot) / tape.u_norm;

    spectral_vjp(tape, tape.spec_h, tape.band_energy_h, tape.total_energy_h, tape.total_clamped_h,
                 &du[kSpectralHOffset], tape.hann, tape.band_of_bin, dv.h);
    spectral_vjp(tape, tape.spec_v, tape.band_energy_v, tape.total_energy_v, tape.total_clamped_v,
                 &du[kSpectralVOffset], tape.hann, tape.band_of_bin, dv.v);

    // Quantile block: gradient flows to the two order statistics selected per
    // level, then into the samples through d|v_i|/dv_i.
    std::vector<double> dspeed(tape.n, 0.0);
    for (std::size_t j = 0; j < kQuantileCount; ++j) {
        const double g = du[kQuantileOffset + j];
        if (g == 0.0) continue;
        const QuantilePick q = quantile_pick(tape.n, j);
        dspeed[tape.speed_order[q.lo]] += g * (1.0 - q.frac);
        dspeed[tape.speed_order[q.hi]] += g * q.frac;
    }
    for (std::size_t i = 0; i < tape.n; ++i) {
        if (dspeed[i] == 0.0 || tape.speeds[i] <= kTinySpeed) continue;
        dv.h[i] += dspeed[i] * tape.vx[i] / tape.speeds[i];
        dv.v[i] += dspeed[i] * tape.vy[i] / tape.speeds[i];
    }
    return dv;
}

double cosine_similarity(const UserEmbedding& a, const UserEmbedding& b) {
    double dot = 0.0;
    for (std::size_t i = 0; i < kEmbeddingDim; ++i) dot += a.v[i] * b.v[i];
    return dot;
}

}  // namespace gazeaudit
