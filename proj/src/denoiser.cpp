#include "gazeaudit/denoiser.hpp"

#include <cmath>
#include <cstring>

#include "gazeaudit/error.hpp"
#include "gazeaudit/rng.hpp"

namespace gazeaudit {

namespace {

constexpr int kInCh = ReferenceDenoiser::kInCh;
constexpr int kHidden = ReferenceDenoiser::kHidden;
constexpr int kKernel = ReferenceDenoiser::kKernel;
constexpr int kTimeDim = ReferenceDenoiser::kTimeDim;
constexpr int kOutCh = ReferenceDenoiser::kOutCh;
constexpr int kEmbed = static_cast<int>(kEmbeddingDim);
constexpr int kPad = kKernel / 2;

// Flat parameter layout.
constexpr std::size_t kOffC1W = 0;                                     // [32][5][5]
constexpr std::size_t kOffC1B = kOffC1W + kHidden * kInCh * kKernel;   // [32]
constexpr std::size_t kOffC2W = kOffC1B + kHidden;                     // [32][32][5]
constexpr std::size_t kOffC2B = kOffC2W + kHidden * kHidden * kKernel;
constexpr std::size_t kOffC3W = kOffC2B + kHidden;
constexpr std::size_t kOffC3B = kOffC3W + kHidden * kHidden * kKernel;
constexpr std::size_t kOffOutW = kOffC3B + kHidden;                    // [2][32]
constexpr std::size_t kOffOutB = kOffOutW + kOutCh * kHidden;          // [2]
constexpr std::size_t kOffTimeW = kOffOutB + kOutCh;                   // [32][16]
constexpr std::size_t kOffTimeB = kOffTimeW + kHidden * kTimeDim;
constexpr std::size_t kOffZW = kOffTimeB + kHidden;                    // [32][128]
constexpr std::size_t kOffZB = kOffZW + kHidden * kEmbed;
constexpr std::size_t kOffZinW = kOffZB + kHidden;                     // [128]
constexpr std::size_t kOffZinB = kOffZinW + kEmbed;                    // [1]
constexpr std::size_t kNParams = kOffZinB + 1;

inline double silu(double x) { return x / (1.0 + std::exp(-x)); }

inline double silu_deriv(double x) {
    const double s = 1.0 / (1.0 + std::exp(-x));
    return s * (1.0 + x * (1.0 - s));
}

// out[c][i] += sum_{ci,k} w[c][ci][k] * in[ci][i + k - pad], zero padded.
void conv_forward(const double* w, const double* b, const double* in, int in_ch, double* out,
                  int out_ch, std::size_t len) {
    for (int c = 0; c < out_ch; ++c) {
        double* dst = out + static_cast<std::size_t>(c) * len;
        for (std::size_t i = 0; i < len; ++i) dst[i] = b[c];
        for (int ci = 0; ci < in_ch; ++ci) {
            const double* src = in + static_cast<std::size_t>(ci) * len;
            const double* wk = w + (static_cast<std::size_t>(c) * in_ch + ci) * kKernel;
            for (int k = 0; k < kKernel; ++k) {
                const double wv = wk[k];
                if (wv == 0.0) continue;
                const long shift = k - kPad;
                const std::size_t lo = shift < 0 ? static_cast<std::size_t>(-shift) : 0;
                const std::size_t hi =
                    shift > 0 ? len - static_cast<std::size_t>(shift) : len;
                for (std::size_t i = lo; i < hi; ++i)
                    dst[i] += wv * src[static_cast<std::size_t>(static_cast<long>(i) + shift)];
            }
        }
    }
}

// Accumulates dW, dB and (optionally) d(input) for the conv above.
void conv_backward(const double* w, const double* in, int in_ch, const double* dout, int out_ch,
                   std::size_t len, double* dw, double* db, double* din) {
    for (int c = 0; c < out_ch; ++c) {
        const double* g = dout + static_cast<std::size_t>(c) * len;
        double acc = 0.0;
        for (std::size_t i = 0; i < len; ++i) acc += g[i];
        db[c] += acc;
        for (int ci = 0; ci < in_ch; ++ci) {
            const double* src = in + static_cast<std::size_t>(ci) * len;
            double* dwk = dw + (static_cast<std::size_t>(c) * in_ch + ci) * kKernel;
            const double* wk = w + (static_cast<std::size_t>(c) * in_ch + ci) * kKernel;
            double* dsrc = din ? din + static_cast<std::size_t>(ci) * len : nullptr;
            for (int k = 0; k < kKernel; ++k) {
                const long shift = k - kPad;
                const std::size_t lo = shift < 0 ? static_cast<std::size_t>(-shift) : 0;
                const std::size_t hi = shift > 0 ? len - static_cast<std::size_t>(shift) : len;
                double wsum = 0.0;
                for (std::size_t i = lo; i < hi; ++i) {
                    const std::size_t j = static_cast<std::size_t>(static_cast<long>(i) + shift);
                    wsum += g[i] * src[j];
                    if (dsrc) dsrc[j] += wk[k] * g[i];
                }
                dwk[k] += wsum;
            }
        }
    }
}

}  // namespace

std::vector<double> time_embedding(int t, int dim) {
    std::vector<double> e(static_cast<std::size_t>(dim), 0.0);
    const int half = dim / 2;
    for (int i = 0; i < half; ++i) {
        const double freq =
            std::exp(-std::log(10000.0) * static_cast<double>(i) / static_cast<double>(half - 1));
        e[static_cast<std::size_t>(2 * i)] = std::sin(static_cast<double>(t) * freq);
        e[static_cast<std::size_t>(2 * i + 1)] = std::cos(static_cast<double>(t) * freq);
    }
    return e;
}

std::size_t ReferenceDenoiser::param_count() { return kNParams; }

ReferenceDenoiser::ReferenceDenoiser() : p_(kNParams, 0.0) {}

ReferenceDenoiser::ReferenceDenoiser(std::uint64_t init_seed) : p_(kNParams, 0.0) {
    Rng rng(init_seed);
    auto fill = [&](std::size_t off, std::size_t count, double scale) {
        for (std::size_t i = 0; i < count; ++i) p_[off + i] = scale * rng.gaussian();
    };
    fill(kOffC1W, kHidden * kInCh * kKernel, 1.0 / std::sqrt(double(kInCh * kKernel)));
    fill(kOffC2W, kHidden * kHidden * kKernel, 1.0 / std::sqrt(double(kHidden * kKernel)));
    fill(kOffC3W, kHidden * kHidden * kKernel, 1.0 / std::sqrt(double(kHidden * kKernel)));
    // Output layer starts at zero so the initial noise prediction is zero.
    fill(kOffTimeW, kHidden * kTimeDim, 1.0 / std::sqrt(double(kTimeDim)));
    fill(kOffZW, kHidden * kEmbed, 1.0 / std::sqrt(double(kEmbed)));
    fill(kOffZinW, kEmbed, 1.0 / std::sqrt(double(kEmbed)));
}

Seq2 ReferenceDenoiser::forward(const NoisyState& xt, const Conditioning& cond) const {
    Workspace ws;
    return forward(xt, cond, ws);
}

Seq2 ReferenceDenoiser::forward(const NoisyState& xt, const Conditioning& cond, Workspace& ws) const {
    const std::size_t L = xt.x.length();
    if (cond.v0.length() != L) throw ConfigError("denoiser: conditioning length mismatch");

    ws.length = L;
    ws.in.assign(static_cast<std::size_t>(kInCh) * L, 0.0);
    ws.pre1.assign(static_cast<std::size_t>(kHidden) * L, 0.0);
    ws.pre2.assign(static_cast<std::size_t>(kHidden) * L, 0.0);
    ws.pre3.assign(static_cast<std::size_t>(kHidden) * L, 0.0);
    ws.h1.assign(static_cast<std::size_t>(kHidden) * L, 0.0);
    ws.h2.assign(static_cast<std::size_t>(kHidden) * L, 0.0);
    ws.h3.assign(static_cast<std::size_t>(kHidden) * L, 0.0);
    ws.temb = time_embedding(xt.t, kTimeDim);

    double zin = p_[kOffZinB];
    for (int j = 0; j < kEmbed; ++j) zin += p_[kOffZinW + j] * cond.z.v[static_cast<std::size_t>(j)];

    std::memcpy(&ws.in[0 * L], xt.x.h.data(), L * sizeof(double));
    std::memcpy(&ws.in[1 * L], xt.x.v.data(), L * sizeof(double));
    std::memcpy(&ws.in[2 * L], cond.v0.h.data(), L * sizeof(double));
    std::memcpy(&ws.in[3 * L], cond.v0.v.data(), L * sizeof(double));
    for (std::size_t i = 0; i < L; ++i) ws.in[4 * L + i] = zin;

    conv_forward(&p_[kOffC1W], &p_[kOffC1B], ws.in.data(), kInCh, ws.pre1.data(), kHidden, L);

    // Per-channel conditioning biases: projected time embedding + projected z.
    for (int c = 0; c < kHidden; ++c) {
        double bias = p_[kOffTimeB + c] + p_[kOffZB + c];
        for (int j = 0; j < kTimeDim; ++j)
            bias += p_[kOffTimeW + static_cast<std::size_t>(c) * kTimeDim + j] * ws.temb[static_cast<std::size_t>(j)];
        for (int j = 0; j < kEmbed; ++j)
            bias += p_[kOffZW + static_cast<std::size_t>(c) * kEmbed + j] * cond.z.v[static_cast<std::size_t>(j)];
        double* row = &ws.pre1[static_cast<std::size_t>(c) * L];
        for (std::size_t i = 0; i < L; ++i) row[i] += bias;
    }
    for (std::size_t i = 0; i < ws.pre1.size(); ++i) ws.h1[i] = silu(ws.pre1[i]);

    conv_forward(&p_[kOffC2W], &p_[kOffC2B], ws.h1.data(), kHidden, ws.pre2.data(), kHidden, L);
    for (std::size_t i = 0; i < ws.pre2.size(); ++i) ws.h2[i] = silu(ws.pre2[i]);

    conv_forward(&p_[kOffC3W], &p_[kOffC3B], ws.h2.data(), kHidden, ws.pre3.data(), kHidden, L);
    for (std::size_t i = 0; i < ws.pre3.size(); ++i) ws.h3[i] = silu(ws.pre3[i]);

    Seq2 out(L);
    for (int o = 0; o < kOutCh; ++o) {
        double* dst = (o == 0 ? out.h.data() : out.v.data());
        for (std::size_t i = 0; i < L; ++i) dst[i] = p_[kOffOutB + o];
        for (int c = 0; c < kHidden; ++c) {
            const double wv = p_[kOffOutW + static_cast<std::size_t>(o) * kHidden + c];
            const double* src = &ws.h3[static_cast<std::size_t>(c) * L];
            for (std::size_t i = 0; i < L; ++i) dst[i] += wv * src[i];
        }
    }
    return out;
}

void ReferenceDenoiser::backward(const Workspace& ws, const Conditioning& cond, const Seq2& dout,
                                 std::vector<double>& grad) const {
    if (grad.size() != kNParams) throw ConfigError("denoiser backward: gradient buffer size mismatch");
    const std::size_t L = ws.length;
    if (dout.length() != L) throw ConfigError("denoiser backward: dout length mismatch");

    std::vector<double> dh3(static_cast<std::size_t>(kHidden) * L, 0.0);
    for (int o = 0; o < kOutCh; ++o) {
        const double* g = (o == 0 ? dout.h.data() : dout.v.data());
        double gsum = 0.0;
        for (std::size_t i = 0; i < L; ++i) gsum += g[i];
        grad[kOffOutB + o] += gsum;
        for (int c = 0; c < kHidden; ++c) {
            const double* src = &ws.h3[static_cast<std::size_t>(c) * L];
            double* dst = &dh3[static_cast<std::size_t>(c) * L];
            const double wv = p_[kOffOutW + static_cast<std::size_t>(o) * kHidden + c];
            double wacc = 0.0;
            for (std::size_t i = 0; i < L; ++i) {
                wacc += g[i] * src[i];
                dst[i] += wv * g[i];
            }
            grad[kOffOutW + static_cast<std::size_t>(o) * kHidden + c] += wacc;
        }
    }

    // dh3 -> dpre3 -> (dW3, dh2) -> dpre2 -> (dW2, dh1) -> dpre1.
    std::vector<double> dpre(static_cast<std::size_t>(kHidden) * L, 0.0);
    for (std::size_t i = 0; i < dpre.size(); ++i) dpre[i] = dh3[i] * silu_deriv(ws.pre3[i]);
    std::vector<double> dh2(static_cast<std::size_t>(kHidden) * L, 0.0);
    conv_backward(&p_[kOffC3W], ws.h2.data(), kHidden, dpre.data(), kHidden, L, &grad[kOffC3W],
                  &grad[kOffC3B], dh2.data());

    for (std::size_t i = 0; i < dpre.size(); ++i) dpre[i] = dh2[i] * silu_deriv(ws.pre2[i]);
    std::vector<double> dh1(static_cast<std::size_t>(kHidden) * L, 0.0);
    conv_backward(&p_[kOffC2W], ws.h1.data(), kHidden, dpre.data(), kHidden, L, &grad[kOffC2W],
                  &grad[kOffC2B], dh1.data());

    for (std::size_t i = 0; i < dpre.size(); ++i) dpre[i] = dh1[i] * silu_deriv(ws.pre1[i]);
    std::vector<double> din(static_cast<std::size_t>(kInCh) * L, 0.0);
    conv_backward(&p_[kOffC1W], ws.in.data(), kInCh, dpre.data(), kHidden, L, &grad[kOffC1W],
                  &grad[kOffC1B], din.data());

    // Conditioning biases collect the per-channel sums of dpre1.
    for (int c = 0; c < kHidden; ++c) {
        const double* row = &dpre[static_cast<std::size_t>(c) * L];
        double s = 0.0;
        for (std::size_t i = 0; i < L; ++i) s += row[i];
        grad[kOffTimeB + c] += s;
        grad[kOffZB + c] += s;
        for (int j = 0; j < kTimeDim; ++j)
            grad[kOffTimeW + static_cast<std::size_t>(c) * kTimeDim + j] += s * ws.temb[static_cast<std::size_t>(j)];
        for (int j = 0; j < kEmbed; ++j)
            grad[kOffZW + static_cast<std::size_t>(c) * kEmbed + j] += s * cond.z.v[static_cast<std::size_t>(j)];
    }

    // The broadcast z-input channel.
    double dzin = 0.0;
    for (std::size_t i = 0; i < L; ++i) dzin += din[4 * L + i];
    grad[kOffZinB] += dzin;
    for (int j = 0; j < kEmbed; ++j) grad[kOffZinW + j] += dzin * cond.z.v[static_cast<std::size_t>(j)];
}

namespace {

struct TensorSpec {
    const char* name;
    std::size_t offset;
    std::vector<std::uint64_t> shape;
};

std::vector<TensorSpec> tensor_specs() {
    return {
        {"conv1.weight", kOffC1W, {kHidden, kInCh, kKernel}},
        {"conv1.bias", kOffC1B, {kHidden}},
        {"conv2.weight", kOffC2W, {kHidden, kHidden, kKernel}},
        {"conv2.bias", kOffC2B, {kHidden}},
        {"conv3.weight", kOffC3W, {kHidden, kHidden, kKernel}},
        {"conv3.bias", kOffC3B, {kHidden}},
        {"out.weight", kOffOutW, {kOutCh, kHidden}},
        {"out.bias", kOffOutB, {kOutCh}},
        {"time_proj.weight", kOffTimeW, {kHidden, kTimeDim}},
        {"time_proj.bias", kOffTimeB, {kHidden}},
        {"embed_proj.weight", kOffZW, {kHidden, kEmbeddingDim}},
        {"embed_proj.bias", kOffZB, {kHidden}},
        {"embed_in.weight", kOffZinW, {kEmbeddingDim}},
        {"embed_in.bias", kOffZinB, {1}},
    };
}

std::size_t shape_size(const std::vector<std::uint64_t>& shape) {
    std::size_t n = 1;
    for (auto d : shape) n *= static_cast<std::size_t>(d);
    return n;
}

}  // namespace

std::vector<NamedTensor> ReferenceDenoiser::to_tensors() const {
    std::vector<NamedTensor> out;
    for (const auto& spec : tensor_specs()) {
        NamedTensor t;
        t.name = spec.name;
        t.shape = spec.shape;
        const std::size_t n = shape_size(spec.shape);
        t.data.assign(p_.begin() + static_cast<long>(spec.offset),
                      p_.begin() + static_cast<long>(spec.offset + n));
        out.push_back(std::move(t));
    }
    return out;
}

ReferenceDenoiser ReferenceDenoiser::from_tensors(const std::vector<NamedTensor>& tensors) {
    ReferenceDenoiser den;
    for (const auto& spec : tensor_specs()) {
        const NamedTensor* found = nullptr;
        for (const auto& t : tensors)
            if (t.name == spec.name) {
                found = &t;
                break;
            }
        if (!found) throw SchemaError("model file missing tensor '" + std::string(spec.name) + "'");
        if (found->shape != spec.shape || found->data.size() != shape_size(spec.shape))
            throw SchemaError("model tensor '" + std::string(spec.name) + "' has unexpected shape");
        std::copy(found->data.begin(), found->data.end(), den.p_.begin() + static_cast<long>(spec.offset));
    }
    return den;
}

}  // namespace gazeaudit
