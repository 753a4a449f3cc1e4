#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "gazeaudit/embedding.hpp"
#include "gazeaudit/types.hpp"

namespace gazeaudit {

// Paper-scale schedule defaults: T = 50 linear steps from 0.0001 to 0.05.
inline constexpr int kDefaultSteps = 50;
inline constexpr double kDefaultBetaStart = 1e-4;
inline constexpr double kDefaultBetaEnd = 0.05;

// Per-step noise variances and cumulative retention factors. Step indices are
// 1-based throughout; alpha_bar_t(0) == 1 by convention.
struct NoiseSchedule {
    int T = 0;
    std::vector<double> beta;       // beta[i] is step t = i+1
    std::vector<double> alpha;      // 1 - beta
    std::vector<double> alpha_bar;  // running product of alpha

    double beta_t(int t) const;
    double alpha_t(int t) const;
    double alpha_bar_t(int t) const;
    void check_step(int t) const;  // throws ConfigError when t is outside [1, T]
};

NoiseSchedule linear_schedule(int T, double beta_start, double beta_end);

// Reverse-process variance: the beta-tilde posterior form is the default;
// sigma^2 = beta is kept as a switch.
enum class SigmaMode { BetaTilde, Beta };
double sigma_t(const NoiseSchedule& s, int t, SigmaMode mode);

struct NoisyState {
    Seq2 x;
    int t = 0;
};

struct Conditioning {
    IdentityRemovedSignal v0;
    UserEmbedding z;
};

// x_t = sqrt(abar_t) x0 + sqrt(1 - abar_t) eps
NoisyState forward_noising(const Seq2& x0, int t, const NoiseTensor& eps, const NoiseSchedule& s);

// x0_hat = (x_t - sqrt(1 - abar_t) eps_hat) / sqrt(abar_t)
Seq2 predict_x0(const NoisyState& xt, const NoiseTensor& eps_hat, const NoiseSchedule& s);

// Ancestral step. `noise` is injected by the caller so the chain stays a pure
// function of its inputs; it is ignored at t = 1 where sigma_1 = 0.
NoisyState reverse_step(const NoisyState& xt, const NoiseTensor& eps_hat, const NoiseTensor& noise,
                        const NoiseSchedule& s, SigmaMode mode = SigmaMode::BetaTilde);

using DenoiserFn = std::function<Seq2(const NoisyState& xt, const Conditioning& cond)>;

// Full reverse chain from seeded unit-Gaussian x_T down to x_0. Throws
// NumericError naming the step if the denoiser emits non-finite values.
Seq2 sample_chain(const DenoiserFn& denoiser, const Conditioning& cond, const NoiseSchedule& s,
                  std::size_t length, std::uint64_t rng_seed,
                  SigmaMode mode = SigmaMode::BetaTilde);

}  // namespace gazeaudit
