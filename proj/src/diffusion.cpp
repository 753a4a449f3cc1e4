#include "gazeaudit/diffusion.hpp"

#include <cmath>
#include <string>

#include "gazeaudit/rng.hpp"

namespace gazeaudit {

void NoiseSchedule::check_step(int t) const {
    if (t < 1 || t > T)
        throw ConfigError("diffusion step " + std::to_string(t) + " outside [1, " +
                          std::to_string(T) + "]");
}

double NoiseSchedule::beta_t(int t) const {
    check_step(t);
    return beta[static_cast<std::size_t>(t - 1)];
}

double NoiseSchedule::alpha_t(int t) const {
    check_step(t);
    return alpha[static_cast<std::size_t>(t - 1)];
}

double NoiseSchedule::alpha_bar_t(int t) const {
    if (t == 0) return 1.0;
    check_step(t);
    return alpha_bar[static_cast<std::size_t>(t - 1)];
}

NoiseSchedule linear_schedule(int T, double beta_start, double beta_end) {
    if (T < 1) throw ConfigError("linear_schedule: T must be >= 1");
    if (!(beta_start > 0.0) || !(beta_end < 1.0) || beta_start > beta_end)
        throw ConfigError("linear_schedule: need 0 < beta_start <= beta_end < 1");
    NoiseSchedule s;
    s.T = T;
    s.beta.resize(static_cast<std::size_t>(T));
    s.alpha.resize(static_cast<std::size_t>(T));
    s.alpha_bar.resize(static_cast<std::size_t>(T));
    double prod = 1.0;
    for (int i = 0; i < T; ++i) {
        // Inclusive endpoints: beta[0] = beta_start, beta[T-1] = beta_end.
        const double f = (T == 1) ? 0.0 : static_cast<double>(i) / static_cast<double>(T - 1);
        const double b = beta_start + f * (beta_end - beta_start);
        s.beta[static_cast<std::size_t>(i)] = b;
        s.alpha[static_cast<std::size_t>(i)] = 1.0 - b;
        prod *= 1.0 - b;
        s.alpha_bar[static_cast<std::size_t>(i)] = prod;
    }
    return s;
}

double sigma_t(const NoiseSchedule& s, int t, SigmaMode mode) {
    s.check_step(t);
    if (t == 1) return 0.0;  // final reverse step is deterministic
    if (mode == SigmaMode::Beta) return std::sqrt(s.beta_t(t));
    const double var =
        s.beta_t(t) * (1.0 - s.alpha_bar_t(t - 1)) / (1.0 - s.alpha_bar_t(t));
    return std::sqrt(var);
}

NoisyState forward_noising(const Seq2& x0, int t, const NoiseTensor& eps, const NoiseSchedule& s) {
    s.check_step(t);
    if (!x0.same_shape(eps)) throw ConfigError("forward_noising: shape mismatch");
    const double a = std::sqrt(s.alpha_bar_t(t));
    const double b = std::sqrt(1.0 - s.alpha_bar_t(t));
    NoisyState out;
    out.t = t;
    out.x = Seq2(x0.length());
    for (std::size_t i = 0; i < x0.length(); ++i) {
        out.x.h[i] = a * x0.h[i] + b * eps.h[i];
        out.x.v[i] = a * x0.v[i] + b * eps.v[i];
    }
    return out;
}

Seq2 predict_x0(const NoisyState& xt, const NoiseTensor& eps_hat, const NoiseSchedule& s) {
    s.check_step(xt.t);
    if (!xt.x.same_shape(eps_hat)) throw ConfigError("predict_x0: shape mismatch");
    const double a = std::sqrt(s.alpha_bar_t(xt.t));
    const double b = std::sqrt(1.0 - s.alpha_bar_t(xt.t));
    Seq2 out(xt.x.length());
    for (std::size_t i = 0; i < out.length(); ++i) {
        out.h[i] = (xt.x.h[i] - b * eps_hat.h[i]) / a;
        out.v[i] = (xt.x.v[i] - b * eps_hat.v[i]) / a;
    }
    return out;
}

NoisyState reverse_step(const NoisyState& xt, const NoiseTensor& eps_hat, const NoiseTensor& noise,
                        const NoiseSchedule& s, SigmaMode mode) {
    s.check_step(xt.t);
    if (!xt.x.same_shape(eps_hat) || !xt.x.same_shape(noise))
        throw ConfigError("reverse_step: shape mismatch");
    const int t = xt.t;
    const double inv_sqrt_alpha = 1.0 / std::sqrt(s.alpha_t(t));
    const double eps_coef = s.beta_t(t) / std::sqrt(1.0 - s.alpha_bar_t(t));
    const double sig = sigma_t(s, t, mode);
    NoisyState out;
    out.t = t - 1;
    out.x = Seq2(xt.x.length());
    for (std::size_t i = 0; i < out.x.length(); ++i) {
        out.x.h[i] = inv_sqrt_alpha * (xt.x.h[i] - eps_coef * eps_hat.h[i]) + sig * noise.h[i];
        out.x.v[i] = inv_sqrt_alpha * (xt.x.v[i] - eps_coef * eps_hat.v[i]) + sig * noise.v[i];
    }
    return out;
}

Seq2 sample_chain(const DenoiserFn& denoiser, const Conditioning& cond, const NoiseSchedule& s,
                  std::size_t length, std::uint64_t rng_seed, SigmaMode mode) {
    Rng rng(rng_seed);
    NoisyState state;
    state.t = s.T;
    state.x = Seq2(length);
    for (std::size_t i = 0; i < length; ++i) state.x.h[i] = rng.gaussian();
    for (std::size_t i = 0; i < length; ++i) state.x.v[i] = rng.gaussian();

    for (int t = s.T; t >= 1; --t) {
        state.t = t;
        const Seq2 eps_hat = denoiser(state, cond);
        if (!eps_hat.all_finite())
            throw NumericError("sample_chain: non-finite denoiser output at step " +
                               std::to_string(t));
        NoiseTensor noise(length);
        if (t > 1) {
            for (std::size_t i = 0; i < length; ++i) noise.h[i] = rng.gaussian();
            for (std::size_t i = 0; i < length; ++i) noise.v[i] = rng.gaussian();
        }
        state = reverse_step(state, eps_hat, noise, s, mode);
    }
    return state.x;
}

}  // namespace gazeaudit
