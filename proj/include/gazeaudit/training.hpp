#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "gazeaudit/denoiser.hpp"
#include "gazeaudit/diffusion.hpp"

namespace gazeaudit {

struct TrainingConfig {
    double learning_rate = 0.0002;
    int batch_size = 32;
    int epochs = 0;
    double lambda = 0.1;  // identity-guidance weight
    std::uint64_t rng_seed = 1;
    int steps = kDefaultSteps;
    double beta_start = kDefaultBetaStart;
    double beta_end = kDefaultBetaEnd;
    SigmaMode sigma_mode = SigmaMode::BetaTilde;

    void validate() const;
};

TrainingConfig training_config_from_json(const std::string& json_text);
std::string training_config_to_json(const TrainingConfig& cfg);

// Per-window training inputs: real velocity plus its conditioning pair
// (identity-removed signal, embedding of the real velocity).
struct TrainItem {
    VelocitySignal v;
    Conditioning cond;
};
TrainItem make_train_item(const GazeWindow& w);

using EncoderFn = std::function<UserEmbedding(const VelocitySignal&)>;

// L = MSE(eps, eps_hat) + lambda * (1 - cos(encoder(v_hat), encoder(v))).
double combined_loss(const NoiseTensor& eps, const NoiseTensor& eps_hat, const VelocitySignal& v,
                     const VelocitySignal& v_hat, double lambda, const EncoderFn& encoder);

// One batch element with its noising draw frozen; used both by the optimizer
// steps and by finite-difference gradient checks.
struct FrozenBatchElem {
    TrainItem item;
    int t = 1;
    NoiseTensor eps;
};

// Mean combined loss over the batch. When `grad` is non-null it must have
// param_count() entries; analytic dL/dtheta is accumulated into it (the
// identity term flows through predict_x0 and the encoder's smooth blocks).
double batch_loss(const ReferenceDenoiser& den, const std::vector<FrozenBatchElem>& batch,
                  const NoiseSchedule& sched, double lambda, std::vector<double>* grad);

struct TrainResult {
    std::vector<double> epoch_mean_loss;
};

// Adam mini-batch descent (paper optimizer) on the combined loss. Deterministic
// for a fixed cfg.rng_seed; throws NumericError naming the batch index if the
// loss goes non-finite.
TrainResult train(ReferenceDenoiser& den, const std::vector<GazeWindow>& windows,
                  const TrainingConfig& cfg);
TrainResult train_items(ReferenceDenoiser& den, const std::vector<TrainItem>& items,
                        const TrainingConfig& cfg);

}  // namespace gazeaudit
