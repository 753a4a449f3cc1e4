#include "gazeaudit/training.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "gazeaudit/kinematics.hpp"
#include "gazeaudit/rng.hpp"

namespace gazeaudit {

using nlohmann::json;

void TrainingConfig::validate() const {
    if (!(learning_rate > 0.0)) throw ConfigError("training: learning_rate must be > 0");
    if (batch_size < 1) throw ConfigError("training: batch_size must be >= 1");
    if (epochs < 0) throw ConfigError("training: epochs must be >= 0");
    if (lambda < 0.0) throw ConfigError("training: lambda must be >= 0");
    if (steps < 1) throw ConfigError("training: steps must be >= 1");
}

TrainingConfig training_config_from_json(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("training config: ") + e.what());
    }
    TrainingConfig cfg;
    if (j.contains("learning_rate")) cfg.learning_rate = j.at("learning_rate").get<double>();
    if (j.contains("batch_size")) cfg.batch_size = j.at("batch_size").get<int>();
    if (j.contains("epochs")) cfg.epochs = j.at("epochs").get<int>();
    if (j.contains("lambda")) cfg.lambda = j.at("lambda").get<double>();
    if (j.contains("rng_seed")) cfg.rng_seed = j.at("rng_seed").get<std::uint64_t>();
    if (j.contains("steps")) cfg.steps = j.at("steps").get<int>();
    if (j.contains("beta_start")) cfg.beta_start = j.at("beta_start").get<double>();
    if (j.contains("beta_end")) cfg.beta_end = j.at("beta_end").get<double>();
    if (j.contains("sigma_mode")) {
        const std::string m = j.at("sigma_mode").get<std::string>();
        if (m == "beta_tilde")
            cfg.sigma_mode = SigmaMode::BetaTilde;
        else if (m == "beta")
            cfg.sigma_mode = SigmaMode::Beta;
        else
            throw ConfigError("training: sigma_mode must be 'beta_tilde' or 'beta'");
    }
    cfg.validate();
    return cfg;
}

std::string training_config_to_json(const TrainingConfig& cfg) {
    json j;
    j["learning_rate"] = cfg.learning_rate;
    j["batch_size"] = cfg.batch_size;
    j["epochs"] = cfg.epochs;
    j["lambda"] = cfg.lambda;
    j["rng_seed"] = cfg.rng_seed;
    j["steps"] = cfg.steps;
    j["beta_start"] = cfg.beta_start;
    j["beta_end"] = cfg.beta_end;
    j["sigma_mode"] = cfg.sigma_mode == SigmaMode::BetaTilde ? "beta_tilde" : "beta";
    return j.dump(2) + "\n";
}

TrainItem make_train_item(const GazeWindow& w) {
    TrainItem item;
    item.v = position_to_velocity(w);
    item.cond.v0 = identity_removal(item.v);
    item.cond.z = encode(item.v);
    return item;
}

double combined_loss(const NoiseTensor& eps, const NoiseTensor& eps_hat, const VelocitySignal& v,
                     const VelocitySignal& v_hat, double lambda, const EncoderFn& encoder) {
    if (!eps.same_shape(eps_hat) || !v.same_shape(v_hat))
        throw ConfigError("combined_loss: shape mismatch");
    const std::size_t n = eps.length();
    double mse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dh = eps.h[i] - eps_hat.h[i];
        const double dv = eps.v[i] - eps_hat.v[i];
        mse += dh * dh + dv * dv;
    }
    mse /= static_cast<double>(2 * n);
    double identity = 0.0;
    if (lambda > 0.0) identity = 1.0 - cosine_similarity(encoder(v_hat), encoder(v));
    return mse + lambda * identity;
}

double batch_loss(const ReferenceDenoiser& den, const std::vector<FrozenBatchElem>& batch,
                  const NoiseSchedule& sched, double lambda, std::vector<double>* grad) {
    if (batch.empty()) throw ConfigError("batch_loss: empty batch");
    const double inv_b = 1.0 / static_cast<double>(batch.size());
    double total = 0.0;
    ReferenceDenoiser::Workspace ws;
    for (const auto& el : batch) {
        const std::size_t n = el.item.v.length();
        const NoisyState xt = forward_noising(el.item.v, el.t, el.eps, sched);
        const Seq2 eps_hat = den.forward(xt, el.item.cond, ws);

        double mse = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double dh = eps_hat.h[i] - el.eps.h[i];
            const double dv = eps_hat.v[i] - el.eps.v[i];
            mse += dh * dh + dv * dv;
        }
        mse /= static_cast<double>(2 * n);

        const Seq2 v_hat = predict_x0(xt, eps_hat, sched);
        EncodeTape tape;
        double identity = 0.0;
        if (lambda > 0.0) {
            const UserEmbedding z_hat = encode(v_hat, tape);
            identity = 1.0 - cosine_similarity(z_hat, el.item.cond.z);
        }
        total += (mse + lambda * identity) * inv_b;

        if (grad) {
            // dL/d eps_hat from the MSE term.
            Seq2 dout(n);
            const double mse_coef = inv_b / static_cast<double>(n);
            for (std::size_t i = 0; i < n; ++i) {
                dout.h[i] = mse_coef * (eps_hat.h[i] - el.eps.h[i]);
                dout.v[i] = mse_coef * (eps_hat.v[i] - el.eps.v[i]);
            }
            if (lambda > 0.0) {
                // Identity term: d(1-cos)/dz_hat = -z_ref, then through the
                // encoder and v_hat = (x_t - sqrt(1-abar) eps_hat)/sqrt(abar).
                std::array<double, kEmbeddingDim> dz{};
                const double c = -lambda * inv_b;
                for (std::size_t i = 0; i < kEmbeddingDim; ++i) dz[i] = c * el.item.cond.z.v[i];
                const VelocitySignal dv_hat = encode_vjp(tape, dz);
                const double dvde =
                    -std::sqrt(1.0 - sched.alpha_bar_t(el.t)) / std::sqrt(sched.alpha_bar_t(el.t));
                for (std::size_t i = 0; i < n; ++i) {
                    dout.h[i] += dvde * dv_hat.h[i];
                    dout.v[i] += dvde * dv_hat.v[i];
                }
            }
            den.backward(ws, el.item.cond, dout, *grad);
        }
    }
    return total;
}

namespace {

// Adam with the usual defaults; the paper pins only the learning rate.
class Adam {
public:
    explicit Adam(std::size_t n) : m_(n, 0.0), v_(n, 0.0) {}

    void step(std::vector<double>& params, const std::vector<double>& grad, double lr) {
        ++t_;
        const double b1 = 0.9, b2 = 0.999, eps = 1e-8;
        const double bc1 = 1.0 - std::pow(b1, t_);
        const double bc2 = 1.0 - std::pow(b2, t_);
        for (std::size_t i = 0; i < params.size(); ++i) {
            m_[i] = b1 * m_[i] + (1.0 - b1) * grad[i];
            v_[i] = b2 * v_[i] + (1.0 - b2) * grad[i] * grad[i];
            params[i] -= lr * (m_[i] / bc1) / (std::sqrt(v_[i] / bc2) + eps);
        }
    }

private:
    std::vector<double> m_, v_;
    int t_ = 0;
};

}  // namespace

TrainResult train_items(ReferenceDenoiser& den, const std::vector<TrainItem>& items,
                        const TrainingConfig& cfg) {
    cfg.validate();
    if (items.size() < static_cast<std::size_t>(cfg.batch_size))
        throw ConfigError("train: need at least batch_size windows, got " +
                          std::to_string(items.size()));
    const NoiseSchedule sched = linear_schedule(cfg.steps, cfg.beta_start, cfg.beta_end);
    Rng rng = Rng(cfg.rng_seed).fork("train");

    Adam opt(den.params().size());
    std::vector<double> grad(den.params().size(), 0.0);
    TrainResult result;

    std::vector<std::size_t> order(items.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        // Fisher-Yates with the injected stream keeps runs bit-reproducible.
        for (std::size_t i = order.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(i) - 1));
            std::swap(order[i - 1], order[j]);
        }
        double loss_sum = 0.0;
        std::size_t batches = 0;
        for (std::size_t base = 0; base < order.size(); base += static_cast<std::size_t>(cfg.batch_size)) {
            const std::size_t take = std::min(order.size() - base, static_cast<std::size_t>(cfg.batch_size));
            std::vector<FrozenBatchElem> batch;
            batch.reserve(take);
            for (std::size_t b = 0; b < take; ++b) {
                FrozenBatchElem el;
                el.item = items[order[base + b]];
                el.t = rng.uniform_int(1, sched.T);
                el.eps = NoiseTensor(el.item.v.length());
                for (auto& x : el.eps.h) x = rng.gaussian();
                for (auto& x : el.eps.v) x = rng.gaussian();
                batch.push_back(std::move(el));
            }
            std::fill(grad.begin(), grad.end(), 0.0);
            const double loss = batch_loss(den, batch, sched, cfg.lambda, &grad);
            if (!std::isfinite(loss))
                throw NumericError("train: non-finite loss in epoch " + std::to_string(epoch) +
                                   ", batch " + std::to_string(batches));
            opt.step(den.params(), grad, cfg.learning_rate);
            loss_sum += loss;
            ++batches;
        }
        result.epoch_mean_loss.push_back(loss_sum / static_cast<double>(batches));
    }
    return result;
}

TrainResult train(ReferenceDenoiser& den, const std::vector<GazeWindow>& windows,
                  const TrainingConfig& cfg) {
    std::vector<TrainItem> items;
    items.reserve(windows.size());
    for (const auto& w : windows) items.push_back(make_train_item(w));
    return train_items(den, items, cfg);
}

}  // namespace gazeaudit
