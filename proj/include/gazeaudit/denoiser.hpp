#pragma once

#include <cstdint>
#include <vector>

#include "gazeaudit/diffusion.hpp"
#include "gazeaudit/types.hpp"

namespace gazeaudit {

struct NamedTensor {
    std::string name;
    std::vector<std::uint64_t> shape;
    std::vector<double> data;
};

// Small fixed temporal-convolution noise predictor.
//
// Input is 5 channels: the 2-channel noisy state, the 2-channel identity-removed
// conditioning signal, and one channel carrying a learned scalar projection of
// the user embedding broadcast along time. Three width-32 convolutions with
// kernel 5 (SiLU activations) are followed by a pointwise layer back to 2
// channels. A 16-dim sinusoidal step embedding and a 32-dim linear projection
// of the user embedding are added to the first hidden pre-activation as
// per-channel biases. Deliberately tiny so every parameter is cheap to check
// against finite differences.
class ReferenceDenoiser {
public:
    static constexpr int kInCh = 5;
    static constexpr int kHidden = 32;
    static constexpr int kKernel = 5;
    static constexpr int kTimeDim = 16;
    static constexpr int kOutCh = 2;

    ReferenceDenoiser();                           // all-zero parameters
    explicit ReferenceDenoiser(std::uint64_t init_seed);

    static std::size_t param_count();

    Seq2 forward(const NoisyState& xt, const Conditioning& cond) const;

    // Training path: forward keeping intermediates, then backward accumulating
    // parameter gradients for a given dL/d(output).
    struct Workspace {
        std::size_t length = 0;
        std::vector<double> in;                     // kInCh x L
        std::vector<double> pre1, h1, pre2, h2, pre3, h3;  // kHidden x L each
        std::vector<double> temb;                   // kTimeDim
    };
    Seq2 forward(const NoisyState& xt, const Conditioning& cond, Workspace& ws) const;
    void backward(const Workspace& ws, const Conditioning& cond, const Seq2& dout,
                  std::vector<double>& grad) const;

    std::vector<double>& params() { return p_; }
    const std::vector<double>& params() const { return p_; }

    std::vector<NamedTensor> to_tensors() const;
    static ReferenceDenoiser from_tensors(const std::vector<NamedTensor>& tensors);

private:
    std::vector<double> p_;
};

// Sinusoidal step embedding shared by forward and tests.
std::vector<double> time_embedding(int t, int dim);

}  // namespace gazeaudit
