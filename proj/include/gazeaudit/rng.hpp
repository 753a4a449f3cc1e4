#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace gazeaudit {

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t fnv1a64(std::string_view s);

// Deterministic RNG with explicit seeding and stream forking. All randomness in
// the library flows through injected Rng instances; there is no global state.
// The Gaussian path is a fixed Box-Muller transform so streams are fully
// specified by the seed, independent of the standard library's distributions.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();
    double uniform();                       // [0, 1)
    double uniform(double lo, double hi);   // [lo, hi)
    int uniform_int(int lo, int hi);        // inclusive range, rejection sampled (no modulo bias)
    double gaussian();                      // standard normal
    double gaussian(double mu, double sd);

    // Independent child stream; forking does not disturb this stream's state.
    Rng fork(std::uint64_t stream) const;
    Rng fork(std::string_view stream) const;

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
    std::mt19937_64 eng_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace gazeaudit
