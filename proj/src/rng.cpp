#include "gazeaudit/rng.hpp"

#include <cmath>

namespace gazeaudit {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

Rng::Rng(std::uint64_t seed) : seed_(seed), eng_(splitmix64(seed)) {}

std::uint64_t Rng::next_u64() { return eng_(); }

double Rng::uniform() {
    // 53 high bits -> [0, 1)
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

int Rng::uniform_int(int lo, int hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t u;
    do {
        u = next_u64();
    } while (u >= limit);
    return lo + static_cast<int>(u % span);
}

double Rng::gaussian() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    // Box-Muller; u1 nudged away from zero so log() stays finite.
    double u1 = uniform();
    if (u1 < 0x1.0p-53) u1 = 0x1.0p-53;
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

double Rng::gaussian(double mu, double sd) { return mu + sd * gaussian(); }

Rng Rng::fork(std::uint64_t stream) const {
    return Rng(splitmix64(seed_ ^ splitmix64(stream + 0x632BE59BD9B4E019ULL)));
}

Rng Rng::fork(std::string_view stream) const { return fork(fnv1a64(stream)); }

}  // namespace gazeaudit
