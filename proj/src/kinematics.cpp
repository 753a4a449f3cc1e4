#include "gazeaudit/kinematics.hpp"

#include <cmath>

#include "gazeaudit/util.hpp"

namespace gazeaudit {

namespace {

std::vector<double> central_difference(const std::vector<double>& p) {
    const std::size_t n = p.size();
    std::vector<double> v(n, 0.0);
    if (n < 2) return v;
    v[0] = (p[1] - p[0]) / kSampleDtSec;
    v[n - 1] = (p[n - 1] - p[n - 2]) / kSampleDtSec;
    for (std::size_t i = 1; i + 1 < n; ++i) v[i] = (p[i + 1] - p[i - 1]) / (2.0 * kSampleDtSec);
    return v;
}

}  // namespace

VelocitySignal position_to_velocity(const GazeWindow& w) {
    VelocitySignal out;
    out.h = central_difference(w.x);
    out.v = central_difference(w.y);
    return out;
}

PositionTrace velocity_to_position(const VelocitySignal& v, double x0, double y0) {
    if (!v.all_finite()) throw NumericError("velocity_to_position: non-finite velocity input");
    const std::size_t n = v.length();
    PositionTrace p;
    p.x.resize(n);
    p.y.resize(n);
    if (n == 0) return p;
    p.x[0] = x0;
    p.y[0] = y0;
    for (std::size_t i = 1; i < n; ++i) {
        p.x[i] = p.x[i - 1] + 0.5 * (v.h[i - 1] + v.h[i]) * kSampleDtSec;
        p.y[i] = p.y[i - 1] + 0.5 * (v.v[i - 1] + v.v[i]) * kSampleDtSec;
    }
    return p;
}

std::vector<double> zero_phase_moving_average(const std::vector<double>& x, int taps) {
    if (taps < 1 || taps % 2 == 0) throw ConfigError("zero_phase_moving_average: taps must be odd and positive");
    const std::size_t n = x.size();
    std::vector<double> out(n, 0.0);
    const int half = taps / 2;
    // Prefix sums keep this O(n) regardless of the tap count.
    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + x[i];
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i >= static_cast<std::size_t>(half) ? i - half : 0;
        const std::size_t hi = std::min(n - 1, i + static_cast<std::size_t>(half));
        out[i] = (prefix[hi + 1] - prefix[lo]) / static_cast<double>(hi - lo + 1);
    }
    return out;
}

IdentityRemovedSignal identity_removal(const VelocitySignal& v) {
    if (!v.all_finite()) throw NumericError("identity_removal: non-finite velocity input");
    IdentityRemovedSignal out;
    out.h = zero_phase_moving_average(v.h, kIdentityLowpassTaps);
    out.v = zero_phase_moving_average(v.v, kIdentityLowpassTaps);
    const std::size_t n = out.length();
    if (n == 0) return out;
    std::vector<double> speed(n);
    for (std::size_t i = 0; i < n; ++i) speed[i] = std::hypot(out.h[i], out.v[i]);
    const double scale = std::max(quantile(std::move(speed), kIdentityNormPercentile), kIdentityNormFloorDps);
    for (std::size_t i = 0; i < n; ++i) {
        out.h[i] /= scale;
        out.v[i] /= scale;
    }
    return out;
}

}  // namespace gazeaudit
