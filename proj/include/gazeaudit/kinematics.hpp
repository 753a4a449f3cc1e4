#pragma once

#include "gazeaudit/types.hpp"

namespace gazeaudit {

// Central-difference velocity estimate, one-sided at the endpoints. Input must
// be a gap-free window (invalid runs already interpolated).
VelocitySignal position_to_velocity(const GazeWindow& w);

// Cumulative trapezoidal integration anchored at (x0, y0). Returns positions in
// degrees with the same length as the velocity signal.
struct PositionTrace {
    std::vector<double> x;
    std::vector<double> y;
};
PositionTrace velocity_to_position(const VelocitySignal& v, double x0, double y0);

// Symmetric zero-phase moving average. `taps` must be odd; edges use the
// truncated window renormalized to the in-range tap count.
std::vector<double> zero_phase_moving_average(const std::vector<double>& x, int taps);

// Nominal 50 ms low-pass window; realized as 51 taps so the kernel is symmetric
// (exactly zero phase) at the 1 kHz sample rate.
inline constexpr int kIdentityLowpassTaps = 51;
inline constexpr double kIdentityNormFloorDps = 1.0;
inline constexpr double kIdentityNormPercentile = 0.95;

// Identity suppression: per-channel zero-phase moving average, then both
// channels divided by the 95th-percentile resultant speed of the smoothed
// signal (floored at 1 deg/s). Deterministic.
IdentityRemovedSignal identity_removal(const VelocitySignal& v);

}  // namespace gazeaudit
