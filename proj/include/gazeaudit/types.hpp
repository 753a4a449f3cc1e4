#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <tuple>
#include <vector>

#include "gazeaudit/error.hpp"

namespace gazeaudit {

// Sampling rate is fixed by the data model: 1,000 Hz, 1 ms per sample.
inline constexpr double kSampleRateHz = 1000.0;
inline constexpr double kSampleDtSec = 1.0 / kSampleRateHz;
inline constexpr std::size_t kWindowLength = 5000;  // 5 s windows

enum class Task { HSS, RAN, TEX };

const char* task_name(Task t);
Task task_from_name(const std::string& name);  // throws SchemaError on unknown task

struct GazeSample {
    double t_ms = 0.0;
    double x_deg = 0.0;
    double y_deg = 0.0;
    bool valid = true;
};

// Identifies one (subject, session, round, task) cell; window_index distinguishes
// the 5 s windows cut from that cell's recording.
struct WindowKey {
    std::string subject_id;
    int session = 1;
    int round = 1;
    Task task = Task::HSS;
    int window_index = 0;

    auto tie() const { return std::tie(subject_id, session, round, task, window_index); }
    bool operator==(const WindowKey& o) const { return tie() == o.tie(); }
    bool operator<(const WindowKey& o) const { return tie() < o.tie(); }
    std::string to_string() const;
};

// Exactly kWindowLength samples at 1 ms spacing. `valid` keeps the original
// validity flags even after gaps have been interpolated.
struct GazeWindow {
    WindowKey key;
    double t0_ms = 0.0;
    std::vector<double> x;  // degrees of visual angle
    std::vector<double> y;
    std::vector<std::uint8_t> valid;

    std::size_t length() const { return x.size(); }
};

// Generic two-channel sequence (horizontal, vertical). Velocity-like signals and
// diffusion-state tensors share this layout.
struct Seq2 {
    std::vector<double> h;
    std::vector<double> v;

    Seq2() = default;
    explicit Seq2(std::size_t n) : h(n, 0.0), v(n, 0.0) {}
    std::size_t length() const { return h.size(); }
    bool same_shape(const Seq2& o) const { return h.size() == o.h.size() && v.size() == o.v.size(); }
    bool all_finite() const;
};

using VelocitySignal = Seq2;         // deg/s
using IdentityRemovedSignal = Seq2;  // deg/s, low-passed and magnitude-normalized
using NoiseTensor = Seq2;

struct SubjectiveReport {
    std::string subject_id;
    int session = 1;
    int round = 1;
    Task task = Task::HSS;
    int over_diff = 1;  // 1..7 Likert
    int mentally = 1;
    int tired_eyes = 1;
};

inline constexpr int kRatingCount = 3;
const char* rating_name(int idx);  // 0=OverDiff, 1=Mentally, 2=TiredEyes
int rating_value(const SubjectiveReport& r, int idx);

}  // namespace gazeaudit
