#pragma once

#include <map>
#include <string>
#include <vector>

#include "gazeaudit/types.hpp"

namespace gazeaudit {

// Velocity-threshold segmentation defaults. Published as named configuration so
// audits are reproducible and tunable.
struct SegmentationConfig {
    double open_threshold_dps = 45.0;   // resultant speed opening a saccade
    double close_threshold_dps = 25.0;  // hysteresis close
    double min_saccade_ms = 10.0;
    double min_fixation_ms = 50.0;
    double merge_max_gap_ms = 75.0;     // fixation merge across short gaps
    double merge_max_dist_deg = 0.5;
};

enum class EventKind { Fixation, Saccade };
const char* event_kind_name(EventKind k);

// Half-open sample span [begin, end); 1 sample = 1 ms.
struct SampleSpan {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::size_t count() const { return end - begin; }
};

struct Event {
    EventKind kind = EventKind::Fixation;
    SampleSpan span;
    double start_ms = 0.0;  // window-relative
    double end_ms = 0.0;
    std::map<std::string, double> measures;
};

struct Segmentation {
    WindowKey key;
    std::size_t length = 0;
    std::vector<Event> events;            // sorted by start
    std::vector<SampleSpan> unclassified; // complement of the events
};

// Measure map keys are "<Measure>_<Channel>" (e.g. "Ampl_H", "VelProfMn_R");
// duration is "Dur_R". Fixation-only entries: DriftDisp/DriftVel/PosStd.
std::map<std::string, double> event_measures(EventKind kind, SampleSpan span,
                                             const VelocitySignal& v, const GazeWindow& p);

// Hysteresis classification: resultant speed >= open starts a saccade, < close
// ends it; sub-10 ms saccades are discarded; remaining spans become fixation
// candidates; sub-50 ms candidates stay unclassified; consecutive fixations
// separated by < 75 ms and < 0.5 deg merge across the gap.
Segmentation segment(const VelocitySignal& v, const GazeWindow& p,
                     const SegmentationConfig& cfg = SegmentationConfig());

}  // namespace gazeaudit
