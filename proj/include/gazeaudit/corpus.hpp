#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gazeaudit/types.hpp"

namespace gazeaudit {

// On-disk corpus layout: one gaze CSV per (subject, session, round, task)
// recording plus manifest.csv, ratings.csv and (optionally) targets.csv.
//
//   gaze CSV:    t_ms,x_deg,y_deg,valid           valid in {0,1}
//   manifest:    file,subject_id,session,round,task
//   ratings:     subject_id,session,round,task,over_diff,mentally,tired_eyes
//   targets:     file,start_ms,end_ms,x_deg,y_deg  (stimulus epochs, HSS/RAN)

struct RecordingMeta {
    std::string file;  // relative to the corpus directory
    std::string subject_id;
    int session = 1;
    int round = 1;
    Task task = Task::HSS;
};

struct Recording {
    RecordingMeta meta;
    std::vector<GazeSample> samples;
};

struct TargetEpoch {
    double start_ms = 0.0;
    double end_ms = 0.0;
    double x_deg = 0.0;
    double y_deg = 0.0;
};

struct RecordingTargets {
    std::string file;
    std::vector<TargetEpoch> epochs;
};

// Gap policy for window admission.
inline constexpr double kMaxInvalidFraction = 0.10;
inline constexpr double kMaxInvalidRunMs = 75.0;

struct LoadReport {
    std::size_t recordings = 0;
    std::size_t windows_emitted = 0;
    std::size_t dropped_invalid_fraction = 0;
    std::size_t dropped_long_run = 0;
};

struct LoadResult {
    std::vector<GazeWindow> windows;
    LoadReport report;
};

std::vector<RecordingMeta> read_manifest(const std::string& path);
Recording read_gaze_csv(const std::string& path, const RecordingMeta& meta);

// Cuts a recording into non-overlapping, left-aligned 5,000-sample windows and
// applies the gap policy: >10% invalid samples or an invalid run longer than
// 75 ms drops the window (counted in the report); surviving gaps are linearly
// interpolated. Trailing partial windows are ignored.
LoadResult windows_from_recording(const Recording& rec);

// Loads every manifest entry from `dir` in manifest order. Deterministic:
// the same directory content always yields the same window list.
LoadResult load_recordings(const std::string& dir, const std::string& manifest_path);

// Linear interpolation across invalid runs; edge runs extend the nearest valid
// sample. Throws DataError when a run exceeds 75 ms; validity flags are kept.
GazeWindow interpolate_invalid(const GazeWindow& w);

std::vector<SubjectiveReport> read_ratings_csv(const std::string& path);
std::vector<RecordingTargets> read_targets_csv(const std::string& path);

// Writers used by `simulate` and `synthesize`. Comment lines carry the seed and
// config hash so every artifact records its provenance.
struct CorpusWriteMeta {
    std::uint64_t seed = 0;
    std::string config_hash;
    std::string tool_version;
};

void write_gaze_csv(const std::string& path, const Recording& rec, const CorpusWriteMeta& meta);
void write_manifest_csv(const std::string& path, const std::vector<RecordingMeta>& entries,
                        const CorpusWriteMeta& meta);
void write_ratings_csv(const std::string& path, const std::vector<SubjectiveReport>& reports,
                       const CorpusWriteMeta& meta);
void write_targets_csv(const std::string& path, const std::vector<RecordingTargets>& targets,
                       const CorpusWriteMeta& meta);

}  // namespace gazeaudit
