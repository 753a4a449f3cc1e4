#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gazeaudit/corpus.hpp"
#include "gazeaudit/events.hpp"
#include "gazeaudit/types.hpp"

namespace gazeaudit {

// Per-epoch accuracy samples: Euclidean distance in degree space between the
// steady-state gaze centroid (last 50% of the epoch, clipped to the window)
// and the target. Epochs without steady-state samples are skipped.
std::vector<double> epoch_errors(const GazeWindow& w, const std::vector<TargetEpoch>& targets);

// Mean epoch error for one window; nullopt when no epoch applies.
std::optional<double> spatial_accuracy(const GazeWindow& w, const std::vector<TargetEpoch>& targets);

// RMS of sample-to-sample displacement over one sample span (>= 2 samples).
double rms_sample_to_sample(const GazeWindow& w, SampleSpan span);

// Pooled over the segmentation's fixations, weighted by displacement count;
// nullopt when no fixation has at least 2 samples.
std::optional<double> rms_precision(const GazeWindow& w, const Segmentation& seg);

struct TaskSimilarity {
    double cosine_mean = 0.0;
    std::size_t pairs = 0;
    std::map<std::string, double> cosine_per_subject;  // per-subject mean
};

// Pairs real and synthetic windows by full window key and compares their
// velocity embeddings. Unpaired windows are an integrity error.
std::map<Task, TaskSimilarity> similarity_report(const std::vector<GazeWindow>& real_windows,
                                                 const std::vector<GazeWindow>& synth_windows);

}  // namespace gazeaudit
