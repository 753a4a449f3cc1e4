#include "gazeaudit/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "gazeaudit/embedding.hpp"
#include "gazeaudit/kinematics.hpp"

namespace gazeaudit {

std::vector<double> epoch_errors(const GazeWindow& w, const std::vector<TargetEpoch>& targets) {
    std::vector<double> errors;
    const double w_start = w.t0_ms;
    const double w_end = w.t0_ms + static_cast<double>(w.length());
    for (const auto& ep : targets) {
        // Steady state: last half of the epoch (skips the landing saccade).
        const double steady_start = ep.start_ms + 0.5 * (ep.end_ms - ep.start_ms);
        const double lo = std::max(steady_start, w_start);
        const double hi = std::min(ep.end_ms, w_end);
        if (hi <= lo) continue;
        double sx = 0.0, sy = 0.0;
        std::size_t count = 0;
        for (double t = std::ceil(lo); t < hi; t += 1.0) {
            const auto idx = static_cast<std::size_t>(t - w_start);
            if (idx >= w.length()) break;
            sx += w.x[idx];
            sy += w.y[idx];
            ++count;
        }
        if (count == 0) continue;
        const double cx = sx / static_cast<double>(count);
        const double cy = sy / static_cast<double>(count);
        errors.push_back(std::hypot(cx - ep.x_deg, cy - ep.y_deg));
    }
    return errors;
}

std::optional<double> spatial_accuracy(const GazeWindow& w, const std::vector<TargetEpoch>& targets) {
    const auto errors = epoch_errors(w, targets);
    if (errors.empty()) return std::nullopt;
    double s = 0.0;
    for (double e : errors) s += e;
    return s / static_cast<double>(errors.size());
}

double rms_sample_to_sample(const GazeWindow& w, SampleSpan span) {
    if (span.count() < 2) throw DataError("rms_sample_to_sample: need at least 2 samples");
    double ss = 0.0;
    for (std::size_t i = span.begin; i + 1 < span.end; ++i) {
        const double dx = w.x[i + 1] - w.x[i];
        const double dy = w.y[i + 1] - w.y[i];
        ss += dx * dx + dy * dy;
    }
    return std::sqrt(ss / static_cast<double>(span.count() - 1));
}

std::optional<double> rms_precision(const GazeWindow& w, const Segmentation& seg) {
    double ss = 0.0;
    std::size_t steps = 0;
    for (const auto& e : seg.events) {
        if (e.kind != EventKind::Fixation || e.span.count() < 2) continue;
        for (std::size_t i = e.span.begin; i + 1 < e.span.end; ++i) {
            const double dx = w.x[i + 1] - w.x[i];
            const double dy = w.y[i + 1] - w.y[i];
            ss += dx * dx + dy * dy;
        }
        steps += e.span.count() - 1;
    }
    if (steps == 0) return std::nullopt;
    return std::sqrt(ss / static_cast<double>(steps));
}

std::map<Task, TaskSimilarity> similarity_report(const std::vector<GazeWindow>& real_windows,
                                                 const std::vector<GazeWindow>& synth_windows) {
    std::map<WindowKey, const GazeWindow*> synth_by_key;
    for (const auto& w : synth_windows) {
        if (!synth_by_key.emplace(w.key, &w).second)
            throw IntegrityError("similarity_report: duplicate synthetic window " + w.key.to_string());
    }

    struct SubjAcc {
        double sum = 0.0;
        std::size_t n = 0;
    };
    std::map<Task, TaskSimilarity> out;
    std::map<Task, std::map<std::string, SubjAcc>> subj;
    for (const auto& rw : real_windows) {
        const auto it = synth_by_key.find(rw.key);
        if (it == synth_by_key.end())
            throw IntegrityError("similarity_report: no synthetic pair for window " +
                                 rw.key.to_string());
        const double c = cosine_similarity(encode(position_to_velocity(rw)),
                                           encode(position_to_velocity(*it->second)));
        auto& task_sim = out[rw.key.task];
        task_sim.cosine_mean += c;
        task_sim.pairs += 1;
        auto& acc = subj[rw.key.task][rw.key.subject_id];
        acc.sum += c;
        acc.n += 1;
    }
    for (auto& [task, sim] : out) {
        if (sim.pairs > 0) sim.cosine_mean /= static_cast<double>(sim.pairs);
        for (const auto& [subject, acc] : subj[task])
            sim.cosine_per_subject[subject] = acc.sum / static_cast<double>(acc.n);
    }
    return out;
}

}  // namespace gazeaudit
