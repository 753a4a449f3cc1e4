#include "gazeaudit/events.hpp"

#include <algorithm>
#include <cmath>

#include "gazeaudit/util.hpp"

namespace gazeaudit {

const char* event_kind_name(EventKind k) {
    return k == EventKind::Fixation ? "Fixation" : "Saccade";
}

namespace {

struct ChannelSeries {
    std::vector<double> speed;  // |v| per channel (H, V) and resultant (R)
};

double span_centroid_x(const GazeWindow& p, SampleSpan s) {
    double acc = 0.0;
    for (std::size_t i = s.begin; i < s.end; ++i) acc += p.x[i];
    return acc / static_cast<double>(s.count());
}

double span_centroid_y(const GazeWindow& p, SampleSpan s) {
    double acc = 0.0;
    for (std::size_t i = s.begin; i < s.end; ++i) acc += p.y[i];
    return acc / static_cast<double>(s.count());
}

void channel_stats(const std::vector<double>& absvel, const char* ch,
                   std::map<std::string, double>& m) {
    const std::size_t n = absvel.size();
    double peak = 0.0, sum = 0.0;
    for (double s : absvel) {
        peak = std::max(peak, s);
        sum += s;
    }
    m[std::string("PkVel_") + ch] = peak;
    m[std::string("VelProfMn_") + ch] = n ? sum / static_cast<double>(n) : 0.0;
    m[std::string("VelProfMd_") + ch] = n ? median(absvel) : 0.0;
    m[std::string("VelProfSd_") + ch] = sample_sd(absvel);

    double pk_acc = 0.0, mn_acc = 0.0;
    if (n >= 2) {
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const double a = std::abs(absvel[i + 1] - absvel[i]) / kSampleDtSec;
            pk_acc = std::max(pk_acc, a);
            mn_acc += a;
        }
        mn_acc /= static_cast<double>(n - 1);
    }
    m[std::string("PkAccel_") + ch] = pk_acc;
    m[std::string("MnAccel_") + ch] = mn_acc;
}

}  // namespace

std::map<std::string, double> event_measures(EventKind kind, SampleSpan span,
                                             const VelocitySignal& v, const GazeWindow& p) {
    if (span.end > v.length() || span.end > p.length() || span.count() == 0)
        throw ConfigError("event_measures: span outside window");
    std::map<std::string, double> m;
    const std::size_t n = span.count();
    const double dur_s = static_cast<double>(n) * kSampleDtSec;
    m["Dur_R"] = static_cast<double>(n);  // ms

    // Endpoint displacement per channel.
    const double dx = p.x[span.end - 1] - p.x[span.begin];
    const double dy = p.y[span.end - 1] - p.y[span.begin];
    const double dr = std::hypot(dx, dy);

    // Path length per channel.
    double path_h = 0.0, path_v = 0.0, path_r = 0.0;
    for (std::size_t i = span.begin; i + 1 < span.end; ++i) {
        const double sx = p.x[i + 1] - p.x[i];
        const double sy = p.y[i + 1] - p.y[i];
        path_h += std::abs(sx);
        path_v += std::abs(sy);
        path_r += std::hypot(sx, sy);
    }
    m["PathLen_H"] = path_h;
    m["PathLen_V"] = path_v;
    m["PathLen_R"] = path_r;

    std::vector<double> ah(n), av(n), ar(n);
    for (std::size_t i = 0; i < n; ++i) {
        ah[i] = std::abs(v.h[span.begin + i]);
        av[i] = std::abs(v.v[span.begin + i]);
        ar[i] = std::hypot(v.h[span.begin + i], v.v[span.begin + i]);
    }
    channel_stats(ah, "H", m);
    channel_stats(av, "V", m);
    channel_stats(ar, "R", m);

    if (kind == EventKind::Saccade) {
        m["Ampl_H"] = std::abs(dx);
        m["Ampl_V"] = std::abs(dy);
        m["Ampl_R"] = dr;
        m["MnVel_H"] = std::abs(dx) / dur_s;
        m["MnVel_V"] = std::abs(dy) / dur_s;
        m["MnVel_R"] = dr / dur_s;
    } else {
        m["DriftDisp_H"] = std::abs(dx);
        m["DriftDisp_V"] = std::abs(dy);
        m["DriftDisp_R"] = dr;
        m["DriftVel_H"] = std::abs(dx) / dur_s;
        m["DriftVel_V"] = std::abs(dy) / dur_s;
        m["DriftVel_R"] = dr / dur_s;

        // Positional dispersion; R is the RMS distance from the centroid.
        const double cx = span_centroid_x(p, span);
        const double cy = span_centroid_y(p, span);
        double varx = 0.0, vary = 0.0;
        for (std::size_t i = span.begin; i < span.end; ++i) {
            varx += (p.x[i] - cx) * (p.x[i] - cx);
            vary += (p.y[i] - cy) * (p.y[i] - cy);
        }
        const double denom = static_cast<double>(n > 1 ? n - 1 : 1);
        varx /= denom;
        vary /= denom;
        m["PosStd_H"] = std::sqrt(varx);
        m["PosStd_V"] = std::sqrt(vary);
        m["PosStd_R"] = std::sqrt(varx + vary);
    }
    return m;
}

Segmentation segment(const VelocitySignal& v, const GazeWindow& p, const SegmentationConfig& cfg) {
    const std::size_t n = v.length();
    if (p.length() != n) throw ConfigError("segment: velocity/position length mismatch");
    Segmentation seg;
    seg.key = p.key;
    seg.length = n;
    if (n == 0) return seg;

    // Pass 1: hysteresis saccade detection on resultant speed.
    std::vector<SampleSpan> saccades;
    bool in_sac = false;
    std::size_t start = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double s = std::hypot(v.h[i], v.v[i]);
        if (!in_sac && s >= cfg.open_threshold_dps) {
            in_sac = true;
            start = i;
        } else if (in_sac && s < cfg.close_threshold_dps) {
            saccades.push_back({start, i});
            in_sac = false;
        }
    }
    if (in_sac) saccades.push_back({start, n});

    // Pass 2: tile the window into items. Sub-minimum saccades are discarded
    // (unclassified); spans between detected saccades are fixation candidates,
    // themselves unclassified when shorter than the fixation minimum.
    enum class ItemType { KeptSaccade, Fixation, Unclassified };
    struct Item {
        SampleSpan span;
        ItemType type;
    };
    std::vector<Item> items;
    std::size_t cursor = 0;
    auto push_gap = [&](std::size_t begin, std::size_t end) {
        if (end <= begin) return;
        const SampleSpan s{begin, end};
        const bool fix = static_cast<double>(s.count()) >= cfg.min_fixation_ms;
        items.push_back({s, fix ? ItemType::Fixation : ItemType::Unclassified});
    };
    for (const auto& s : saccades) {
        push_gap(cursor, s.begin);
        const bool keep = static_cast<double>(s.count()) >= cfg.min_saccade_ms;
        items.push_back({s, keep ? ItemType::KeptSaccade : ItemType::Unclassified});
        cursor = s.end;
    }
    push_gap(cursor, n);

    // Pass 3: merge consecutive fixations separated only by short unclassified
    // material (discarded blips) when the gap is brief and the eye stayed put.
    std::vector<Item> merged;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (items[i].type != ItemType::Fixation) {
            merged.push_back(items[i]);
            continue;
        }
        SampleSpan cur = items[i].span;
        std::size_t j = i + 1;
        while (j < items.size()) {
            // Look for the next fixation with nothing but unclassified spans between.
            std::size_t k = j;
            while (k < items.size() && items[k].type == ItemType::Unclassified) ++k;
            if (k >= items.size() || items[k].type != ItemType::Fixation) break;
            const SampleSpan next = items[k].span;
            const double gap_ms = static_cast<double>(next.begin - cur.end);
            const double cx1 = span_centroid_x(p, cur), cy1 = span_centroid_y(p, cur);
            const double cx2 = span_centroid_x(p, next), cy2 = span_centroid_y(p, next);
            const double dist = std::hypot(cx2 - cx1, cy2 - cy1);
            if (gap_ms < cfg.merge_max_gap_ms && dist < cfg.merge_max_dist_deg) {
                cur.end = next.end;  // absorb the gap and the next fixation
                j = k + 1;
            } else {
                break;
            }
        }
        // Items in [i+1, j) lie inside the extended span and are consumed.
        merged.push_back({cur, ItemType::Fixation});
        i = j - 1;
    }

    std::vector<SampleSpan> kept;
    std::vector<SampleSpan> fixations;
    for (const auto& it : merged) {
        if (it.type == ItemType::KeptSaccade) kept.push_back(it.span);
        if (it.type == ItemType::Fixation) fixations.push_back(it.span);
    }

    // Assemble events with measures; compute the unclassified complement.
    for (const auto& s : kept) {
        Event e;
        e.kind = EventKind::Saccade;
        e.span = s;
        e.start_ms = static_cast<double>(s.begin);
        e.end_ms = static_cast<double>(s.end);
        e.measures = event_measures(EventKind::Saccade, s, v, p);
        seg.events.push_back(std::move(e));
    }
    for (const auto& s : fixations) {
        Event e;
        e.kind = EventKind::Fixation;
        e.span = s;
        e.start_ms = static_cast<double>(s.begin);
        e.end_ms = static_cast<double>(s.end);
        e.measures = event_measures(EventKind::Fixation, s, v, p);
        seg.events.push_back(std::move(e));
    }
    std::sort(seg.events.begin(), seg.events.end(),
              [](const Event& a, const Event& b) { return a.span.begin < b.span.begin; });

    std::size_t pos = 0;
    for (const auto& e : seg.events) {
        if (e.span.begin > pos) seg.unclassified.push_back({pos, e.span.begin});
        pos = e.span.end;
    }
    if (pos < n) seg.unclassified.push_back({pos, n});
    return seg;
}

}  // namespace gazeaudit
