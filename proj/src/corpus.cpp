#include "gazeaudit/corpus.hpp"

#include <algorithm>
#include <cmath>

#include "gazeaudit/csv.hpp"
#include "gazeaudit/error.hpp"
#include "gazeaudit/util.hpp"

namespace gazeaudit {

std::vector<RecordingMeta> read_manifest(const std::string& path) {
    const CsvTable t = read_csv(path, {"file", "subject_id", "session", "round", "task"});
    const std::size_t c_file = t.column_index("file");
    const std::size_t c_subj = t.column_index("subject_id");
    const std::size_t c_sess = t.column_index("session");
    const std::size_t c_round = t.column_index("round");
    const std::size_t c_task = t.column_index("task");
    std::vector<RecordingMeta> out;
    out.reserve(t.rows.size());
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        RecordingMeta m;
        m.file = t.cell(r, c_file);
        m.subject_id = t.cell(r, c_subj);
        m.session = static_cast<int>(parse_long_field(t, r, c_sess));
        m.round = static_cast<int>(parse_long_field(t, r, c_round));
        try {
            m.task = task_from_name(t.cell(r, c_task));
        } catch (const SchemaError& e) {
            throw ParseError(path + ":" + std::to_string(t.row_lines[r]) + ": " + e.what());
        }
        out.push_back(std::move(m));
    }
    return out;
}

Recording read_gaze_csv(const std::string& path, const RecordingMeta& meta) {
    const CsvTable t = read_csv(path, {"t_ms", "x_deg", "y_deg", "valid"});
    const std::size_t c_t = t.column_index("t_ms");
    const std::size_t c_x = t.column_index("x_deg");
    const std::size_t c_y = t.column_index("y_deg");
    const std::size_t c_v = t.column_index("valid");

    Recording rec;
    rec.meta = meta;
    rec.samples.reserve(t.rows.size());
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        GazeSample s;
        s.t_ms = parse_double_field(t, r, c_t);
        s.x_deg = parse_double_field(t, r, c_x);
        s.y_deg = parse_double_field(t, r, c_y);
        const long v = parse_long_field(t, r, c_v);
        if (v != 0 && v != 1)
            throw ParseError(path + ":" + std::to_string(t.row_lines[r]) + ": valid must be 0 or 1");
        s.valid = (v == 1);
        if (s.valid && (!std::isfinite(s.x_deg) || !std::isfinite(s.y_deg)))
            throw ParseError(path + ":" + std::to_string(t.row_lines[r]) +
                             ": non-finite position on a valid sample");
        if (!rec.samples.empty()) {
            const double dt = s.t_ms - rec.samples.back().t_ms;
            if (!(dt > 0.0))
                throw ParseError(path + ":" + std::to_string(t.row_lines[r]) +
                                 ": timestamps must be strictly increasing");
            if (std::abs(dt - 1.0) > 1e-9)
                throw ParseError(path + ":" + std::to_string(t.row_lines[r]) +
                                 ": sample spacing must be exactly 1 ms, got " + format_double(dt));
        }
        rec.samples.push_back(s);
    }
    return rec;
}

namespace {

std::size_t longest_invalid_run(const std::vector<std::uint8_t>& valid) {
    std::size_t best = 0, cur = 0;
    for (std::uint8_t v : valid) {
        cur = v ? 0 : cur + 1;
        best = std::max(best, cur);
    }
    return best;
}

}  // namespace

GazeWindow interpolate_invalid(const GazeWindow& w) {
    const std::size_t n = w.length();
    const std::size_t run = longest_invalid_run(w.valid);
    if (static_cast<double>(run) > kMaxInvalidRunMs)
        throw DataError("window " + w.key.to_string() + " rejected: invalid run of " +
                        std::to_string(run) + " ms exceeds " + format_double(kMaxInvalidRunMs) + " ms");

    GazeWindow out = w;
    std::size_t i = 0;
    while (i < n) {
        if (out.valid[i]) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < n && !out.valid[j]) ++j;
        // Invalid run [i, j). Interpolate between neighbors; clamp at the edges.
        const bool has_left = i > 0;
        const bool has_right = j < n;
        if (!has_left && !has_right) throw DataError("window " + w.key.to_string() + " has no valid samples");
        for (std::size_t k = i; k < j; ++k) {
            if (has_left && has_right) {
                const double span = static_cast<double>(j - (i - 1));
                const double f = static_cast<double>(k - (i - 1)) / span;
                out.x[k] = w.x[i - 1] + f * (w.x[j] - w.x[i - 1]);
                out.y[k] = w.y[i - 1] + f * (w.y[j] - w.y[i - 1]);
            } else if (has_left) {
                out.x[k] = w.x[i - 1];
                out.y[k] = w.y[i - 1];
            } else {
                out.x[k] = w.x[j];
                out.y[k] = w.y[j];
            }
        }
        i = j;
    }
    return out;
}

LoadResult windows_from_recording(const Recording& rec) {
    LoadResult res;
    res.report.recordings = 1;
    const std::size_t n_windows = rec.samples.size() / kWindowLength;
    for (std::size_t k = 0; k < n_windows; ++k) {
        const std::size_t base = k * kWindowLength;
        GazeWindow w;
        w.key.subject_id = rec.meta.subject_id;
        w.key.session = rec.meta.session;
        w.key.round = rec.meta.round;
        w.key.task = rec.meta.task;
        w.key.window_index = static_cast<int>(k);
        w.t0_ms = rec.samples[base].t_ms;
        w.x.resize(kWindowLength);
        w.y.resize(kWindowLength);
        w.valid.resize(kWindowLength);
        std::size_t invalid = 0;
        for (std::size_t i = 0; i < kWindowLength; ++i) {
            const GazeSample& s = rec.samples[base + i];
            w.x[i] = s.x_deg;
            w.y[i] = s.y_deg;
            w.valid[i] = s.valid ? 1 : 0;
            if (!s.valid) ++invalid;
        }
        if (static_cast<double>(invalid) > kMaxInvalidFraction * static_cast<double>(kWindowLength)) {
            ++res.report.dropped_invalid_fraction;
            continue;
        }
        if (static_cast<double>(longest_invalid_run(w.valid)) > kMaxInvalidRunMs) {
            ++res.report.dropped_long_run;
            continue;
        }
        res.windows.push_back(interpolate_invalid(w));
        ++res.report.windows_emitted;
    }
    return res;
}

LoadResult load_recordings(const std::string& dir, const std::string& manifest_path) {
    const auto manifest = read_manifest(manifest_path);
    LoadResult res;
    for (const auto& meta : manifest) {
        const Recording rec = read_gaze_csv(path_join(dir, meta.file), meta);
        LoadResult one = windows_from_recording(rec);
        res.report.recordings += one.report.recordings;
        res.report.windows_emitted += one.report.windows_emitted;
        res.report.dropped_invalid_fraction += one.report.dropped_invalid_fraction;
        res.report.dropped_long_run += one.report.dropped_long_run;
        for (auto& w : one.windows) res.windows.push_back(std::move(w));
    }
    return res;
}

std::vector<SubjectiveReport> read_ratings_csv(const std::string& path) {
    const CsvTable t = read_csv(
        path, {"subject_id", "session", "round", "task", "over_diff", "mentally", "tired_eyes"});
    const std::size_t c_subj = t.column_index("subject_id");
    const std::size_t c_sess = t.column_index("session");
    const std::size_t c_round = t.column_index("round");
    const std::size_t c_task = t.column_index("task");
    const std::size_t c_od = t.column_index("over_diff");
    const std::size_t c_me = t.column_index("mentally");
    const std::size_t c_te = t.column_index("tired_eyes");
    std::vector<SubjectiveReport> out;
    out.reserve(t.rows.size());
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        SubjectiveReport rep;
        rep.subject_id = t.cell(r, c_subj);
        rep.session = static_cast<int>(parse_long_field(t, r, c_sess));
        rep.round = static_cast<int>(parse_long_field(t, r, c_round));
        try {
            rep.task = task_from_name(t.cell(r, c_task));
        } catch (const SchemaError& e) {
            throw ParseError(path + ":" + std::to_string(t.row_lines[r]) + ": " + e.what());
        }
        rep.over_diff = static_cast<int>(parse_long_field(t, r, c_od));
        rep.mentally = static_cast<int>(parse_long_field(t, r, c_me));
        rep.tired_eyes = static_cast<int>(parse_long_field(t, r, c_te));
        for (int k = 0; k < kRatingCount; ++k) {
            const int v = rating_value(rep, k);
            if (v < 1 || v > 7)
                throw ParseError(path + ":" + std::to_string(t.row_lines[r]) + ": " +
                                 rating_name(k) + " must be in [1,7], got " + std::to_string(v));
        }
        out.push_back(std::move(rep));
    }
    return out;
}

std::vector<RecordingTargets> read_targets_csv(const std::string& path) {
    const CsvTable t = read_csv(path, {"file", "start_ms", "end_ms", "x_deg", "y_deg"});
    const std::size_t c_file = t.column_index("file");
    const std::size_t c_s = t.column_index("start_ms");
    const std::size_t c_e = t.column_index("end_ms");
    const std::size_t c_x = t.column_index("x_deg");
    const std::size_t c_y = t.column_index("y_deg");
    std::vector<RecordingTargets> out;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const std::string& file = t.cell(r, c_file);
        if (out.empty() || out.back().file != file) out.push_back(RecordingTargets{file, {}});
        TargetEpoch e;
        e.start_ms = parse_double_field(t, r, c_s);
        e.end_ms = parse_double_field(t, r, c_e);
        e.x_deg = parse_double_field(t, r, c_x);
        e.y_deg = parse_double_field(t, r, c_y);
        if (!(e.end_ms > e.start_ms))
            throw ParseError(path + ":" + std::to_string(t.row_lines[r]) + ": empty target epoch");
        out.back().epochs.push_back(e);
    }
    return out;
}

namespace {

void add_provenance(CsvWriter& w, const CorpusWriteMeta& meta) {
    w.add_comment("generator: gazeaudit " + meta.tool_version);
    w.add_comment("seed: " + std::to_string(meta.seed));
    w.add_comment("config_sha256: " + meta.config_hash);
}

}  // namespace

void write_gaze_csv(const std::string& path, const Recording& rec, const CorpusWriteMeta& meta) {
    CsvWriter w({"t_ms", "x_deg", "y_deg", "valid"});
    add_provenance(w, meta);
    for (const auto& s : rec.samples) {
        w.add_row({format_double(s.t_ms), format_double(s.x_deg), format_double(s.y_deg),
                   s.valid ? "1" : "0"});
    }
    write_file_atomic(path, w.str());
}

void write_manifest_csv(const std::string& path, const std::vector<RecordingMeta>& entries,
                        const CorpusWriteMeta& meta) {
    CsvWriter w({"file", "subject_id", "session", "round", "task"});
    add_provenance(w, meta);
    for (const auto& e : entries) {
        w.add_row({e.file, e.subject_id, std::to_string(e.session), std::to_string(e.round),
                   task_name(e.task)});
    }
    write_file_atomic(path, w.str());
}

void write_ratings_csv(const std::string& path, const std::vector<SubjectiveReport>& reports,
                       const CorpusWriteMeta& meta) {
    CsvWriter w({"subject_id", "session", "round", "task", "over_diff", "mentally", "tired_eyes"});
    add_provenance(w, meta);
    for (const auto& r : reports) {
        w.add_row({r.subject_id, std::to_string(r.session), std::to_string(r.round),
                   task_name(r.task), std::to_string(r.over_diff), std::to_string(r.mentally),
                   std::to_string(r.tired_eyes)});
    }
    write_file_atomic(path, w.str());
}

void write_targets_csv(const std::string& path, const std::vector<RecordingTargets>& targets,
                       const CorpusWriteMeta& meta) {
    CsvWriter w({"file", "start_ms", "end_ms", "x_deg", "y_deg"});
    add_provenance(w, meta);
    for (const auto& t : targets) {
        for (const auto& e : t.epochs) {
            w.add_row({t.file, format_double(e.start_ms), format_double(e.end_ms),
                       format_double(e.x_deg), format_double(e.y_deg)});
        }
    }
    write_file_atomic(path, w.str());
}

}  // namespace gazeaudit
