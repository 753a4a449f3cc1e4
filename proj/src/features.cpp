#include "gazeaudit/features.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "gazeaudit/csv.hpp"
#include "gazeaudit/util.hpp"
#include "gazeaudit/version.hpp"

namespace gazeaudit {

namespace {

const char* kChannels[3] = {"H", "V", "R"};

// Measures carried per event kind, all aggregated by the pooled median. Nine
// per-channel families plus the channel-less duration give 28 entries per
// kind; with the two rates the catalog totals exactly 58.
const char* kSaccadeFamilies[] = {"Ampl",    "PathLen", "PkVel",     "MnVel",     "PkAccel",
                                  "MnAccel", "VelProfMn", "VelProfMd", "VelProfSd"};
const char* kFixationFamilies[] = {"DriftDisp", "DriftVel", "PosStd",    "PathLen",  "PkVel",
                                   "PkAccel",   "VelProfMn", "VelProfMd", "VelProfSd"};

std::vector<CatalogEntry> build_v1_entries() {
    std::vector<CatalogEntry> e;
    auto add_md = [&](EventKind kind, const char* prefix, const char* family) {
        for (const char* ch : kChannels) {
            CatalogEntry c;
            c.name = std::string(prefix) + "_" + family + "_" + ch + "_Md";
            c.event = kind;
            c.measure = family;
            c.channel = ch;
            c.agg = "Md";
            e.push_back(std::move(c));
        }
    };
    e.push_back({"Fix_Rate", EventKind::Fixation, "Rate", "R", "Rate"});
    e.push_back({"Fix_Dur_R_Md", EventKind::Fixation, "Dur", "R", "Md"});
    for (const char* fam : kFixationFamilies) add_md(EventKind::Fixation, "Fix", fam);
    e.push_back({"Sac_Rate", EventKind::Saccade, "Rate", "R", "Rate"});
    e.push_back({"Sac_Dur_R_Md", EventKind::Saccade, "Dur", "R", "Md"});
    for (const char* fam : kSaccadeFamilies) add_md(EventKind::Saccade, "Sac", fam);
    return e;
}

}  // namespace

FeatureCatalog::FeatureCatalog(std::string version, std::vector<CatalogEntry> entries)
    : version_(std::move(version)), entries_(std::move(entries)) {
    validate();
}

void FeatureCatalog::validate() const {
    if (entries_.size() != kFeatureCount)
        throw SchemaError("feature catalog must have exactly " + std::to_string(kFeatureCount) +
                          " entries, got " + std::to_string(entries_.size()));
    std::set<std::string> names;
    for (const auto& e : entries_) {
        if (!names.insert(e.name).second)
            throw SchemaError("feature catalog: duplicate name '" + e.name + "'");
        if (e.agg != "Md" && e.agg != "Rate")
            throw SchemaError("feature catalog: unknown aggregation '" + e.agg + "'");
        if (e.channel != "H" && e.channel != "V" && e.channel != "R")
            throw SchemaError("feature catalog: unknown channel '" + e.channel + "'");
    }
}

const FeatureCatalog& FeatureCatalog::v1() {
    static const FeatureCatalog cat(kCatalogVersion, build_v1_entries());
    return cat;
}

std::size_t FeatureCatalog::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < entries_.size(); ++i)
        if (entries_[i].name == name) return i;
    throw SchemaError("feature catalog: unknown feature '" + name + "'");
}

std::string FeatureCatalog::to_csv() const {
    CsvWriter w({"name", "event", "measure", "channel", "agg"});
    w.add_comment("feature catalog " + version_);
    for (const auto& e : entries_) {
        w.add_row({e.name, e.event == EventKind::Fixation ? "Fix" : "Sac", e.measure, e.channel,
                   e.agg});
    }
    return w.str();
}

FeatureCatalog FeatureCatalog::from_csv_text(const std::string& text, const std::string& label) {
    const CsvTable t = parse_csv(text, label, {"name", "event", "measure", "channel", "agg"});
    std::vector<CatalogEntry> entries;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        CatalogEntry e;
        e.name = t.cell(r, 0);
        const std::string& evt = t.cell(r, 1);
        if (evt == "Fix")
            e.event = EventKind::Fixation;
        else if (evt == "Sac")
            e.event = EventKind::Saccade;
        else
            throw ParseError(label + ":" + std::to_string(t.row_lines[r]) + ": bad event '" + evt + "'");
        e.measure = t.cell(r, 2);
        e.channel = t.cell(r, 3);
        e.agg = t.cell(r, 4);
        entries.push_back(std::move(e));
    }
    return FeatureCatalog(kCatalogVersion, std::move(entries));
}

FeatureKey feature_key(const WindowKey& k) {
    return FeatureKey{k.subject_id, k.session, k.round, k.task};
}

FeatureVector extract(const std::vector<Segmentation>& segs, const FeatureCatalog& catalog) {
    if (segs.empty()) throw ConfigError("extract: need at least one segmentation");
    FeatureVector out;
    out.key = FeatureKey{segs[0].key.subject_id, segs[0].key.session, segs[0].key.round,
                         segs[0].key.task};
    out.present.fill(false);
    out.values.fill(0.0);

    double total_seconds = 0.0;
    std::size_t n_fix = 0, n_sac = 0;
    // Pooled measure values per (kind, measure key).
    std::map<std::pair<EventKind, std::string>, std::vector<double>> pooled;
    for (const auto& seg : segs) {
        const FeatureKey k{seg.key.subject_id, seg.key.session, seg.key.round, seg.key.task};
        if (!(k == out.key)) throw IntegrityError("extract: segmentations span multiple keys");
        total_seconds += static_cast<double>(seg.length) * kSampleDtSec;
        for (const auto& e : seg.events) {
            (e.kind == EventKind::Fixation ? n_fix : n_sac) += 1;
            for (const auto& [mk, mv] : e.measures) pooled[{e.kind, mk}].push_back(mv);
        }
    }
    if (total_seconds <= 0.0) throw ConfigError("extract: zero analyzed duration");

    const auto& entries = catalog.entries();
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto& e = entries[i];
        if (e.agg == "Rate") {
            const std::size_t count = (e.event == EventKind::Fixation) ? n_fix : n_sac;
            out.values[i] = static_cast<double>(count) / total_seconds;
            out.present[i] = true;
            continue;
        }
        const std::string mk = (e.measure == "Dur") ? "Dur_R" : e.measure + "_" + e.channel;
        const auto it = pooled.find({e.event, mk});
        if (it == pooled.end() || it->second.empty()) continue;  // masked missing
        out.values[i] = median(it->second);
        out.present[i] = true;
    }
    return out;
}

FeatureTable feature_table(std::vector<FeatureVector> rows, const FeatureCatalog& catalog) {
    std::sort(rows.begin(), rows.end(),
              [](const FeatureVector& a, const FeatureVector& b) { return a.key < b.key; });
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].key == rows[i - 1].key)
            throw IntegrityError("feature table: duplicate key " + rows[i].key.subject_id + "/s" +
                                 std::to_string(rows[i].key.session) + "/r" +
                                 std::to_string(rows[i].key.round) + "/" +
                                 task_name(rows[i].key.task));
    }
    FeatureTable t;
    t.catalog = &catalog;
    t.rows = std::move(rows);
    return t;
}

std::string feature_table_to_csv(const FeatureTable& table, std::uint64_t seed,
                                 const std::string& config_hash) {
    std::vector<std::string> cols = {"subject_id", "session", "round", "task"};
    for (const auto& e : table.catalog->entries()) cols.push_back(e.name);
    for (const auto& e : table.catalog->entries()) cols.push_back(e.name + "_missing");
    CsvWriter w(cols);
    w.add_comment("feature table, catalog " + table.catalog->version());
    w.add_comment("seed: " + std::to_string(seed));
    w.add_comment("config_sha256: " + config_hash);
    for (const auto& row : table.rows) {
        std::vector<std::string> fields = {row.key.subject_id, std::to_string(row.key.session),
                                           std::to_string(row.key.round), task_name(row.key.task)};
        for (std::size_t i = 0; i < kFeatureCount; ++i)
            fields.push_back(row.present[i] ? format_double(row.values[i]) : "");
        for (std::size_t i = 0; i < kFeatureCount; ++i) fields.push_back(row.present[i] ? "0" : "1");
        w.add_row(fields);
    }
    return w.str();
}

FeatureTable feature_table_from_csv(const std::string& path, const FeatureCatalog& catalog) {
    std::vector<std::string> required = {"subject_id", "session", "round", "task"};
    for (const auto& e : catalog.entries()) required.push_back(e.name);
    const CsvTable t = read_csv(path, required);
    std::vector<FeatureVector> rows;
    const std::size_t c_subj = t.column_index("subject_id");
    const std::size_t c_sess = t.column_index("session");
    const std::size_t c_round = t.column_index("round");
    const std::size_t c_task = t.column_index("task");
    std::vector<std::size_t> fcols, mcols;
    for (const auto& e : catalog.entries()) fcols.push_back(t.column_index(e.name));
    for (const auto& e : catalog.entries()) mcols.push_back(t.column_index(e.name + "_missing"));
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        FeatureVector fv;
        fv.key.subject_id = t.cell(r, c_subj);
        fv.key.session = static_cast<int>(parse_long_field(t, r, c_sess));
        fv.key.round = static_cast<int>(parse_long_field(t, r, c_round));
        try {
            fv.key.task = task_from_name(t.cell(r, c_task));
        } catch (const SchemaError& e) {
            throw ParseError(path + ":" + std::to_string(t.row_lines[r]) + ": " + e.what());
        }
        for (std::size_t i = 0; i < kFeatureCount; ++i) {
            const bool missing = t.cell(r, mcols[i]) == "1";
            fv.present[i] = !missing;
            fv.values[i] = missing ? 0.0 : parse_double_field(t, r, fcols[i]);
        }
        rows.push_back(std::move(fv));
    }
    return feature_table(std::move(rows), catalog);
}

}  // namespace gazeaudit
