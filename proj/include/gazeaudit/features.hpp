#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "gazeaudit/events.hpp"
#include "gazeaudit/types.hpp"

namespace gazeaudit {

inline constexpr std::size_t kFeatureCount = 58;

// One catalog row: `<Evt>_<Measure>_<Channel>_<Agg>` (Md rows) or the two rate
// entries `Fix_Rate` / `Sac_Rate`. Each row binds to an implemented event
// measure; the catalog is versioned and shipped as a CSV data file.
struct CatalogEntry {
    std::string name;
    EventKind event = EventKind::Fixation;
    std::string measure;  // e.g. "Ampl", "VelProfMn", "Rate"
    std::string channel;  // H, V or R
    std::string agg;      // "Md" or "Rate"
};

class FeatureCatalog {
public:
    static const FeatureCatalog& v1();

    const std::vector<CatalogEntry>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    std::size_t index_of(const std::string& name) const;  // throws SchemaError
    const std::string& version() const { return version_; }

    std::string to_csv() const;
    static FeatureCatalog from_csv_text(const std::string& text, const std::string& label);

private:
    FeatureCatalog(std::string version, std::vector<CatalogEntry> entries);
    void validate() const;

    std::string version_;
    std::vector<CatalogEntry> entries_;
};

// Per-cell key: one feature vector per (subject, session, round, task).
struct FeatureKey {
    std::string subject_id;
    int session = 1;
    int round = 1;
    Task task = Task::HSS;

    auto tie() const { return std::tie(subject_id, session, round, task); }
    bool operator==(const FeatureKey& o) const { return tie() == o.tie(); }
    bool operator<(const FeatureKey& o) const { return tie() < o.tie(); }
};
FeatureKey feature_key(const WindowKey& k);

struct FeatureVector {
    FeatureKey key;
    std::array<double, kFeatureCount> values{};
    std::array<bool, kFeatureCount> present{};
};

// Pools events across all windows of one key: Rate = events per analyzed
// second, Md = median over pooled events. Absent event kinds leave their Md
// entries masked; rates are 0.
FeatureVector extract(const std::vector<Segmentation>& segs, const FeatureCatalog& catalog);

struct FeatureTable {
    const FeatureCatalog* catalog = nullptr;
    std::vector<FeatureVector> rows;  // sorted by key
};

// Canonically sorted table; duplicate keys are an integrity error.
FeatureTable feature_table(std::vector<FeatureVector> rows, const FeatureCatalog& catalog);

std::string feature_table_to_csv(const FeatureTable& table, std::uint64_t seed,
                                 const std::string& config_hash);
FeatureTable feature_table_from_csv(const std::string& path, const FeatureCatalog& catalog);

}  // namespace gazeaudit
