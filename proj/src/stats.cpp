#include "gazeaudit/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>
#include <nlohmann/json.hpp>

#include "gazeaudit/csv.hpp"
#include "gazeaudit/util.hpp"

namespace gazeaudit {

std::vector<double> mid_ranks(const std::vector<double>& values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        // Positions i..j (0-based) share the mean rank of positions i+1..j+1.
        const double r = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
        i = j + 1;
    }
    return ranks;
}

namespace {

// Pearson correlation of two centered/normalizable vectors; nullopt when
// either has zero variance.
std::optional<double> pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    const double mx = mean(x), my = mean(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0) return std::nullopt;
    return sxy / std::sqrt(sxx * syy);
}

// Two-sided exact permutation p-value: the fraction of y-rank permutations
// whose |rho| reaches |rho_obs| (within a round-off guard).
double permutation_p(const std::vector<double>& rx, const std::vector<double>& ry, double rho_obs) {
    const std::size_t n = rx.size();
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});

    const double mx = mean(rx), my = mean(ry);
    std::vector<double> cx(n), cy(n);
    double sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        cx[i] = rx[i] - mx;
        cy[i] = ry[i] - my;
        sxx += cx[i] * cx[i];
        syy += cy[i] * cy[i];
    }
    const double denom = std::sqrt(sxx * syy);
    const double target = std::abs(rho_obs) - 1e-12;

    std::size_t hits = 0, total = 0;
    do {
        double sxy = 0.0;
        for (std::size_t i = 0; i < n; ++i) sxy += cx[i] * cy[perm[i]];
        if (std::abs(sxy / denom) >= target) ++hits;
        ++total;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return static_cast<double>(hits) / static_cast<double>(total);
}

}  // namespace

CorrelationCell spearman(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw ConfigError("spearman: length mismatch");
    CorrelationCell cell;
    cell.n = x.size();
    if (cell.n < kMinPairs) return cell;  // insufficient data, masked
    for (double v : x)
        if (!std::isfinite(v)) throw NumericError("spearman: non-finite input");
    for (double v : y)
        if (!std::isfinite(v)) throw NumericError("spearman: non-finite input");

    const std::vector<double> rx = mid_ranks(x);
    const std::vector<double> ry = mid_ranks(y);
    const auto rho = pearson(rx, ry);
    if (!rho) return cell;  // zero rank variance, masked

    cell.rho = *rho;
    cell.masked = false;
    if (cell.n <= kExactPermutationMaxN) {
        cell.p = permutation_p(rx, ry, cell.rho);
    } else if (std::abs(cell.rho) >= 1.0 - 1e-12) {
        cell.p = 0.0;  // convention for the t path at |rho| = 1
    } else {
        const double df = static_cast<double>(cell.n - 2);
        const double t = cell.rho * std::sqrt(df / (1.0 - cell.rho * cell.rho));
        const boost::math::students_t dist(df);
        cell.p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
    }
    cell.significant = cell.p < kSignificanceAlpha;
    return cell;
}

const char* pooling_name(Pooling p) {
    switch (p) {
        case Pooling::AllRounds: return "all_rounds";
        case Pooling::Round2: return "round_2";
        case Pooling::Round3: return "round_3";
        case Pooling::Round4: return "round_4";
    }
    return "?";
}

std::optional<int> pooling_round(Pooling p) {
    switch (p) {
        case Pooling::AllRounds: return std::nullopt;
        case Pooling::Round2: return 2;
        case Pooling::Round3: return 3;
        case Pooling::Round4: return 4;
    }
    return std::nullopt;
}

namespace {

struct JoinedRow {
    const FeatureVector* features;
    std::array<double, kRatingCount> ratings;
};

// Inner join on (subject, session, round, task); optionally averages the two
// sessions of a round into one observation per (subject, round).
std::vector<JoinedRow> join_rows(const FeatureTable& features,
                                 const std::vector<SubjectiveReport>& reports, Task task,
                                 std::optional<int> round_filter, SessionMode mode,
                                 std::vector<FeatureVector>& storage) {
    std::map<std::tuple<std::string, int, int, Task>, const SubjectiveReport*> by_key;
    for (const auto& r : reports) by_key[{r.subject_id, r.session, r.round, r.task}] = &r;

    std::vector<JoinedRow> rows;
    if (mode == SessionMode::Pooled) {
        for (const auto& fv : features.rows) {
            if (fv.key.task != task) continue;
            if (round_filter && fv.key.round != *round_filter) continue;
            const auto it = by_key.find({fv.key.subject_id, fv.key.session, fv.key.round, fv.key.task});
            if (it == by_key.end()) continue;
            JoinedRow row;
            row.features = &fv;
            for (int k = 0; k < kRatingCount; ++k)
                row.ratings[static_cast<std::size_t>(k)] = rating_value(*it->second, k);
            rows.push_back(row);
        }
        return rows;
    }

    // RoundMean: average feature values (presence-aware) and ratings across the
    // sessions of each (subject, round).
    std::map<std::pair<std::string, int>, std::vector<std::pair<const FeatureVector*, const SubjectiveReport*>>>
        groups;
    for (const auto& fv : features.rows) {
        if (fv.key.task != task) continue;
        if (round_filter && fv.key.round != *round_filter) continue;
        const auto it = by_key.find({fv.key.subject_id, fv.key.session, fv.key.round, fv.key.task});
        if (it == by_key.end()) continue;
        groups[{fv.key.subject_id, fv.key.round}].push_back({&fv, it->second});
    }
    for (const auto& [gk, members] : groups) {
        FeatureVector agg;
        agg.key = members.front().first->key;
        agg.present.fill(false);
        agg.values.fill(0.0);
        JoinedRow row;
        row.ratings.fill(0.0);
        for (std::size_t i = 0; i < kFeatureCount; ++i) {
            double sum = 0.0;
            std::size_t cnt = 0;
            for (const auto& [fv, rep] : members) {
                if (!fv->present[i]) continue;
                sum += fv->values[i];
                ++cnt;
            }
            if (cnt > 0) {
                agg.values[i] = sum / static_cast<double>(cnt);
                agg.present[i] = true;
            }
        }
        for (int k = 0; k < kRatingCount; ++k) {
            double sum = 0.0;
            for (const auto& [fv, rep] : members) sum += rating_value(*rep, k);
            row.ratings[static_cast<std::size_t>(k)] = sum / static_cast<double>(members.size());
        }
        storage.push_back(agg);
        row.features = &storage.back();
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

std::vector<CorrelationMatrix> build_matrices(const FeatureTable& features,
                                              const std::vector<SubjectiveReport>& reports,
                                              SessionMode mode) {
    std::vector<CorrelationMatrix> out;
    const Task tasks[] = {Task::HSS, Task::RAN, Task::TEX};
    const Pooling poolings[] = {Pooling::AllRounds, Pooling::Round2, Pooling::Round3, Pooling::Round4};
    for (Task task : tasks) {
        for (Pooling pooling : poolings) {
            CorrelationMatrix m;
            m.scope = {task, pooling};
            m.cells.resize(kFeatureCount);

            std::vector<FeatureVector> storage;
            storage.reserve(features.rows.size());
            const auto rows = join_rows(features, reports, task, pooling_round(pooling), mode, storage);
            if (rows.empty()) {
                m.empty_scope = true;
                out.push_back(std::move(m));
                continue;
            }
            for (std::size_t f = 0; f < kFeatureCount; ++f) {
                for (int k = 0; k < kRatingCount; ++k) {
                    std::vector<double> xs, ys;
                    xs.reserve(rows.size());
                    ys.reserve(rows.size());
                    for (const auto& row : rows) {
                        if (!row.features->present[f]) continue;  // pairwise deletion
                        xs.push_back(row.features->values[f]);
                        ys.push_back(row.ratings[static_cast<std::size_t>(k)]);
                    }
                    m.cells[f][static_cast<std::size_t>(k)] = spearman(xs, ys);
                }
            }
            out.push_back(std::move(m));
        }
    }
    return out;
}

std::string matrices_to_csv(const std::vector<CorrelationMatrix>& matrices,
                            const FeatureCatalog& catalog, std::uint64_t seed,
                            const std::string& config_hash) {
    CsvWriter w({"task", "pooling", "feature", "rating", "rho", "p", "n", "significant"});
    w.add_comment("Spearman correlation matrices, catalog " + catalog.version());
    w.add_comment("sessions within a round enter as separate observations unless round-mean mode is set");
    w.add_comment("missing features removed pairwise per cell");
    w.add_comment("seed: " + std::to_string(seed));
    w.add_comment("config_sha256: " + config_hash);
    for (const auto& m : matrices) {
        for (std::size_t f = 0; f < kFeatureCount; ++f) {
            for (int k = 0; k < kRatingCount; ++k) {
                const auto& c = m.cells[f][static_cast<std::size_t>(k)];
                w.add_row({task_name(m.scope.task), pooling_name(m.scope.pooling),
                           catalog.entries()[f].name, rating_name(k),
                           c.masked ? "" : format_double(c.rho), c.masked ? "" : format_double(c.p),
                           std::to_string(c.n), c.significant ? "1" : "0"});
            }
        }
    }
    return w.str();
}

std::string matrices_summary_json(const std::vector<CorrelationMatrix>& matrices,
                                  const FeatureCatalog& catalog, std::uint64_t seed,
                                  const std::string& config_hash) {
    nlohmann::json root;
    root["meta"] = {{"seed", seed}, {"config_sha256", config_hash}, {"catalog", catalog.version()},
                    {"alpha", kSignificanceAlpha}, {"correction", "none"}};
    nlohmann::json scopes = nlohmann::json::array();
    for (const auto& m : matrices) {
        nlohmann::json s;
        s["task"] = task_name(m.scope.task);
        s["pooling"] = pooling_name(m.scope.pooling);
        s["empty_scope"] = m.empty_scope;
        if (m.empty_scope) s["warning"] = "join produced zero rows; matrix fully masked";
        nlohmann::json sig = nlohmann::json::array();
        std::size_t n_masked = 0;
        for (std::size_t f = 0; f < kFeatureCount; ++f) {
            for (int k = 0; k < kRatingCount; ++k) {
                const auto& c = m.cells[f][static_cast<std::size_t>(k)];
                if (c.masked) {
                    ++n_masked;
                    continue;
                }
                if (c.significant) {
                    sig.push_back({{"feature", catalog.entries()[f].name},
                                   {"rating", rating_name(k)},
                                   {"rho", c.rho},
                                   {"p", c.p},
                                   {"n", c.n}});
                }
            }
        }
        s["significant_cells"] = sig;
        s["n_significant"] = sig.size();
        s["n_masked"] = n_masked;
        scopes.push_back(std::move(s));
    }
    root["scopes"] = std::move(scopes);
    return root.dump(2) + "\n";
}

}  // namespace gazeaudit
