#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "gazeaudit/features.hpp"
#include "gazeaudit/types.hpp"

namespace gazeaudit {

inline constexpr double kSignificanceAlpha = 0.05;  // uncorrected
inline constexpr std::size_t kMinPairs = 3;
inline constexpr std::size_t kExactPermutationMaxN = 9;  // exact p below this+1

// Mid-ranks 1..n; ties share the mean of their occupied positions.
std::vector<double> mid_ranks(const std::vector<double>& values);

struct CorrelationCell {
    double rho = 0.0;
    double p = 1.0;
    std::size_t n = 0;
    bool significant = false;
    bool masked = true;
};

// Spearman rank correlation with mid-ranks. Two-sided p: exact permutation
// enumeration for n < 10, t approximation with n-2 dof otherwise (|rho| = 1
// maps to p = 0 on the t path). Masked when n < 3 or either rank vector is
// constant.
CorrelationCell spearman(const std::vector<double>& x, const std::vector<double>& y);

enum class Pooling { AllRounds, Round2, Round3, Round4 };
const char* pooling_name(Pooling p);
std::optional<int> pooling_round(Pooling p);

enum class SessionMode { Pooled, RoundMean };

struct MatrixScope {
    Task task = Task::HSS;
    Pooling pooling = Pooling::AllRounds;
};

struct CorrelationMatrix {
    MatrixScope scope;
    // kFeatureCount rows x 3 rating columns (OverDiff, Mentally, TiredEyes).
    std::vector<std::array<CorrelationCell, kRatingCount>> cells;
    bool empty_scope = false;  // join produced zero rows
};

// Inner-joins the feature table with the reports per scope and fills one cell
// per (feature, rating) with pairwise deletion of masked features. Produces
// all 12 scopes: {HSS, RAN, TEX} x {all rounds, rounds 2-4}.
std::vector<CorrelationMatrix> build_matrices(const FeatureTable& features,
                                              const std::vector<SubjectiveReport>& reports,
                                              SessionMode mode = SessionMode::Pooled);

std::string matrices_to_csv(const std::vector<CorrelationMatrix>& matrices,
                            const FeatureCatalog& catalog, std::uint64_t seed,
                            const std::string& config_hash);

// JSON summary listing significant cells per scope plus empty-scope warnings.
std::string matrices_summary_json(const std::vector<CorrelationMatrix>& matrices,
                                  const FeatureCatalog& catalog, std::uint64_t seed,
                                  const std::string& config_hash);

}  // namespace gazeaudit
