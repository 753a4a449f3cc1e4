#pragma once

#include <string>

#include "gazeaudit/stats.hpp"

namespace gazeaudit {

// Deterministic SVG render of one correlation matrix: 58x3 grid, diverging
// blue-white-red scale clipped to [-1, 1], black outline on cells with
// uncorrected p < 0.05, hatching on masked cells, catalog names as row labels.
std::string heatmap_svg(const CorrelationMatrix& m, const FeatureCatalog& catalog,
                        std::uint64_t seed, const std::string& config_hash);

void emit_heatmap(const CorrelationMatrix& m, const FeatureCatalog& catalog, std::uint64_t seed,
                  const std::string& config_hash, const std::string& path);

}  // namespace gazeaudit
