#include "gazeaudit/heatmap.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "gazeaudit/util.hpp"

namespace gazeaudit {

namespace {

constexpr double kCellW = 64.0;
constexpr double kCellH = 11.0;
constexpr double kLeftMargin = 150.0;
constexpr double kTopMargin = 40.0;
constexpr double kRightMargin = 20.0;
constexpr double kBottomMargin = 16.0;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

// Diverging color: -1 blue, 0 white, +1 red.
std::string cell_color(double rho) {
    const double t = std::clamp(rho, -1.0, 1.0);
    int r, g, b;
    if (t >= 0.0) {
        r = 255 - static_cast<int>(std::lround(t * (255 - 178)));
        g = 255 - static_cast<int>(std::lround(t * (255 - 24)));
        b = 255 - static_cast<int>(std::lround(t * (255 - 43)));
    } else {
        const double u = -t;
        r = 255 - static_cast<int>(std::lround(u * (255 - 33)));
        g = 255 - static_cast<int>(std::lround(u * (255 - 102)));
        b = 255 - static_cast<int>(std::lround(u * (255 - 172)));
    }
    char buf[16];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
    return buf;
}

}  // namespace

std::string heatmap_svg(const CorrelationMatrix& m, const FeatureCatalog& catalog,
                        std::uint64_t seed, const std::string& config_hash) {
    const std::size_t n_rows = catalog.size();
    const double width = kLeftMargin + kRatingCount * kCellW + kRightMargin;
    const double height = kTopMargin + static_cast<double>(n_rows) * kCellH + kBottomMargin;

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width) << "\" height=\""
       << fmt(height) << "\" viewBox=\"0 0 " << fmt(width) << " " << fmt(height) << "\">\n";
    os << "<!-- seed: " << seed << " config_sha256: " << config_hash << " -->\n";
    os << "<defs><pattern id=\"masked\" width=\"6\" height=\"6\" patternUnits=\"userSpaceOnUse\">"
          "<rect width=\"6\" height=\"6\" fill=\"#e8e8e8\"/>"
          "<path d=\"M0,6 L6,0\" stroke=\"#b0b0b0\" stroke-width=\"1\"/></pattern></defs>\n";
    os << "<rect width=\"" << fmt(width) << "\" height=\"" << fmt(height) << "\" fill=\"white\"/>\n";
    os << "<text x=\"" << fmt(kLeftMargin) << "\" y=\"16\" font-family=\"monospace\" font-size=\"12\">"
       << task_name(m.scope.task) << " / " << pooling_name(m.scope.pooling)
       << (m.empty_scope ? " (empty scope)" : "") << "</text>\n";

    for (int k = 0; k < kRatingCount; ++k) {
        const double x = kLeftMargin + (static_cast<double>(k) + 0.5) * kCellW;
        os << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(kTopMargin - 6.0)
           << "\" font-family=\"monospace\" font-size=\"10\" text-anchor=\"middle\">"
           << rating_name(k) << "</text>\n";
    }

    for (std::size_t f = 0; f < n_rows; ++f) {
        const double y = kTopMargin + static_cast<double>(f) * kCellH;
        os << "<text x=\"" << fmt(kLeftMargin - 4.0) << "\" y=\"" << fmt(y + kCellH - 2.5)
           << "\" font-family=\"monospace\" font-size=\"8\" text-anchor=\"end\">"
           << catalog.entries()[f].name << "</text>\n";
        for (int k = 0; k < kRatingCount; ++k) {
            const auto& c = m.cells[f][static_cast<std::size_t>(k)];
            const double x = kLeftMargin + static_cast<double>(k) * kCellW;
            if (c.masked) {
                os << "<rect x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" width=\"" << fmt(kCellW)
                   << "\" height=\"" << fmt(kCellH) << "\" fill=\"url(#masked)\" stroke=\"#ffffff\""
                   << " stroke-width=\"0.5\"/>\n";
                continue;
            }
            os << "<rect x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" width=\"" << fmt(kCellW)
               << "\" height=\"" << fmt(kCellH) << "\" fill=\"" << cell_color(c.rho) << "\"";
            if (c.significant) {
                os << " stroke=\"#000000\" stroke-width=\"1.5\"";
            } else {
                os << " stroke=\"#ffffff\" stroke-width=\"0.5\"";
            }
            os << "><title>rho=" << format_double(c.rho) << " p=" << format_double(c.p)
               << " n=" << c.n << "</title></rect>\n";
        }
    }
    os << "</svg>\n";
    return os.str();
}

void emit_heatmap(const CorrelationMatrix& m, const FeatureCatalog& catalog, std::uint64_t seed,
                  const std::string& config_hash, const std::string& path) {
    write_file_atomic(path, heatmap_svg(m, catalog, seed, config_hash));
}

}  // namespace gazeaudit
