#pragma once
// Report files: CSV tables of an analysis sweep and the SVG overlap chart.

#include <hcstab/csv.hpp>
#include <hcstab/rational.hpp>
#include <hcstab/stability.hpp>

#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace hcstab {

inline constexpr const char* overlap_curves_header =
    "cell,method,level,window_a,window_b,size_a,size_b,intersection,jaccard,overlap_fwd,overlap_bwd,jaccard_exact,fwd_exact,bwd_exact";
inline constexpr const char* groups_header = "cell,method,level,window,threshold_exact,reference_size,member_id";
inline constexpr const char* convergence_header = "cell,method,level,metric,threshold_bp,first_window";
inline constexpr const char* peak_years_header = "cell,method,level,window,group,peak_offset";
inline constexpr const char* size_series_header = "cell,method,level,window,size,reference_size,share,share_exact";

/// Everything one (cell, level) pair contributes to the reports.
struct SweepResult {
    std::vector<HighlyCitedGroup> groups;
    OverlapCurve curve;
    SizeSeries sizes;
    std::vector<std::pair<std::optional<std::size_t>, std::optional<std::size_t>>> peaks;  // highly cited, remainder
    std::vector<ConvergenceSummary> convergence;
};

inline void write_groups_csv(std::ostream& out, const std::vector<SweepResult>& results) {
    out << groups_header << '\n';
    for (const auto& r : results) {
        for (const auto& g : r.groups) {
            const std::vector<std::string> prefix = {g.cell.str(), g.level.method_name(), g.level.token(), std::to_string(g.window.years()),
                                                     g.effective_threshold.fraction_str(), std::to_string(g.reference_set_size)};
            auto row = prefix;
            row.emplace_back();
            if (g.members.empty()) out << csv::join_row(row);
            for (const auto& id : g.members) {
                row.back() = id;
                out << csv::join_row(row);
            }
        }
    }
}

inline void write_overlap_csv(std::ostream& out, const std::vector<SweepResult>& results) {
    out << overlap_curves_header << '\n';
    for (const auto& r : results) {
        const auto& c = r.curve;
        for (const auto& p : c.points) {
            out << csv::join_row({c.cell.str(), c.level.method_name(), c.level.token(), std::to_string(p.window_a.years()),
                                  std::to_string(p.window_b.years()), std::to_string(p.size_a), std::to_string(p.size_b),
                                  std::to_string(p.intersection), p.jaccard.decimal_str(), p.overlap_fwd.decimal_str(),
                                  p.overlap_bwd.decimal_str(), p.jaccard.fraction_str(), p.overlap_fwd.fraction_str(),
                                  p.overlap_bwd.fraction_str()});
        }
    }
}

inline void write_size_series_csv(std::ostream& out, const std::vector<SweepResult>& results) {
    out << size_series_header << '\n';
    for (const auto& r : results) {
        const auto& level = r.groups.front().level;
        const auto& cell = r.groups.front().cell;
        for (const auto& e : r.sizes.entries)
            out << csv::join_row({cell.str(), level.method_name(), level.token(), std::to_string(e.window.years()), std::to_string(e.size),
                                  std::to_string(e.reference_size), e.share.decimal_str(), e.share.fraction_str()});
    }
}

inline void write_peak_years_csv(std::ostream& out, const std::vector<SweepResult>& results) {
    out << peak_years_header << '\n';
    auto cell_text = [](const std::optional<std::size_t>& v) { return v ? std::to_string(*v) : std::string(); };
    for (const auto& r : results) {
        for (std::size_t i = 0; i < r.groups.size(); ++i) {
            const auto& g = r.groups[i];
            const std::vector<std::string> prefix = {g.cell.str(), g.level.method_name(), g.level.token(), std::to_string(g.window.years())};
            auto row = prefix;
            row.push_back("highly_cited");
            row.push_back(cell_text(r.peaks[i].first));
            out << csv::join_row(row);
            row = prefix;
            row.push_back("remainder");
            row.push_back(cell_text(r.peaks[i].second));
            out << csv::join_row(row);
        }
    }
}

inline void write_convergence_csv(std::ostream& out, const std::vector<SweepResult>& results) {
    out << convergence_header << '\n';
    for (const auto& r : results) {
        for (const auto& s : r.convergence) {
            const auto bp = s.threshold * Rational(10000);
            out << csv::join_row({r.curve.cell.str(), r.curve.level.method_name(), r.curve.level.token(), metric_name(s.metric),
                                  bp.str(), s.first_window_at_threshold ? std::to_string(s.first_window_at_threshold->years()) : ""});
        }
    }
}

// ---------------------------------------------------------------------------
// Overlap chart

struct CurveSeries {
    std::string cell;
    std::string method;
    std::string level;
    std::vector<std::pair<int, Rational>> points;  // (window_a, metric value)
};

class ReportFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Reads overlap_curves.csv, keeping one series per (cell, level) in file order.
inline std::vector<CurveSeries> read_curves(std::istream& in, OverlapMetric metric) {
    const auto table = csv::read_table(in);
    const auto expected = csv::split(overlap_curves_header);
    if (table.header != expected) throw ReportFormatError("curves file has an unexpected header");
    const std::size_t column = metric == OverlapMetric::jaccard ? 11 : metric == OverlapMetric::overlap_fwd ? 12 : 13;
    std::vector<CurveSeries> series;
    std::map<std::pair<std::string, std::string>, std::size_t> index;
    for (const auto& row : table.rows) {
        if (row.fields.size() != expected.size())
            throw ReportFormatError("curves file line " + std::to_string(row.line_number) + ": wrong field count");
        int window_a = 0;
        Rational value;
        try {
            window_a = std::stoi(row.fields[3]);
            value = Rational::parse(row.fields[column]);
        } catch (const std::exception&) {
            throw ReportFormatError("curves file line " + std::to_string(row.line_number) + ": malformed number");
        }
        auto key = std::make_pair(row.fields[0], row.fields[2]);
        auto [it, inserted] = index.emplace(key, series.size());
        if (inserted) series.push_back({row.fields[0], row.fields[1], row.fields[2], {}});
        series[it->second].points.emplace_back(window_a, value);
    }
    return series;
}

namespace detail {

inline std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

inline std::string fmt2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

}  // namespace detail

/// Line chart of one metric against the earlier window length, y fixed to [0, 1].
inline std::string render_overlap_svg(const std::vector<CurveSeries>& series, OverlapMetric metric) {
    static constexpr const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
    constexpr double width = 760, height = 460;
    constexpr double left = 60, right = 250, top = 30, bottom = 60;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;

    int x_min = 0, x_max = 0;
    bool first = true;
    for (const auto& s : series)
        for (const auto& [x, y] : s.points) {
            x_min = first ? x : std::min(x_min, x);
            x_max = first ? x : std::max(x_max, x);
            first = false;
        }
    if (first) x_min = x_max = 1;
    const double span = x_max == x_min ? 2.0 : static_cast<double>(x_max - x_min);
    const double origin = x_max == x_min ? x_min - 1.0 : static_cast<double>(x_min);
    auto px = [&](double x) { return left + (x - origin) / span * plot_w; };
    auto py = [&](double y) { return top + (1.0 - y) * plot_h; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' '
        << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double y = i / 5.0;
        svg << "<line x1=\"" << detail::fmt2(left) << "\" y1=\"" << detail::fmt2(py(y)) << "\" x2=\"" << detail::fmt2(left + plot_w)
            << "\" y2=\"" << detail::fmt2(py(y)) << "\" stroke=\"#dddddd\"/>\n";
        svg << "<text x=\"" << detail::fmt2(left - 8) << "\" y=\"" << detail::fmt2(py(y) + 4) << "\" text-anchor=\"end\">"
            << detail::fmt2(y) << "</text>\n";
    }
    for (int x = static_cast<int>(origin); x <= static_cast<int>(origin + span); ++x)
        svg << "<text x=\"" << detail::fmt2(px(x)) << "\" y=\"" << detail::fmt2(top + plot_h + 18) << "\" text-anchor=\"middle\">" << x
            << "</text>\n";
    svg << "<line x1=\"" << detail::fmt2(left) << "\" y1=\"" << detail::fmt2(top + plot_h) << "\" x2=\"" << detail::fmt2(left + plot_w)
        << "\" y2=\"" << detail::fmt2(top + plot_h) << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << detail::fmt2(left) << "\" y1=\"" << detail::fmt2(top) << "\" x2=\"" << detail::fmt2(left) << "\" y2=\""
        << detail::fmt2(top + plot_h) << "\" stroke=\"black\"/>\n";
    svg << "<text class=\"x-label\" x=\"" << detail::fmt2(left + plot_w / 2) << "\" y=\"" << detail::fmt2(height - 15)
        << "\" text-anchor=\"middle\">citation window length (years), earlier of two consecutive windows</text>\n";
    svg << "<text class=\"y-label\" transform=\"translate(16 " << detail::fmt2(top + plot_h / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
        << metric_name(metric) << "</text>\n";

    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& s = series[i];
        const char* colour = palette[i % std::size(palette)];
        svg << "<g class=\"series\" data-cell=\"" << detail::xml_escape(s.cell) << "\" data-level=\"" << detail::xml_escape(s.level) << "\">\n";
        svg << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"2\" points=\"";
        for (std::size_t k = 0; k < s.points.size(); ++k)
            svg << (k ? " " : "") << detail::fmt2(px(s.points[k].first)) << ',' << detail::fmt2(py(static_cast<double>(s.points[k].second)));
        svg << "\"/>\n";
        for (const auto& [x, y] : s.points)
            svg << "<circle cx=\"" << detail::fmt2(px(x)) << "\" cy=\"" << detail::fmt2(py(static_cast<double>(y))) << "\" r=\"3\" fill=\""
                << colour << "\" data-window=\"" << x << "\" data-value=\"" << y.decimal_str(3) << "\"/>\n";
        svg << "</g>\n";
        const double ly = top + 10 + 18.0 * static_cast<double>(i);
        svg << "<g class=\"legend-entry\"><line x1=\"" << detail::fmt2(width - right + 15) << "\" y1=\"" << detail::fmt2(ly) << "\" x2=\""
            << detail::fmt2(width - right + 35) << "\" y2=\"" << detail::fmt2(ly) << "\" stroke=\"" << colour
            << "\" stroke-width=\"2\"/><text x=\"" << detail::fmt2(width - right + 40) << "\" y=\"" << detail::fmt2(ly + 4) << "\">"
            << detail::xml_escape(s.cell) << " / " << detail::xml_escape(s.level) << "</text></g>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace hcstab
