#pragma once
// Stability of highly cited groups as the citation window grows: group
// sequences over window lengths, consecutive-window overlap curves, sustained
// convergence, peak citation years and group size shares.

#include <hcstab/rational.hpp>
#include <hcstab/selection.hpp>
#include <hcstab/windows.hpp>

#include <algorithm>
#include <iterator>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hcstab {

enum class OverlapMetric { jaccard, overlap_fwd, overlap_bwd };

inline constexpr OverlapMetric all_metrics[] = {OverlapMetric::jaccard, OverlapMetric::overlap_fwd, OverlapMetric::overlap_bwd};

inline std::string metric_name(OverlapMetric m) {
    switch (m) {
        case OverlapMetric::jaccard: return "jaccard";
        case OverlapMetric::overlap_fwd: return "overlap_fwd";
        case OverlapMetric::overlap_bwd: return "overlap_bwd";
    }
    return "?";
}

/// Accepts the report names and the short forms "fwd" / "bwd".
inline OverlapMetric parse_metric(std::string_view name) {
    if (name == "jaccard") return OverlapMetric::jaccard;
    if (name == "fwd" || name == "overlap_fwd") return OverlapMetric::overlap_fwd;
    if (name == "bwd" || name == "overlap_bwd") return OverlapMetric::overlap_bwd;
    throw std::invalid_argument("unknown overlap metric '" + std::string(name) + "' (expected jaccard, fwd or bwd)");
}

/// Default metric for summaries: the share of the earlier group found again in the later one.
inline constexpr OverlapMetric default_metric = OverlapMetric::overlap_fwd;

/// 80%, expressed in basis points.
inline constexpr int default_threshold_bp = 8000;

struct OverlapPoint {
    WindowLength window_a{1};
    WindowLength window_b{2};
    std::size_t size_a = 0;
    std::size_t size_b = 0;
    std::size_t intersection = 0;
    Rational jaccard;
    Rational overlap_fwd;
    Rational overlap_bwd;
    bool empty_convention = false;  // ratios fixed by convention because a group was empty

    Rational value(OverlapMetric m) const {
        switch (m) {
            case OverlapMetric::jaccard: return jaccard;
            case OverlapMetric::overlap_fwd: return overlap_fwd;
            case OverlapMetric::overlap_bwd: return overlap_bwd;
        }
        return jaccard;
    }
};

struct OverlapCurve {
    CellKey cell;
    SelectionLevel level = SelectionLevel::percentile(10000);
    std::vector<OverlapPoint> points;
};

/// Overlap of two sorted member lists. Two empty groups agree (all ratios 1);
/// exactly one empty group gives 0 everywhere.
inline OverlapPoint overlap_of(std::span<const PublicationId> a, std::span<const PublicationId> b, WindowLength window_a,
                               WindowLength window_b) {
    OverlapPoint p;
    p.window_a = window_a;
    p.window_b = window_b;
    p.size_a = a.size();
    p.size_b = b.size();
    std::vector<PublicationId> common;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
    p.intersection = common.size();
    if (a.empty() || b.empty()) {
        const Rational v = (a.empty() && b.empty()) ? Rational(1) : Rational(0);
        p.jaccard = p.overlap_fwd = p.overlap_bwd = v;
        p.empty_convention = true;
        return p;
    }
    const auto i = static_cast<std::int64_t>(p.intersection);
    const auto sa = static_cast<std::int64_t>(p.size_a);
    const auto sb = static_cast<std::int64_t>(p.size_b);
    p.jaccard = Rational(i, sa + sb - i);
    p.overlap_fwd = Rational(i, sa);
    p.overlap_bwd = Rational(i, sb);
    return p;
}

/// One group per window length in [first, last], each selected on that window's counts.
inline std::vector<HighlyCitedGroup> group_sequence(const Corpus& corpus, const CellKey& cell, const SelectionLevel& level,
                                                    WindowLength first, WindowLength last,
                                                    TieMode tie_mode = TieMode::inclusive) {
    if (last < first) throw std::invalid_argument("empty window range");
    const auto longest = max_window(corpus, cell);
    if (longest && last.years() > *longest)
        throw WindowError("window " + std::to_string(last.years()) + " exceeds the horizon " +
                          std::to_string(*corpus.horizon_year()) + " of cell '" + cell.str() + "' (longest window " +
                          std::to_string(*longest) + ")");
    std::vector<HighlyCitedGroup> groups;
    for (int len = first.years(); len <= last.years(); ++len)
        groups.push_back(select(cell_counts(corpus, cell, WindowLength(len)), level, tie_mode));
    return groups;
}

inline OverlapCurve consecutive_overlap(std::span<const HighlyCitedGroup> groups) {
    if (groups.size() < 2) throw std::invalid_argument("overlap curve needs at least two groups");
    OverlapCurve curve{groups.front().cell, groups.front().level, {}};
    for (std::size_t i = 1; i < groups.size(); ++i) {
        const auto& a = groups[i - 1];
        const auto& b = groups[i];
        if (b.window != a.window.next())
            throw std::invalid_argument("groups must cover consecutive window lengths");
        if (!(b.cell == a.cell) || !(b.level == a.level))
            throw std::invalid_argument("groups of one curve must share cell and level");
        curve.points.push_back(overlap_of(a.members, b.members, a.window, b.window));
    }
    return curve;
}

struct ConvergenceSummary {
    std::optional<WindowLength> first_window_at_threshold;
    Rational threshold;
    OverlapMetric metric = default_metric;
};

/// Smallest window_a from which the metric stays at or above the threshold for the rest of the curve.
inline ConvergenceSummary convergence_summary(const OverlapCurve& curve, OverlapMetric metric, const Rational& threshold) {
    if (curve.points.empty()) throw std::invalid_argument("convergence summary of an empty curve");
    if (threshold <= Rational(0) || threshold > Rational(1))
        throw std::invalid_argument("convergence threshold must lie in (0, 1]");
    ConvergenceSummary s{std::nullopt, threshold, metric};
    for (auto it = curve.points.rbegin(); it != curve.points.rend() && it->value(metric) >= threshold; ++it)
        s.first_window_at_threshold = it->window_a;
    return s;
}

/// Index of the largest value, earliest on ties.
inline std::size_t peak_offset_of(std::span<const Rational> series) {
    if (series.empty()) throw std::invalid_argument("peak of an empty series");
    return static_cast<std::size_t>(std::max_element(series.begin(), series.end()) - series.begin());
}

struct PeakYearReport {
    std::size_t set_size = 0;
    std::vector<Rational> mean_by_offset;  // offset 0 is the publication year
    std::size_t peak_offset = 0;
};

/// Mean citations per year offset over a set of publications. The series spans the
/// window when given, otherwise the offsets every member can observe.
inline PeakYearReport peak_year(const Corpus& corpus, std::span<const PublicationId> members,
                                std::optional<WindowLength> window = std::nullopt) {
    if (members.empty()) throw std::invalid_argument("peak year of an empty set");
    std::size_t length = 0;
    if (window) {
        length = static_cast<std::size_t>(window->years());
    } else {
        length = corpus.series_at(corpus.index_of(members.front())).size();
        for (const auto& id : members) length = std::min(length, corpus.series_at(corpus.index_of(id)).size());
    }
    std::vector<std::int64_t> sums(length, 0);
    for (const auto& id : members) {
        const auto& series = corpus.series_at(corpus.index_of(id));
        if (series.size() < length)
            throw WindowError("window of " + std::to_string(length) + " years exceeds the horizon for publication '" + id + "'");
        for (std::size_t d = 0; d < length; ++d) sums[d] += series[d];
    }
    PeakYearReport r;
    r.set_size = members.size();
    for (auto s : sums) r.mean_by_offset.push_back(mean_of(s, static_cast<std::int64_t>(members.size())));
    r.peak_offset = peak_offset_of(r.mean_by_offset);
    return r;
}

/// Peak years of a highly cited group and of its companion (typically the rest of the cell).
inline std::pair<PeakYearReport, PeakYearReport> peak_year_report(const Corpus& corpus, std::span<const PublicationId> group_members,
                                                                  std::span<const PublicationId> companion_set,
                                                                  std::optional<WindowLength> window = std::nullopt) {
    return {peak_year(corpus, group_members, window), peak_year(corpus, companion_set, window)};
}

/// Cell members outside the group.
inline std::vector<PublicationId> remainder_of(const Corpus& corpus, const HighlyCitedGroup& group) {
    const auto& all = corpus.members(group.cell);
    std::vector<PublicationId> rest;
    std::set_difference(all.begin(), all.end(), group.members.begin(), group.members.end(), std::back_inserter(rest));
    return rest;
}

struct SizeSeries {
    struct Entry {
        WindowLength window;
        std::size_t size = 0;
        std::size_t reference_size = 0;
        Rational share;
    };
    std::vector<Entry> entries;
};

inline SizeSeries size_series(std::span<const HighlyCitedGroup> groups) {
    if (groups.empty()) throw std::invalid_argument("size series needs at least one group");
    SizeSeries s;
    for (const auto& g : groups) {
        const auto n = static_cast<std::int64_t>(g.reference_set_size);
        s.entries.push_back({g.window, g.members.size(), g.reference_set_size,
                             n == 0 ? Rational(0) : Rational(static_cast<std::int64_t>(g.members.size()), n)});
    }
    return s;
}

}  // namespace hcstab
