#pragma once
// Highly cited groups within a reference set: pre-set percentiles and
// Characteristic Scores and Scales (CSS).
//
// CSS thresholds are iterated conditional means. beta_1 is the mean of all
// counts and beta_j is the mean of the counts >= beta_{j-1}. Everything is
// exact: a count c sits above n/d iff c*d >= n.

#include <hcstab/rational.hpp>
#include <hcstab/windows.hpp>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hcstab {

enum class Method { percentile, css };

/// Class floors of the CSS scale that define highly cited groups.
enum class CssLevel { at_least_remarkably, outstandingly };

/// Percentile handling of ties at the cut-off count.
enum class TieMode { inclusive, exact_size };

inline constexpr int css_depth = 3;

class SelectionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class SelectionLevel {
public:
    static SelectionLevel percentile(int basis_points) {
        if (basis_points < 1 || basis_points > 10000)
            throw SelectionError("percentile level must lie in [1, 10000] basis points, got " + std::to_string(basis_points));
        SelectionLevel l;
        l.method_ = Method::percentile;
        l.basis_points_ = basis_points;
        return l;
    }

    static SelectionLevel css(CssLevel level) {
        SelectionLevel l;
        l.method_ = Method::css;
        l.css_ = level;
        return l;
    }

    /// Accepts "p500", "css-remarkably", "css-outstandingly".
    static SelectionLevel parse(std::string_view token) {
        if (token == "css-remarkably" || token == "css-at-least-remarkably") return css(CssLevel::at_least_remarkably);
        if (token == "css-outstandingly") return css(CssLevel::outstandingly);
        if (token.size() > 1 && token[0] == 'p') {
            int bp = 0;
            for (char ch : token.substr(1)) {
                if (ch < '0' || ch > '9' || bp > 100000) throw SelectionError("unknown level '" + std::string(token) + "'");
                bp = bp * 10 + (ch - '0');
            }
            return percentile(bp);
        }
        throw SelectionError("unknown level '" + std::string(token) + "'");
    }

    Method method() const { return method_; }
    int basis_points() const { return basis_points_; }
    CssLevel css_level() const { return css_; }

    std::string token() const {
        if (method_ == Method::percentile) return "p" + std::to_string(basis_points_);
        return css_ == CssLevel::outstandingly ? "css-outstandingly" : "css-remarkably";
    }

    std::string method_name() const { return method_ == Method::percentile ? "percentile" : "css"; }

    friend bool operator==(const SelectionLevel&, const SelectionLevel&) = default;

private:
    SelectionLevel() = default;
    Method method_ = Method::percentile;
    int basis_points_ = 0;
    CssLevel css_ = CssLevel::at_least_remarkably;
};

/// Top 5% and top 1%.
inline std::vector<SelectionLevel> default_percentile_levels() {
    return {SelectionLevel::percentile(500), SelectionLevel::percentile(100)};
}

/// Both percentile levels followed by both CSS levels.
inline std::vector<SelectionLevel> default_levels() {
    return {SelectionLevel::percentile(500), SelectionLevel::percentile(100), SelectionLevel::css(CssLevel::at_least_remarkably),
            SelectionLevel::css(CssLevel::outstandingly)};
}

struct CssThresholds {
    std::vector<Rational> betas;  // defined prefix of beta_1..beta_3
    std::optional<int> stalled_at;  // j at which beta_j would have repeated beta_{j-1}

    /// beta_j for j in 1..3 when defined.
    std::optional<Rational> beta(int j) const {
        if (j < 1 || static_cast<std::size_t>(j) > betas.size()) return std::nullopt;
        return betas[static_cast<std::size_t>(j - 1)];
    }
};

inline CssThresholds css_thresholds(std::span<const std::int64_t> counts) {
    if (counts.empty()) throw SelectionError("CSS thresholds need a non-empty reference set");
    std::vector<std::int64_t> sorted(counts.begin(), counts.end());
    if (std::any_of(sorted.begin(), sorted.end(), [](auto c) { return c < 0; }))
        throw SelectionError("citation counts must be non-negative");
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    std::vector<std::int64_t> prefix(sorted.size() + 1, 0);
    for (std::size_t i = 0; i < sorted.size(); ++i) prefix[i + 1] = prefix[i] + sorted[i];

    CssThresholds out;
    out.betas.push_back(mean_of(prefix.back(), static_cast<std::int64_t>(sorted.size())));
    for (int j = 2; j <= css_depth; ++j) {
        const Rational floor = out.betas.back();
        // Descending order makes {c >= floor} a prefix; it is never empty since max >= mean.
        const auto above = static_cast<std::size_t>(
            std::partition_point(sorted.begin(), sorted.end(), [&](std::int64_t c) { return Rational(c) >= floor; }) -
            sorted.begin());
        const Rational next = mean_of(prefix[above], static_cast<std::int64_t>(above));
        if (next == floor) {
            out.stalled_at = j;
            break;
        }
        out.betas.push_back(next);
    }
    return out;
}

struct HighlyCitedGroup {
    CellKey cell;
    SelectionLevel level = SelectionLevel::percentile(10000);
    WindowLength window{1};
    std::vector<PublicationId> members;  // sorted by id
    Rational effective_threshold;
    std::size_t reference_set_size = 0;
    std::optional<int> css_stalled_at;  // set when the CSS iteration stopped before the level's beta

    bool contains(const PublicationId& id) const { return std::binary_search(members.begin(), members.end(), id); }
};

namespace detail {

inline HighlyCitedGroup start_group(const CellCounts& counts, SelectionLevel level) {
    if (counts.entries.empty()) throw SelectionError("empty reference set for cell '" + counts.cell.str() + "'");
    HighlyCitedGroup g;
    g.cell = counts.cell;
    g.level = level;
    g.window = counts.window;
    g.reference_set_size = counts.entries.size();
    return g;
}

}  // namespace detail

/// at_least_remarkably keeps counts >= beta_2, outstandingly counts >= beta_3.
/// A stalled iteration yields an empty group whose threshold is the last defined beta.
inline HighlyCitedGroup css_select(const CellCounts& counts, CssLevel level) {
    auto group = detail::start_group(counts, SelectionLevel::css(level));
    std::vector<std::int64_t> values;
    values.reserve(counts.entries.size());
    for (const auto& e : counts.entries) values.push_back(e.count);
    const auto thresholds = css_thresholds(values);
    const int j = level == CssLevel::outstandingly ? 3 : 2;
    if (auto beta = thresholds.beta(j)) {
        group.effective_threshold = *beta;
        for (const auto& e : counts.entries)
            if (Rational(e.count) >= *beta) group.members.push_back(e.id);
    } else {
        group.effective_threshold = thresholds.betas.back();
        group.css_stalled_at = thresholds.stalled_at;
    }
    std::sort(group.members.begin(), group.members.end());
    return group;
}

/// ceil(basis_points * n / 10000), the nominal group size.
inline std::size_t percentile_rank(int basis_points, std::size_t n) {
    return (static_cast<std::size_t>(basis_points) * n + 9999) / 10000;
}

/// Top p% of the reference set. With k = ceil(p*N), the cut-off t is the k-th count in
/// deterministic order; inclusive keeps every count >= t, exact_size the first k entries.
inline HighlyCitedGroup percentile_select(const CellCounts& counts, int basis_points, TieMode tie_mode = TieMode::inclusive) {
    auto group = detail::start_group(counts, SelectionLevel::percentile(basis_points));
    const auto& entries = counts.entries;
    const std::size_t k = percentile_rank(basis_points, entries.size());
    const std::int64_t cutoff = entries[k - 1].count;
    group.effective_threshold = Rational(cutoff);
    if (tie_mode == TieMode::exact_size) {
        for (std::size_t i = 0; i < k; ++i) group.members.push_back(entries[i].id);
    } else {
        for (const auto& e : entries) {
            if (e.count < cutoff) break;
            group.members.push_back(e.id);
        }
    }
    std::sort(group.members.begin(), group.members.end());
    return group;
}

inline HighlyCitedGroup select(const CellCounts& counts, const SelectionLevel& level, TieMode tie_mode = TieMode::inclusive) {
    if (level.method() == Method::css) return css_select(counts, level.css_level());
    return percentile_select(counts, level.basis_points(), tie_mode);
}

}  // namespace hcstab
