#pragma once
// Citation counts per publication for a citation window.
//
// A window of length L covers calendar-year offsets 0..L-1, the publication
// year being offset 0. Articles from 2004 cited up to 2011 therefore admit
// lengths 1..8.

#include <hcstab/corpus.hpp>

#include <algorithm>
#include <compare>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hcstab {

/// Window length in calendar years, counting the publication year as the first.
class WindowLength {
public:
    constexpr explicit WindowLength(int years) : years_(years) {
        if (years < 1) throw std::invalid_argument("window length must be at least 1 year");
    }
    constexpr int years() const { return years_; }
    constexpr WindowLength next() const { return WindowLength(years_ + 1); }

    friend constexpr auto operator<=>(WindowLength, WindowLength) = default;

private:
    int years_;
};

/// Raised for windows reaching past the corpus horizon.
class WindowError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

struct CitationVector {
    PublicationId publication_id;
    std::vector<std::int64_t> counts_by_offset;
};

struct CountEntry {
    PublicationId id;
    std::int64_t count = 0;

    friend bool operator==(const CountEntry&, const CountEntry&) = default;
};

/// Counts of one reference set for one window, ordered by count descending then id ascending.
struct CellCounts {
    CellKey cell;
    WindowLength window{1};
    std::vector<CountEntry> entries;
};

/// Sorts entries into the deterministic order used by every selector.
inline void sort_counts(std::vector<CountEntry>& entries) {
    std::sort(entries.begin(), entries.end(), [](const CountEntry& a, const CountEntry& b) {
        if (a.count != b.count) return a.count > b.count;
        return a.id < b.id;
    });
}

inline CellCounts make_cell_counts(std::vector<CountEntry> entries, CellKey cell = {}, WindowLength window = WindowLength(1)) {
    sort_counts(entries);
    return {std::move(cell), window, std::move(entries)};
}

/// Longest valid window for a publication.
inline int max_window(const Corpus& corpus, const PublicationId& id) {
    const auto& p = corpus.publication(id);
    return *corpus.horizon_year() - p.pub_year + 1;
}

/// Longest window valid for every member of a cell; nullopt for an empty cell.
inline std::optional<int> max_window(const Corpus& corpus, const CellKey& cell) {
    std::optional<int> best;
    for (const auto& id : corpus.members(cell)) {
        const int w = max_window(corpus, id);
        best = best ? std::min(*best, w) : w;
    }
    return best;
}

inline CitationVector citation_series(const Corpus& corpus, const PublicationId& id) {
    return {id, corpus.series_at(corpus.index_of(id))};
}

inline std::int64_t citation_count(const Corpus& corpus, const PublicationId& id, WindowLength window) {
    const auto& series = corpus.series_at(corpus.index_of(id));
    const auto length = static_cast<std::size_t>(window.years());
    if (length > series.size())
        throw WindowError("window of " + std::to_string(window.years()) + " years exceeds the horizon " +
                          std::to_string(*corpus.horizon_year()) + " for publication '" + id + "'");
    return std::accumulate(series.begin(), series.begin() + static_cast<std::ptrdiff_t>(length), std::int64_t{0});
}

inline CellCounts cell_counts(const Corpus& corpus, const CellKey& cell, WindowLength window) {
    std::vector<CountEntry> entries;
    const auto& members = corpus.members(cell);
    entries.reserve(members.size());
    for (const auto& id : members) entries.push_back({id, citation_count(corpus, id, window)});
    return make_cell_counts(std::move(entries), cell, window);
}

}  // namespace hcstab
