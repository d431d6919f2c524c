#pragma once
// Publications, journals and citation events, with partition cells derived
// from each journal's exact combination of subject categories.

#include <hcstab/csv.hpp>

#include <algorithm>
#include <compare>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

namespace hcstab {

using PublicationId = std::string;
using JournalId = std::string;

/// Canonical name of a category combination: sorted, de-duplicated names joined by '|'.
class CellKey {
public:
    static constexpr char separator = '|';

    CellKey() = default;
    explicit CellKey(std::string canonical) : value_(std::move(canonical)) {}

    template <typename Range>
    static CellKey from_categories(const Range& categories) {
        std::vector<std::string> names;
        for (const auto& c : categories) names.emplace_back(csv::trim(c));
        std::sort(names.begin(), names.end());
        names.erase(std::unique(names.begin(), names.end()), names.end());
        std::string joined;
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (i) joined += separator;
            joined += names[i];
        }
        return CellKey(std::move(joined));
    }

    const std::string& str() const { return value_; }

    friend auto operator<=>(const CellKey&, const CellKey&) = default;
    friend bool operator==(const CellKey&, const CellKey&) = default;
    friend std::ostream& operator<<(std::ostream& os, const CellKey& k) { return os << k.value_; }

private:
    std::string value_;
};

struct Publication {
    PublicationId id;
    JournalId journal_id;
    int pub_year = 0;
    std::string doc_type = "article";

    friend bool operator==(const Publication&, const Publication&) = default;
};

struct Journal {
    JournalId id;
    std::vector<std::string> categories;  // sorted, unique after loading

    friend bool operator==(const Journal&, const Journal&) = default;
};

struct CitationEvent {
    PublicationId publication_id;
    int citing_year = 0;

    friend bool operator==(const CitationEvent&, const CitationEvent&) = default;
};

/// One validation problem, located by file, 1-based row (line) and field.
struct Issue {
    std::string file;
    std::size_t row = 0;
    std::string field;
    std::string message;

    std::string str() const {
        std::ostringstream os;
        os << file << ":" << row;
        if (!field.empty()) os << " [" << field << "]";
        os << ": " << message;
        return os.str();
    }
};

/// Raised when corpus data violates its contract; carries every issue found.
class CorpusError : public std::runtime_error {
public:
    explicit CorpusError(std::vector<Issue> issues)
        : std::runtime_error(summarize(issues)), issues_(std::move(issues)) {}

    const std::vector<Issue>& issues() const { return issues_; }

private:
    static std::string summarize(const std::vector<Issue>& issues) {
        if (issues.empty()) return "invalid corpus";
        std::string s = issues.front().str();
        if (issues.size() > 1) s += " (and " + std::to_string(issues.size() - 1) + " more)";
        return s;
    }
    std::vector<Issue> issues_;
};

/// Raised when a corpus file cannot be opened or written.
class CorpusIoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Lookup of a cell or publication that the corpus does not contain.
class UnknownKeyError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

struct LoadOptions {
    /// Publications of other document types are dropped with their events. nullopt keeps all.
    std::optional<std::string> doc_type_filter = "article";
};

inline constexpr const char* publications_file = "publications.csv";
inline constexpr const char* journals_file = "journals.csv";
inline constexpr const char* citations_file = "citations.csv";

/// Maps each journal to the cell of its exact category set.
inline std::map<JournalId, CellKey> derive_partition_cells(std::span<const Journal> journals) {
    std::map<JournalId, CellKey> cells;
    for (const auto& j : journals) cells.emplace(j.id, CellKey::from_categories(j.categories));
    return cells;
}

namespace detail {

inline bool has_reserved_char(std::string_view s, std::string_view reserved) {
    return s.find_first_of(reserved) != std::string_view::npos;
}

}  // namespace detail

/// Immutable, validated and indexed corpus. Build through load_corpus or Corpus::build.
class Corpus {
public:
    /// Row numbers for issue reporting; empty vectors fall back to record position + 1 (header line).
    struct SourceRows {
        std::vector<std::size_t> publications;
        std::vector<std::size_t> journals;
        std::vector<std::size_t> events;
    };

    Corpus() = default;

    static Corpus build(std::vector<Publication> publications, std::vector<Journal> journals,
                        std::vector<CitationEvent> events, const LoadOptions& options = {},
                        const SourceRows& rows = {}) {
        auto row_of = [](const std::vector<std::size_t>& rs, std::size_t i) {
            return i < rs.size() ? rs[i] : i + 2;
        };
        std::vector<Issue> issues;
        Corpus c;

        std::unordered_map<JournalId, std::size_t> journal_pos;
        for (std::size_t i = 0; i < journals.size(); ++i) {
            auto& j = journals[i];
            const auto row = row_of(rows.journals, i);
            std::vector<std::string> cats;
            for (const auto& cat : j.categories) {
                std::string name(csv::trim(cat));
                if (name.empty()) continue;
                if (detail::has_reserved_char(name, "|\",;"))
                    issues.push_back({journals_file, row, "categories", "category '" + name + "' contains a reserved character"});
                cats.push_back(std::move(name));
            }
            std::sort(cats.begin(), cats.end());
            cats.erase(std::unique(cats.begin(), cats.end()), cats.end());
            j.categories = std::move(cats);
            if (j.id.empty()) issues.push_back({journals_file, row, "journal_id", "empty journal id"});
            else if (detail::has_reserved_char(j.id, "|;\","))
                issues.push_back({journals_file, row, "journal_id", "journal id '" + j.id + "' contains a reserved character"});
            if (j.categories.empty()) issues.push_back({journals_file, row, "categories", "journal '" + j.id + "' has no categories"});
            if (!journal_pos.emplace(j.id, i).second)
                issues.push_back({journals_file, row, "journal_id", "duplicate journal id '" + j.id + "'"});
        }

        std::unordered_map<PublicationId, int> dropped_pubs;  // id -> pub_year
        std::vector<Publication> kept;
        std::unordered_map<PublicationId, std::size_t> seen;
        for (std::size_t i = 0; i < publications.size(); ++i) {
            auto& p = publications[i];
            const auto row = row_of(rows.publications, i);
            if (p.doc_type.empty()) p.doc_type = "article";
            bool ok = true;
            if (p.id.empty()) {
                issues.push_back({publications_file, row, "id", "empty publication id"});
                ok = false;
            } else if (detail::has_reserved_char(p.id, "|;\",")) {
                issues.push_back({publications_file, row, "id", "publication id '" + p.id + "' contains a reserved character"});
                ok = false;
            }
            if (ok && !seen.emplace(p.id, i).second) {
                issues.push_back({publications_file, row, "id", "duplicate publication id '" + p.id + "'"});
                ok = false;
            }
            if (!journal_pos.contains(p.journal_id)) {
                issues.push_back({publications_file, row, "journal_id", "unknown journal_id '" + p.journal_id + "'"});
                ok = false;
            }
            if (!ok) continue;
            if (options.doc_type_filter && p.doc_type != *options.doc_type_filter) {
                dropped_pubs.emplace(p.id, p.pub_year);
                continue;
            }
            kept.push_back(std::move(p));
        }
        c.publications_ = std::move(kept);
        c.dropped_publications_ = dropped_pubs.size();
        for (std::size_t i = 0; i < c.publications_.size(); ++i) c.pub_index_.emplace(c.publications_[i].id, i);

        std::vector<CitationEvent> kept_events;
        for (std::size_t i = 0; i < events.size(); ++i) {
            auto& e = events[i];
            const auto row = row_of(rows.events, i);
            if (auto d = dropped_pubs.find(e.publication_id); d != dropped_pubs.end()) {
                if (e.citing_year < d->second)
                    issues.push_back({citations_file, row, "citing_year",
                                      "citing_year " + std::to_string(e.citing_year) + " precedes pub_year " +
                                          std::to_string(d->second) + " of '" + e.publication_id + "'"});
                ++c.dropped_events_;
                continue;
            }
            auto it = c.pub_index_.find(e.publication_id);
            if (it == c.pub_index_.end()) {
                // Rows rejected above already produced an issue of their own.
                if (!seen.contains(e.publication_id))
                    issues.push_back({citations_file, row, "publication_id", "unknown publication_id '" + e.publication_id + "'"});
                continue;
            }
            const auto& p = c.publications_[it->second];
            if (e.citing_year < p.pub_year) {
                issues.push_back({citations_file, row, "citing_year",
                                  "citing_year " + std::to_string(e.citing_year) + " precedes pub_year " +
                                      std::to_string(p.pub_year) + " of '" + p.id + "'"});
                continue;
            }
            kept_events.push_back(std::move(e));
        }

        if (!issues.empty()) throw CorpusError(std::move(issues));

        c.journals_ = std::move(journals);
        c.events_ = std::move(kept_events);
        c.journal_cells_ = derive_partition_cells(c.journals_);

        for (const auto& p : c.publications_) c.horizon_year_ = std::max(c.horizon_year_.value_or(p.pub_year), p.pub_year);
        for (const auto& e : c.events_) c.horizon_year_ = std::max(c.horizon_year_.value_or(e.citing_year), e.citing_year);

        c.series_.resize(c.publications_.size());
        for (std::size_t i = 0; i < c.publications_.size(); ++i)
            c.series_[i].assign(static_cast<std::size_t>(*c.horizon_year_ - c.publications_[i].pub_year + 1), 0);
        for (const auto& e : c.events_) {
            const auto idx = c.pub_index_.at(e.publication_id);
            ++c.series_[idx][static_cast<std::size_t>(e.citing_year - c.publications_[idx].pub_year)];
        }

        for (const auto& [jid, key] : c.journal_cells_) c.cells_[key];
        c.pub_cells_.reserve(c.publications_.size());
        for (const auto& p : c.publications_) {
            const auto& key = c.journal_cells_.at(p.journal_id);
            c.cells_[key].push_back(p.id);
            c.pub_cells_.push_back(key);
        }
        for (auto& [key, members] : c.cells_) std::sort(members.begin(), members.end());
        return c;
    }

    const std::vector<Publication>& publications() const { return publications_; }
    const std::vector<Journal>& journals() const { return journals_; }
    const std::vector<CitationEvent>& events() const { return events_; }

    /// Every cell with its sorted member ids. Cells of journals without publications are present and empty.
    const std::map<CellKey, std::vector<PublicationId>>& cells() const { return cells_; }
    const std::map<JournalId, CellKey>& journal_cells() const { return journal_cells_; }

    /// Latest citing year present, or the latest publication year when there are no events.
    std::optional<int> horizon_year() const { return horizon_year_; }

    std::size_t dropped_publications() const { return dropped_publications_; }
    std::size_t dropped_events() const { return dropped_events_; }

    bool contains(const PublicationId& id) const { return pub_index_.contains(id); }
    bool has_cell(const CellKey& key) const { return cells_.contains(key); }

    std::size_t index_of(const PublicationId& id) const {
        auto it = pub_index_.find(id);
        if (it == pub_index_.end()) throw UnknownKeyError("unknown publication id '" + id + "'");
        return it->second;
    }

    const Publication& publication(const PublicationId& id) const { return publications_[index_of(id)]; }

    /// Events per year offset, offset 0 being the publication year, up to the horizon.
    const std::vector<std::int64_t>& series_at(std::size_t index) const { return series_.at(index); }

    const CellKey& cell_of(const PublicationId& id) const { return pub_cells_[index_of(id)]; }

    const std::vector<PublicationId>& members(const CellKey& key) const {
        auto it = cells_.find(key);
        if (it == cells_.end()) throw UnknownKeyError("unknown cell '" + key.str() + "'");
        return it->second;
    }

    /// Equal when the stored records are equal; derived indexes follow from them.
    friend bool operator==(const Corpus& a, const Corpus& b) {
        return a.publications_ == b.publications_ && a.journals_ == b.journals_ && a.events_ == b.events_;
    }

private:
    std::vector<Publication> publications_;
    std::vector<Journal> journals_;
    std::vector<CitationEvent> events_;
    std::unordered_map<PublicationId, std::size_t> pub_index_;
    std::map<JournalId, CellKey> journal_cells_;
    std::map<CellKey, std::vector<PublicationId>> cells_;
    std::vector<CellKey> pub_cells_;
    std::vector<std::vector<std::int64_t>> series_;
    std::optional<int> horizon_year_;
    std::size_t dropped_publications_ = 0;
    std::size_t dropped_events_ = 0;
};

/// Members of one cell, sorted by id.
inline const std::vector<PublicationId>& cell_members(const Corpus& corpus, const CellKey& cell) {
    return corpus.members(cell);
}

namespace detail {

inline bool parse_year(const std::string& s, int& out) {
    if (s.empty()) return false;
    std::size_t i = s[0] == '-' ? 1 : 0;
    if (i == s.size() || s.size() - i > 6) return false;
    int v = 0;
    for (; i < s.size(); ++i) {
        if (s[i] < '0' || s[i] > '9') return false;
        v = v * 10 + (s[i] - '0');
    }
    out = s[0] == '-' ? -v : v;
    return true;
}

inline void check_header(const csv::Table& t, const char* file, const std::vector<std::string>& expected,
                         std::size_t required, std::vector<Issue>& issues) {
    const bool ok = t.header.size() >= required && t.header.size() <= expected.size() &&
                    std::equal(t.header.begin(), t.header.end(), expected.begin());
    if (!ok) {
        std::string want;
        for (std::size_t i = 0; i < expected.size(); ++i) want += (i ? "," : "") + expected[i];
        issues.push_back({file, 1, "header", "expected header '" + want + "'"});
    }
}

}  // namespace detail

/// Parses the three corpus tables, validates them and builds the indexes.
/// Throws CorpusError listing every malformed row or broken reference.
inline Corpus load_corpus(std::istream& publications_in, std::istream& journals_in, std::istream& citations_in,
                          const LoadOptions& options = {}) {
    std::vector<Issue> issues;
    const auto pub_table = csv::read_table(publications_in);
    const auto journal_table = csv::read_table(journals_in);
    const auto citation_table = csv::read_table(citations_in);

    // An entirely empty file stands for an empty table.
    if (!pub_table.header.empty())
        detail::check_header(pub_table, publications_file, {"id", "journal_id", "year", "doc_type"}, 3, issues);
    if (!journal_table.header.empty())
        detail::check_header(journal_table, journals_file, {"journal_id", "categories"}, 2, issues);
    if (!citation_table.header.empty())
        detail::check_header(citation_table, citations_file, {"publication_id", "citing_year"}, 2, issues);
    if (!issues.empty()) throw CorpusError(std::move(issues));

    Corpus::SourceRows rows;
    std::vector<Journal> journals;
    for (const auto& r : journal_table.rows) {
        if (r.fields.size() != 2) {
            issues.push_back({journals_file, r.line_number, "", "expected 2 fields, found " + std::to_string(r.fields.size())});
            continue;
        }
        Journal j{r.fields[0], csv::split(r.fields[1], ';')};
        journals.push_back(std::move(j));
        rows.journals.push_back(r.line_number);
    }

    const std::size_t pub_width = pub_table.header.size();
    std::vector<Publication> publications;
    for (const auto& r : pub_table.rows) {
        if (r.fields.size() != pub_width) {
            issues.push_back({publications_file, r.line_number, "",
                              "expected " + std::to_string(pub_width) + " fields, found " + std::to_string(r.fields.size())});
            continue;
        }
        Publication p;
        p.id = r.fields[0];
        p.journal_id = r.fields[1];
        if (!detail::parse_year(r.fields[2], p.pub_year)) {
            issues.push_back({publications_file, r.line_number, "year", "not an integer year: '" + r.fields[2] + "'"});
            continue;
        }
        if (pub_width == 4 && !r.fields[3].empty()) p.doc_type = r.fields[3];
        publications.push_back(std::move(p));
        rows.publications.push_back(r.line_number);
    }

    std::vector<CitationEvent> events;
    for (const auto& r : citation_table.rows) {
        if (r.fields.size() != 2) {
            issues.push_back({citations_file, r.line_number, "", "expected 2 fields, found " + std::to_string(r.fields.size())});
            continue;
        }
        CitationEvent e{r.fields[0], 0};
        if (!detail::parse_year(r.fields[1], e.citing_year)) {
            issues.push_back({citations_file, r.line_number, "citing_year", "not an integer year: '" + r.fields[1] + "'"});
            continue;
        }
        events.push_back(std::move(e));
        rows.events.push_back(r.line_number);
    }

    std::optional<Corpus> corpus;
    try {
        corpus = Corpus::build(std::move(publications), std::move(journals), std::move(events), options, rows);
    } catch (const CorpusError& e) {
        issues.insert(issues.end(), e.issues().begin(), e.issues().end());
    }
    if (!issues.empty()) {
        std::stable_sort(issues.begin(), issues.end(), [](const Issue& a, const Issue& b) {
            return std::tie(a.file, a.row) < std::tie(b.file, b.row);
        });
        throw CorpusError(std::move(issues));
    }
    return std::move(*corpus);
}

/// Loads publications.csv, journals.csv and citations.csv from a directory.
/// Throws CorpusIoError when a file is missing or unreadable.
inline Corpus load_corpus_dir(const std::filesystem::path& dir, const LoadOptions& options = {}) {
    auto open = [&](const char* name) {
        std::ifstream in(dir / name, std::ios::binary);
        if (!in) throw CorpusIoError("cannot read " + (dir / name).string());
        return in;
    };
    auto pubs = open(publications_file);
    auto journals = open(journals_file);
    auto cites = open(citations_file);
    return load_corpus(pubs, journals, cites, options);
}

/// Serializes in the same formats load_corpus reads, preserving record order.
inline void write_corpus(const Corpus& corpus, std::ostream& publications_out, std::ostream& journals_out,
                         std::ostream& citations_out) {
    publications_out << "id,journal_id,year,doc_type\n";
    for (const auto& p : corpus.publications())
        publications_out << csv::join_row({p.id, p.journal_id, std::to_string(p.pub_year), p.doc_type});
    journals_out << "journal_id,categories\n";
    for (const auto& j : corpus.journals()) {
        std::string cats;
        for (std::size_t i = 0; i < j.categories.size(); ++i) cats += (i ? ";" : "") + j.categories[i];
        journals_out << csv::join_row({j.id, cats});
    }
    citations_out << "publication_id,citing_year\n";
    for (const auto& e : corpus.events()) citations_out << csv::join_row({e.publication_id, std::to_string(e.citing_year)});
}

inline void write_corpus_dir(const Corpus& corpus, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    auto open = [&](const char* name) {
        std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
        if (!out) throw CorpusIoError("cannot write " + (dir / name).string());
        return out;
    };
    auto pubs = open(publications_file);
    auto journals = open(journals_file);
    auto cites = open(citations_file);
    write_corpus(corpus, pubs, journals, cites);
    if (!pubs || !journals || !cites) throw CorpusIoError("write failed in " + dir.string());
}

}  // namespace hcstab
