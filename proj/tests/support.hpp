#pragma once
// Test fixtures and brute-force oracles. The oracles avoid the library's
// Rational type and sorted-prefix tricks: they scan every element and compare
// unreduced fractions by cross multiplication.

#include <hcstab/hcstab.hpp>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace hcstab::testing {

// ---------------------------------------------------------------------------
// Fixtures

/// Publication with its citation events given as year offsets.
struct PubSpec {
    std::string id;
    std::string journal;
    int year;
    std::vector<int> offsets;
};

inline Corpus make_corpus(const std::vector<Journal>& journals, const std::vector<PubSpec>& pubs, const LoadOptions& options = {}) {
    std::vector<Publication> ps;
    std::vector<CitationEvent> es;
    for (const auto& p : pubs) {
        ps.push_back({p.id, p.journal, p.year, "article"});
        for (int d : p.offsets) es.push_back({p.id, p.year + d});
    }
    return Corpus::build(ps, journals, es, options);
}

/// Single cell "X" whose publications get the listed offset lists, ids p1..pn.
inline Corpus single_cell_corpus(const std::vector<std::vector<int>>& offsets, int horizon_offset) {
    std::vector<PubSpec> pubs;
    for (std::size_t i = 0; i < offsets.size(); ++i) pubs.push_back({"p" + std::to_string(i + 1), "J", 2004, offsets[i]});
    // An anchor event keeps the horizon fixed regardless of the random offsets.
    pubs.push_back({"anchor", "K", 2004, {horizon_offset}});
    return make_corpus({{"J", {"X"}}, {"K", {"Anchor"}}}, pubs);
}

inline CellCounts counts_of(const std::vector<std::int64_t>& values) {
    std::vector<CountEntry> entries;
    for (std::size_t i = 0; i < values.size(); ++i) {
        std::string id = std::to_string(i);
        id.insert(0, 4 - std::min<std::size_t>(4, id.size()), '0');
        entries.push_back({"id" + id, values[i]});
    }
    return make_cell_counts(std::move(entries), CellKey("X"), WindowLength(1));
}

inline std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

inline void spit(const std::filesystem::path& p, const std::string& text) {
    std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << text;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& name) {
    static std::mt19937_64 rng(std::random_device{}());
    auto p = std::filesystem::temp_directory_path() / ("hcstab-test-" + name + "-" + std::to_string(rng() % 1000000000));
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

// ---------------------------------------------------------------------------
// CSS oracle

struct Frac {
    std::int64_t num;
    std::int64_t den;
};

inline bool frac_eq(Frac a, Frac b) { return static_cast<__int128>(a.num) * b.den == static_cast<__int128>(b.num) * a.den; }

inline bool matches(const Rational& r, Frac f) {
    return static_cast<__int128>(r.numerator()) * f.den == static_cast<__int128>(f.num) * r.denominator();
}

struct CssOracle {
    std::vector<Frac> betas;
    int stalled_at = 0;  // 0: no stall
};

/// Conditional means by full scans: beta_1 = mean of all, beta_j = mean of counts >= beta_{j-1}.
inline CssOracle css_oracle(const std::vector<std::int64_t>& counts) {
    CssOracle o;
    std::int64_t sum = 0;
    for (auto c : counts) sum += c;
    o.betas.push_back({sum, static_cast<std::int64_t>(counts.size())});
    for (int j = 2; j <= 3; ++j) {
        const Frac prev = o.betas.back();
        std::int64_t s = 0, n = 0;
        for (auto c : counts)
            if (static_cast<__int128>(c) * prev.den >= prev.num) {
                s += c;
                ++n;
            }
        const Frac next{s, n};
        if (frac_eq(next, prev)) {
            o.stalled_at = j;
            break;
        }
        o.betas.push_back(next);
    }
    return o;
}

/// Ids whose count reaches beta_j, or empty if beta_j is undefined.
inline std::set<std::string> css_members_oracle(const std::vector<std::pair<std::string, std::int64_t>>& entries, int j) {
    std::vector<std::int64_t> counts;
    for (const auto& e : entries) counts.push_back(e.second);
    const auto o = css_oracle(counts);
    std::set<std::string> out;
    if (static_cast<int>(o.betas.size()) < j) return out;
    const Frac b = o.betas[static_cast<std::size_t>(j - 1)];
    for (const auto& e : entries)
        if (static_cast<__int128>(e.second) * b.den >= b.num) out.insert(e.first);
    return out;
}

// ---------------------------------------------------------------------------
// Percentile oracle

struct PercentileOracle {
    std::int64_t threshold;
    std::set<std::string> inclusive;
    std::set<std::string> exact_size;
};

/// Scans every candidate cut-off t and keeps the largest one that still admits k entries.
inline PercentileOracle percentile_oracle(const std::vector<std::pair<std::string, std::int64_t>>& entries, int basis_points) {
    const auto n = static_cast<std::int64_t>(entries.size());
    std::int64_t k = 0;
    while (k * 10000 < static_cast<std::int64_t>(basis_points) * n) ++k;
    std::int64_t best = -1;
    for (const auto& cand : entries) {
        std::int64_t reach = 0;
        for (const auto& e : entries) reach += e.second >= cand.second;
        if (reach >= k && cand.second > best) best = cand.second;
    }
    PercentileOracle o{best, {}, {}};
    std::vector<std::string> ties;
    for (const auto& e : entries) {
        if (e.second >= best) o.inclusive.insert(e.first);
        if (e.second > best) o.exact_size.insert(e.first);
        if (e.second == best) ties.push_back(e.first);
    }
    std::sort(ties.begin(), ties.end());
    for (std::size_t i = 0; static_cast<std::int64_t>(o.exact_size.size()) < k && i < ties.size(); ++i) o.exact_size.insert(ties[i]);
    return o;
}

inline std::set<std::string> as_set(const std::vector<PublicationId>& v) { return {v.begin(), v.end()}; }

// ---------------------------------------------------------------------------
// Random corpora for property checks

inline Corpus random_corpus(std::mt19937_64& rng, int max_pubs = 40) {
    static const std::vector<std::string> pool = {"A", "B", "C", "D"};
    std::uniform_int_distribution<int> n_journals_d(1, 6);
    const int n_journals = n_journals_d(rng);
    std::vector<Journal> journals;
    for (int j = 0; j < n_journals; ++j) {
        std::vector<std::string> cats;
        for (const auto& c : pool)
            if (rng() % 2) cats.push_back(c);
        if (cats.empty()) cats.push_back(pool[rng() % pool.size()]);
        std::shuffle(cats.begin(), cats.end(), rng);
        journals.push_back({"J" + std::to_string(j), cats});
    }
    std::uniform_int_distribution<int> n_pubs_d(1, max_pubs);
    const int n_pubs = n_pubs_d(rng);
    const int horizon_offset = static_cast<int>(rng() % 8);
    std::vector<PubSpec> pubs;
    for (int i = 0; i < n_pubs; ++i) {
        PubSpec p{"P" + std::to_string(i), journals[rng() % journals.size()].id, 2004, {}};
        const int n_events = static_cast<int>(rng() % 25);
        for (int e = 0; e < n_events; ++e) p.offsets.push_back(static_cast<int>(rng() % (horizon_offset + 1)));
        pubs.push_back(std::move(p));
    }
    return make_corpus(journals, pubs);
}

}  // namespace hcstab::testing
