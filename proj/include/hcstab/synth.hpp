#pragma once
// Seeded synthetic corpora with cumulative-advantage citation dynamics.
//
// Every event of year offset d attaches to publication i with probability
// proportional to (c_i + advantage_offset) * aging(d), where c_i is the
// running event count of i. Events are allocated one at a time, so an early
// lead feeds later draws.

#include <hcstab/corpus.hpp>
#include <hcstab/rational.hpp>

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hcstab {

enum class AgingKind { fast, slow, flat };

/// Relative citation intensity per year offset.
///   fast: peak at offset 1, geometric decay afterwards (offset 0 weighs `decay`)
///   slow: linear rise to `peak` (3..6), geometric decay afterwards
///   flat: uniform
struct AgingKernel {
    AgingKind kind = AgingKind::flat;
    double decay = 1.0;
    int peak = 4;

    std::vector<double> weights(int n_years) const {
        std::vector<double> w(static_cast<std::size_t>(std::max(n_years, 0)), 1.0);
        for (int d = 0; d < n_years; ++d) {
            double v = 1.0;
            switch (kind) {
                case AgingKind::fast: v = d == 0 ? decay : std::pow(decay, d - 1); break;
                case AgingKind::slow:
                    v = d <= peak ? static_cast<double>(d + 1) / (peak + 1) : std::pow(decay, d - peak);
                    break;
                case AgingKind::flat: break;
            }
            w[static_cast<std::size_t>(d)] = v;
        }
        return w;
    }

    friend bool operator==(const AgingKernel&, const AgingKernel&) = default;
};

struct CellLayout {
    std::vector<std::string> categories;
    int journals = 1;
    std::int64_t publications = 1;

    friend bool operator==(const CellLayout&, const CellLayout&) = default;
};

struct SynthConfig {
    std::uint64_t seed = 42;
    std::int64_t n_publications = 0;
    int n_journals = 0;
    std::vector<CellLayout> category_layout;
    int pub_year = 2004;
    int n_years = 8;
    std::vector<std::int64_t> citations_per_year;
    AgingKernel aging;
    Rational advantage_offset{1};

    friend bool operator==(const SynthConfig&, const SynthConfig&) = default;
};

/// Invalid configuration; one message per offending field.
class SynthConfigError : public std::invalid_argument {
public:
    explicit SynthConfigError(std::vector<std::string> problems)
        : std::invalid_argument(join(problems)), problems_(std::move(problems)) {}
    const std::vector<std::string>& problems() const { return problems_; }

private:
    static std::string join(const std::vector<std::string>& ps) {
        std::string s;
        for (const auto& p : ps) s += (s.empty() ? "" : "; ") + p;
        return s.empty() ? "invalid synth config" : s;
    }
    std::vector<std::string> problems_;
};

inline std::vector<std::string> config_problems(const SynthConfig& c) {
    std::vector<std::string> out;
    if (c.n_publications < 1) out.push_back("n_publications: must be positive");
    if (c.n_journals < 1) out.push_back("n_journals: must be positive");
    if (c.n_years < 1) out.push_back("n_years: must be positive");
    if (c.category_layout.empty()) out.push_back("category_layout: must list at least one cell");
    std::int64_t journals = 0;
    std::int64_t pubs = 0;
    std::set<CellKey> keys;
    for (std::size_t i = 0; i < c.category_layout.size(); ++i) {
        const auto& cell = c.category_layout[i];
        const std::string where = "category_layout[" + std::to_string(i) + "]";
        if (cell.categories.empty()) out.push_back(where + ".categories: must not be empty");
        for (const auto& name : cell.categories)
            if (csv::trim(name).empty() || detail::has_reserved_char(name, "|;,\""))
                out.push_back(where + ".categories: invalid category name '" + name + "'");
        if (!keys.insert(CellKey::from_categories(cell.categories)).second)
            out.push_back(where + ".categories: duplicates an earlier category set");
        if (cell.journals < 1) out.push_back(where + ".journals: must be positive");
        if (cell.publications < 1) out.push_back(where + ".publications: must be positive");
        journals += cell.journals;
        pubs += cell.publications;
    }
    if (!c.category_layout.empty() && journals != c.n_journals)
        out.push_back("n_journals: " + std::to_string(c.n_journals) + " differs from the layout total " + std::to_string(journals));
    if (!c.category_layout.empty() && pubs != c.n_publications)
        out.push_back("n_publications: " + std::to_string(c.n_publications) + " differs from the layout total " + std::to_string(pubs));
    if (c.n_years >= 1 && c.citations_per_year.size() != static_cast<std::size_t>(c.n_years))
        out.push_back("citations_per_year: has " + std::to_string(c.citations_per_year.size()) + " entries, n_years is " +
                      std::to_string(c.n_years));
    for (std::size_t d = 0; d < c.citations_per_year.size(); ++d)
        if (c.citations_per_year[d] < 0) out.push_back("citations_per_year[" + std::to_string(d) + "]: must be non-negative");
    if (c.advantage_offset <= Rational(0)) out.push_back("advantage_offset: must be positive");
    switch (c.aging.kind) {
        case AgingKind::fast:
            if (!(c.aging.decay > 0.0 && c.aging.decay <= 1.0)) out.push_back("aging.decay: must lie in (0, 1]");
            break;
        case AgingKind::slow:
            if (!(c.aging.decay > 0.0 && c.aging.decay <= 1.0)) out.push_back("aging.decay: must lie in (0, 1]");
            if (c.aging.peak < 3 || c.aging.peak > 6) out.push_back("aging.peak: must lie in 3..6");
            break;
        case AgingKind::flat: break;
    }
    return out;
}

inline void validate(const SynthConfig& c) {
    if (auto problems = config_problems(c); !problems.empty()) throw SynthConfigError(std::move(problems));
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::ordered_json to_json(const SynthConfig& c) {
    nlohmann::ordered_json j;
    j["seed"] = c.seed;
    j["n_publications"] = c.n_publications;
    j["n_journals"] = c.n_journals;
    auto layout = nlohmann::ordered_json::array();
    for (const auto& cell : c.category_layout) {
        nlohmann::ordered_json e;
        e["categories"] = cell.categories;
        e["journals"] = cell.journals;
        e["publications"] = cell.publications;
        layout.push_back(std::move(e));
    }
    j["category_layout"] = std::move(layout);
    j["pub_year"] = c.pub_year;
    j["n_years"] = c.n_years;
    j["citations_per_year"] = c.citations_per_year;
    nlohmann::ordered_json aging;
    switch (c.aging.kind) {
        case AgingKind::fast:
            aging["kind"] = "fast";
            aging["decay"] = c.aging.decay;
            break;
        case AgingKind::slow:
            aging["kind"] = "slow";
            aging["peak"] = c.aging.peak;
            aging["decay"] = c.aging.decay;
            break;
        case AgingKind::flat: aging["kind"] = "flat"; break;
    }
    j["aging"] = std::move(aging);
    j["advantage_offset"] = c.advantage_offset.str();
    return j;
}

namespace detail {

template <typename T>
void read_field(const nlohmann::json& j, const char* key, T& out, std::vector<std::string>& problems, const std::string& prefix = "") {
    if (!j.contains(key)) {
        problems.push_back(prefix + key + ": missing");
        return;
    }
    try {
        out = j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        problems.push_back(prefix + key + ": wrong type");
    }
}

inline void reject_unknown(const nlohmann::json& j, std::initializer_list<std::string_view> known, std::vector<std::string>& problems,
                           const std::string& prefix = "") {
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (auto k : known) ok = ok || key == k;
        if (!ok) problems.push_back(prefix + key + ": unknown field");
    }
}

}  // namespace detail

/// Parses a full config document. Throws SynthConfigError with field-level messages.
inline SynthConfig synth_config_from_json(const nlohmann::json& j) {
    std::vector<std::string> problems;
    if (!j.is_object()) throw SynthConfigError({"config: expected a JSON object"});
    detail::reject_unknown(j, {"seed", "n_publications", "n_journals", "category_layout", "pub_year", "n_years", "citations_per_year",
                               "aging", "advantage_offset"},
                           problems);
    SynthConfig c;
    if (j.contains("seed") && !(j["seed"].is_number_unsigned() || (j["seed"].is_number_integer() && j["seed"].get<std::int64_t>() >= 0)))
        problems.push_back("seed: must be a non-negative integer");
    else
        detail::read_field(j, "seed", c.seed, problems);
    detail::read_field(j, "n_publications", c.n_publications, problems);
    detail::read_field(j, "n_journals", c.n_journals, problems);
    detail::read_field(j, "pub_year", c.pub_year, problems);
    detail::read_field(j, "n_years", c.n_years, problems);
    if (j.contains("citations_per_year") && j["citations_per_year"].is_array()) {
        for (const auto& v : j["citations_per_year"]) {
            if (!v.is_number_integer()) {
                problems.push_back("citations_per_year: entries must be integers");
                break;
            }
            c.citations_per_year.push_back(v.get<std::int64_t>());
        }
    } else {
        problems.push_back("citations_per_year: missing or not an array");
    }
    if (j.contains("category_layout") && j["category_layout"].is_array()) {
        std::size_t i = 0;
        for (const auto& e : j["category_layout"]) {
            const std::string prefix = "category_layout[" + std::to_string(i++) + "].";
            CellLayout cell;
            if (!e.is_object()) {
                problems.push_back(prefix.substr(0, prefix.size() - 1) + ": expected an object");
                continue;
            }
            detail::reject_unknown(e, {"categories", "journals", "publications"}, problems, prefix);
            detail::read_field(e, "categories", cell.categories, problems, prefix);
            detail::read_field(e, "journals", cell.journals, problems, prefix);
            detail::read_field(e, "publications", cell.publications, problems, prefix);
            c.category_layout.push_back(std::move(cell));
        }
    } else {
        problems.push_back("category_layout: missing or not an array");
    }
    if (j.contains("aging") && j["aging"].is_object()) {
        const auto& a = j["aging"];
        std::string kind;
        detail::read_field(a, "kind", kind, problems, "aging.");
        if (kind == "fast") {
            c.aging.kind = AgingKind::fast;
            detail::reject_unknown(a, {"kind", "decay"}, problems, "aging.");
            detail::read_field(a, "decay", c.aging.decay, problems, "aging.");
        } else if (kind == "slow") {
            c.aging.kind = AgingKind::slow;
            detail::reject_unknown(a, {"kind", "peak", "decay"}, problems, "aging.");
            detail::read_field(a, "peak", c.aging.peak, problems, "aging.");
            detail::read_field(a, "decay", c.aging.decay, problems, "aging.");
        } else if (kind == "flat") {
            c.aging.kind = AgingKind::flat;
            detail::reject_unknown(a, {"kind"}, problems, "aging.");
        } else if (!kind.empty()) {
            problems.push_back("aging.kind: unknown kernel '" + kind + "' (expected fast, slow or flat)");
        }
    } else {
        problems.push_back("aging: missing or not an object");
    }
    if (j.contains("advantage_offset")) {
        const auto& v = j["advantage_offset"];
        try {
            if (v.is_string()) c.advantage_offset = Rational::parse(v.get<std::string>());
            else if (v.is_number_integer()) c.advantage_offset = Rational(v.get<std::int64_t>());
            else problems.push_back("advantage_offset: expected an integer or a \"n/d\" string");
        } catch (const std::exception& e) {
            problems.push_back(std::string("advantage_offset: ") + e.what());
        }
    } else {
        problems.push_back("advantage_offset: missing");
    }
    if (problems.empty()) problems = config_problems(c);
    if (!problems.empty()) throw SynthConfigError(std::move(problems));
    return c;
}

// ---------------------------------------------------------------------------
// Presets

enum class PresetName { fast_physics_like, slow_math_like };

inline PresetName parse_preset_name(std::string_view name) {
    if (name == "fast_physics_like") return PresetName::fast_physics_like;
    if (name == "slow_math_like") return PresetName::slow_math_like;
    throw std::invalid_argument("unknown preset '" + std::string(name) + "' (expected fast_physics_like or slow_math_like)");
}

/// Mean events per publication over the whole horizon, shared by both presets so
/// that they differ only in how the volume is spread over the years.
inline constexpr double preset_citations_per_publication = 16.0;
inline constexpr int preset_pub_year = 2004;
inline constexpr int preset_n_years = 8;  // publication year plus seven following years

/// Yearly volumes proportional to the kernel, totalling about per_publication * n_publications.
inline std::vector<std::int64_t> volumes_for(const AgingKernel& aging, int n_years, std::int64_t n_publications, double per_publication) {
    const auto w = aging.weights(n_years);
    double total_w = 0.0;
    for (double v : w) total_w += v;
    std::vector<std::int64_t> out;
    for (double v : w) out.push_back(std::llround(per_publication * static_cast<double>(n_publications) * v / total_w));
    return out;
}

/// Cell sizes of the three partition cells per domain, scaled down by `divisor`
/// (rounded to nearest, at least one publication per cell).
inline SynthConfig preset(PresetName name, int divisor = 1) {
    if (divisor < 1) throw std::invalid_argument("preset divisor must be positive");
    struct Base {
        std::vector<std::string> categories;
        int journals;
        std::int64_t publications;
    };
    std::vector<Base> base;
    SynthConfig c;
    if (name == PresetName::fast_physics_like) {
        base = {{{"Astronomy Astrophysics"}, 40, 8047},
                {{"Physics Particles Fields"}, 12, 1977},
                {{"Astronomy Astrophysics", "Physics Particles Fields"}, 10, 2440}};
        c.aging = {AgingKind::fast, 0.6, 1};
    } else {
        base = {{{"Mathematics"}, 60, 10022}, {{"Mathematics Applied"}, 30, 3938}, {{"Mathematics", "Mathematics Applied"}, 25, 3286}};
        c.aging = {AgingKind::slow, 0.8, 4};
    }
    for (const auto& b : base) {
        const std::int64_t pubs = std::max<std::int64_t>(1, (b.publications + divisor / 2) / divisor);
        const int journals = static_cast<int>(std::min<std::int64_t>(b.journals, pubs));
        c.category_layout.push_back({b.categories, journals, pubs});
        c.n_publications += pubs;
        c.n_journals += journals;
    }
    c.seed = 42;
    c.pub_year = preset_pub_year;
    c.n_years = preset_n_years;
    c.advantage_offset = Rational(1);
    c.citations_per_year = volumes_for(c.aging, c.n_years, c.n_publications, preset_citations_per_publication);
    return c;
}

/// Accepts either a full config or a preset reference {"preset": name, "divisor": k, "seed": s}.
inline SynthConfig resolve_config(const nlohmann::json& j) {
    if (j.is_object() && j.contains("preset")) {
        std::vector<std::string> problems;
        detail::reject_unknown(j, {"preset", "divisor", "seed"}, problems);
        std::string name;
        int divisor = 1;
        std::uint64_t seed = 42;
        detail::read_field(j, "preset", name, problems);
        if (j.contains("divisor")) detail::read_field(j, "divisor", divisor, problems);
        if (j.contains("seed")) detail::read_field(j, "seed", seed, problems);
        if (divisor < 1) problems.push_back("divisor: must be positive");
        if (!problems.empty()) throw SynthConfigError(std::move(problems));
        try {
            auto c = preset(parse_preset_name(name), divisor);
            c.seed = seed;
            return c;
        } catch (const std::invalid_argument& e) {
            throw SynthConfigError({std::string("preset: ") + e.what()});
        }
    }
    return synth_config_from_json(j);
}

// ---------------------------------------------------------------------------
// Generation

namespace detail {

/// Fenwick tree over integer attachment weights.
class WeightTree {
public:
    explicit WeightTree(std::size_t n) : tree_(n + 1, 0) {}

    void add(std::size_t i, std::int64_t delta) {
        for (++i; i < tree_.size(); i += i & (~i + 1)) tree_[i] += delta;
    }

    /// Smallest index whose inclusive prefix sum exceeds target.
    std::size_t find(std::int64_t target) const {
        std::size_t pos = 0;
        std::size_t step = 1;
        while (step * 2 < tree_.size()) step *= 2;
        for (; step > 0; step /= 2) {
            if (pos + step < tree_.size() && tree_[pos + step] <= target) {
                pos += step;
                target -= tree_[pos];
            }
        }
        return pos;
    }

private:
    std::vector<std::int64_t> tree_;
};

/// Unbiased integer in [0, bound) from a 64-bit engine.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (true) {
        const std::uint64_t r = rng();
        if (r >= threshold) return r % bound;
    }
}

inline std::string padded(char prefix, std::int64_t value, std::int64_t count) {
    std::string digits = std::to_string(value);
    const std::string width = std::to_string(count);
    return prefix + std::string(width.size() > digits.size() ? width.size() - digits.size() : 0, '0') + digits;
}

}  // namespace detail

/// Builds the corpus described by `config`. The draw sequence comes from
/// std::mt19937_64 seeded with config.seed, so output is reproducible.
inline Corpus generate_corpus(const SynthConfig& config) {
    validate(config);
    std::vector<Journal> journals;
    std::vector<Publication> publications;
    std::int64_t next_pub = 1;
    int next_journal = 1;
    for (const auto& cell : config.category_layout) {
        const auto first_journal = journals.size();
        for (int k = 0; k < cell.journals; ++k)
            journals.push_back({detail::padded('J', next_journal++, config.n_journals), cell.categories});
        for (std::int64_t k = 0; k < cell.publications; ++k) {
            const auto& journal = journals[first_journal + static_cast<std::size_t>(k % cell.journals)];
            publications.push_back({detail::padded('P', next_pub++, config.n_publications), journal.id, config.pub_year, "article"});
        }
    }

    // Weight of publication i is proportional to (c_i + p/q); scaling by q keeps it integral.
    // The whole cohort shares one publication year, so aging(d) scales every weight of a
    // year equally and cancels out of the draw; it shapes the yearly volumes instead.
    const std::int64_t p = config.advantage_offset.numerator();
    const std::int64_t q = config.advantage_offset.denominator();
    const auto n = publications.size();
    detail::WeightTree tree(n);
    for (std::size_t i = 0; i < n; ++i) tree.add(i, p);
    std::int64_t total = p * static_cast<std::int64_t>(n);

    std::mt19937_64 rng(config.seed);
    std::vector<CitationEvent> events;
    std::int64_t volume = 0;
    for (auto v : config.citations_per_year) volume += v;
    events.reserve(static_cast<std::size_t>(volume));
    for (int d = 0; d < config.n_years; ++d) {
        const int year = config.pub_year + d;
        for (std::int64_t k = 0; k < config.citations_per_year[static_cast<std::size_t>(d)]; ++k) {
            const auto target = static_cast<std::int64_t>(detail::uniform_below(rng, static_cast<std::uint64_t>(total)));
            const auto i = tree.find(target);
            tree.add(i, q);
            total += q;
            events.push_back({publications[i].id, year});
        }
    }
    return Corpus::build(std::move(publications), std::move(journals), std::move(events));
}

}  // namespace hcstab
