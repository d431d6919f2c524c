#pragma once
// Subcommand implementations behind the hcstab executable.
// Exit codes: 0 success, 1 domain or validation error, 2 I/O error.

#include <hcstab/corpus.hpp>
#include <hcstab/report.hpp>
#include <hcstab/selection.hpp>
#include <hcstab/stability.hpp>
#include <hcstab/synth.hpp>
#include <hcstab/windows.hpp>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace hcstab::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_invalid = 1;
inline constexpr int exit_io = 2;

namespace fs = std::filesystem;

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Files are staged in a hidden directory inside `out_dir` and renamed into place only
/// after every one of them has been written.
class StagedOutput {
public:
    explicit StagedOutput(fs::path out_dir) : out_dir_(std::move(out_dir)) {
        std::error_code ec;
        fs::create_directories(out_dir_, ec);
        if (ec) throw IoError("cannot create output directory " + out_dir_.string() + ": " + ec.message());
        staging_ = out_dir_ / ".hcstab-staging";
        fs::remove_all(staging_, ec);
        fs::create_directories(staging_, ec);
        if (ec) throw IoError("cannot write to output directory " + out_dir_.string() + ": " + ec.message());
    }
    StagedOutput(const StagedOutput&) = delete;
    StagedOutput& operator=(const StagedOutput&) = delete;
    ~StagedOutput() {
        std::error_code ec;
        fs::remove_all(staging_, ec);
    }

    void write(const std::string& name, const std::function<void(std::ostream&)>& body) {
        std::ofstream out(staging_ / name, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + (staging_ / name).string());
        body(out);
        out.close();
        if (!out) throw IoError("write failed for " + (out_dir_ / name).string());
        names_.push_back(name);
    }

    void commit() {
        for (const auto& name : names_) {
            std::error_code ec;
            fs::rename(staging_ / name, out_dir_ / name, ec);
            if (ec) throw IoError("cannot move " + name + " into " + out_dir_.string() + ": " + ec.message());
        }
        names_.clear();
    }

private:
    fs::path out_dir_;
    fs::path staging_;
    std::vector<std::string> names_;
};

// ---------------------------------------------------------------------------
// validate

inline int run_validate(const fs::path& corpus_dir, std::ostream& out, std::ostream& err) {
    if (!fs::is_directory(corpus_dir)) {
        err << "error: " << corpus_dir.string() << " is not a directory\n";
        return exit_io;
    }
    try {
        const auto corpus = load_corpus_dir(corpus_dir);
        out << "corpus: " << corpus_dir.string() << "\n";
        out << "publications: " << corpus.publications().size() << "\n";
        out << "journals: " << corpus.journals().size() << "\n";
        out << "citation events: " << corpus.events().size() << "\n";
        out << "horizon year: " << (corpus.horizon_year() ? std::to_string(*corpus.horizon_year()) : "none") << "\n";
        if (corpus.dropped_publications() > 0)
            out << "warning: dropped " << corpus.dropped_publications() << " non-article publications and " << corpus.dropped_events()
                << " of their citation events\n";
        out << "cells: " << corpus.cells().size() << "\n";
        std::map<CellKey, std::size_t> journals_per_cell;
        for (const auto& [jid, key] : corpus.journal_cells()) ++journals_per_cell[key];
        for (const auto& [key, members] : corpus.cells()) {
            out << "  " << key << ": " << members.size() << " publications, " << journals_per_cell[key] << " journals";
            if (auto w = max_window(corpus, key)) out << ", longest window " << *w;
            out << "\n";
        }
        return exit_ok;
    } catch (const CorpusIoError& e) {
        err << "error: " << e.what() << "\n";
        return exit_io;
    } catch (const CorpusError& e) {
        err << "invalid corpus: " << e.issues().size() << " problem(s)\n";
        for (const auto& issue : e.issues()) err << "  " << issue.str() << "\n";
        return exit_invalid;
    }
}

// ---------------------------------------------------------------------------
// analyze

struct AnalysisConfig {
    fs::path corpus_dir;
    std::optional<std::vector<CellKey>> cells;  // nullopt: every non-empty cell
    std::vector<SelectionLevel> levels = default_levels();
    int window_first = 1;
    int window_last = preset_n_years;
    TieMode tie_mode = TieMode::inclusive;
    std::optional<OverlapMetric> metric;  // nullopt: summarize all three metrics
    int threshold_bp = default_threshold_bp;
    fs::path out_dir;
};

/// Parses "A..B".
inline std::pair<int, int> parse_window_range(std::string_view text) {
    const auto dots = text.find("..");
    if (dots == std::string_view::npos) throw std::invalid_argument("window range must look like A..B");
    try {
        std::size_t used_a = 0, used_b = 0;
        const std::string a(text.substr(0, dots)), b(text.substr(dots + 2));
        const int lo = std::stoi(a, &used_a);
        const int hi = std::stoi(b, &used_b);
        if (used_a != a.size() || used_b != b.size()) throw std::invalid_argument("");
        return {lo, hi};
    } catch (const std::exception&) {
        throw std::invalid_argument("window range must look like A..B, got '" + std::string(text) + "'");
    }
}

inline std::vector<SelectionLevel> parse_levels(std::string_view text) {
    std::vector<SelectionLevel> levels;
    for (const auto& token : csv::split(text))
        if (!token.empty()) levels.push_back(SelectionLevel::parse(token));
    if (levels.empty()) throw std::invalid_argument("no selection levels given");
    return levels;
}

/// Selection, overlap, size, peak and convergence results for every requested (cell, level).
inline std::vector<SweepResult> sweep(const Corpus& corpus, const std::vector<CellKey>& cells, const AnalysisConfig& config) {
    std::vector<SweepResult> results;
    const Rational threshold(config.threshold_bp, 10000);
    std::vector<OverlapMetric> metrics;
    if (config.metric) metrics.push_back(*config.metric);
    else metrics.assign(std::begin(all_metrics), std::end(all_metrics));
    for (const auto& cell : cells) {
        for (const auto& level : config.levels) {
            SweepResult r;
            r.groups = group_sequence(corpus, cell, level, WindowLength(config.window_first), WindowLength(config.window_last),
                                      config.tie_mode);
            r.curve = consecutive_overlap(r.groups);
            r.sizes = size_series(r.groups);
            for (const auto& g : r.groups) {
                const auto rest = remainder_of(corpus, g);
                std::optional<std::size_t> hc, rem;
                if (!g.members.empty()) hc = peak_year(corpus, g.members, g.window).peak_offset;
                if (!rest.empty()) rem = peak_year(corpus, rest, g.window).peak_offset;
                r.peaks.emplace_back(hc, rem);
            }
            for (auto m : metrics) r.convergence.push_back(convergence_summary(r.curve, m, threshold));
            results.push_back(std::move(r));
        }
    }
    return results;
}

inline int run_analyze(const AnalysisConfig& config, std::ostream& out, std::ostream& err) {
    Corpus corpus;
    try {
        corpus = load_corpus_dir(config.corpus_dir);
    } catch (const CorpusIoError& e) {
        err << "error: " << e.what() << "\n";
        return exit_io;
    } catch (const CorpusError& e) {
        err << "invalid corpus: " << e.issues().size() << " problem(s)\n";
        for (const auto& issue : e.issues()) err << "  " << issue.str() << "\n";
        return exit_invalid;
    }

    std::vector<CellKey> cells;
    if (config.cells) {
        for (const auto& key : *config.cells) {
            if (!corpus.has_cell(key)) {
                err << "error: unknown cell '" << key << "'\n";
                return exit_invalid;
            }
            if (corpus.members(key).empty()) {
                err << "error: cell '" << key << "' has no publications\n";
                return exit_invalid;
            }
            cells.push_back(key);
        }
    } else {
        for (const auto& [key, members] : corpus.cells())
            if (!members.empty()) cells.push_back(key);
    }
    if (cells.empty()) {
        err << "error: corpus has no publications to analyze\n";
        return exit_invalid;
    }
    if (config.window_first < 1 || config.window_last <= config.window_first) {
        err << "error: window range " << config.window_first << ".." << config.window_last
            << " must satisfy 1 <= A < B (overlaps need two consecutive windows)\n";
        return exit_invalid;
    }
    for (const auto& key : cells) {
        const int longest = *max_window(corpus, key);
        if (config.window_last > longest) {
            err << "error: window " << config.window_last << " exceeds the corpus horizon " << *corpus.horizon_year() << " for cell '"
                << key << "' (longest window " << longest << ")\n";
            return exit_invalid;
        }
    }
    if (config.threshold_bp < 1 || config.threshold_bp > 10000) {
        err << "error: threshold must lie in 1..10000 basis points\n";
        return exit_invalid;
    }

    std::vector<SweepResult> results;
    try {
        results = sweep(corpus, cells, config);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_invalid;
    }

    try {
        StagedOutput staged(config.out_dir);
        staged.write("groups.csv", [&](std::ostream& o) { write_groups_csv(o, results); });
        staged.write("overlap_curves.csv", [&](std::ostream& o) { write_overlap_csv(o, results); });
        staged.write("size_series.csv", [&](std::ostream& o) { write_size_series_csv(o, results); });
        staged.write("peak_years.csv", [&](std::ostream& o) { write_peak_years_csv(o, results); });
        staged.write("convergence.csv", [&](std::ostream& o) { write_convergence_csv(o, results); });
        staged.commit();
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return exit_io;
    }

    out << "analyzed " << cells.size() << " cell(s) x " << config.levels.size() << " level(s), windows " << config.window_first << ".."
        << config.window_last << "\n";
    for (const auto& r : results)
        for (const auto& s : r.convergence)
            out << "  " << r.curve.cell << " / " << r.curve.level.token() << " / " << metric_name(s.metric) << ": "
                << (s.first_window_at_threshold ? "stays >= threshold from window " + std::to_string(s.first_window_at_threshold->years())
                                                : std::string("never settles above threshold"))
                << "\n";
    return exit_ok;
}

// ---------------------------------------------------------------------------
// synth

inline int run_synth(const fs::path& config_file, const fs::path& out_dir, std::optional<std::uint64_t> seed, std::ostream& out,
                     std::ostream& err) {
    std::ifstream in(config_file, std::ios::binary);
    if (!in) {
        err << "error: cannot read " << config_file.string() << "\n";
        return exit_io;
    }
    SynthConfig config;
    try {
        const auto doc = nlohmann::json::parse(in);
        config = resolve_config(doc);
        if (seed) config.seed = *seed;
    } catch (const nlohmann::json::parse_error& e) {
        err << "error: " << config_file.string() << " is not valid JSON: " << e.what() << "\n";
        return exit_invalid;
    } catch (const SynthConfigError& e) {
        err << "invalid config " << config_file.string() << ":\n";
        for (const auto& p : e.problems()) err << "  " << p << "\n";
        return exit_invalid;
    }

    const auto corpus = generate_corpus(config);
    try {
        StagedOutput staged(out_dir);
        std::ostringstream pubs, journals, cites;
        write_corpus(corpus, pubs, journals, cites);
        staged.write(publications_file, [&](std::ostream& o) { o << pubs.str(); });
        staged.write(journals_file, [&](std::ostream& o) { o << journals.str(); });
        staged.write(citations_file, [&](std::ostream& o) { o << cites.str(); });
        staged.write("config.json", [&](std::ostream& o) { o << to_json(config).dump(2) << "\n"; });
        staged.commit();
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return exit_io;
    }
    out << "wrote " << corpus.publications().size() << " publications, " << corpus.journals().size() << " journals, "
        << corpus.events().size() << " citation events to " << out_dir.string() << "\n";
    return exit_ok;
}

// ---------------------------------------------------------------------------
// report

inline int run_report(const fs::path& curves_file, const fs::path& svg_out, std::string_view metric_text, std::ostream& out,
                      std::ostream& err) {
    OverlapMetric metric;
    try {
        metric = parse_metric(metric_text);
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return exit_invalid;
    }
    std::ifstream in(curves_file, std::ios::binary);
    if (!in) {
        err << "error: cannot read " << curves_file.string() << "\n";
        return exit_io;
    }
    std::vector<CurveSeries> series;
    try {
        series = read_curves(in, metric);
    } catch (const ReportFormatError& e) {
        err << "error: " << e.what() << "\n";
        return exit_invalid;
    }
    const auto svg = render_overlap_svg(series, metric);
    const auto dir = svg_out.has_parent_path() ? svg_out.parent_path() : fs::path(".");
    try {
        StagedOutput staged(dir);
        staged.write(svg_out.filename().string(), [&](std::ostream& o) { o << svg; });
        staged.commit();
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return exit_io;
    }
    out << "wrote " << series.size() << " series to " << svg_out.string() << "\n";
    return exit_ok;
}

}  // namespace hcstab::cli
