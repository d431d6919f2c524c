#include "support.hpp"

#include <hcstab/cli.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <regex>

using namespace hcstab;
using namespace hcstab::testing;
namespace fs = std::filesystem;

namespace {

std::size_t count_of(const std::string& text, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + needle.size())) ++n;
    return n;
}

std::vector<std::vector<std::string>> rows_of(const fs::path& file) {
    std::ifstream in(file);
    const auto table = csv::read_table(in);
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : table.rows) rows.push_back(r.fields);
    return rows;
}

void write_three_cell_corpus(const fs::path& dir) {
    spit(dir / "journals.csv", "journal_id,categories\nJA,A\nJP,P\nJAP,P;A\n");
    spit(dir / "publications.csv", "id,journal_id,year,doc_type\na1,JA,2004,article\np1,JP,2004,article\nap1,JAP,2004,article\n");
    spit(dir / "citations.csv", "publication_id,citing_year\na1,2004\na1,2006\np1,2005\n");
}

// Ten publications in one cell; offsets chosen so that the top half changes between windows.
const std::vector<std::vector<int>> ten_offsets = {
    {0, 0, 0}, {0, 0, 1}, {0, 2, 2, 2}, {0, 1, 1, 1, 1}, {1},
    {}, {2, 2, 2, 2, 2, 2}, {0}, {1, 1}, {2}};

void write_ten_corpus(const fs::path& dir) {
    std::string pubs = "id,journal_id,year\n", cites = "publication_id,citing_year\n";
    for (std::size_t i = 0; i < ten_offsets.size(); ++i) {
        const std::string id = "q" + std::to_string(i);
        pubs += id + ",J,2004\n";
        for (int d : ten_offsets[i]) cites += id + "," + std::to_string(2004 + d) + "\n";
    }
    spit(dir / "journals.csv", "journal_id,categories\nJ,X\n");
    spit(dir / "publications.csv", pubs);
    spit(dir / "citations.csv", cites);
}

}  // namespace

TEST_CASE("validate") {
    std::ostringstream out, err;
    SECTION("valid three-cell corpus") {
        const auto dir = temp_dir("validate-ok");
        write_three_cell_corpus(dir);
        CHECK(cli::run_validate(dir, out, err) == cli::exit_ok);
        CHECK(out.str().find("cells: 3") != std::string::npos);
        CHECK(out.str().find("A|P: 1 publications") != std::string::npos);
        CHECK(out.str().find("horizon year: 2006") != std::string::npos);
        fs::remove_all(dir);
    }
    SECTION("citation predating publication") {
        const auto dir = temp_dir("validate-bad");
        write_three_cell_corpus(dir);
        spit(dir / "citations.csv", "publication_id,citing_year\na1,2004\np1,2003\nap1,2002\n");
        CHECK(cli::run_validate(dir, out, err) == cli::exit_invalid);
        CHECK(err.str().find("citations.csv:3") != std::string::npos);
        CHECK(err.str().find("citations.csv:4") != std::string::npos);
        fs::remove_all(dir);
    }
    SECTION("missing citations file") {
        const auto dir = temp_dir("validate-missing");
        write_three_cell_corpus(dir);
        fs::remove(dir / "citations.csv");
        CHECK(cli::run_validate(dir, out, err) == cli::exit_io);
        CHECK(cli::run_validate(dir / "nope", out, err) == cli::exit_io);
        fs::remove_all(dir);
    }
}

TEST_CASE("analyze on a handcrafted corpus matches per-window set algebra") {
    const auto dir = temp_dir("analyze-ten");
    write_ten_corpus(dir / "corpus");
    cli::AnalysisConfig config;
    config.corpus_dir = dir / "corpus";
    config.out_dir = dir / "out";
    config.levels = {SelectionLevel::parse("p5000")};
    config.window_first = 1;
    config.window_last = 3;
    std::ostringstream out, err;
    REQUIRE(cli::run_analyze(config, out, err) == cli::exit_ok);

    // Oracle: counts per window from the raw offsets, threshold scan, then std::set algebra.
    std::vector<std::set<std::string>> groups;
    for (int len = 1; len <= 3; ++len) {
        std::vector<std::pair<std::string, std::int64_t>> counts;
        for (std::size_t i = 0; i < ten_offsets.size(); ++i)
            counts.emplace_back("q" + std::to_string(i), std::count_if(ten_offsets[i].begin(), ten_offsets[i].end(), [&](int d) { return d < len; }));
        groups.push_back(percentile_oracle(counts, 5000).inclusive);
    }
    const auto rows = rows_of(dir / "out" / "overlap_curves.csv");
    REQUIRE(rows.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
        const auto& a = groups[i];
        const auto& b = groups[i + 1];
        std::set<std::string> common, all;
        std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(common, common.end()));
        std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::inserter(all, all.end()));
        const auto& r = rows[i];
        CHECK(r[0] == "X");
        CHECK(r[1] == "percentile");
        CHECK(r[2] == "p5000");
        CHECK(r[3] == std::to_string(i + 1));
        CHECK(r[4] == std::to_string(i + 2));
        CHECK(r[5] == std::to_string(a.size()));
        CHECK(r[6] == std::to_string(b.size()));
        CHECK(r[7] == std::to_string(common.size()));
        const auto ci = static_cast<std::int64_t>(common.size());
        CHECK(Rational::parse(r[11]) == Rational(ci, static_cast<std::int64_t>(all.size())));
        CHECK(Rational::parse(r[12]) == Rational(ci, static_cast<std::int64_t>(a.size())));
        CHECK(Rational::parse(r[13]) == Rational(ci, static_cast<std::int64_t>(b.size())));
        CHECK(r[8] == Rational::parse(r[11]).decimal_str());
    }
    // The fixture is chosen so the groups actually move.
    CHECK(groups[0] != groups[1]);

    const auto group_rows = rows_of(dir / "out" / "groups.csv");
    std::size_t expected_rows = 0;
    for (const auto& g : groups) expected_rows += g.size();
    CHECK(group_rows.size() == expected_rows);

    const auto convergence = rows_of(dir / "out" / "convergence.csv");
    CHECK(convergence.size() == 3);
    CHECK(convergence[0][4] == "8000");

    const auto peaks = rows_of(dir / "out" / "peak_years.csv");
    CHECK(peaks.size() == 6);
    fs::remove_all(dir);
}

TEST_CASE("analyze refuses windows past the horizon without writing anything") {
    const auto dir = temp_dir("analyze-horizon");
    write_ten_corpus(dir / "corpus");
    cli::AnalysisConfig config;
    config.corpus_dir = dir / "corpus";
    config.out_dir = dir / "out";
    config.window_first = 1;
    config.window_last = 4;
    std::ostringstream out, err;
    CHECK(cli::run_analyze(config, out, err) == cli::exit_invalid);
    CHECK(err.str().find("horizon 2006") != std::string::npos);
    CHECK_FALSE(fs::exists(dir / "out" / "groups.csv"));

    config.window_last = 3;
    config.cells = std::vector<CellKey>{CellKey("Y")};
    CHECK(cli::run_analyze(config, out, err) == cli::exit_invalid);
    CHECK_FALSE(fs::exists(dir / "out" / "groups.csv"));
    fs::remove_all(dir);
}

TEST_CASE("synth then analyze a preset") {
    const auto dir = temp_dir("synth-preset");
    spit(dir / "preset.json", R"({"preset": "fast_physics_like", "divisor": 100})");
    std::ostringstream out, err;
    REQUIRE(cli::run_synth(dir / "preset.json", dir / "corpus", 42, out, err) == cli::exit_ok);
    const auto corpus = load_corpus_dir(dir / "corpus");
    CHECK(corpus.cells().size() == 3);
    CHECK(corpus.horizon_year() == 2011);
    const auto resolved = synth_config_from_json(nlohmann::json::parse(slurp(dir / "corpus" / "config.json")));
    CHECK(resolved.seed == 42);

    REQUIRE(cli::run_synth(dir / "preset.json", dir / "corpus2", 42, out, err) == cli::exit_ok);
    for (const char* f : {"publications.csv", "journals.csv", "citations.csv", "config.json"})
        CHECK(slurp(dir / "corpus" / f) == slurp(dir / "corpus2" / f));

    cli::AnalysisConfig config;
    config.corpus_dir = dir / "corpus";
    config.out_dir = dir / "out";
    config.window_first = 1;
    config.window_last = 8;
    REQUIRE(cli::run_analyze(config, out, err) == cli::exit_ok);
    // One row per (cell, level, metric).
    CHECK(rows_of(dir / "out" / "convergence.csv").size() == 3 * 4 * 3);
    config.metric = OverlapMetric::overlap_fwd;
    REQUIRE(cli::run_analyze(config, out, err) == cli::exit_ok);
    CHECK(rows_of(dir / "out" / "convergence.csv").size() == 3 * 4);
    CHECK_FALSE(fs::exists(dir / "out" / ".hcstab-staging"));
    fs::remove_all(dir);
}

TEST_CASE("synth rejects invalid configs") {
    const auto dir = temp_dir("synth-bad");
    auto j = to_json(preset(PresetName::fast_physics_like, 100));
    j["citations_per_year"][0] = -1;
    spit(dir / "bad.json", j.dump());
    std::ostringstream out, err;
    CHECK(cli::run_synth(dir / "bad.json", dir / "corpus", std::nullopt, out, err) == cli::exit_invalid);
    CHECK(err.str().find("citations_per_year[0]") != std::string::npos);
    CHECK_FALSE(fs::exists(dir / "corpus" / "citations.csv"));
    spit(dir / "broken.json", "{ not json");
    CHECK(cli::run_synth(dir / "broken.json", dir / "corpus", std::nullopt, out, err) == cli::exit_invalid);
    CHECK(cli::run_synth(dir / "missing.json", dir / "corpus", std::nullopt, out, err) == cli::exit_io);
    fs::remove_all(dir);
}

TEST_CASE("report") {
    const auto dir = temp_dir("report");
    std::ostringstream out, err;
    const std::string header = std::string(overlap_curves_header) + "\n";
    SECTION("single point") {
        spit(dir / "curves.csv", header + "X,percentile,p500,1,2,3,3,2,0.500000,0.666667,0.666667,1/2,2/3,2/3\n");
        REQUIRE(cli::run_report(dir / "curves.csv", dir / "chart.svg", "fwd", out, err) == cli::exit_ok);
        const auto svg = slurp(dir / "chart.svg");
        CHECK(count_of(svg, "<polyline") == 1);
        CHECK(count_of(svg, "<circle") == 1);
        CHECK(svg.find("overlap_fwd") != std::string::npos);
    }
    SECTION("legend per cell and level") {
        std::string text = header;
        for (const char* cell : {"A", "A|P"})
            for (const char* level : {"p500", "p100"})
                for (int w = 1; w <= 3; ++w)
                    text += std::string(cell) + ",percentile," + level + "," + std::to_string(w) + "," + std::to_string(w + 1) +
                            ",1,1,1,1.000000,1.000000,1.000000,1/1,1/1,1/1\n";
        spit(dir / "curves.csv", text);
        REQUIRE(cli::run_report(dir / "curves.csv", dir / "chart.svg", "jaccard", out, err) == cli::exit_ok);
        const auto svg = slurp(dir / "chart.svg");
        CHECK(count_of(svg, "class=\"legend-entry\"") == 4);
        CHECK(count_of(svg, "<polyline") == 4);
        CHECK(count_of(svg, "<circle") == 12);
    }
    SECTION("plotted values follow the chosen metric") {
        // G = {a,b,c} then {b,c,d}.
        const std::vector<PublicationId> a = {"a", "b", "c"}, b = {"b", "c", "d"};
        OverlapCurve curve{CellKey("X"), SelectionLevel::percentile(500), {overlap_of(a, b, WindowLength(1), WindowLength(2))}};
        SweepResult r;
        r.curve = curve;
        std::ostringstream csv_text;
        write_overlap_csv(csv_text, {r});
        spit(dir / "curves.csv", csv_text.str());
        REQUIRE(cli::run_report(dir / "curves.csv", dir / "j.svg", "jaccard", out, err) == cli::exit_ok);
        REQUIRE(cli::run_report(dir / "curves.csv", dir / "f.svg", "overlap_fwd", out, err) == cli::exit_ok);
        CHECK(slurp(dir / "j.svg").find("data-value=\"0.500\"") != std::string::npos);
        CHECK(slurp(dir / "f.svg").find("data-value=\"0.667\"") != std::string::npos);
    }
    SECTION("errors") {
        spit(dir / "curves.csv", header);
        CHECK(cli::run_report(dir / "curves.csv", dir / "chart.svg", "dice", out, err) == cli::exit_invalid);
        CHECK_FALSE(fs::exists(dir / "chart.svg"));
        CHECK(cli::run_report(dir / "nope.csv", dir / "chart.svg", "fwd", out, err) == cli::exit_io);
        spit(dir / "bad.csv", "a,b\n1,2\n");
        CHECK(cli::run_report(dir / "bad.csv", dir / "chart.svg", "fwd", out, err) == cli::exit_invalid);
    }
    fs::remove_all(dir);
}

TEST_CASE("argument parsing helpers") {
    CHECK(cli::parse_window_range("1..8") == std::pair{1, 8});
    CHECK_THROWS_AS(cli::parse_window_range("1-8"), std::invalid_argument);
    CHECK_THROWS_AS(cli::parse_window_range("a..8"), std::invalid_argument);
    const auto levels = cli::parse_levels("p500,p100,css-remarkably,css-outstandingly");
    CHECK(levels == default_levels());
    CHECK_THROWS(cli::parse_levels("p500,top"));
}
