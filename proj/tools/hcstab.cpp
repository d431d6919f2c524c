// hcstab: highly cited group stability across citation windows.

#include <hcstab/cli.hpp>

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    using namespace hcstab;
    CLI::App app{"Highly cited publication groups and their stability across citation windows"};
    app.require_subcommand(1);

    std::string validate_dir;
    auto* validate = app.add_subcommand("validate", "Check a corpus directory and list its partition cells");
    validate->add_option("corpus_dir", validate_dir, "Directory holding publications.csv, journals.csv, citations.csv")->required();

    std::string corpus_dir, levels_text = "p500,p100,css-remarkably,css-outstandingly", windows_text, cells_text, tie_text = "inclusive",
                                         metric_text, out_dir;
    int threshold_bp = default_threshold_bp;
    auto* analyze = app.add_subcommand("analyze", "Select highly cited groups per window and compare consecutive windows");
    analyze->add_option("--corpus", corpus_dir, "Corpus directory")->required();
    analyze->add_option("--levels", levels_text, "Comma-separated levels: pNNN (basis points), css-remarkably, css-outstandingly")
        ->capture_default_str();
    analyze->add_option("--windows", windows_text, "Window length range A..B")->required();
    analyze->add_option("--cells", cells_text, "Comma-separated cell keys (default: all non-empty cells)");
    analyze->add_option("--tie-mode", tie_text, "Percentile ties: inclusive or exact-size")->capture_default_str();
    analyze->add_option("--metric", metric_text, "Summarize only this metric: jaccard, fwd or bwd (default: all three)");
    analyze->add_option("--threshold-bp", threshold_bp, "Convergence threshold in basis points")->capture_default_str();
    analyze->add_option("--out", out_dir, "Output directory")->required();

    std::string config_file, synth_out;
    std::optional<std::uint64_t> seed;
    auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus from a config or preset reference");
    synth->add_option("--config", config_file, "JSON config, or {\"preset\": NAME, \"divisor\": K}")->required();
    synth->add_option("--out", synth_out, "Output directory")->required();
    synth->add_option("--seed", seed, "Override the config seed");

    std::string curves_file, report_metric, svg_file;
    auto* report = app.add_subcommand("report", "Plot overlap curves as an SVG line chart");
    report->add_option("--curves", curves_file, "overlap_curves.csv from analyze")->required();
    report->add_option("--metric", report_metric, "jaccard, fwd or bwd")->required();
    report->add_option("--svg", svg_file, "Output SVG path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : cli::exit_invalid;
    }

    if (validate->parsed()) return cli::run_validate(validate_dir, std::cout, std::cerr);

    if (analyze->parsed()) {
        cli::AnalysisConfig config;
        try {
            config.corpus_dir = corpus_dir;
            config.out_dir = out_dir;
            config.levels = cli::parse_levels(levels_text);
            std::tie(config.window_first, config.window_last) = cli::parse_window_range(windows_text);
            if (!cells_text.empty()) {
                std::vector<CellKey> cells;
                for (const auto& c : csv::split(cells_text)) cells.emplace_back(c);
                config.cells = cells;
            }
            if (tie_text == "inclusive") config.tie_mode = TieMode::inclusive;
            else if (tie_text == "exact-size" || tie_text == "exact_size") config.tie_mode = TieMode::exact_size;
            else throw std::invalid_argument("unknown tie mode '" + tie_text + "'");
            if (!metric_text.empty()) config.metric = parse_metric(metric_text);
            config.threshold_bp = threshold_bp;
        } catch (const std::invalid_argument& e) {
            std::cerr << "error: " << e.what() << "\n";
            return cli::exit_invalid;
        }
        return cli::run_analyze(config, std::cout, std::cerr);
    }

    if (synth->parsed()) return cli::run_synth(config_file, synth_out, seed, std::cout, std::cerr);

    return cli::run_report(curves_file, svg_file, report_metric, std::cout, std::cerr);
}
