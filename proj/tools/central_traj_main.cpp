#include "ctraj/io.hpp"

#include <CLI11.hpp>

#include <string>

int main(int argc, char** argv) {
    CLI::App app{"central-traj: central representative trajectory of time-synchronized trajectories"};

    ctraj::RunConfig cfg;
    std::string format, measure = "farthest", agg = "integral", mode = "auto", oracle;

    app.add_option("--input", cfg.input_path, "trajectory file (CSV or JSON)");
    app.add_option("--format", format, "input format: csv|json (default: by extension)")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--epsilon", cfg.epsilon, "maximum jump distance")->check(CLI::NonNegativeNumber);
    app.add_option("--measure", measure, "centrality measure: farthest|sum_of_squares")
        ->check(CLI::IsMember({"farthest", "sum_of_squares"}));
    app.add_option("--agg", agg, "time aggregation: integral|maximum|integral_of_squares")
        ->check(CLI::IsMember({"integral", "maximum", "integral_of_squares"}));
    app.add_option("--mode", mode, "pipeline: auto|oned|oned_continuous|general")
        ->check(CLI::IsMember({"auto", "oned", "oned_continuous", "general"}));
    app.add_option("--oracle", oracle, "cross-check against the sampled brute-force optimum (optional sample count)")
        ->expected(0, 1);
    app.add_option("--out", cfg.result_path, "result JSON path (default: stdout)");
    app.add_option("--svg", cfg.svg_path, "render an SVG plot here");
    app.add_option("--stats", cfg.stats_path, "write the stats table as JSON here");
    app.add_option("--gen", cfg.generator, "generate the instance: zigzag:m or random:n,tau,d");
    app.add_option("--seed", cfg.seed, "seed for --gen random");
    app.add_option("--save-input", cfg.saved_input_path, "also write the (generated) instance here");
    app.add_option("--dump-reeb", cfg.reeb_dump_path, "write the weighted Reeb graph as a text file");
    int expect_dim = 0;
    app.add_option("--dim", expect_dim, "assert the input dimension")->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);

    if (!format.empty()) cfg.format = format == "csv" ? ctraj::InputFormat::csv : ctraj::InputFormat::json;
    cfg.measure = measure == "farthest" ? ctraj::CentralityMeasure::farthest : ctraj::CentralityMeasure::sum_of_squares;
    cfg.aggregation = agg == "integral" ? ctraj::Aggregation::integral
                      : agg == "maximum" ? ctraj::Aggregation::maximum
                                         : ctraj::Aggregation::integral_of_squares;
    cfg.mode = mode == "auto" ? ctraj::SolveMode::automatic
               : mode == "oned" ? ctraj::SolveMode::oned
               : mode == "oned_continuous" ? ctraj::SolveMode::oned_continuous
                                           : ctraj::SolveMode::general;
    if (app.count("--dim") > 0) cfg.expect_dim = expect_dim;
    if (app.count("--oracle") > 0) {
        cfg.oracle_check = true;
        if (!oracle.empty()) cfg.oracle_samples = std::stoi(oracle);
    }

    return ctraj::run(cfg);
}
