#pragma once

#include "ctraj/central_1d.hpp"
#include "ctraj/central_rd.hpp"
#include "ctraj/oracle.hpp"

#include <optional>
#include <string>

namespace ctraj {

enum class InputFormat { csv, json };

// CSV schema: header `entity_id,t,x1[,x2,...]`; every entity must cover the
// full set of distinct times. JSON schema:
//   {"times": [...], "entities": [{"id": ..., "points": [[...], ...]}]}
TrajectorySet load_trajectories(const std::string& path, InputFormat format);
TrajectorySet parse_trajectories_csv(const std::string& text, const std::string& origin = "<csv>");
TrajectorySet parse_trajectories_json(const std::string& text, const std::string& origin = "<json>");

std::string trajectories_to_json(const TrajectorySet& set);
std::string trajectories_to_csv(const TrajectorySet& set);
void save_trajectories(const TrajectorySet& set, const std::string& path, InputFormat format);

enum class SolveMode { automatic, oned, oned_continuous, general };

struct RunConfig {
    std::string input_path;
    std::optional<InputFormat> format; // sniffed from the extension when absent
    double epsilon = 0.0;
    CentralityMeasure measure = CentralityMeasure::farthest;
    Aggregation aggregation = Aggregation::integral;
    SolveMode mode = SolveMode::automatic;
    bool oracle_check = false;
    int oracle_samples = 4000;
    std::string result_path;      // empty: stdout
    std::string svg_path;         // empty: skip
    std::string stats_path;       // empty: skip
    std::string generator;        // "zigzag:m" or "random:n,tau,d"; overrides input_path
    std::string saved_input_path; // when set, dump the (possibly generated) instance here
    std::string reeb_dump_path;   // when set, write the weighted Reeb graph as text here
    std::optional<int> expect_dim; // reject input whose dimension differs
    std::uint64_t seed = 1;
};

struct RunOutcome {
    CentralTrajectory trajectory;
    SolveStats stats;
    std::vector<std::string> entity_names;
    std::optional<double> oracle_cost;
    std::string result_json;
    std::string stats_json;
};

// Result document written by run():
//   {"cost":..., "cost_dprime":?, "pieces":[{"t0","t1","entity"}...],
//    "jumps":[{"t","from","to","gap","chain"}...], "stats":{...}}
std::string result_to_json(const TrajectorySet& set, const CentralTrajectory& ct, const SolveStats& stats,
                           std::optional<double> oracle_cost);

std::string stats_to_json(const SolveStats& stats, std::optional<double> oracle_cost,
                          std::optional<double> solver_cost);
std::string stats_to_text(const SolveStats& stats, std::optional<double> oracle_cost,
                          std::optional<double> solver_cost);

// Time-position plot for 1D input, xy plot otherwise; the central trajectory
// is highlighted and jumps are dashed.
std::string render_svg(const TrajectorySet& set, const CentralTrajectory& ct);

// Loads (or generates) the instance, dispatches on mode, writes the
// requested artifacts. Returns 0 on success; errors are reported as a JSON
// object on stderr and a nonzero code.
int run(const RunConfig& config);

} // namespace ctraj
