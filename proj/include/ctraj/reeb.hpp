#pragma once

#include "ctraj/envelope.hpp"
#include "ctraj/geometry.hpp"

#include <vector>

namespace ctraj {

enum class VertexKind { start, end, merge, split, subdivision };

enum class Aggregation { integral, maximum, integral_of_squares };

struct ReebVertex {
    double t = 0.0;
    VertexKind kind = VertexKind::start;
    EntityId pair_a = -1; // the pair at distance eps, when applicable
    EntityId pair_b = -1;
};

struct ReebEdge {
    int from = -1;
    int to = -1;
    std::vector<EntityId> members; // sorted
    Interval span;
    double weight = 0.0;
    bool weighted = false;
    PiecewiseFunction envelope; // member cost envelope, set by weigh()
};

// DAG of maximal eps-connected components over maximal time intervals.
// A single source vertex at t_0 feeds every initial component edge and a
// single sink at t_tau collects the final ones, so every component chain is
// a source-to-sink path.
struct ReebGraph {
    std::vector<ReebVertex> vertices;
    std::vector<ReebEdge> edges;
    int source = -1;
    int sink = -1;

    std::vector<std::vector<int>> outgoing() const;
    std::vector<std::vector<int>> incoming() const;
};

struct TrajectoidPath {
    std::vector<int> edges; // source-to-sink edge ids
    double cost = 0.0;
};

ReebGraph build_reeb(const TrajectorySet& set, double eps);

// Splits edges at the given per-entity times so that no edge span contains
// an interior cut time of any of its members.
ReebGraph subdivide(const ReebGraph& graph, const std::vector<std::vector<double>>& cuts_per_entity);

// Attaches to every edge the lower envelope of its members' cost functions
// and the corresponding weight (integral, max, or integral of squares over
// the edge span).
ReebGraph weigh(const ReebGraph& graph, std::span<const PiecewiseFunction> cost_functions,
                Aggregation agg = Aggregation::integral);

// Minimum-weight source-to-sink path. For Aggregation::maximum edge weights
// combine by max instead of sum. Ties prefer fewer merge/split vertices and
// then the lexicographically smallest edge sequence.
TrajectoidPath min_weight_path(const ReebGraph& graph, Aggregation agg = Aggregation::integral);

// Plain-text dump (one vertex or edge per line) for debugging.
std::string describe(const ReebGraph& graph);

} // namespace ctraj
