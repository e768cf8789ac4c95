#pragma once

#include "ctraj/reeb.hpp"

#include <optional>
#include <vector>

namespace ctraj {

struct TrajectoryPiece {
    Interval span;
    EntityId entity = -1;
};

struct Jump {
    double t = 0.0;
    EntityId from = -1;
    EntityId to = -1;
    double gap = 0.0;                // distance between the entities at t
    std::vector<EntityId> chain;     // from -> ... -> to, hops <= eps + slack
};

// The output trajectoid: a time-tiled assignment of entities, the switch
// points between them, and the optimized cost.
struct CentralTrajectory {
    std::vector<TrajectoryPiece> pieces; // tile [t_0, t_tau]
    std::vector<Jump> jumps;             // one per entity switch, zero-gap ones included
    double cost = 0.0;                   // time-aggregated centrality of the result
    std::optional<double> cost_reduced;  // distance-to-ideal cost (1D pipelines)
    int vertex_count = 0;

    double position_1d(const TrajectorySet& set, double t) const;
    EntityId entity_at(double t) const;
    // Switches with gap above the slack threshold.
    int real_jump_count() const;
};

struct SolveStats {
    int reeb_vertices = 0;
    int reeb_edges = 0;
    long envelope_pieces = 0; // total pieces over the per-entity cost profiles
    int vertex_count = 0;
    std::optional<int> elementary_intervals;
    std::optional<long> type2_breakpoints;
    std::optional<long> max_type2_per_elementary;
    std::optional<int> max_vertices_per_elementary;
};

// Shortest hop chain between two entities in the "distance <= eps + slack"
// graph at time t; empty if they are not connected there.
std::vector<EntityId> witness_chain(const TrajectorySet& set, double eps, double t, EntityId from, EntityId to);

// Turns a min-weight path through a weighted Reeb graph into the piece list
// and jump records of the trajectoid it encodes.
CentralTrajectory assemble_trajectoid(const TrajectorySet& set, double eps, const ReebGraph& graph,
                                      const TrajectoidPath& path);

} // namespace ctraj
