#pragma once

#include "ctraj/central.hpp"

namespace ctraj {

enum class CentralityMeasure {
    farthest,       // distance to the farthest entity
    sum_of_squares, // sum of squared distances to all entities
};

// Distance to the farthest entity over time: per grid interval the upper
// envelope of sqrt-of-quadratic pairwise distances. Piece owners name the
// farthest entity.
PiecewiseFunction farthest_profile(const TrajectorySet& set, EntityId sigma);

// Sum of squared distances over time, one quadratic piece per grid interval.
PiecewiseFunction sum_sq_profile(const TrajectorySet& set, EntityId sigma);

struct CentralRdResult {
    CentralTrajectory trajectory;
    ReebGraph graph; // the weighted, subdivided graph the path was taken from
    SolveStats stats;
};

// General-dimension pipeline: per-entity centrality profiles, Reeb graph
// subdivided at profile breakpoints and grid times, envelope edge weights
// under the chosen aggregation, min-weight path. Costs are reported in the
// measure's native units (squared distance for sum_of_squares).
CentralRdResult central_rd(const TrajectorySet& set, double eps, CentralityMeasure measure,
                           Aggregation agg = Aggregation::integral);

struct ProfileIntersectionAudit {
    long isolated = 0;        // pairwise profile intersections at isolated times
    long degenerate_pairs = 0; // piece pairs identical over an interval
};

// Counts pairwise intersections among all farthest-distance profiles.
ProfileIntersectionAudit profile_intersections_audit(const TrajectorySet& set);

} // namespace ctraj
