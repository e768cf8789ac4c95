#pragma once

#include "ctraj/central.hpp"

#include <tuple>

namespace ctraj {

// The unconstrained optimum for entities on a line: the pointwise average of
// the highest and lowest entity. It is a single segment on each elementary
// interval.
struct IdealTrajectory {
    PiecewiseFunction ideal; // linear pieces, one per elementary interval
    PiecewiseFunction upper; // U, the topmost entity over time
    PiecewiseFunction lower; // L, the bottom one
    std::vector<Interval> elementary;

    double eval(double t) const { return ideal.eval(t); }
};

IdealTrajectory ideal_trajectory(const TrajectorySet& set);

// Per-entity cost |sigma(t) - I(t)| as abs-linear pieces over the elementary
// intervals (indexed by entity).
std::vector<PiecewiseFunction> reduced_cost_functions(const TrajectorySet& set, const IdealTrajectory& ideal);

struct EquidistantBreakpoint {
    double t = 0.0;
    EntityId a = -1;
    EntityId b = -1;
};

// Times where two co-component entities sit at equal distance from the ideal
// on opposite sides of it, restricted to points that lie on the component's
// cost envelope. These are the switch points of the output that are not
// trajectory crossings.
std::vector<EquidistantBreakpoint> type2_breakpoints(const TrajectorySet& set, const IdealTrajectory& ideal,
                                                     const ReebGraph& weighted);

struct Central1dResult {
    CentralTrajectory trajectory;
    IdealTrajectory ideal;
    std::vector<EquidistantBreakpoint> type2;
    ReebGraph graph; // the weighted, subdivided graph the path was taken from
    SolveStats stats;
};

// Full 1D pipeline: ideal trajectory, reduced costs, eps-connectivity Reeb
// graph subdivided at elementary boundaries, envelope weights, min-weight
// path. `trajectory.cost` is the distance-to-farthest integral and
// `trajectory.cost_reduced` the distance-to-ideal integral.
Central1dResult central_1d(const TrajectorySet& set, double eps);

// One line of entity motion relative to the ideal on an elementary interval.
struct FrameLine {
    EntityId entity = -1;
    double slope = 0.0;
    double intercept = 0.0;

    double eval(double t) const { return slope * t + intercept; }
};

struct ClippedSegment {
    EntityId entity = -1;
    Interval span;
    double slope = 0.0;
    double intercept = 0.0;

    double eval(double t) const { return slope * t + intercept; }
};

// Splits each line at its ideal crossing and discards, from every pair of
// same-side half-lines whose unsigned value grows in the same direction, the
// part of the steeper one beyond their intersection. The optimum never uses
// the removed parts.
std::vector<ClippedSegment> clip_halflines(std::span<const FrameLine> lines, Interval window);

// Continuous variant (eps = 0): the result switches entities only where
// trajectories cross, found as a min-weight path through the part of the
// clipped line arrangement around the ideal trajectory.
Central1dResult central_1d_continuous(const TrajectorySet& set);

// Exact integral of max(U - c, c - L) along an assembled trajectoid.
double integrate_farthest_along(const TrajectorySet& set, const IdealTrajectory& ideal,
                                const CentralTrajectory& ct);

} // namespace ctraj
