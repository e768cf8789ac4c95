#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace ctraj {

// Entities are addressed by their index into the owning TrajectorySet.
// Input names are kept on the Trajectory for I/O only.
using EntityId = int;

// Time dedup tolerance for events and breakpoints (absolute, seconds).
inline constexpr double kTimeTol = 1e-12;

// Slack added to epsilon when checking proximity chains. Event times are
// found by root solving, so distances at those times are epsilon only up
// to rounding.
inline constexpr double kGapSlack = 1e-9;

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double length() const { return hi - lo; }
    double mid() const { return 0.5 * (lo + hi); }
    bool contains(double t, double tol = 0.0) const {
        return t >= lo - tol && t <= hi + tol;
    }
};

// Coefficients of a*t^2 + b*t + c.
struct QuadraticPoly {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;

    double eval(double t) const { return (a * t + b) * t + c; }
    double slope(double t) const { return 2.0 * a * t + b; }
};

struct QuadraticRoots {
    int count = 0;   // distinct real roots stored
    double r0 = 0.0;
    double r1 = 0.0; // r0 <= r1 when count == 2
    bool double_root = false;
};

// Roots of a*t^2 + b*t + c = 0. The larger-magnitude root comes straight
// from the quadratic formula; the other is derived via c/(a*r) so that
// nearly-cancelling subtractions are avoided.
QuadraticRoots solve_quadratic(double a, double b, double c);

class TimeGrid {
public:
    explicit TimeGrid(std::vector<double> times);

    const std::vector<double>& times() const { return times_; }
    std::size_t size() const { return times_.size(); }
    std::size_t segments() const { return times_.size() - 1; } // tau
    double start() const { return times_.front(); }
    double end() const { return times_.back(); }
    Interval span() const { return {times_.front(), times_.back()}; }
    Interval segment(std::size_t k) const { return {times_[k], times_[k + 1]}; }

    // Index of the grid segment containing t; the last segment owns t == end().
    // Throws std::out_of_range for t outside the span.
    std::size_t segment_index(double t) const;

private:
    std::vector<double> times_;
};

struct Trajectory {
    std::string name;
    int dim = 1;
    // Vertex-major storage: coords[k * dim + j] is coordinate j at grid time k.
    std::vector<double> coords;

    std::size_t vertex_count() const { return coords.size() / static_cast<std::size_t>(dim); }
    std::span<const double> vertex(std::size_t k) const {
        return {coords.data() + k * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
    }
};

class TrajectorySet {
public:
    TrajectorySet(TimeGrid grid, std::vector<Trajectory> trajectories);

    const TimeGrid& grid() const { return grid_; }
    int dim() const { return dim_; }
    int size() const { return static_cast<int>(trajectories_.size()); }
    const Trajectory& trajectory(EntityId e) const { return trajectories_[static_cast<std::size_t>(e)]; }
    const std::vector<Trajectory>& trajectories() const { return trajectories_; }

    // Linear interpolation of entity e at time t (t within the grid span).
    std::vector<double> position(EntityId e, double t) const;
    void position_into(EntityId e, double t, std::span<double> out) const;

    double sq_distance(EntityId a, EntityId b, double t) const;
    double distance(EntityId a, EntityId b, double t) const;

    // Motion of coordinate `coord` of entity e on grid segment k, expressed
    // as slope * t + intercept in absolute time.
    void segment_motion(EntityId e, std::size_t k, int coord, double& slope, double& intercept) const;

private:
    TimeGrid grid_;
    int dim_;
    std::vector<Trajectory> trajectories_;
};

enum class EventKind { reach, leave };

struct ProximityEvent {
    double t = 0.0;
    EntityId a = -1; // a < b
    EntityId b = -1;
    EventKind kind = EventKind::reach;
};

// ||a(t) - b(t)||^2 on grid segment k as a quadratic in absolute time.
QuadraticPoly pairwise_sq_dist(const TrajectorySet& set, EntityId a, EntityId b, std::size_t k);

// All times at which some pairwise distance crosses eps, tagged with the
// crossing direction and sorted by (t, a, b, reach-before-leave).
//
// Tangential contacts (double roots of the squared distance) are dropped for
// eps > 0: they do not change connectivity. For eps == 0 a trajectory
// crossing is exactly such a double root, so there a touch is reported as a
// reach/leave pair at the same instant.
std::vector<ProximityEvent> epsilon_events(const TrajectorySet& set, double eps);

// Connected components of the "distance <= eps + slack" graph at time t,
// as sorted member lists sorted by smallest member.
std::vector<std::vector<EntityId>> proximity_components(const TrajectorySet& set, double eps, double t);

} // namespace ctraj
