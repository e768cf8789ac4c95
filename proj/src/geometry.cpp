#include "ctraj/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ctraj {

QuadraticRoots solve_quadratic(double a, double b, double c) {
    QuadraticRoots out;
    const double scale = std::max({std::abs(a), std::abs(b), std::abs(c)});
    if (scale == 0.0) return out;
    if (std::abs(a) <= 1e-14 * scale) {
        // Linear b*t + c = 0.
        if (std::abs(b) <= 1e-14 * scale) return out;
        out.count = 1;
        out.r0 = out.r1 = -c / b;
        return out;
    }
    const double disc = b * b - 4.0 * a * c;
    const double disc_scale = std::max(b * b, std::abs(4.0 * a * c));
    if (std::abs(disc) <= 1e-9 * disc_scale) {
        out.count = 1;
        out.r0 = out.r1 = -b / (2.0 * a);
        out.double_root = true;
        return out;
    }
    if (disc < 0.0) return out;
    const double sq = std::sqrt(disc);
    const double q = -0.5 * (b + (b >= 0.0 ? sq : -sq));
    double r0, r1;
    if (q == 0.0) {
        // b == 0 and c/a < 0.
        r1 = std::sqrt(-c / a);
        r0 = -r1;
    } else {
        r0 = q / a;
        r1 = c / q;
    }
    if (r0 > r1) std::swap(r0, r1);
    out.count = 2;
    out.r0 = r0;
    out.r1 = r1;
    return out;
}

TimeGrid::TimeGrid(std::vector<double> times) : times_(std::move(times)) {
    if (times_.size() < 2) throw std::invalid_argument("TimeGrid needs at least two timestamps");
    for (std::size_t i = 1; i < times_.size(); ++i) {
        if (!(times_[i] > times_[i - 1]))
            throw std::invalid_argument("TimeGrid timestamps must be strictly increasing");
    }
}

std::size_t TimeGrid::segment_index(double t) const {
    if (t < times_.front() || t > times_.back())
        throw std::out_of_range("time outside the trajectory span");
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    std::size_t k = static_cast<std::size_t>(it - times_.begin());
    if (k == 0) return 0;
    if (k >= times_.size()) return times_.size() - 2;
    return k - 1;
}

TrajectorySet::TrajectorySet(TimeGrid grid, std::vector<Trajectory> trajectories)
    : grid_(std::move(grid)), dim_(0), trajectories_(std::move(trajectories)) {
    if (trajectories_.empty()) throw std::invalid_argument("TrajectorySet needs at least one entity");
    dim_ = trajectories_.front().dim;
    if (dim_ < 1) throw std::invalid_argument("trajectory dimension must be positive");
    for (const auto& tr : trajectories_) {
        if (tr.dim != dim_) throw std::invalid_argument("all trajectories must share one dimension");
        if (tr.vertex_count() != grid_.size())
            throw std::invalid_argument("trajectory '" + tr.name + "' does not cover the time grid");
    }
    for (std::size_t i = 0; i < trajectories_.size(); ++i) {
        for (std::size_t j = i + 1; j < trajectories_.size(); ++j) {
            if (trajectories_[i].name == trajectories_[j].name)
                throw std::invalid_argument("duplicate entity id '" + trajectories_[i].name + "'");
        }
    }
}

void TrajectorySet::position_into(EntityId e, double t, std::span<double> out) const {
    const std::size_t k = grid_.segment_index(t);
    const Interval seg = grid_.segment(k);
    const double w = (t - seg.lo) / (seg.hi - seg.lo);
    const auto p = trajectory(e).vertex(k);
    const auto q = trajectory(e).vertex(k + 1);
    for (int j = 0; j < dim_; ++j) out[static_cast<std::size_t>(j)] = p[j] + w * (q[j] - p[j]);
}

std::vector<double> TrajectorySet::position(EntityId e, double t) const {
    std::vector<double> out(static_cast<std::size_t>(dim_));
    position_into(e, t, out);
    return out;
}

double TrajectorySet::sq_distance(EntityId a, EntityId b, double t) const {
    const std::size_t k = grid_.segment_index(t);
    const Interval seg = grid_.segment(k);
    const double w = (t - seg.lo) / (seg.hi - seg.lo);
    const auto pa = trajectory(a).vertex(k);
    const auto qa = trajectory(a).vertex(k + 1);
    const auto pb = trajectory(b).vertex(k);
    const auto qb = trajectory(b).vertex(k + 1);
    double acc = 0.0;
    for (int j = 0; j < dim_; ++j) {
        const double xa = pa[j] + w * (qa[j] - pa[j]);
        const double xb = pb[j] + w * (qb[j] - pb[j]);
        acc += (xa - xb) * (xa - xb);
    }
    return acc;
}

double TrajectorySet::distance(EntityId a, EntityId b, double t) const {
    return std::sqrt(sq_distance(a, b, t));
}

void TrajectorySet::segment_motion(EntityId e, std::size_t k, int coord, double& slope, double& intercept) const {
    const Interval seg = grid_.segment(k);
    const double p = trajectory(e).vertex(k)[coord];
    const double q = trajectory(e).vertex(k + 1)[coord];
    slope = (q - p) / (seg.hi - seg.lo);
    intercept = p - slope * seg.lo;
}

QuadraticPoly pairwise_sq_dist(const TrajectorySet& set, EntityId a, EntityId b, std::size_t k) {
    if (k >= set.grid().segments()) throw std::out_of_range("grid segment index out of range");
    QuadraticPoly q;
    for (int j = 0; j < set.dim(); ++j) {
        double sa, ia, sb, ib;
        set.segment_motion(a, k, j, sa, ia);
        set.segment_motion(b, k, j, sb, ib);
        const double ds = sa - sb;
        const double di = ia - ib;
        q.a += ds * ds;
        q.b += 2.0 * ds * di;
        q.c += di * di;
    }
    return q;
}

namespace {

void emit_event(std::vector<ProximityEvent>& events, double t, EntityId a, EntityId b, EventKind kind) {
    events.push_back({t, a, b, kind});
}

} // namespace

std::vector<ProximityEvent> epsilon_events(const TrajectorySet& set, double eps) {
    if (eps < 0.0) throw std::invalid_argument("epsilon must be nonnegative");
    std::vector<ProximityEvent> events;
    const int n = set.size();
    const double eps2 = eps * eps;
    for (EntityId a = 0; a < n; ++a) {
        for (EntityId b = a + 1; b < n; ++b) {
            for (std::size_t k = 0; k < set.grid().segments(); ++k) {
                const Interval seg = set.grid().segment(k);
                QuadraticPoly q = pairwise_sq_dist(set, a, b, k);
                q.c -= eps2;
                const QuadraticRoots roots = solve_quadratic(q.a, q.b, q.c);
                if (roots.count == 0) continue;
                if (roots.double_root) {
                    // Tangency. Only meaningful for eps == 0, where it is a
                    // trajectory crossing: connectivity holds at that instant.
                    if (eps == 0.0 && seg.contains(roots.r0, kTimeTol)) {
                        const double t = std::clamp(roots.r0, seg.lo, seg.hi);
                        emit_event(events, t, a, b, EventKind::reach);
                        emit_event(events, t, a, b, EventKind::leave);
                    }
                    continue;
                }
                const double rs[2] = {roots.r0, roots.r1};
                const int cnt = roots.count;
                for (int i = 0; i < cnt; ++i) {
                    const double r = rs[i];
                    if (!seg.contains(r, kTimeTol)) continue;
                    const double t = std::clamp(r, seg.lo, seg.hi);
                    const double d = q.slope(r);
                    if (d == 0.0) continue; // grazing, treated as tangency
                    emit_event(events, t, a, b, d < 0.0 ? EventKind::reach : EventKind::leave);
                }
            }
        }
    }
    std::sort(events.begin(), events.end(), [](const ProximityEvent& x, const ProximityEvent& y) {
        if (x.t != y.t) return x.t < y.t;
        if (x.a != y.a) return x.a < y.a;
        if (x.b != y.b) return x.b < y.b;
        return x.kind == EventKind::reach && y.kind == EventKind::leave;
    });
    // Duplicate roots from adjacent grid segments collapse here.
    std::vector<ProximityEvent> dedup;
    for (const auto& ev : events) {
        if (!dedup.empty()) {
            const auto& last = dedup.back();
            if (last.a == ev.a && last.b == ev.b && last.kind == ev.kind && std::abs(last.t - ev.t) <= kTimeTol)
                continue;
        }
        dedup.push_back(ev);
    }
    return dedup;
}

std::vector<std::vector<EntityId>> proximity_components(const TrajectorySet& set, double eps, double t) {
    const int n = set.size();
    std::vector<int> parent(static_cast<std::size_t>(n));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    };
    const double thr = (eps + kGapSlack) * (eps + kGapSlack);
    for (EntityId a = 0; a < n; ++a)
        for (EntityId b = a + 1; b < n; ++b)
            if (set.sq_distance(a, b, t) <= thr) {
                const int ra = find(a), rb = find(b);
                if (ra != rb) parent[static_cast<std::size_t>(std::max(ra, rb))] = std::min(ra, rb);
            }
    std::vector<std::vector<EntityId>> comps(static_cast<std::size_t>(n));
    for (EntityId e = 0; e < n; ++e) comps[static_cast<std::size_t>(find(e))].push_back(e);
    std::vector<std::vector<EntityId>> out;
    for (auto& c : comps)
        if (!c.empty()) out.push_back(std::move(c));
    return out;
}

} // namespace ctraj
