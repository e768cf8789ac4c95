#include "ctraj/central.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace ctraj {

EntityId CentralTrajectory::entity_at(double t) const {
    for (const auto& p : pieces)
        if (t <= p.span.hi) return p.entity;
    return pieces.empty() ? -1 : pieces.back().entity;
}

double CentralTrajectory::position_1d(const TrajectorySet& set, double t) const {
    return set.position(entity_at(t), t)[0];
}

int CentralTrajectory::real_jump_count() const {
    int n = 0;
    for (const auto& j : jumps)
        if (j.gap > kGapSlack) ++n;
    return n;
}

std::vector<EntityId> witness_chain(const TrajectorySet& set, double eps, double t, EntityId from, EntityId to) {
    if (from == to) return {from};
    const int n = set.size();
    const double thr = (eps + kGapSlack) * (eps + kGapSlack);
    std::vector<EntityId> parent(static_cast<std::size_t>(n), -2);
    std::deque<EntityId> queue{from};
    parent[static_cast<std::size_t>(from)] = -1;
    while (!queue.empty()) {
        const EntityId u = queue.front();
        queue.pop_front();
        if (u == to) break;
        for (EntityId v = 0; v < n; ++v) {
            if (parent[static_cast<std::size_t>(v)] != -2 || v == u) continue;
            if (set.sq_distance(u, v, t) <= thr) {
                parent[static_cast<std::size_t>(v)] = u;
                queue.push_back(v);
            }
        }
    }
    if (parent[static_cast<std::size_t>(to)] == -2) return {};
    std::vector<EntityId> chain;
    for (EntityId v = to; v != -1; v = parent[static_cast<std::size_t>(v)]) chain.push_back(v);
    std::reverse(chain.begin(), chain.end());
    return chain;
}

CentralTrajectory assemble_trajectoid(const TrajectorySet& set, double eps, const ReebGraph& graph,
                                      const TrajectoidPath& path) {
    CentralTrajectory ct;

    // Owner timeline: envelope pieces of the traversed edges, skipping
    // zero-length edges (they only exist to permit an instantaneous switch).
    struct OwnedSpan {
        Interval span;
        EntityId entity;
    };
    std::vector<OwnedSpan> timeline;
    for (int eid : path.edges) {
        const ReebEdge& e = graph.edges[static_cast<std::size_t>(eid)];
        if (e.span.length() <= kTimeTol) continue;
        for (const auto& piece : e.envelope.pieces) {
            if (piece.span.length() <= kTimeTol) continue;
            timeline.push_back({piece.span, piece.owner});
        }
    }
    if (timeline.empty()) throw std::logic_error("path covers no time");

    for (const auto& os : timeline) {
        if (!ct.pieces.empty() && ct.pieces.back().entity == os.entity) {
            ct.pieces.back().span.hi = os.span.hi;
            continue;
        }
        ct.pieces.push_back({os.span, os.entity});
    }
    ct.pieces.front().span.lo = set.grid().start();
    ct.pieces.back().span.hi = set.grid().end();
    for (std::size_t i = 0; i + 1 < ct.pieces.size(); ++i) {
        // Close any root-finding slack between consecutive spans.
        ct.pieces[i + 1].span.lo = ct.pieces[i].span.hi;
    }

    for (std::size_t i = 0; i + 1 < ct.pieces.size(); ++i) {
        const double t = ct.pieces[i].span.hi;
        const EntityId a = ct.pieces[i].entity;
        const EntityId b = ct.pieces[i + 1].entity;
        Jump j;
        j.t = t;
        j.from = a;
        j.to = b;
        j.gap = set.distance(a, b, t);
        j.chain = witness_chain(set, eps, t, a, b);
        if (j.chain.empty())
            throw std::runtime_error("jump without an epsilon-connected witness chain; graph inconsistent");
        ct.jumps.push_back(std::move(j));
    }

    // Polyline complexity: switch points plus grid bends interior to pieces.
    int vertices = static_cast<int>(ct.pieces.size()) - 1;
    for (const auto& p : ct.pieces)
        for (double gt : set.grid().times())
            if (gt > p.span.lo + kTimeTol && gt < p.span.hi - kTimeTol) ++vertices;
    ct.vertex_count = vertices;
    return ct;
}

} // namespace ctraj
