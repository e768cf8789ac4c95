#include "ctraj/reeb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace ctraj {

std::vector<std::vector<int>> ReebGraph::outgoing() const {
    std::vector<std::vector<int>> adj(vertices.size());
    for (std::size_t e = 0; e < edges.size(); ++e) adj[static_cast<std::size_t>(edges[e].from)].push_back(static_cast<int>(e));
    return adj;
}

std::vector<std::vector<int>> ReebGraph::incoming() const {
    std::vector<std::vector<int>> adj(vertices.size());
    for (std::size_t e = 0; e < edges.size(); ++e) adj[static_cast<std::size_t>(edges[e].to)].push_back(static_cast<int>(e));
    return adj;
}

namespace {

struct OpenEdge {
    int from_vertex;
    double start;
};

// Partition of the entity set, components sorted by smallest member.
using Partition = std::vector<std::vector<EntityId>>;

} // namespace

ReebGraph build_reeb(const TrajectorySet& set, double eps) {
    if (eps < 0.0) throw std::invalid_argument("epsilon must be nonnegative");
    const Interval span = set.grid().span();
    const auto events = epsilon_events(set, eps);

    // Event times strictly inside the span cut it into sampling intervals.
    // Every cut is doubled into a degenerate [t,t] interval so that
    // connectivity holding only at the event instant (a touch) still shows
    // up as a zero-length component.
    std::vector<double> cut_times;
    for (const auto& ev : events)
        if (ev.t > span.lo + kTimeTol && ev.t < span.hi - kTimeTol) cut_times.push_back(ev.t);
    std::sort(cut_times.begin(), cut_times.end());
    cut_times.erase(std::unique(cut_times.begin(), cut_times.end(),
                                [](double x, double y) { return std::abs(x - y) <= kTimeTol; }),
                    cut_times.end());

    std::vector<Interval> intervals;
    double prev = span.lo;
    for (double t : cut_times) {
        intervals.push_back({prev, t});
        intervals.push_back({t, t});
        prev = t;
    }
    intervals.push_back({prev, span.hi});

    std::vector<Partition> partitions;
    partitions.reserve(intervals.size());
    for (const auto& itv : intervals) partitions.push_back(proximity_components(set, eps, itv.mid()));

    ReebGraph g;
    g.vertices.push_back({span.lo, VertexKind::start, -1, -1});
    g.vertices.push_back({span.hi, VertexKind::end, -1, -1});
    g.source = 0;
    g.sink = 1;

    std::map<std::vector<EntityId>, OpenEdge> open;
    for (const auto& comp : partitions.front()) open[comp] = {g.source, span.lo};

    auto find_event_pair = [&](double t, const std::vector<EntityId>& group, EntityId& pa, EntityId& pb) {
        for (const auto& ev : events) {
            if (std::abs(ev.t - t) > kTimeTol) continue;
            const bool a_in = std::binary_search(group.begin(), group.end(), ev.a);
            const bool b_in = std::binary_search(group.begin(), group.end(), ev.b);
            if (a_in && b_in) {
                pa = ev.a;
                pb = ev.b;
                return;
            }
        }
        pa = pb = -1;
    };

    for (std::size_t i = 0; i + 1 < partitions.size(); ++i) {
        const Partition& oldp = partitions[i];
        const Partition& newp = partitions[i + 1];
        const double t = intervals[i].hi;

        std::vector<const std::vector<EntityId>*> gone, born;
        for (const auto& c : oldp)
            if (std::find(newp.begin(), newp.end(), c) == newp.end()) gone.push_back(&c);
        for (const auto& c : newp)
            if (std::find(oldp.begin(), oldp.end(), c) == oldp.end()) born.push_back(&c);
        if (gone.empty() && born.empty()) continue;

        // Group the changed components by shared entities; each group gets
        // one vertex at time t.
        const int n = set.size();
        std::vector<int> uf(static_cast<std::size_t>(n));
        std::iota(uf.begin(), uf.end(), 0);
        auto find = [&](int x) {
            while (uf[static_cast<std::size_t>(x)] != x) {
                uf[static_cast<std::size_t>(x)] = uf[static_cast<std::size_t>(uf[static_cast<std::size_t>(x)])];
                x = uf[static_cast<std::size_t>(x)];
            }
            return x;
        };
        auto unite = [&](int a, int b) {
            a = find(a);
            b = find(b);
            if (a != b) uf[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
        };
        for (const auto* c : gone)
            for (std::size_t j = 1; j < c->size(); ++j) unite((*c)[0], (*c)[j]);
        for (const auto* c : born)
            for (std::size_t j = 1; j < c->size(); ++j) unite((*c)[0], (*c)[j]);

        std::map<int, std::pair<std::vector<const std::vector<EntityId>*>, std::vector<const std::vector<EntityId>*>>> groups;
        for (const auto* c : gone) groups[find((*c)[0])].first.push_back(c);
        for (const auto* c : born) groups[find((*c)[0])].second.push_back(c);

        for (auto& [root, grp] : groups) {
            auto& [old_comps, new_comps] = grp;
            std::vector<EntityId> involved;
            for (const auto* c : old_comps) involved.insert(involved.end(), c->begin(), c->end());
            for (const auto* c : new_comps) involved.insert(involved.end(), c->begin(), c->end());
            std::sort(involved.begin(), involved.end());
            involved.erase(std::unique(involved.begin(), involved.end()), involved.end());

            const VertexKind kind = new_comps.size() <= old_comps.size() ? VertexKind::merge : VertexKind::split;
            EntityId pa, pb;
            find_event_pair(t, involved, pa, pb);
            const int v = static_cast<int>(g.vertices.size());
            g.vertices.push_back({t, kind, pa, pb});

            for (const auto* c : old_comps) {
                auto it = open.find(*c);
                if (it == open.end()) throw std::logic_error("reeb sweep lost an open component");
                ReebEdge edge;
                edge.from = it->second.from_vertex;
                edge.to = v;
                edge.members = *c;
                edge.span = {it->second.start, t};
                g.edges.push_back(std::move(edge));
                open.erase(it);
            }
            for (const auto* c : new_comps) open[*c] = {v, t};
        }
    }

    for (auto& [comp, oe] : open) {
        ReebEdge edge;
        edge.from = oe.from_vertex;
        edge.to = g.sink;
        edge.members = comp;
        edge.span = {oe.start, span.hi};
        g.edges.push_back(std::move(edge));
    }
    std::sort(g.edges.begin(), g.edges.end(), [](const ReebEdge& a, const ReebEdge& b) {
        if (a.span.lo != b.span.lo) return a.span.lo < b.span.lo;
        return a.members < b.members;
    });
    return g;
}

ReebGraph subdivide(const ReebGraph& graph, const std::vector<std::vector<double>>& cuts_per_entity) {
    ReebGraph g;
    g.vertices = graph.vertices;
    g.source = graph.source;
    g.sink = graph.sink;
    for (const auto& e : graph.edges) {
        std::vector<double> cuts;
        for (EntityId m : e.members) {
            if (static_cast<std::size_t>(m) >= cuts_per_entity.size()) continue;
            for (double t : cuts_per_entity[static_cast<std::size_t>(m)])
                if (t > e.span.lo + kTimeTol && t < e.span.hi - kTimeTol) cuts.push_back(t);
        }
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end(),
                               [](double x, double y) { return std::abs(x - y) <= kTimeTol; }),
                   cuts.end());
        int from = e.from;
        double start = e.span.lo;
        auto emit = [&](int a, int b, Interval sp) {
            ReebEdge edge;
            edge.from = a;
            edge.to = b;
            edge.members = e.members;
            edge.span = sp;
            g.edges.push_back(std::move(edge));
        };
        for (double t : cuts) {
            const int v = static_cast<int>(g.vertices.size());
            g.vertices.push_back({t, VertexKind::subdivision, -1, -1});
            emit(from, v, {start, t});
            from = v;
            start = t;
        }
        emit(from, e.to, {start, e.span.hi});
    }
    return g;
}

ReebGraph weigh(const ReebGraph& graph, std::span<const PiecewiseFunction> cost_functions, Aggregation agg) {
    ReebGraph g = graph;
    for (auto& e : g.edges) {
        std::vector<PiecewiseFunction> family;
        family.reserve(e.members.size());
        for (EntityId m : e.members) {
            if (static_cast<std::size_t>(m) >= cost_functions.size() || cost_functions[static_cast<std::size_t>(m)].empty())
                throw std::invalid_argument("missing cost function for entity " + std::to_string(m));
            PiecewiseFunction f = cost_functions[static_cast<std::size_t>(m)].restrict_to(e.span);
            // Envelope owners must name the member to follow, not whatever
            // the profile's own piece owners refer to.
            for (auto& piece : f.pieces) piece.owner = m;
            family.push_back(std::move(f));
        }
        e.envelope = lower_envelope(family, e.span);
        if (e.span.length() <= kTimeTol) {
            e.weight = 0.0;
        } else {
            switch (agg) {
                case Aggregation::integral: e.weight = integrate(e.envelope, e.span); break;
                case Aggregation::maximum: e.weight = max_value(e.envelope, e.span); break;
                case Aggregation::integral_of_squares: e.weight = integrate_square(e.envelope, e.span); break;
            }
        }
        e.weighted = true;
    }
    return g;
}

namespace {

std::vector<int> topological_order(const ReebGraph& g) {
    std::vector<int> indeg(g.vertices.size(), 0);
    for (const auto& e : g.edges) ++indeg[static_cast<std::size_t>(e.to)];
    const auto out = g.outgoing();
    std::vector<int> order;
    std::vector<int> queue;
    for (std::size_t v = 0; v < g.vertices.size(); ++v)
        if (indeg[v] == 0) queue.push_back(static_cast<int>(v));
    while (!queue.empty()) {
        // Smallest vertex id first keeps the order deterministic.
        auto it = std::min_element(queue.begin(), queue.end());
        const int v = *it;
        queue.erase(it);
        order.push_back(v);
        for (int e : out[static_cast<std::size_t>(v)]) {
            const int w = g.edges[static_cast<std::size_t>(e)].to;
            if (--indeg[static_cast<std::size_t>(w)] == 0) queue.push_back(w);
        }
    }
    if (order.size() != g.vertices.size()) throw std::logic_error("reeb graph contains a cycle");
    return order;
}

} // namespace

TrajectoidPath min_weight_path(const ReebGraph& g, Aggregation agg) {
    for (const auto& e : g.edges)
        if (!e.weighted) throw std::invalid_argument("min_weight_path requires a weighted graph");

    const bool use_max = agg == Aggregation::maximum;
    auto combine = [&](double edge_w, double rest) { return use_max ? std::max(edge_w, rest) : edge_w + rest; };

    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> best(g.vertices.size(), inf);
    std::vector<long> jumps(g.vertices.size(), std::numeric_limits<long>::max());
    best[static_cast<std::size_t>(g.sink)] = use_max ? -inf : 0.0;
    jumps[static_cast<std::size_t>(g.sink)] = 0;

    auto vertex_jumpy = [&](int v) {
        const VertexKind k = g.vertices[static_cast<std::size_t>(v)].kind;
        return k == VertexKind::merge || k == VertexKind::split;
    };

    const auto out = g.outgoing();
    auto order = topological_order(g);
    std::reverse(order.begin(), order.end());
    for (int v : order) {
        if (v == g.sink) continue;
        for (int eid : out[static_cast<std::size_t>(v)]) {
            const ReebEdge& e = g.edges[static_cast<std::size_t>(eid)];
            if (best[static_cast<std::size_t>(e.to)] == inf) continue;
            const double cand = combine(e.weight, best[static_cast<std::size_t>(e.to)]);
            const long jc = jumps[static_cast<std::size_t>(e.to)] + (vertex_jumpy(e.to) ? 1 : 0);
            if (cand < best[static_cast<std::size_t>(v)] ||
                (cand == best[static_cast<std::size_t>(v)] && jc < jumps[static_cast<std::size_t>(v)])) {
                best[static_cast<std::size_t>(v)] = cand;
                jumps[static_cast<std::size_t>(v)] = jc;
            }
        }
    }
    if (best[static_cast<std::size_t>(g.source)] == inf)
        throw std::runtime_error("no source-to-sink path; the graph is inconsistent");

    // Greedy forward walk re-deriving the DP choice; among optimal edges the
    // smallest edge id wins, which makes the edge sequence lexicographically
    // minimal.
    TrajectoidPath path;
    path.cost = best[static_cast<std::size_t>(g.source)];
    int v = g.source;
    while (v != g.sink) {
        int chosen = -1;
        for (int eid : out[static_cast<std::size_t>(v)]) {
            const ReebEdge& e = g.edges[static_cast<std::size_t>(eid)];
            if (best[static_cast<std::size_t>(e.to)] == inf) continue;
            const double cand = combine(e.weight, best[static_cast<std::size_t>(e.to)]);
            const long jc = jumps[static_cast<std::size_t>(e.to)] + (vertex_jumpy(e.to) ? 1 : 0);
            if (cand == best[static_cast<std::size_t>(v)] && jc == jumps[static_cast<std::size_t>(v)]) {
                chosen = eid;
                break;
            }
        }
        if (chosen == -1) throw std::logic_error("path reconstruction failed");
        path.edges.push_back(chosen);
        v = g.edges[static_cast<std::size_t>(chosen)].to;
    }
    return path;
}

std::string describe(const ReebGraph& g) {
    std::ostringstream os;
    os.precision(12);
    auto kind_name = [](VertexKind k) {
        switch (k) {
            case VertexKind::start: return "start";
            case VertexKind::end: return "end";
            case VertexKind::merge: return "merge";
            case VertexKind::split: return "split";
            case VertexKind::subdivision: return "subdivision";
        }
        return "?";
    };
    for (std::size_t v = 0; v < g.vertices.size(); ++v) {
        const auto& vx = g.vertices[v];
        os << "vertex " << v << " t=" << vx.t << " kind=" << kind_name(vx.kind);
        if (vx.pair_a >= 0) os << " pair=(" << vx.pair_a << "," << vx.pair_b << ")";
        os << "\n";
    }
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        const auto& ed = g.edges[e];
        os << "edge " << e << " " << ed.from << "->" << ed.to << " span=[" << ed.span.lo << ","
           << ed.span.hi << "] members={";
        for (std::size_t i = 0; i < ed.members.size(); ++i) os << (i ? "," : "") << ed.members[i];
        os << "}";
        if (ed.weighted) os << " weight=" << ed.weight;
        os << "\n";
    }
    return os.str();
}

} // namespace ctraj
