#include "ctraj/central_1d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <tuple>

namespace ctraj {

namespace {

constexpr double kEndTol = 1e-12;

struct DisjointSet {
    std::vector<int> parent;
    explicit DisjointSet(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
    }
};

} // namespace

std::vector<ClippedSegment> clip_halflines(std::span<const FrameLine> lines, Interval window) {
    struct Part {
        EntityId entity;
        Interval span; // pre-clip domain
        double slope, intercept;
        int side; // sign of the value on the part, 0 for on-axis
    };
    std::vector<Part> parts;
    for (const auto& ln : lines) {
        std::vector<Interval> spans;
        if (ln.slope != 0.0) {
            const double r = -ln.intercept / ln.slope;
            if (r > window.lo + kEndTol && r < window.hi - kEndTol) {
                spans.push_back({window.lo, r});
                spans.push_back({r, window.hi});
            }
        }
        if (spans.empty()) spans.push_back(window);
        for (const auto& sp : spans) {
            const double v = ln.eval(sp.mid());
            int side = 0;
            if (std::abs(v) > 1e-12 * (1.0 + std::abs(v))) side = v > 0.0 ? 1 : -1;
            parts.push_back({ln.entity, sp, ln.slope, ln.intercept, side});
        }
    }

    std::vector<ClippedSegment> out;
    for (const auto& p : parts) {
        double lo = p.span.lo, hi = p.span.hi;
        if (p.side != 0 && p.slope != 0.0) {
            // The unsigned value of p grows rightward iff slope and side agree.
            const bool away_right = (p.slope > 0.0) == (p.side > 0);
            for (const auto& q : parts) {
                if (&q == &p || q.side != p.side) continue;
                if (std::abs(q.slope) >= std::abs(p.slope) - 1e-15) continue; // only strictly shallower clip
                if (q.slope != 0.0 && (q.slope > 0.0) != (p.slope > 0.0)) continue; // same trend or horizontal
                const double denom = p.slope - q.slope;
                const double tx = (q.intercept - p.intercept) / denom;
                if (!p.span.contains(tx, kEndTol) || !q.span.contains(tx, kEndTol)) continue;
                if (away_right)
                    hi = std::min(hi, tx);
                else
                    lo = std::max(lo, tx);
            }
        }
        if (hi - lo > kEndTol) out.push_back({p.entity, {lo, hi}, p.slope, p.intercept});
    }
    return out;
}

namespace {

struct ZoneEdge {
    int from = -1, to = -1;
    EntityId entity = -1;
    double t0 = 0.0, t1 = 0.0;
    double slope = 0.0, intercept = 0.0; // frame value, meaningful when t1 > t0
    double weight = 0.0;
};

struct ZoneGraphBuilder {
    struct Node {
        double t;
        int elem;
    };
    std::vector<Node> nodes;
    std::vector<ZoneEdge> edges;
    std::map<std::tuple<int, long long, long long>, int> key_to_node;

    int node_at(int elem, double t, double y) {
        const auto key = std::make_tuple(elem, static_cast<long long>(std::llround(t * 1e12)),
                                         static_cast<long long>(std::llround(y * 1e9)));
        auto it = key_to_node.find(key);
        if (it != key_to_node.end()) return it->second;
        const int id = static_cast<int>(nodes.size());
        nodes.push_back({t, elem});
        key_to_node.emplace(key, id);
        return id;
    }
};

// Per-elementary slice of the clipped arrangement: its segments, the slab
// decomposition, and the per-segment split times.
struct ElementarySlice {
    Interval window;
    std::vector<ClippedSegment> segs;
    std::vector<double> xs;                  // slab boundaries
    std::vector<std::vector<int>> slab_segs; // per slab, bottom to top at the slab midpoint
    std::vector<int> gap_offset;             // local gap id base per slab
    std::vector<std::vector<double>> events; // per segment: sorted node times
    int gap_base = 0;                        // global gap id base
    int local_gaps = 0;
};

ElementarySlice build_slice(Interval window, std::vector<ClippedSegment> segs) {
    ElementarySlice sl;
    sl.window = window;
    sl.segs = std::move(segs);
    const std::size_t m = sl.segs.size();

    sl.events.resize(m);
    sl.xs = {window.lo, window.hi};
    for (std::size_t i = 0; i < m; ++i) {
        sl.events[i].push_back(sl.segs[i].span.lo);
        sl.events[i].push_back(sl.segs[i].span.hi);
        sl.xs.push_back(sl.segs[i].span.lo);
        sl.xs.push_back(sl.segs[i].span.hi);
    }
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            const double denom = sl.segs[i].slope - sl.segs[j].slope;
            if (denom == 0.0) continue;
            const double tx = (sl.segs[j].intercept - sl.segs[i].intercept) / denom;
            if (!sl.segs[i].span.contains(tx, kEndTol) || !sl.segs[j].span.contains(tx, kEndTol)) continue;
            sl.events[i].push_back(tx);
            sl.events[j].push_back(tx);
            sl.xs.push_back(tx);
        }
    }
    std::sort(sl.xs.begin(), sl.xs.end());
    sl.xs.erase(std::unique(sl.xs.begin(), sl.xs.end(),
                            [](double a, double b) { return std::abs(a - b) <= kEndTol; }),
                sl.xs.end());

    const std::size_t nslab = sl.xs.size() - 1;
    sl.slab_segs.resize(nslab);
    sl.gap_offset.assign(nslab + 1, 0);
    for (std::size_t s = 0; s < nslab; ++s) {
        const double mid = 0.5 * (sl.xs[s] + sl.xs[s + 1]);
        for (std::size_t i = 0; i < m; ++i)
            if (sl.segs[i].span.lo <= sl.xs[s] + kEndTol && sl.segs[i].span.hi >= sl.xs[s + 1] - kEndTol)
                sl.slab_segs[s].push_back(static_cast<int>(i));
        std::sort(sl.slab_segs[s].begin(), sl.slab_segs[s].end(), [&](int a, int b) {
            const double va = sl.segs[static_cast<std::size_t>(a)].eval(mid);
            const double vb = sl.segs[static_cast<std::size_t>(b)].eval(mid);
            if (va != vb) return va < vb;
            return a < b;
        });
        sl.gap_offset[s + 1] = sl.gap_offset[s] + static_cast<int>(sl.slab_segs[s].size()) + 1;
    }
    sl.local_gaps = sl.gap_offset[nslab];

    for (auto& ev : sl.events) {
        std::sort(ev.begin(), ev.end());
        ev.erase(std::unique(ev.begin(), ev.end(), [](double a, double b) { return std::abs(a - b) <= kEndTol; }),
                 ev.end());
    }
    return sl;
}

// Vertical gaps of one slab evaluated at time x (sentinels at +-inf).
std::vector<std::pair<double, double>> gaps_at(const ElementarySlice& sl, std::size_t slab, double x) {
    std::vector<std::pair<double, double>> gaps;
    double prev = -std::numeric_limits<double>::infinity();
    for (int idx : sl.slab_segs[slab]) {
        const double v = sl.segs[static_cast<std::size_t>(idx)].eval(x);
        gaps.emplace_back(prev, v);
        prev = v;
    }
    gaps.emplace_back(prev, std::numeric_limits<double>::infinity());
    return gaps;
}

void connect_gap_columns(DisjointSet& faces, const std::vector<std::pair<double, double>>& lg, int lbase,
                         const std::vector<std::pair<double, double>>& rg, int rbase) {
    for (std::size_t i = 0; i < lg.size(); ++i) {
        for (std::size_t j = 0; j < rg.size(); ++j) {
            const double lo = std::max(lg[i].first, rg[j].first);
            const double hi = std::min(lg[i].second, rg[j].second);
            if (hi - lo > 1e-12) faces.unite(lbase + static_cast<int>(i), rbase + static_cast<int>(j));
        }
    }
}

} // namespace

Central1dResult central_1d_continuous(const TrajectorySet& set) {
    if (set.dim() != 1) throw std::invalid_argument("continuous mode requires one-dimensional entities");

    Central1dResult res;
    res.ideal = ideal_trajectory(set);
    const std::size_t Q = res.ideal.elementary.size();

    // Clipped arrangement slice per elementary interval.
    std::vector<ElementarySlice> slices;
    slices.reserve(Q);
    int total_gaps = 0;
    for (std::size_t q = 0; q < Q; ++q) {
        const Interval E = res.ideal.elementary[q];
        const FunctionPiece& ip = res.ideal.ideal.pieces[q];
        const std::size_t k = set.grid().segment_index(E.mid());
        std::vector<FrameLine> lines;
        lines.reserve(static_cast<std::size_t>(set.size()));
        for (EntityId e = 0; e < set.size(); ++e) {
            double s, c;
            set.segment_motion(e, k, 0, s, c);
            lines.push_back({e, s - ip.b, c - ip.c});
        }
        slices.push_back(build_slice(E, clip_halflines(lines, E)));
        slices.back().gap_base = total_gaps;
        total_gaps += slices.back().local_gaps;
    }

    // The faces of the concatenated arrangement: trapezoids joined wherever
    // an open vertical gap survives a slab boundary, including boundaries
    // between elementary intervals (the frame values are continuous there).
    DisjointSet faces(static_cast<std::size_t>(total_gaps));
    for (const auto& sl : slices) {
        const std::size_t nslab = sl.slab_segs.size();
        for (std::size_t s = 0; s + 1 < nslab; ++s) {
            const double x = sl.xs[s + 1];
            connect_gap_columns(faces, gaps_at(sl, s, x), sl.gap_base + sl.gap_offset[s], gaps_at(sl, s + 1, x),
                                sl.gap_base + sl.gap_offset[s + 1]);
        }
    }
    for (std::size_t q = 0; q + 1 < Q; ++q) {
        const auto& left = slices[q];
        const auto& right = slices[q + 1];
        if (left.slab_segs.empty() || right.slab_segs.empty()) continue;
        const double x = left.window.hi;
        const std::size_t ls = left.slab_segs.size() - 1;
        connect_gap_columns(faces, gaps_at(left, ls, x), left.gap_base + left.gap_offset[ls],
                            gaps_at(right, 0, x), right.gap_base + right.gap_offset[0]);
    }

    // Faces touched by the ideal trajectory (the axis of every frame).
    std::vector<char> face_in_zone(static_cast<std::size_t>(total_gaps), 0);
    for (const auto& sl : slices) {
        for (std::size_t s = 0; s < sl.slab_segs.size(); ++s) {
            const double mid = 0.5 * (sl.xs[s] + sl.xs[s + 1]);
            const auto& order = sl.slab_segs[s];
            bool on_axis = false;
            for (std::size_t i = 0; i < order.size(); ++i) {
                const double v = sl.segs[static_cast<std::size_t>(order[i])].eval(mid);
                if (std::abs(v) <= 1e-12) {
                    face_in_zone[static_cast<std::size_t>(faces.find(sl.gap_base + sl.gap_offset[s] + static_cast<int>(i)))] = 1;
                    face_in_zone[static_cast<std::size_t>(faces.find(sl.gap_base + sl.gap_offset[s] + static_cast<int>(i) + 1))] = 1;
                    on_axis = true;
                }
            }
            if (!on_axis) {
                int g = static_cast<int>(order.size());
                for (std::size_t i = 0; i < order.size(); ++i) {
                    if (sl.segs[static_cast<std::size_t>(order[i])].eval(mid) > 0.0) {
                        g = static_cast<int>(i);
                        break;
                    }
                }
                face_in_zone[static_cast<std::size_t>(faces.find(sl.gap_base + sl.gap_offset[s] + g))] = 1;
            }
        }
    }

    // Zone edges: subsegments whose slab-local floor/ceiling role touches a
    // zone face somewhere along them.
    ZoneGraphBuilder gb;
    std::map<EntityId, int> prev_right;
    long total_zone_edges = 0;
    for (std::size_t q = 0; q < Q; ++q) {
        const auto& sl = slices[q];
        const Interval E = sl.window;
        const std::size_t nslab = sl.slab_segs.size();

        std::vector<std::vector<char>> seg_slab_zone(sl.segs.size(), std::vector<char>(nslab, 0));
        for (std::size_t s = 0; s < nslab; ++s) {
            const auto& order = sl.slab_segs[s];
            for (std::size_t i = 0; i < order.size(); ++i) {
                const bool below =
                    face_in_zone[static_cast<std::size_t>(faces.find(sl.gap_base + sl.gap_offset[s] + static_cast<int>(i)))];
                const bool above =
                    face_in_zone[static_cast<std::size_t>(faces.find(sl.gap_base + sl.gap_offset[s] + static_cast<int>(i) + 1))];
                if (below || above) seg_slab_zone[static_cast<std::size_t>(order[i])][s] = 1;
            }
        }

        auto slab_index_of = [&](double t) {
            auto it = std::upper_bound(sl.xs.begin(), sl.xs.end(), t + kEndTol);
            std::size_t s = static_cast<std::size_t>(it - sl.xs.begin());
            return s == 0 ? std::size_t{0} : std::min(s - 1, nslab - 1);
        };

        std::map<EntityId, int> left_nodes, right_nodes;
        for (std::size_t i = 0; i < sl.segs.size(); ++i) {
            const auto& ev = sl.events[i];
            for (std::size_t e = 0; e + 1 < ev.size(); ++e) {
                const double t0 = ev[e], t1 = ev[e + 1];
                if (t1 - t0 <= kEndTol) continue;
                bool zone = false;
                for (std::size_t s = slab_index_of(t0 + kEndTol); s < nslab && sl.xs[s] < t1 - kEndTol; ++s)
                    if (seg_slab_zone[i][s]) {
                        zone = true;
                        break;
                    }
                if (!zone) continue;
                const int a = gb.node_at(static_cast<int>(q), t0, sl.segs[i].eval(t0));
                const int b = gb.node_at(static_cast<int>(q), t1, sl.segs[i].eval(t1));
                FunctionPiece cost =
                    FunctionPiece::make_abs_linear(sl.segs[i].entity, {t0, t1}, sl.segs[i].slope, sl.segs[i].intercept);
                gb.edges.push_back({a, b, sl.segs[i].entity, t0, t1, sl.segs[i].slope, sl.segs[i].intercept,
                                    integrate_piece(cost, t0, t1)});
                ++total_zone_edges;
                if (t0 <= E.lo + kEndTol) left_nodes.emplace(sl.segs[i].entity, a);
                if (t1 >= E.hi - kEndTol) right_nodes.emplace(sl.segs[i].entity, b);
            }
        }

        // Continuity across the elementary boundary: same entity, or two
        // entities that coincide there (the boundary may itself be a
        // crossing when the envelope owner changes).
        for (const auto& [entity, node] : left_nodes) {
            for (const auto& [prev_entity, prev_node] : prev_right) {
                if (prev_entity != entity &&
                    std::abs(set.position(prev_entity, E.lo)[0] - set.position(entity, E.lo)[0]) > 1e-9)
                    continue;
                gb.edges.push_back({prev_node, node, entity, E.lo, E.lo, 0.0, 0.0, 0.0});
            }
        }
        prev_right = std::move(right_nodes);
    }

    // Source and sink collect the endpoints of the span.
    const double t0 = set.grid().start();
    const double t1 = set.grid().end();
    const int source = static_cast<int>(gb.nodes.size());
    gb.nodes.push_back({t0, -1});
    const int sink = static_cast<int>(gb.nodes.size());
    gb.nodes.push_back({t1, -1});
    {
        std::vector<char> has_start(gb.nodes.size(), 0), has_end(gb.nodes.size(), 0);
        for (const auto& e : gb.edges) {
            if (e.t0 <= t0 + kEndTol) has_start[static_cast<std::size_t>(e.from)] = 1;
            if (e.t1 >= t1 - kEndTol) has_end[static_cast<std::size_t>(e.to)] = 1;
        }
        for (std::size_t v = 0; v < static_cast<std::size_t>(source); ++v) {
            if (has_start[v]) gb.edges.push_back({source, static_cast<int>(v), -1, t0, t0, 0.0, 0.0, 0.0});
            if (has_end[v]) gb.edges.push_back({static_cast<int>(v), sink, -1, t1, t1, 0.0, 0.0, 0.0});
        }
    }

    // Shortest path over the DAG. Node times can disagree by rounding where
    // several constructions meet at one instant, so the topological order
    // comes from the edges themselves rather than a time sort.
    std::vector<std::vector<int>> out_edges(gb.nodes.size());
    std::vector<int> indeg(gb.nodes.size(), 0);
    for (std::size_t e = 0; e < gb.edges.size(); ++e) {
        out_edges[static_cast<std::size_t>(gb.edges[e].from)].push_back(static_cast<int>(e));
        ++indeg[static_cast<std::size_t>(gb.edges[e].to)];
    }
    std::vector<std::size_t> order;
    order.reserve(gb.nodes.size());
    {
        std::vector<std::size_t> queue;
        for (std::size_t v = 0; v < gb.nodes.size(); ++v)
            if (indeg[v] == 0) queue.push_back(v);
        while (!queue.empty()) {
            auto it = std::min_element(queue.begin(), queue.end());
            const std::size_t v = *it;
            queue.erase(it);
            order.push_back(v);
            for (int eid : out_edges[v]) {
                const std::size_t w = static_cast<std::size_t>(gb.edges[static_cast<std::size_t>(eid)].to);
                if (--indeg[w] == 0) queue.push_back(w);
            }
        }
        if (order.size() != gb.nodes.size()) throw std::logic_error("zone graph is not acyclic");
    }

    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(gb.nodes.size(), inf);
    std::vector<int> via(gb.nodes.size(), -1);
    dist[static_cast<std::size_t>(source)] = 0.0;
    for (std::size_t idx : order) {
        if (dist[idx] == inf) continue;
        for (int eid : out_edges[idx]) {
            const ZoneEdge& e = gb.edges[static_cast<std::size_t>(eid)];
            const double cand = dist[idx] + e.weight;
            if (cand < dist[static_cast<std::size_t>(e.to)]) {
                dist[static_cast<std::size_t>(e.to)] = cand;
                via[static_cast<std::size_t>(e.to)] = eid;
            }
        }
    }
    if (dist[static_cast<std::size_t>(sink)] == inf)
        throw std::runtime_error("zone graph has no source-to-sink path");

    std::vector<int> path_edges;
    for (int v = sink; v != source;) {
        const int eid = via[static_cast<std::size_t>(v)];
        path_edges.push_back(eid);
        v = gb.edges[static_cast<std::size_t>(eid)].from;
    }
    std::reverse(path_edges.begin(), path_edges.end());

    CentralTrajectory ct;
    for (int eid : path_edges) {
        const ZoneEdge& e = gb.edges[static_cast<std::size_t>(eid)];
        if (e.t1 - e.t0 <= kEndTol) continue;
        if (!ct.pieces.empty() && ct.pieces.back().entity == e.entity) {
            ct.pieces.back().span.hi = e.t1;
            continue;
        }
        ct.pieces.push_back({{e.t0, e.t1}, e.entity});
    }
    if (ct.pieces.empty()) throw std::logic_error("continuous path covers no time");
    ct.pieces.front().span.lo = t0;
    ct.pieces.back().span.hi = t1;
    for (std::size_t i = 0; i + 1 < ct.pieces.size(); ++i) ct.pieces[i + 1].span.lo = ct.pieces[i].span.hi;

    for (std::size_t i = 0; i + 1 < ct.pieces.size(); ++i) {
        const double t = ct.pieces[i].span.hi;
        Jump j;
        j.t = t;
        j.from = ct.pieces[i].entity;
        j.to = ct.pieces[i + 1].entity;
        j.gap = set.distance(j.from, j.to, t);
        j.chain = witness_chain(set, 0.0, t, j.from, j.to);
        if (j.chain.empty()) j.chain = {j.from, j.to};
        ct.jumps.push_back(std::move(j));
    }

    int vertices = static_cast<int>(ct.pieces.size()) - 1;
    for (const auto& p : ct.pieces)
        for (double gt : set.grid().times())
            if (gt > p.span.lo + kTimeTol && gt < p.span.hi - kTimeTol) ++vertices;
    ct.vertex_count = vertices;

    ct.cost_reduced = dist[static_cast<std::size_t>(sink)];
    ct.cost = integrate_farthest_along(set, res.ideal, ct);
    res.trajectory = std::move(ct);

    res.stats.reeb_vertices = static_cast<int>(gb.nodes.size());
    res.stats.reeb_edges = static_cast<int>(gb.edges.size());
    res.stats.envelope_pieces = total_zone_edges;
    res.stats.vertex_count = res.trajectory.vertex_count;
    res.stats.elementary_intervals = static_cast<int>(Q);
    int worst = 0;
    for (const auto& E : res.ideal.elementary) {
        int cnt = 0;
        for (std::size_t i = 0; i + 1 < res.trajectory.pieces.size(); ++i) {
            const double t = res.trajectory.pieces[i].span.hi;
            if (t >= E.lo - kTimeTol && t < E.hi - kTimeTol) ++cnt;
        }
        worst = std::max(worst, cnt);
    }
    res.stats.max_vertices_per_elementary = worst;
    return res;
}

} // namespace ctraj
