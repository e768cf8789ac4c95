#include "ctraj/central_1d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ctraj {

IdealTrajectory ideal_trajectory(const TrajectorySet& set) {
    if (set.dim() != 1) throw std::invalid_argument("ideal trajectory requires one-dimensional entities");
    IdealTrajectory out;
    const int n = set.size();
    for (std::size_t k = 0; k < set.grid().segments(); ++k) {
        const Interval seg = set.grid().segment(k);
        std::vector<PiecewiseFunction> lines(static_cast<std::size_t>(n));
        for (EntityId e = 0; e < n; ++e) {
            double s, c;
            set.segment_motion(e, k, 0, s, c);
            lines[static_cast<std::size_t>(e)].pieces.push_back(FunctionPiece::make_linear(e, seg, s, c));
        }
        PiecewiseFunction up = upper_envelope(lines, seg);
        PiecewiseFunction low = lower_envelope(lines, seg);

        std::vector<double> cuts{seg.lo, seg.hi};
        for (const auto& p : up.pieces) cuts.push_back(p.span.lo);
        for (const auto& p : low.pieces) cuts.push_back(p.span.lo);
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end(),
                               [](double x, double y) { return std::abs(x - y) <= kBreakTol; }),
                   cuts.end());
        cuts.front() = seg.lo;
        cuts.back() = seg.hi;

        PiecewiseFunction ideal_k;
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            const Interval sub{cuts[i], cuts[i + 1]};
            const FunctionPiece& pu = up.piece_at(sub.mid());
            const FunctionPiece& pl = low.piece_at(sub.mid());
            ideal_k.pieces.push_back(
                FunctionPiece::make_linear(-1, sub, 0.5 * (pu.b + pl.b), 0.5 * (pu.c + pl.c)));
            out.elementary.push_back(sub);
        }
        out.ideal.append(ideal_k);
        out.upper.append(up);
        out.lower.append(low);
    }
    return out;
}

std::vector<PiecewiseFunction> reduced_cost_functions(const TrajectorySet& set, const IdealTrajectory& ideal) {
    const int n = set.size();
    std::vector<PiecewiseFunction> fs(static_cast<std::size_t>(n));
    for (const auto& ip : ideal.ideal.pieces) {
        const Interval E = ip.span;
        const std::size_t k = set.grid().segment_index(E.mid());
        for (EntityId e = 0; e < n; ++e) {
            double s, c;
            set.segment_motion(e, k, 0, s, c);
            PiecewiseFunction piece;
            piece.pieces.push_back(FunctionPiece::make_abs_linear(e, E, s - ip.b, c - ip.c));
            fs[static_cast<std::size_t>(e)].append(piece);
        }
    }
    return fs;
}

std::vector<EquidistantBreakpoint> type2_breakpoints(const TrajectorySet& set, const IdealTrajectory& ideal,
                                                     const ReebGraph& weighted) {
    std::vector<EquidistantBreakpoint> out;
    for (const auto& edge : weighted.edges) {
        if (edge.span.length() <= kTimeTol || edge.members.size() < 2) continue;
        for (std::size_t i = 0; i < edge.members.size(); ++i) {
            for (std::size_t j = i + 1; j < edge.members.size(); ++j) {
                const EntityId a = edge.members[i];
                const EntityId b = edge.members[j];
                for (const auto& ip : ideal.ideal.pieces) {
                    const double lo = std::max(edge.span.lo, ip.span.lo);
                    const double hi = std::min(edge.span.hi, ip.span.hi);
                    if (hi - lo <= kTimeTol) continue;
                    const std::size_t k = set.grid().segment_index(0.5 * (lo + hi));
                    double sa, ca, sb, cb;
                    set.segment_motion(a, k, 0, sa, ca);
                    set.segment_motion(b, k, 0, sb, cb);
                    // (a - I) + (b - I) = 0
                    const double s = sa + sb - 2.0 * ip.b;
                    const double c = ca + cb - 2.0 * ip.c;
                    if (std::abs(s) <= 1e-14 && std::abs(c) <= 1e-12) continue; // mirror pair, no isolated time
                    if (std::abs(s) <= 1e-14) continue;
                    const double t = -c / s;
                    if (t <= lo + kTimeTol || t >= hi - kTimeTol) continue;
                    // Keep only points on the component envelope.
                    const double fa = std::abs(sa * t + ca - ip.eval(t));
                    const double env = edge.envelope.empty() ? fa : edge.envelope.eval(t);
                    if (std::abs(fa - env) > 1e-9 * (1.0 + std::abs(env))) continue;
                    out.push_back({t, a, b});
                }
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const EquidistantBreakpoint& x, const EquidistantBreakpoint& y) {
        return std::tie(x.t, x.a, x.b) < std::tie(y.t, y.a, y.b);
    });
    out.erase(std::unique(out.begin(), out.end(),
                          [](const EquidistantBreakpoint& x, const EquidistantBreakpoint& y) {
                              return x.a == y.a && x.b == y.b && std::abs(x.t - y.t) <= kTimeTol;
                          }),
              out.end());
    return out;
}

double integrate_farthest_along(const TrajectorySet& set, const IdealTrajectory& ideal,
                                const CentralTrajectory& ct) {
    double acc = 0.0;
    for (const auto& piece : ct.pieces) {
        for (const auto& E : ideal.elementary) {
            const double lo = std::max(piece.span.lo, E.lo);
            const double hi = std::min(piece.span.hi, E.hi);
            if (hi - lo <= 0.0) continue;
            const FunctionPiece& up = ideal.upper.piece_at(0.5 * (lo + hi));
            const FunctionPiece& low = ideal.lower.piece_at(0.5 * (lo + hi));
            const std::size_t k = set.grid().segment_index(0.5 * (lo + hi));
            double s, c;
            set.segment_motion(piece.entity, k, 0, s, c);
            // d1 = U - c and d2 = c - L are linear; integrate their max.
            const double s1 = up.b - s, c1 = up.c - c;
            const double s2 = s - low.b, c2 = c - low.c;
            auto seg_int = [](double sl, double ic, double x, double y) {
                return 0.5 * sl * (y * y - x * x) + ic * (y - x);
            };
            const double ds = s1 - s2, dc = c1 - c2;
            double cross = std::numeric_limits<double>::infinity();
            if (ds != 0.0) cross = -dc / ds;
            auto max_int = [&](double x, double y) {
                if (y <= x) return 0.0;
                const double mid = 0.5 * (x + y);
                const bool first = s1 * mid + c1 >= s2 * mid + c2;
                return first ? seg_int(s1, c1, x, y) : seg_int(s2, c2, x, y);
            };
            if (cross > lo && cross < hi)
                acc += max_int(lo, cross) + max_int(cross, hi);
            else
                acc += max_int(lo, hi);
        }
    }
    return acc;
}

Central1dResult central_1d(const TrajectorySet& set, double eps) {
    if (eps < 0.0) throw std::invalid_argument("epsilon must be nonnegative");
    if (set.dim() != 1) throw std::invalid_argument("central_1d requires one-dimensional entities");

    Central1dResult res;
    res.ideal = ideal_trajectory(set);
    const auto fs = reduced_cost_functions(set, res.ideal);

    ReebGraph graph = build_reeb(set, eps);

    std::vector<double> boundary_times;
    for (const auto& E : res.ideal.elementary) boundary_times.push_back(E.hi);
    if (!boundary_times.empty()) boundary_times.pop_back();
    std::vector<std::vector<double>> cuts(static_cast<std::size_t>(set.size()), boundary_times);
    graph = subdivide(graph, cuts);
    graph = weigh(graph, fs, Aggregation::integral);

    const TrajectoidPath path = min_weight_path(graph, Aggregation::integral);
    res.trajectory = assemble_trajectoid(set, eps, graph, path);
    res.trajectory.cost_reduced = path.cost;
    res.trajectory.cost = integrate_farthest_along(set, res.ideal, res.trajectory);

    res.type2 = type2_breakpoints(set, res.ideal, graph);

    res.stats.reeb_vertices = static_cast<int>(graph.vertices.size());
    res.stats.reeb_edges = static_cast<int>(graph.edges.size());
    long fpieces = 0;
    for (const auto& f : fs) fpieces += static_cast<long>(f.pieces.size());
    res.stats.envelope_pieces = fpieces;
    res.stats.vertex_count = res.trajectory.vertex_count;
    res.stats.elementary_intervals = static_cast<int>(res.ideal.elementary.size());
    res.stats.type2_breakpoints = static_cast<long>(res.type2.size());
    long worst = 0;
    for (const auto& E : res.ideal.elementary) {
        long cnt = 0;
        for (const auto& bp : res.type2)
            if (bp.t >= E.lo - kTimeTol && bp.t <= E.hi + kTimeTol) ++cnt;
        worst = std::max(worst, cnt);
    }
    res.stats.max_type2_per_elementary = worst;
    res.graph = std::move(graph);
    return res;
}

} // namespace ctraj
