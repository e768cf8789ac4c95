#include "ctraj/central_rd.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ctraj {

PiecewiseFunction farthest_profile(const TrajectorySet& set, EntityId sigma) {
    PiecewiseFunction out;
    const int n = set.size();
    for (std::size_t k = 0; k < set.grid().segments(); ++k) {
        const Interval seg = set.grid().segment(k);
        if (n == 1) {
            PiecewiseFunction zero;
            zero.pieces.push_back(FunctionPiece::make_linear(sigma, seg, 0.0, 0.0));
            out.append(zero);
            continue;
        }
        std::vector<PiecewiseFunction> family;
        family.reserve(static_cast<std::size_t>(n) - 1);
        for (EntityId psi = 0; psi < n; ++psi) {
            if (psi == sigma) continue;
            PiecewiseFunction f;
            f.pieces.push_back(FunctionPiece::make_sqrt_quadratic(psi, seg, pairwise_sq_dist(set, sigma, psi, k)));
            family.push_back(std::move(f));
        }
        out.append(upper_envelope(family, seg));
    }
    return out;
}

PiecewiseFunction sum_sq_profile(const TrajectorySet& set, EntityId sigma) {
    PiecewiseFunction out;
    for (std::size_t k = 0; k < set.grid().segments(); ++k) {
        const Interval seg = set.grid().segment(k);
        QuadraticPoly total;
        for (EntityId psi = 0; psi < set.size(); ++psi) {
            if (psi == sigma) continue;
            const QuadraticPoly q = pairwise_sq_dist(set, sigma, psi, k);
            total.a += q.a;
            total.b += q.b;
            total.c += q.c;
        }
        PiecewiseFunction f;
        f.pieces.push_back(FunctionPiece::make_quadratic(sigma, seg, total));
        out.append(f);
    }
    return out;
}

CentralRdResult central_rd(const TrajectorySet& set, double eps, CentralityMeasure measure, Aggregation agg) {
    if (eps < 0.0) throw std::invalid_argument("epsilon must be nonnegative");

    const int n = set.size();
    std::vector<PiecewiseFunction> profiles(static_cast<std::size_t>(n));
    for (EntityId e = 0; e < n; ++e)
        profiles[static_cast<std::size_t>(e)] =
            measure == CentralityMeasure::farthest ? farthest_profile(set, e) : sum_sq_profile(set, e);

    ReebGraph graph = build_reeb(set, eps);

    std::vector<std::vector<double>> cuts(static_cast<std::size_t>(n));
    for (EntityId e = 0; e < n; ++e) {
        auto& c = cuts[static_cast<std::size_t>(e)];
        for (const auto& p : profiles[static_cast<std::size_t>(e)].pieces) c.push_back(p.span.lo);
        for (double t : set.grid().times()) c.push_back(t);
        std::sort(c.begin(), c.end());
        c.erase(std::unique(c.begin(), c.end(), [](double x, double y) { return std::abs(x - y) <= kTimeTol; }),
                c.end());
    }
    graph = subdivide(graph, cuts);
    graph = weigh(graph, profiles, agg);

    const TrajectoidPath path = min_weight_path(graph, agg);

    CentralRdResult res;
    res.trajectory = assemble_trajectoid(set, eps, graph, path);
    res.trajectory.cost = path.cost;

    res.stats.reeb_vertices = static_cast<int>(graph.vertices.size());
    res.stats.reeb_edges = static_cast<int>(graph.edges.size());
    long pieces = 0;
    for (const auto& p : profiles) pieces += static_cast<long>(p.pieces.size());
    res.stats.envelope_pieces = pieces;
    res.stats.vertex_count = res.trajectory.vertex_count;
    res.graph = std::move(graph);
    return res;
}

ProfileIntersectionAudit profile_intersections_audit(const TrajectorySet& set) {
    ProfileIntersectionAudit audit;
    const int n = set.size();
    std::vector<PiecewiseFunction> profiles(static_cast<std::size_t>(n));
    for (EntityId e = 0; e < n; ++e) profiles[static_cast<std::size_t>(e)] = farthest_profile(set, e);
    for (EntityId a = 0; a < n; ++a) {
        for (EntityId b = a + 1; b < n; ++b) {
            std::vector<double> times;
            bool degenerate = false;
            for (const auto& pa : profiles[static_cast<std::size_t>(a)].pieces) {
                for (const auto& pb : profiles[static_cast<std::size_t>(b)].pieces) {
                    const double lo = std::max(pa.span.lo, pb.span.lo);
                    const double hi = std::min(pa.span.hi, pb.span.hi);
                    if (hi - lo <= kTimeTol) continue;
                    const PieceIntersections xs = intersect_pieces(pa, pb);
                    if (xs.identical) degenerate = true;
                    times.insert(times.end(), xs.times.begin(), xs.times.end());
                }
            }
            std::sort(times.begin(), times.end());
            times.erase(std::unique(times.begin(), times.end(),
                                    [](double x, double y) { return std::abs(x - y) <= kTimeTol; }),
                        times.end());
            audit.isolated += static_cast<long>(times.size());
            if (degenerate) ++audit.degenerate_pairs;
        }
    }
    return audit;
}

} // namespace ctraj
