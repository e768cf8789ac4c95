#include "ctraj/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace ctraj {

namespace {

// Positions straight from the raw vertices; deliberately not routed through
// the TrajectorySet interpolation helpers.
struct RawSampler {
    const TrajectorySet& set;

    void positions_at(double t, std::vector<double>& out) const {
        const auto& times = set.grid().times();
        std::size_t k = 0;
        while (k + 2 < times.size() && t > times[k + 1]) ++k;
        const double w = (t - times[k]) / (times[k + 1] - times[k]);
        const int d = set.dim();
        out.resize(static_cast<std::size_t>(set.size() * d));
        for (int e = 0; e < set.size(); ++e) {
            const auto p = set.trajectory(e).vertex(k);
            const auto q = set.trajectory(e).vertex(k + 1);
            for (int j = 0; j < d; ++j)
                out[static_cast<std::size_t>(e * d + j)] = p[j] + w * (q[j] - p[j]);
        }
    }
};

double sq_dist(const std::vector<double>& pos, int d, int a, int b) {
    double acc = 0.0;
    for (int j = 0; j < d; ++j) {
        const double diff = pos[static_cast<std::size_t>(a * d + j)] - pos[static_cast<std::size_t>(b * d + j)];
        acc += diff * diff;
    }
    return acc;
}

double measure_at(const std::vector<double>& pos, int d, int n, int e, CentralityMeasure m) {
    double acc = 0.0;
    for (int other = 0; other < n; ++other) {
        if (other == e) continue;
        const double sq = sq_dist(pos, d, e, other);
        if (m == CentralityMeasure::farthest)
            acc = std::max(acc, sq);
        else
            acc += sq;
    }
    return m == CentralityMeasure::farthest ? std::sqrt(acc) : acc;
}

std::vector<int> component_labels(const std::vector<double>& pos, int d, int n, double eps) {
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
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if (sq_dist(pos, d, a, b) <= thr) {
                const int ra = find(a), rb = find(b);
                if (ra != rb) parent[static_cast<std::size_t>(std::max(ra, rb))] = std::min(ra, rb);
            }
    std::vector<int> labels(static_cast<std::size_t>(n));
    for (int e = 0; e < n; ++e) labels[static_cast<std::size_t>(e)] = find(e);
    return labels;
}

} // namespace

OracleResult oracle_cost(const TrajectorySet& set, double eps, const OracleConfig& cfg) {
    if (cfg.samples < 2) throw std::invalid_argument("oracle needs at least two samples");
    if (eps < 0.0) throw std::invalid_argument("epsilon must be nonnegative");

    const int n = set.size();
    const int d = set.dim();
    const int m = cfg.samples;
    const Interval span = set.grid().span();
    const double step = span.length() / static_cast<double>(m - 1);
    const bool use_max = cfg.objective == Aggregation::maximum;

    RawSampler sampler{set};
    std::vector<double> pos_lo, pos_hi;
    sampler.positions_at(span.lo, pos_hi);

    // Stage s covers [t_s, t_{s+1}]; state = entity followed during the stage.
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> value(static_cast<std::size_t>(n));
    std::vector<double> g_lo(static_cast<std::size_t>(n)), g_hi(static_cast<std::size_t>(n));
    std::vector<std::vector<int>> choice(static_cast<std::size_t>(m - 1), std::vector<int>(static_cast<std::size_t>(n), -1));

    for (int e = 0; e < n; ++e) g_hi[static_cast<std::size_t>(e)] = measure_at(pos_hi, d, n, e, cfg.measure);
    std::fill(value.begin(), value.end(), use_max ? -inf : 0.0);

    for (int s = 0; s < m - 1; ++s) {
        const double t_lo = span.lo + step * s;
        const double t_hi = (s == m - 2) ? span.hi : span.lo + step * (s + 1);
        pos_lo.swap(pos_hi);
        g_lo.swap(g_hi);
        sampler.positions_at(t_hi, pos_hi);
        for (int e = 0; e < n; ++e) g_hi[static_cast<std::size_t>(e)] = measure_at(pos_hi, d, n, e, cfg.measure);

        // Switching happens at t_lo; components at the earlier sample gate it.
        const auto labels = component_labels(pos_lo, d, n, eps);

        std::vector<double> next(static_cast<std::size_t>(n), inf);
        for (int e = 0; e < n; ++e) {
            double stage;
            if (use_max) {
                stage = std::max(g_lo[static_cast<std::size_t>(e)], g_hi[static_cast<std::size_t>(e)]);
            } else {
                double lo = g_lo[static_cast<std::size_t>(e)], hi = g_hi[static_cast<std::size_t>(e)];
                if (cfg.objective == Aggregation::integral_of_squares) {
                    lo *= lo;
                    hi *= hi;
                }
                stage = 0.5 * (lo + hi) * (t_hi - t_lo);
            }
            double best = inf;
            int best_prev = -1;
            for (int prev = 0; prev < n; ++prev) {
                if (s > 0 && value[static_cast<std::size_t>(prev)] == inf) continue;
                if (prev != e && labels[static_cast<std::size_t>(prev)] != labels[static_cast<std::size_t>(e)]) continue;
                const double base = (s == 0) ? (use_max ? -inf : 0.0) : value[static_cast<std::size_t>(prev)];
                const double cand = use_max ? std::max(base, stage) : base + stage;
                if (cand < best) {
                    best = cand;
                    best_prev = prev;
                }
                if (s == 0) break; // the first stage has no predecessor constraint
            }
            next[static_cast<std::size_t>(e)] = best;
            choice[static_cast<std::size_t>(s)][static_cast<std::size_t>(e)] = best_prev;
        }
        value = std::move(next);
    }

    OracleResult out;
    int best_e = 0;
    for (int e = 1; e < n; ++e)
        if (value[static_cast<std::size_t>(e)] < value[static_cast<std::size_t>(best_e)]) best_e = e;
    out.cost = value[static_cast<std::size_t>(best_e)];
    out.assignment.assign(static_cast<std::size_t>(m - 1), -1);
    int cur = best_e;
    for (int s = m - 2; s >= 0; --s) {
        out.assignment[static_cast<std::size_t>(s)] = cur;
        cur = choice[static_cast<std::size_t>(s)][static_cast<std::size_t>(cur)];
        if (s == 0) break;
    }
    return out;
}

TrajectorySet zigzag_adversary(int m, double eps) {
    if (m < 2) throw std::invalid_argument("zigzag adversary needs m >= 2");
    if (!(eps > 0.0)) throw std::invalid_argument("zigzag adversary needs a positive band spacing");

    const double delta = 0.8 * eps;          // spacing of the horizontal band
    const double band_top = (m - 1) * delta; // band occupies [0, band_top]
    const double z_lo = -0.6 * delta;
    const double z_hi = band_top + 0.6 * delta;
    const int legs = 2 * m - 1; // odd: m-1 peaks and m-1 valleys

    // Midline Z zigzags across the band; 2Z splits into a convex chain C
    // (absorbing the valley kinks) plus a concave chain D (the peak kinks),
    // each with exactly m segments. Lifting C up and D down by the same
    // offset turns them into the upper/lower envelope lines while keeping
    // (U + L)/2 = Z.
    const double leg_dt = 1.0 / legs;
    const double leg_slope = (z_hi - z_lo) / leg_dt;

    std::vector<std::pair<double, double>> c_lines, d_lines; // (slope, intercept)
    double cs = leg_slope, ds = leg_slope; // chain slopes; cs + ds == 2 * Z'
    double cv = z_lo, dv = z_lo;           // chain values at the current junction
    c_lines.emplace_back(cs, cv);
    d_lines.emplace_back(ds, dv);
    for (int i = 1; i < legs; ++i) {
        const double t = i * leg_dt;
        cv += cs * leg_dt;
        dv += ds * leg_dt;
        const double z_prev = (i - 1) % 2 == 0 ? leg_slope : -leg_slope;
        const double z_next = i % 2 == 0 ? leg_slope : -leg_slope;
        const double dz = 2.0 * (z_next - z_prev);
        if (dz > 0.0) {
            cs += dz;
            c_lines.emplace_back(cs, cv - cs * t);
        } else {
            ds += dz;
            d_lines.emplace_back(ds, dv - ds * t);
        }
    }

    double c_min = cv, d_max = dv;
    for (const auto& [s, b] : c_lines) c_min = std::min({c_min, b, s + b});
    for (const auto& [s, b] : d_lines) d_max = std::max({d_max, b, s + b});
    const double margin = std::max(1.0, 4.0 * (z_hi - z_lo));
    const double off = std::max(band_top + margin - c_min, d_max + margin);

    std::vector<Trajectory> trajs;
    auto add_line = [&](const std::string& name, double slope, double intercept) {
        Trajectory tr;
        tr.name = name;
        tr.dim = 1;
        tr.coords = {intercept, slope + intercept}; // values at t = 0 and t = 1
        trajs.push_back(std::move(tr));
    };
    for (std::size_t i = 0; i < c_lines.size(); ++i)
        add_line("u" + std::to_string(i), c_lines[i].first, c_lines[i].second + off);
    for (std::size_t i = 0; i < d_lines.size(); ++i)
        add_line("l" + std::to_string(i), d_lines[i].first, d_lines[i].second - off);
    for (int j = 0; j < m; ++j) add_line("h" + std::to_string(j), 0.0, j * delta);

    if (static_cast<int>(trajs.size()) != 3 * m) throw std::logic_error("zigzag construction lost a line");
    return TrajectorySet(TimeGrid({0.0, 1.0}), std::move(trajs));
}

TrajectorySet random_instance(int n, int tau, int dim, std::uint64_t seed) {
    if (n < 1 || tau < 1 || dim < 1) throw std::invalid_argument("random_instance needs n, tau, dim >= 1");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> start(0.0, 2.0);
    std::normal_distribution<double> step(0.0, 0.7);

    std::vector<double> times(static_cast<std::size_t>(tau) + 1);
    std::iota(times.begin(), times.end(), 0.0);

    std::vector<Trajectory> trajs;
    trajs.reserve(static_cast<std::size_t>(n));
    for (int e = 0; e < n; ++e) {
        Trajectory tr;
        tr.name = "e" + std::to_string(e);
        tr.dim = dim;
        tr.coords.resize(static_cast<std::size_t>((tau + 1) * dim));
        for (int j = 0; j < dim; ++j) tr.coords[static_cast<std::size_t>(j)] = start(rng);
        for (int k = 1; k <= tau; ++k) {
            for (int j = 0; j < dim; ++j) {
                const double d = std::clamp(step(rng), -1.5, 1.5);
                tr.coords[static_cast<std::size_t>(k * dim + j)] =
                    tr.coords[static_cast<std::size_t>((k - 1) * dim + j)] + d;
            }
        }
        trajs.push_back(std::move(tr));
    }
    return TrajectorySet(TimeGrid(std::move(times)), std::move(trajs));
}

} // namespace ctraj
