#include "ctraj/envelope.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace ctraj {

namespace {

double value_tol(double a, double b) {
    return 1e-12 * (1.0 + std::abs(a) + std::abs(b));
}

// Signed polynomial of degree <= 2.
struct Poly2 {
    double a = 0.0, b = 0.0, c = 0.0;
    double eval(double t) const { return (a * t + b) * t + c; }
    Poly2 minus(const Poly2& o) const { return {a - o.a, b - o.b, c - o.c}; }
    bool near_zero() const {
        const double s = std::max({std::abs(a), std::abs(b), std::abs(c)});
        return s <= 1e-12;
    }
};

// Polynomial form of a piece on a region where any abs() has constant sign.
Poly2 poly_on_region(const FunctionPiece& p, double lo, double hi) {
    switch (p.kind) {
        case PieceKind::linear: return {0.0, p.b, p.c};
        case PieceKind::quadratic: return {p.a, p.b, p.c};
        case PieceKind::abs_linear: {
            const double mid = 0.5 * (lo + hi);
            const double v = p.b * mid + p.c;
            return v >= 0.0 ? Poly2{0.0, p.b, p.c} : Poly2{0.0, -p.b, -p.c};
        }
        case PieceKind::sqrt_quadratic: break;
    }
    throw std::logic_error("sqrt piece has no polynomial form");
}

// Interior kink of an |linear| piece, if any.
bool abs_kink(const FunctionPiece& p, double lo, double hi, double& t) {
    if (p.kind != PieceKind::abs_linear || p.b == 0.0) return false;
    const double r = -p.c / p.b;
    if (r <= lo + kBreakTol || r >= hi - kBreakTol) return false;
    t = r;
    return true;
}

void append_root(std::vector<double>& roots, double r, double lo, double hi) {
    if (r > lo + kBreakTol && r < hi - kBreakTol) roots.push_back(r);
}

} // namespace

double FunctionPiece::eval(double t) const {
    switch (kind) {
        case PieceKind::linear: return b * t + c;
        case PieceKind::abs_linear: return std::abs(b * t + c);
        case PieceKind::quadratic: return (a * t + b) * t + c;
        case PieceKind::sqrt_quadratic: return std::sqrt(std::max(0.0, (a * t + b) * t + c));
    }
    return 0.0;
}

PieceIntersections intersect_pieces(const FunctionPiece& f, const FunctionPiece& g) {
    const double lo = std::max(f.span.lo, g.span.lo);
    const double hi = std::min(f.span.hi, g.span.hi);
    if (hi < lo) throw std::invalid_argument("intersect_pieces: spans do not overlap");

    PieceIntersections out;
    if (hi - lo <= kBreakTol) return out;

    const bool fs = f.kind == PieceKind::sqrt_quadratic;
    const bool gs = g.kind == PieceKind::sqrt_quadratic;

    if (fs && gs) {
        const Poly2 d{f.a - g.a, f.b - g.b, f.c - g.c};
        if (d.near_zero()) {
            out.identical = true;
            return out;
        }
        const QuadraticRoots r = solve_quadratic(d.a, d.b, d.c);
        if (r.count >= 1) append_root(out.times, r.r0, lo, hi);
        if (r.count == 2) append_root(out.times, r.r1, lo, hi);
        std::sort(out.times.begin(), out.times.end());
        return out;
    }

    if (fs || gs) {
        // sqrt(q) against a linear form L: roots of q - L^2 with L >= 0.
        const FunctionPiece& s = fs ? f : g;
        const FunctionPiece& other = fs ? g : f;
        if (other.kind == PieceKind::quadratic)
            throw std::invalid_argument("intersect_pieces: quadratic vs sqrt_quadratic is unsupported");
        // Split at the abs kink so each region is plainly linear.
        std::vector<double> cuts{lo, hi};
        double kt;
        if (abs_kink(other, lo, hi, kt)) cuts.insert(cuts.begin() + 1, kt);
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            const Poly2 L = poly_on_region(other, cuts[i], cuts[i + 1]);
            const Poly2 d{s.a - L.b * L.b, s.b - 2.0 * L.b * L.c, s.c - L.c * L.c};
            const QuadraticRoots r = solve_quadratic(d.a, d.b, d.c);
            const double rs[2] = {r.r0, r.r1};
            for (int j = 0; j < r.count; ++j) {
                const double t = rs[j];
                if (t <= cuts[i] - kBreakTol || t >= cuts[i + 1] + kBreakTol) continue;
                if (L.eval(t) < -1e-9) continue; // negative branch, not a real meeting
                append_root(out.times, t, lo, hi);
            }
        }
        std::sort(out.times.begin(), out.times.end());
        out.times.erase(std::unique(out.times.begin(), out.times.end(),
                                    [](double x, double y) { return std::abs(x - y) <= kBreakTol; }),
                        out.times.end());
        return out;
    }

    // Both polynomial-representable. Split at abs kinks, then compare per region.
    std::vector<double> cuts{lo, hi};
    double kt;
    if (abs_kink(f, lo, hi, kt)) cuts.push_back(kt);
    if (abs_kink(g, lo, hi, kt)) cuts.push_back(kt);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(),
                           [](double x, double y) { return std::abs(x - y) <= kBreakTol; }),
               cuts.end());

    std::vector<char> region_identical(cuts.size() - 1, 0);
    bool all_identical = true;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const Poly2 d = poly_on_region(f, cuts[i], cuts[i + 1]).minus(poly_on_region(g, cuts[i], cuts[i + 1]));
        if (d.near_zero()) {
            region_identical[i] = 1;
            continue;
        }
        all_identical = false;
        const QuadraticRoots r = solve_quadratic(d.a, d.b, d.c);
        const double rs[2] = {r.r0, r.r1};
        for (int j = 0; j < r.count; ++j) {
            const double t = rs[j];
            if (t <= cuts[i] - kBreakTol || t >= cuts[i + 1] + kBreakTol) continue;
            append_root(out.times, t, lo, hi);
        }
    }
    if (all_identical) {
        out.identical = true;
        out.times.clear();
        return out;
    }
    // A region where the two agree ends in a point where they still agree;
    // report that boundary as a meeting time.
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (!region_identical[i]) continue;
        if (i > 0 && !region_identical[i - 1]) append_root(out.times, cuts[i], lo, hi);
        if (i + 2 < cuts.size() && !region_identical[i + 1]) append_root(out.times, cuts[i + 1], lo, hi);
    }
    std::sort(out.times.begin(), out.times.end());
    out.times.erase(std::unique(out.times.begin(), out.times.end(),
                                [](double x, double y) { return std::abs(x - y) <= kBreakTol; }),
                    out.times.end());
    return out;
}

Interval PiecewiseFunction::span() const {
    if (pieces.empty()) throw std::logic_error("empty piecewise function has no span");
    return {pieces.front().span.lo, pieces.back().span.hi};
}

const FunctionPiece& PiecewiseFunction::piece_at(double t) const {
    if (pieces.empty()) throw std::logic_error("empty piecewise function");
    auto it = std::upper_bound(pieces.begin(), pieces.end(), t,
                               [](double x, const FunctionPiece& p) { return x < p.span.lo; });
    if (it != pieces.begin()) --it;
    // Prefer the piece whose closed span contains t.
    while (it + 1 != pieces.end() && t > it->span.hi) ++it;
    return *it;
}

double PiecewiseFunction::eval(double t) const { return piece_at(t).eval(t); }

EntityId PiecewiseFunction::owner_at(double t) const { return piece_at(t).owner; }

PiecewiseFunction PiecewiseFunction::restrict_to(Interval sub) const {
    const Interval full = span();
    if (sub.lo < full.lo - 1e-9 || sub.hi > full.hi + 1e-9)
        throw std::invalid_argument("restriction target escapes the function span");
    PiecewiseFunction out;
    if (sub.length() <= kBreakTol) {
        FunctionPiece p = piece_at(sub.lo);
        p.span = sub;
        out.pieces.push_back(p);
        return out;
    }
    for (const auto& p : pieces) {
        if (p.span.hi <= sub.lo + kBreakTol || p.span.lo >= sub.hi - kBreakTol) continue;
        FunctionPiece q = p;
        q.span.lo = std::max(p.span.lo, sub.lo);
        q.span.hi = std::min(p.span.hi, sub.hi);
        out.pieces.push_back(q);
    }
    if (out.pieces.empty()) throw std::logic_error("restriction produced no pieces");
    out.pieces.front().span.lo = sub.lo;
    out.pieces.back().span.hi = sub.hi;
    for (const auto& bp : breakpoints)
        if (bp.t > sub.lo + kBreakTol && bp.t < sub.hi - kBreakTol) out.breakpoints.push_back(bp);
    return out;
}

void PiecewiseFunction::append(const PiecewiseFunction& tail) {
    if (tail.pieces.empty()) return;
    if (pieces.empty()) {
        *this = tail;
        return;
    }
    const double joint = span().hi;
    if (std::abs(tail.span().lo - joint) > 1e-9)
        throw std::invalid_argument("appended function does not start at the current end");
    const EntityId left = pieces.back().owner;
    const EntityId right = tail.pieces.front().owner;
    breakpoints.push_back({joint, left, right,
                           left == right ? BreakCause::piece_boundary : BreakCause::exchange});
    pieces.insert(pieces.end(), tail.pieces.begin(), tail.pieces.end());
    breakpoints.insert(breakpoints.end(), tail.breakpoints.begin(), tail.breakpoints.end());
}

namespace {

const FunctionPiece* covering_piece(const PiecewiseFunction& f, double lo, double hi) {
    const double mid = 0.5 * (lo + hi);
    return &f.piece_at(mid);
}

PiecewiseFunction merge_two(const PiecewiseFunction& A, const PiecewiseFunction& B, bool lower) {
    const Interval span = A.span();
    PiecewiseFunction out;

    if (span.length() <= kBreakTol) {
        const FunctionPiece& pa = A.pieces.front();
        const FunctionPiece& pb = B.pieces.front();
        const double va = pa.eval(span.lo), vb = pb.eval(span.lo);
        bool a_wins;
        if (std::abs(va - vb) <= value_tol(va, vb))
            a_wins = pa.owner <= pb.owner;
        else
            a_wins = lower ? (va < vb) : (va > vb);
        FunctionPiece w = a_wins ? pa : pb;
        w.span = span;
        out.pieces.push_back(w);
        return out;
    }

    std::vector<double> cuts{span.lo, span.hi};
    for (const auto& p : A.pieces) {
        if (p.span.lo > span.lo + kBreakTol) cuts.push_back(p.span.lo);
        double kt;
        if (abs_kink(p, p.span.lo, p.span.hi, kt)) cuts.push_back(kt);
    }
    for (const auto& p : B.pieces) {
        if (p.span.lo > span.lo + kBreakTol) cuts.push_back(p.span.lo);
        double kt;
        if (abs_kink(p, p.span.lo, p.span.hi, kt)) cuts.push_back(kt);
    }
    for (const auto& pa : A.pieces) {
        for (const auto& pb : B.pieces) {
            const double lo = std::max(pa.span.lo, pb.span.lo);
            const double hi = std::min(pa.span.hi, pb.span.hi);
            if (hi - lo <= kBreakTol) continue;
            const PieceIntersections xs = intersect_pieces(pa, pb);
            for (double t : xs.times)
                if (t > lo + kBreakTol && t < hi - kBreakTol) cuts.push_back(t);
        }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(),
                           [](double x, double y) { return std::abs(x - y) <= kBreakTol; }),
               cuts.end());
    cuts.front() = span.lo;
    cuts.back() = span.hi;

    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double lo = cuts[i], hi = cuts[i + 1];
        const FunctionPiece* pa = covering_piece(A, lo, hi);
        const FunctionPiece* pb = covering_piece(B, lo, hi);
        const double samples[3] = {0.5 * (lo + hi), lo + 0.25 * (hi - lo), lo + 0.75 * (hi - lo)};
        bool a_wins = pa->owner <= pb->owner; // holds if every sample ties
        for (double s : samples) {
            const double va = pa->eval(s), vb = pb->eval(s);
            if (std::abs(va - vb) <= value_tol(va, vb)) continue;
            a_wins = lower ? (va < vb) : (va > vb);
            break;
        }
        const FunctionPiece* w = a_wins ? pa : pb;
        if (!out.pieces.empty()) {
            FunctionPiece& last = out.pieces.back();
            if (last.owner == w->owner && last.kind == w->kind && last.a == w->a && last.b == w->b &&
                last.c == w->c) {
                last.span.hi = hi;
                continue;
            }
        }
        FunctionPiece np = *w;
        np.span = {lo, hi};
        out.pieces.push_back(np);
    }

    for (std::size_t i = 0; i + 1 < out.pieces.size(); ++i) {
        const EntityId lown = out.pieces[i].owner;
        const EntityId rown = out.pieces[i + 1].owner;
        out.breakpoints.push_back({out.pieces[i].span.hi, lown, rown,
                                   lown == rown ? BreakCause::piece_boundary : BreakCause::exchange});
    }
    return out;
}

PiecewiseFunction envelope_of(std::span<const PiecewiseFunction> fs, Interval span, bool lower) {
    if (fs.empty()) throw std::invalid_argument("envelope of an empty family");
    std::vector<PiecewiseFunction> work;
    work.reserve(fs.size());
    for (const auto& f : fs) work.push_back(f.restrict_to(span));
    while (work.size() > 1) {
        std::vector<PiecewiseFunction> next;
        next.reserve((work.size() + 1) / 2);
        for (std::size_t i = 0; i + 1 < work.size(); i += 2) next.push_back(merge_two(work[i], work[i + 1], lower));
        if (work.size() % 2 == 1) next.push_back(std::move(work.back()));
        work = std::move(next);
    }
    return std::move(work.front());
}

} // namespace

PiecewiseFunction lower_envelope(std::span<const PiecewiseFunction> fs, Interval span) {
    return envelope_of(fs, span, true);
}

PiecewiseFunction upper_envelope(std::span<const PiecewiseFunction> fs, Interval span) {
    return envelope_of(fs, span, false);
}

namespace {

double poly_integral(double a, double b, double c, double lo, double hi) {
    auto F = [&](double t) { return ((a / 3.0 * t + b / 2.0) * t + c) * t; };
    return F(hi) - F(lo);
}

double quartic_integral(double a4, double a3, double a2, double a1, double a0, double lo, double hi) {
    auto F = [&](double t) {
        return ((((a4 / 5.0 * t + a3 / 4.0) * t + a2 / 3.0) * t + a1 / 2.0) * t + a0) * t;
    };
    return F(hi) - F(lo);
}

// Antiderivative of sqrt(a*t^2 + b*t + c) for a > 0, evaluated through the
// shifted variable u = t + b/(2a). The log term is rewritten via
// (sa*u + core)(core - sa*u) = k when u < 0 to dodge cancellation.
double sqrt_antiderivative(double a, double b, double c, double t) {
    const double sa = std::sqrt(a);
    const double u = t + b / (2.0 * a);
    const double k = c - b * b / (4.0 * a);
    const double kscale = std::max({std::abs(c), b * b / (4.0 * a), a * u * u});
    const double core = std::sqrt(std::max(0.0, a * u * u + k));
    if (std::abs(k) <= 1e-13 * std::max(kscale, 1e-300)) return 0.5 * sa * u * std::abs(u);
    double logterm;
    if (u >= 0.0)
        logterm = std::log(sa * u + core);
    else
        logterm = std::log(std::abs(k)) - std::log(core - sa * u);
    return 0.5 * u * core + k / (2.0 * sa) * logterm;
}

} // namespace

double integrate_piece(const FunctionPiece& p, double lo, double hi) {
    if (hi < lo) throw std::invalid_argument("integrate_piece: inverted interval");
    if (hi - lo <= 0.0) return 0.0;
    switch (p.kind) {
        case PieceKind::linear:
            return poly_integral(0.0, p.b, p.c, lo, hi);
        case PieceKind::quadratic:
            return poly_integral(p.a, p.b, p.c, lo, hi);
        case PieceKind::abs_linear: {
            if (p.b == 0.0) return std::abs(p.c) * (hi - lo);
            const double r = -p.c / p.b;
            auto part = [&](double x, double y) {
                if (y <= x) return 0.0;
                const double v = poly_integral(0.0, p.b, p.c, x, y);
                const double s = p.b * (0.5 * (x + y)) + p.c;
                return s >= 0.0 ? v : -v;
            };
            if (r <= lo || r >= hi) return part(lo, hi);
            return part(lo, r) + part(r, hi);
        }
        case PieceKind::sqrt_quadratic: {
            const double scale = std::max({std::abs(p.a), std::abs(p.b), std::abs(p.c)});
            if (scale == 0.0) return 0.0;
            if (std::abs(p.a) <= 1e-14 * scale) {
                if (std::abs(p.b) <= 1e-14 * scale) return std::sqrt(std::max(0.0, p.c)) * (hi - lo);
                auto F = [&](double t) {
                    const double q = std::max(0.0, p.b * t + p.c);
                    return 2.0 / (3.0 * p.b) * q * std::sqrt(q);
                };
                return F(hi) - F(lo);
            }
            if (p.a < 0.0) throw std::invalid_argument("sqrt piece with negative leading coefficient");
            return sqrt_antiderivative(p.a, p.b, p.c, hi) - sqrt_antiderivative(p.a, p.b, p.c, lo);
        }
    }
    return 0.0;
}

double integrate(const PiecewiseFunction& f, Interval sub) {
    const Interval full = f.span();
    if (sub.lo < full.lo - 1e-9 || sub.hi > full.hi + 1e-9)
        throw std::invalid_argument("integration interval escapes the function span");
    double acc = 0.0;
    for (const auto& p : f.pieces) {
        const double lo = std::max(p.span.lo, sub.lo);
        const double hi = std::min(p.span.hi, sub.hi);
        if (hi > lo) acc += integrate_piece(p, lo, hi);
    }
    return acc;
}

double integrate_square_piece(const FunctionPiece& p, double lo, double hi) {
    if (hi <= lo) return 0.0;
    switch (p.kind) {
        case PieceKind::linear:
        case PieceKind::abs_linear:
            return poly_integral(p.b * p.b, 2.0 * p.b * p.c, p.c * p.c, lo, hi);
        case PieceKind::sqrt_quadratic:
            return poly_integral(p.a, p.b, p.c, lo, hi);
        case PieceKind::quadratic:
            return quartic_integral(p.a * p.a, 2.0 * p.a * p.b, 2.0 * p.a * p.c + p.b * p.b,
                                    2.0 * p.b * p.c, p.c * p.c, lo, hi);
    }
    return 0.0;
}

double integrate_square(const PiecewiseFunction& f, Interval sub) {
    const Interval full = f.span();
    if (sub.lo < full.lo - 1e-9 || sub.hi > full.hi + 1e-9)
        throw std::invalid_argument("integration interval escapes the function span");
    double acc = 0.0;
    for (const auto& p : f.pieces) {
        const double lo = std::max(p.span.lo, sub.lo);
        const double hi = std::min(p.span.hi, sub.hi);
        if (hi > lo) acc += integrate_square_piece(p, lo, hi);
    }
    return acc;
}

double max_value(const PiecewiseFunction& f, Interval sub) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& p : f.pieces) {
        const double lo = std::max(p.span.lo, sub.lo);
        const double hi = std::min(p.span.hi, sub.hi);
        if (hi < lo) continue;
        best = std::max({best, p.eval(lo), p.eval(hi)});
        if ((p.kind == PieceKind::quadratic || p.kind == PieceKind::sqrt_quadratic) && p.a != 0.0) {
            const double v = -p.b / (2.0 * p.a);
            if (v > lo && v < hi) best = std::max(best, p.eval(v));
        }
        if (p.kind == PieceKind::abs_linear && p.b != 0.0) {
            const double r = -p.c / p.b;
            if (r > lo && r < hi) best = std::max(best, p.eval(r));
        }
    }
    return best;
}

} // namespace ctraj
