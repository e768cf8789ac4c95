#pragma once

#include "ctraj/geometry.hpp"

#include <span>
#include <vector>

namespace ctraj {

// Breakpoints closer than this are merged during envelope construction.
inline constexpr double kBreakTol = 1e-12;

enum class PieceKind {
    linear,         // b*t + c
    abs_linear,     // |b*t + c|
    quadratic,      // a*t^2 + b*t + c
    sqrt_quadratic, // sqrt(a*t^2 + b*t + c)
};

struct FunctionPiece {
    EntityId owner = -1;
    Interval span;
    PieceKind kind = PieceKind::linear;
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;

    double eval(double t) const;

    static FunctionPiece make_linear(EntityId owner, Interval span, double slope, double intercept) {
        return {owner, span, PieceKind::linear, 0.0, slope, intercept};
    }
    static FunctionPiece make_abs_linear(EntityId owner, Interval span, double slope, double intercept) {
        return {owner, span, PieceKind::abs_linear, 0.0, slope, intercept};
    }
    static FunctionPiece make_quadratic(EntityId owner, Interval span, const QuadraticPoly& q) {
        return {owner, span, PieceKind::quadratic, q.a, q.b, q.c};
    }
    static FunctionPiece make_sqrt_quadratic(EntityId owner, Interval span, const QuadraticPoly& q) {
        return {owner, span, PieceKind::sqrt_quadratic, q.a, q.b, q.c};
    }
};

enum class BreakCause {
    piece_boundary,   // same owner, underlying piece changes
    exchange,         // envelope switches owner
    cross_same_point, // owner switch where the entities coincide (type i)
    cross_opposite,   // owner switch between equidistant opposite sides (type ii)
};

struct Breakpoint {
    double t = 0.0;
    EntityId left_owner = -1;
    EntityId right_owner = -1;
    BreakCause cause = BreakCause::piece_boundary;
};

// An ordered sequence of pieces tiling one interval, plus the breakpoints
// between consecutive pieces.
struct PiecewiseFunction {
    std::vector<FunctionPiece> pieces;
    std::vector<Breakpoint> breakpoints;

    Interval span() const;
    bool empty() const { return pieces.empty(); }
    double eval(double t) const;
    EntityId owner_at(double t) const;
    const FunctionPiece& piece_at(double t) const;

    // Restriction to a subinterval of the span. Degenerate targets (lo == hi)
    // yield a single zero-length piece.
    PiecewiseFunction restrict_to(Interval sub) const;

    // Appends another function starting where this one ends.
    void append(const PiecewiseFunction& tail);
};

struct PieceIntersections {
    std::vector<double> times; // sorted, interior to the span overlap
    bool identical = false;    // the two pieces agree on the whole overlap
};

// Times where two pieces take equal values, excluding the overlap endpoints.
// Supported kind pairs reduce to a polynomial difference of degree <= 2;
// quadratic vs sqrt_quadratic would be quartic and is rejected.
PieceIntersections intersect_pieces(const FunctionPiece& f, const FunctionPiece& g);

// Pointwise min/max of a family of functions, all defined on all of `span`.
// Each output piece is owned by the extremal input; breakpoints record the
// exchanging owners. Exact ties go to the smaller owner id.
PiecewiseFunction lower_envelope(std::span<const PiecewiseFunction> fs, Interval span);
PiecewiseFunction upper_envelope(std::span<const PiecewiseFunction> fs, Interval span);

// Closed-form integral of f over sub (contained in f's span).
double integrate(const PiecewiseFunction& f, Interval sub);
double integrate_piece(const FunctionPiece& piece, double lo, double hi);

// Closed-form integral of f^2 over sub.
double integrate_square(const PiecewiseFunction& f, Interval sub);
double integrate_square_piece(const FunctionPiece& piece, double lo, double hi);

// Maximum of f over sub: piece endpoints plus interior critical points.
double max_value(const PiecewiseFunction& f, Interval sub);

} // namespace ctraj
