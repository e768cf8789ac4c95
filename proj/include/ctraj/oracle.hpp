#pragma once

#include "ctraj/central_rd.hpp"
#include "ctraj/geometry.hpp"

#include <cstdint>

namespace ctraj {

struct OracleConfig {
    int samples = 4000; // uniform time resolution, >= 2
    CentralityMeasure measure = CentralityMeasure::farthest;
    Aggregation objective = Aggregation::integral;
};

struct OracleResult {
    double cost = 0.0;
    std::vector<EntityId> assignment; // chosen entity per sample stage
};

// Brute-force reference: dynamic program over uniformly sampled times with
// trapezoidal stage costs. Switching entities between stages is allowed iff
// both belong to one eps-connected component at the earlier sample. All
// distances are recomputed from raw coordinates so this shares no formula
// path with the envelope-based solver.
OracleResult oracle_cost(const TrajectorySet& set, double eps, const OracleConfig& cfg);

// Adversarial single-interval instance of 3*m entities on a line: m lines
// shaping the top envelope, m the bottom, and m near-horizontal lines spaced
// at most eps apart that the zigzagging midline crosses over and over. The
// optimum switches Theta(m^2) times inside the band.
TrajectorySet zigzag_adversary(int m, double eps);

// Reproducible random piecewise-linear trajectories: first vertex normal
// with deviation 2, then per-vertex normal steps (deviation 0.7) clamped to
// [-1.5, 1.5] per coordinate. Grid times are 0..tau.
TrajectorySet random_instance(int n, int tau, int dim, std::uint64_t seed);

} // namespace ctraj
