#include <doctest.h>

#include "ctraj/central_1d.hpp"
#include "ctraj/central_rd.hpp"
#include "ctraj/oracle.hpp"
#include "test_helpers.hpp"

#include <cmath>
#include <random>

using namespace ctraj;
using testutil::make_set_1d;
using testutil::make_set_2d;

TEST_CASE("farthest_profile examples") {
    // Singleton: identically zero.
    auto s1 = make_set_2d({0.0, 1.0}, {{"a", {{0.0, 0.0}, {1.0, 0.0}}}});
    auto p1 = farthest_profile(s1, 0);
    CHECK(p1.eval(0.5) == doctest::Approx(0.0));

    // Static equilateral triangle on the unit circle: chord length sqrt(3).
    const double r3 = std::sqrt(3.0);
    auto tri = make_set_2d({0.0, 1.0}, {{"a", {{0.0, 1.0}, {0.0, 1.0}}},
                                        {"b", {{-r3 / 2, -0.5}, {-r3 / 2, -0.5}}},
                                        {"c", {{r3 / 2, -0.5}, {r3 / 2, -0.5}}}});
    auto pa = farthest_profile(tri, 0);
    CHECK(pa.eval(0.2) == doctest::Approx(r3).epsilon(1e-12));
    CHECK(pa.eval(0.9) == doctest::Approx(r3).epsilon(1e-12));

    // sigma=(t,0), psi=(0,0): profile t.
    auto s3 = make_set_2d({0.0, 1.0}, {{"a", {{0.0, 0.0}, {1.0, 0.0}}}, {"b", {{0.0, 0.0}, {0.0, 0.0}}}});
    auto p3 = farthest_profile(s3, 0);
    CHECK(p3.eval(0.3) == doctest::Approx(0.3));
    CHECK(p3.eval(1.0) == doctest::Approx(1.0));
}

TEST_CASE("sum_sq_profile examples") {
    auto s1 = make_set_2d({0.0, 1.0}, {{"a", {{0.0, 0.0}, {1.0, 0.0}}}});
    CHECK(sum_sq_profile(s1, 0).eval(0.4) == doctest::Approx(0.0));

    const double r3 = std::sqrt(3.0);
    auto tri = make_set_2d({0.0, 1.0}, {{"a", {{0.0, 1.0}, {0.0, 1.0}}},
                                        {"b", {{-r3 / 2, -0.5}, {-r3 / 2, -0.5}}},
                                        {"c", {{r3 / 2, -0.5}, {r3 / 2, -0.5}}}});
    CHECK(sum_sq_profile(tri, 0).eval(0.5) == doctest::Approx(6.0));

    auto s3 = make_set_2d({0.0, 1.0}, {{"a", {{0.0, 0.0}, {0.0, 0.0}}}, {"b", {{0.0, 0.0}, {1.0, 0.0}}}});
    CHECK(sum_sq_profile(s3, 0).eval(0.7) == doctest::Approx(0.49));
}

TEST_CASE("central_rd examples") {
    const double r3 = std::sqrt(3.0);
    auto tri = make_set_2d({0.0, 1.0}, {{"a", {{0.0, 1.0}, {0.0, 1.0}}},
                                        {"b", {{-r3 / 2, -0.5}, {-r3 / 2, -0.5}}},
                                        {"c", {{r3 / 2, -0.5}, {r3 / 2, -0.5}}}});
    auto res = central_rd(tri, 0.0, CentralityMeasure::farthest, Aggregation::integral);
    CHECK(res.trajectory.cost == doctest::Approx(r3).epsilon(1e-9));
    CHECK(res.trajectory.pieces.size() == 1);

    // The min-farthest point beats the point nearest the circumcenter.
    auto pq = testutil::triangle_pq_instance();
    auto res2 = central_rd(pq, 0.2, CentralityMeasure::farthest, Aggregation::integral);
    REQUIRE(res2.trajectory.pieces.size() == 1);
    CHECK(res2.trajectory.pieces[0].entity == 4); // q
    CHECK(res2.trajectory.cost == doctest::Approx(std::sqrt(0.75 + 0.36)).epsilon(1e-9));
    CHECK(res2.trajectory.cost == doctest::Approx(1.0535654).epsilon(1e-6));

    auto single = make_set_2d({0.0, 1.0}, {{"a", {{0.0, 0.0}, {1.0, 1.0}}}});
    auto res3 = central_rd(single, 0.1, CentralityMeasure::farthest, Aggregation::integral);
    CHECK(res3.trajectory.cost == doctest::Approx(0.0));

    CHECK_THROWS(central_rd(single, -0.5, CentralityMeasure::farthest, Aggregation::integral));
}

TEST_CASE("profile_intersections_audit examples") {
    auto s1 = make_set_2d({0.0, 1.0}, {{"a", {{0.0, 0.0}, {1.0, 0.0}}}});
    auto a1 = profile_intersections_audit(s1);
    CHECK(a1.isolated == 0);

    // Two entities: both profiles equal the shared pairwise distance.
    auto s2 = make_set_1d({0.0, 1.0}, {{"a", {0.0, 1.0}}, {"b", {2.0, 2.0}}});
    auto a2 = profile_intersections_audit(s2);
    CHECK(a2.isolated == 0);
    CHECK(a2.degenerate_pairs == 1);

    // Static collinear points 0, 1, 3: profiles 3, 2, 3; no crossings.
    auto s3 = make_set_1d({0.0, 1.0}, {{"a", {0.0, 0.0}}, {"b", {1.0, 1.0}}, {"c", {3.0, 3.0}}});
    auto a3 = profile_intersections_audit(s3);
    CHECK(a3.isolated == 0);
}

TEST_CASE("property: farthest profile is pointwise correct with bounded pieces") {
    std::mt19937_64 rng(53);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const int n = 2 + static_cast<int>(seed % 4);
        const int tau = 1 + static_cast<int>(seed % 3);
        const int d = 1 + static_cast<int>(seed % 3);
        auto set = random_instance(n, tau, d, seed * 733);
        std::uniform_real_distribution<double> tpick(set.grid().start(), set.grid().end());
        for (EntityId e = 0; e < n; ++e) {
            auto prof = farthest_profile(set, e);
            CHECK(static_cast<int>(prof.pieces.size()) <= tau * (2 * n - 1));
            auto ssq = sum_sq_profile(set, e);
            CHECK(static_cast<int>(ssq.pieces.size()) <= tau);
            for (int probe = 0; probe < 100; ++probe) {
                const double t = tpick(rng);
                double far = 0.0, sum = 0.0;
                for (EntityId o = 0; o < n; ++o) {
                    far = std::max(far, set.distance(e, o, t));
                    sum += set.sq_distance(e, o, t);
                }
                CHECK(prof.eval(t) == doctest::Approx(far).epsilon(1e-9));
                CHECK(ssq.eval(t) == doctest::Approx(sum).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("property: profile intersections respect the pairwise cap") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const int n = 2 + static_cast<int>(seed % 5);
        const int tau = 1 + static_cast<int>(seed % 3);
        auto set = random_instance(n, tau, 2, seed * 881 + 4);
        const auto audit = profile_intersections_audit(set);
        // Each pair of profiles is simple on at most tau*(4n-2) shared
        // intervals and meets at most twice on each of them.
        const long cap = static_cast<long>(n) * (n - 1) / 2 * tau * (8L * n - 4L);
        CHECK(audit.isolated <= cap);
    }
}

TEST_CASE("property: d = 1 farthest/integral agrees with the 1d pipeline") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const int n = 2 + static_cast<int>(seed % 5);
        const int tau = 1 + static_cast<int>(seed % 3);
        auto set = random_instance(n, tau, 1, seed * 211 + 3);
        const double eps = 0.3 + 0.1 * static_cast<double>(seed % 5);
        auto rd = central_rd(set, eps, CentralityMeasure::farthest, Aggregation::integral);
        auto oned = central_1d(set, eps);
        CHECK(rd.trajectory.cost == doctest::Approx(oned.trajectory.cost).epsilon(1e-6));
    }
}

TEST_CASE("property: maximum aggregation reports the max along the output") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const int n = 2 + static_cast<int>(seed % 4);
        auto set = random_instance(n, 2, 2, seed * 389 + 17);
        auto res = central_rd(set, 0.6, CentralityMeasure::farthest, Aggregation::maximum);
        // Max candidates: piece endpoints and interior grid times (the
        // pairwise distances are convex per grid segment), plus a dense grid.
        double dense = 0.0;
        for (const auto& piece : res.trajectory.pieces) {
            std::vector<double> cand{piece.span.lo, piece.span.hi};
            for (double gt : set.grid().times())
                if (gt > piece.span.lo && gt < piece.span.hi) cand.push_back(gt);
            for (int i = 1; i < 512; ++i) cand.push_back(piece.span.lo + piece.span.length() * i / 512);
            for (double t : cand)
                for (EntityId o = 0; o < n; ++o) dense = std::max(dense, set.distance(piece.entity, o, t));
        }
        CHECK(res.trajectory.cost == doctest::Approx(dense).epsilon(1e-6));
        // And it is optimal per the max-objective oracle.
        OracleConfig cfg;
        cfg.samples = 1500;
        cfg.objective = Aggregation::maximum;
        const auto oracle = oracle_cost(set, 0.6, cfg);
        CHECK(res.trajectory.cost <= oracle.cost + 2e-3);
    }
}

TEST_CASE("property: sum-of-squares costs are optimal under the oracle") {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        const int n = 2 + static_cast<int>(seed % 3);
        auto set = random_instance(n, 2, 2, seed * 577 + 29);
        auto res = central_rd(set, 0.6, CentralityMeasure::sum_of_squares, Aggregation::integral);
        OracleConfig cfg;
        cfg.samples = 2000;
        cfg.measure = CentralityMeasure::sum_of_squares;
        const auto oracle = oracle_cost(set, 0.6, cfg);
        CHECK(res.trajectory.cost <= oracle.cost + 5e-3);
        CHECK(std::abs(res.trajectory.cost - oracle.cost) <= std::max(5e-3, 0.01 * oracle.cost));
    }
}
