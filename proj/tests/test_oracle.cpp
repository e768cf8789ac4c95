#include <doctest.h>

#include "ctraj/central_1d.hpp"
#include "ctraj/oracle.hpp"
#include "test_helpers.hpp"

#include <cmath>

using namespace ctraj;
using testutil::make_set_1d;

TEST_CASE("oracle_cost examples") {
    // Singleton: zero cost at any resolution.
    auto s1 = make_set_1d({0.0, 1.0}, {{"a", {0.2, 0.8}}});
    OracleConfig cfg;
    cfg.samples = 50;
    CHECK(oracle_cost(s1, 0.5, cfg).cost == doctest::Approx(0.0));

    // Two disconnected constants at distance 1: either way the farthest is 1.
    auto s2 = make_set_1d({0.0, 1.0}, {{"a", {0.0, 0.0}}, {"b", {1.0, 1.0}}});
    cfg.samples = 200;
    CHECK(oracle_cost(s2, 0.0, cfg).cost == doctest::Approx(1.0));

    // The jump instance at high resolution: 0.19 + 4.
    cfg.samples = 4000;
    const auto r = oracle_cost(testutil::jump_instance(), 0.25, cfg);
    CHECK(r.cost == doctest::Approx(4.19).epsilon(1e-3));

    CHECK_THROWS(oracle_cost(s1, 0.5, OracleConfig{1, CentralityMeasure::farthest, Aggregation::integral}));
}

TEST_CASE("oracle assignment is a feasible trajectoid") {
    OracleConfig cfg;
    cfg.samples = 500;
    auto set = testutil::jump_instance();
    const auto r = oracle_cost(set, 0.25, cfg);
    REQUIRE(static_cast<int>(r.assignment.size()) == cfg.samples - 1);
    const double step = set.grid().span().length() / (cfg.samples - 1);
    for (std::size_t s = 0; s + 1 < r.assignment.size(); ++s) {
        const EntityId a = r.assignment[s], b = r.assignment[s + 1];
        if (a == b) continue;
        const double t = set.grid().start() + step * static_cast<double>(s + 1);
        // Switch allowed only within one eps-component at the stage boundary.
        auto comps = proximity_components(set, 0.25, t);
        bool together = false;
        for (const auto& c : comps)
            if (std::find(c.begin(), c.end(), a) != c.end() && std::find(c.begin(), c.end(), b) != c.end())
                together = true;
        CHECK(together);
    }
}

TEST_CASE("oracle refinement stabilizes") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const int n = 2 + static_cast<int>(seed % 4);
        auto set = random_instance(n, 2, seed % 2 ? 1 : 2, seed * 131 + 1);
        const double eps = 0.5;
        auto at = [&](int m) {
            OracleConfig cfg;
            cfg.samples = m;
            return oracle_cost(set, eps, cfg).cost;
        };
        const double coarse = std::abs(at(500) - at(1000));
        const double fine = std::abs(at(2000) - at(4000));
        CHECK(fine <= std::max(coarse, 1e-7) + 1e-9);
    }
}

TEST_CASE("zigzag_adversary shape and band condition") {
    CHECK_THROWS(zigzag_adversary(1, 0.5));
    CHECK_THROWS(zigzag_adversary(4, 0.0));

    for (int m : {2, 4, 8}) {
        const double eps = 0.25;
        auto set = zigzag_adversary(m, eps);
        CHECK(set.size() == 3 * m);
        CHECK(set.grid().segments() == 1);

        // Horizontal band lines sit within eps of their neighbours the whole
        // time.
        std::vector<EntityId> band;
        for (EntityId e = 0; e < set.size(); ++e)
            if (set.trajectory(e).name[0] == 'h') band.push_back(e);
        CHECK(static_cast<int>(band.size()) == m);
        for (std::size_t i = 0; i + 1 < band.size(); ++i) {
            CHECK(set.distance(band[i], band[i + 1], 0.0) <= eps);
            CHECK(set.distance(band[i], band[i + 1], 1.0) <= eps);
        }
    }
}

TEST_CASE("zigzag_adversary forces many switches") {
    auto set = zigzag_adversary(2, 0.25);
    auto res = central_1d(set, 0.25);
    CHECK(static_cast<int>(res.trajectory.pieces.size()) - 1 >= 2);

    // Quadratic growth shows up already between m = 2 and m = 4.
    auto set4 = zigzag_adversary(4, 0.25);
    auto res4 = central_1d(set4, 0.25);
    const double ratio = static_cast<double>(res4.trajectory.vertex_count) /
                         static_cast<double>(std::max(1, res.trajectory.vertex_count));
    CHECK(ratio >= 3.0);
}

TEST_CASE("random_instance is deterministic with the documented shape") {
    auto a = random_instance(5, 3, 2, 42);
    auto b = random_instance(5, 3, 2, 42);
    CHECK(a.size() == 5);
    CHECK(a.grid().size() == 4);
    CHECK(a.dim() == 2);
    for (int e = 0; e < a.size(); ++e) CHECK(a.trajectory(e).coords == b.trajectory(e).coords);

    auto c = random_instance(1, 1, 1, 7);
    CHECK(c.size() == 1);
    CHECK(c.grid().size() == 2);

    // Steps are clamped.
    for (int e = 0; e < a.size(); ++e) {
        const auto& tr = a.trajectory(e);
        for (std::size_t k = 1; k < tr.vertex_count(); ++k)
            for (int j = 0; j < 2; ++j)
                CHECK(std::abs(tr.vertex(k)[j] - tr.vertex(k - 1)[j]) <= 1.5 + 1e-12);
    }
}
