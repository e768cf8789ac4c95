#include <doctest.h>

#include "ctraj/geometry.hpp"
#include "test_helpers.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

using namespace ctraj;
using testutil::make_set_1d;
using testutil::make_set_2d;

TEST_CASE("interpolate: linear segment, vertex, and 2d") {
    auto s1 = make_set_1d({0.0, 1.0}, {{"a", {0.0, 2.0}}});
    CHECK(s1.position(0, 0.5)[0] == doctest::Approx(1.0));
    CHECK(s1.position(0, 1.0)[0] == doctest::Approx(2.0));

    auto s2 = make_set_2d({0.0, 2.0}, {{"a", {{0.0, 0.0}, {4.0, 2.0}}}});
    const auto p = s2.position(0, 0.5);
    CHECK(p[0] == doctest::Approx(1.0));
    CHECK(p[1] == doctest::Approx(0.5));

    CHECK_THROWS_AS((void)s1.position(0, -0.1), std::out_of_range);
    CHECK_THROWS_AS((void)s1.position(0, 1.1), std::out_of_range);
}

TEST_CASE("trajectory set validation") {
    CHECK_THROWS(TimeGrid({0.0}));
    CHECK_THROWS(TimeGrid({0.0, 0.0}));
    CHECK_THROWS(TimeGrid({1.0, 0.0}));
    CHECK_THROWS(make_set_1d({0.0, 1.0}, {{"a", {0.0, 1.0}}, {"a", {1.0, 0.0}}}));
    // Wrong vertex count.
    CHECK_THROWS(make_set_1d({0.0, 1.0, 2.0}, {{"a", {0.0, 1.0}}}));
}

TEST_CASE("pairwise_sq_dist examples") {
    // sigma(t)=(t,0), psi(t)=(0,t): difference (t,-t), squared norm 2t^2.
    auto s = make_set_2d({0.0, 1.0}, {{"a", {{0.0, 0.0}, {1.0, 0.0}}}, {"b", {{0.0, 0.0}, {0.0, 1.0}}}});
    auto q = pairwise_sq_dist(s, 0, 1, 0);
    CHECK(q.a == doctest::Approx(2.0));
    CHECK(q.b == doctest::Approx(0.0));
    CHECK(q.c == doctest::Approx(0.0));

    // Constant offset (1,2): squared distance 5.
    auto s2 = make_set_2d({0.0, 1.0}, {{"a", {{1.0, 2.0}, {2.0, 2.0}}}, {"b", {{0.0, 0.0}, {1.0, 0.0}}}});
    auto q2 = pairwise_sq_dist(s2, 0, 1, 0);
    CHECK(q2.a == doctest::Approx(0.0));
    CHECK(q2.b == doctest::Approx(0.0));
    CHECK(q2.c == doctest::Approx(5.0));

    // sigma(t)=t, psi(t)=1-2t: (3t-1)^2 = 9t^2 - 6t + 1.
    auto s3 = make_set_1d({0.0, 1.0}, {{"a", {0.0, 1.0}}, {"b", {1.0, -1.0}}});
    auto q3 = pairwise_sq_dist(s3, 0, 1, 0);
    CHECK(q3.a == doctest::Approx(9.0));
    CHECK(q3.b == doctest::Approx(-6.0));
    CHECK(q3.c == doctest::Approx(1.0));
}

TEST_CASE("epsilon_events examples") {
    auto s = make_set_1d({0.0, 1.0}, {{"a", {0.0, 1.0}}, {"b", {0.0, 0.0}}});
    auto ev = epsilon_events(s, 0.5);
    REQUIRE(ev.size() == 1);
    CHECK(ev[0].t == doctest::Approx(0.5));
    CHECK(ev[0].kind == EventKind::leave); // |t| grows through 0.5

    auto s2 = make_set_1d({0.0, 1.0}, {{"a", {0.0, 0.0}}, {"b", {1.0, 1.0}}});
    CHECK(epsilon_events(s2, 0.5).empty());

    auto s3 = make_set_1d({0.0, 2.0}, {{"a", {0.0, 0.0}}, {"b", {1.0, -1.0}}});
    auto ev3 = epsilon_events(s3, 0.5);
    REQUIRE(ev3.size() == 2);
    CHECK(ev3[0].t == doctest::Approx(0.5));
    CHECK(ev3[0].kind == EventKind::reach);
    CHECK(ev3[1].t == doctest::Approx(1.5));
    CHECK(ev3[1].kind == EventKind::leave);
}

TEST_CASE("epsilon_events: crossing with eps = 0 reports a touch") {
    auto s = make_set_1d({0.0, 1.0}, {{"a", {-1.0, 1.0}}, {"b", {1.0, -1.0}}});
    auto ev = epsilon_events(s, 0.0);
    REQUIRE(ev.size() == 2);
    CHECK(ev[0].t == doctest::Approx(0.5));
    CHECK(ev[0].kind == EventKind::reach);
    CHECK(ev[1].t == doctest::Approx(0.5));
    CHECK(ev[1].kind == EventKind::leave);

    // With eps > 0 a tangential contact (the distance dips to exactly eps)
    // is dropped.
    auto s2 = make_set_2d({0.0, 1.0}, {{"a", {{0.0, 0.0}, {0.0, 0.0}}}, {"b", {{-0.5, 0.5}, {0.5, 0.5}}}});
    CHECK(epsilon_events(s2, 0.5).empty());
    // Parallel entities at constant distance eps produce no crossing either.
    auto s3 = make_set_1d({0.0, 1.0}, {{"a", {-1.0, 1.0}}, {"b", {-1.5, 0.5}}});
    CHECK(epsilon_events(s3, 0.5).empty());
}

TEST_CASE("property: squared-distance polynomial matches interpolation") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> coord(-5.0, 5.0);
    std::uniform_int_distribution<int> dims(1, 3);
    for (int trial = 0; trial < 40; ++trial) {
        const int d = dims(rng);
        const int tau = 1 + static_cast<int>(rng() % 3);
        std::vector<double> times;
        for (int k = 0; k <= tau; ++k) times.push_back(k * 0.7);
        std::vector<Trajectory> trajs;
        for (int e = 0; e < 3; ++e) {
            Trajectory tr;
            tr.name = "e" + std::to_string(e);
            tr.dim = d;
            for (int k = 0; k <= tau; ++k)
                for (int j = 0; j < d; ++j) tr.coords.push_back(coord(rng));
            trajs.push_back(std::move(tr));
        }
        TrajectorySet set(TimeGrid(times), std::move(trajs));
        std::uniform_real_distribution<double> tpick(times.front(), times.back());
        for (int probe = 0; probe < 25; ++probe) {
            const double t = tpick(rng);
            const std::size_t k = set.grid().segment_index(t);
            const auto q = pairwise_sq_dist(set, 0, 1, k);
            const double direct = set.sq_distance(0, 1, t);
            CHECK(q.eval(t) == doctest::Approx(direct).epsilon(1e-9));
            CHECK(q.eval(t) >= -1e-12);
        }
    }
}

TEST_CASE("property: between events the eps comparison is stable") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> coord(-3.0, 3.0);
    for (int trial = 0; trial < 25; ++trial) {
        std::vector<Trajectory> trajs;
        for (int e = 0; e < 4; ++e) {
            Trajectory tr;
            tr.name = "e" + std::to_string(e);
            tr.dim = 1;
            tr.coords = {coord(rng), coord(rng), coord(rng)};
            trajs.push_back(std::move(tr));
        }
        TrajectorySet set(TimeGrid({0.0, 1.0, 2.0}), std::move(trajs));
        const double eps = 0.8;
        const auto events = epsilon_events(set, eps);
        for (std::size_t i = 1; i < events.size(); ++i) CHECK(events[i].t >= events[i - 1].t - 1e-12);

        for (int a = 0; a < 4; ++a) {
            for (int b = a + 1; b < 4; ++b) {
                std::vector<double> ts{0.0, 2.0};
                for (const auto& ev : events)
                    if (ev.a == a && ev.b == b) ts.push_back(ev.t);
                std::sort(ts.begin(), ts.end());
                for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
                    if (ts[i + 1] - ts[i] < 1e-9) continue;
                    const double lo_third = ts[i] + (ts[i + 1] - ts[i]) / 3.0;
                    const double hi_third = ts[i] + 2.0 * (ts[i + 1] - ts[i]) / 3.0;
                    const double s1 = set.distance(a, b, lo_third) - eps;
                    const double s2 = set.distance(a, b, hi_third) - eps;
                    if (std::abs(s1) > 1e-9 && std::abs(s2) > 1e-9) CHECK(s1 * s2 > 0.0);
                }
            }
        }
    }
}

TEST_CASE("solve_quadratic is stable for near-cancelling roots") {
    // (t - 1e-7)(t - 1e7) = t^2 - (1e7 + 1e-7) t + 1.
    auto r = solve_quadratic(1.0, -(1e7 + 1e-7), 1.0);
    REQUIRE(r.count == 2);
    CHECK(r.r0 == doctest::Approx(1e-7).epsilon(1e-12));
    CHECK(r.r1 == doctest::Approx(1e7).epsilon(1e-12));
}
