#include <doctest.h>

#include "ctraj/central.hpp"
#include "ctraj/reeb.hpp"
#include "test_helpers.hpp"

#include <random>
#include <set>

using namespace ctraj;
using testutil::make_set_1d;

namespace {

PiecewiseFunction const_fn(EntityId owner, Interval span, double value) {
    PiecewiseFunction f;
    f.pieces.push_back(FunctionPiece::make_linear(owner, span, 0.0, value));
    return f;
}

} // namespace

TEST_CASE("build_reeb: one component, merge/split, parallel singletons") {
    // Always within eps.
    auto close_pair = make_set_1d({0.0, 1.0}, {{"a", {0.0, 0.0}}, {"b", {0.1, 0.1}}});
    auto g1 = build_reeb(close_pair, 0.5);
    REQUIRE(g1.edges.size() == 1);
    CHECK(g1.edges[0].members == std::vector<EntityId>{0, 1});
    CHECK(g1.edges[0].span.lo == doctest::Approx(0.0));
    CHECK(g1.edges[0].span.hi == doctest::Approx(1.0));
    CHECK(g1.edges[0].from == g1.source);
    CHECK(g1.edges[0].to == g1.sink);

    // sigma1 = 0, sigma2 = 1 - t on [0,2], eps = 0.5.
    auto s = make_set_1d({0.0, 2.0}, {{"a", {0.0, 0.0}}, {"b", {1.0, -1.0}}});
    auto g2 = build_reeb(s, 0.5);
    REQUIRE(g2.edges.size() == 5);
    int singleton_edges = 0, pair_edges = 0;
    for (const auto& e : g2.edges) {
        if (e.members.size() == 1)
            ++singleton_edges;
        else {
            ++pair_edges;
            CHECK(e.span.lo == doctest::Approx(0.5));
            CHECK(e.span.hi == doctest::Approx(1.5));
        }
    }
    CHECK(singleton_edges == 4);
    CHECK(pair_edges == 1);
    int merges = 0, splits = 0;
    for (const auto& v : g2.vertices) {
        if (v.kind == VertexKind::merge) {
            ++merges;
            CHECK(v.t == doctest::Approx(0.5));
        }
        if (v.kind == VertexKind::split) {
            ++splits;
            CHECK(v.t == doctest::Approx(1.5));
        }
    }
    CHECK(merges == 1);
    CHECK(splits == 1);

    // Mutually distant constants: n parallel source-to-sink edges.
    auto far = make_set_1d({0.0, 1.0}, {{"a", {0.0, 0.0}}, {"b", {10.0, 10.0}}, {"c", {20.0, 20.0}}});
    auto g3 = build_reeb(far, 0.5);
    REQUIRE(g3.edges.size() == 3);
    for (const auto& e : g3.edges) {
        CHECK(e.from == g3.source);
        CHECK(e.to == g3.sink);
    }
}

TEST_CASE("subdivide") {
    auto s = make_set_1d({0.0, 2.0}, {{"a", {0.0, 0.0}}, {"b", {10.0, 10.0}}});
    auto g = build_reeb(s, 0.5);
    REQUIRE(g.edges.size() == 2);

    // No cuts: unchanged.
    auto g0 = subdivide(g, {{}, {}});
    CHECK(g0.edges.size() == 2);

    // Cut at 1.0 for entity 0 splits only its edge.
    auto g1 = subdivide(g, {{1.0}, {}});
    CHECK(g1.edges.size() == 3);
    int subdivision_vertices = 0;
    for (const auto& v : g1.vertices)
        if (v.kind == VertexKind::subdivision) ++subdivision_vertices;
    CHECK(subdivision_vertices == 1);

    // Cut for a non-member leaves edges alone; cuts at the boundary are
    // ignored too.
    auto g2 = subdivide(g, {{0.0, 2.0}, {}});
    CHECK(g2.edges.size() == 2);
}

TEST_CASE("weigh") {
    auto s = make_set_1d({0.0, 2.0}, {{"a", {0.0, 0.0}}, {"b", {10.0, 10.0}}});
    auto g = build_reeb(s, 0.5);
    std::vector<PiecewiseFunction> fs{const_fn(0, {0.0, 2.0}, 1.0), const_fn(1, {0.0, 2.0}, 3.0)};
    auto gw = weigh(g, fs);
    for (const auto& e : gw.edges) {
        if (e.members == std::vector<EntityId>{0}) CHECK(e.weight == doctest::Approx(2.0));
        if (e.members == std::vector<EntityId>{1}) CHECK(e.weight == doctest::Approx(6.0));
    }

    // Two members: integral of the min; f1 = t, f2 = 1 - t on [0,1].
    auto close_pair = make_set_1d({0.0, 1.0}, {{"a", {0.0, 0.0}}, {"b", {0.1, 0.1}}});
    auto g2 = build_reeb(close_pair, 0.5);
    std::vector<PiecewiseFunction> fs2(2);
    fs2[0].pieces.push_back(FunctionPiece::make_linear(0, {0.0, 1.0}, 1.0, 0.0));
    fs2[1].pieces.push_back(FunctionPiece::make_linear(1, {0.0, 1.0}, -1.0, 1.0));
    auto gw2 = weigh(g2, fs2);
    REQUIRE(gw2.edges.size() == 1);
    CHECK(gw2.edges[0].weight == doctest::Approx(0.25));

    // Missing cost function.
    CHECK_THROWS(weigh(g2, std::vector<PiecewiseFunction>(1)));
}

TEST_CASE("min_weight_path: chain, diamond, tie-break") {
    // Build a diamond by hand.
    ReebGraph g;
    g.vertices = {{0.0, VertexKind::start, -1, -1},
                  {1.0, VertexKind::end, -1, -1},
                  {0.5, VertexKind::merge, 0, 1},
                  {0.5, VertexKind::merge, 0, 1}};
    g.source = 0;
    g.sink = 1;
    auto edge = [&](int from, int to, double w) {
        ReebEdge e;
        e.from = from;
        e.to = to;
        e.span = {g.vertices[static_cast<std::size_t>(from)].t, g.vertices[static_cast<std::size_t>(to)].t};
        e.weight = w;
        e.weighted = true;
        e.members = {0};
        return e;
    };
    g.edges = {edge(0, 2, 1.0), edge(2, 1, 1.0), edge(0, 3, 0.5), edge(3, 1, 2.0)};
    auto path = min_weight_path(g);
    CHECK(path.cost == doctest::Approx(2.0));
    REQUIRE(path.edges.size() == 2);
    CHECK(path.edges[0] == 0);
    CHECK(path.edges[1] == 1);

    // Single chain.
    ReebGraph chain;
    chain.vertices = {{0.0, VertexKind::start, -1, -1}, {1.0, VertexKind::end, -1, -1}};
    chain.source = 0;
    chain.sink = 1;
    chain.edges = {edge(0, 1, 0.7)};
    auto p2 = min_weight_path(chain);
    CHECK(p2.cost == doctest::Approx(0.7));
    REQUIRE(p2.edges.size() == 1);

    // Unweighted graph is rejected.
    chain.edges[0].weighted = false;
    CHECK_THROWS(min_weight_path(chain));
}

TEST_CASE("min_weight_path over the jump instance graph costs 0.19") {
    auto set = testutil::jump_instance();
    auto g = build_reeb(set, 0.25);
    std::vector<PiecewiseFunction> fs(4);
    const Interval span{0.0, 2.0};
    fs[0].pieces.push_back(FunctionPiece::make_abs_linear(0, span, 0.0, 0.1));
    fs[1].pieces.push_back(FunctionPiece::make_abs_linear(1, span, 1.0, -0.9));
    fs[2].pieces.push_back(FunctionPiece::make_abs_linear(2, span, 0.0, 2.0));
    fs[3].pieces.push_back(FunctionPiece::make_abs_linear(3, span, 0.0, 2.0));
    auto gw = weigh(g, fs);
    auto path = min_weight_path(gw);
    CHECK(path.cost == doctest::Approx(0.19).epsilon(1e-9));

    auto ct = assemble_trajectoid(set, 0.25, gw, path);
    REQUIRE(ct.pieces.size() == 3);
    CHECK(ct.pieces[0].entity == 0);
    CHECK(ct.pieces[1].entity == 1);
    CHECK(ct.pieces[2].entity == 0);
    CHECK(ct.pieces[0].span.hi == doctest::Approx(0.8));
    CHECK(ct.pieces[1].span.hi == doctest::Approx(1.0));
    REQUIRE(ct.jumps.size() == 2);
    CHECK(ct.jumps[0].gap == doctest::Approx(0.2));
    CHECK(ct.jumps[1].gap == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("property: covering edges partition the entities at random times") {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> coord(-2.0, 2.0);
    for (int trial = 0; trial < 15; ++trial) {
        std::vector<Trajectory> trajs;
        const int n = 3 + static_cast<int>(rng() % 4);
        for (int e = 0; e < n; ++e) {
            Trajectory tr;
            tr.name = "e" + std::to_string(e);
            tr.dim = 1;
            tr.coords = {coord(rng), coord(rng), coord(rng)};
            trajs.push_back(std::move(tr));
        }
        TrajectorySet set(TimeGrid({0.0, 1.0, 2.0}), std::move(trajs));
        const double eps = 0.6;
        auto g = build_reeb(set, eps);

        std::set<double> vertex_times;
        for (const auto& v : g.vertices) vertex_times.insert(v.t);

        std::uniform_real_distribution<double> tpick(0.0, 2.0);
        for (int probe = 0; probe < 100; ++probe) {
            const double t = tpick(rng);
            bool near_vertex = false;
            for (double vt : vertex_times)
                if (std::abs(vt - t) < 1e-9) near_vertex = true;
            if (near_vertex) continue;
            std::vector<int> seen(static_cast<std::size_t>(n), 0);
            for (const auto& e : g.edges) {
                if (e.span.lo <= t && t <= e.span.hi)
                    for (EntityId m : e.members) ++seen[static_cast<std::size_t>(m)];
            }
            for (int e = 0; e < n; ++e) CHECK(seen[static_cast<std::size_t>(e)] == 1);
        }

        // Merge vertices join exactly their parents; splits mirror that.
        auto in = g.incoming();
        auto out = g.outgoing();
        for (std::size_t v = 2; v < g.vertices.size(); ++v) {
            if (g.vertices[v].kind == VertexKind::subdivision) continue;
            std::set<EntityId> before, after;
            for (int eid : in[v])
                for (EntityId m : g.edges[static_cast<std::size_t>(eid)].members) before.insert(m);
            for (int eid : out[v])
                for (EntityId m : g.edges[static_cast<std::size_t>(eid)].members) after.insert(m);
            CHECK(before == after);
        }

        // Edge spans along any source-to-sink path tile the full span: check
        // for each entity's own chain of edges.
        for (int e = 0; e < n; ++e) {
            double covered = 0.0;
            for (const auto& edge : g.edges)
                if (std::find(edge.members.begin(), edge.members.end(), e) != edge.members.end())
                    covered += edge.span.length();
            CHECK(covered == doctest::Approx(2.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("property: min path cost never exceeds a single-entity route") {
    std::mt19937_64 rng(47);
    std::uniform_real_distribution<double> coord(-2.0, 2.0);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<Trajectory> trajs;
        const int n = 3 + static_cast<int>(rng() % 3);
        for (int e = 0; e < n; ++e) {
            Trajectory tr;
            tr.name = "e" + std::to_string(e);
            tr.dim = 1;
            tr.coords = {coord(rng), coord(rng)};
            trajs.push_back(std::move(tr));
        }
        TrajectorySet set(TimeGrid({0.0, 1.5}), std::move(trajs));
        auto g = build_reeb(set, 0.7);

        std::vector<PiecewiseFunction> fs;
        std::uniform_real_distribution<double> vpick(0.1, 3.0);
        std::vector<double> levels;
        for (int e = 0; e < n; ++e) {
            const double v = vpick(rng);
            levels.push_back(v);
            fs.push_back(const_fn(e, {0.0, 1.5}, v));
        }
        auto gw = weigh(g, fs);
        auto path = min_weight_path(gw);
        for (int e = 0; e < n; ++e) CHECK(path.cost <= levels[static_cast<std::size_t>(e)] * 1.5 + 1e-9);
    }
}

TEST_CASE("eps = 0 crossing yields a zero-length zero-weight bridge edge") {
    auto s = make_set_1d({0.0, 1.0}, {{"a", {-1.0, 1.0}}, {"b", {1.0, -1.0}}});
    auto g = build_reeb(s, 0.0);
    std::vector<PiecewiseFunction> fs(2);
    fs[0].pieces.push_back(FunctionPiece::make_abs_linear(0, {0.0, 1.0}, 2.0, -1.0));
    fs[1].pieces.push_back(FunctionPiece::make_abs_linear(1, {0.0, 1.0}, -2.0, 1.0));
    auto gw = weigh(g, fs);
    bool found_bridge = false;
    for (const auto& e : gw.edges) {
        if (e.members.size() == 2) {
            found_bridge = true;
            CHECK(e.span.length() <= 1e-12);
            CHECK(e.weight == doctest::Approx(0.0));
        }
    }
    CHECK(found_bridge);
    // The path may switch entities through the bridge at zero gap.
    auto path = min_weight_path(gw);
    auto ct = assemble_trajectoid(s, 0.0, gw, path);
    for (const auto& j : ct.jumps) CHECK(j.gap <= 1e-9);
}

TEST_CASE("describe lists one vertex or edge per line") {
    auto s = make_set_1d({0.0, 2.0}, {{"a", {0.0, 0.0}}, {"b", {1.0, -1.0}}});
    auto g = build_reeb(s, 0.5);
    const std::string text = describe(g);
    CHECK(text.find("vertex 0") != std::string::npos);
    CHECK(text.find("edge 0") != std::string::npos);
    CHECK(text.find("merge") != std::string::npos);
    CHECK(text.find("split") != std::string::npos);
    CHECK(text.find("members={0,1}") != std::string::npos);
}
