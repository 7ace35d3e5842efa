#include <algorithm>

#include "doctest.h"
#include "ocgw/graphs.hpp"
#include "ocgw/localize.hpp"

using namespace ocgw;

namespace {
StackyFan c3() { return StackyFan({{1, 0, 1}, {0, 1, 1}, {0, 0, 1}}, {{0, 1, 2}}); }
StackyFan conifold() { return StackyFan({{0, 0, 1}, {1, 0, 1}, {0, 1, 1}, {1, 1, 1}}, {{0, 1, 3}, {0, 2, 3}}); }

std::vector<DecoratedGraph> graphs_at(const Setup& s, int level, long d1, long d2) {
    InvariantRequest r;
    r.setup = &s;
    r.windings = {{d1, 0}, {d2, 0}};
    Evaluator ev(r, level == 2 ? InvariantKind::Closed : InvariantKind::Relative, level);
    return enumerate(ev.graph_request());
}

// degrees carried by edges over one FTCY edge, sorted
std::vector<long> degrees_on(const DecoratedGraph& g, int label) {
    std::vector<long> out;
    for (auto& e : g.edges)
        if (e.label == label) out.push_back(e.degree);
    std::sort(out.begin(), out.end());
    return out;
}
}  // namespace

TEST_CASE("open side with no degree is one constant vertex") {
    Setup s = Setup::build(c3(), {{1, 2}, {0, 2}}, 1);
    GraphRequest req;
    req.setup = &s;
    req.open_side = true;
    req.beta_hat.degrees = {0, 0};
    req.markings = {{0, {}}, {0, {}}};
    auto gs = enumerate(req);
    REQUIRE(gs.size() == 1);
    CHECK(gs[0].vertices.size() == 1);
    CHECK(gs[0].edges.empty());
    CHECK(gs[0].vertices[0].markings == std::vector<int>{0, 1});
}

TEST_CASE("closed side, class (1,1)") {
    Setup s = Setup::build(c3(), {{1, 2}, {0, 2}}, 1);
    // e1 and e2 only meet at v0 and each marking is pinned to its brane vertex, so the path is the only tree
    auto gs = graphs_at(s, 2, 1, 1);
    REQUIRE(gs.size() == 1);
    auto& g = gs[0];
    CHECK(g.vertices.size() == 3);
    CHECK(g.edges.size() == 2);
    CHECK(g.coefficient == 1);
    const FtcyGraph& ftcy = s.graph(2);
    for (int i = 1; i <= 2; ++i) {
        int v = g.vertex_of_marking(i - 1);
        CHECK(g.vertices[v].label == ftcy.vertex_of_brane(i));
        CHECK(g.valence(v) == 1);
    }
    CHECK(contributing_filter(g, ftcy, 0, {0, 0}).ok());
}

TEST_CASE("a degree two leg splits only where the brane vertex is r-valent") {
    Setup s = Setup::build(c3(), {{1, 2}, {0, 2}}, 1);
    for (int level = 0; level <= 2; ++level) {
        const FtcyGraph& ftcy = s.graph(level);
        int leg = ftcy.edge_of_brane(1);
        int brane_vertex = ftcy.vertex_of_brane(1);
        bool whole = false, split = false;
        for (auto& g : graphs_at(s, level, 2, 1)) {
            auto ds = degrees_on(g, leg);
            int copies = 0;
            for (auto& v : g.vertices) copies += v.label == brane_vertex;
            whole = whole || ds == std::vector<long>{2};
            // two degree one edges ending on two copies of the brane vertex
            split = split || (ds == std::vector<long>{1, 1} && copies == 2);
        }
        CAPTURE(level);
        CHECK(whole);
        CHECK(split == (level >= 1));
    }
}

TEST_CASE("graph coefficients") {
    Setup s = Setup::build(c3(), {{1, 2}, {0, 2}}, 1);
    for (long d = 1; d <= 4; ++d) {
        auto gs = graphs_at(s, 2, d, 1);
        bool seen = false;
        for (auto& g : gs)
            if (degrees_on(g, s.graph(2).edge_of_brane(1)) == std::vector<long>{d} && g.vertices.size() == 3) {
                // degree d on e1 and 1 on e2, no symmetry
                CHECK(g.coefficient == Rational(1, d));
                seen = true;
            }
        CHECK(seen);
    }

    Setup con = Setup::build(conifold(), {}, Rational(1, 3));
    GraphRequest req;
    req.setup = &con;
    req.beta_hat.degrees = {2};
    auto gs = enumerate(req);
    bool pair = false;
    for (auto& g : gs) {
        if (g.edges.size() != 2) continue;
        // two degree one edges over the same compact line, hanging off one vertex: the swap is the automorphism
        CHECK(g.automorphisms == 2);
        CHECK(g.coefficient == Rational(1, 2));
        pair = true;
    }
    CHECK(pair);
}

TEST_CASE("contributing filter") {
    Setup s = Setup::build(c3(), {{1, 2}, {0, 2}}, 1);
    {
        auto gs = graphs_at(s, 1, 2, 1);
        int leg = s.graph(1).edge_of_brane(1);
        for (auto& g : gs) {
            auto ds = degrees_on(g, leg);
            auto c = contributing_filter(g, s.graph(1), 0, {0, 0});
            if (ds.size() == 2) {
                CHECK_FALSE(c.ok());
                CHECK_FALSE(c.single_edge);
            }
        }
    }
    {
        // level 0: the divisor vertex of brane 1 meets two edges
        auto gs = graphs_at(s, 0, 2, 1);
        int bv = s.graph(0).vertex_of_brane(1);
        int found = 0;
        for (auto& g : gs)
            for (size_t v = 0; v < g.vertices.size(); ++v)
                if (g.vertices[v].label == bv && g.valence(static_cast<int>(v)) == 2) {
                    auto c = contributing_filter(g, s.graph(0), 0, {0, 0});
                    CHECK_FALSE(c.single_part);
                    CHECK_FALSE(c.ok());
                    ++found;
                }
        CHECK(found == 1);
    }
}

TEST_CASE("canonical keys ignore vertex order") {
    Setup s = Setup::build(c3(), {{1, 2}, {0, 2}}, 1);
    auto gs = graphs_at(s, 2, 2, 1);
    REQUIRE(!gs.empty());
    for (auto g : gs) {
        std::string k = canonical_key(g);
        // reverse the vertex list and remap
        int n = static_cast<int>(g.vertices.size());
        DecoratedGraph h = g;
        for (int v = 0; v < n; ++v) h.vertices[n - 1 - v] = g.vertices[v];
        for (auto& e : h.edges)
            for (int& x : e.ends) x = n - 1 - x;
        CHECK(canonical_key(h) == k);
    }
}

TEST_CASE("degree cap") {
    Setup s = Setup::build(c3(), {{1, 2}, {0, 2}}, 1);
    InvariantRequest r;
    r.setup = &s;
    r.windings = {{5, 0}, {5, 0}};
    r.max_degree = 6;
    Evaluator ev(r, InvariantKind::Closed, 2);
    CHECK_THROWS_AS(enumerate(ev.graph_request()), Error);
}
