#include <map>

#include "doctest.h"
#include "ocgw/geometry.hpp"

using namespace ocgw;

namespace {
LinearForm u(int i) { return LinearForm::var(i); }

StackyFan c3() { return StackyFan({{1, 0, 1}, {0, 1, 1}, {0, 0, 1}}, {{0, 1, 2}}); }

// positions keyed by (vertex name, edge name)
std::map<std::pair<std::string, std::string>, LinearForm> positions(const FtcyGraph& g) {
    std::map<std::pair<std::string, std::string>, LinearForm> out;
    for (auto& f : g.flags) out[{g.vertices[f.vertex].name, g.edges[f.edge].name}] = f.position;
    return out;
}

LinearForm truncate_to(const LinearForm& l, int level) {
    LinearForm t;
    for (auto& [v, q] : l.terms())
        if (v <= 3 + level) t.set(v, q);
    return t;
}

const FtcyVertex& vertex(const FtcyGraph& g, const std::string& name) {
    for (auto& v : g.vertices)
        if (v.name == name) return v;
    throw std::runtime_error("no vertex " + name);
}
}  // namespace

TEST_CASE("relative graph of the two-brane example") {
    auto fr = parallel_framings(c3(), {{1, 2}, {0, 2}}, 1);
    auto g = build_relative_graph(c3(), fr);
    auto p = positions(g);
    CHECK(g.dim == 3);
    CHECK(p.size() == 5);
    CHECK(p[{"v0", "e1"}] == u(1));
    CHECK(p[{"v0", "e2"}] == u(2));
    CHECK(p[{"v0", "t12"}] == -u(1) - u(2));
    CHECK(p[{"vt1", "e1"}] == -u(1));
    CHECK(p[{"vt2", "e2"}] == -u(2));
    for (auto name : {"vt1", "vt2"}) {
        auto& v = vertex(g, name);
        CHECK(v.kind == VertexKind::Univalent);
        REQUIRE(v.framings.size() == 2);
        CHECK(v.framings[0] == -u(1) + u(2));
        CHECK(v.framings[1] == u(1) - u(2));
    }
    CHECK(g.compact_edges.size() == 2);
    CHECK(g.validate().ok);
}

TEST_CASE("intermediate graph at level 1") {
    auto fr = parallel_framings(c3(), {{1, 2}, {0, 2}}, 1);
    auto g = build_intermediate(c3(), fr, 1);
    auto p = positions(g);
    CHECK(g.dim == 4);
    CHECK(p[{"v0", "e1"}] == u(1));
    CHECK(p[{"v0", "e2"}] == u(2));
    CHECK(p[{"v0", "t12"}] == -u(1) - u(2) - u(4));
    CHECK(p[{"v0", "d4(v0)"}] == u(4));
    CHECK(p[{"vt1", "e1"}] == -u(1));
    CHECK(p[{"vt1", "d2(vt1)"}] == -u(1) + u(2));
    CHECK(p[{"vt1", "d3(vt1)"}] == u(1) - u(2) - u(4));
    CHECK(p[{"vt1", "d4(vt1)"}] == u(1) + u(4));
    CHECK(p[{"vt2", "e2"}] == -u(2));
    auto& v2 = vertex(g, "vt2");
    REQUIRE(v2.framings.size() == 3);
    CHECK(v2.framings[0] == -u(1) + u(2) - u(4));
    CHECK(v2.framings[1] == u(1) - u(2));
    CHECK(v2.framings[2] == u(4));
    CHECK(vertex(g, "vt1").kind == VertexKind::Rvalent);
    CHECK(p.size() == 9);
}

TEST_CASE("closed graph at level 2") {
    auto fr = parallel_framings(c3(), {{1, 2}, {0, 2}}, 1);
    auto g = build_intermediate(c3(), fr, 2);
    auto p = positions(g);
    CHECK(p.size() == 15);
    CHECK(p[{"v0", "t12"}] == -u(1) - u(2) - u(4) - u(5));
    CHECK(p[{"v0", "d4(v0)"}] == u(4));
    CHECK(p[{"v0", "d5(v0)"}] == u(5));
    CHECK(p[{"vt1", "d3(vt1)"}] == u(1) - u(2) - u(4) - u(5));
    CHECK(p[{"vt1", "d4(vt1)"}] == u(1) + u(4));
    CHECK(p[{"vt1", "d5(vt1)"}] == u(5));
    CHECK(p[{"vt2", "d2(vt2)"}] == -u(1) + u(2) - u(4) - u(5));
    CHECK(p[{"vt2", "d3(vt2)"}] == u(1) - u(2));
    CHECK(p[{"vt2", "d4(vt2)"}] == u(4));
    CHECK(p[{"vt2", "d5(vt2)"}] == u(2) + u(5));
    CHECK(p[{"vt2", "e2"}] == -u(2));
    for (auto& v : g.vertices) CHECK(v.kind == VertexKind::Rvalent);
}

TEST_CASE("closed fan rays and cones") {
    auto fr = parallel_framings(c3(), {{1, 2}, {0, 2}}, 1);
    auto cg = build_closed_fan(c3(), fr);
    std::vector<IntVec> rays = {{1, 0, 1, 0, 0},  {0, 1, 1, 0, 0}, {0, 0, 1, 0, 0}, {-1, -1, 1, 1, 0},
                                {0, 0, 1, 1, 0},  {-1, -1, 1, 0, 1}, {0, 0, 1, 0, 1}};
    CHECK(cg.rays == rays);
    std::vector<Cone> cones = {{0, 1, 2, 4, 6}, {1, 2, 3, 4, 6}, {0, 2, 4, 5, 6}};
    CHECK(cg.max_cones == cones);
    for (auto& st : cg.stabilizers) CHECK(st.order == 1);
}

namespace {
void check_closed_geometry(const StackyFan& fan, const std::vector<BraneFrame>& fr) {
    auto cg = build_closed_fan(fan, fr);
    int s = static_cast<int>(fr.size());
    for (size_t c = 0; c < cg.max_cones.size(); ++c) {
        LinearForm sum;
        for (auto* f : cg.facets_of(static_cast<int>(c))) sum += f->weight;
        CHECK(sum.is_zero());
    }
    for (int i = 1; i <= s; ++i) {
        const BraneFrame& b = fr[i - 1];
        int c = cg.extra_cone(i);
        CHECK(cg.stabilizers[c].order == b.a * b.flag.m);
        Rational a(b.a), m(b.flag.m), r(b.flag.r);
        int base = -1;
        for (int k = 0; k < cg.num_base_cones; ++k) {
            Cone c0;
            for (int x : cg.max_cones[k])
                if (x < static_cast<int>(fan.rays().size())) c0.push_back(x);
            if (c0 == b.sigma) base = k;
        }
        REQUIRE(base >= 0);
        LinearForm leg;  // weight of the brane leg at the base cone
        for (auto* f : cg.facets_of(base)) {
            if (f->kind == FacetKind::Auxiliary) CHECK(f->weight == u(3 + f->index));
            if (f->kind == FacetKind::Base) {
                CHECK(truncate_to(f->weight, 0) == tangent_weight(fan, f->base, b.sigma));
                if (f->base == b.tau) leg = f->weight;
            }
        }
        CHECK(truncate_to(leg, 0) == b.u1 / r);
        LinearForm at_extra;
        for (auto* f : cg.facets_of(c))
            if (f->kind == FacetKind::Base) at_extra = f->weight;
        for (auto* f : cg.facets_of(c)) {
            LinearForm w0 = truncate_to(f->weight, 0);
            if (f->kind == FacetKind::Base) {
                CHECK(f->weight == -(leg * (r / a)));
                CHECK(w0 == -(b.u1 / a));
                CHECK(f->r == b.a);
            } else if (f->kind == FacetKind::Transverse && f->index == 2) {
                CHECK(w0 == -(b.u1 * (b.f / m)) + b.u2 / m);
            } else if (f->kind == FacetKind::Transverse) {
                CHECK(w0 == b.u1 * (b.f / m) - b.u2 / m);
            } else if (f->index == i) {
                CHECK(f->weight == -at_extra + u(3 + i));
                CHECK(w0 == b.u1 / a);
            } else {
                CHECK(f->weight == u(3 + f->index));
            }
            if (b.a == 1 && b.flag.m == 1) CHECK(f->r == 1);
        }
    }
    for (int l = 0; l <= s; ++l) {
        auto g = build_intermediate(fan, fr, cg, l);
        CHECK(g.validate().ok);
        for (int i = 1; i <= s; ++i) {
            int e = g.edge_of_brane(i);
            CHECK(g.edges[e].group.order == fr[i - 1].flag.m);
            int fv = g.flag_of(e, g.vertex_of_brane(i));
            CHECK(g.flags[fv].r == fr[i - 1].a);
        }
        // truncation coherence against every lower level
        for (int l2 = 0; l2 < l; ++l2) {
            auto h = build_intermediate(fan, fr, cg, l2);
            auto ph = positions(h);
            for (auto& f : g.flags) {
                auto key = std::make_pair(g.vertices[f.vertex].name, g.edges[f.edge].name);
                auto it = ph.find(key);
                if (it == ph.end()) continue;
                LinearForm t;
                for (auto& [v, q] : f.position.terms())
                    if (v <= 3 + l2) t.set(v, q);
                CHECK(t == it->second);
            }
        }
    }
}
}  // namespace

TEST_CASE("closed geometry facet tables") {
    check_closed_geometry(c3(), parallel_framings(c3(), {{1, 2}, {0, 2}}, 1));
    check_closed_geometry(c3(), parallel_framings(c3(), {{1, 2}}, 0));
    auto fr3 = parallel_framings(c3(), {{1, 2}, {0, 2}, {0, 1}}, 1);
    check_closed_geometry(c3(), fr3);
    auto cg3 = build_closed_fan(c3(), fr3);
    CHECK(cg3.stabilizers[cg3.extra_cone(3)].order == 2);
    // orbifold legs: r = 3 and m = 2
    StackyFan z3({{1, 0, 1}, {0, 1, 1}, {-1, -1, 1}}, {{0, 1, 2}});
    auto fz = parallel_framings(z3, {{1, 2}, {0, 1}}, Rational(2, 7));
    CHECK(fz[0].flag.r == 3);
    check_closed_geometry(z3, fz);
    StackyFan z2({{1, 0, 1}, {-1, 0, 1}, {0, 1, 1}}, {{0, 1, 2}});
    auto f2 = parallel_framings(z2, {{0, 1}, {1, 2}}, Rational(1, 3));
    CHECK(f2[0].flag.m == 2);
    check_closed_geometry(z2, f2);
}

TEST_CASE("conifold without branes") {
    StackyFan con({{0, 0, 1}, {1, 0, 1}, {0, 1, 1}, {1, 1, 1}}, {{0, 1, 3}, {0, 2, 3}});
    auto g = build_intermediate(con, {}, 0);
    CHECK(g.vertices.size() == 2);
    REQUIRE(g.compact_edges.size() == 1);
    auto& fr = g.frame_of(g.compact_edges[0]);
    CHECK(fr.lines.size() == 2);
    std::vector<Rational> cs;
    for (auto& l : fr.lines) cs.push_back(l.c);
    std::sort(cs.begin(), cs.end());
    CHECK(cs == std::vector<Rational>{-1, -1});
}

TEST_CASE("curve class projections") {
    CurveClass b{{2, 1}};
    auto oc = project_to_open(b, 2);
    CHECK(oc.beta.degrees.empty());
    CHECK(oc.windings == std::vector<long>{2, 1});
    CHECK(project_to_closed(b) == b);
    CurveClass zero{{0, 0}};
    CHECK(project_to_open(zero, 2).beta.total() == 0);
    CurveClass con{{3}};
    CHECK(project_to_open(con, 0).beta.degrees == std::vector<long>{3});
}
