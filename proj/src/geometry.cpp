#include "ocgw/geometry.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

namespace ocgw {

std::vector<IntVec> ClosedGeometry::cone_rays(const Cone& c) const {
    std::vector<IntVec> out;
    for (int i : c) out.push_back(rays.at(i));
    return out;
}

std::vector<const ClosedFacet*> ClosedGeometry::facets_of(int cone) const {
    std::vector<const ClosedFacet*> out;
    for (auto& f : facets)
        if (f.cone == cone) out.push_back(&f);
    return out;
}

ClosedGeometry build_closed_fan(const StackyFan& fan, const std::vector<BraneFrame>& frames) {
    ClosedGeometry g;
    int s = static_cast<int>(frames.size());
    int R = static_cast<int>(fan.rays().size());
    g.rank = 3 + s;
    for (auto& b : fan.rays()) {
        IntVec v(g.rank, 0);
        std::copy(b.begin(), b.end(), v.begin());
        g.rays.push_back(v);
    }
    // extra rays are written in a sheared basis: e_{3+i} absorbs (0,0,1) - v_{3,i},
    // so both extra rays of a brane sit over the origin of the cross-section
    Cone aux;
    for (int i = 0; i < s; ++i) {
        const auto& fl = frames[i].flag;
        IntVec lower(g.rank, 0), upper(g.rank, 0);
        for (int c = 0; c < 3; ++c) lower[c] = -frames[i].a * fl.v1[c] - frames[i].b * fl.v2[c];
        lower[2] += 1;
        lower[3 + i] = 1;
        upper[2] = 1;
        upper[3 + i] = 1;
        g.rays.push_back(lower);
        g.rays.push_back(upper);
        aux.push_back(R + 2 * i + 1);
    }
    for (auto& sigma : fan.max_cones()) {
        Cone c = sigma;
        c.insert(c.end(), aux.begin(), aux.end());
        std::sort(c.begin(), c.end());
        g.max_cones.push_back(c);
    }
    g.num_base_cones = static_cast<int>(g.max_cones.size());
    for (int i = 0; i < s; ++i) {
        Cone c{frames[i].flag.i2, frames[i].flag.i3, R + 2 * i};
        c.insert(c.end(), aux.begin(), aux.end());
        std::sort(c.begin(), c.end());
        g.max_cones.push_back(c);
    }
    for (auto& c : g.max_cones) g.stabilizers.push_back(stabilizer_of(g.cone_rays(c)));
    for (int i = 0; i < s; ++i) {
        long expect = frames[i].a * frames[i].flag.m;
        long got = g.stabilizers[g.extra_cone(i + 1)].order;
        if (got != expect)
            throw Error(ErrorKind::Internal, "extra cone of brane " + std::to_string(i + 1) + " has group order " +
                                                 std::to_string(got) + ", expected " + std::to_string(expect));
    }
    auto aux_index = [&](int ray) -> int {
        for (int j = 0; j < s; ++j)
            if (aux[j] == ray) return j + 1;
        return 0;
    };
    for (int ci = 0; ci < static_cast<int>(g.max_cones.size()); ++ci) {
        const Cone& c = g.max_cones[ci];
        auto rays = g.cone_rays(c);
        for (int p = 0; p < static_cast<int>(c.size()); ++p) {
            ClosedFacet f;
            f.cone = ci;
            f.missing = c[p];
            for (int x : c)
                if (x != c[p]) f.facet.push_back(x);
            if (int j = aux_index(c[p])) {
                f.kind = FacetKind::Auxiliary;
                f.index = j;
            } else if (ci < g.num_base_cones) {
                f.kind = FacetKind::Base;
                for (int x : f.facet)
                    if (x < R) f.base.push_back(x);
            } else {
                const BraneFrame& bf = frames[ci - g.num_base_cones];
                if (c[p] == bf.flag.i2) {
                    f.kind = FacetKind::Transverse;
                    f.index = 2;
                } else if (c[p] == bf.flag.i3) {
                    f.kind = FacetKind::Transverse;
                    f.index = 3;
                } else {
                    f.kind = FacetKind::Base;
                    f.base = bf.tau;
                }
            }
            f.weight = cone_weight(rays, p);
            long facet_order = stabilizer_of(g.cone_rays(f.facet)).order;
            f.r = g.stabilizers[ci].order / facet_order;
            g.facets.push_back(f);
        }
    }
    return g;
}

static LinearForm truncate(const LinearForm& l, int level) {
    LinearForm out;
    for (auto& [v, c] : l.terms())
        if (v <= 3 + level) out.set(v, c);
    return out;
}

int FtcyGraph::flag_of(int edge, int vertex) const {
    for (int f : edges.at(edge).flags)
        if (flags[f].vertex == vertex) return f;
    return -1;
}

int FtcyGraph::vertex_of_brane(int brane) const {
    for (size_t v = 0; v < vertices.size(); ++v)
        if (vertices[v].brane == brane) return static_cast<int>(v);
    return -1;
}

int FtcyGraph::edge_of_brane(int brane) const {
    for (size_t e = 0; e < edges.size(); ++e)
        if (edges[e].brane == brane) return static_cast<int>(e);
    return -1;
}

int FtcyGraph::other_end(int edge, int vertex) const {
    for (int f : edges.at(edge).flags)
        if (flags[f].vertex != vertex) return flags[f].vertex;
    return -1;
}

int FtcyGraph::compact_position(int edge) const {
    for (size_t i = 0; i < compact_edges.size(); ++i)
        if (compact_edges[i] == edge) return static_cast<int>(i);
    return -1;
}

const EdgeFrame& FtcyGraph::frame_of(int edge) const {
    int k = compact_position(edge);
    if (k < 0 || k >= static_cast<int>(edge_frames.size()))
        throw Error(ErrorKind::Internal, "edge " + edges.at(edge).name + " has no frame");
    return edge_frames[k];
}

static int form_rank(const std::vector<LinearForm>& forms) {
    std::vector<int> vars;
    for (auto& l : forms)
        for (auto& [v, c] : l.terms()) vars.push_back(v);
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    std::vector<std::vector<Rational>> m;
    for (auto& l : forms) {
        std::vector<Rational> row;
        for (int v : vars) row.push_back(l.coeff(v));
        m.push_back(row);
    }
    int rank = 0;
    size_t cols = vars.size();
    for (size_t c = 0; c < cols && rank < static_cast<int>(m.size()); ++c) {
        size_t p = rank;
        while (p < m.size() && m[p][c] == 0) ++p;
        if (p == m.size()) continue;
        std::swap(m[p], m[rank]);
        for (size_t r = 0; r < m.size(); ++r) {
            if (r == static_cast<size_t>(rank) || m[r][c] == 0) continue;
            Rational fct = m[r][c] / m[rank][c];
            for (size_t k = c; k < cols; ++k) m[r][k] -= fct * m[rank][k];
        }
        ++rank;
    }
    return rank;
}

ValidationReport FtcyGraph::validate() {
    ValidationReport rep;
    auto fail = [&](const std::string& s) {
        rep.ok = false;
        rep.failures.push_back(s);
    };
    for (auto& v : vertices) {
        if (v.kind == VertexKind::Rvalent) {
            if (static_cast<int>(v.flags.size()) != dim)
                fail("vertex " + v.name + " has valency " + std::to_string(v.flags.size()));
            LinearForm sum;
            std::vector<LinearForm> ps;
            for (int f : v.flags) {
                if (flags[f].position.is_zero()) fail("zero position at " + v.name);
                sum += flags[f].position;
                ps.push_back(flags[f].position);
            }
            if (!sum.is_zero()) fail("positions at " + v.name + " sum to " + sum.str());
            if (form_rank(ps) != dim - 1) fail("positions at " + v.name + " do not span rank " + std::to_string(dim - 1));
        } else {
            if (v.flags.size() != 1) fail("univalent vertex " + v.name + " has " + std::to_string(v.flags.size()) + " edges");
            if (static_cast<int>(v.framings.size()) != dim - 1) fail("vertex " + v.name + " has wrong framing count");
            LinearForm sum;
            for (auto& l : v.framings) {
                if (l.is_zero()) fail("zero framing at " + v.name);
                sum += l;
            }
            if (!sum.is_zero()) fail("framings at " + v.name + " sum to " + sum.str());
            if (!v.flags.empty()) {
                int e = flags[v.flags[0]].edge;
                int w = other_end(e, static_cast<int>(&v - &vertices[0]));
                if (w < 0 || vertices[w].kind != VertexKind::Rvalent)
                    fail("univalent vertex " + v.name + " is not attached to an r-valent vertex");
            }
        }
    }
    edge_frames.clear();
    for (int e : compact_edges) {
        const FtcyEdge& E = edges[e];
        EdgeFrame fr;
        if (E.flags.size() != 2) {
            fail("compact edge " + E.name + " does not have two ends");
            edge_frames.push_back(fr);
            continue;
        }
        int fa = E.flags[0], fb = E.flags[1];
        if (vertices[flags[fa].vertex].kind != VertexKind::Rvalent) std::swap(fa, fb);
        if (vertices[flags[fa].vertex].kind == VertexKind::Rvalent &&
            vertices[flags[fb].vertex].kind == VertexKind::Rvalent && flags[fb].vertex < flags[fa].vertex)
            std::swap(fa, fb);
        fr.near = flags[fa].vertex;
        fr.far = flags[fb].vertex;
        fr.near_flag = fa;
        fr.far_flag = fb;
        LinearForm U = flags[fa].position * Rational(flags[fa].r);
        LinearForm sum = U + flags[fb].position * Rational(flags[fb].r);
        if (!sum.is_zero()) fail("edge " + E.name + " violates r'p' + r''p'' = 0");
        // candidates on each side
        std::vector<int> near_side;
        for (int f : vertices[fr.near].flags)
            if (f != fa) near_side.push_back(f);
        std::vector<std::pair<int, int>> far_side;  // (flag, framing slot)
        const FtcyVertex& fv = vertices[fr.far];
        if (fv.kind == VertexKind::Rvalent) {
            for (int f : fv.flags)
                if (f != fb) far_side.push_back({f, -1});
        } else {
            for (int k = 0; k < static_cast<int>(fv.framings.size()); ++k) far_side.push_back({-1, k});
        }
        if (near_side.size() != far_side.size()) {
            fail("edge " + E.name + " has mismatched valencies");
            edge_frames.push_back(fr);
            continue;
        }
        auto far_form = [&](const std::pair<int, int>& x) {
            return x.first >= 0 ? flags[x.first].position : fv.framings[x.second];
        };
        size_t n = near_side.size();
        std::vector<std::vector<std::optional<Rational>>> ok(n, std::vector<std::optional<Rational>>(n));
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) ok[i][j] = (flags[near_side[i]].position - far_form(far_side[j])).ratio_to(U);
        std::vector<int> perm(n), best;
        std::vector<bool> used(n, false);
        int found = 0;
        std::function<void(size_t)> rec = [&](size_t i) {
            if (found > 1) return;
            if (i == n) {
                if (found == 0) best = perm;
                ++found;
                return;
            }
            for (size_t j = 0; j < n; ++j)
                if (!used[j] && ok[i][j]) {
                    used[j] = true;
                    perm[i] = static_cast<int>(j);
                    rec(i + 1);
                    used[j] = false;
                }
        };
        rec(0);
        if (found == 0) {
            fail("edge " + E.name + " admits no matching of transverse directions");
        } else {
            if (found > 1) rep.notes.push_back("edge " + E.name + " has several matchings; lexicographically first used");
            for (size_t i = 0; i < n; ++i) {
                NormalLine nl;
                nl.near_flag = near_side[i];
                nl.far_flag = far_side[best[i]].first;
                nl.far_framing = far_side[best[i]].second;
                nl.c = *ok[i][best[i]];
                fr.lines.push_back(nl);
            }
        }
        edge_frames.push_back(fr);
    }
    return rep;
}

std::string FtcyGraph::describe() const {
    std::ostringstream os;
    os << "level " << level << " dim " << dim << "\n";
    for (auto& v : vertices) {
        os << "vertex " << v.name << (v.kind == VertexKind::Rvalent ? " r-valent" : " univalent") << "\n";
        for (int f : v.flags) {
            const auto& F = flags[f];
            os << "  " << edges[F.edge].name << (edges[F.edge].kind == EdgeKind::Compact ? " compact" : " ray")
               << " p=" << F.position.str() << " r=" << F.r << "\n";
        }
        for (size_t k = 0; k < v.framings.size(); ++k) os << "  f" << k + 2 << "=" << v.framings[k].str() << "\n";
    }
    return os.str();
}

FtcyGraph build_intermediate(const StackyFan& fan, const std::vector<BraneFrame>& frames,
                             const ClosedGeometry& closed, int level) {
    int s = static_cast<int>(frames.size());
    if (level < 0 || level > s) throw Error(ErrorKind::InvalidInput, "level must lie in 0.." + std::to_string(s));
    FtcyGraph g;
    g.level = level;
    g.dim = 3 + level;
    int nb = closed.num_base_cones;
    for (int c = 0; c < static_cast<int>(closed.max_cones.size()); ++c) {
        FtcyVertex v;
        v.cone = c;
        if (c < nb) {
            v.name = "v" + std::to_string(c);
        } else {
            v.brane = c - nb + 1;
            v.name = "vt" + std::to_string(v.brane);
            if (v.brane > level) v.kind = VertexKind::Univalent;
        }
        g.vertices.push_back(v);
    }
    std::map<Cone, int> edge_id;
    for (int c = 0; c < static_cast<int>(closed.max_cones.size()); ++c) {
        FtcyVertex& v = g.vertices[c];
        auto fs = closed.facets_of(c);
        for (int p = 0; p < static_cast<int>(fs.size()); ++p) {
            const ClosedFacet& cf = *fs[p];
            bool keep;
            if (cf.kind == FacetKind::Auxiliary)
                keep = cf.index <= level && v.kind == VertexKind::Rvalent;
            else if (cf.kind == FacetKind::Transverse)
                keep = v.kind == VertexKind::Rvalent;
            else
                keep = true;
            if (!keep) continue;
            auto it = edge_id.find(cf.facet);
            int e;
            if (it == edge_id.end()) {
                FtcyEdge E;
                E.facet = cf.facet;
                E.group = stabilizer_of(closed.cone_rays(cf.facet));
                if (cf.kind == FacetKind::Base) {
                    for (auto& bf : frames)
                        if (bf.tau == cf.base) E.brane = bf.index;
                    if (E.brane)
                        E.name = "e" + std::to_string(E.brane);
                    else {
                        E.name = "t";
                        for (int x : cf.base) E.name += std::to_string(x + 1);
                    }
                } else {
                    E.name = "d" + std::to_string(cf.kind == FacetKind::Auxiliary ? 3 + cf.index : cf.index) + "(" +
                             v.name + ")";
                }
                e = static_cast<int>(g.edges.size());
                g.edges.push_back(E);
                edge_id[cf.facet] = e;
            } else {
                e = it->second;
            }
            FtcyFlag F;
            F.edge = e;
            F.vertex = c;
            F.position = truncate(cf.weight, level);
            F.r = cf.r;
            F.missing_pos = p;
            F.kind = cf.kind;
            F.index = cf.index;
            int fid = static_cast<int>(g.flags.size());
            g.flags.push_back(F);
            g.edges[e].flags.push_back(fid);
            v.flags.push_back(fid);
        }
        if (v.kind == VertexKind::Univalent) {
            // framings f_2, f_3, then f_{3+j} for j <= level
            const ClosedFacet *d2 = nullptr, *d3 = nullptr;
            std::vector<const ClosedFacet*> dj(level + 1, nullptr);
            for (auto* cf : fs) {
                if (cf->kind == FacetKind::Transverse) (cf->index == 2 ? d2 : d3) = cf;
                if (cf->kind == FacetKind::Auxiliary && cf->index <= level) dj[cf->index] = cf;
            }
            v.framings.push_back(truncate(d2->weight, level));
            v.framings.push_back(truncate(d3->weight, level));
            for (int j = 1; j <= level; ++j) v.framings.push_back(truncate(dj[j]->weight, level));
        }
    }
    for (auto& E : g.edges) E.kind = E.flags.size() == 2 ? EdgeKind::Compact : EdgeKind::Ray;
    for (auto& tau : fan.compact_two_cones())
        for (size_t e = 0; e < g.edges.size(); ++e) {
            const auto& E = g.edges[e];
            if (E.kind != EdgeKind::Compact || E.brane) continue;
            Cone base;
            for (int x : E.facet)
                if (x < static_cast<int>(fan.rays().size())) base.push_back(x);
            if (base == tau) g.compact_edges.push_back(static_cast<int>(e));
        }
    for (int i = 1; i <= s; ++i) g.compact_edges.push_back(g.edge_of_brane(i));
    ValidationReport rep = g.validate();
    if (!rep.ok) {
        std::string msg = "FTCY graph at level " + std::to_string(level) + " is invalid:";
        for (auto& f : rep.failures) msg += " " + f + ";";
        throw Error(ErrorKind::Internal, msg);
    }
    return g;
}

FtcyGraph build_intermediate(const StackyFan& fan, const std::vector<BraneFrame>& frames, int level) {
    return build_intermediate(fan, frames, build_closed_fan(fan, frames), level);
}

FtcyGraph build_relative_graph(const StackyFan& fan, const std::vector<BraneFrame>& frames) {
    return build_intermediate(fan, frames, 0);
}

long CurveClass::total() const {
    long t = 0;
    for (long d : degrees) t += d;
    return t;
}

std::string CurveClass::str() const {
    std::string s = "(";
    for (size_t i = 0; i < degrees.size(); ++i) s += (i ? "," : "") + std::to_string(degrees[i]);
    return s + ")";
}

OpenClass project_to_open(const CurveClass& beta_hat, int num_branes) {
    OpenClass oc;
    size_t k = beta_hat.degrees.size() - num_branes;
    oc.beta.degrees.assign(beta_hat.degrees.begin(), beta_hat.degrees.begin() + k);
    oc.windings.assign(beta_hat.degrees.begin() + k, beta_hat.degrees.end());
    return oc;
}

CurveClass project_to_closed(const CurveClass& beta_hat) { return beta_hat; }

Setup Setup::build(const StackyFan& fan, const std::vector<Cone>& branes, const Rational& f) {
    Setup s;
    s.fan = fan;
    s.f = f;
    s.frames = parallel_framings(fan, branes, f);
    s.closed = build_closed_fan(fan, s.frames);
    for (int l = 0; l <= s.num_branes(); ++l) s.levels.push_back(build_intermediate(fan, s.frames, s.closed, l));
    return s;
}

}  // namespace ocgw
