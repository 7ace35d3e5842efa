#include "ocgw/graphs.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace ocgw {

int DecoratedGraph::vertex_of_marking(int m) const {
    for (size_t v = 0; v < vertices.size(); ++v)
        for (int x : vertices[v].markings)
            if (x == m) return static_cast<int>(v);
    return -1;
}

std::vector<int> DecoratedGraph::edges_at(int v) const {
    std::vector<int> out;
    for (size_t e = 0; e < edges.size(); ++e)
        if (edges[e].ends[0] == v || edges[e].ends[1] == v) out.push_back(static_cast<int>(e));
    return out;
}

std::string DecoratedGraph::str(const FtcyGraph& ftcy) const {
    std::ostringstream os;
    for (size_t v = 0; v < vertices.size(); ++v) {
        os << (v ? " " : "") << v << ":" << ftcy.vertices[vertices[v].label].name;
        if (!vertices[v].markings.empty()) {
            os << "{";
            for (size_t k = 0; k < vertices[v].markings.size(); ++k) {
                int m = vertices[v].markings[k];
                os << (k ? "," : "") << m + 1;
                if (marking_twist[m]) os << "^" << marking_twist[m];
            }
            os << "}";
        }
    }
    os << " |";
    for (auto& e : edges) {
        os << " " << e.ends[0] << "-" << e.ends[1] << ":" << ftcy.edges[e.label].name << ":d" << e.degree;
        if (e.lambda || e.twist[0] || e.twist[1]) os << ":l" << e.lambda << ":k" << e.twist[0] << "," << e.twist[1];
    }
    os << " | A=" << automorphisms << " c=" << to_string(coefficient);
    return os.str();
}

static IntVec pad(const IntVec& x, size_t n) {
    IntVec y(n, 0);
    std::copy(x.begin(), x.end(), y.begin());
    return y;
}

long box_order(const BoxElement& b) {
    long o = 1;
    for (auto& q : b.barycentric) {
        long d = q.get_den().get_si();
        o = o / gcd_l(o, d) * d;
    }
    return o;
}

IntVec edge_generator(const Setup& setup, const FtcyGraph& ftcy, int ftcy_edge) {
    const FtcyEdge& E = ftcy.edges.at(ftcy_edge);
    size_t n = setup.closed.rays.at(0).size();
    if (E.brane) return pad(setup.frames.at(E.brane - 1).generator, n);
    if (E.group.order == 1) return IntVec(n, 0);
    const BoxElement* best = nullptr;
    for (auto& b : E.group.box)
        if (b.barycentric[0] > 0 && (!best || b.barycentric[0] < best->barycentric[0])) best = &b;
    if (!best) throw Error(ErrorKind::UnsupportedTwistedEdge, "edge " + E.name + " has no cyclic generator");
    return best->lattice_point;
}

IntVec edge_point(const Setup& setup, const FtcyGraph& ftcy, int ftcy_edge, long degree, long lambda) {
    const FtcyEdge& E = ftcy.edges.at(ftcy_edge);
    const ClosedGeometry& cg = setup.closed;
    size_t n = cg.rays.at(0).size();
    IntVec unit;
    if (E.brane) {
        unit = pad(setup.frames.at(E.brane - 1).flag.v1, n);
    } else {
        const EdgeFrame& fr = ftcy.frame_of(ftcy_edge);
        const FtcyFlag& F = ftcy.flags[fr.near_flag];
        const Cone& cone = cg.max_cones[ftcy.vertices[fr.near].cone];
        if (F.r == 1) {
            unit = cg.rays[cone[F.missing_pos]];
        } else {
            Rational target(1, F.r);
            target.canonicalize();
            for (auto& b : cg.stabilizers[ftcy.vertices[fr.near].cone].box)
                if (b.barycentric[F.missing_pos] == target) {
                    unit = b.lattice_point;
                    break;
                }
            if (unit.empty()) throw Error(ErrorKind::Internal, "no unit lift for edge " + E.name);
        }
    }
    IntVec g = edge_generator(setup, ftcy, ftcy_edge);
    IntVec x(n);
    for (size_t i = 0; i < n; ++i) x[i] = degree * unit[i] + lambda * g[i];
    return x;
}

int flag_twist(const Setup& setup, const FtcyGraph& ftcy, int ftcy_edge, long degree, long lambda, int end) {
    IntVec x = edge_point(setup, ftcy, ftcy_edge, degree, lambda);
    const EdgeFrame& fr = ftcy.frame_of(ftcy_edge);
    int v = end == 0 ? fr.near : fr.far;
    if (end == 1)
        for (auto& c : x) c = -c;
    int cone = ftcy.vertices[v].cone;
    int k = setup.closed.stabilizers[cone].find(x, setup.closed.cone_rays(setup.closed.max_cones[cone]));
    if (k < 0) throw Error(ErrorKind::Internal, "edge point outside the span of its vertex cone");
    return k;
}

namespace {

struct Adjacency {
    std::vector<std::vector<std::pair<int, int>>> nb;  // (edge, other vertex)
    explicit Adjacency(const DecoratedGraph& g) : nb(g.vertices.size()) {
        for (size_t e = 0; e < g.edges.size(); ++e) {
            nb[g.edges[e].ends[0]].push_back({static_cast<int>(e), g.edges[e].ends[1]});
            nb[g.edges[e].ends[1]].push_back({static_cast<int>(e), g.edges[e].ends[0]});
        }
    }
};

struct Rooted {
    std::string code;
    long aut = 1;
    bool brane = false;  // subtree contains an edge over a brane leg
};

std::string vertex_token(const DecoratedGraph& g, int v) {
    std::string s = "v" + std::to_string(g.vertices[v].label);
    std::vector<int> ms = g.vertices[v].markings;
    std::sort(ms.begin(), ms.end());
    for (int m : ms) s += "m" + std::to_string(m) + "t" + std::to_string(g.marking_twist[m]);
    return s;
}

Rooted rooted(const DecoratedGraph& g, const Adjacency& adj, const FtcyGraph* ftcy, int v, int parent_edge) {
    std::vector<Rooted> kids;
    for (auto [e, w] : adj.nb[v]) {
        if (e == parent_edge) continue;
        const GraphEdge& E = g.edges[e];
        int here = E.ends[0] == v ? 0 : 1;
        Rooted c = rooted(g, adj, ftcy, w, e);
        Rooted k;
        k.code = "[e" + std::to_string(E.label) + "d" + std::to_string(E.degree) + "l" + std::to_string(E.lambda) +
                 "k" + std::to_string(E.twist[here]) + "," + std::to_string(E.twist[1 - here]) + c.code + "]";
        k.aut = c.aut;
        k.brane = c.brane || (ftcy && ftcy->edges[E.label].brane);
        kids.push_back(k);
    }
    std::sort(kids.begin(), kids.end(), [](const Rooted& a, const Rooted& b) { return a.code < b.code; });
    Rooted r;
    r.code = "(" + vertex_token(g, v);
    for (size_t i = 0; i < kids.size(); ++i) {
        r.code += kids[i].code;
        r.aut *= kids[i].aut;
        r.brane = r.brane || kids[i].brane;
        size_t j = i + 1;
        if (i == 0 || kids[i].code != kids[i - 1].code) {
            size_t run = 1;
            while (j < kids.size() && kids[j].code == kids[i].code) ++run, ++j;
            if (!kids[i].brane)
                for (size_t t = 2; t <= run; ++t) r.aut *= static_cast<long>(t);
        }
    }
    r.code += ")";
    return r;
}

std::vector<int> centers(const DecoratedGraph& g, const Adjacency& adj) {
    size_t n = g.vertices.size();
    if (n <= 2) {
        std::vector<int> all;
        for (size_t v = 0; v < n; ++v) all.push_back(static_cast<int>(v));
        return all;
    }
    std::vector<int> deg(n);
    std::vector<int> layer;
    for (size_t v = 0; v < n; ++v) {
        deg[v] = static_cast<int>(adj.nb[v].size());
        if (deg[v] <= 1) layer.push_back(static_cast<int>(v));
    }
    size_t left = n;
    while (left > 2) {
        left -= layer.size();
        std::vector<int> next;
        for (int v : layer)
            for (auto [e, w] : adj.nb[v])
                if (--deg[w] == 1) next.push_back(w);
        layer = next;
    }
    std::sort(layer.begin(), layer.end());
    return layer;
}

Rooted canonical(const DecoratedGraph& g, const FtcyGraph* ftcy) {
    Adjacency adj(g);
    auto c = centers(g, adj);
    if (c.size() == 1) return rooted(g, adj, ftcy, c[0], -1);
    // two centers joined by an edge: glue the two halves
    int edge = -1;
    for (auto [e, w] : adj.nb[c[0]])
        if (w == c[1]) edge = e;
    Rooted h0 = rooted(g, adj, ftcy, c[0], edge), h1 = rooted(g, adj, ftcy, c[1], edge);
    const GraphEdge& E = g.edges[edge];
    int at0 = E.ends[0] == c[0] ? 0 : 1;
    auto tag = [&](int here) {
        return "<e" + std::to_string(E.label) + "d" + std::to_string(E.degree) + "l" + std::to_string(E.lambda) +
               "k" + std::to_string(E.twist[here]) + "," + std::to_string(E.twist[1 - here]) + ">";
    };
    std::string a = h0.code + tag(at0) + h1.code, b = h1.code + tag(1 - at0) + h0.code;
    Rooted r;
    r.code = std::min(a, b);
    r.brane = h0.brane || h1.brane || (ftcy && ftcy->edges[E.label].brane);
    r.aut = h0.aut * h1.aut;
    if (a == b && !r.brane) r.aut *= 2;
    return r;
}

}  // namespace

std::string canonical_key(const DecoratedGraph& g) { return canonical(g, nullptr).code; }

long automorphism_order(const DecoratedGraph& g, const FtcyGraph& ftcy) { return canonical(g, &ftcy).aut; }

Rational coefficient(const DecoratedGraph& g, const Setup& setup, const FtcyGraph& ftcy) {
    Rational c(1, g.automorphisms);
    c.canonicalize();
    for (auto& e : g.edges) {
        c /= Rational(e.degree * ftcy.edges[e.label].group.order);
        for (int end = 0; end < 2; ++end) {
            const auto& G = setup.closed.stabilizers[ftcy.vertices[g.vertices[e.ends[end]].label].cone];
            c *= Rational(G.order);
            c /= Rational(box_order(G.box.at(e.twist[end])));
        }
    }
    return c;
}

std::vector<DecoratedGraph> enumerate(const GraphRequest& req) {
    const Setup& setup = *req.setup;
    const FtcyGraph& ftcy = setup.graph(req.level);
    const ClosedGeometry& cg = setup.closed;
    size_t K = ftcy.compact_edges.size();
    if (req.beta_hat.degrees.size() != K)
        throw Error(ErrorKind::InvalidInput, "curve class " + req.beta_hat.str() + " has the wrong number of entries");
    std::vector<long> rem(K, 0);
    std::vector<bool> edge_ok(K, true);
    long total = 0;
    for (size_t k = 0; k < K; ++k) {
        if (req.beta_hat.degrees[k] < 0) throw Error(ErrorKind::InvalidInput, "negative degree in " + req.beta_hat.str());
        edge_ok[k] = !(req.open_side && ftcy.edges[ftcy.compact_edges[k]].brane);
        if (edge_ok[k]) rem[k] = req.beta_hat.degrees[k];
        total += rem[k];
    }
    if (total > req.max_degree)
        throw Error(ErrorKind::InvalidInput, "total degree " + std::to_string(total) + " exceeds the enumeration cap " +
                                                 std::to_string(req.max_degree));
    auto vertex_ok = [&](int label) { return !(req.open_side && ftcy.vertices[label].brane); };

    // trees carrying labels and degrees only
    std::map<std::string, DecoratedGraph> layer;
    auto remaining = [&](const DecoratedGraph& g) {
        std::vector<long> r = rem;
        for (auto& e : g.edges) r[ftcy.compact_position(e.label)] -= e.degree;
        return r;
    };
    auto insert = [&](std::map<std::string, DecoratedGraph>& m, DecoratedGraph g) {
        g.key = canonical_key(g);
        m.emplace(g.key, std::move(g));
    };
    if (total == 0) {
        std::set<int> labels;
        int fixed = -2;
        for (auto& r : req.markings)
            if (r.label >= 0) {
                if (fixed == -2 || fixed == r.label)
                    fixed = r.label;
                else
                    fixed = -3;
            }
        if (fixed >= 0) {
            if (vertex_ok(fixed)) labels.insert(fixed);
        } else if (fixed == -2) {
            for (int v = 0; v < cg.num_base_cones; ++v) labels.insert(v);
        }
        for (int l : labels) {
            DecoratedGraph g;
            g.vertices.push_back({l, {}});
            insert(layer, g);
        }
    } else {
        for (size_t k = 0; k < K; ++k) {
            if (!edge_ok[k] || rem[k] == 0) continue;
            const EdgeFrame& fr = ftcy.edge_frames[k];
            if (!vertex_ok(fr.near) || !vertex_ok(fr.far)) continue;
            for (long d = 1; d <= rem[k]; ++d) {
                DecoratedGraph g;
                g.vertices.push_back({fr.near, {}});
                g.vertices.push_back({fr.far, {}});
                GraphEdge e;
                e.ends[0] = 0;
                e.ends[1] = 1;
                e.label = ftcy.compact_edges[k];
                e.degree = d;
                g.edges.push_back(e);
                insert(layer, g);
            }
        }
        std::map<std::string, DecoratedGraph> done;
        while (!layer.empty()) {
            std::map<std::string, DecoratedGraph> next;
            for (auto& [key, g] : layer) {
                auto r = remaining(g);
                if (std::all_of(r.begin(), r.end(), [](long x) { return x == 0; })) {
                    done.emplace(key, g);
                    continue;
                }
                for (size_t v = 0; v < g.vertices.size(); ++v) {
                    int lab = g.vertices[v].label;
                    for (size_t k = 0; k < K; ++k) {
                        if (r[k] == 0) continue;
                        const EdgeFrame& fr = ftcy.edge_frames[k];
                        if (fr.near != lab && fr.far != lab) continue;
                        int other = fr.near == lab ? fr.far : fr.near;
                        if (!vertex_ok(other)) continue;
                        if (ftcy.vertices[other].kind == VertexKind::Univalent) {
                            bool present = false;
                            for (auto& x : g.vertices) present = present || x.label == other;
                            if (present) continue;
                        }
                        for (long d = 1; d <= r[k]; ++d) {
                            DecoratedGraph h = g;
                            int w = static_cast<int>(h.vertices.size());
                            h.vertices.push_back({other, {}});
                            GraphEdge e;
                            e.label = ftcy.compact_edges[k];
                            e.degree = d;
                            e.ends[0] = fr.near == lab ? static_cast<int>(v) : w;
                            e.ends[1] = fr.near == lab ? w : static_cast<int>(v);
                            h.edges.push_back(e);
                            insert(next, h);
                        }
                    }
                }
            }
            layer = std::move(next);
        }
        layer = std::move(done);
    }
    if (layer.empty()) throw Error(ErrorKind::InfeasibleDegree, "no tree realizes the class " + req.beta_hat.str());

    // markings
    int nm = static_cast<int>(req.markings.size());
    std::map<std::string, DecoratedGraph> marked;
    for (auto& [key, g] : layer) {
        std::vector<std::vector<int>> cand(nm);
        bool feasible = true;
        for (int m = 0; m < nm; ++m) {
            for (size_t v = 0; v < g.vertices.size(); ++v) {
                int lab = g.vertices[v].label;
                bool ok = req.markings[m].label >= 0 ? lab == req.markings[m].label : lab < cg.num_base_cones;
                if (ok) cand[m].push_back(static_cast<int>(v));
            }
            feasible = feasible && !cand[m].empty();
        }
        if (!feasible) continue;
        std::vector<size_t> idx(nm, 0);
        while (true) {
            DecoratedGraph h = g;
            h.marking_twist.assign(nm, 0);
            bool ok = true;
            for (int m = 0; m < nm && ok; ++m) {
                int v = cand[m][idx[m]];
                h.vertices[v].markings.push_back(m);
                const IntVec& t = req.markings[m].twist;
                if (!t.empty()) {
                    int cone = ftcy.vertices[h.vertices[v].label].cone;
                    int k = cg.stabilizers[cone].find(pad(t, cg.rays[0].size()), cg.cone_rays(cg.max_cones[cone]));
                    if (k < 0) ok = false;
                    h.marking_twist[m] = k;
                }
            }
            if (ok) insert(marked, h);
            int m = 0;
            while (m < nm && ++idx[m] == cand[m].size()) idx[m++] = 0;
            if (m == nm) break;
        }
    }

    // twists on edges, then vertex compatibility
    std::vector<DecoratedGraph> out;
    std::set<std::string> seen;
    for (auto& [key, g] : marked) {
        size_t ne = g.edges.size();
        std::vector<long> orders(ne), lam(ne, 0);
        for (size_t e = 0; e < ne; ++e) orders[e] = ftcy.edges[g.edges[e].label].group.order;
        while (true) {
            DecoratedGraph h = g;
            for (size_t e = 0; e < ne; ++e) {
                GraphEdge& E = h.edges[e];
                E.lambda = lam[e];
                E.twist[0] = flag_twist(setup, ftcy, E.label, E.degree, E.lambda, 0);
                E.twist[1] = flag_twist(setup, ftcy, E.label, E.degree, E.lambda, 1);
            }
            bool ok = true;
            for (size_t v = 0; v < h.vertices.size() && ok; ++v) {
                int cone = ftcy.vertices[h.vertices[v].label].cone;
                const auto& G = cg.stabilizers[cone];
                if (G.order == 1) continue;
                IntVec sum(cg.rays[0].size(), 0);
                auto add = [&](const IntVec& p, long sgn) {
                    for (size_t i = 0; i < sum.size(); ++i) sum[i] += sgn * p[i];
                };
                for (int m : h.vertices[v].markings) add(G.box[h.marking_twist[m]].lattice_point, 1);
                for (int e : h.edges_at(static_cast<int>(v))) add(G.box[h.edges[e].twist[h.end_index(e, v)]].lattice_point, -1);
                ok = G.find(sum, cg.cone_rays(cg.max_cones[cone])) == 0;
            }
            if (ok) {
                h.key = canonical_key(h);
                if (seen.insert(h.key).second) {
                    h.automorphisms = automorphism_order(h, ftcy);
                    h.coefficient = coefficient(h, setup, ftcy);
                    out.push_back(std::move(h));
                }
            }
            size_t e = 0;
            while (e < ne && ++lam[e] == orders[e]) lam[e++] = 0;
            if (e == ne) break;
        }
    }
    std::sort(out.begin(), out.end(), [](const DecoratedGraph& a, const DecoratedGraph& b) { return a.key < b.key; });
    return out;
}

ContributingCheck contributing_filter(const DecoratedGraph& g, const FtcyGraph& ftcy, int n,
                                      const std::vector<int>& required_twist) {
    ContributingCheck c;
    int s = 0;
    for (auto& v : ftcy.vertices) s = std::max(s, v.brane);
    for (int i = 1; i <= s; ++i) {
        int label = ftcy.vertex_of_brane(i);
        int edge = ftcy.edge_of_brane(i);
        std::vector<int> at;
        for (size_t v = 0; v < g.vertices.size(); ++v)
            if (g.vertices[v].label == label) at.push_back(static_cast<int>(v));
        int nedges = 0;
        for (auto& e : g.edges) nedges += e.label == edge;
        if (i > ftcy.level) {
            if (at.size() != 1 || g.valence(at[0]) != 1) c.single_part = false;
            continue;
        }
        if (nedges != 1) c.single_edge = false;
        int m = n + i - 1;
        int v = g.vertex_of_marking(m);
        int want = i - 1 < static_cast<int>(required_twist.size()) ? required_twist[i - 1] : 0;
        if (v < 0 || g.vertices[v].label != label || g.marking_twist[m] != want) c.marking_placed = false;
        if (at.size() != 1 || g.vertices[at[0]].markings != std::vector<int>{m}) c.single_vertex = false;
    }
    return c;
}

}  // namespace ocgw
