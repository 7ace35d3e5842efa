#include "ocgw/localize.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace ocgw {

Insertion Insertion::divisor(int ray) {
    Insertion i;
    i.kind = InsertionKind::DivisorClass;
    i.ray = ray;
    return i;
}

Insertion Insertion::twisted_unit(const IntVec& box) {
    Insertion i;
    i.kind = InsertionKind::TwistedUnit;
    i.box = box;
    return i;
}

Insertion Insertion::point(int cone, const IntVec& box) {
    Insertion i;
    i.kind = InsertionKind::PointClass;
    i.cone = cone;
    i.box = box;
    return i;
}

int Insertion::degree() const {
    switch (kind) {
        case InsertionKind::DivisorClass: return 2;
        case InsertionKind::PointClass: return 6;
        default: return 0;
    }
}

std::string Insertion::str() const {
    auto vec = [](const IntVec& v) {
        std::string s;
        for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
        return s;
    };
    switch (kind) {
        case InsertionKind::DivisorClass: return "D" + std::to_string(ray + 1);
        case InsertionKind::TwistedUnit: return "1[" + vec(box) + "]";
        case InsertionKind::PointClass: return "pt" + std::to_string(cone + 1) + (box.empty() ? "" : "[" + vec(box) + "]");
        default: return "table";
    }
}

std::string VertexQuery::key() const {
    std::string s = std::to_string(group_order) + "|";
    for (size_t i = 0; i < twists.size(); ++i) {
        s += i ? ";" : "";
        for (size_t j = 0; j < twists[i].size(); ++j) s += (j ? "," : "") + to_string(twists[i][j]);
    }
    return s;
}

TableOracle TableOracle::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::InvalidInput, "cannot open oracle table " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorKind::InvalidInput, path + ": " + e.what());
    }
    TableOracle t;
    for (auto& e : j.at("entries")) {
        VertexQuery q;
        q.group_order = e.at("order").get<long>();
        for (auto& tw : e.at("twists")) {
            std::vector<Rational> c;
            std::stringstream ss(tw.get<std::string>());
            std::string item;
            while (std::getline(ss, item, ',')) c.push_back(parse_rational(item));
            q.twists.push_back(c);
        }
        t.entries[q.key()] = RatFunc(parse_rational(e.at("value").get<std::string>()));
    }
    return t;
}

std::optional<RatFunc> TableOracle::lookup(const VertexQuery& q) const {
    auto it = entries.find(q.key());
    if (it == entries.end()) return std::nullopt;
    return it->second;
}

Rational psi_integral(const std::vector<int>& k) {
    int n = static_cast<int>(k.size());
    if (n < 3) return 0;
    long sum = 0;
    for (int x : k) {
        if (x < 0) return 0;
        sum += x;
    }
    if (sum != n - 3) return 0;
    Rational r = factorial(n - 3);
    for (int x : k) r /= factorial(x);
    return r;
}

Rational psi_integral_recursive(const std::vector<int>& k) {
    int n = static_cast<int>(k.size());
    if (n < 3) return 0;
    long sum = 0;
    for (int x : k) {
        if (x < 0) return 0;
        sum += x;
    }
    if (sum != n - 3) return 0;
    if (n == 3) return 1;
    // string equation: drop a point with no psi
    size_t z = 0;
    while (k[z] != 0) ++z;
    std::vector<int> rest;
    for (size_t i = 0; i < k.size(); ++i)
        if (i != z) rest.push_back(k[i]);
    Rational r = 0;
    for (size_t j = 0; j < rest.size(); ++j) {
        if (rest[j] == 0) continue;
        --rest[j];
        r += psi_integral_recursive(rest);
        ++rest[j];
    }
    return r;
}

Product disk_factor(const Setup& setup, const BraneFrame& frame, const TwistedWinding& w) {
    const FlagData& fd = frame.flag;
    Pushforward pf = age_of_pushforward(setup.fan, frame, w);
    Rational r(fd.r), m(fd.m), s(fd.s), d(w.d);
    Rational w1 = 1 / r;
    Rational w3 = -(m + s + r * frame.f) / (r * m);
    if (pf.age.get_den() != 1) throw Error(ErrorKind::Internal, "non-integral age in a Calabi-Yau cone");
    long age = pf.age.get_num().get_si();
    long fw1 = floor_l(d * w1);
    long sign = floor_l(d * w3 - pf.eps3) + ceil_l(d / Rational(frame.a));
    Product D(sign % 2 == 0 ? Rational(1) : Rational(-1));
    D.mul_linear(frame.u1 / d, age - 1);
    D.mul(1 / (d * m * factorial(fw1)));
    for (long a = 1; a <= fw1 + age - 1; ++a) {
        LinearForm t = fd.w2 * d + frame.u1 * (Rational(a) - pf.eps2);
        if (t.is_zero()) return Product(Rational(0));
        D.mul_linear(t);
        D.mul_linear(frame.u1, -1);
    }
    return D;
}

CurveClass InvariantRequest::beta_hat() const {
    CurveClass c;
    c.degrees = internal;
    for (auto& w : windings) c.degrees.push_back(w.d);
    return c;
}

std::string InvariantRecord::class_key() const {
    std::string s = beta_hat.str() + " ";
    for (size_t i = 0; i < windings.size(); ++i) {
        s += (i ? "," : "") + std::to_string(windings[i].d);
        if (windings[i].lambda) s += ":" + std::to_string(windings[i].lambda);
    }
    if (windings.empty()) s += "-";
    return s;
}

std::string InvariantRecord::line() const {
    std::string k = kind == InvariantKind::Open       ? "open"
                    : kind == InvariantKind::Closed   ? "closed"
                                                      : "relative(" + std::to_string(level) + ")";
    std::string s = k + " " + class_key();
    if (!insertions.empty()) {
        s += " [";
        for (size_t i = 0; i < insertions.size(); ++i) s += (i ? "," : "") + insertions[i].str();
        s += "]";
    }
    return s + " " + to_pq(value);
}

static IntVec pad(const IntVec& x, size_t n) {
    IntVec y(n, 0);
    std::copy(x.begin(), x.end(), y.begin());
    return y;
}

Evaluator::Evaluator(const InvariantRequest& req, InvariantKind kind, int level)
    : req_(req), setup_(*req.setup), kind_(kind), level_(level) {
    int s = setup_.num_branes();
    if (kind == InvariantKind::Open) level_ = 0;
    if (kind == InvariantKind::Closed) level_ = s;
    if (level_ < 0 || level_ > s) throw Error(ErrorKind::InvalidInput, "level must lie in 0.." + std::to_string(s));
    ftcy_ = &setup_.graph(level_);
    if (static_cast<int>(req.windings.size()) != s)
        throw Error(ErrorKind::InvalidInput, "expected " + std::to_string(s) + " windings");
    size_t internal = ftcy_->compact_edges.size() - s;
    if (req.internal.size() != internal)
        throw Error(ErrorKind::InvalidInput, "expected " + std::to_string(internal) + " internal degrees");
    size_t n = setup_.closed.rays[0].size();
    for (int i = 1; i <= s; ++i) {
        const TwistedWinding& w = req.windings[i - 1];
        if (w.d < 1) throw Error(ErrorKind::InvalidInput, "winding of brane " + std::to_string(i) + " must be positive");
        int e = ftcy_->edge_of_brane(i);
        ktilde_.push_back(flag_twist(setup_, *ftcy_, e, w.d, w.lambda, 1));
        IntVec p = pad(age_of_pushforward(setup_.fan, setup_.frames[i - 1], w).point, n);
        for (auto& x : p) x = -x;
        open_twist_.push_back(p);
    }
}

GraphRequest Evaluator::graph_request() const {
    GraphRequest g;
    g.setup = &setup_;
    g.level = level_;
    g.open_side = kind_ == InvariantKind::Open;
    g.beta_hat = req_.beta_hat();
    g.max_degree = req_.max_degree;
    size_t n = setup_.closed.rays[0].size();
    for (auto& ins : req_.insertions) {
        MarkingRule r;
        if (ins.kind == InsertionKind::PointClass) {
            r.label = ins.cone;
            if (!ins.box.empty()) r.twist = pad(ins.box, n);
        } else if (ins.kind == InsertionKind::TwistedUnit) {
            r.twist = pad(ins.box, n);
        }
        g.markings.push_back(r);
    }
    for (int i = 1; i <= setup_.num_branes(); ++i) {
        MarkingRule r;
        if (kind_ == InvariantKind::Open) {
            r.label = setup_.fan.max_cone_index(setup_.frames[i - 1].sigma);
            r.twist = open_twist_[i - 1];
        } else {
            r.label = ftcy_->vertex_of_brane(i);
            int cone = ftcy_->vertices[r.label].cone;
            r.twist = setup_.closed.stabilizers[cone].box.at(ktilde_[i - 1]).lattice_point;
        }
        g.markings.push_back(r);
    }
    return g;
}

LinearForm Evaluator::position(int, int flag) const { return ftcy_->flags.at(flag).position; }

std::vector<LinearForm> Evaluator::invariant_positions(int label, const BoxElement& k) const {
    std::vector<LinearForm> out;
    for (int f : ftcy_->vertices[label].flags)
        if (k.barycentric.at(ftcy_->flags[f].missing_pos) == 0) out.push_back(ftcy_->flags[f].position);
    return out;
}

static const StabilizerGroup& group_of(const Setup& s, const FtcyGraph& ftcy, int label) {
    return s.closed.stabilizers[ftcy.vertices[label].cone];
}

Product Evaluator::flag(const DecoratedGraph& g, int e, int end) const {
    int label = g.vertices[g.edges[e].ends[end]].label;
    const BoxElement& k = group_of(setup_, *ftcy_, label).box.at(g.edges[e].twist[end]);
    Product p;
    for (auto& l : invariant_positions(label, k)) p.mul_linear(l);
    return p;
}

Product Evaluator::edge(const DecoratedGraph& g, int e) const {
    const GraphEdge& E = g.edges[e];
    const EdgeFrame& fr = ftcy_->frame_of(E.label);
    const FtcyFlag& nf = ftcy_->flags[fr.near_flag];
    const FtcyFlag& ff = ftcy_->flags[fr.far_flag];
    Rational d(E.degree);
    LinearForm U = nf.position * Rational(nf.r);
    LinearForm step = U / d;
    Product h;
    bool far_divisor = ftcy_->vertices[fr.far].kind == VertexKind::Univalent;
    // tangent line; the divisor end carries no tangent sections
    for (long j = 1; j <= floor_l(d / Rational(nf.r)); ++j) h.mul_linear(step * Rational(j), -1);
    if (!far_divisor)
        for (long j = 1; j <= floor_l(d / Rational(ff.r)); ++j) h.mul_linear(step * Rational(-j), -1);
    const BoxElement& k = group_of(setup_, *ftcy_, fr.near).box.at(E.twist[0]);
    for (auto& nl : fr.lines) {
        const FtcyFlag& lf = ftcy_->flags[nl.near_flag];
        Rational eps = k.barycentric.at(lf.missing_pos);
        Rational cd = nl.c * d;
        if (cd >= 0) {
            for (Rational j = eps; j <= cd; j += 1) {
                LinearForm wt = lf.position - step * j;
                if (!wt.is_zero()) h.mul_linear(wt, -1);
            }
        } else {
            for (Rational j = eps - 1; j > cd; j -= 1) {
                LinearForm wt = lf.position - step * j;
                if (!wt.is_zero()) h.mul_linear(wt, 1);
            }
        }
    }
    return h;
}

Product Evaluator::marking_insertion(const DecoratedGraph& g, int m) const {
    int v = g.vertex_of_marking(m);
    int label = g.vertices[v].label;
    const StabilizerGroup& G = group_of(setup_, *ftcy_, label);
    const BoxElement& k = G.box.at(g.marking_twist[m]);
    int n = req_.n();
    auto point_class = [&]() {
        Product p;
        for (auto& l : invariant_positions(label, k)) p.mul_linear(l);
        return p;
    };
    if (m < n) {
        const Insertion& ins = req_.insertions[m];
        int cone = ftcy_->vertices[label].cone;
        const Cone& rays = setup_.closed.max_cones[cone];
        switch (ins.kind) {
            case InsertionKind::DivisorClass: {
                if (cone >= setup_.closed.num_base_cones) return Product(Rational(0));
                for (int f : ftcy_->vertices[label].flags)
                    if (rays[ftcy_->flags[f].missing_pos] == ins.ray) return Product::linear(ftcy_->flags[f].position);
                return Product(Rational(0));
            }
            case InsertionKind::TwistedUnit: {
                auto c = barycentric(setup_.closed.cone_rays(rays), pad(ins.box, setup_.closed.rays[0].size()));
                if (!c) return Product(Rational(0));
                for (auto& q : *c)
                    if (q < 0 || q >= 1) return Product(Rational(0));
                return Product(Rational(1));
            }
            case InsertionKind::PointClass:
                return label == ins.cone ? point_class() : Product(Rational(0));
            case InsertionKind::RestrictionTable: {
                auto it = ins.table.find(label);
                return it == ins.table.end() ? Product(Rational(0)) : Product::from(it->second);
            }
        }
    }
    int i = m - n + 1;
    if (kind_ == InvariantKind::Open) return point_class();
    // relative marking at an r-valent brane vertex
    if (label != ftcy_->vertex_of_brane(i)) return Product(Rational(0));
    int leg = ftcy_->flag_of(ftcy_->edge_of_brane(i), label);
    int delta2 = -1;
    for (int f : ftcy_->vertices[label].flags)
        if (ftcy_->flags[f].kind == FacetKind::Transverse && ftcy_->flags[f].index == 2) delta2 = f;
    const BoxElement& kt = G.box.at(ktilde_[i - 1]);
    if (kt.is_identity()) return Product::linear(ftcy_->flags[leg].position) * Product::linear(ftcy_->flags[delta2].position);
    if (kt.barycentric.at(ftcy_->flags[leg].missing_pos) == 0) return Product::linear(ftcy_->flags[leg].position);
    return Product(Rational(1));
}

Product Evaluator::vertex(const DecoratedGraph& g, int v) const {
    int label = g.vertices[v].label;
    const StabilizerGroup& G = group_of(setup_, *ftcy_, label);
    auto es = g.edges_at(v);
    const auto& ms = g.vertices[v].markings;
    int N = static_cast<int>(es.size() + ms.size());
    int n = req_.n();
    std::vector<LinearForm> poles;
    Product out(Rational(1, G.order));
    bool trivial = true;
    VertexQuery q;
    q.group_order = G.order;
    for (int e : es) {
        const GraphEdge& E = g.edges[e];
        int end = g.end_index(e, v);
        const BoxElement& k = G.box.at(E.twist[end]);
        trivial = trivial && k.is_identity();
        q.twists.push_back(k.barycentric);
        const FtcyFlag& F = ftcy_->flags[ftcy_->flag_of(E.label, label)];
        poles.push_back(F.position * Rational(F.r) / Rational(E.degree));
        out.mul(Rational(box_order(k)));
        out *= flag(g, e, end);
    }
    for (int m : ms) {
        const BoxElement& k = G.box.at(g.marking_twist[m]);
        trivial = trivial && k.is_identity();
        q.twists.push_back(k.barycentric);
        if (kind_ == InvariantKind::Open && m >= n) {
            const TwistedWinding& w = req_.windings[m - n];
            poles.push_back(setup_.frames[m - n].u1 / Rational(w.d));
        }
        out *= marking_insertion(g, m);
    }
    if (out.is_zero()) return out;
    if (N >= 3) {
        if (!trivial) {
            if (!req_.oracle)
                throw Error(ErrorKind::OracleRequired, "stable vertex " + ftcy_->vertices[label].name + " with twists " +
                                                           q.key() + " in graph " + g.key);
            auto val = req_.oracle->lookup(q);
            if (!val) throw Error(ErrorKind::OracleRequired, "oracle has no entry " + q.key());
            // the oracle value replaces the whole integral, including 1/|G|
            out.mul(Rational(G.order));
            out.mul(*val);
            return out;
        }
        for (int f : ftcy_->vertices[label].flags) out.mul_linear(ftcy_->flags[f].position, -1);
        RatFunc S(0);
        for (auto& W : poles) S += RatFunc(W).inverse();
        if (N > 3) {
            if (S.is_zero()) return Product(Rational(0));
            out.mul(S.pow(N - 3));
        }
        for (auto& W : poles) out.mul_linear(W, -1);
        return out;
    }
    // unstable vertices
    if (!es.empty()) {
        out *= flag(g, es[0], g.end_index(es[0], v)).inverse();
    } else {
        for (auto& l : invariant_positions(label, G.box.at(g.marking_twist[ms[0]]))) out.mul_linear(l, -1);
    }
    if (N == 2) {
        if (poles.size() == 2) {
            LinearForm s = poles[0] + poles[1];
            if (s.is_zero()) throw Error(ErrorKind::DivisionByZero, "opposite weights at a two-pointed vertex in " + g.key);
            out.mul_linear(s, -1);
        } else if (poles.empty()) {
            return Product(Rational(0));
        }
    } else {
        if (poles.empty()) return Product(Rational(0));
        out.mul_linear(poles[0]);
    }
    return out;
}

Product Evaluator::divisor_vertex(const DecoratedGraph& g, int v, bool stand_in) const {
    int label = g.vertices[v].label;
    const FtcyVertex& V = ftcy_->vertices[label];
    int i = V.brane;
    int m = req_.n() + i - 1;
    Product out;
    bool twisted_marking = g.vertex_of_marking(m) != v || g.marking_twist[m] != 0;
    if (!twisted_marking) out.mul_linear(V.framings[0]);
    auto es = g.edges_at(v);
    if (es.size() == 1) return out;
    if (!stand_in)
        throw Error(ErrorKind::Internal, "rubber term needed at " + V.name + " in graph " + g.key);
    int t = 0;
    for (int e : es) t += g.edges[e].twist[g.end_index(e, v)] == 0;
    bool all = t == static_cast<int>(es.size()) && !twisted_marking;
    int e2 = 2 * t - (all ? 2 : 0) + (t == 0 ? 1 : 0);
    int ea = t - (all ? 1 : 0);
    out.mul_linear(V.framings[0], e2);
    for (size_t j = 2; j < V.framings.size(); ++j) out.mul_linear(V.framings[j], ea);
    return out;
}

Product Evaluator::prefactor() const {
    Product p;
    if (kind_ != InvariantKind::Open) return p;
    for (int i = 0; i < setup_.num_branes(); ++i) {
        const BraneFrame& fr = setup_.frames[i];
        p.mul(Rational(fr.flag.r * fr.flag.m));
        p *= disk_factor(setup_, fr, req_.windings[i]);
    }
    return p;
}

Product Evaluator::contribution(const DecoratedGraph& g, bool stand_in) const {
    Product p(g.coefficient);
    p *= prefactor();
    for (size_t e = 0; e < g.edges.size(); ++e) p *= edge(g, static_cast<int>(e));
    for (size_t v = 0; v < g.vertices.size(); ++v) {
        if (p.is_zero()) return p;
        if (ftcy_->vertices[g.vertices[v].label].kind == VertexKind::Univalent)
            p *= divisor_vertex(g, static_cast<int>(v), stand_in);
        else
            p *= vertex(g, static_cast<int>(v));
    }
    return p;
}

RestrictionPlan Evaluator::plan() const { return framing_plan(setup_.f, level_); }

bool Evaluator::contributing(const DecoratedGraph& g) const {
    if (kind_ == InvariantKind::Open) return true;
    return contributing_filter(g, *ftcy_, req_.n(), ktilde_).ok();
}

static InvariantRecord assemble(const InvariantRequest& req, InvariantKind kind, int level) {
    Evaluator ev(req, kind, level);
    InvariantRecord rec;
    rec.kind = kind;
    rec.level = ev.ftcy().level;
    rec.beta_hat = req.beta_hat();
    rec.windings = req.windings;
    rec.insertions = req.insertions;
    rec.value = 0;
    auto graphs = enumerate(ev.graph_request());
    for (auto& g : graphs) {
        bool c = ev.contributing(g);
        if (!c && !req.debug) continue;
        Product p = ev.contribution(g);
        if (p.is_zero()) continue;
        if (p.degree() != 0)
            throw Error(ErrorKind::Internal, "contribution of degree " + std::to_string(p.degree()) + " in graph " + g.key);
        Rational v = p.restrict(ev.plan()).value();
        if (!c && v != 0)
            throw Error(ErrorKind::Internal, "graph outside the contributing set survives restriction: " + g.key);
        rec.value += v;
        if (req.breakdown) rec.breakdown.push_back({g.str(ev.ftcy()), v});
    }
    return rec;
}

InvariantRecord assemble_open(const InvariantRequest& req) { return assemble(req, InvariantKind::Open, 0); }

InvariantRecord assemble_relative(const InvariantRequest& req, int level) {
    return assemble(req, InvariantKind::Relative, level);
}

InvariantRecord assemble_closed(const InvariantRequest& req) {
    return assemble(req, InvariantKind::Closed, req.setup->num_branes());
}

bool ChainReport::ok() const {
    return std::all_of(steps.begin(), steps.end(), [](const ChainStep& s) { return s.ok; });
}

std::string ChainReport::str() const {
    std::ostringstream os;
    for (auto& s : steps)
        os << (s.ok ? "PASS " : "FAIL ") << s.name << ": " << to_string(s.lhs) << " vs " << to_string(s.rhs) << "\n";
    return os.str();
}

ChainReport verify_chain(const InvariantRequest& req) {
    ChainReport r;
    int s = req.setup->num_branes();
    r.open = assemble_open(req).value;
    for (int l = 0; l <= s; ++l) r.relative.push_back(assemble_relative(req, l).value);
    r.closed = assemble_closed(req).value;
    int total = 0;
    for (int i = 0; i < s; ++i) {
        long e = ceil_l(Rational(req.windings[i].d) / Rational(req.setup->frames[i].a)) - 1;
        total += static_cast<int>(e);
        r.step_signs.push_back(e % 2 == 0 ? 1 : -1);
    }
    r.open_sign = total % 2 == 0 ? 1 : -1;
    auto add = [&](const std::string& name, const Rational& a, const Rational& b) {
        r.steps.push_back({name, a, b, a == b});
    };
    add("open = sign * relative(0)", r.open, r.relative[0] * r.open_sign);
    for (int l = 0; l < s; ++l)
        add("relative(" + std::to_string(l) + ") = sign * relative(" + std::to_string(l + 1) + ")", r.relative[l],
            r.relative[l + 1] * r.step_signs[l]);
    add("relative(" + std::to_string(s) + ") = closed", r.relative[s], r.closed);
    return r;
}

static int components_without(const DecoratedGraph& g, int label) {
    size_t n = g.vertices.size();
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    for (auto& e : g.edges) {
        if (g.vertices[e.ends[0]].label == label || g.vertices[e.ends[1]].label == label) continue;
        parent[find(e.ends[0])] = find(e.ends[1]);
    }
    int c = 0;
    for (size_t v = 0; v < n; ++v)
        if (g.vertices[v].label != label && find(static_cast<int>(v)) == static_cast<int>(v)) ++c;
    return c;
}

PowerCount structural_power(const Evaluator& ev, const DecoratedGraph& g) {
    const FtcyGraph& ftcy = ev.ftcy();
    PowerCount pc;
    int l = ftcy.level;
    int s = static_cast<int>(ev.relative_twists().size());
    for (int i = 1; i <= l; ++i) {
        int label = ftcy.vertex_of_brane(i);
        int leg = ftcy.edge_of_brane(i);
        int e0 = 0;
        for (auto& e : g.edges) e0 += e.label == leg;
        pc.aux.push_back(e0 - components_without(g, label));
    }
    if (std::any_of(pc.aux.begin(), pc.aux.end(), [](int x) { return x != 0; })) return pc;
    int n = static_cast<int>(g.marking_twist.size()) - s;
    int total = 0;
    for (int i = 1; i <= s; ++i) {
        int label = ftcy.vertex_of_brane(i);
        int v = -1;
        for (size_t x = 0; x < g.vertices.size(); ++x)
            if (g.vertices[x].label == label) v = static_cast<int>(x);
        auto es = g.edges_at(v);
        int E = static_cast<int>(es.size());
        int t = 0;
        for (int e : es) t += g.edges[e].twist[g.end_index(e, v)] == 0;
        int m = n + i - 1;
        bool kt_trivial = ev.relative_twists()[i - 1] == 0;
        if (i > l) {
            if (E == 1) continue;
            bool all = t == E && kt_trivial;
            total += 2 * t - (all ? 2 : 0) + (t == 0 ? 1 : 0) - t + (kt_trivial ? 1 : 0);
            if (t == 0) pc.framing_at_least = true;
            continue;
        }
        bool only = g.vertices[v].markings == std::vector<int>{m};
        if (E == 1 && only) continue;
        if (kt_trivial) {
            bool all = t == E && only && g.marking_twist[m] == 0;
            total += all ? E - 1 : 1 + t;
        } else if (t > 0) {
            total += t;
        } else {
            total += 1;
            pc.framing_at_least = true;
        }
    }
    pc.framing = total;
    return pc;
}

PowerCount measured_power(const Evaluator& ev, const DecoratedGraph& g) {
    PowerCount pc;
    Product p = ev.contribution(g, true);
    if (p.is_zero()) return pc;
    int l = ev.ftcy().level;
    for (int j = 1; j <= l; ++j) pc.aux.push_back(-p.pole_order(LinearForm::var(3 + j)));
    if (std::any_of(pc.aux.begin(), pc.aux.end(), [](int x) { return x != 0; })) return pc;
    Product q = p.restrict(auxiliary_plan(l));
    if (q.is_zero()) return pc;
    const Rational& f = ev.graph_request().setup->f;
    pc.framing = -q.pole_order(LinearForm::var(2) - LinearForm::var(1, f));
    return pc;
}

}  // namespace ocgw
