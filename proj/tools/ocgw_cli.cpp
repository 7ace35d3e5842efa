// ocgw: batch front end for the localization engine.
#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "ocgw/bps.hpp"
#include "ocgw/localize.hpp"

using namespace ocgw;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GeometryFile {
    std::vector<IntVec> rays;
    std::vector<Cone> max_cones;
    std::vector<Cone> branes;
    Rational f = 0;
    long max_degree = -1;
    int level = -1;
    std::string oracle;
};

Cone one_based(const json& j, const std::string& where, size_t nrays, size_t arity) {
    if (!j.is_array() || j.size() != arity)
        throw InputError(where + ": expected " + std::to_string(arity) + " ray indices, got " + j.dump());
    Cone c;
    for (auto& x : j) {
        if (!x.is_number_integer() || x.get<long>() < 1 || x.get<size_t>() > nrays)
            throw InputError(where + ": ray index " + x.dump() + " out of range 1.." + std::to_string(nrays));
        c.push_back(x.get<int>() - 1);
    }
    std::sort(c.begin(), c.end());
    return c;
}

GeometryFile load_geometry(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(path + ": " + e.what());  // carries line and column
    }
    GeometryFile g;
    try {
        for (size_t i = 0; i < j.at("rays").size(); ++i) {
            auto& r = j["rays"][i];
            if (!r.is_array() || r.size() != 3) throw InputError("rays[" + std::to_string(i + 1) + "]: expected three integers");
            g.rays.push_back(r.get<IntVec>());
        }
        for (size_t i = 0; i < j.at("max_cones").size(); ++i)
            g.max_cones.push_back(one_based(j["max_cones"][i], "max_cones[" + std::to_string(i + 1) + "]", g.rays.size(), 3));
        if (j.contains("branes"))
            for (size_t i = 0; i < j["branes"].size(); ++i)
                g.branes.push_back(one_based(j["branes"][i], "branes[" + std::to_string(i + 1) + "]", g.rays.size(), 2));
        if (j.contains("framing")) {
            auto& f = j["framing"];
            g.f = parse_rational(f.is_string() ? f.get<std::string>() : f.dump());
        }
        if (j.contains("options")) {
            auto& o = j["options"];
            if (o.contains("max_degree")) g.max_degree = o["max_degree"].get<long>();
            if (o.contains("level")) g.level = o["level"].get<int>();
            if (o.contains("oracle")) g.oracle = o["oracle"].get<std::string>();
        }
    } catch (const json::exception& e) {
        throw InputError(path + ": " + e.what());
    }
    return g;
}

Setup build_setup(const GeometryFile& g) {
    return Setup::build(StackyFan(g.rays, g.max_cones), g.branes, g.f);
}

std::string fan_hash(const GeometryFile& g) {
    // FNV-1a over the canonical text of rays, cones and branes
    std::string s;
    for (auto& r : g.rays)
        for (long x : r) s += std::to_string(x) + ",";
    s += "|";
    for (auto& c : g.max_cones) s += cone_str(c);
    s += "|";
    for (auto& c : g.branes) s += cone_str(c);
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

int workers() {
    const char* w = std::getenv("OCGW_WORKERS");
    int n = w ? std::atoi(w) : 1;
    return std::max(1, n);
}

// results land in their own slots, so output order does not depend on scheduling
template <class T, class F>
std::vector<T> parallel_map(size_t n, F f) {
    std::vector<T> out(n);
    std::vector<std::exception_ptr> errs(n);
    size_t nw = std::min<size_t>(workers(), std::max<size_t>(n, 1));
    std::vector<std::thread> pool;
    for (size_t w = 0; w < nw; ++w)
        pool.emplace_back([&, w] {
            for (size_t i = w; i < n; i += nw) {
                try {
                    out[i] = f(i);
                } catch (...) {
                    errs[i] = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
    return out;
}

std::vector<long> parse_windings(const std::string& s) {
    std::vector<long> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stol(item));
        } catch (...) {
            throw InputError("--windings: '" + item + "' is not an integer");
        }
    }
    return out;
}

struct ClassSpec {
    std::vector<long> internal;
    std::vector<long> windings;
    ClassVec vec() const {
        ClassVec v = internal;
        v.insert(v.end(), windings.begin(), windings.end());
        return v;
    }
};

// every class with total degree at most the bound: windings >= 1, internal degrees >= 0, not all zero
std::vector<ClassSpec> classes(const Setup& s, long bound, const std::vector<long>& fixed_windings) {
    int nb = s.num_branes();
    int ni = static_cast<int>(s.graph(0).compact_edges.size()) - nb;
    if (!fixed_windings.empty() && static_cast<int>(fixed_windings.size()) != nb)
        throw InputError("--windings needs " + std::to_string(nb) + " entries");
    std::vector<ClassSpec> out;
    ClassVec cur(ni + nb, 0);
    std::function<void(int, long)> rec = [&](int k, long left) {
        if (k == ni + nb) {
            ClassSpec c{ClassVec(cur.begin(), cur.begin() + ni), ClassVec(cur.begin() + ni, cur.end())};
            long total = 0;
            for (long x : cur) total += x;
            if (total > 0) out.push_back(c);
            return;
        }
        if (k >= ni && !fixed_windings.empty()) {
            long d = fixed_windings[k - ni];
            if (d < 1) throw InputError("--windings: entries must be positive");
            cur[k] = d;
            rec(k + 1, left - d);
            return;
        }
        for (long d = k >= ni ? 1 : 0; d <= left; ++d) {
            cur[k] = d;
            rec(k + 1, left - d);
        }
    };
    if (!fixed_windings.empty()) {
        long w = 0;
        for (long d : fixed_windings) w += d;
        bound = std::max(bound, w);
    }
    rec(0, bound);
    std::sort(out.begin(), out.end(), [](const ClassSpec& a, const ClassSpec& b) { return a.vec() < b.vec(); });
    return out;
}

InvariantRequest request_for(const Setup& s, const ClassSpec& c, const HodgeOracle* oracle, bool breakdown) {
    InvariantRequest r;
    r.setup = &s;
    r.internal = c.internal;
    for (long d : c.windings) r.windings.push_back({d, 0});
    r.oracle = oracle;
    r.breakdown = breakdown;
    return r;
}

void write_records(std::ostream& os, const GeometryFile& g, const std::string& command,
                   const std::vector<InvariantRecord>& recs, bool breakdown) {
    os << "# ocgw " << kVersion << "\n";
    os << "# fan " << fan_hash(g) << "\n";
    os << "# framing " << to_string(g.f) << "\n";
    os << "# command " << command << "\n";
    for (auto& r : recs) {
        os << r.line() << "\n";
        if (breakdown)
            for (auto& t : r.breakdown) os << "#   " << t.graph << " -> " << to_pq(t.value) << "\n";
    }
}

struct Options {
    std::string file;
    int level = -1;
    long max_degree = -1;
    std::string windings;
    std::string oracle;
    std::string out;
    bool breakdown = false;
    std::string kind = "closed";
};

struct Context {
    GeometryFile geo;
    Setup setup;
    std::optional<TableOracle> oracle;
    const HodgeOracle* oracle_ptr() const { return oracle ? &*oracle : nullptr; }
};

Context load(const Options& o) {
    Context c;
    c.geo = load_geometry(o.file);
    c.setup = build_setup(c.geo);
    std::string op = !o.oracle.empty() ? o.oracle : c.geo.oracle;
    if (!op.empty()) c.oracle = TableOracle::load(op);
    return c;
}

long bound_of(const Options& o, const Context& c, long fallback) {
    if (o.max_degree >= 0) return o.max_degree;
    if (c.geo.max_degree >= 0) return c.geo.max_degree;
    return fallback;
}

int level_of(const Options& o, const Context& c) {
    int l = o.level >= 0 ? o.level : c.geo.level;
    return l >= 0 ? l : c.setup.num_branes();
}

int cmd_describe(const Options& o) {
    Context c = load(o);
    const StackyFan& fan = c.setup.fan;
    std::cout << "rays\n";
    for (size_t i = 0; i < fan.rays().size(); ++i) {
        std::cout << "  b" << i + 1 << " = (";
        for (size_t k = 0; k < 3; ++k) std::cout << (k ? "," : "") << fan.rays()[i][k];
        std::cout << ")\n";
    }
    std::cout << "maximal cones\n";
    for (auto& s : fan.max_cones()) std::cout << "  " << cone_str(s) << " |G| = " << stabilizer(fan, s).order << "\n";
    std::cout << "compact two-cones\n";
    for (auto& t : fan.compact_two_cones()) std::cout << "  " << cone_str(t) << "\n";
    std::cout << "framing f = " << to_string(c.setup.f) << "\n";
    for (auto& b : c.setup.frames) {
        std::cout << "brane " << b.index << " tau " << cone_str(b.tau) << " sigma " << cone_str(b.sigma) << " r "
                  << b.flag.r << " m " << b.flag.m << " s " << b.flag.s << " f " << to_string(b.f) << " a " << b.a
                  << " b " << b.b << " u1 " << b.u1.str() << " u2 " << b.u2.str() << "\n";
    }
    const ClosedGeometry& cg = c.setup.closed;
    std::cout << "closed fan, rank " << cg.rank << "\n";
    for (size_t i = 0; i < cg.rays.size(); ++i) {
        std::cout << "  b" << i + 1 << " = (";
        for (size_t k = 0; k < cg.rays[i].size(); ++k) std::cout << (k ? "," : "") << cg.rays[i][k];
        std::cout << ")\n";
    }
    for (size_t k = 0; k < cg.max_cones.size(); ++k)
        std::cout << "  " << cone_str(cg.max_cones[k]) << " |G| = " << cg.stabilizers[k].order << "\n";
    return 0;
}

int cmd_figures(const Options& o) {
    Context c = load(o);
    int s = c.setup.num_branes();
    for (int l = 0; l <= s; ++l) {
        if (o.level >= 0 && l != o.level) continue;
        std::cout << c.setup.graph(l).describe();
    }
    return 0;
}

InvariantKind kind_of(const std::string& k) {
    if (k == "open") return InvariantKind::Open;
    if (k == "relative") return InvariantKind::Relative;
    if (k == "closed") return InvariantKind::Closed;
    throw InputError("--kind must be open, relative or closed");
}

int cmd_graphs(const Options& o) {
    Context c = load(o);
    InvariantKind kind = kind_of(o.kind);
    int level = kind == InvariantKind::Relative ? level_of(o, c) : 0;
    auto cls = classes(c.setup, bound_of(o, c, 2), parse_windings(o.windings));
    for (auto& cl : cls) {
        InvariantRequest r = request_for(c.setup, cl, c.oracle_ptr(), false);
        Evaluator ev(r, kind, level);
        auto gs = enumerate(ev.graph_request());
        std::cout << "class " << class_str(cl.vec()) << ": " << gs.size() << " graphs\n";
        for (auto& g : gs)
            std::cout << "  " << (ev.contributing(g) ? "+ " : "  ") << g.str(ev.ftcy()) << "\n";
    }
    return 0;
}

int cmd_invariants(const Options& o, InvariantKind kind, const std::string& name) {
    Context c = load(o);
    int level = level_of(o, c);
    auto cls = classes(c.setup, bound_of(o, c, 3), parse_windings(o.windings));
    auto recs = parallel_map<InvariantRecord>(cls.size(), [&](size_t i) {
        InvariantRequest r = request_for(c.setup, cls[i], c.oracle_ptr(), o.breakdown);
        if (kind == InvariantKind::Open) return assemble_open(r);
        if (kind == InvariantKind::Closed) return assemble_closed(r);
        return assemble_relative(r, level);
    });
    if (o.out.empty()) {
        write_records(std::cout, c.geo, name, recs, o.breakdown);
    } else {
        std::ofstream out(o.out);
        if (!out) throw InputError("cannot write " + o.out);
        write_records(out, c.geo, name, recs, o.breakdown);
    }
    return 0;
}

int cmd_verify(const Options& o) {
    Context c = load(o);
    auto cls = classes(c.setup, bound_of(o, c, 4), parse_windings(o.windings));
    auto reps = parallel_map<ChainReport>(cls.size(), [&](size_t i) {
        return verify_chain(request_for(c.setup, cls[i], c.oracle_ptr(), false));
    });
    int failed = 0;
    for (size_t i = 0; i < cls.size(); ++i) {
        std::cout << "class " << class_str(cls[i].vec()) << (reps[i].ok() ? " PASS" : " FAIL") << "\n";
        std::istringstream lines(reps[i].str());
        for (std::string line; std::getline(lines, line);) std::cout << "  " << line << "\n";
        failed += !reps[i].ok();
    }
    std::cout << cls.size() - failed << "/" << cls.size() << " classes pass\n";
    return failed ? 1 : 0;
}

int cmd_bps(const Options& o) {
    Context c = load(o);
    require_bps_scope(c.setup);
    int s = c.setup.num_branes();
    auto cls = classes(c.setup, bound_of(o, c, 4), {});
    auto vals = parallel_map<std::pair<Rational, Rational>>(cls.size(), [&](size_t i) {
        InvariantRequest r = request_for(c.setup, cls[i], c.oracle_ptr(), false);
        return std::make_pair(assemble_open(r).value, assemble_closed(r).value);
    });
    InvariantTable open, closed;
    for (size_t i = 0; i < cls.size(); ++i) {
        open[cls[i].vec()] = vals[i].first;
        closed[cls[i].vec()] = vals[i].second;
    }
    BpsTable no = lmov_invert(open, s), nc = kp_invert(closed, s);
    auto ro = integrality_report(no), rc = integrality_report(nc);
    auto bad = correspondence_mismatches(no, nc);
    std::cout << "class N_open n_open N_closed n_closed\n";
    for (auto& [k, v] : open)
        std::cout << class_str(k) << " " << to_pq(v) << " " << to_pq(no.entries[k]) << " " << to_pq(closed[k]) << " "
                  << to_pq(nc.entries[k]) << "\n";
    std::cout << "open: " << (ro.ok() ? "all integral" : "non-integral entries") << "\n";
    std::cout << "closed: " << (rc.ok() ? "all integral" : "non-integral entries") << "\n";
    for (auto& k : bad) std::cout << "correspondence FAIL at " << class_str(k) << "\n";
    if (bad.empty()) std::cout << "correspondence n_open = (-1)^" << s << " n_closed holds\n";
    bool ok = ro.ok() && rc.ok() && bad.empty();
    if (!ro.ok()) std::cout << ro.str();
    if (!rc.ok()) std::cout << rc.str();
    return ok ? 0 : 1;
}

bool input_kind(ErrorKind k) {
    switch (k) {
        case ErrorKind::Internal:
        case ErrorKind::PoleAtRestriction:
        case ErrorKind::DivisionByZero: return false;
        default: return true;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Open/closed Gromov-Witten invariants of toric Calabi-Yau 3-folds by localization"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);
    Options o;

    auto add = [&](const std::string& name, const std::string& help) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("file", o.file, "geometry file (JSON)")->required();
        return sub;
    };
    auto* describe = add("describe", "fan, branes and framing summary");
    auto* figures = add("figures", "FTCY graph weights at every level");
    figures->add_option("--level", o.level, "only this level");
    auto* graphs = add("graphs", "decorated graphs with their coefficients");
    auto* open = add("open", "open invariants");
    auto* relative = add("relative", "relative invariants at a level");
    auto* closed = add("closed", "closed invariants");
    auto* verify = add("verify", "open = relative = closed chain for every class");
    auto* bps = add("bps", "BPS inversion, correspondence and integrality");
    for (auto* sub : {graphs, open, relative, closed, verify, bps}) {
        sub->add_option("--max-degree", o.max_degree, "bound on the total degree");
        sub->add_option("--oracle", o.oracle, "table of twisted vertex integrals (JSON)");
    }
    for (auto* sub : {graphs, open, relative, closed, verify}) sub->add_option("--windings", o.windings, "d1,d2,...");
    for (auto* sub : {graphs, relative}) sub->add_option("--level", o.level, "level 0..s");
    graphs->add_option("--kind", o.kind, "open, relative or closed")->capture_default_str();
    for (auto* sub : {open, relative, closed}) {
        sub->add_flag("--breakdown", o.breakdown, "per-graph contributions");
        sub->add_option("--out", o.out, "write records to this file");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*describe) return cmd_describe(o);
        if (*figures) return cmd_figures(o);
        if (*graphs) return cmd_graphs(o);
        if (*open) return cmd_invariants(o, InvariantKind::Open, "open");
        if (*relative) return cmd_invariants(o, InvariantKind::Relative, "relative");
        if (*closed) return cmd_invariants(o, InvariantKind::Closed, "closed");
        if (*verify) return cmd_verify(o);
        if (*bps) return cmd_bps(o);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        if (e.kind() == ErrorKind::OracleRequired) std::cerr << "hint: pass --oracle with a table of vertex integrals\n";
        if (e.kind() == ErrorKind::ScopeError) std::cerr << "hint: BPS inversion covers smooth fans with integer framings\n";
        return input_kind(e.kind()) ? 2 : 1;
    }
    return 2;
}
