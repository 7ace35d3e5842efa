#include "ocgw/bps.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "ocgw/errors.hpp"

namespace ocgw {

bool divides(long k, const ClassVec& c) {
    for (long x : c)
        if (x % k != 0) return false;
    return true;
}

ClassVec divide(const ClassVec& c, long k) {
    ClassVec out(c);
    for (long& x : out) x /= k;
    return out;
}

std::string class_str(const ClassVec& c) {
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << c[i];
    os << ")";
    return os.str();
}

namespace {

Rational power(long k, int e) {
    Rational p = 1;
    for (int i = 0; i < std::abs(e); ++i) p *= k;
    return e >= 0 ? p : Rational(1) / p;
}

long class_content(const ClassVec& c) {
    long g = 0;
    for (long x : c) g = std::gcd(g, std::abs(x));
    return g;
}

BpsTable invert(const InvariantTable& table, int s, BpsSource source, int sign) {
    BpsTable out;
    out.source = source;
    out.s = s;
    // proper divisors have smaller total size, so they are solved first
    std::vector<std::pair<long, ClassVec>> order;
    for (const auto& [c, N] : table) {
        long size = 0;
        for (long x : c) size += std::abs(x);
        order.push_back({size, c});
    }
    std::sort(order.begin(), order.end());
    for (const auto& [size, c] : order) {
        const Rational& N = table.at(c);
        if (class_content(c) == 0) throw Error(ErrorKind::InvalidInput, "zero class in BPS table");
        Rational n = sign * N;
        for (long k = 2; k <= class_content(c); ++k) {
            if (!divides(k, c)) continue;
            auto it = out.entries.find(divide(c, k));
            if (it == out.entries.end())
                throw Error(ErrorKind::MissingDivisorEntry,
                            class_str(divide(c, k)) + " needed for " + class_str(c));
            n -= power(k, s - 3) * it->second;
        }
        out.entries[c] = n;
    }
    return out;
}

}  // namespace

BpsTable lmov_invert(const InvariantTable& table, int s) {
    return invert(table, s, BpsSource::Open, s % 2 ? -1 : 1);
}

BpsTable kp_invert(const InvariantTable& table, int s) {
    return invert(table, s, BpsSource::Closed, 1);
}

InvariantTable resum(const BpsTable& t) {
    int sign = t.source == BpsSource::Open && t.s % 2 ? -1 : 1;
    InvariantTable out;
    for (const auto& [c, n] : t.entries) {
        Rational N = 0;
        for (long k = 1; k <= class_content(c); ++k) {
            if (!divides(k, c)) continue;
            auto it = t.entries.find(divide(c, k));
            if (it == t.entries.end())
                throw Error(ErrorKind::MissingDivisorEntry,
                            class_str(divide(c, k)) + " needed for " + class_str(c));
            N += power(k, t.s - 3) * it->second;
        }
        out[c] = sign * N;
    }
    return out;
}

bool IntegralityReport::ok() const {
    for (const auto& e : entries)
        if (!e.integral) return false;
    return true;
}

std::string IntegralityReport::str() const {
    std::ostringstream os;
    for (const auto& e : entries)
        os << class_str(e.cls) << " n=" << e.n << (e.integral ? "" : "  NOT INTEGRAL") << "\n";
    os << (ok() ? "all integral" : "integrality FAILED") << "\n";
    return os.str();
}

IntegralityReport integrality_report(const BpsTable& t) {
    IntegralityReport r;
    for (const auto& [c, n] : t.entries) r.entries.push_back({c, n, n.get_den() == 1});
    return r;
}

std::vector<ClassVec> correspondence_mismatches(const BpsTable& open, const BpsTable& closed) {
    int sign = open.s % 2 ? -1 : 1;
    std::vector<ClassVec> bad;
    for (const auto& [c, n] : open.entries) {
        auto it = closed.entries.find(c);
        if (it == closed.entries.end() || n != sign * it->second) bad.push_back(c);
    }
    for (const auto& [c, n] : closed.entries)
        if (!open.entries.count(c)) bad.push_back(c);
    return bad;
}

void require_bps_scope(const Setup& setup) {
    for (const auto& cone : setup.fan.max_cones())
        if (stabilizer(setup.fan, cone).order != 1)
            throw Error(ErrorKind::ScopeError,
                        "BPS inversion needs a smooth fan; cone " + cone_str(cone) + " is an orbifold point");
    for (const auto& fr : setup.frames)
        if (fr.a != 1)
            throw Error(ErrorKind::ScopeError, "BPS inversion needs integer framings; brane " +
                                                   std::to_string(fr.index) + " has f = " + to_string(fr.f) +
                                                   ", pick f so every brane framing is an integer");
}

}  // namespace ocgw
