#include "ocgw/toric.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace ocgw {

std::string cone_str(const Cone& c) {
    std::ostringstream os;
    os << "{";
    for (size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << c[i] + 1;
    os << "}";
    return os.str();
}

std::optional<std::vector<Rational>> barycentric(const std::vector<IntVec>& rays, const IntVec& x) {
    size_t k = rays.size();
    size_t n = x.size();
    std::vector<std::vector<Rational>> a(n, std::vector<Rational>(k + 1));
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < k; ++j) a[i][j] = rays[j][i];
        a[i][k] = x[i];
    }
    std::vector<int> pivot_col;
    size_t row = 0;
    for (size_t c = 0; c < k && row < n; ++c) {
        size_t p = row;
        while (p < n && a[p][c] == 0) ++p;
        if (p == n) throw Error(ErrorKind::InvalidCone, "rays are linearly dependent");
        std::swap(a[p], a[row]);
        Rational piv = a[row][c];
        for (size_t j = 0; j <= k; ++j) a[row][j] /= piv;
        for (size_t i = 0; i < n; ++i) {
            if (i == row || a[i][c] == 0) continue;
            Rational fct = a[i][c];
            for (size_t j = 0; j <= k; ++j) a[i][j] -= fct * a[row][j];
        }
        pivot_col.push_back(static_cast<int>(c));
        ++row;
    }
    if (pivot_col.size() != k) throw Error(ErrorKind::InvalidCone, "rays are linearly dependent");
    for (size_t i = row; i < n; ++i)
        if (a[i][k] != 0) return std::nullopt;
    std::vector<Rational> c(k);
    for (size_t i = 0; i < k; ++i) c[pivot_col[i]] = a[i][k];
    return c;
}

int StabilizerGroup::find(const IntVec& x, const std::vector<IntVec>& rays) const {
    auto c = barycentric(rays, x);
    if (!c) return -1;
    for (auto& q : *c) q = frac(q);
    for (size_t i = 0; i < box.size(); ++i)
        if (box[i].barycentric == *c) return static_cast<int>(i);
    throw Error(ErrorKind::Internal, "lattice point has no box representative");
}

StabilizerGroup stabilizer_of(const std::vector<IntVec>& rays) {
    StabilizerGroup g;
    size_t k = rays.size();
    g.snf_diagonal = smith_diagonal(columns(rays));
    if (g.snf_diagonal.size() != k) throw Error(ErrorKind::InvalidCone, "rays are linearly dependent");
    g.order = 1;
    long expo = 1;
    for (long d : g.snf_diagonal) {
        g.order *= d;
        expo = std::max(expo, d);
    }
    size_t n = k ? rays[0].size() : 0;
    std::vector<long> idx(k, 0);
    while (true) {
        // x = sum (idx_j / expo) b_j must be integral
        bool integral = true;
        IntVec x(n, 0);
        for (size_t i = 0; i < n && integral; ++i) {
            long t = 0;
            for (size_t j = 0; j < k; ++j) t += idx[j] * rays[j][i];
            if (t % expo != 0) integral = false;
            x[i] = t / expo;
        }
        if (integral) {
            BoxElement b;
            b.lattice_point = x;
            b.age = 0;
            for (size_t j = 0; j < k; ++j) {
                Rational c(idx[j], expo);
                c.canonicalize();
                b.barycentric.push_back(c);
                b.age += c;
            }
            g.box.push_back(b);
        }
        size_t j = 0;
        while (j < k && ++idx[j] == expo) idx[j++] = 0;
        if (j == k) break;
    }
    std::sort(g.box.begin(), g.box.end(), [](const BoxElement& a, const BoxElement& b) {
        if (a.age != b.age) return a.age < b.age;
        return a.barycentric < b.barycentric;
    });
    if (static_cast<long>(g.box.size()) != g.order)
        throw Error(ErrorKind::Internal, "box size differs from group order");
    return g;
}

LinearForm character_form(const std::vector<Rational>& m) {
    LinearForm l;
    for (size_t i = 0; i < m.size(); ++i) {
        if (i == 2) continue;
        l.set(static_cast<int>(i) + 1, m[i]);
    }
    return l;
}

LinearForm cone_weight(const std::vector<IntVec>& rays, int missing) {
    RatMat inv = inverse(columns(rays));
    return character_form(inv[missing]);
}

StackyFan::StackyFan(std::vector<IntVec> rays, std::vector<Cone> max_cones, std::vector<IntVec> extended)
    : rays_(std::move(rays)), extended_(std::move(extended)) {
    for (size_t i = 0; i < rays_.size(); ++i) {
        if (rays_[i].size() != 3) throw Error(ErrorKind::InvalidInput, "ray " + std::to_string(i + 1) + " is not in Z^3");
        if (rays_[i][2] != 1)
            throw Error(ErrorKind::InvalidInput,
                        "ray " + std::to_string(i + 1) + " does not have third coordinate 1");
    }
    for (auto& v : extended_)
        if (v.size() != 3) throw Error(ErrorKind::InvalidInput, "extended vector is not in Z^3");
    std::set<Cone> seen;
    for (auto c : max_cones) {
        std::sort(c.begin(), c.end());
        if (c.size() != 3 || std::adjacent_find(c.begin(), c.end()) != c.end())
            throw Error(ErrorKind::InvalidCone, "maximal cone " + cone_str(c) + " needs three distinct rays");
        for (int i : c)
            if (i < 0 || i >= static_cast<int>(rays_.size()))
                throw Error(ErrorKind::InvalidCone, "maximal cone " + cone_str(c) + " has an unknown ray");
        if (determinant(columns(cone_rays(c))) == 0)
            throw Error(ErrorKind::InvalidCone, "maximal cone " + cone_str(c) + " is degenerate");
        if (!seen.insert(c).second) throw Error(ErrorKind::InvalidCone, "maximal cone " + cone_str(c) + " repeated");
        max_cones_.push_back(c);
    }
    std::map<Cone, int> count;
    for (auto& c : max_cones_)
        for (int a = 0; a < 3; ++a)
            for (int b = a + 1; b < 3; ++b) count[{c[a], c[b]}]++;
    for (auto& [t, n] : count) {
        if (n > 2) throw Error(ErrorKind::InvalidCone, "two-cone " + cone_str(t) + " lies in more than two maximal cones");
        two_cones_.push_back(t);
        if (n == 2) compact_.push_back(t);
    }
}

bool StackyFan::is_cone(const Cone& c) const {
    Cone s = c;
    std::sort(s.begin(), s.end());
    for (auto& m : max_cones_)
        if (std::includes(m.begin(), m.end(), s.begin(), s.end())) return true;
    return false;
}

bool StackyFan::is_compact(const Cone& tau) const { return max_cones_containing(tau).size() == 2; }

std::vector<int> StackyFan::max_cones_containing(const Cone& tau) const {
    Cone s = tau;
    std::sort(s.begin(), s.end());
    std::vector<int> out;
    for (size_t i = 0; i < max_cones_.size(); ++i)
        if (std::includes(max_cones_[i].begin(), max_cones_[i].end(), s.begin(), s.end()))
            out.push_back(static_cast<int>(i));
    return out;
}

int StackyFan::max_cone_index(const Cone& sigma) const {
    Cone s = sigma;
    std::sort(s.begin(), s.end());
    for (size_t i = 0; i < max_cones_.size(); ++i)
        if (max_cones_[i] == s) return static_cast<int>(i);
    return -1;
}

std::vector<IntVec> StackyFan::cone_rays(const Cone& c) const {
    std::vector<IntVec> out;
    for (int i : c) out.push_back(rays_.at(i));
    return out;
}

bool StackyFan::on_hull_boundary(const Cone& tau) const {
    const IntVec& p = rays_[tau[0]];
    const IntVec& q = rays_[tau[1]];
    bool pos = false, neg = false;
    for (size_t k = 0; k < rays_.size(); ++k) {
        long c = det2(q[0] - p[0], q[1] - p[1], rays_[k][0] - p[0], rays_[k][1] - p[1]);
        if (c > 0) pos = true;
        if (c < 0) neg = true;
    }
    return !(pos && neg);
}

StabilizerGroup stabilizer(const StackyFan& fan, const Cone& cone) {
    if (!fan.is_cone(cone)) throw Error(ErrorKind::InvalidCone, cone_str(cone) + " is not a cone of the fan");
    Cone s = cone;
    std::sort(s.begin(), s.end());
    return stabilizer_of(fan.cone_rays(s));
}

LinearForm tangent_weight(const StackyFan& fan, const Cone& tau, const Cone& sigma) {
    Cone t = tau, s = sigma;
    std::sort(t.begin(), t.end());
    std::sort(s.begin(), s.end());
    if (t.size() != 2 || s.size() != 3 || fan.max_cone_index(s) < 0 ||
        !std::includes(s.begin(), s.end(), t.begin(), t.end()))
        throw Error(ErrorKind::NotAFlag, cone_str(tau) + " in " + cone_str(sigma));
    int missing = 0;
    while (std::find(t.begin(), t.end(), s[missing]) != t.end()) ++missing;
    return cone_weight(fan.cone_rays(s), missing);
}

static IntVec lin(long a, const IntVec& x, long b, const IntVec& y) {
    IntVec z(x.size());
    for (size_t i = 0; i < x.size(); ++i) z[i] = a * x[i] + b * y[i];
    return z;
}

FlagData flag_data(const StackyFan& fan, const Cone& tau, const Cone& sigma) {
    FlagData fd;
    fd.tau = tau;
    fd.sigma = sigma;
    std::sort(fd.tau.begin(), fd.tau.end());
    std::sort(fd.sigma.begin(), fd.sigma.end());
    if (fd.tau.size() != 2 || fan.max_cone_index(fd.sigma) < 0 ||
        !std::includes(fd.sigma.begin(), fd.sigma.end(), fd.tau.begin(), fd.tau.end()))
        throw Error(ErrorKind::NotAFlag, cone_str(tau) + " in " + cone_str(sigma));
    for (int i : fd.sigma)
        if (i != fd.tau[0] && i != fd.tau[1]) fd.i1 = i;
    const auto& R = fan.rays();
    auto ccw = [&](int a, int b, int c) {
        return det2(R[a][0] - R[c][0], R[a][1] - R[c][1], R[b][0] - R[c][0], R[b][1] - R[c][1]) > 0;
    };
    if (ccw(fd.i1, fd.tau[0], fd.tau[1])) {
        fd.i2 = fd.tau[0];
        fd.i3 = fd.tau[1];
    } else {
        fd.i2 = fd.tau[1];
        fd.i3 = fd.tau[0];
    }
    const IntVec& b1 = R[fd.i1];
    const IntVec& b2 = R[fd.i2];
    const IntVec& b3 = R[fd.i3];
    fd.v3 = b3;
    IntVec w2 = lin(1, b2, -1, b3);
    fd.m = content(w2);
    IntVec v2 = w2;
    for (auto& x : v2) x /= fd.m;
    fd.v2 = v2;
    // complete v2 to a basis of Z^2 x {0}: det(v1', v2) = 1
    long X, Y;
    ext_gcd(v2[1], -v2[0], X, Y);
    IntVec v1p{X, Y, 0};
    IntVec w1 = lin(1, b1, -1, b3);
    long x = det2(w1[0], w1[1], v2[0], v2[1]);
    long y = det2(v1p[0], v1p[1], w1[0], w1[1]);
    if (x < 0) {
        x = -x;
        y = -y;
        for (auto& c : v1p) c = -c;
    }
    fd.r = x;
    fd.s = ((-y) % fd.r + fd.r) % fd.r;
    long t = (y + fd.s) / fd.r;
    fd.v1 = lin(1, v1p, t, v2);

    RatMat inv = inverse(columns({fd.v1, fd.v2, fd.v3}));
    fd.u1 = character_form(inv[0]);
    fd.u2 = character_form(inv[1]);
    Rational r(fd.r), m(fd.m), s(fd.s);
    fd.w1 = fd.u1 / r;
    fd.w2 = fd.u1 * (s / (r * m)) + fd.u2 / m;
    fd.w3 = fd.u1 * (-(m + s) / (r * m)) - fd.u2 / m;
    return fd;
}

std::vector<BraneFrame> parallel_framings(const StackyFan& fan, const std::vector<Cone>& branes,
                                          const Rational& f) {
    std::vector<BraneFrame> out;
    std::set<Cone> seen;
    LinearForm ref = LinearForm::var(2) - LinearForm::var(1, f);
    for (size_t i = 0; i < branes.size(); ++i) {
        Cone tau = branes[i];
        std::sort(tau.begin(), tau.end());
        if (tau.size() != 2 || !fan.is_cone(tau))
            throw Error(ErrorKind::InvalidCone, "brane " + cone_str(tau) + " is not a two-cone of the fan");
        if (!seen.insert(tau).second) throw Error(ErrorKind::DuplicateBrane, "brane " + cone_str(tau) + " repeated");
        if (fan.is_compact(tau) || !fan.on_hull_boundary(tau))
            throw Error(ErrorKind::NotOuterBrane, "brane " + cone_str(tau) + " is not on an outer leg");
        BraneFrame bf;
        bf.index = static_cast<int>(i) + 1;
        bf.tau = tau;
        bf.sigma = fan.max_cones()[fan.max_cones_containing(tau).at(0)];
        bf.flag = flag_data(fan, bf.tau, bf.sigma);
        bf.u1 = bf.flag.u1;
        bf.u2 = bf.flag.u2;
        Rational alpha = bf.u1.coeff(1) + f * bf.u1.coeff(2);
        if (alpha == 0)
            throw Error(ErrorKind::NonGenericFraming, "brane " + cone_str(tau) + " has u1 vanishing on the framing torus");
        Rational beta = bf.u2.coeff(1) + f * bf.u2.coeff(2);
        bf.f = beta / alpha;
        bf.a = bf.f.get_den().get_si();
        bf.b = bf.f.get_num().get_si();
        LinearForm l = bf.u2 - bf.u1 * bf.f;
        auto ratio = l.ratio_to(ref);
        if (!ratio || *ratio == 0) throw Error(ErrorKind::Internal, "framing directions are not parallel");
        StabilizerGroup gt = stabilizer(fan, tau);
        bf.generator = IntVec(3, 0);
        if (gt.order > 1) {
            const BoxElement* best = nullptr;
            for (auto& b : gt.box)
                if (b.barycentric[0] > 0 && (!best || b.barycentric[0] < best->barycentric[0])) best = &b;
            bf.generator = best->lattice_point;
        }
        out.push_back(bf);
    }
    return out;
}

Pushforward age_of_pushforward(const StackyFan& fan, const BraneFrame& frame, const TwistedWinding& w) {
    Pushforward p;
    p.point = lin(w.d, frame.flag.v1, w.lambda, frame.generator);
    auto rays = fan.cone_rays(frame.sigma);
    StabilizerGroup g = stabilizer_of(rays);
    int k = g.find(p.point, rays);
    p.h = g.box.at(k);
    p.age = p.h.age;
    for (size_t j = 0; j < frame.sigma.size(); ++j) {
        if (frame.sigma[j] == frame.flag.i2) p.eps2 = p.h.barycentric[j];
        if (frame.sigma[j] == frame.flag.i3) p.eps3 = p.h.barycentric[j];
    }
    return p;
}

}  // namespace ocgw
