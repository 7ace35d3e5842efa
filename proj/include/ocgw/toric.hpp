#pragma once

#include <optional>
#include <vector>

#include "ocgw/exactalg.hpp"
#include "ocgw/lattice.hpp"

namespace ocgw {

using Cone = std::vector<int>;  // sorted, 0-based ray indices

struct BoxElement {
    IntVec lattice_point;
    std::vector<Rational> barycentric;  // in the order of the cone's rays
    Rational age;
    bool is_identity() const { return age == 0; }
};

struct StabilizerGroup {
    long order = 1;
    std::vector<long> snf_diagonal;
    std::vector<BoxElement> box;  // box[0] is the identity
    // index of the box element congruent to x, or -1 when x is not in the span
    int find(const IntVec& x, const std::vector<IntVec>& rays) const;
};

// coordinates of x in terms of independent rays, nullopt if x is outside their span
std::optional<std::vector<Rational>> barycentric(const std::vector<IntVec>& rays, const IntVec& x);
StabilizerGroup stabilizer_of(const std::vector<IntVec>& rays);

// character (a_1, a_2, a_3, a_4, ...) of a rank 3+s torus as a form in u1, u2, u4, ...
// (the third coordinate is the Calabi-Yau direction and is dropped)
LinearForm character_form(const std::vector<Rational>& m);
// weight of the line dual to rays[missing] in the cone spanned by rays
LinearForm cone_weight(const std::vector<IntVec>& rays, int missing);

class StackyFan {
public:
    StackyFan() = default;
    StackyFan(std::vector<IntVec> rays, std::vector<Cone> max_cones, std::vector<IntVec> extended = {});

    const std::vector<IntVec>& rays() const { return rays_; }
    const std::vector<IntVec>& extended_vectors() const { return extended_; }
    const std::vector<Cone>& max_cones() const { return max_cones_; }
    const std::vector<Cone>& two_cones() const { return two_cones_; }
    const std::vector<Cone>& compact_two_cones() const { return compact_; }

    bool is_cone(const Cone& c) const;
    bool is_compact(const Cone& tau) const;
    std::vector<int> max_cones_containing(const Cone& tau) const;
    int max_cone_index(const Cone& sigma) const;  // -1 if absent
    std::vector<IntVec> cone_rays(const Cone& c) const;
    // tau lies on the boundary of the convex hull of the cross-section polygon
    bool on_hull_boundary(const Cone& tau) const;

private:
    std::vector<IntVec> rays_, extended_;
    std::vector<Cone> max_cones_, two_cones_, compact_;
};

StabilizerGroup stabilizer(const StackyFan& fan, const Cone& cone);
// weight of the torus-invariant line of tau at the fixed point of sigma
LinearForm tangent_weight(const StackyFan& fan, const Cone& tau, const Cone& sigma);

struct FlagData {
    Cone tau, sigma;
    int i1 = 0, i2 = 0, i3 = 0;  // (b_i1, b_i2, b_i3) counterclockwise, tau = {i2, i3}
    long r = 1, m = 1, s = 0;
    IntVec v1, v2, v3;
    LinearForm u1, u2;  // dual basis projected to the Calabi-Yau torus
    LinearForm w1, w2, w3;
};

FlagData flag_data(const StackyFan& fan, const Cone& tau, const Cone& sigma);

struct BraneFrame {
    int index = 0;  // 1-based brane label
    Cone tau, sigma;
    FlagData flag;
    Rational f;
    long a = 1, b = 0;
    LinearForm u1, u2;
    IntVec generator;  // lattice point generating G_tau, zero when trivial
};

std::vector<BraneFrame> parallel_framings(const StackyFan& fan, const std::vector<Cone>& branes,
                                          const Rational& f);

struct TwistedWinding {
    long d = 1;
    long lambda = 0;  // multiple of the generator of G_tau
};

struct Pushforward {
    IntVec point;
    BoxElement h;
    Rational age, eps2, eps3;
};

Pushforward age_of_pushforward(const StackyFan& fan, const BraneFrame& frame, const TwistedWinding& w);

std::string cone_str(const Cone& c);  // 1-based, e.g. "{2,3}"

}  // namespace ocgw
