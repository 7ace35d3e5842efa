#include "doctest.h"
#include "ocgw/toric.hpp"

using namespace ocgw;

namespace {
LinearForm u(int i) { return LinearForm::var(i); }

StackyFan c3() { return StackyFan({{1, 0, 1}, {0, 1, 1}, {0, 0, 1}}, {{0, 1, 2}}); }

StackyFan c3_z3() { return StackyFan({{1, 0, 1}, {0, 1, 1}, {-1, -1, 1}}, {{0, 1, 2}}); }

// count lattice points of the half-open parallelepiped by scanning a bounding box
long count_box_points(const std::vector<IntVec>& rays, std::vector<Rational>& ages) {
    long n = 0;
    for (long x = -3; x <= 3; ++x)
        for (long y = -3; y <= 3; ++y)
            for (long z = -3; z <= 3; ++z) {
                auto c = barycentric(rays, {x, y, z});
                bool in = true;
                Rational age = 0;
                for (auto& q : *c) {
                    if (q < 0 || q >= 1) in = false;
                    age += q;
                }
                if (in) {
                    ++n;
                    ages.push_back(age);
                }
            }
    return n;
}
}  // namespace

TEST_CASE("fan derived cones") {
    StackyFan con({{0, 0, 1}, {1, 0, 1}, {0, 1, 1}, {1, 1, 1}}, {{0, 1, 3}, {0, 2, 3}});
    CHECK(con.two_cones().size() == 5);
    REQUIRE(con.compact_two_cones().size() == 1);
    CHECK(con.compact_two_cones()[0] == Cone{0, 3});
    CHECK_THROWS_AS(StackyFan({{1, 0, 2}, {0, 1, 1}, {0, 0, 1}}, {{0, 1, 2}}), Error);
    CHECK_THROWS_AS(StackyFan({{1, 0, 1}, {2, 0, 1}, {3, 0, 1}}, {{0, 1, 2}}), Error);
}

TEST_CASE("stabilizers") {
    auto g = stabilizer(c3(), {0, 1, 2});
    CHECK(g.order == 1);
    CHECK(g.box.size() == 1);
    CHECK(g.box[0].age == 0);

    auto rays = c3_z3().rays();
    auto h = stabilizer(c3_z3(), {0, 1, 2});
    CHECK(h.order == 3);
    CHECK(h.order == abs(determinant(columns(rays))));
    std::vector<Rational> ages;
    CHECK(count_box_points(rays, ages) == 3);
    std::sort(ages.begin(), ages.end());
    std::vector<Rational> got;
    for (auto& b : h.box) got.push_back(b.age);
    std::sort(got.begin(), got.end());
    CHECK(got == ages);
    CHECK(got == std::vector<Rational>{0, 1, 2});

    CHECK_THROWS_AS(stabilizer(c3(), {0, 5}), Error);
    // two-cone inside the order 3 cone is smooth
    CHECK(stabilizer(c3_z3(), {0, 1}).order == 1);
    // a two-cone with a nontrivial group
    StackyFan z2({{1, 0, 1}, {-1, 0, 1}, {0, 1, 1}}, {{0, 1, 2}});
    CHECK(stabilizer(z2, {0, 1}).order == 2);
    CHECK(stabilizer(z2, {0, 1, 2}).order == 2);
}

TEST_CASE("flag data on C3") {
    auto fd = flag_data(c3(), {1, 2}, {0, 1, 2});
    CHECK(fd.r == 1);
    CHECK(fd.m == 1);
    CHECK(fd.s == 0);
    CHECK(fd.w1 == u(1));
    CHECK(fd.w2 == u(2));
    CHECK(fd.w3 == -u(1) - u(2));

    auto fd2 = flag_data(c3(), {0, 2}, {0, 1, 2});
    CHECK(fd2.u1 == u(2));
    CHECK(fd2.u2 == -u(1) - u(2));
    CHECK(fd2.w1 == u(2));
    CHECK(fd2.w2 == -u(1) - u(2));
    CHECK_THROWS_AS(flag_data(c3(), {0, 1}, {0, 1}), Error);
}

TEST_CASE("flag invariants hold on every flag") {
    std::vector<StackyFan> fans = {c3(), c3_z3(),
                                   StackyFan({{1, 0, 1}, {-1, 0, 1}, {0, 1, 1}}, {{0, 1, 2}}),
                                   StackyFan({{0, 0, 1}, {1, 0, 1}, {0, 1, 1}, {1, 1, 1}}, {{0, 1, 3}, {0, 2, 3}}),
                                   StackyFan({{0, 0, 1}, {3, 0, 1}, {0, 2, 1}}, {{0, 1, 2}})};
    for (auto& fan : fans)
        for (auto& sigma : fan.max_cones())
            for (int a = 0; a < 3; ++a)
                for (int b = a + 1; b < 3; ++b) {
                    Cone tau{sigma[a], sigma[b]};
                    auto fd = flag_data(fan, tau, sigma);
                    const auto& R = fan.rays();
                    for (int c = 0; c < 3; ++c) {
                        CHECK(R[fd.i1][c] == fd.r * fd.v1[c] - fd.s * fd.v2[c] + fd.v3[c]);
                        CHECK(R[fd.i2][c] == fd.m * fd.v2[c] + fd.v3[c]);
                        CHECK(R[fd.i3][c] == fd.v3[c]);
                    }
                    CHECK(fd.s >= 0);
                    CHECK(fd.s < fd.r);
                    CHECK((fd.w1 + fd.w2 + fd.w3).is_zero());
                    CHECK(fd.w1 == tangent_weight(fan, tau, sigma));
                    CHECK(fd.m == stabilizer(fan, tau).order);
                    CHECK(fd.r * fd.m == stabilizer(fan, sigma).order);
                    CHECK(abs(determinant(columns({fd.v1, fd.v2, fd.v3}))) == 1);
                }
}

TEST_CASE("parallel framings") {
    auto fr = parallel_framings(c3(), {{1, 2}, {0, 2}}, 1);
    CHECK(fr[0].f == 1);
    CHECK(fr[1].f == -2);
    CHECK(fr[0].a == 1);
    CHECK(fr[1].a == 1);

    auto fr3 = parallel_framings(c3(), {{1, 2}, {0, 2}, {0, 1}}, 1);
    CHECK(fr3[2].f == Rational(-1, 2));
    CHECK(fr3[2].a == 2);
    CHECK(fr3[2].b == -1);
    CHECK(fr3[0].f * fr3[1].f * fr3[2].f == 1);

    auto one = parallel_framings(c3(), {{1, 2}}, 0);
    CHECK(one[0].f == 0);
    CHECK(one[0].a == 1);
    CHECK(one[0].b == 0);

    CHECK_THROWS_AS(parallel_framings(c3(), {{1, 2}, {2, 1}}, 1), Error);
    try {
        parallel_framings(c3(), {{1, 2}, {1, 2}}, 1);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DuplicateBrane);
    }
    // u_{1,2} = u2 vanishes when f = 0
    try {
        parallel_framings(c3(), {{0, 2}}, 0);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NonGenericFraming);
    }
    StackyFan con({{0, 0, 1}, {1, 0, 1}, {0, 1, 1}, {1, 1, 1}}, {{0, 1, 3}, {0, 2, 3}});
    try {
        parallel_framings(con, {{0, 3}}, Rational(1, 3));
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotOuterBrane);
    }
    // local P2: legs through the interior ray are compact
    StackyFan p2({{1, 0, 1}, {0, 1, 1}, {-1, -1, 1}, {0, 0, 1}}, {{0, 1, 3}, {1, 2, 3}, {0, 2, 3}});
    CHECK_NOTHROW(parallel_framings(p2, {{0, 1}}, Rational(1, 3)));
    CHECK_THROWS_AS(parallel_framings(p2, {{0, 3}}, Rational(1, 3)), Error);
}

TEST_CASE("pushforward ages") {
    auto fr = parallel_framings(c3(), {{1, 2}}, 0);
    auto p = age_of_pushforward(c3(), fr[0], {3, 0});
    CHECK(p.age == 0);
    CHECK(p.eps2 == 0);
    CHECK(p.eps3 == 0);

    // C3/Z3 with a brane on {2,3}: r = 3, m = 1
    auto z3 = c3_z3();
    auto fz = parallel_framings(z3, {{1, 2}}, Rational(1, 5));
    CHECK(fz[0].flag.r == 3);
    CHECK(fz[0].flag.m == 1);
    auto q = age_of_pushforward(z3, fz[0], {1, 0});
    CHECK(q.age == 1);
    CHECK(q.h.lattice_point.size() == 3);
    // brute force: the class of d v1 modulo the cone lattice depends on d mod 3 only
    for (long d = 1; d <= 6; ++d) {
        auto a = age_of_pushforward(z3, fz[0], {d, 0});
        auto b = age_of_pushforward(z3, fz[0], {d + 3, 0});
        CHECK(a.h.barycentric == b.h.barycentric);
        CHECK((a.age == 0) == (d % 3 == 0));
        // the rotation of the brane line itself is trivial since i1 is not among the transverse rays
        Rational sum = a.eps2 + a.eps3;
        CHECK(sum <= a.age);
    }
}
