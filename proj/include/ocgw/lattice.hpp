#pragma once

#include <vector>

#include "ocgw/exactalg.hpp"

namespace ocgw {

using IntVec = std::vector<long>;
using IntMat = std::vector<IntVec>;  // row-major
using RatMat = std::vector<std::vector<Rational>>;

long gcd_l(long a, long b);
long ext_gcd(long a, long b, long& x, long& y);  // a x + b y = g >= 0
long content(const IntVec& v);
long det2(long a0, long a1, long b0, long b1);

// matrix whose columns are the given vectors
IntMat columns(const std::vector<IntVec>& vs);
Integer determinant(const IntMat& m);
RatMat inverse(const IntMat& m);  // throws InvalidCone when singular
// elementary divisors of an integer matrix (nonzero ones only)
std::vector<long> smith_diagonal(IntMat m);
int rank(const IntMat& m);

}  // namespace ocgw
