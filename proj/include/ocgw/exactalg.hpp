#pragma once

// Exact arithmetic over Q in the equivariant parameters u1, u2, u4, ..., u_{3+s}.
// Index 3 is reserved and never used: all weights live in the Calabi-Yau torus.

#include <gmpxx.h>

#include <initializer_list>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ocgw/errors.hpp"

namespace ocgw {

using Integer = mpz_class;
using Rational = mpq_class;

Rational parse_rational(const std::string& s);
std::string to_string(const Rational& q);   // "p" or "p/q"
std::string to_pq(const Rational& q);       // always "p/q"
Rational floor_q(const Rational& q);
Rational ceil_q(const Rational& q);
long floor_l(const Rational& q);
long ceil_l(const Rational& q);
Rational frac(const Rational& q);           // q - floor(q), in [0,1)
Rational factorial(long n);
Rational pow_q(const Rational& q, long e);

class LinearForm {
public:
    LinearForm() = default;
    LinearForm(std::initializer_list<std::pair<int, Rational>> terms);
    static LinearForm var(int index, const Rational& c = 1);

    const std::map<int, Rational>& terms() const { return terms_; }
    Rational coeff(int index) const;
    void set(int index, const Rational& c);
    bool is_zero() const { return terms_.empty(); }
    int max_var() const;
    int min_var() const;

    LinearForm operator+(const LinearForm& o) const;
    LinearForm operator-(const LinearForm& o) const;
    LinearForm operator-() const;
    LinearForm operator*(const Rational& c) const;
    LinearForm operator/(const Rational& c) const;
    LinearForm& operator+=(const LinearForm& o);
    LinearForm& operator-=(const LinearForm& o);

    bool operator==(const LinearForm& o) const { return terms_ == o.terms_; }
    bool operator!=(const LinearForm& o) const { return terms_ != o.terms_; }
    bool operator<(const LinearForm& o) const { return terms_ < o.terms_; }

    LinearForm substitute(int v, const LinearForm& image) const;
    Rational evaluate(const std::map<int, Rational>& point) const;
    // this == r * other, if such r exists (other nonzero)
    std::optional<Rational> ratio_to(const LinearForm& other) const;
    // scale so that the coefficient of the smallest variable is 1; returns the scale
    std::pair<Rational, LinearForm> normalized() const;

    std::string str() const;

private:
    std::map<int, Rational> terms_;
};

LinearForm operator*(const Rational& c, const LinearForm& l);

using Monomial = std::vector<int>;  // exponent by variable index, trailing zeros trimmed

class Poly {
public:
    Poly() = default;
    Poly(const Rational& c);
    Poly(const LinearForm& l);
    static Poly monomial(const Monomial& m, const Rational& c);

    const std::map<Monomial, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    Rational constant_term() const;
    size_t size() const { return terms_.size(); }

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator-() const;
    Poly operator*(const Poly& o) const;
    Poly operator*(const Rational& c) const;
    Poly& operator+=(const Poly& o);
    Poly& operator*=(const Poly& o);
    bool operator==(const Poly& o) const { return terms_ == o.terms_; }
    bool operator!=(const Poly& o) const { return terms_ != o.terms_; }
    Poly pow(int e) const;

    int total_degree() const;
    std::optional<int> homogeneous_degree() const;
    int degree_in(int v) const;
    std::vector<int> variables() const;
    Rational content() const;  // positive gcd-like normalizer of the coefficients
    Monomial min_monomial() const;  // componentwise minimum exponent

    Rational evaluate(const std::map<int, Rational>& point) const;
    Poly substitute(int v, const LinearForm& image) const;
    // exact quotient by a nonzero linear form, or nullopt when it does not divide
    std::optional<Poly> divide_linear(const LinearForm& l) const;
    int multiplicity(const LinearForm& l) const;
    Poly divide_monomial(const Monomial& m) const;

    std::string str() const;

private:
    void add_term(const Monomial& m, const Rational& c);
    std::map<Monomial, Rational> terms_;
};

class RatFunc {
public:
    RatFunc() : num_(Rational(0)), den_(Rational(1)) {}
    RatFunc(const Rational& c) : num_(c), den_(Rational(1)) {}
    RatFunc(int c) : RatFunc(Rational(c)) {}
    RatFunc(const LinearForm& l) : num_(l), den_(Rational(1)) {}
    RatFunc(const Poly& p) : num_(p), den_(Rational(1)) {}
    RatFunc(const Poly& num, const Poly& den);

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    std::optional<Rational> as_constant() const;
    std::optional<int> homogeneous_degree() const;

    RatFunc operator+(const RatFunc& o) const;
    RatFunc operator-(const RatFunc& o) const;
    RatFunc operator-() const;
    RatFunc operator*(const RatFunc& o) const;
    RatFunc operator/(const RatFunc& o) const;
    RatFunc& operator+=(const RatFunc& o) { return *this = *this + o; }
    RatFunc& operator*=(const RatFunc& o) { return *this = *this * o; }
    RatFunc inverse() const;
    RatFunc pow(int e) const;

    bool equals(const RatFunc& o) const;  // cross multiplication
    Rational evaluate(const std::map<int, Rational>& point) const;
    std::string str() const;

private:
    void normalize();
    Poly num_, den_;
};

enum class ArithOp { Add, Sub, Mul, Div };
RatFunc ratfunc_arith(const RatFunc& a, const RatFunc& b, ArithOp op);

struct Substitution {
    int var;
    LinearForm image;
};
using RestrictionPlan = std::vector<Substitution>;

// u4..u_{3+level} -> 0, then u2 -> f u1
RestrictionPlan framing_plan(const Rational& f, int level);
// u4..u_{3+level} -> 0 only
RestrictionPlan auxiliary_plan(int level);

RatFunc restrict(const RatFunc& f, const RestrictionPlan& plan);
int pole_order(const RatFunc& f, const LinearForm& hyperplane);

// A product c * prod L^e * rest, used to keep localization terms small until restriction.
class Product {
public:
    Product() : coeff_(1) {}
    Product(const Rational& c) : coeff_(c) {}
    static Product linear(const LinearForm& l, int e = 1);
    static Product from(const RatFunc& f);

    bool is_zero() const { return coeff_ == 0; }
    const Rational& coeff() const { return coeff_; }
    const std::map<LinearForm, int>& factors() const { return factors_; }
    const RatFunc& rest() const { return rest_; }

    Product& operator*=(const Product& o);
    Product operator*(const Product& o) const;
    Product& mul_linear(const LinearForm& l, int e = 1);
    Product& mul(const RatFunc& f);
    Product& mul(const Rational& c);
    Product inverse() const;

    int degree() const;  // homogeneous degree, throws when the rest is not homogeneous
    int pole_order(const LinearForm& hyperplane) const;
    // number of linear factors proportional to the hyperplane (numerator minus denominator)
    int linear_power(const LinearForm& hyperplane) const;
    Product restrict(const RestrictionPlan& plan) const;
    RatFunc expand() const;
    Rational value() const;  // requires a constant after restriction

private:
    Rational coeff_;
    std::map<LinearForm, int> factors_;
    RatFunc rest_ = RatFunc(1);
};

}  // namespace ocgw
