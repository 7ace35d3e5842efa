#include "ocgw/exactalg.hpp"

#include <algorithm>
#include <climits>
#include <sstream>

namespace ocgw {

Rational parse_rational(const std::string& s) {
    std::string t;
    for (char c : s)
        if (!isspace(static_cast<unsigned char>(c))) t.push_back(c);
    if (t.empty()) throw Error(ErrorKind::InvalidInput, "empty rational");
    auto slash = t.find('/');
    auto valid_int = [](const std::string& x) {
        size_t i = (!x.empty() && (x[0] == '-' || x[0] == '+')) ? 1 : 0;
        if (i >= x.size()) return false;
        for (; i < x.size(); ++i)
            if (!isdigit(static_cast<unsigned char>(x[i]))) return false;
        return true;
    };
    std::string a = t.substr(0, slash);
    std::string b = slash == std::string::npos ? "1" : t.substr(slash + 1);
    if (!valid_int(a) || !valid_int(b) || b[0] == '-' || b[0] == '+')
        throw Error(ErrorKind::InvalidInput, "malformed rational '" + s + "'");
    if (a[0] == '+') a = a.substr(1);
    Integer n(a), d(b);
    if (d == 0) throw Error(ErrorKind::DivisionByZero, "rational with zero denominator '" + s + "'");
    Rational q(n, d);
    q.canonicalize();
    return q;
}

std::string to_string(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string to_pq(const Rational& q) { return q.get_num().get_str() + "/" + q.get_den().get_str(); }

Rational floor_q(const Rational& q) {
    Integer r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return Rational(r);
}

Rational ceil_q(const Rational& q) {
    Integer r;
    mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return Rational(r);
}

long floor_l(const Rational& q) { return floor_q(q).get_num().get_si(); }
long ceil_l(const Rational& q) { return ceil_q(q).get_num().get_si(); }
Rational frac(const Rational& q) { return q - floor_q(q); }

Rational factorial(long n) {
    Integer r = 1;
    for (long k = 2; k <= n; ++k) r *= k;
    return Rational(r);
}

Rational pow_q(const Rational& q, long e) {
    Rational base = e < 0 ? Rational(1) / q : q;
    long k = e < 0 ? -e : e;
    Rational r = 1;
    for (long i = 0; i < k; ++i) r *= base;
    return r;
}

// ---------------------------------------------------------------- LinearForm

static void check_var(int i) {
    if (i < 1 || i == 3) throw Error(ErrorKind::InvalidInput, "variable index u" + std::to_string(i) + " is not allowed");
}

LinearForm::LinearForm(std::initializer_list<std::pair<int, Rational>> terms) {
    for (auto& [i, c] : terms) set(i, coeff(i) + c);
}

LinearForm LinearForm::var(int index, const Rational& c) {
    LinearForm l;
    l.set(index, c);
    return l;
}

Rational LinearForm::coeff(int index) const {
    auto it = terms_.find(index);
    return it == terms_.end() ? Rational(0) : it->second;
}

void LinearForm::set(int index, const Rational& c) {
    check_var(index);
    if (c == 0)
        terms_.erase(index);
    else
        terms_[index] = c;
}

int LinearForm::max_var() const { return terms_.empty() ? 0 : terms_.rbegin()->first; }
int LinearForm::min_var() const { return terms_.empty() ? 0 : terms_.begin()->first; }

LinearForm LinearForm::operator+(const LinearForm& o) const {
    LinearForm r = *this;
    r += o;
    return r;
}
LinearForm LinearForm::operator-(const LinearForm& o) const {
    LinearForm r = *this;
    r -= o;
    return r;
}
LinearForm LinearForm::operator-() const { return *this * Rational(-1); }
LinearForm LinearForm::operator*(const Rational& c) const {
    LinearForm r;
    if (c == 0) return r;
    for (auto& [i, a] : terms_) r.terms_[i] = a * c;
    return r;
}
LinearForm LinearForm::operator/(const Rational& c) const {
    if (c == 0) throw Error(ErrorKind::DivisionByZero, "linear form divided by 0");
    return *this * (Rational(1) / c);
}
LinearForm& LinearForm::operator+=(const LinearForm& o) {
    for (auto& [i, c] : o.terms_) set(i, coeff(i) + c);
    return *this;
}
LinearForm& LinearForm::operator-=(const LinearForm& o) {
    for (auto& [i, c] : o.terms_) set(i, coeff(i) - c);
    return *this;
}
LinearForm operator*(const Rational& c, const LinearForm& l) { return l * c; }

LinearForm LinearForm::substitute(int v, const LinearForm& image) const {
    Rational c = coeff(v);
    if (c == 0) return *this;
    LinearForm r = *this;
    r.terms_.erase(v);
    r += image * c;
    return r;
}

Rational LinearForm::evaluate(const std::map<int, Rational>& point) const {
    Rational r = 0;
    for (auto& [i, c] : terms_) {
        auto it = point.find(i);
        if (it == point.end()) throw Error(ErrorKind::InvalidInput, "missing value for u" + std::to_string(i));
        r += c * it->second;
    }
    return r;
}

std::optional<Rational> LinearForm::ratio_to(const LinearForm& other) const {
    if (other.is_zero()) return std::nullopt;
    if (is_zero()) return Rational(0);
    if (terms_.size() != other.terms_.size()) return std::nullopt;
    auto it = terms_.begin();
    auto jt = other.terms_.begin();
    if (it->first != jt->first) return std::nullopt;
    Rational r = it->second / jt->second;
    for (; it != terms_.end(); ++it, ++jt) {
        if (it->first != jt->first || it->second != r * jt->second) return std::nullopt;
    }
    return r;
}

std::pair<Rational, LinearForm> LinearForm::normalized() const {
    if (is_zero()) return {Rational(0), *this};
    Rational s = terms_.begin()->second;
    return {s, *this / s};
}

std::string LinearForm::str() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (auto& [i, c] : terms_) {
        Rational a = abs(c);
        std::string sign = c < 0 ? "-" : (first ? "" : "+");
        out += sign;
        if (a != 1) out += to_string(a) + "*";
        out += "u" + std::to_string(i);
        first = false;
    }
    return out;
}

// ---------------------------------------------------------------- Poly

static void trim(Monomial& m) {
    while (!m.empty() && m.back() == 0) m.pop_back();
}

static Monomial mono_mul(const Monomial& a, const Monomial& b) {
    Monomial r(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    return r;
}

static int mono_deg(const Monomial& m) {
    int d = 0;
    for (int e : m) d += e;
    return d;
}

void Poly::add_term(const Monomial& m, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Poly::Poly(const Rational& c) {
    if (c != 0) terms_.emplace(Monomial{}, c);
}

Poly::Poly(const LinearForm& l) {
    for (auto& [i, c] : l.terms()) {
        Monomial m(i + 1, 0);
        m[i] = 1;
        terms_.emplace(m, c);
    }
}

Poly Poly::monomial(const Monomial& m, const Rational& c) {
    Poly p;
    Monomial t = m;
    trim(t);
    p.add_term(t, c);
    return p;
}

bool Poly::is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty()); }

Rational Poly::constant_term() const {
    auto it = terms_.find(Monomial{});
    return it == terms_.end() ? Rational(0) : it->second;
}

Poly Poly::operator+(const Poly& o) const {
    Poly r = *this;
    r += o;
    return r;
}
Poly& Poly::operator+=(const Poly& o) {
    for (auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}
Poly Poly::operator-(const Poly& o) const {
    Poly r = *this;
    for (auto& [m, c] : o.terms_) r.add_term(m, -c);
    return r;
}
Poly Poly::operator-() const { return *this * Rational(-1); }
Poly Poly::operator*(const Rational& c) const {
    Poly r;
    if (c == 0) return r;
    for (auto& [m, a] : terms_) r.terms_.emplace_hint(r.terms_.end(), m, a * c);
    return r;
}
Poly Poly::operator*(const Poly& o) const {
    Poly r;
    if (is_zero() || o.is_zero()) return r;
    Rational t;
    for (auto& [ma, ca] : terms_)
        for (auto& [mb, cb] : o.terms_) {
            t = ca * cb;
            r.add_term(mono_mul(ma, mb), t);
        }
    return r;
}
Poly& Poly::operator*=(const Poly& o) { return *this = *this * o; }

Poly Poly::pow(int e) const {
    if (e < 0) throw Error(ErrorKind::InvalidInput, "negative polynomial power");
    Poly r(Rational(1)), b = *this;
    while (e) {
        if (e & 1) r *= b;
        e >>= 1;
        if (e) b *= b;
    }
    return r;
}

int Poly::total_degree() const {
    int d = 0;
    for (auto& [m, c] : terms_) d = std::max(d, mono_deg(m));
    return d;
}

std::optional<int> Poly::homogeneous_degree() const {
    if (terms_.empty()) return std::nullopt;
    int d = mono_deg(terms_.begin()->first);
    for (auto& [m, c] : terms_)
        if (mono_deg(m) != d) return std::nullopt;
    return d;
}

int Poly::degree_in(int v) const {
    int d = 0;
    for (auto& [m, c] : terms_)
        if (static_cast<int>(m.size()) > v) d = std::max(d, m[v]);
    return d;
}

std::vector<int> Poly::variables() const {
    std::vector<int> seen;
    for (auto& [m, c] : terms_)
        for (size_t i = 0; i < m.size(); ++i)
            if (m[i] && std::find(seen.begin(), seen.end(), static_cast<int>(i)) == seen.end()) seen.push_back(static_cast<int>(i));
    std::sort(seen.begin(), seen.end());
    return seen;
}

Rational Poly::content() const {
    if (terms_.empty()) return 1;
    Integer g = 0, l = 1;
    for (auto& [m, c] : terms_) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_num_mpz_t());
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
    }
    Rational r(g, l);
    r.canonicalize();
    if (terms_.rbegin()->second < 0) r = -r;
    return r;
}

Monomial Poly::min_monomial() const {
    if (terms_.empty()) return {};
    Monomial r = terms_.begin()->first;
    for (auto& [m, c] : terms_) {
        if (m.size() < r.size()) r.resize(m.size());
        for (size_t i = 0; i < r.size(); ++i) r[i] = std::min(r[i], m[i]);
    }
    trim(r);
    return r;
}

Poly Poly::divide_monomial(const Monomial& d) const {
    Poly r;
    for (auto& [m, c] : terms_) {
        Monomial t = m;
        for (size_t i = 0; i < d.size(); ++i) t[i] -= d[i];
        trim(t);
        r.terms_.emplace(t, c);
    }
    return r;
}

Rational Poly::evaluate(const std::map<int, Rational>& point) const {
    Rational r = 0;
    for (auto& [m, c] : terms_) {
        Rational t = c;
        for (size_t i = 0; i < m.size(); ++i) {
            if (!m[i]) continue;
            auto it = point.find(static_cast<int>(i));
            if (it == point.end()) throw Error(ErrorKind::InvalidInput, "missing value for u" + std::to_string(i));
            t *= pow_q(it->second, m[i]);
        }
        r += t;
    }
    return r;
}

// split into coefficients of powers of v
static std::vector<Poly> split_by(const Poly& p, int v) {
    std::vector<Poly> parts(p.degree_in(v) + 1);
    for (auto& [m, c] : p.terms()) {
        Monomial t = m;
        int e = 0;
        if (static_cast<int>(t.size()) > v) {
            e = t[v];
            t[v] = 0;
            trim(t);
        }
        parts[e] += Poly::monomial(t, c);
    }
    return parts;
}

static Poly times_var_power(const Poly& p, int v, int e) {
    if (e == 0) return p;
    Monomial m(v + 1, 0);
    m[v] = e;
    return p * Poly::monomial(m, Rational(1));
}

Poly Poly::substitute(int v, const LinearForm& image) const {
    if (degree_in(v) == 0) return *this;
    auto parts = split_by(*this, v);
    Poly img(image);
    Poly r = parts.back();
    for (int k = static_cast<int>(parts.size()) - 2; k >= 0; --k) r = r * img + parts[k];
    return r;
}

std::optional<Poly> Poly::divide_linear(const LinearForm& l) const {
    if (l.is_zero()) throw Error(ErrorKind::DivisionByZero, "division by the zero linear form");
    if (is_zero()) return Poly();
    int v = l.max_var();
    Rational c = l.coeff(v);
    // l = c (v - alpha)
    LinearForm rest = l;
    rest.set(v, 0);
    Poly alpha(-rest / c);
    auto parts = split_by(*this, v);
    int n = static_cast<int>(parts.size()) - 1;
    if (n == 0) return std::nullopt;
    std::vector<Poly> q(n);
    q[n - 1] = parts[n];
    for (int k = n - 1; k >= 1; --k) q[k - 1] = parts[k] + alpha * q[k];
    Poly rem = parts[0] + alpha * q[0];
    if (!rem.is_zero()) return std::nullopt;
    Poly out;
    for (int k = 0; k < n; ++k) out += times_var_power(q[k], v, k);
    return out * (Rational(1) / c);
}

int Poly::multiplicity(const LinearForm& l) const {
    if (is_zero()) throw Error(ErrorKind::InvalidInput, "multiplicity in the zero polynomial");
    int k = 0;
    Poly p = *this;
    while (true) {
        auto q = p.divide_linear(l);
        if (!q) return k;
        p = std::move(*q);
        ++k;
    }
}

std::string Poly::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        auto& [m, c] = *it;
        Rational a = abs(c);
        os << (c < 0 ? "-" : (first ? "" : "+"));
        bool has_var = mono_deg(m) > 0;
        if (a != 1 || !has_var) os << to_string(a) << (has_var ? "*" : "");
        bool firstv = true;
        for (size_t i = 0; i < m.size(); ++i) {
            if (!m[i]) continue;
            if (!firstv) os << "*";
            os << "u" << i;
            if (m[i] > 1) os << "^" << m[i];
            firstv = false;
        }
        first = false;
    }
    return os.str();
}

// ---------------------------------------------------------------- RatFunc

RatFunc::RatFunc(const Poly& num, const Poly& den) : num_(num), den_(den) {
    if (den_.is_zero()) throw Error(ErrorKind::DivisionByZero, "rational function with zero denominator");
    normalize();
}

void RatFunc::normalize() {
    if (num_.is_zero()) {
        den_ = Poly(Rational(1));
        return;
    }
    Monomial a = num_.min_monomial(), b = den_.min_monomial();
    Monomial common(std::min(a.size(), b.size()));
    for (size_t i = 0; i < common.size(); ++i) common[i] = std::min(a[i], b[i]);
    trim(common);
    if (!common.empty()) {
        num_ = num_.divide_monomial(common);
        den_ = den_.divide_monomial(common);
    }
    Rational c = den_.content();
    if (c != 1) {
        Rational inv = Rational(1) / c;
        num_ = num_ * inv;
        den_ = den_ * inv;
    }
}

std::optional<Rational> RatFunc::as_constant() const {
    if (num_.is_zero()) return Rational(0);
    if (num_.is_constant() && den_.is_constant()) return num_.constant_term() / den_.constant_term();
    // proportional num and den
    if (num_.size() != den_.size()) return std::nullopt;
    auto it = num_.terms().begin();
    auto jt = den_.terms().begin();
    Rational r = it->second / jt->second;
    for (; it != num_.terms().end(); ++it, ++jt)
        if (it->first != jt->first || it->second != r * jt->second) return std::nullopt;
    return r;
}

std::optional<int> RatFunc::homogeneous_degree() const {
    if (num_.is_zero()) return std::nullopt;
    auto a = num_.homogeneous_degree(), b = den_.homogeneous_degree();
    if (!a || !b) return std::nullopt;
    return *a - *b;
}

RatFunc RatFunc::operator+(const RatFunc& o) const {
    if (o.is_zero()) return *this;
    if (is_zero()) return o;
    if (den_ == o.den_) return RatFunc(num_ + o.num_, den_);
    return RatFunc(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}
RatFunc RatFunc::operator-(const RatFunc& o) const { return *this + (-o); }
RatFunc RatFunc::operator-() const {
    RatFunc r = *this;
    r.num_ = -r.num_;
    return r;
}
RatFunc RatFunc::operator*(const RatFunc& o) const {
    if (is_zero() || o.is_zero()) return RatFunc();
    return RatFunc(num_ * o.num_, den_ * o.den_);
}
RatFunc RatFunc::operator/(const RatFunc& o) const {
    if (o.is_zero()) throw Error(ErrorKind::DivisionByZero, "division by the zero function");
    return RatFunc(num_ * o.den_, den_ * o.num_);
}
RatFunc RatFunc::inverse() const { return RatFunc(1) / *this; }
RatFunc RatFunc::pow(int e) const {
    if (e < 0) return inverse().pow(-e);
    return RatFunc(num_.pow(e), den_.pow(e));
}

bool RatFunc::equals(const RatFunc& o) const { return num_ * o.den_ == o.num_ * den_; }

Rational RatFunc::evaluate(const std::map<int, Rational>& point) const {
    Rational d = den_.evaluate(point);
    if (d == 0) throw Error(ErrorKind::DivisionByZero, "evaluation on the denominator's zero set");
    return num_.evaluate(point) / d;
}

std::string RatFunc::str() const {
    if (den_.is_constant()) {
        return (num_ * (Rational(1) / den_.constant_term())).str();
    }
    return "(" + num_.str() + ")/(" + den_.str() + ")";
}

RatFunc ratfunc_arith(const RatFunc& a, const RatFunc& b, ArithOp op) {
    switch (op) {
        case ArithOp::Add: return a + b;
        case ArithOp::Sub: return a - b;
        case ArithOp::Mul: return a * b;
        case ArithOp::Div: return a / b;
    }
    throw Error(ErrorKind::Internal, "unknown arithmetic operation");
}

RestrictionPlan auxiliary_plan(int level);

RestrictionPlan framing_plan(const Rational& f, int level) {
    RestrictionPlan p = auxiliary_plan(level);
    p.push_back({2, LinearForm::var(1, f)});
    return p;
}

RestrictionPlan auxiliary_plan(int level) {
    RestrictionPlan p;
    for (int j = 1; j <= level; ++j) p.push_back({3 + j, LinearForm()});
    return p;
}

static LinearForm step_hyperplane(const Substitution& s) {
    if (s.image.coeff(s.var) != 0) throw Error(ErrorKind::InvalidInput, "substitution image contains its own variable");
    return LinearForm::var(s.var) - s.image;
}

RatFunc restrict(const RatFunc& f, const RestrictionPlan& plan) {
    Poly num = f.num(), den = f.den();
    for (auto& s : plan) {
        LinearForm h = step_hyperplane(s);
        while (true) {
            Poly dsub = den.substitute(s.var, s.image);
            if (!dsub.is_zero()) {
                num = num.substitute(s.var, s.image);
                den = dsub;
                break;
            }
            Poly nsub = num.substitute(s.var, s.image);
            if (!nsub.is_zero())
                throw Error(ErrorKind::PoleAtRestriction, "pole along " + h.str() + " = 0");
            auto qn = num.divide_linear(h);
            auto qd = den.divide_linear(h);
            if (!qn || !qd) throw Error(ErrorKind::Internal, "exact division failed after vanishing test");
            num = *qn;
            den = *qd;
        }
    }
    return RatFunc(num, den);
}

int pole_order(const RatFunc& f, const LinearForm& hyperplane) {
    if (hyperplane.is_zero()) throw Error(ErrorKind::InvalidInput, "pole order along the zero form");
    if (f.is_zero()) throw Error(ErrorKind::InvalidInput, "pole order of the zero function");
    return f.den().multiplicity(hyperplane) - f.num().multiplicity(hyperplane);
}

// ---------------------------------------------------------------- Product

Product Product::linear(const LinearForm& l, int e) {
    Product p;
    p.mul_linear(l, e);
    return p;
}

Product Product::from(const RatFunc& f) {
    Product p;
    p.mul(f);
    return p;
}

Product& Product::mul_linear(const LinearForm& l, int e) {
    if (e == 0 || coeff_ == 0) return *this;
    if (l.is_zero()) {
        if (e < 0) throw Error(ErrorKind::DivisionByZero, "zero linear factor in a denominator");
        coeff_ = 0;
        factors_.clear();
        rest_ = RatFunc(1);
        return *this;
    }
    auto [s, n] = l.normalized();
    coeff_ *= pow_q(s, e);
    int& slot = factors_[n];
    slot += e;
    if (slot == 0) factors_.erase(n);
    return *this;
}

Product& Product::mul(const RatFunc& f) {
    if (coeff_ == 0) return *this;
    if (f.is_zero()) {
        coeff_ = 0;
        factors_.clear();
        rest_ = RatFunc(1);
        return *this;
    }
    if (auto c = f.as_constant()) {
        coeff_ *= *c;
        return *this;
    }
    rest_ = rest_ * f;
    return *this;
}

Product& Product::mul(const Rational& c) {
    if (c == 0) {
        coeff_ = 0;
        factors_.clear();
        rest_ = RatFunc(1);
    } else {
        coeff_ *= c;
    }
    return *this;
}

Product& Product::operator*=(const Product& o) {
    if (coeff_ == 0) return *this;
    if (o.coeff_ == 0) return mul(Rational(0));
    coeff_ *= o.coeff_;
    for (auto& [l, e] : o.factors_) {
        int& slot = factors_[l];
        slot += e;
        if (slot == 0) factors_.erase(l);
    }
    mul(o.rest_);
    return *this;
}

Product Product::operator*(const Product& o) const {
    Product r = *this;
    r *= o;
    return r;
}

Product Product::inverse() const {
    if (coeff_ == 0) throw Error(ErrorKind::DivisionByZero, "inverse of a zero product");
    Product r(Rational(1) / coeff_);
    for (auto& [l, e] : factors_) r.factors_[l] = -e;
    r.rest_ = rest_.inverse();
    return r;
}

int Product::degree() const {
    int d = 0;
    for (auto& [l, e] : factors_) d += e;
    if (!rest_.num().is_constant() || !rest_.den().is_constant()) {
        auto h = rest_.homogeneous_degree();
        if (!h) throw Error(ErrorKind::Internal, "non-homogeneous factor");
        d += *h;
    }
    return d;
}

int Product::linear_power(const LinearForm& hyperplane) const {
    auto n = hyperplane.normalized().second;
    auto it = factors_.find(n);
    return it == factors_.end() ? 0 : it->second;
}

int Product::pole_order(const LinearForm& hyperplane) const {
    if (coeff_ == 0) throw Error(ErrorKind::InvalidInput, "pole order of the zero function");
    int k = -linear_power(hyperplane);
    return k + ocgw::pole_order(rest_, hyperplane);
}

Product Product::restrict(const RestrictionPlan& plan) const {
    if (coeff_ == 0) return *this;
    Product cur = *this;
    for (auto& s : plan) {
        LinearForm h = step_hyperplane(s).normalized().second;
        int net = cur.linear_power(h);
        Poly num = cur.rest_.num(), den = cur.rest_.den();
        int mn = num.multiplicity(h), md = den.multiplicity(h);
        net += mn - md;
        if (net < 0) throw Error(ErrorKind::PoleAtRestriction, "pole of order " + std::to_string(-net) + " along " + h.str() + " = 0");
        if (net > 0) return Product(Rational(0));
        for (int k = 0; k < mn; ++k) num = *num.divide_linear(h);
        for (int k = 0; k < md; ++k) den = *den.divide_linear(h);
        Product next(cur.coeff_);
        for (auto& [l, e] : cur.factors_) {
            if (l == h) continue;
            next.mul_linear(l.substitute(s.var, s.image), e);
        }
        next.mul(RatFunc(num.substitute(s.var, s.image), den.substitute(s.var, s.image)));
        cur = std::move(next);
    }
    return cur;
}

RatFunc Product::expand() const {
    if (coeff_ == 0) return RatFunc();
    Poly num(coeff_), den(Rational(1));
    for (auto& [l, e] : factors_) {
        if (e > 0)
            num *= Poly(l).pow(e);
        else
            den *= Poly(l).pow(-e);
    }
    return RatFunc(num * rest_.num(), den * rest_.den());
}

Rational Product::value() const {
    if (coeff_ == 0) return 0;
    std::map<int, Rational> one;
    int deg = 0;
    Rational v = coeff_;
    for (auto& [l, e] : factors_) {
        if (l.terms().size() != 1) throw Error(ErrorKind::Internal, "restricted product still depends on " + l.str());
        deg += e;
        one[l.min_var()] = 1;
    }
    for (int i : rest_.num().variables()) one[i] = 1;
    for (int i : rest_.den().variables()) one[i] = 1;
    if (one.size() > 1) throw Error(ErrorKind::Internal, "restricted product depends on more than one variable");
    if (!rest_.num().is_constant() || !rest_.den().is_constant()) {
        auto h = rest_.homogeneous_degree();
        if (!h) throw Error(ErrorKind::Internal, "restricted product is not homogeneous");
        deg += *h;
    }
    if (deg != 0) throw Error(ErrorKind::Internal, "restricted product has degree " + std::to_string(deg));
    // factors are normalized, so each equals its variable; evaluate the rest at 1
    return v * rest_.evaluate(one);
}

}  // namespace ocgw
