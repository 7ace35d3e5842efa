#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ocgw/graphs.hpp"

namespace ocgw {

enum class InsertionKind { DivisorClass, TwistedUnit, PointClass, RestrictionTable };

struct Insertion {
    InsertionKind kind = InsertionKind::DivisorClass;
    int ray = -1;                  // divisor class
    IntVec box;                    // twisted unit, or the twist of a point class
    int cone = -1;                 // point class: index of a maximal cone of the fan
    std::map<int, RatFunc> table;  // FTCY vertex id -> restriction

    static Insertion divisor(int ray);
    static Insertion twisted_unit(const IntVec& box);
    static Insertion point(int cone, const IntVec& box = {});
    int degree() const;  // Chen-Ruan degree, 2 for divisors and 6 for points
    std::string str() const;
};

// Stable vertex with nontrivial twists: the caller supplies the whole vertex integral.
struct VertexQuery {
    long group_order = 1;
    std::vector<std::vector<Rational>> twists;  // barycentric coordinates, flags first then markings
    std::string key() const;
};

class HodgeOracle {
public:
    virtual ~HodgeOracle() = default;
    virtual std::optional<RatFunc> lookup(const VertexQuery& q) const = 0;
};

class TableOracle : public HodgeOracle {
public:
    std::map<std::string, RatFunc> entries;
    static TableOracle load(const std::string& path);
    std::optional<RatFunc> lookup(const VertexQuery& q) const override;
};

// genus zero: int psi_1^k_1 ... psi_n^k_n over M_{0,n}
Rational psi_integral(const std::vector<int>& exponents);
Rational psi_integral_recursive(const std::vector<int>& exponents);

// D_{d,lambda} for one brane
Product disk_factor(const Setup& setup, const BraneFrame& frame, const TwistedWinding& w);

struct InvariantRequest {
    const Setup* setup = nullptr;
    std::vector<long> internal;               // degrees on the internal compact edges
    std::vector<TwistedWinding> windings;     // one per brane
    std::vector<Insertion> insertions;        // ordinary insertions
    const HodgeOracle* oracle = nullptr;
    long max_degree = 8;
    bool breakdown = false;
    bool debug = false;  // also evaluate graphs outside the contributing set

    CurveClass beta_hat() const;
    int n() const { return static_cast<int>(insertions.size()); }
};

enum class InvariantKind { Open, Relative, Closed };

struct GraphTerm {
    std::string graph;
    Rational value;
};

struct InvariantRecord {
    InvariantKind kind = InvariantKind::Open;
    int level = 0;
    CurveClass beta_hat;
    std::vector<TwistedWinding> windings;
    std::vector<Insertion> insertions;
    Rational value;
    std::vector<GraphTerm> breakdown;
    std::string line() const;
    std::string class_key() const;
};

// one graph: everything except the weight restriction
class Evaluator {
public:
    Evaluator(const InvariantRequest& req, InvariantKind kind, int level);

    const FtcyGraph& ftcy() const { return *ftcy_; }
    GraphRequest graph_request() const;
    const std::vector<int>& relative_twists() const { return ktilde_; }

    Product flag(const DecoratedGraph& g, int e, int end) const;
    Product edge(const DecoratedGraph& g, int e) const;
    Product vertex(const DecoratedGraph& g, int v) const;
    Product divisor_vertex(const DecoratedGraph& g, int v, bool stand_in) const;
    Product marking_insertion(const DecoratedGraph& g, int m) const;
    Product prefactor() const;  // disk factors on the open side, 1 otherwise
    // c_Gamma times every term; stand_in replaces the rubber term by a power-counting proxy
    Product contribution(const DecoratedGraph& g, bool stand_in = false) const;
    RestrictionPlan plan() const;
    bool contributing(const DecoratedGraph& g) const;

private:
    const InvariantRequest& req_;
    const Setup& setup_;
    InvariantKind kind_;
    int level_;
    const FtcyGraph* ftcy_;
    std::vector<int> ktilde_;  // box index of the relative marking twist at each brane vertex
    std::vector<IntVec> open_twist_;
    LinearForm position(int label, int flag) const;
    std::vector<LinearForm> invariant_positions(int label, const BoxElement& k) const;
};

InvariantRecord assemble_open(const InvariantRequest& req);
InvariantRecord assemble_relative(const InvariantRequest& req, int level);
InvariantRecord assemble_closed(const InvariantRequest& req);

struct ChainStep {
    std::string name;
    Rational lhs, rhs;
    bool ok = false;
};

struct ChainReport {
    Rational open, closed;
    std::vector<Rational> relative;  // levels 0..s
    std::vector<int> step_signs;     // sign between level l and l+1
    int open_sign = 1;
    std::vector<ChainStep> steps;
    bool ok() const;
    std::string str() const;
};

ChainReport verify_chain(const InvariantRequest& req);

struct PowerCount {
    std::vector<int> aux;          // power of u_{3+j}, j = 1..level
    std::optional<int> framing;    // power of u2 - f u1 once the auxiliary variables are set to zero
    bool framing_at_least = false; // the value is only a lower bound
};

PowerCount structural_power(const Evaluator& ev, const DecoratedGraph& g);
// exponents read off the unrestricted contribution; framing is empty when an aux power is nonzero
PowerCount measured_power(const Evaluator& ev, const DecoratedGraph& g);

}  // namespace ocgw
