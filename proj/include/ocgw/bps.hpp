#pragma once

#include <map>
#include <string>
#include <vector>

#include "ocgw/geometry.hpp"

namespace ocgw {

// Compact-edge degrees followed by the windings; closed classes use the same layout.
using ClassVec = std::vector<long>;
using InvariantTable = std::map<ClassVec, Rational>;

enum class BpsSource { Open, Closed };

struct BpsTable {
    BpsSource source = BpsSource::Open;
    int s = 0;
    std::map<ClassVec, Rational> entries;
};

// k divides c when every entry is a multiple of k; zero entries always divide
bool divides(long k, const ClassVec& c);
ClassVec divide(const ClassVec& c, long k);
std::string class_str(const ClassVec& c);

// N = (-1)^s sum_{k | c} k^{s-3} n_{c/k}
BpsTable lmov_invert(const InvariantTable& table, int s);
// N = sum_{k | c} k^{s-3} n_{c/k}
BpsTable kp_invert(const InvariantTable& table, int s);
InvariantTable resum(const BpsTable& t);

struct IntegralityEntry {
    ClassVec cls;
    Rational n;
    bool integral = true;
};

struct IntegralityReport {
    std::vector<IntegralityEntry> entries;
    bool ok() const;
    std::string str() const;
};

IntegralityReport integrality_report(const BpsTable& t);

// classes where n_open != (-1)^s n_closed, or present on one side only
std::vector<ClassVec> correspondence_mismatches(const BpsTable& open, const BpsTable& closed);

// smooth fan and integer framing on every brane; ScopeError otherwise
void require_bps_scope(const Setup& setup);

}  // namespace ocgw
