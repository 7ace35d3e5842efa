#pragma once

#include <string>
#include <vector>

#include "ocgw/geometry.hpp"

namespace ocgw {

// Where a marking may sit and which twist it carries.
struct MarkingRule {
    int label = -1;  // FTCY vertex id, or -1 for any vertex over a maximal cone of the fan
    IntVec twist;    // point of the closed lattice; empty means untwisted
};

struct GraphVertex {
    int label = 0;               // FTCY vertex id
    std::vector<int> markings;   // 0-based marking ids
};

struct GraphEdge {
    int ends[2] = {0, 0};   // graph vertices; ends[0] lies over the near end of the FTCY edge
    int label = 0;          // FTCY edge id
    long degree = 1;
    long lambda = 0;        // multiple of the generator of the edge group
    int twist[2] = {0, 0};  // box index of the flag twist in the group of each end
};

struct DecoratedGraph {
    std::vector<GraphVertex> vertices;
    std::vector<GraphEdge> edges;
    std::vector<int> marking_twist;  // box index in the group of the marking's vertex
    long automorphisms = 1;
    Rational coefficient = 1;
    std::string key;  // canonical form

    int num_markings() const { return static_cast<int>(marking_twist.size()); }
    int vertex_of_marking(int m) const;
    std::vector<int> edges_at(int v) const;
    int valence(int v) const { return static_cast<int>(edges_at(v).size()); }
    int end_index(int e, int v) const { return edges[e].ends[0] == v ? 0 : 1; }
    std::string str(const FtcyGraph& ftcy) const;
};

struct GraphRequest {
    const Setup* setup = nullptr;
    int level = 0;
    bool open_side = false;  // graphs on the fan itself: internal edges and base vertices only
    CurveClass beta_hat;     // indexed like FtcyGraph::compact_edges; brane entries ignored on the open side
    std::vector<MarkingRule> markings;
    long max_degree = 8;
};

std::vector<DecoratedGraph> enumerate(const GraphRequest& req);

// lattice point pushed to the near end of an edge: d times the unit-degree lift plus lambda times the generator
IntVec edge_point(const Setup& setup, const FtcyGraph& ftcy, int ftcy_edge, long degree, long lambda);
IntVec edge_generator(const Setup& setup, const FtcyGraph& ftcy, int ftcy_edge);
// box index of the flag twist at the given end (0 near, 1 far)
int flag_twist(const Setup& setup, const FtcyGraph& ftcy, int ftcy_edge, long degree, long lambda, int end);
long box_order(const BoxElement& b);

std::string canonical_key(const DecoratedGraph& g);
long automorphism_order(const DecoratedGraph& g, const FtcyGraph& ftcy);
Rational coefficient(const DecoratedGraph& g, const Setup& setup, const FtcyGraph& ftcy);

struct ContributingCheck {
    bool single_part = true;     // each divisor vertex beyond the level has one edge
    bool single_edge = true;     // one edge over each leg up to the level
    bool marking_placed = true;  // relative marking at the brane vertex with the required twist
    bool single_vertex = true;   // one vertex over each brane vertex, carrying only its marking
    bool ok() const { return single_part && single_edge && marking_placed && single_vertex; }
};

// n ordinary markings come first; required_twist[i-1] is the box index expected on marking n+i
ContributingCheck contributing_filter(const DecoratedGraph& g, const FtcyGraph& ftcy, int n,
                                      const std::vector<int>& required_twist);

}  // namespace ocgw
