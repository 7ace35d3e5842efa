#pragma once

#include <string>
#include <vector>

#include "ocgw/toric.hpp"

namespace ocgw {

// Role of a facet of a maximal cone of the closed fan.
enum class FacetKind {
    Base,       // iota(tau) for a two-cone tau of the original fan
    Transverse, // delta_2 / delta_3 at an extra cone (index 2 or 3)
    Auxiliary,  // delta_{3+j}, index j >= 1
};

struct ClosedFacet {
    int cone = 0;        // index into ClosedGeometry::max_cones
    int missing = 0;     // ray index of the cone that is not in the facet
    Cone facet;          // sorted ray indices
    FacetKind kind = FacetKind::Base;
    int index = 0;       // 2/3 for Transverse, j for Auxiliary
    Cone base;           // the original two-cone for Base facets
    LinearForm weight;   // in u1, u2, u4, ..., u_{3+s}
    long r = 1;          // |G_cone| / |G_facet|
};

struct ClosedGeometry {
    int rank = 3;
    int num_base_cones = 0;  // cones iota(sigma) come first, then the extra cones
    std::vector<IntVec> rays;
    std::vector<Cone> max_cones;
    std::vector<StabilizerGroup> stabilizers;
    std::vector<ClosedFacet> facets;  // grouped by cone, in the order of the cone's rays

    std::vector<IntVec> cone_rays(const Cone& c) const;
    std::vector<const ClosedFacet*> facets_of(int cone) const;
    int extra_cone(int brane) const { return num_base_cones + brane - 1; }  // brane is 1-based
};

ClosedGeometry build_closed_fan(const StackyFan& fan, const std::vector<BraneFrame>& frames);

enum class VertexKind { Rvalent, Univalent };
enum class EdgeKind { Compact, Ray };

struct FtcyVertex {
    VertexKind kind = VertexKind::Rvalent;
    int cone = 0;   // closed-fan maximal cone
    int brane = 0;  // i for the vertex of the i-th extra cone, 0 otherwise
    std::string name;
    std::vector<LinearForm> framings;  // univalent only: f_2, ..., f_r
    std::vector<int> flags;            // flag ids at this vertex
};

struct FtcyEdge {
    EdgeKind kind = EdgeKind::Ray;
    Cone facet;     // closed-fan cone of the edge
    std::string name;
    int brane = 0;  // i when the edge is iota(tau_i)
    std::vector<int> flags;  // one flag (ray) or two flags (compact)
    StabilizerGroup group;
};

struct FtcyFlag {
    int edge = 0;
    int vertex = 0;
    LinearForm position;
    long r = 1;
    int missing_pos = 0;  // position of the ray opposite the edge within the vertex cone
    FacetKind kind = FacetKind::Base;
    int index = 0;
};

// Matching of the other directions at the two ends of a compact edge.
struct NormalLine {
    int near_flag = -1;    // flag at the near end
    int far_flag = -1;     // flag at the far end, or -1 for a framing
    int far_framing = -1;  // framing slot (0 means f_2) when the far end is univalent
    Rational c;            // p(near) - p(far) = c * r(e,near) p(e,near)
};

struct EdgeFrame {
    int near = 0, far = 0;  // vertex ids; near is r-valent
    int near_flag = 0, far_flag = 0;
    std::vector<NormalLine> lines;
};

struct ValidationReport {
    bool ok = true;
    std::vector<std::string> failures;
    std::vector<std::string> notes;
};

class FtcyGraph {
public:
    int dim = 3;
    int level = 0;
    std::vector<FtcyVertex> vertices;
    std::vector<FtcyEdge> edges;
    std::vector<FtcyFlag> flags;
    std::vector<int> compact_edges;  // internal compact edges first, then e_1, ..., e_s
    std::vector<EdgeFrame> edge_frames;  // parallel to compact_edges

    int flag_of(int edge, int vertex) const;
    int vertex_of_brane(int brane) const;
    int edge_of_brane(int brane) const;
    int other_end(int edge, int vertex) const;
    const EdgeFrame& frame_of(int edge) const;
    int compact_position(int edge) const;

    ValidationReport validate();  // fills edge_frames
    std::string describe() const;  // figure dump
};

// level 0 <= l <= s; vertex groups are taken from the closed geometry
FtcyGraph build_intermediate(const StackyFan& fan, const std::vector<BraneFrame>& frames,
                             const ClosedGeometry& closed, int level);
FtcyGraph build_intermediate(const StackyFan& fan, const std::vector<BraneFrame>& frames, int level);
FtcyGraph build_relative_graph(const StackyFan& fan, const std::vector<BraneFrame>& frames);

struct CurveClass {
    std::vector<long> degrees;  // indexed like FtcyGraph::compact_edges
    bool operator==(const CurveClass&) const = default;
    bool operator<(const CurveClass& o) const { return degrees < o.degrees; }
    long total() const;
    std::string str() const;
};

struct OpenClass {
    CurveClass beta;           // over the compact two-cones of the fan
    std::vector<long> windings;
};

// open side: split off the brane windings; the closed side uses the class unchanged
OpenClass project_to_open(const CurveClass& beta_hat, int num_branes);
CurveClass project_to_closed(const CurveClass& beta_hat);

// Everything derived from one input: the fan, its branes, the closed fan and the graphs at every level.
struct Setup {
    StackyFan fan;
    std::vector<BraneFrame> frames;
    Rational f;
    ClosedGeometry closed;
    std::vector<FtcyGraph> levels;  // levels[l], l = 0..s

    int num_branes() const { return static_cast<int>(frames.size()); }
    const FtcyGraph& graph(int level) const { return levels.at(level); }
    static Setup build(const StackyFan& fan, const std::vector<Cone>& branes, const Rational& f);
};

}  // namespace ocgw
