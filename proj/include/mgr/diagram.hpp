#pragma once

#include <string>
#include <vector>

#include "mgr/family.hpp"
#include "mgr/multiset.hpp"
#include "mgr/solver.hpp"

namespace mgr {

/// Crossing of a Y-oriented diagram. With sign +1 the coloring condition is
/// C(under_out) = C(under_in) * C(over); with sign -1 the inverse operation.
struct Crossing {
    int over;
    int under_in;
    int under_out;
    int sign; // +1 or -1
};

/// Trivalent vertex. The three arcs are listed in counterclockwise planar
/// order around the vertex (this fixes the ribbon structure); the roles fix
/// the products: merge imposes C(out) = C(in_left) C(in_right), split
/// imposes C(in) = C(out_left) C(out_right).
struct DiagramVertex {
    enum class Kind { Merge, Split };
    Kind kind;
    int a; // merge: in_left,  split: in
    int b; // merge: in_right, split: out_left
    int c; // merge: out,      split: out_right
};

/// Combinatorial diagram of an oriented spatial surface: arcs, crossings,
/// vertices, and the partition of vertex-free strands into circles.
struct SurfaceDiagram {
    std::vector<std::string> arc_names;
    std::vector<Crossing> crossings;
    std::vector<DiagramVertex> vertices;
    /// Circle components, each a chain of arcs in strand order.
    std::vector<std::vector<int>> circles;
    /// head(first) -> tail(second) strand gluings not mediated by a crossing
    /// (from multi-arc circle declarations and automatic closure); they act
    /// as equality constraints on colors and flows.
    std::vector<std::pair<int, int>> gluings;

    int arc_count() const { return static_cast<int>(arc_names.size()); }
    int arc_id(const std::string& name) const; // -1 when unknown
};

/// Surface statistics of the ribbon surface carried by the diagram. Circles
/// count as edges of the underlying graph; the Euler characteristic is that
/// of the underlying space, so chi = V - E + (number of circles).
struct SurfaceStats {
    int graph_vertices = 0;
    int graph_edges = 0;
    int euler_characteristic = 0;
    int boundary_components = 0;
    int genus = 0;
    int connected_components = 0;

    bool operator==(const SurfaceStats&) const = default;
    std::string format() const;
};

/// Assignment of group elements (resp. colors) to arcs, indexed by arc id.
using Flow = std::vector<int>;

/// Parses the line-oriented diagram format:
///   arc <id>
///   circle <id ...>
///   crossing <over> <under_in> <under_out> <+|->
///   vertex merge <in_left> <in_right> <out>
///   vertex split <in> <out_left> <out_right>
/// '#' starts a comment. Vertex-free strands close up into circles
/// automatically; every arc end must be consumed exactly once.
SurfaceDiagram parse_diagram(const std::string& text);

/// Graph/surface statistics via boundary-walk tracing on the rotation
/// system; crossings do not alter the abstract ribbon structure.
SurfaceStats surface_stats(const SurfaceDiagram& d);

/// All maps A(D) -> G obeying the flow conditions (conjugation under
/// crossings, products at vertices); realized as colorings by the
/// conjugation MGR of G.
std::vector<Flow> enumerate_flows(const SurfaceDiagram& d, const FiniteGroup& g);

/// Number of X-colorings of D by the multiple group rack m.
long long count_colorings_mgr(const SurfaceDiagram& d, const MultipleGroupRack& m);

/// Colorings of (D, phi) for a fixed flow phi over the family's group.
long long count_colorings_for_flow(const SurfaceDiagram& d, const GFamily& f, const Flow& phi);

/// The multiset { #Col_X(D, phi) : phi in Flow(D; G) }. Distinct flows may
/// be evaluated on several workers; the result is deterministic.
CountMultiset count_per_flow(const SurfaceDiagram& d, const GFamily& f, int workers = 1);

/// Reverses the orientation of the circle component d.circles[circle_index]:
/// crossings over a reversed arc flip sign, crossings where the circle runs
/// under swap under_in/under_out and flip sign. Coloring counts by any MGR
/// are preserved.
SurfaceDiagram reverse_circle(const SurfaceDiagram& d, int circle_index);

/// Compiles the diagram's per-flow coloring problem into a constraint
/// system over f: arcs identified at vertices/gluings become one color
/// variable each, every crossing becomes one relation, and the flow space
/// is parameterized by free flow variables. Requires a cyclic flow group;
/// throws InvalidOperation when the flow space is not freely parameterized
/// (the file format cannot express residual flow relations). family_spec is
/// carried into the generated system for formatting.
ConstraintSystem diagram_to_system(const SurfaceDiagram& d, const GFamily& f,
                                   const std::string& family_spec = "");

} // namespace mgr
