#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "normsurf/hilbert.hpp"
#include "normsurf/normal_coords.hpp"
#include "normsurf/triangulation.hpp"

namespace normsurf {

/// One boundary arc of a piece, traversed from the point on edge
/// (corner, from_vertex) to the point on edge (corner, to_vertex). The arc is
/// the `nest`-th arc of its corner type on `face`, counted outward from the
/// corner; it meets both edges at distance `nest` from the corner.
struct PieceArc {
  int face;
  int corner;
  std::int64_t nest;
  int from_vertex;
  int to_vertex;
};

struct Piece {
  int tet;
  int coord;          // offset 0..9 within the tetrahedron
  std::int64_t copy;  // stacking index within its type
  std::vector<PieceArc> boundary;
};

/// Cell complex of the surface described by a coordinate vector. Parallel
/// copies are stacked by distance from a reference vertex: triangles nest
/// inside their corner, quads are ordered from the side containing vertex 0,
/// and the octagon sits between its triangle stacks.
class CarriedSurface {
 public:
  /// Requires an admissible vector. With `allow_boundary`, matching equations
  /// may fail and unmatched outermost arcs become boundary edges.
  static CarriedSurface build(const Triangulation& tri, const SurfaceVector& v,
                              bool allow_boundary = false);

  const SurfaceVector& vector() const { return vec_; }
  int num_tets() const { return vec_.num_tets(); }
  const std::vector<Piece>& pieces() const { return pieces_; }
  int num_arcs() const { return static_cast<int>(arc_piece_.size()); }
  int num_points() const { return static_cast<int>(point_class_.size()); }

  /// Global arc id for (tet, face, corner, nest), or -1 if absent.
  int arc_id(int tet, int face, int corner, std::int64_t nest) const;
  int arc_piece(int arc) const { return arc_piece_[arc]; }
  /// Position of the arc within its piece's boundary cycle.
  int arc_slot(int arc) const { return arc_slot_[arc]; }
  /// The glued arc across the face, or -1 for a boundary arc.
  int arc_mate(int arc) const { return arc_mate_[arc]; }
  /// True when the face gluing carries the arc's from-end to the mate's
  /// from-end.
  bool mate_same_direction(int arc) const { return mate_same_[arc] != 0; }
  const PieceArc& arc(int arc) const {
    return pieces_[arc_piece_[arc]].boundary[arc_slot_[arc]];
  }
  int arc_tet(int arc) const { return pieces_[arc_piece_[arc]].tet; }

  /// Number of surface points on edge e of tet, and the dense point id of the
  /// point at distance `dist` from vertex `from` on edge (from, to).
  std::int64_t edge_points(int tet, int e) const { return edge_count_[tet][e]; }
  int point_id(int tet, int from, int to, std::int64_t dist) const;
  /// Vertex class (surface vertex) of a point id.
  int vertex_of_point(int point) const { return point_class_[point]; }
  int num_vertices() const { return num_vertices_; }

  int num_components() const { return num_components_; }
  int component_of(int piece) const { return component_[piece]; }
  /// +1/-1 orientation of each piece relative to its stored boundary cycle;
  /// meaningful only on orientable components.
  int piece_orientation(int piece) const { return orientation_[piece]; }
  bool component_orientable(int c) const { return orientable_[c]; }

  int boundary_arc_count() const;

 private:
  friend struct SurfaceBuilder;
  SurfaceVector vec_;
  std::vector<Piece> pieces_;
  std::vector<std::array<std::array<int, 4>, 4>> arc_base_;
  std::vector<std::array<std::array<std::int64_t, 4>, 4>> arc_count_;
  std::vector<int> arc_piece_, arc_slot_, arc_mate_;
  std::vector<char> mate_same_;
  std::vector<std::array<std::int64_t, 6>> edge_count_;
  std::vector<std::array<int, 6>> point_base_;
  std::vector<int> point_class_;
  int num_vertices_ = 0;
  std::vector<int> component_;
  std::vector<int> orientation_;
  std::vector<bool> orientable_;
  int num_components_ = 0;
};

CarriedSurface reconstruct(const Triangulation& tri, const SurfaceVector& v);

enum class SurfaceKind { sphere, torus, higher_genus, projective_plane, nonorientable, disk, bounded };

std::string to_string(SurfaceKind k);

struct ComponentReport {
  int component = 0;
  std::int64_t euler = 0;
  bool orientable = true;
  /// Orientable genus for closed orientable components; crosscap number for
  /// closed nonorientable ones.
  std::int64_t genus = 0;
  SurfaceKind kind = SurfaceKind::sphere;
  bool is_vertex_linking = false;
  int boundary_components = 0;
  SurfaceVector coords;
};

std::vector<ComponentReport> classify_components(const Triangulation& tri,
                                                 const CarriedSurface& surface);

/// Integer-linear functional with 2*chi(v) = sum coeffs[i] * v[i].
struct EulerFunctional {
  std::vector<std::int64_t> twice_coeffs;
  /// chi(v).
  std::int64_t evaluate(const SurfaceVector& v) const;
};

EulerFunctional euler_functional(const Triangulation& tri);
/// Euler characteristic of the cell complex (independent of the functional).
std::int64_t euler_cellular(const Triangulation& tri, const SurfaceVector& v);

/// Fills tori / non_tori / other. Tori: connected, orientable, chi = 0,
/// octagon-free. Other: chi > 0. Non-tori: the rest.
void classify_fundamental(const Triangulation& tri, FundamentalSet& fund);

/// A closed walk in the dual graph of a surface: each step crosses `arc`
/// from the piece that owns it into the piece owning its mate.
using DualWalk = std::vector<int>;

struct CurveClass {
  std::vector<std::int64_t> coords;  // (p, q) on a torus
  bool essential = false;
  std::string meridian = "unknown";
  /// True when the class lives in a nonorientable component, where torsion
  /// classes are invisible to the free coordinates.
  bool torsion_ambiguous = false;
};

/// First-homology coordinates of closed dual walks in one component.
class ComponentHomology {
 public:
  ComponentHomology(const CarriedSurface& s, int component);

  int rank() const { return static_cast<int>(basis_.size()); }
  /// Coordinates of a walk; sign-normalized so the first nonzero entry is
  /// positive.
  std::vector<std::int64_t> classify(const DualWalk& walk) const;
  /// Raw (unnormalized) coordinates.
  std::vector<std::int64_t> coordinates(const DualWalk& walk) const;
  /// Closed walks realizing the basis classes, when the basis was chosen from
  /// fundamental cycles; empty otherwise.
  const std::vector<DualWalk>& basis_walks() const { return basis_walks_; }
  /// Closed walk around a surface vertex (null-homologous by construction).
  DualWalk vertex_link_walk(int vertex) const;
  bool orientable() const { return orientable_; }

 private:
  std::vector<std::int64_t> chain(const DualWalk& walk) const;
  DualWalk tree_path(int from_piece, int to_piece) const;

  const CarriedSurface* surface_;
  int component_;
  bool orientable_;
  std::map<int, int> nontree_index_;  // canonical arc -> column
  std::vector<int> parent_arc_;       // per piece: arc crossed from parent, -1 at root
  std::vector<int> depth_;
  std::vector<std::vector<std::int64_t>> basis_;  // rows of the coordinate map
  std::vector<std::vector<std::int64_t>> change_;  // optional 2x2 inverse change of basis
  std::vector<DualWalk> basis_walks_;
};

CurveClass curve_class(const Triangulation& tri, const CarriedSurface& s, int component,
                       const DualWalk& walk);

struct DoubleCurve {
  int surface_a = 0;
  int surface_b = 0;
  int component_a = -1;
  int component_b = -1;
  DualWalk walk_a;
  DualWalk walk_b;
  std::optional<CurveClass> class_a;  // set when component_a is a torus
  std::optional<CurveClass> class_b;
};

struct IntersectionReport {
  std::int64_t triple_points = 0;
  std::int64_t double_curves = 0;          // raw count under the stacking convention
  std::int64_t reduced_double_curves = 0;  // after the identical-surface reduction
  bool conservative = true;
  std::vector<DoubleCurve> curves;

  std::pair<std::int64_t, std::int64_t> complexity() const {
    return {triple_points, reduced_double_curves};
  }
};

/// Triple points counted as the sum over tetrahedra of products of
/// multiplicities of three pairwise distinct quad/octagon types.
std::int64_t conservative_triple_points(const std::vector<SurfaceVector>& surfaces);

/// Traces double curves among 2 or 3 admissible surfaces. Inputs are
/// processed in canonical order, so the report does not depend on argument
/// order. Throws Unsupported for more than three surfaces.
IntersectionReport intersection_complexity(const Triangulation& tri,
                                           const std::vector<SurfaceVector>& surfaces);

}  // namespace normsurf
