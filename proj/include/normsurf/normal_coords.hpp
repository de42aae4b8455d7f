#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "normsurf/triangulation.hpp"

namespace normsurf {

/// Per-tetrahedron coordinate layout: triangles 0..3 (linking vertex v),
/// quads 4..6, octagons 7..9.
inline constexpr int kCoordsPerTet = 10;
inline constexpr int kQuadOffset = 4;
inline constexpr int kOctOffset = 7;

/// Quad type q separates the vertex pairs kQuadPairs[q][0] and kQuadPairs[q][1];
/// the first pair always contains vertex 0. Octagon type k meets the two edges
/// spanned by those pairs twice and every other edge once.
inline constexpr int kQuadPairs[3][2][2] = {
    {{0, 1}, {2, 3}}, {{0, 2}, {1, 3}}, {{0, 3}, {1, 2}}};

/// Quad/octagon type whose pairing puts a and b on the same side.
int pairing_type(int a, int b);
/// True when vertex v lies in the pair of type `type` that contains vertex 0.
bool on_first_side(int type, int v);

/// Exact non-negative normal/almost-normal coordinates, 10 per tetrahedron.
class SurfaceVector {
 public:
  SurfaceVector() = default;
  explicit SurfaceVector(int num_tets) : coords_(num_tets * kCoordsPerTet, 0) {}
  /// Throws DimensionMismatch on a length that is not a multiple of 10 and
  /// NotAdmissible on a negative entry.
  static SurfaceVector from_coords(std::vector<std::int64_t> coords);

  int num_tets() const { return static_cast<int>(coords_.size()) / kCoordsPerTet; }
  int size() const { return static_cast<int>(coords_.size()); }

  std::int64_t operator[](int i) const { return coords_[i]; }
  std::int64_t& operator[](int i) { return coords_[i]; }
  std::int64_t tri(int tet, int v) const { return coords_[tet * kCoordsPerTet + v]; }
  std::int64_t quad(int tet, int q) const { return coords_[tet * kCoordsPerTet + kQuadOffset + q]; }
  std::int64_t oct(int tet, int k) const { return coords_[tet * kCoordsPerTet + kOctOffset + k]; }
  std::span<const std::int64_t> coords() const { return coords_; }

  bool is_zero() const;
  std::int64_t octagon_total() const;
  /// Nonzero quad/octagon coordinate offsets (4..9) in tetrahedron `tet`.
  std::vector<int> middle_types(int tet) const;

  SurfaceVector scaled(std::int64_t k) const;
  /// Plain coordinate-wise sum with no admissibility check.
  friend SurfaceVector operator+(const SurfaceVector& a, const SurfaceVector& b);

  friend bool operator==(const SurfaceVector&, const SurfaceVector&) = default;
  friend auto operator<=>(const SurfaceVector& a, const SurfaceVector& b) {
    return a.coords_ <=> b.coords_;
  }

 private:
  std::vector<std::int64_t> coords_;
};

/// One matching equation: arcs of type `corner` on face `face` of `tet` equal
/// arcs of type `to_corner` on face `to_face` of `to_tet`.
struct MatchingRow {
  int tet, face, corner;
  int to_tet, to_face, to_corner;
  std::vector<int> coeffs;  // length 10T
};

struct MatchingSystem {
  int num_tets = 0;
  std::vector<MatchingRow> rows;

  int num_columns() const { return num_tets * kCoordsPerTet; }
  std::int64_t evaluate(int row, const SurfaceVector& v) const;
};

/// Number of normal arcs of corner type `corner` on face `face` of `tet`.
std::int64_t arc_count(const SurfaceVector& v, int tet, int face, int corner);
/// Coordinate offsets (0..9) contributing one arc at (face, corner).
std::vector<int> arc_contributors(int face, int corner);

MatchingSystem matching_system(const Triangulation& tri);

struct AdmissibilityReport {
  bool admissible = true;
  std::vector<int> violated_rows;
  /// First tetrahedron carrying two distinct quad/octagon types.
  std::optional<int> type_conflict_tet;
  bool octagon_excess = false;

  std::string describe() const;
};

AdmissibilityReport check_admissible(const SurfaceVector& v, const MatchingSystem& sys);
bool is_admissible(const SurfaceVector& v, const MatchingSystem& sys);

/// The all-triangles vector. Throws NotOneVertex for multi-vertex input.
SurfaceVector vertex_link(const Triangulation& tri);
/// One link per vertex orbit, in skeleton order.
std::vector<SurfaceVector> vertex_links(const Triangulation& tri);

std::int64_t weight(const SurfaceVector& v);

/// Coordinate-wise sum; throws IncompatibleSummands when the result carries
/// two quad/octagon types in a tetrahedron or more than one octagon.
SurfaceVector haken_sum(const SurfaceVector& a, const SurfaceVector& b);

}  // namespace normsurf
