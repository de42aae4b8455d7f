#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace normsurf {

/// Images of the vertices 0..3 under a face gluing.
using Perm = std::array<int, 4>;

Perm inverse(const Perm& p);
/// 0 for even permutations, 1 for odd.
int parity(const Perm& p);
bool is_permutation(const Perm& p);

/// Edge k of a tetrahedron joins vertices kEdgeVertices[k]; edges are listed
/// as (0,1),(0,2),(0,3),(1,2),(1,3),(2,3).
inline constexpr std::array<std::array<int, 2>, 6> kEdgeVertices{
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
int edge_index(int a, int b);

/// One face gluing: face `face` of `tet` (the face opposite vertex `face`) is
/// identified with face `to_face` of `to_tet`, vertex v going to perm[v].
struct Gluing {
  int tet = 0;
  int face = 0;
  int to_tet = 0;
  int to_face = 0;
  Perm perm{0, 1, 2, 3};

  friend bool operator==(const Gluing&, const Gluing&) = default;
};

/// A validated closed triangulation. Immutable once constructed.
class Triangulation {
 public:
  struct Adjacent {
    int tet = -1;
    int face = -1;
    Perm perm{0, 1, 2, 3};
  };

  /// Validates the gluing table and throws GluingError if it is not a closed
  /// 3-manifold triangulation.
  static Triangulation from_gluings(int num_tets, std::vector<Gluing> gluings);

  int num_tets() const noexcept { return num_tets_; }
  /// One record per glued face pair, in canonical order: the lower (tet, face)
  /// is the source, records sorted by source.
  const std::vector<Gluing>& gluings() const noexcept { return gluings_; }
  const Adjacent& adjacent(int tet, int face) const { return adj_[tet][face]; }

  /// Returns a copy with tetrahedron i renamed to relabel[i].
  Triangulation relabeled(const std::vector<int>& relabel) const;

 private:
  Triangulation() = default;

  int num_tets_ = 0;
  std::vector<Gluing> gluings_;
  std::vector<std::array<Adjacent, 4>> adj_;
};

/// Vertex, edge and face orbits of a triangulation.
struct Skeleton {
  struct Corner {
    int tet;
    int vertex;
    friend auto operator<=>(const Corner&, const Corner&) = default;
  };
  struct EdgeEmbedding {
    int tet;
    int edge;
    /// +1 when the tet-local direction (low vertex to high vertex) agrees
    /// with the orbit's canonical direction.
    int sign;
    friend auto operator<=>(const EdgeEmbedding&, const EdgeEmbedding&) = default;
  };
  struct FacePair {
    int tet, face, to_tet, to_face;
  };

  std::vector<std::vector<Corner>> vertex_orbits;
  std::vector<std::vector<EdgeEmbedding>> edge_orbits;
  std::vector<FacePair> face_pairs;

  /// vertex_of[tet][v] and edge_of[tet][e] give the orbit index.
  std::vector<std::array<int, 4>> vertex_of;
  std::vector<std::array<int, 6>> edge_of;
  std::vector<std::array<int, 6>> edge_sign;

  int num_vertices() const { return static_cast<int>(vertex_orbits.size()); }
  int num_edges() const { return static_cast<int>(edge_orbits.size()); }
  int num_faces() const { return static_cast<int>(face_pairs.size()); }
  int num_tets() const { return static_cast<int>(vertex_of.size()); }
  int euler_characteristic() const {
    return num_vertices() - num_edges() + num_faces() - num_tets();
  }
};

Skeleton compute_skeleton(const Triangulation& tri);

bool is_orientable(const Triangulation& tri);
bool is_one_vertex(const Triangulation& tri);

/// Parses the JSON triangulation document. Throws ParseError on malformed
/// input and GluingError on an invalid gluing table.
Triangulation parse_triangulation(std::string_view text);
/// Canonical JSON document (compact, gluings in canonical order).
std::string serialize_triangulation(const Triangulation& tri);

}  // namespace normsurf
