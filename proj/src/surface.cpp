#include <algorithm>
#include <deque>
#include <stdexcept>

#include "normsurf/detail/union_find.hpp"
#include "normsurf/errors.hpp"
#include "normsurf/surface_topology.hpp"

namespace normsurf {

namespace {

std::array<int, 3> others(int v) {
  std::array<int, 3> out{};
  int k = 0;
  for (int u = 0; u < 4; ++u)
    if (u != v) out[k++] = u;
  return out;
}

std::int64_t middle_on_edge(const SurfaceVector& v, int t, int a, int b) {
  const int pt = pairing_type(a, b);
  std::int64_t n = 0;
  for (int q = 0; q < 3; ++q) {
    if (q != pt) n += v.quad(t, q);
    n += (q == pt ? 2 : 1) * v.oct(t, q);
  }
  return n;
}

}  // namespace

struct SurfaceBuilder {
  static void add_pieces(CarriedSurface& s, int t) {
    const SurfaceVector& v = s.vec_;
    for (int c = 0; c < kCoordsPerTet; ++c) {
      const std::int64_t n = v[t * kCoordsPerTet + c];
      for (std::int64_t i = 0; i < n; ++i) {
        Piece p{t, c, i, {}};
        if (c < kQuadOffset) {
          const auto [x, y, z] = others(c);
          p.boundary = {{z, c, i, x, y}, {x, c, i, y, z}, {y, c, i, z, x}};
        } else if (c < kOctOffset) {
          const int q = c - kQuadOffset;
          const int a = kQuadPairs[q][0][0], b = kQuadPairs[q][0][1];
          const int cc = kQuadPairs[q][1][0], d = kQuadPairs[q][1][1];
          auto nest = [&](int corner) {
            return v.tri(t, corner) + (on_first_side(q, corner) ? i : n - 1 - i);
          };
          p.boundary = {{b, a, nest(a), cc, d},
                        {cc, d, nest(d), a, b},
                        {a, b, nest(b), d, cc},
                        {d, cc, nest(cc), b, a}};
        } else {
          const int k = c - kOctOffset;
          const int a = kQuadPairs[k][0][0], b = kQuadPairs[k][0][1];
          const int cc = kQuadPairs[k][1][0], d = kQuadPairs[k][1][1];
          auto ta = v.tri(t, a), tb = v.tri(t, b), tc = v.tri(t, cc), td = v.tri(t, d);
          p.boundary = {{d, a, ta, b, cc},  {b, cc, tc, a, d}, {a, cc, tc, d, b},
                        {d, b, tb, cc, a},  {cc, b, tb, a, d}, {a, d, td, b, cc},
                        {b, d, td, cc, a},  {cc, a, ta, d, b}};
        }
        s.pieces_.push_back(std::move(p));
      }
    }
  }

  static CarriedSurface build(const Triangulation& tri, const SurfaceVector& v,
                              bool allow_boundary) {
    if (v.num_tets() != tri.num_tets())
      throw DimensionMismatch("vector has " + std::to_string(v.num_tets()) +
                              " tetrahedra, triangulation has " +
                              std::to_string(tri.num_tets()));
    const int T = tri.num_tets();
    for (int t = 0; t < T; ++t) {
      if (v.middle_types(t).size() > 1)
        throw NotAdmissible("two quad/octagon types in tetrahedron " + std::to_string(t));
      if (v.oct(t, 0) + v.oct(t, 1) + v.oct(t, 2) > 1)
        throw NotAdmissible("more than one octagon in tetrahedron " + std::to_string(t));
    }
    CarriedSurface s;
    s.vec_ = v;
    s.arc_base_.assign(T, {});
    s.arc_count_.assign(T, {});
    int next = 0;
    for (int t = 0; t < T; ++t)
      for (int f = 0; f < 4; ++f)
        for (int c = 0; c < 4; ++c) {
          s.arc_base_[t][f][c] = next;
          s.arc_count_[t][f][c] = (c == f) ? 0 : arc_count(v, t, f, c);
          next += static_cast<int>(s.arc_count_[t][f][c]);
        }
    s.arc_piece_.assign(next, -1);
    s.arc_slot_.assign(next, -1);
    s.arc_mate_.assign(next, -1);
    s.mate_same_.assign(next, 0);

    s.edge_count_.assign(T, {});
    s.point_base_.assign(T, {});
    int points = 0;
    for (int t = 0; t < T; ++t)
      for (int e = 0; e < 6; ++e) {
        const auto [a, b] = kEdgeVertices[e];
        s.edge_count_[t][e] = v.tri(t, a) + v.tri(t, b) + middle_on_edge(v, t, a, b);
        s.point_base_[t][e] = points;
        points += static_cast<int>(s.edge_count_[t][e]);
      }

    for (int t = 0; t < T; ++t) add_pieces(s, t);
    for (int p = 0; p < static_cast<int>(s.pieces_.size()); ++p) {
      const auto& piece = s.pieces_[p];
      const int m = static_cast<int>(piece.boundary.size());
      for (int k = 0; k < m; ++k) {
        const auto& a = piece.boundary[k];
        const int id = s.arc_id(piece.tet, a.face, a.corner, a.nest);
        if (id < 0 || s.arc_piece_[id] >= 0) throw std::logic_error("arc layout mismatch");
        s.arc_piece_[id] = p;
        s.arc_slot_[id] = k;
        const auto& b = piece.boundary[(k + 1) % m];
        if (s.point_id(piece.tet, a.corner, a.to_vertex, a.nest) !=
            s.point_id(piece.tet, b.corner, b.from_vertex, b.nest))
          throw std::logic_error("piece boundary is not closed");
      }
    }

    detail::UnionFind pts(points);
    for (int t = 0; t < T; ++t)
      for (int f = 0; f < 4; ++f) {
        const auto& adj = tri.adjacent(t, f);
        for (int c = 0; c < 4; ++c) {
          if (c == f) continue;
          const std::int64_t here = s.arc_count_[t][f][c];
          const std::int64_t there = s.arc_count_[adj.tet][adj.face][adj.perm[c]];
          if (here != there && !allow_boundary)
            throw NotAdmissible("matching equation fails at tetrahedron " + std::to_string(t) +
                                " face " + std::to_string(f) + " corner " + std::to_string(c));
          const std::int64_t shared = std::min(here, there);
          for (std::int64_t j = 0; j < shared; ++j) {
            const int id = s.arc_base_[t][f][c] + static_cast<int>(j);
            const int mate = s.arc_id(adj.tet, adj.face, adj.perm[c], j);
            s.arc_mate_[id] = mate;
            s.mate_same_[id] = s.arc(mate).from_vertex == adj.perm[s.arc(id).from_vertex];
            for (int w = 0; w < 4; ++w) {
              if (w == f || w == c) continue;
              pts.unite(s.point_id(t, c, w, j),
                        s.point_id(adj.tet, adj.perm[c], adj.perm[w], j));
            }
          }
        }
      }
    s.point_class_ = pts.dense_classes(&s.num_vertices_);

    const int np = static_cast<int>(s.pieces_.size());
    detail::UnionFind comp(np);
    for (int a = 0; a < next; ++a)
      if (s.arc_mate_[a] >= 0) comp.unite(s.arc_piece_[a], s.arc_piece_[s.arc_mate_[a]]);
    s.component_ = comp.dense_classes(&s.num_components_);

    s.orientation_.assign(np, 0);
    s.orientable_.assign(s.num_components_, true);
    for (int root = 0; root < np; ++root) {
      if (s.orientation_[root] != 0) continue;
      s.orientation_[root] = 1;
      std::deque<int> queue{root};
      while (!queue.empty()) {
        const int p = queue.front();
        queue.pop_front();
        const auto& piece = s.pieces_[p];
        for (const auto& a : piece.boundary) {
          const int id = s.arc_id(piece.tet, a.face, a.corner, a.nest);
          const int mate = s.arc_mate_[id];
          if (mate < 0) continue;
          const int want = s.mate_same_[id] ? -s.orientation_[p] : s.orientation_[p];
          const int q = s.arc_piece_[mate];
          if (s.orientation_[q] == 0) {
            s.orientation_[q] = want;
            queue.push_back(q);
          } else if (s.orientation_[q] != want) {
            s.orientable_[s.component_[q]] = false;
          }
        }
      }
    }
    return s;
  }
};

CarriedSurface CarriedSurface::build(const Triangulation& tri, const SurfaceVector& v,
                                     bool allow_boundary) {
  return SurfaceBuilder::build(tri, v, allow_boundary);
}

int CarriedSurface::arc_id(int tet, int face, int corner, std::int64_t nest) const {
  if (face == corner || nest < 0 || nest >= arc_count_[tet][face][corner]) return -1;
  return arc_base_[tet][face][corner] + static_cast<int>(nest);
}

int CarriedSurface::point_id(int tet, int from, int to, std::int64_t dist) const {
  const int e = edge_index(from, to);
  const std::int64_t n = edge_count_[tet][e];
  const std::int64_t pos = from < to ? dist : n - 1 - dist;
  if (pos < 0 || pos >= n) throw std::logic_error("point outside edge");
  return point_base_[tet][e] + static_cast<int>(pos);
}

int CarriedSurface::boundary_arc_count() const {
  return static_cast<int>(std::count(arc_mate_.begin(), arc_mate_.end(), -1));
}

CarriedSurface reconstruct(const Triangulation& tri, const SurfaceVector& v) {
  return CarriedSurface::build(tri, v, false);
}

std::string to_string(SurfaceKind k) {
  switch (k) {
    case SurfaceKind::sphere: return "sphere";
    case SurfaceKind::torus: return "torus";
    case SurfaceKind::higher_genus: return "higher_genus";
    case SurfaceKind::projective_plane: return "projective_plane";
    case SurfaceKind::nonorientable: return "nonorientable";
    case SurfaceKind::disk: return "disk";
    case SurfaceKind::bounded: return "bounded";
  }
  return "unknown";
}

std::vector<ComponentReport> classify_components(const Triangulation& tri,
                                                 const CarriedSurface& s) {
  const int nc = s.num_components();
  std::vector<ComponentReport> out(nc);
  std::vector<std::vector<char>> seen(nc, std::vector<char>(s.num_vertices(), 0));
  std::vector<std::int64_t> verts(nc, 0), edges(nc, 0), faces(nc, 0);
  detail::UnionFind bnd(s.num_vertices());
  std::vector<char> on_boundary(s.num_vertices(), 0);
  for (int c = 0; c < nc; ++c) {
    out[c].component = c;
    out[c].coords = SurfaceVector(tri.num_tets());
    out[c].orientable = s.component_orientable(c);
  }
  for (int p = 0; p < static_cast<int>(s.pieces().size()); ++p) {
    const auto& piece = s.pieces()[p];
    const int c = s.component_of(p);
    faces[c] += 1;
    out[c].coords[piece.tet * kCoordsPerTet + piece.coord] += 1;
    for (const auto& a : piece.boundary) {
      const int x = s.vertex_of_point(s.point_id(piece.tet, a.corner, a.from_vertex, a.nest));
      if (!seen[c][x]) {
        seen[c][x] = 1;
        verts[c] += 1;
      }
      const int id = s.arc_id(piece.tet, a.face, a.corner, a.nest);
      const int mate = s.arc_mate(id);
      if (mate < 0 || id < mate) edges[c] += 1;
      if (mate < 0) {
        const int y = s.vertex_of_point(s.point_id(piece.tet, a.corner, a.to_vertex, a.nest));
        bnd.unite(x, y);
        on_boundary[x] = on_boundary[y] = 1;
      }
    }
  }
  std::vector<std::vector<char>> root_seen(nc, std::vector<char>(s.num_vertices(), 0));
  for (int p = 0; p < static_cast<int>(s.pieces().size()); ++p) {
    const auto& piece = s.pieces()[p];
    const int c = s.component_of(p);
    for (const auto& a : piece.boundary) {
      const int x = s.vertex_of_point(s.point_id(piece.tet, a.corner, a.from_vertex, a.nest));
      if (!on_boundary[x]) continue;
      const int r = bnd.find(x);
      if (!root_seen[c][r]) {
        root_seen[c][r] = 1;
        out[c].boundary_components += 1;
      }
    }
  }
  for (int c = 0; c < nc; ++c) {
    auto& r = out[c];
    r.euler = verts[c] - edges[c] + faces[c];
    bool only_triangles = true;
    for (int t = 0; t < tri.num_tets(); ++t)
      for (int k = kQuadOffset; k < kCoordsPerTet; ++k)
        if (r.coords[t * kCoordsPerTet + k] != 0) only_triangles = false;
    r.is_vertex_linking = only_triangles && r.boundary_components == 0;
    if (r.boundary_components > 0) {
      r.kind = (r.euler == 1 && r.boundary_components == 1) ? SurfaceKind::disk
                                                            : SurfaceKind::bounded;
      r.genus = r.orientable ? (2 - r.euler - r.boundary_components) / 2
                             : 2 - r.euler - r.boundary_components;
    } else if (r.orientable) {
      r.genus = (2 - r.euler) / 2;
      r.kind = r.euler == 2   ? SurfaceKind::sphere
               : r.euler == 0 ? SurfaceKind::torus
                              : SurfaceKind::higher_genus;
    } else {
      r.genus = 2 - r.euler;
      r.kind = r.euler == 1 ? SurfaceKind::projective_plane : SurfaceKind::nonorientable;
    }
  }
  return out;
}

std::int64_t EulerFunctional::evaluate(const SurfaceVector& v) const {
  if (static_cast<std::size_t>(v.size()) != twice_coeffs.size())
    throw DimensionMismatch("vector length does not match the triangulation");
  std::int64_t total = 0;
  for (int i = 0; i < v.size(); ++i) total += twice_coeffs[i] * v[i];
  if (total % 2 != 0) throw std::logic_error("odd Euler functional value");
  return total / 2;
}

EulerFunctional euler_functional(const Triangulation& tri) {
  const Skeleton sk = compute_skeleton(tri);
  const int T = tri.num_tets();
  EulerFunctional fn;
  fn.twice_coeffs.assign(T * kCoordsPerTet, 0);
  for (int t = 0; t < T; ++t) {
    for (int c = 0; c < kCoordsPerTet; ++c) {
      const int arcs = c < kQuadOffset ? 3 : c < kOctOffset ? 4 : 8;
      fn.twice_coeffs[t * kCoordsPerTet + c] = 2 - arcs;
    }
  }
  for (const auto& orbit : sk.edge_orbits) {
    const auto& rep = orbit.front();
    const auto [a, b] = kEdgeVertices[rep.edge];
    const int pt = pairing_type(a, b);
    auto* row = &fn.twice_coeffs[rep.tet * kCoordsPerTet];
    row[a] += 2;
    row[b] += 2;
    for (int q = 0; q < 3; ++q) {
      if (q != pt) row[kQuadOffset + q] += 2;
      row[kOctOffset + q] += q == pt ? 4 : 2;
    }
  }
  return fn;
}

std::int64_t euler_cellular(const Triangulation& tri, const SurfaceVector& v) {
  const CarriedSurface s = reconstruct(tri, v);
  std::int64_t total = 0;
  for (const auto& r : classify_components(tri, s)) total += r.euler;
  return total;
}

void classify_fundamental(const Triangulation& tri, FundamentalSet& fund) {
  fund.tori.clear();
  fund.non_tori.clear();
  fund.other.clear();
  for (int i = 0; i < static_cast<int>(fund.members.size()); ++i) {
    const auto& m = fund.members[i];
    const CarriedSurface s = reconstruct(tri, m);
    const auto comps = classify_components(tri, s);
    std::int64_t chi = 0;
    for (const auto& c : comps) chi += c.euler;
    if (comps.size() == 1 && comps[0].orientable && chi == 0 && m.octagon_total() == 0)
      fund.tori.push_back(i);
    else if (chi > 0)
      fund.other.push_back(i);
    else
      fund.non_tori.push_back(i);
  }
  fund.classified = true;
}

}  // namespace normsurf
