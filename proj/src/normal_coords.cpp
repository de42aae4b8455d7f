#include "normsurf/normal_coords.hpp"

#include <algorithm>
#include <numeric>

#include "normsurf/errors.hpp"

namespace normsurf {

int pairing_type(int a, int b) {
  if (a > b) std::swap(a, b);
  if (a == 0) return b - 1;
  return 5 - a - b;
}

bool on_first_side(int type, int v) {
  return kQuadPairs[type][0][0] == v || kQuadPairs[type][0][1] == v;
}

SurfaceVector SurfaceVector::from_coords(std::vector<std::int64_t> coords) {
  if (coords.size() % kCoordsPerTet != 0)
    throw DimensionMismatch("coordinate count " + std::to_string(coords.size()) +
                            " is not a multiple of 10");
  for (std::size_t i = 0; i < coords.size(); ++i)
    if (coords[i] < 0)
      throw NotAdmissible("coordinate " + std::to_string(i) + " is negative");
  SurfaceVector v;
  v.coords_ = std::move(coords);
  return v;
}

bool SurfaceVector::is_zero() const {
  return std::all_of(coords_.begin(), coords_.end(), [](auto x) { return x == 0; });
}

std::int64_t SurfaceVector::octagon_total() const {
  std::int64_t total = 0;
  for (int t = 0; t < num_tets(); ++t)
    for (int k = 0; k < 3; ++k) total += oct(t, k);
  return total;
}

std::vector<int> SurfaceVector::middle_types(int tet) const {
  std::vector<int> out;
  for (int k = kQuadOffset; k < kCoordsPerTet; ++k)
    if (coords_[tet * kCoordsPerTet + k] != 0) out.push_back(k);
  return out;
}

SurfaceVector SurfaceVector::scaled(std::int64_t k) const {
  SurfaceVector out = *this;
  for (auto& x : out.coords_) x *= k;
  return out;
}

SurfaceVector operator+(const SurfaceVector& a, const SurfaceVector& b) {
  if (a.size() != b.size())
    throw DimensionMismatch("summands have different dimensions");
  SurfaceVector out = a;
  for (int i = 0; i < a.size(); ++i) out.coords_[i] += b.coords_[i];
  return out;
}

std::vector<int> arc_contributors(int face, int corner) {
  const int q = pairing_type(face, corner);
  std::vector<int> out{corner, kQuadOffset + q};
  for (int k = 0; k < 3; ++k)
    if (k != q) out.push_back(kOctOffset + k);
  return out;
}

std::int64_t arc_count(const SurfaceVector& v, int tet, int face, int corner) {
  std::int64_t total = 0;
  for (int off : arc_contributors(face, corner)) total += v[tet * kCoordsPerTet + off];
  return total;
}

std::int64_t MatchingSystem::evaluate(int row, const SurfaceVector& v) const {
  const auto& r = rows[row];
  std::int64_t total = 0;
  for (int i = 0; i < v.size(); ++i) total += r.coeffs[i] * v[i];
  return total;
}

MatchingSystem matching_system(const Triangulation& tri) {
  MatchingSystem sys;
  sys.num_tets = tri.num_tets();
  const int cols = sys.num_columns();
  for (const auto& g : tri.gluings()) {
    for (int corner = 0; corner < 4; ++corner) {
      if (corner == g.face) continue;
      MatchingRow row{g.tet, g.face, corner, g.to_tet, g.to_face, g.perm[corner],
                      std::vector<int>(cols, 0)};
      for (int off : arc_contributors(g.face, corner))
        row.coeffs[g.tet * kCoordsPerTet + off] += 1;
      for (int off : arc_contributors(g.to_face, g.perm[corner]))
        row.coeffs[g.to_tet * kCoordsPerTet + off] -= 1;
      sys.rows.push_back(std::move(row));
    }
  }
  return sys;
}

std::string AdmissibilityReport::describe() const {
  if (admissible) return "admissible";
  std::string out;
  if (!violated_rows.empty()) {
    out += "matching equations violated at rows";
    for (int r : violated_rows) out += " " + std::to_string(r);
  }
  if (type_conflict_tet) {
    if (!out.empty()) out += "; ";
    out += "two quad/octagon types in tetrahedron " + std::to_string(*type_conflict_tet);
  }
  if (octagon_excess) {
    if (!out.empty()) out += "; ";
    out += "more than one octagon";
  }
  return out;
}

AdmissibilityReport check_admissible(const SurfaceVector& v, const MatchingSystem& sys) {
  if (v.size() != sys.num_columns())
    throw DimensionMismatch("vector has " + std::to_string(v.size()) +
                            " coordinates, system expects " +
                            std::to_string(sys.num_columns()));
  AdmissibilityReport rep;
  for (int r = 0; r < static_cast<int>(sys.rows.size()); ++r)
    if (sys.evaluate(r, v) != 0) rep.violated_rows.push_back(r);
  for (int t = 0; t < v.num_tets(); ++t) {
    if (v.middle_types(t).size() > 1) {
      rep.type_conflict_tet = t;
      break;
    }
  }
  rep.octagon_excess = v.octagon_total() > 1;
  rep.admissible = rep.violated_rows.empty() && !rep.type_conflict_tet && !rep.octagon_excess;
  return rep;
}

bool is_admissible(const SurfaceVector& v, const MatchingSystem& sys) {
  return check_admissible(v, sys).admissible;
}

std::vector<SurfaceVector> vertex_links(const Triangulation& tri) {
  const Skeleton sk = compute_skeleton(tri);
  std::vector<SurfaceVector> out(sk.num_vertices(), SurfaceVector(tri.num_tets()));
  for (int o = 0; o < sk.num_vertices(); ++o)
    for (const auto& c : sk.vertex_orbits[o]) out[o][c.tet * kCoordsPerTet + c.vertex] += 1;
  return out;
}

SurfaceVector vertex_link(const Triangulation& tri) {
  auto links = vertex_links(tri);
  if (links.size() != 1)
    throw NotOneVertex("triangulation has " + std::to_string(links.size()) +
                       " vertices; use vertex_links for per-vertex links");
  return links.front();
}

std::int64_t weight(const SurfaceVector& v) {
  return std::accumulate(v.coords().begin(), v.coords().end(), std::int64_t{0});
}

SurfaceVector haken_sum(const SurfaceVector& a, const SurfaceVector& b) {
  SurfaceVector sum = a + b;
  for (int t = 0; t < sum.num_tets(); ++t) {
    const auto types = sum.middle_types(t);
    if (types.size() > 1) {
      const bool has_oct = std::any_of(types.begin(), types.end(),
                                       [](int k) { return k >= kOctOffset; });
      throw IncompatibleSummands(t, has_oct ? "octagon shares a tetrahedron with another "
                                              "quad/octagon type"
                                            : "distinct quad types");
    }
  }
  if (sum.octagon_total() > 1) {
    int tet = 0;
    for (int t = 0; t < sum.num_tets(); ++t)
      if (b.oct(t, 0) + b.oct(t, 1) + b.oct(t, 2) > 0) {
        tet = t;
        break;
      }
    throw IncompatibleSummands(tet, "octagon total exceeds one");
  }
  return sum;
}

}  // namespace normsurf
