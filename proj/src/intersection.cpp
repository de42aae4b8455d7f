#include <algorithm>
#include <deque>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>
#include <tuple>

#include "normsurf/errors.hpp"
#include "normsurf/surface_topology.hpp"

namespace normsurf {

namespace {

std::int64_t to_i64(const BigInt& x) {
  if (x > std::numeric_limits<std::int64_t>::max() ||
      x < std::numeric_limits<std::int64_t>::min())
    throw ResourceLimit("homology coordinate exceeds 64 bits");
  return static_cast<std::int64_t>(x);
}

// Column operations on m (rows x cols) mirrored on u (cols x cols), bringing m
// to column echelon form. Returns the number of pivot columns.
int column_echelon(std::vector<std::vector<BigInt>>& m, std::vector<std::vector<BigInt>>& u) {
  const int rows = static_cast<int>(m.size());
  const int cols = static_cast<int>(u.size());
  auto col_op = [&](int dst, int src, const BigInt& k) {  // col dst -= k * col src
    for (int r = 0; r < rows; ++r) m[r][dst] -= k * m[r][src];
    for (int r = 0; r < cols; ++r) u[r][dst] -= k * u[r][src];
  };
  auto col_swap = [&](int a, int b) {
    for (int r = 0; r < rows; ++r) std::swap(m[r][a], m[r][b]);
    for (int r = 0; r < cols; ++r) std::swap(u[r][a], u[r][b]);
  };
  int pivot = 0;
  for (int r = 0; r < rows && pivot < cols; ++r) {
    while (true) {
      int best = -1;
      for (int c = pivot; c < cols; ++c)
        if (m[r][c] != 0 && (best < 0 || abs(m[r][c]) < abs(m[r][best]))) best = c;
      if (best < 0) break;
      col_swap(pivot, best);
      bool done = true;
      for (int c = pivot + 1; c < cols; ++c) {
        if (m[r][c] == 0) continue;
        const BigInt k = m[r][c] / m[r][pivot];
        col_op(c, pivot, k);
        if (m[r][c] != 0) done = false;
      }
      if (done) break;
    }
    if (m[r][pivot] != 0) ++pivot;
  }
  return pivot;
}

// Row Hermite normal form of an integer matrix with full row rank.
void row_hermite(std::vector<std::vector<BigInt>>& w) {
  const int rows = static_cast<int>(w.size());
  if (rows == 0) return;
  const int cols = static_cast<int>(w[0].size());
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    while (true) {
      int best = -1;
      for (int i = r; i < rows; ++i)
        if (w[i][c] != 0 && (best < 0 || abs(w[i][c]) < abs(w[best][c]))) best = i;
      if (best < 0) break;
      std::swap(w[r], w[best]);
      bool done = true;
      for (int i = r + 1; i < rows; ++i) {
        if (w[i][c] == 0) continue;
        const BigInt k = w[i][c] / w[r][c];
        for (int j = 0; j < cols; ++j) w[i][j] -= k * w[r][j];
        if (w[i][c] != 0) done = false;
      }
      if (done) break;
    }
    if (w[r][c] == 0) continue;
    if (w[r][c] < 0)
      for (auto& x : w[r]) x = -x;
    for (int i = 0; i < r; ++i) {
      BigInt k = w[i][c] / w[r][c];
      if (w[i][c] - k * w[r][c] < 0) k -= 1;
      for (int j = 0; j < cols; ++j) w[i][j] -= k * w[r][j];
    }
    ++r;
  }
}

void normalize_sign(std::vector<std::int64_t>& v) {
  for (auto x : v) {
    if (x == 0) continue;
    if (x < 0)
      for (auto& y : v) y = -y;
    return;
  }
}

}  // namespace

ComponentHomology::ComponentHomology(const CarriedSurface& s, int component)
    : surface_(&s), component_(component), orientable_(s.component_orientable(component)) {
  const int np = static_cast<int>(s.pieces().size());
  parent_arc_.assign(np, -1);
  depth_.assign(np, -1);
  int root = -1;
  for (int p = 0; p < np && root < 0; ++p)
    if (s.component_of(p) == component) root = p;
  if (root < 0) throw UnknownComponent("no such surface component");

  std::set<int> tree;
  depth_[root] = 0;
  std::deque<int> queue{root};
  while (!queue.empty()) {
    const int p = queue.front();
    queue.pop_front();
    const auto& piece = s.pieces()[p];
    for (const auto& a : piece.boundary) {
      const int id = s.arc_id(piece.tet, a.face, a.corner, a.nest);
      const int mate = s.arc_mate(id);
      if (mate < 0) continue;
      const int q = s.arc_piece(mate);
      if (depth_[q] >= 0) continue;
      depth_[q] = depth_[p] + 1;
      parent_arc_[q] = id;
      tree.insert(std::min(id, mate));
      queue.push_back(q);
    }
  }
  for (int a = 0; a < s.num_arcs(); ++a) {
    const int mate = s.arc_mate(a);
    if (mate < a || s.component_of(s.arc_piece(a)) != component) continue;
    if (!tree.count(a)) {
      const int idx = static_cast<int>(nontree_index_.size());
      nontree_index_[a] = idx;
    }
  }
  const int m = static_cast<int>(nontree_index_.size());

  std::vector<std::vector<BigInt>> rel;
  std::vector<char> done(s.num_vertices(), 0);
  for (int p = 0; p < np; ++p) {
    if (s.component_of(p) != component) continue;
    const auto& piece = s.pieces()[p];
    for (const auto& a : piece.boundary) {
      const int x = s.vertex_of_point(s.point_id(piece.tet, a.corner, a.from_vertex, a.nest));
      if (done[x]) continue;
      done[x] = 1;
      const auto c = chain(vertex_link_walk(x));
      std::vector<BigInt> row(c.begin(), c.end());
      if (std::any_of(row.begin(), row.end(), [](const BigInt& v) { return v != 0; }))
        rel.push_back(std::move(row));
    }
  }

  std::vector<std::vector<BigInt>> u(m, std::vector<BigInt>(m, 0));
  for (int i = 0; i < m; ++i) u[i][i] = 1;
  const int pivots = column_echelon(rel, u);
  std::vector<std::vector<BigInt>> w;
  for (int c = pivots; c < m; ++c) {
    std::vector<BigInt> row(m);
    for (int r = 0; r < m; ++r) row[r] = u[r][c];
    w.push_back(std::move(row));
  }
  row_hermite(w);
  for (const auto& row : w) {
    std::vector<std::int64_t> out;
    for (const auto& x : row) out.push_back(to_i64(x));
    basis_.push_back(std::move(out));
  }

  if (rank() != 2) return;
  std::vector<int> arcs(m);
  for (const auto& [arc, idx] : nontree_index_) arcs[idx] = arc;
  for (int i = 0; i < m && change_.empty(); ++i) {
    for (int j = i + 1; j < m; ++j) {
      const std::int64_t a = basis_[0][i], b = basis_[0][j];
      const std::int64_t c = basis_[1][i], d = basis_[1][j];
      const std::int64_t det = a * d - b * c;
      if (det != 1 && det != -1) continue;
      change_ = {{d * det, -b * det}, {-c * det, a * det}};
      for (int k : {i, j}) {
        const int arc = arcs[k];
        const int mate = s.arc_mate(arc);
        DualWalk walk = tree_path(root, s.arc_piece(arc));
        walk.push_back(arc);
        const DualWalk back = tree_path(s.arc_piece(mate), root);
        walk.insert(walk.end(), back.begin(), back.end());
        basis_walks_.push_back(std::move(walk));
      }
      break;
    }
  }
}

DualWalk ComponentHomology::tree_path(int from_piece, int to_piece) const {
  const auto& s = *surface_;
  DualWalk up_from, up_to;
  int a = from_piece, b = to_piece;
  while (a != b) {
    if (depth_[a] >= depth_[b]) {
      const int arc = parent_arc_[a];
      up_from.push_back(s.arc_mate(arc));
      a = s.arc_piece(arc);
    } else {
      const int arc = parent_arc_[b];
      up_to.push_back(arc);
      b = s.arc_piece(arc);
    }
  }
  up_from.insert(up_from.end(), up_to.rbegin(), up_to.rend());
  return up_from;
}

std::vector<std::int64_t> ComponentHomology::chain(const DualWalk& walk) const {
  std::vector<std::int64_t> out(nontree_index_.size(), 0);
  for (int arc : walk) {
    const int mate = surface_->arc_mate(arc);
    if (mate < 0) throw std::logic_error("walk crosses a boundary arc");
    const int canon = std::min(arc, mate);
    auto it = nontree_index_.find(canon);
    if (it == nontree_index_.end()) continue;
    out[it->second] += arc == canon ? 1 : -1;
  }
  return out;
}

std::vector<std::int64_t> ComponentHomology::coordinates(const DualWalk& walk) const {
  const auto c = chain(walk);
  std::vector<std::int64_t> phi(basis_.size(), 0);
  for (std::size_t i = 0; i < basis_.size(); ++i)
    for (std::size_t j = 0; j < c.size(); ++j) phi[i] += basis_[i][j] * c[j];
  if (change_.empty()) return phi;
  return {change_[0][0] * phi[0] + change_[0][1] * phi[1],
          change_[1][0] * phi[0] + change_[1][1] * phi[1]};
}

std::vector<std::int64_t> ComponentHomology::classify(const DualWalk& walk) const {
  auto v = coordinates(walk);
  normalize_sign(v);
  return v;
}

DualWalk ComponentHomology::vertex_link_walk(int vertex) const {
  const auto& s = *surface_;
  // State: piece, slot of the arc about to be crossed, and which end of that
  // arc sits on the vertex (0 = from, 1 = to).
  int p0 = -1, k0 = -1;
  for (int p = 0; p < static_cast<int>(s.pieces().size()) && p0 < 0; ++p) {
    if (s.component_of(p) != component_) continue;
    const auto& piece = s.pieces()[p];
    for (int k = 0; k < static_cast<int>(piece.boundary.size()); ++k) {
      const auto& a = piece.boundary[k];
      if (s.vertex_of_point(s.point_id(piece.tet, a.corner, a.from_vertex, a.nest)) == vertex) {
        p0 = p;
        k0 = k;
        break;
      }
    }
  }
  if (p0 < 0) throw std::logic_error("vertex not in component");
  DualWalk walk;
  int p = p0, k = k0, end = 0;
  do {
    const auto& piece = s.pieces()[p];
    const auto& a = piece.boundary[k];
    const int id = s.arc_id(piece.tet, a.face, a.corner, a.nest);
    const int mate = s.arc_mate(id);
    if (mate < 0) throw std::logic_error("vertex lies on the boundary");
    walk.push_back(id);
    const int mate_end = s.mate_same_direction(id) ? end : 1 - end;
    p = s.arc_piece(mate);
    const int n = static_cast<int>(s.pieces()[p].boundary.size());
    const int slot = s.arc_slot(mate);
    if (mate_end == 0) {
      k = (slot + n - 1) % n;
      end = 1;
    } else {
      k = (slot + 1) % n;
      end = 0;
    }
    if (walk.size() > static_cast<std::size_t>(s.num_arcs()) + 1)
      throw std::logic_error("vertex link walk does not close");
  } while (!(p == p0 && k == k0 && end == 0));
  return walk;
}

CurveClass curve_class(const Triangulation& tri, const CarriedSurface& s, int component,
                       const DualWalk& walk) {
  const auto reports = classify_components(tri, s);
  if (component < 0 || component >= static_cast<int>(reports.size()))
    throw UnknownComponent("component " + std::to_string(component) + " does not exist");
  if (reports[component].kind != SurfaceKind::torus)
    throw NotATorus("component " + std::to_string(component) + " is a " +
                    to_string(reports[component].kind));
  const ComponentHomology h(s, component);
  CurveClass out;
  out.coords = h.classify(walk);
  out.essential = std::any_of(out.coords.begin(), out.coords.end(),
                              [](std::int64_t x) { return x != 0; });
  return out;
}

std::int64_t conservative_triple_points(const std::vector<SurfaceVector>& surfaces) {
  if (surfaces.size() < 3) return 0;
  if (surfaces.size() > 3) throw Unsupported("at most three surfaces are supported");
  std::int64_t total = 0;
  const int T = surfaces[0].num_tets();
  for (int t = 0; t < T; ++t) {
    std::int64_t prod = 1;
    std::set<int> types;
    for (const auto& s : surfaces) {
      const auto m = s.middle_types(t);
      if (m.size() != 1) {
        prod = 0;
        break;
      }
      types.insert(m[0]);
      prod *= s[t * kCoordsPerTet + m[0]];
    }
    if (prod != 0 && types.size() == 3) total += prod;
  }
  return total;
}

namespace {

struct Merged {
  // merged[orbit][k][j]: position from the orbit's start of the j-th point of
  // surface k counted from the start.
  std::vector<std::vector<std::vector<std::int64_t>>> pos;
  std::vector<std::int64_t> total;
};

Merged merge_edges(const Skeleton& sk, const std::vector<CarriedSurface>& surfs) {
  Merged out;
  const int ne = sk.num_edges();
  const int m = static_cast<int>(surfs.size());
  out.pos.assign(ne, std::vector<std::vector<std::int64_t>>(m));
  out.total.assign(ne, 0);
  std::vector<std::vector<std::int64_t>> layers(m);
  for (int k = 0; k < m; ++k) {
    for (const auto& orbit : sk.vertex_orbits) {
      std::int64_t l = std::numeric_limits<std::int64_t>::max();
      for (const auto& c : orbit) l = std::min(l, surfs[k].vector().tri(c.tet, c.vertex));
      layers[k].push_back(l);
    }
  }
  for (int e = 0; e < ne; ++e) {
    const auto& rep = sk.edge_orbits[e].front();
    const auto [lo, hi] = kEdgeVertices[rep.edge];
    const int vx = sk.vertex_of[rep.tet][rep.sign > 0 ? lo : hi];
    const int vy = sk.vertex_of[rep.tet][rep.sign > 0 ? hi : lo];
    // Complete vertex-link layers sit outermost at each end; the remaining
    // points go to the nearer end by depth beyond those layers, ties broken by
    // surface index with lower indices outermost.
    std::vector<std::tuple<int, int, std::int64_t, int, std::int64_t>> keys;
    for (int k = 0; k < m; ++k) {
      const std::int64_t n = surfs[k].edge_points(rep.tet, rep.edge);
      const std::int64_t lx = layers[k][vx], ly = layers[k][vy];
      out.pos[e][k].assign(n, 0);
      for (std::int64_t j = 0; j < n; ++j) {
        const std::int64_t dx = j, dy = n - 1 - j;
        if (dx < lx)
          keys.emplace_back(0, 0, dx, k, j);
        else if (dy < ly)
          keys.emplace_back(1, 1, -dy, -k, j);
        else if (dx - lx <= dy - ly)
          keys.emplace_back(0, 1, dx - lx, k, j);
        else
          keys.emplace_back(1, 0, -(dy - ly), -k, j);
      }
    }
    std::sort(keys.begin(), keys.end());
    for (std::size_t i = 0; i < keys.size(); ++i) {
      const auto& [half, zone, d, kk, j] = keys[i];
      const int k = half == 0 ? kk : -kk;
      out.pos[e][k][j] = static_cast<std::int64_t>(i);
    }
    out.total[e] = static_cast<std::int64_t>(keys.size());
  }
  return out;
}

struct Crossing {
  int si, sj;
  int arc_i[2], arc_j[2];
};

}  // namespace

IntersectionReport intersection_complexity(const Triangulation& tri,
                                           const std::vector<SurfaceVector>& input) {
  if (input.size() > 3) throw Unsupported("at most three surfaces are supported");
  if (input.size() < 2) throw Unsupported("intersection needs two or three surfaces");
  const MatchingSystem sys = matching_system(tri);
  for (const auto& v : input) {
    const auto rep = check_admissible(v, sys);
    if (!rep.admissible) throw NotAdmissible(rep.describe());
  }
  std::vector<int> order(input.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return canonical_less(input[a], input[b]); });
  std::vector<CarriedSurface> surfs;
  std::vector<std::vector<ComponentReport>> comps;
  for (int i : order) {
    surfs.push_back(reconstruct(tri, input[i]));
    comps.push_back(classify_components(tri, surfs.back()));
  }
  const int m = static_cast<int>(surfs.size());
  const Skeleton sk = compute_skeleton(tri);
  const Merged merged = merge_edges(sk, surfs);

  auto merged_from = [&](int k, int t, int from, int to, std::int64_t dist) {
    const int e = edge_index(from, to);
    const std::int64_t n = surfs[k].edge_points(t, e);
    const std::int64_t pos_low = from < to ? dist : n - 1 - dist;
    const int orbit = sk.edge_of[t][e];
    const int sign = sk.edge_sign[t][e];
    const std::int64_t jx = sign > 0 ? pos_low : n - 1 - pos_low;
    const std::int64_t mx = merged.pos[orbit][k][jx];
    const std::int64_t total = merged.total[orbit];
    const std::int64_t m_low = sign > 0 ? mx : total - 1 - mx;
    return from < to ? m_low : total - 1 - m_low;
  };

  IntersectionReport rep;
  rep.triple_points = conservative_triple_points(input);

  // Circle coordinate of a point on face f of tet t.
  auto circle = [&](int t, int f, int k, int from, int to, std::int64_t dist,
                    std::array<std::int64_t, 3>& lens) {
    std::array<int, 3> u{};
    for (int x = 0, n = 0; x < 4; ++x)
      if (x != f) u[n++] = x;
    for (int i = 0; i < 3; ++i) {
      const int orbit = sk.edge_of[t][edge_index(u[i], u[(i + 1) % 3])];
      lens[i] = merged.total[orbit];
    }
    for (int i = 0; i < 3; ++i) {
      const int a = u[i], b = u[(i + 1) % 3];
      if ((from == a && to == b) || (from == b && to == a)) {
        std::int64_t off = 0;
        for (int q = 0; q < i; ++q) off += lens[q];
        const std::int64_t d = merged_from(k, t, from, to, dist);
        return off + (from == a ? d : lens[i] - 1 - d);
      }
    }
    throw std::logic_error("edge not on face");
  };
  auto endpoints = [&](int k, int arc, std::int64_t& p, std::int64_t& q, std::int64_t& len) {
    const auto& a = surfs[k].arc(arc);
    const int t = surfs[k].arc_tet(arc);
    std::array<std::int64_t, 3> lens{};
    p = circle(t, a.face, k, a.corner, a.from_vertex, a.nest, lens);
    q = circle(t, a.face, k, a.corner, a.to_vertex, a.nest, lens);
    len = lens[0] + lens[1] + lens[2];
  };

  std::vector<Crossing> crossings;
  for (const auto& g : tri.gluings()) {
    for (int si = 0; si < m; ++si)
      for (int sj = si + 1; sj < m; ++sj) {
        std::vector<int> ai, aj;
        for (int c = 0; c < 4; ++c) {
          if (c == g.face) continue;
          for (std::int64_t n = 0;; ++n) {
            const int id = surfs[si].arc_id(g.tet, g.face, c, n);
            if (id < 0) break;
            ai.push_back(id);
          }
          for (std::int64_t n = 0;; ++n) {
            const int id = surfs[sj].arc_id(g.tet, g.face, c, n);
            if (id < 0) break;
            aj.push_back(id);
          }
        }
        for (int x : ai) {
          std::int64_t p1, p2, len;
          endpoints(si, x, p1, p2, len);
          const auto lo = std::min(p1, p2), hi = std::max(p1, p2);
          for (int y : aj) {
            std::int64_t q1, q2;
            endpoints(sj, y, q1, q2, len);
            const bool in1 = lo < q1 && q1 < hi, in2 = lo < q2 && q2 < hi;
            if (in1 == in2) continue;
            crossings.push_back({si, sj,
                                 {x, surfs[si].arc_mate(x)},
                                 {y, surfs[sj].arc_mate(y)}});
          }
        }
      }
  }

  // Pair crossings into double arcs inside each tetrahedron.
  const int nc = static_cast<int>(crossings.size());
  std::vector<std::array<int, 2>> partner(nc, {-1, -1});  // half -> other half (2*x+side)
  std::map<std::tuple<int, int, int, int>, std::vector<std::pair<std::array<std::int64_t, 2>, int>>>
      groups;
  for (int x = 0; x < nc; ++x) {
    const auto& c = crossings[x];
    for (int side = 0; side < 2; ++side) {
      const int ai = c.arc_i[side], aj = c.arc_j[side];
      const auto& si = surfs[c.si];
      std::int64_t s0, e0, len, q1, q2;
      endpoints(c.si, ai, s0, e0, len);
      endpoints(c.sj, aj, q1, q2, len);
      const std::int64_t span = ((e0 - s0) % len + len) % len;
      const std::int64_t d1 = ((q1 - s0) % len + len) % len;
      const std::int64_t d2 = ((q2 - s0) % len + len) % len;
      const std::int64_t param = (d1 > 0 && d1 < span) ? d1 : d2;
      groups[{c.si, c.sj, si.arc_piece(ai), surfs[c.sj].arc_piece(aj)}].push_back(
          {{si.arc_slot(ai), param}, 2 * x + side});
    }
  }
  for (auto& [key, hs] : groups) {
    std::sort(hs.begin(), hs.end());
    if (hs.size() % 2 != 0) throw std::logic_error("odd number of boundary crossings");
    for (std::size_t i = 0; i < hs.size(); i += 2) {
      const int a = hs[i].second, b = hs[i + 1].second;
      partner[a / 2][a % 2] = b;
      partner[b / 2][b % 2] = a;
    }
  }

  std::map<std::pair<int, int>, ComponentHomology> homology;
  auto class_of = [&](int k, int comp, const DualWalk& walk) -> std::optional<CurveClass> {
    if (comps[k][comp].kind != SurfaceKind::torus) return std::nullopt;
    auto it = homology.find({k, comp});
    if (it == homology.end()) it = homology.emplace(std::pair{k, comp}, ComponentHomology(surfs[k], comp)).first;
    CurveClass cc;
    cc.coords = it->second.classify(walk);
    cc.essential = std::any_of(cc.coords.begin(), cc.coords.end(),
                               [](std::int64_t v) { return v != 0; });
    return cc;
  };

  std::vector<char> used(nc, 0);
  std::map<std::pair<int, int>, std::int64_t> per_pair;
  for (int x0 = 0; x0 < nc; ++x0) {
    if (used[x0]) continue;
    const auto& c0 = crossings[x0];
    DoubleCurve curve;
    curve.surface_a = order[c0.si];
    curve.surface_b = order[c0.sj];
    int half = 2 * x0;
    do {
      const int next = partner[half / 2][half % 2];
      if (next < 0) throw std::logic_error("unpaired crossing");
      const int x = next / 2, side = next % 2;
      used[x] = 1;
      curve.walk_a.push_back(crossings[x].arc_i[side]);
      curve.walk_b.push_back(crossings[x].arc_j[side]);
      half = 2 * x + (1 - side);
    } while (half != 2 * x0);
    curve.component_a = surfs[c0.si].component_of(surfs[c0.si].arc_piece(c0.arc_i[0]));
    curve.component_b = surfs[c0.sj].component_of(surfs[c0.sj].arc_piece(c0.arc_j[0]));
    curve.class_a = class_of(c0.si, curve.component_a, curve.walk_a);
    curve.class_b = class_of(c0.sj, curve.component_b, curve.walk_b);
    per_pair[{c0.si, c0.sj}] += 1;
    rep.curves.push_back(std::move(curve));
  }
  rep.double_curves = static_cast<std::int64_t>(rep.curves.size());
  for (const auto& [pair, count] : per_pair)
    if (!(surfs[pair.first].vector() == surfs[pair.second].vector()))
      rep.reduced_double_curves += count;
  return rep;
}

}  // namespace normsurf
