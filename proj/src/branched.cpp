#include "normsurf/branched.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

#include "normsurf/detail/parallel.hpp"
#include "normsurf/detail/union_find.hpp"
#include "normsurf/errors.hpp"
#include "normsurf/surface_topology.hpp"

namespace normsurf {

namespace {

using Rational = boost::multiprecision::cpp_rational;

void check_support(int num_tets, const std::vector<int>& columns) {
  if (columns.empty()) throw EmptySupport("support is empty");
  std::vector<int> middle(num_tets, -1);
  int oct_tets = 0;
  for (int c : columns) {
    if (c < 0 || c >= num_tets * kCoordsPerTet)
      throw DimensionMismatch("support column " + std::to_string(c) + " out of range");
    const int t = c / kCoordsPerTet, off = c % kCoordsPerTet;
    if (off < kQuadOffset) continue;
    if (middle[t] >= 0)
      throw EmptySupport("support has two quad/octagon types in tetrahedron " +
                         std::to_string(t));
    middle[t] = off;
    if (off >= kOctOffset) ++oct_tets;
  }
  if (oct_tets > 1) throw EmptySupport("support has octagons in more than one tetrahedron");
}

}  // namespace

BranchedCarrier build_carrier(const Triangulation& tri, std::vector<int> columns) {
  std::sort(columns.begin(), columns.end());
  columns.erase(std::unique(columns.begin(), columns.end()), columns.end());
  check_support(tri.num_tets(), columns);

  BranchedCarrier car(tri);
  car.sys_ = matching_system(tri);
  car.support_ = columns;
  const int ncols = tri.num_tets() * kCoordsPerTet;
  std::vector<int> pos(ncols, -1);
  for (int i = 0; i < static_cast<int>(columns.size()); ++i) pos[columns[i]] = i;

  detail::UnionFind uf(static_cast<int>(columns.size()));
  struct Pending {
    int row;
    std::vector<int> left, right;
  };
  std::vector<Pending> branching;
  for (int r = 0; r < static_cast<int>(car.sys_.rows.size()); ++r) {
    const auto& row = car.sys_.rows[r];
    std::vector<int> left, right;
    for (int c : columns) {
      if (row.coeffs[c] > 0) left.push_back(c);
      if (row.coeffs[c] < 0) right.push_back(c);
    }
    const auto nl = left.size(), nr = right.size();
    if (nl == 0 && nr == 0) continue;
    if (nl == 0 || nr == 0) {
      car.zero_rows_.push_back(r);
    } else if (nl == 1 && nr == 1) {
      uf.unite(pos[left[0]], pos[right[0]]);
    } else if (nl <= 2 && nr <= 2) {
      branching.push_back({r, left, right});
    } else {
      throw std::logic_error("unexpected arc multiplicity on a face");
    }
  }

  int nsec = 0;
  const auto cls = uf.dense_classes(&nsec);
  car.sectors_.resize(nsec);
  car.sector_of_column_.assign(ncols, -1);
  for (int i = 0; i < nsec; ++i) car.sectors_[i].id = i;
  for (int i = 0; i < static_cast<int>(columns.size()); ++i) {
    car.sectors_[cls[i]].columns.push_back(columns[i]);
    car.sector_of_column_[columns[i]] = cls[i];
  }

  auto add_arc = [&](int row, int single, int a, int b, int toward) {
    BranchArc arc;
    arc.id = static_cast<int>(car.arcs_.size());
    arc.row = row;
    arc.single = single;
    arc.pair = {std::min(a, b), std::max(a, b)};
    arc.toward = toward;
    car.arcs_.push_back(arc);
  };
  for (const auto& p : branching) {
    auto sec = [&](int c) { return car.sector_of_column_[c]; };
    if (p.left.size() == 1) {
      add_arc(p.row, sec(p.left[0]), sec(p.right[0]), sec(p.right[1]), 0);
    } else if (p.right.size() == 1) {
      add_arc(p.row, sec(p.right[0]), sec(p.left[0]), sec(p.left[1]), 1);
    } else {
      Sector j;
      j.id = static_cast<int>(car.sectors_.size());
      j.junction_row = p.row;
      car.sectors_.push_back(j);
      add_arc(p.row, j.id, sec(p.left[0]), sec(p.left[1]), 1);
      add_arc(p.row, j.id, sec(p.right[0]), sec(p.right[1]), 0);
    }
  }

  const Skeleton sk = compute_skeleton(tri);
  std::map<std::pair<int, int>, int> node_ids;
  std::vector<std::array<std::pair<int, int>, 2>> ends(car.arcs_.size());
  for (auto& arc : car.arcs_) {
    const auto& row = car.sys_.rows[arc.row];
    int k = 0;
    for (int w = 0; w < 4; ++w) {
      if (w == row.face || w == row.corner) continue;
      const int e = edge_index(row.corner, w);
      const auto [lo, hi] = kEdgeVertices[e];
      const int start = sk.edge_sign[row.tet][e] > 0 ? lo : hi;
      ends[arc.id][k++] = {sk.edge_of[row.tet][e], row.corner == start ? 0 : 1};
    }
    for (const auto& n : ends[arc.id]) node_ids.emplace(n, 0);
  }
  for (auto& [key, id] : node_ids) {
    id = static_cast<int>(car.nodes_.size());
    car.nodes_.push_back({key.first, key.second});
  }
  for (auto& arc : car.arcs_)
    for (int k = 0; k < 2; ++k) arc.nodes[k] = node_ids[ends[arc.id][k]];

  // Pair arc ends at each node in (arc, end) order and follow the trails.
  std::vector<std::vector<std::pair<int, int>>> at_node(car.nodes_.size());
  for (const auto& arc : car.arcs_)
    for (int k = 0; k < 2; ++k) at_node[arc.nodes[k]].push_back({arc.id, k});
  std::vector<std::array<std::pair<int, int>, 2>> partner(
      car.arcs_.size(), {std::pair{-1, -1}, std::pair{-1, -1}});
  for (auto& list : at_node) {
    std::sort(list.begin(), list.end());
    for (std::size_t i = 0; i + 1 < list.size(); i += 2) {
      partner[list[i].first][list[i].second] = list[i + 1];
      partner[list[i + 1].first][list[i + 1].second] = list[i];
    }
  }
  std::vector<char> seen(car.arcs_.size(), 0);
  for (int a0 = 0; a0 < static_cast<int>(car.arcs_.size()); ++a0) {
    if (seen[a0]) continue;
    seen[a0] = 1;
    Circuit c;
    std::vector<int> forward{a0};
    std::pair<int, int> exit{a0, 1};
    bool closed = false;
    while (true) {
      const auto next = partner[exit.first][exit.second];
      if (next.first < 0) break;
      if (next.first == a0 && next.second == 0) {
        closed = true;
        break;
      }
      seen[next.first] = 1;
      forward.push_back(next.first);
      exit = {next.first, 1 - next.second};
    }
    std::vector<int> backward;
    if (!closed) {
      std::pair<int, int> entry{a0, 0};
      while (true) {
        const auto prev = partner[entry.first][entry.second];
        if (prev.first < 0) break;
        seen[prev.first] = 1;
        backward.push_back(prev.first);
        entry = {prev.first, 1 - prev.second};
      }
    }
    c.arcs.assign(backward.rbegin(), backward.rend());
    c.arcs.insert(c.arcs.end(), forward.begin(), forward.end());
    c.closed = closed;
    car.circuits_.push_back(std::move(c));
  }
  return car;
}

BranchedCarrier build_carrier(const Triangulation& tri, const SupportFace& face) {
  if (!face.valid()) throw EmptySupport("support face is not admissible");
  return build_carrier(tri, face.columns());
}

std::vector<int> support_of(const SurfaceVector& v) {
  std::vector<int> out;
  for (int i = 0; i < v.size(); ++i)
    if (v[i] != 0) out.push_back(i);
  return out;
}

std::vector<std::int64_t> BranchedCarrier::sector_values(const SurfaceVector& v) const {
  std::vector<std::int64_t> out(sectors_.size(), 0);
  for (const auto& s : sectors_)
    if (!s.columns.empty()) out[s.id] = v[s.columns.front()];
  for (const auto& s : sectors_) {
    if (s.junction_row < 0) continue;
    const auto& row = sys_.rows[s.junction_row];
    for (int c : support_)
      if (row.coeffs[c] > 0) out[s.id] += v[c];
  }
  return out;
}

CarriedCone carried_cone(const BranchedCarrier& carrier) {
  CarriedCone cone;
  cone.columns = carrier.support();
  for (const auto& row : carrier.system().rows) {
    std::vector<int> r;
    bool nonzero = false;
    for (int c : cone.columns) {
      r.push_back(row.coeffs[c]);
      nonzero |= row.coeffs[c] != 0;
    }
    if (nonzero) cone.equations.push_back(std::move(r));
  }
  return cone;
}

bool carries(const BranchedCarrier& carrier, const SurfaceVector& v) {
  if (v.size() != carrier.system().num_columns())
    throw DimensionMismatch("vector dimension does not match the carrier");
  for (int i = 0; i < v.size(); ++i)
    if (v[i] != 0 && !carrier.supports(i)) return false;
  return is_admissible(v, carrier.system());
}

bool fully_carries(const BranchedCarrier& carrier, const SurfaceVector& v) {
  if (!carries(carrier, v)) return false;
  for (auto x : carrier.sector_values(v))
    if (x <= 0) return false;
  return true;
}

BranchedCarrier sub_branched(const BranchedCarrier& carrier, const SurfaceVector& v) {
  if (!carries(carrier, v)) throw NotCarried("vector is not carried by the branched surface");
  return build_carrier(carrier.triangulation(), support_of(v));
}

std::vector<Circuit> vertical_boundary_components(const BranchedCarrier& carrier) {
  return carrier.circuits();
}

std::string to_string(DiskDirection d) {
  return d == DiskDirection::inward ? "inward" : "outward";
}

std::string to_string(DiskStatus s) {
  switch (s) {
    case DiskStatus::found: return "found";
    case DiskStatus::not_found: return "not_found";
    case DiskStatus::inconclusive: return "inconclusive";
  }
  return "unknown";
}

std::vector<std::int64_t> circuit_deficits(const BranchedCarrier& carrier, int component,
                                           DiskDirection direction) {
  const auto& circuits = carrier.circuits();
  if (component < 0 || component >= static_cast<int>(circuits.size()))
    throw UnknownComponent("vertical boundary component " + std::to_string(component) +
                           " does not exist");
  std::vector<std::int64_t> out(carrier.system().rows.size(), 0);
  for (int a : circuits[component].arcs) {
    const auto& arc = carrier.branch_arcs()[a];
    // The extra arc lies on the side the branch direction points toward for
    // inward disks, and on the far side for outward ones.
    std::int64_t d = arc.toward == 0 ? 1 : -1;
    if (direction == DiskDirection::outward) d = -d;
    out[arc.row] += d;
  }
  return out;
}

namespace {

struct AffineSystem {
  bool consistent = true;
  std::vector<int> free;  // positions into columns
  // dependent position -> (constant, coefficients over free)
  std::vector<std::pair<int, std::pair<Rational, std::vector<Rational>>>> dependent;
};

AffineSystem solve_affine(const std::vector<std::vector<Rational>>& a,
                          const std::vector<Rational>& b, int n) {
  std::vector<std::vector<Rational>> m;
  for (std::size_t r = 0; r < a.size(); ++r) {
    auto row = a[r];
    row.push_back(b[r]);
    m.push_back(std::move(row));
  }
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < n && r < static_cast<int>(m.size()); ++c) {
    int p = -1;
    for (int i = r; i < static_cast<int>(m.size()); ++i)
      if (m[i][c] != 0) {
        p = i;
        break;
      }
    if (p < 0) continue;
    std::swap(m[r], m[p]);
    const Rational inv = 1 / m[r][c];
    for (auto& x : m[r]) x *= inv;
    for (int i = 0; i < static_cast<int>(m.size()); ++i) {
      if (i == r || m[i][c] == 0) continue;
      const Rational f = m[i][c];
      for (int j = 0; j <= n; ++j) m[i][j] -= f * m[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  AffineSystem out;
  for (int i = r; i < static_cast<int>(m.size()); ++i)
    if (m[i][n] != 0) out.consistent = false;
  std::vector<char> is_pivot(n, 0);
  for (int c : pivots) is_pivot[c] = 1;
  for (int c = 0; c < n; ++c)
    if (!is_pivot[c]) out.free.push_back(c);
  for (int i = 0; i < r; ++i) {
    std::vector<Rational> coef;
    for (int f : out.free) coef.push_back(-m[i][f]);
    out.dependent.push_back({pivots[i], {m[i][n], std::move(coef)}});
  }
  return out;
}

bool is_disk(const Triangulation& tri, const SurfaceVector& v, int boundary_arcs) {
  try {
    const CarriedSurface s = CarriedSurface::build(tri, v, true);
    if (s.num_components() != 1 || s.boundary_arc_count() != boundary_arcs) return false;
    const auto comps = classify_components(tri, s);
    return comps[0].boundary_components == 1 && comps[0].euler == 1 && comps[0].orientable;
  } catch (const NotAdmissible&) {
    return false;
  }
}

}  // namespace

DiskSearchResult disk_search(const BranchedCarrier& carrier, int component,
                             DiskDirection direction, std::int64_t max_weight, int workers) {
  DiskSearchResult res;
  res.direction = direction;
  res.component = component;
  res.bound = max_weight;
  if (carrier.circuits().empty()) {
    res.status = DiskStatus::not_found;
    res.reason = "no boundary circles";
    return res;
  }
  const auto deficit = circuit_deficits(carrier, component, direction);
  if (max_weight <= 0) {
    res.status = DiskStatus::inconclusive;
    res.bound = 0;
    return res;
  }
  const auto& cols = carrier.support();
  const int n = static_cast<int>(cols.size());
  const auto& sys = carrier.system();
  std::vector<std::vector<Rational>> a;
  std::vector<Rational> b;
  std::vector<BigVector> homog;
  for (std::size_t r = 0; r < sys.rows.size(); ++r) {
    std::vector<Rational> row;
    bool nonzero = deficit[r] != 0;
    for (int c : cols) {
      row.push_back(sys.rows[r].coeffs[c]);
      nonzero |= sys.rows[r].coeffs[c] != 0;
    }
    if (!nonzero) continue;
    BigVector h;
    for (int c : cols) h.push_back(sys.rows[r].coeffs[c]);
    h.push_back(-deficit[r]);
    homog.push_back(std::move(h));
    a.push_back(std::move(row));
    b.push_back(deficit[r]);
  }
  const AffineSystem aff = solve_affine(a, b, n);

  std::vector<std::optional<SurfaceVector>> best(aff.consistent ? max_weight + 1 : 0);
  const Triangulation& tri = carrier.triangulation();
  const int circuit_arcs = static_cast<int>(carrier.circuits()[component].arcs.size());
  auto consider = [&](const std::vector<std::int64_t>& free_vals, std::optional<SurfaceVector>& slot) {
    std::vector<std::int64_t> x(n, 0);
    std::int64_t w = 0;
    for (std::size_t i = 0; i < aff.free.size(); ++i) {
      x[aff.free[i]] = free_vals[i];
      w += free_vals[i];
    }
    for (const auto& [p, expr] : aff.dependent) {
      Rational val = expr.first;
      for (std::size_t i = 0; i < aff.free.size(); ++i) val += expr.second[i] * free_vals[i];
      if (denominator(val) != 1 || val < 0) return;
      x[p] = static_cast<std::int64_t>(numerator(val));
      w += x[p];
      if (w > max_weight) return;
    }
    if (w == 0) return;
    SurfaceVector v(tri.num_tets());
    for (int i = 0; i < n; ++i) v[cols[i]] = x[i];
    if (slot && !canonical_less(v, *slot)) return;
    if (is_disk(tri, v, circuit_arcs)) slot = v;
  };
  if (aff.consistent) {
    const int nf = static_cast<int>(aff.free.size());
    if (nf == 0) {
      consider({}, best[0]);
    } else {
      detail::parallel_for(best.size(), workers, [&](std::size_t first) {
        std::vector<std::int64_t> vals(nf, 0);
        vals[0] = static_cast<std::int64_t>(first);
        // Odometer over the remaining free variables with total <= bound.
        std::function<void(int, std::int64_t)> rec = [&](int i, std::int64_t left) {
          if (i == nf) {
            consider(vals, best[first]);
            return;
          }
          for (std::int64_t v = 0; v <= left; ++v) {
            vals[i] = v;
            rec(i + 1, left - v);
          }
          vals[i] = 0;
        };
        rec(1, max_weight - vals[0]);
      });
    }
  }
  for (auto& slot : best)
    if (slot && (!res.disk || canonical_less(*slot, *res.disk))) res.disk = slot;
  if (res.disk) {
    res.status = DiskStatus::found;
    return res;
  }

  // Nothing within the bound: decide whether anything lies beyond it.
  const auto rays = extreme_rays(homog, n + 1, 1000000);
  Rational max_vertex = -1;
  bool recession = false;
  for (const auto& r : rays) {
    if (r[n] == 0) {
      recession = true;
      continue;
    }
    BigInt total = 0;
    for (int i = 0; i < n; ++i) total += r[i];
    max_vertex = std::max(max_vertex, Rational(total, r[n]));
  }
  if (max_vertex < 0) {
    res.status = DiskStatus::not_found;
    res.reason = "empty polytope";
  } else if (!recession && max_vertex <= max_weight) {
    res.status = DiskStatus::not_found;
    res.reason = "bounded polytope";
  } else {
    res.status = DiskStatus::inconclusive;
  }
  return res;
}

bool verify_disk(const BranchedCarrier& carrier, int component, DiskDirection direction,
                 const SurfaceVector& v, std::int64_t max_weight, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  const auto& circuits = carrier.circuits();
  if (component < 0 || component >= static_cast<int>(circuits.size()))
    return fail("no such component");
  const auto& sys = carrier.system();
  if (v.size() != sys.num_columns()) return fail("dimension mismatch");
  if (weight(v) > max_weight) return fail("weight exceeds bound");
  for (int i = 0; i < v.size(); ++i)
    if (v[i] != 0 && !carrier.supports(i)) return fail("support escapes the carrier");
  std::map<int, std::int64_t> want;
  for (int a : circuits[component].arcs) {
    const auto& arc = carrier.branch_arcs()[a];
    const bool source_side = arc.toward == 0;
    const bool extra_on_source = (direction == DiskDirection::inward) == source_side;
    want[arc.row] += extra_on_source ? 1 : -1;
  }
  for (int r = 0; r < static_cast<int>(sys.rows.size()); ++r) {
    const auto it = want.find(r);
    const std::int64_t expect = it == want.end() ? 0 : it->second;
    if (sys.evaluate(r, v) != expect)
      return fail("matching row " + std::to_string(r) + " has the wrong deficit");
  }
  const CarriedSurface s = CarriedSurface::build(carrier.triangulation(), v, true);
  if (s.num_components() != 1) return fail("not connected");
  const auto comps = classify_components(carrier.triangulation(), s);
  if (comps[0].euler != 1) return fail("Euler characteristic is not 1");
  if (comps[0].boundary_components != 1) return fail("boundary is not one circle");
  if (s.boundary_arc_count() != static_cast<int>(circuits[component].arcs.size()))
    return fail("boundary does not run once along the circuit");
  return true;
}

bool carries_sphere(const BranchedCarrier& carrier, const EnumerationLimits& limits) {
  const auto basis = hilbert_basis_on(carrier.system(), carrier.support(), limits);
  for (const auto& m : basis) {
    if (m.octagon_total() > 1) continue;
    const CarriedSurface s = reconstruct(carrier.triangulation(), m);
    for (const auto& c : classify_components(carrier.triangulation(), s))
      if (c.kind == SurfaceKind::sphere) return true;
  }
  return false;
}

}  // namespace normsurf
