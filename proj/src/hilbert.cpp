#include "normsurf/hilbert.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <map>
#include <queue>
#include <set>
#include <limits>
#include <mutex>
#include <thread>

#include <boost/dynamic_bitset.hpp>

#include "normsurf/detail/parallel.hpp"
#include "normsurf/errors.hpp"

namespace normsurf {

namespace mp = boost::multiprecision;

bool SupportFace::allows(int coord) const {
  const int t = coord / kCoordsPerTet;
  const int off = coord % kCoordsPerTet;
  return off < kQuadOffset || middle[t] == off;
}

std::vector<int> SupportFace::columns() const {
  std::vector<int> out;
  for (int t = 0; t < static_cast<int>(middle.size()); ++t) {
    for (int v = 0; v < 4; ++v) out.push_back(t * kCoordsPerTet + v);
    if (middle[t] >= 0) out.push_back(t * kCoordsPerTet + middle[t]);
  }
  return out;
}

bool SupportFace::valid() const {
  int octs = 0;
  for (int m : middle) {
    if (m != -1 && (m < kQuadOffset || m >= kCoordsPerTet)) return false;
    if (m >= kOctOffset) ++octs;
  }
  return octs <= 1;
}

std::vector<SupportFace> maximal_support_faces(int num_tets) {
  std::vector<SupportFace> out;
  // Quad-only faces, odometer order with tetrahedron 0 most significant.
  std::vector<int> choice(num_tets, 0);
  auto emit_quads = [&](int oct_tet, int oct_off) {
    std::vector<int> free;
    for (int t = 0; t < num_tets; ++t)
      if (t != oct_tet) free.push_back(t);
    std::fill(choice.begin(), choice.end(), 0);
    while (true) {
      SupportFace f;
      f.middle.assign(num_tets, -1);
      for (int t : free) f.middle[t] = kQuadOffset + choice[t];
      if (oct_tet >= 0) f.middle[oct_tet] = oct_off;
      out.push_back(std::move(f));
      int i = static_cast<int>(free.size()) - 1;
      while (i >= 0 && choice[free[i]] == 2) choice[free[i--]] = 0;
      if (i < 0) break;
      ++choice[free[i]];
    }
  };
  emit_quads(-1, -1);
  for (int t = 0; t < num_tets; ++t)
    for (int k = 0; k < 3; ++k) emit_quads(t, kOctOffset + k);
  return out;
}

bool canonical_less(const SurfaceVector& a, const SurfaceVector& b) {
  const auto wa = weight(a), wb = weight(b);
  if (wa != wb) return wa < wb;
  return a < b;
}

void canonical_sort(std::vector<SurfaceVector>& v) {
  std::sort(v.begin(), v.end(), canonical_less);
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

namespace {

BigInt dot(const BigVector& a, const BigVector& b) {
  BigInt s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0 && b[i] != 0) s += a[i] * b[i];
  return s;
}

void make_primitive(BigVector& v) {
  BigInt g = 0;
  for (const auto& x : v) {
    if (x != 0) g = g == 0 ? BigInt(abs(x)) : BigInt(mp::gcd(g, BigInt(abs(x))));
  }
  if (g > 1)
    for (auto& x : v) x /= g;
}

BigInt total(const BigVector& v) {
  BigInt s = 0;
  for (const auto& x : v) s += x;
  return s;
}

int sign_of(const BigInt& x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }

// Picks the unprocessed equation with the fewest positive/negative pairs.
std::size_t pick_equation(const std::vector<BigVector>& eqs, const std::vector<bool>& done,
                          const std::function<int(const BigVector&, std::size_t)>& count_sign,
                          std::size_t n_elems) {
  std::size_t best = eqs.size();
  std::size_t best_cost = 0;
  for (std::size_t e = 0; e < eqs.size(); ++e) {
    if (done[e]) continue;
    std::size_t pos = 0, neg = 0;
    for (std::size_t i = 0; i < n_elems; ++i) {
      const int s = count_sign(eqs[e], i);
      pos += s > 0;
      neg += s < 0;
    }
    const std::size_t cost = pos * neg;
    if (best == eqs.size() || cost < best_cost) {
      best = e;
      best_cost = cost;
    }
  }
  return best;
}

}  // namespace

std::vector<BigVector> extreme_rays(const std::vector<BigVector>& equations, int num_vars,
                                    std::size_t max_rays) {
  using Bits = boost::dynamic_bitset<>;
  struct Ray {
    BigVector x;
    Bits zero;
  };
  std::vector<Ray> rays;
  for (int i = 0; i < num_vars; ++i) {
    Ray r{BigVector(num_vars, 0), Bits(num_vars)};
    r.x[i] = 1;
    r.zero.set();
    r.zero.reset(i);
    rays.push_back(std::move(r));
  }

  std::vector<bool> done(equations.size(), false);
  for (std::size_t step = 0; step < equations.size(); ++step) {
    const std::size_t e = pick_equation(
        equations, done,
        [&](const BigVector& eq, std::size_t i) { return sign_of(dot(eq, rays[i].x)); },
        rays.size());
    done[e] = true;
    const auto& eq = equations[e];

    std::vector<BigInt> val(rays.size());
    std::vector<std::size_t> pos, neg;
    std::vector<Ray> next;
    for (std::size_t i = 0; i < rays.size(); ++i) {
      val[i] = dot(eq, rays[i].x);
      if (val[i] > 0)
        pos.push_back(i);
      else if (val[i] < 0)
        neg.push_back(i);
      else
        next.push_back(rays[i]);
    }
    for (std::size_t p : pos) {
      for (std::size_t n : neg) {
        const Bits common = rays[p].zero & rays[n].zero;
        bool adjacent = true;
        for (std::size_t r = 0; r < rays.size() && adjacent; ++r) {
          if (r == p || r == n) continue;
          if (common.is_subset_of(rays[r].zero)) adjacent = false;
        }
        if (!adjacent) continue;
        Ray c{BigVector(num_vars), Bits(num_vars)};
        const BigInt a = val[p];
        const BigInt b = -val[n];
        for (int i = 0; i < num_vars; ++i) {
          c.x[i] = a * rays[n].x[i] + b * rays[p].x[i];
          c.zero[i] = c.x[i] == 0;
        }
        make_primitive(c.x);
        next.push_back(std::move(c));
        if (next.size() > max_rays)
          throw ResourceLimit("double description exceeded " + std::to_string(max_rays) +
                              " intermediate rays");
      }
    }
    rays = std::move(next);
  }

  std::vector<BigVector> out;
  out.reserve(rays.size());
  for (auto& r : rays) out.push_back(std::move(r.x));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<BigVector> hilbert_basis(const std::vector<BigVector>& equations, int num_vars,
                                     std::size_t max_rays) {
  std::vector<BigVector> basis;
  for (int i = 0; i < num_vars; ++i) {
    BigVector u(num_vars, 0);
    u[i] = 1;
    basis.push_back(std::move(u));
  }

  struct Elem {
    BigVector x;
    BigInt val;
    BigInt size;
    bool dead = false;
  };

  std::vector<bool> done(equations.size(), false);
  for (std::size_t step = 0; step < equations.size(); ++step) {
    const std::size_t e = pick_equation(
        equations, done,
        [&](const BigVector& eq, std::size_t i) { return sign_of(dot(eq, basis[i])); },
        basis.size());
    done[e] = true;
    const auto& eq = equations[e];

    std::vector<Elem> elems;
    std::vector<std::size_t> active;
    std::vector<std::size_t> zeros;
    auto cmp = [&](std::size_t a, std::size_t b) {
      if (elems[a].size != elems[b].size) return elems[a].size > elems[b].size;
      return a > b;
    };
    std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(cmp)> passive(cmp);

    // w subsumes z when z - w stays in the monoid and its value keeps z's sign.
    auto subsumes = [](const Elem& w, const Elem& z) {
      const int sw = sign_of(w.val), sz = sign_of(z.val);
      if (sw != 0 && (sw != sz || abs(w.val) > abs(z.val))) return false;
      if (w.size > z.size) return false;
      for (std::size_t i = 0; i < z.x.size(); ++i)
        if (w.x[i] > z.x[i]) return false;
      return true;
    };
    auto is_subsumed = [&](std::size_t idx) {
      for (std::size_t j = 0; j < elems.size(); ++j) {
        if (j == idx || elems[j].dead) continue;
        if (subsumes(elems[j], elems[idx])) return true;
      }
      return false;
    };
    auto add_goal = [&](BigVector x) {
      Elem el{std::move(x), 0, 0};
      el.val = dot(eq, el.x);
      el.size = total(el.x);
      elems.push_back(std::move(el));
      const std::size_t idx = elems.size() - 1;
      if (is_subsumed(idx)) {
        elems[idx].dead = true;
        return;
      }
      if (elems.size() > max_rays)
        throw ResourceLimit("Hilbert basis completion exceeded " + std::to_string(max_rays) +
                            " generators");
      if (elems[idx].val == 0)
        zeros.push_back(idx);
      else
        passive.push(idx);
    };

    for (auto& b : basis) add_goal(b);
    while (!passive.empty()) {
      const std::size_t idx = passive.top();
      passive.pop();
      if (elems[idx].dead) continue;
      if (is_subsumed(idx)) {
        elems[idx].dead = true;
        continue;
      }
      const int s = sign_of(elems[idx].val);
      const std::size_t n_active = active.size();
      for (std::size_t a = 0; a < n_active; ++a) {
        const std::size_t j = active[a];
        if (elems[j].dead || sign_of(elems[j].val) == s) continue;
        BigVector sum(num_vars);
        for (int i = 0; i < num_vars; ++i) sum[i] = elems[idx].x[i] + elems[j].x[i];
        add_goal(std::move(sum));
      }
      active.push_back(idx);
    }

    std::vector<BigVector> next;
    for (std::size_t z : zeros)
      if (!elems[z].dead) next.push_back(elems[z].x);
    // Drop anything dominated by another zero-valued element.
    std::sort(next.begin(), next.end(),
              [](const BigVector& a, const BigVector& b) { return total(a) < total(b); });
    std::vector<BigVector> minimal;
    for (auto& z : next) {
      bool dominated = false;
      for (const auto& m : minimal) {
        bool le = true;
        for (int i = 0; i < num_vars && le; ++i) le = m[i] <= z[i];
        if (le) {
          dominated = true;
          break;
        }
      }
      if (!dominated) minimal.push_back(std::move(z));
    }
    basis = std::move(minimal);
  }
  std::sort(basis.begin(), basis.end());
  return basis;
}

std::vector<BigVector> restricted_equations(const MatchingSystem& sys,
                                            const std::vector<int>& columns) {
  std::vector<BigVector> kept;
  std::vector<std::pair<BigVector, int>> echelon;  // reduced row, pivot column
  for (const auto& row : sys.rows) {
    BigVector r(columns.size());
    bool nonzero = false;
    for (std::size_t c = 0; c < columns.size(); ++c) {
      r[c] = row.coeffs[columns[c]];
      nonzero |= r[c] != 0;
    }
    if (!nonzero) continue;
    BigVector red = r;
    for (const auto& [b, piv] : echelon) {
      if (red[piv] == 0) continue;
      const BigInt f = red[piv], g = b[piv];
      for (std::size_t c = 0; c < red.size(); ++c) red[c] = red[c] * g - b[c] * f;
      make_primitive(red);
    }
    int piv = -1;
    for (std::size_t c = 0; c < red.size(); ++c)
      if (red[c] != 0) {
        piv = static_cast<int>(c);
        break;
      }
    if (piv < 0) continue;
    echelon.emplace_back(std::move(red), piv);
    kept.push_back(std::move(r));
  }
  return kept;
}

namespace {

SurfaceVector lift(const BigVector& x, const std::vector<int>& columns, int num_tets) {
  SurfaceVector v(num_tets);
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (x[c] > std::numeric_limits<std::int64_t>::max())
      throw ResourceLimit("coordinate exceeds 64-bit range");
    v[columns[c]] = x[c].convert_to<std::int64_t>();
  }
  return v;
}

}  // namespace

std::vector<SurfaceVector> hilbert_basis_on(const MatchingSystem& sys,
                                            const std::vector<int>& columns,
                                            const EnumerationLimits& limits) {
  const auto eqs = restricted_equations(sys, columns);
  const auto hb = hilbert_basis(eqs, static_cast<int>(columns.size()), limits.max_rays);
  std::vector<SurfaceVector> out;
  for (const auto& x : hb) {
    auto v = lift(x, columns, sys.num_tets);
    if (weight(v) > limits.max_basis_weight)
      throw ResourceLimit("Hilbert basis member of weight " + std::to_string(weight(v)) +
                          " exceeds max basis weight " +
                          std::to_string(limits.max_basis_weight));
    out.push_back(std::move(v));
  }
  canonical_sort(out);
  return out;
}

std::vector<SurfaceVector> enumerate_vertex_solutions(const Triangulation& tri,
                                                      const MatchingSystem& sys,
                                                      const EnumerationLimits& limits) {
  const auto faces = maximal_support_faces(tri.num_tets());
  std::vector<std::vector<SurfaceVector>> per_face(faces.size());
  detail::parallel_for(faces.size(), limits.workers, [&](std::size_t i) {
    const auto cols = faces[i].columns();
    const auto rays =
        extreme_rays(restricted_equations(sys, cols), static_cast<int>(cols.size()),
                     limits.max_rays);
    for (const auto& r : rays) {
      auto v = lift(r, cols, tri.num_tets());
      if (v.octagon_total() <= 1) per_face[i].push_back(std::move(v));
    }
  });
  std::vector<SurfaceVector> out;
  for (auto& f : per_face)
    for (auto& v : f) out.push_back(std::move(v));
  canonical_sort(out);
  return out;
}

FundamentalSet enumerate_fundamental(const Triangulation& tri, const MatchingSystem& sys,
                                     const EnumerationLimits& limits) {
  const auto faces = maximal_support_faces(tri.num_tets());
  std::vector<std::vector<SurfaceVector>> per_face(faces.size());
  detail::parallel_for(faces.size(), limits.workers, [&](std::size_t i) {
    for (auto& v : hilbert_basis_on(sys, faces[i].columns(), limits))
      if (v.octagon_total() <= 1) per_face[i].push_back(std::move(v));
  });
  FundamentalSet fund;
  for (auto& f : per_face)
    for (auto& v : f) fund.members.push_back(std::move(v));
  canonical_sort(fund.members);
  return fund;
}

std::vector<DecompositionTerm> decompose(const SurfaceVector& v, const FundamentalSet& fund) {
  const int n = v.size();
  std::vector<int> usable;
  for (int i = 0; i < static_cast<int>(fund.members.size()); ++i) {
    const auto& m = fund.members[i];
    if (m.size() != n) throw DimensionMismatch("member dimension differs from vector");
    bool fits = !m.is_zero();
    for (int c = 0; c < n && fits; ++c) fits = m[c] <= v[c];
    if (fits) usable.push_back(i);
  }
  // covers[k][c]: some usable member at position >= k is positive at c.
  std::vector<std::vector<bool>> covers(usable.size() + 1, std::vector<bool>(n, false));
  for (int k = static_cast<int>(usable.size()) - 1; k >= 0; --k) {
    covers[k] = covers[k + 1];
    const auto& m = fund.members[usable[k]];
    for (int c = 0; c < n; ++c)
      if (m[c] > 0) covers[k][c] = true;
  }

  std::vector<std::int64_t> coeff(usable.size(), 0);
  SurfaceVector rem = v;
  std::function<bool(std::size_t)> search = [&](std::size_t k) -> bool {
    if (rem.is_zero()) return true;
    if (k == usable.size()) return false;
    for (int c = 0; c < n; ++c)
      if (rem[c] > 0 && !covers[k][c]) return false;
    const auto& m = fund.members[usable[k]];
    std::int64_t hi = std::numeric_limits<std::int64_t>::max();
    for (int c = 0; c < n; ++c)
      if (m[c] > 0) hi = std::min(hi, rem[c] / m[c]);
    for (std::int64_t c = hi; c >= 0; --c) {
      for (int i = 0; i < n; ++i) rem[i] -= c * m[i];
      coeff[k] = c;
      if (search(k + 1)) return true;
      for (int i = 0; i < n; ++i) rem[i] += c * m[i];
    }
    coeff[k] = 0;
    return false;
  };
  if (!search(0))
    throw NotDecomposable("vector does not decompose over the fundamental set");
  std::vector<DecompositionTerm> out;
  for (std::size_t k = 0; k < usable.size(); ++k)
    if (coeff[k] > 0) out.push_back({coeff[k], usable[k]});
  return out;
}

}  // namespace normsurf
