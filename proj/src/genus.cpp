#include "normsurf/genus.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

#include "normsurf/errors.hpp"

namespace normsurf {

std::pair<std::vector<int>, std::vector<int>> split_fundamentals(const FundamentalSet& fund) {
  if (!fund.classified) throw std::logic_error("fundamental set is not classified");
  std::vector<int> tori, rest;
  std::vector<char> torus(fund.members.size(), 0);
  for (int i : fund.tori)
    if (fund.members[i].octagon_total() == 0) torus[i] = 1;
  for (int i = 0; i < static_cast<int>(fund.members.size()); ++i)
    (torus[i] ? tori : rest).push_back(i);
  return {tori, rest};
}

SurfaceVector Decomposition::resum(const FundamentalSet& fund) const {
  SurfaceVector out = base;
  for (const auto& t : torus_terms) out = out + fund.members[t.member].scaled(t.coefficient);
  return out;
}

CandidateStream::CandidateStream(const Triangulation& tri, const FundamentalSet& fund,
                                 std::int64_t genus_bound, std::int64_t coeff_bound)
    : fund_(&fund), sys_(matching_system(tri)), genus_bound_(genus_bound) {
  const auto functional = euler_functional(tri);
  const auto [tori, rest] = split_fundamentals(fund);
  const int n = static_cast<int>(fund.members.size());
  is_torus_.assign(n, 0);
  for (int i : tori) is_torus_[i] = 1;
  for (int i = 0; i < n; ++i) {
    const std::int64_t chi = functional.evaluate(fund.members[i]);
    euler_.push_back(chi);
    if (!is_torus_[i] && chi < 0)
      bounds_.push_back(std::max<std::int64_t>(0, (2 * genus_bound - 2) / -chi));
    else
      bounds_.push_back(std::max<std::int64_t>(0, coeff_bound));
  }
  coeffs_.assign(n, 0);
  if (n == 0 || genus_bound < 0) done_ = true;
}

int CandidateStream::dead_prefix() const {
  const int n = static_cast<int>(coeffs_.size());
  std::vector<std::int64_t> gain(n + 1, 0);
  for (int i = n - 1; i >= 0; --i) gain[i] = gain[i + 1] + bounds_[i] * std::max<std::int64_t>(0, euler_[i]);
  const int num_tets = sys_.num_tets;
  std::vector<int> middle(num_tets, -1);
  int oct = 0;
  std::int64_t chi = 0;
  for (int i = 0; i < n; ++i) {
    if (coeffs_[i] == 0) continue;
    const auto& m = fund_->members[i];
    for (int t = 0; t < num_tets; ++t)
      for (int off : m.middle_types(t)) {
        if (middle[t] >= 0 && middle[t] != off) return i;
        middle[t] = off;
      }
    oct += static_cast<int>(m.octagon_total() * coeffs_[i]);
    if (oct > 1) return i;
    chi += coeffs_[i] * euler_[i];
    if (chi + gain[i + 1] < 2 - 2 * genus_bound_) return i;
  }
  return -1;
}

bool CandidateStream::advance(int from) {
  for (int i = from; i >= 0; --i) {
    if (coeffs_[i] < bounds_[i]) {
      ++coeffs_[i];
      std::fill(coeffs_.begin() + i + 1, coeffs_.end(), 0);
      return true;
    }
  }
  return false;
}

std::optional<Decomposition> CandidateStream::next() {
  const int n = static_cast<int>(coeffs_.size());
  while (!done_) {
    if (!started_) {
      started_ = true;
    } else if (!advance(n - 1)) {
      done_ = true;
      break;
    }
    // Skip every tuple sharing a prefix that cannot be completed.
    for (int dead = dead_prefix(); dead >= 0; dead = dead_prefix()) {
      if (!advance(dead)) {
        done_ = true;
        return std::nullopt;
      }
    }
    if (std::all_of(coeffs_.begin(), coeffs_.end(), [](std::int64_t c) { return c == 0; }))
      continue;
    std::int64_t chi = 0;
    for (int i = 0; i < n; ++i) chi += coeffs_[i] * euler_[i];
    if (chi % 2 != 0 || chi > 2 || chi < 2 - 2 * genus_bound_) continue;
    Decomposition d;
    d.base = SurfaceVector(sys_.num_tets);
    for (int i = 0; i < n; ++i) {
      if (coeffs_[i] == 0) continue;
      if (is_torus_[i]) {
        d.torus_terms.push_back({coeffs_[i], i});
      } else {
        d.base_terms.push_back({coeffs_[i], i});
        d.base = d.base + fund_->members[i].scaled(coeffs_[i]);
      }
    }
    if (!is_admissible(d.resum(*fund_), sys_)) continue;
    d.euler = chi;
    d.genus = (2 - chi) / 2;
    return d;
  }
  return std::nullopt;
}

CandidateStream candidate_stream(const Triangulation& tri, const FundamentalSet& fund,
                                 std::int64_t genus_bound, std::int64_t coeff_bound) {
  return CandidateStream(tri, fund, genus_bound, coeff_bound);
}

BalancedSequence BalancedSequence::parse(const std::string& text) {
  BalancedSequence s;
  for (char c : text) {
    if (c == '+') s.signs.push_back(1);
    else if (c == '-') s.signs.push_back(-1);
    else throw ParseError(std::string("sign sequence may only contain '+' and '-', got '") + c + "'");
  }
  return s;
}

std::string BalancedSequence::str() const {
  std::string out;
  for (int s : signs) out += s > 0 ? '+' : '-';
  return out;
}

bool BalancedSequence::balanced() const {
  return std::accumulate(signs.begin(), signs.end(), 0) == 0;
}

std::int64_t balanced_reduce(const BalancedSequence& seq) {
  for (int s : seq.signs)
    if (s != 1 && s != -1) throw NotBalanced("signs must be +1 or -1");
  if (!seq.balanced()) throw NotBalanced("sequence has " + std::to_string(seq.signs.size()) +
                                         " signs with unequal positive and negative counts");
  std::vector<int> pts = seq.signs;
  std::int64_t rounds = 0;
  while (!pts.empty()) {
    const std::size_t n = pts.size();
    std::vector<char> drop(n, 0);
    for (std::size_t i = 0; i < n; ++i)
      if (pts[i] > 0 && pts[(i + 1) % n] < 0) drop[i] = drop[(i + 1) % n] = 1;
    std::vector<int> rest;
    for (std::size_t i = 0; i < n; ++i)
      if (!drop[i]) rest.push_back(pts[i]);
    pts = std::move(rest);
    ++rounds;
  }
  return rounds;
}

TrivialCurveCount trivial_curve_bound(const Triangulation& tri, const SurfaceVector& f,
                                      const SurfaceVector& lambda) {
  TrivialCurveCount out;
  if (f.is_zero() || lambda.is_zero()) return out;
  const auto rep = intersection_complexity(tri, {f, lambda});
  const CarriedSurface s = reconstruct(tri, f);
  std::map<int, ComponentHomology> homology;
  for (const auto& c : rep.curves) {
    const bool f_is_a = c.surface_a == 0;
    const DualWalk& walk = f_is_a ? c.walk_a : c.walk_b;
    const int comp = f_is_a ? c.component_a : c.component_b;
    if (walk.empty()) throw OpenArcs("double curve does not cross any face of F");
    ++out.curves;
    out.double_arcs += static_cast<std::int64_t>(walk.size());
    auto it = homology.find(comp);
    if (it == homology.end()) it = homology.emplace(comp, ComponentHomology(s, comp)).first;
    const auto coords = it->second.coordinates(walk);
    if (std::all_of(coords.begin(), coords.end(), [](std::int64_t x) { return x == 0; })) {
      ++out.k;
      if (!it->second.orientable()) ++out.ambiguous;
    }
  }
  return out;
}

std::int64_t twist_cap(const Triangulation& tri, const SurfaceVector& torus,
                       const SurfaceVector& base, std::int64_t genus) {
  const auto t = trivial_curve_bound(tri, torus, base);
  return std::max<std::int64_t>(1, t.k + (t.double_arcs + 1) / 2 + 2 * genus);
}

Decomposition twist_normalize(const Triangulation& tri, const FundamentalSet& fund,
                              const Decomposition& decomp, const std::set<int>& isolated) {
  Decomposition out = decomp;
  for (const auto& term : decomp.torus_terms) {
    if (!isolated.count(term.member)) continue;
    for (const auto& other : decomp.torus_terms) {
      if (other.member == term.member) continue;
      const auto rep =
          intersection_complexity(tri, {fund.members[term.member], fund.members[other.member]});
      if (rep.reduced_double_curves != 0)
        throw NotIsolated("torus member " + std::to_string(term.member) + " meets torus member " +
                          std::to_string(other.member));
    }
  }
  for (auto& term : out.torus_terms) {
    if (!isolated.count(term.member)) continue;
    const std::int64_t cap = twist_cap(tri, fund.members[term.member], out.base, out.genus);
    if (term.coefficient <= cap) continue;
    AuditEvent ev;
    ev.member = term.member;
    ev.from = term.coefficient;
    ev.to = cap;
    ev.twists = term.coefficient - cap;
    ev.cap = cap;
    ev.note = "isotopic by a " + std::to_string(ev.twists) + "-fold Dehn twist along member " +
              std::to_string(term.member);
    out.audit.push_back(std::move(ev));
    term.coefficient = cap;
  }
  return out;
}

std::string to_string(RegularVerdict v) {
  switch (v) {
    case RegularVerdict::regular: return "regular";
    case RegularVerdict::not_regular: return "not_regular";
    case RegularVerdict::regular_modulo_meridian: return "regular_modulo_meridian";
  }
  return "unknown";
}

RegularSetReport regular_set_check(const Triangulation& tri, std::vector<SurfaceVector> tori) {
  canonical_sort(tori);
  RegularSetReport rep;
  const int n = static_cast<int>(tori.size());
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      const auto ir = intersection_complexity(tri, {tori[a], tori[b]});
      PairCurves pc{a, b, ir.curves};
      for (auto& c : pc.curves) {
        c.surface_a = c.surface_a == 0 ? a : b;
        c.surface_b = c.surface_b == 0 ? a : b;
      }
      rep.pairs.push_back(std::move(pc));
      for (int c = b + 1; c < n; ++c)
        rep.triple_points += intersection_complexity(tri, {tori[a], tori[b], tori[c]}).triple_points;
    }
  bool essential = true;
  for (const auto& p : rep.pairs)
    for (const auto& c : p.curves) {
      if (!c.class_a || !c.class_b || !c.class_a->essential || !c.class_b->essential)
        essential = false;
    }
  if (rep.triple_points > 0 || !essential) {
    rep.verdict = RegularVerdict::not_regular;
    rep.conservative = true;
  } else {
    rep.verdict = RegularVerdict::regular_modulo_meridian;
  }
  return rep;
}

}  // namespace normsurf
