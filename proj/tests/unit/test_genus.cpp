#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "normsurf/errors.hpp"
#include "normsurf/genus.hpp"
#include "oracles.hpp"

using namespace normsurf;

TEST_CASE("split fundamentals") {
  const auto tri = fixtures::load("two_tet.json");
  auto fund = fixtures::fundamentals(tri);
  const auto [tori, rest] = split_fundamentals(fund);
  CHECK(tori == std::vector<int>{4, 5});
  CHECK(tori.size() + rest.size() == fund.members.size());
  for (int i : rest)
    if (fund.members[i].octagon_total() > 0) CHECK(std::count(tori.begin(), tori.end(), i) == 0);
  FundamentalSet raw = fund;
  raw.classified = false;
  CHECK_THROWS_AS((void)split_fundamentals(raw), std::logic_error);
}

TEST_CASE("balanced sequences") {
  CHECK(balanced_reduce(BalancedSequence::parse("")) == 0);
  CHECK(balanced_reduce(BalancedSequence::parse("+-+-")) == 1);
  CHECK(balanced_reduce(BalancedSequence::parse("++--")) == 2);
  CHECK(balanced_reduce(BalancedSequence::parse("+++---")) == 3);
  CHECK_THROWS_AS((void)balanced_reduce(BalancedSequence::parse("++-")), NotBalanced);
  CHECK_THROWS_AS((void)BalancedSequence::parse("+x-"), ParseError);
  CHECK(BalancedSequence::parse("+-").str() == "+-");
  CHECK(BalancedSequence::parse("+-").balanced());
  CHECK_FALSE(BalancedSequence::parse("+").balanced());
}

TEST_CASE("balanced reduction matches the cut-and-paste model") {
  for (const char* s : {"+-", "+-+-", "++--", "+-++--", "++-+--", "+++---", "-++-", "--++"}) {
    CAPTURE(s);
    bool consistent = true;
    const int want = oracle::minimal_copies(s, &consistent);
    CHECK(consistent);
    CHECK(balanced_reduce(BalancedSequence::parse(s)) == want);
  }
}

TEST_CASE("candidate stream") {
  const auto tri = fixtures::load("one_tet.json");
  const auto fund = fixtures::fundamentals(tri);
  const auto sys = matching_system(tri);
  auto stream = candidate_stream(tri, fund, 1, 2);
  CHECK(stream.bounds().size() == fund.members.size());
  int n = 0;
  std::set<std::vector<std::int64_t>> seen;
  while (auto d = stream.next()) {
    ++n;
    const auto v = d->resum(fund);
    CHECK_FALSE(v.is_zero());
    CHECK(is_admissible(v, sys));
    CHECK(d->euler % 2 == 0);
    CHECK(d->euler <= 2);
    CHECK(d->euler >= 0);
    CHECK(d->euler == euler_functional(tri).evaluate(v));
    CHECK(d->genus == (2 - d->euler) / 2);
    std::vector<std::int64_t> c(fund.members.size(), 0);
    for (const auto& t : d->base_terms) c[t.member] += t.coefficient;
    for (const auto& t : d->torus_terms) c[t.member] += t.coefficient;
    CHECK(seen.insert(c).second);
  }
  CHECK(n > 0);
}

TEST_CASE("trivial curves and twist caps") {
  const auto tri = fixtures::load("two_tet.json");
  const auto fund = fixtures::fundamentals(tri);
  const auto vl = vertex_link(tri);
  const auto& t4 = fund.members[4];
  const auto count = trivial_curve_bound(tri, t4, vl);
  CHECK(count.k == 0);
  CHECK(count.curves == 0);
  CHECK(twist_cap(tri, t4, vl, 0) == 1);
  CHECK(twist_cap(tri, t4, vl, 3) == 6);
}

TEST_CASE("twist normalization") {
  const auto tri = fixtures::load("two_tet.json");
  const auto fund = fixtures::fundamentals(tri);
  const auto vl = vertex_link(tri);
  const int vl_index =
      static_cast<int>(std::find(fund.members.begin(), fund.members.end(), vl) - fund.members.begin());
  Decomposition d;
  d.base = vl;
  d.base_terms = {{1, vl_index}};
  d.euler = 2;
  d.genus = 0;
  const auto cap = twist_cap(tri, fund.members[4], vl, 0);
  d.torus_terms = {{cap + 5, 4}};
  const auto out = twist_normalize(tri, fund, d, {4});
  REQUIRE(out.audit.size() == 1);
  CHECK(out.audit[0].twists == 5);
  CHECK(out.audit[0].to == cap);
  CHECK(out.torus_terms[0].coefficient == cap);
  CHECK(twist_normalize(tri, fund, out, {4}).audit.size() == 1);

  Decomposition below = d;
  below.torus_terms = {{cap, 4}};
  CHECK(twist_normalize(tri, fund, below, {4}).audit.empty());

  Decomposition both = d;
  both.torus_terms = {{1, 4}, {1, 5}};
  CHECK_THROWS_AS((void)twist_normalize(tri, fund, both, {4}), NotIsolated);
  CHECK_NOTHROW((void)twist_normalize(tri, fund, both, {}));
}

TEST_CASE("regular set check") {
  const auto tri = fixtures::load("two_tet.json");
  const auto fund = fixtures::fundamentals(tri);
  const auto single = regular_set_check(tri, {fund.members[4]});
  CHECK(single.verdict == RegularVerdict::regular_modulo_meridian);
  CHECK(single.triple_points == 0);
  CHECK_FALSE(single.engulfing_verified);

  const auto tri4 = fixtures::load("four_tet_tori.json");
  const auto f4 = fixtures::fundamentals(tri4);
  std::vector<SurfaceVector> three;
  for (int i : f4.tori) three.push_back(f4.members[i]);
  const auto rep = regular_set_check(tri4, three);
  CHECK(rep.triple_points > 0);
  CHECK(rep.verdict == RegularVerdict::not_regular);
  CHECK(rep.conservative);
  CHECK(rep.pairs.size() == 3);
  std::reverse(three.begin(), three.end());
  const auto rev = regular_set_check(tri4, three);
  CHECK(rev.triple_points == rep.triple_points);
  CHECK(rev.verdict == rep.verdict);
  CHECK(to_string(RegularVerdict::not_regular) == "not_regular");
}
