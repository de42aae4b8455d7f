#include "doctest.h"
#include "fixtures.hpp"
#include "normsurf/errors.hpp"
#include "normsurf/surface_topology.hpp"
#include "oracles.hpp"

using namespace normsurf;

TEST_CASE("zero vector reconstructs to nothing") {
  const auto tri = fixtures::load("two_tet.json");
  const auto s = reconstruct(tri, SurfaceVector(2));
  CHECK(s.pieces().empty());
  CHECK(s.num_components() == 0);
  CHECK(euler_cellular(tri, SurfaceVector(2)) == 0);
}

TEST_CASE("vertex link is a sphere of 4T triangles") {
  for (const char* name : {"one_tet.json", "two_tet.json", "three_tet.json"}) {
    CAPTURE(name);
    const auto tri = fixtures::load(name);
    const auto vl = vertex_link(tri);
    const auto s = reconstruct(tri, vl);
    CHECK(s.pieces().size() == static_cast<std::size_t>(4 * tri.num_tets()));
    CHECK(s.num_components() == 1);
    CHECK(s.boundary_arc_count() == 0);
    const auto comps = classify_components(tri, s);
    REQUIRE(comps.size() == 1);
    CHECK(comps[0].kind == SurfaceKind::sphere);
    CHECK(comps[0].is_vertex_linking);
    CHECK(comps[0].euler == 2);
    CHECK(euler_functional(tri).evaluate(vl) == 2);
  }
}

TEST_CASE("parallel tori stay separate components") {
  const auto tri = fixtures::load("two_tet.json");
  const auto fund = fixtures::fundamentals(tri);
  REQUIRE_FALSE(fund.tori.empty());
  const auto& t = fund.members[fund.tori[0]];
  const auto s = reconstruct(tri, t.scaled(2));
  CHECK(s.num_components() == 2);
  for (const auto& c : classify_components(tri, s)) {
    CHECK(c.kind == SurfaceKind::torus);
    CHECK(c.coords == t);
  }
}

TEST_CASE("euler characteristic three ways") {
  for (const char* name : {"one_tet.json", "one_tet_klein.json", "two_tet.json",
                           "two_tet_reducible.json", "three_tet.json", "four_tet_tori.json"}) {
    CAPTURE(name);
    const auto tri = fixtures::load(name);
    const auto fund = fixtures::fundamentals(tri);
    const auto chi = euler_functional(tri);
    CHECK(chi.twice_coeffs.size() == static_cast<std::size_t>(10 * tri.num_tets()));
    for (const auto& m : fund.members) {
      const auto e = chi.evaluate(m);
      CHECK(e == euler_cellular(tri, m));
      CHECK(e == oracle::euler_by_counting(tri, oracle::to_vec(m)));
      std::int64_t sum = 0;
      for (const auto& c : classify_components(tri, reconstruct(tri, m))) sum += c.euler;
      CHECK(sum == e);
    }
  }
}

TEST_CASE("component kinds are consistent with euler and orientability") {
  for (const char* name : {"one_tet.json", "one_tet_klein.json", "two_tet_reducible.json"}) {
    CAPTURE(name);
    const auto tri = fixtures::load(name);
    for (const auto& m : fixtures::fundamentals(tri).members) {
      for (const auto& c : classify_components(tri, reconstruct(tri, m))) {
        if (c.orientable) {
          CHECK(c.euler == 2 - 2 * c.genus);
          if (c.euler == 2) CHECK(c.kind == SurfaceKind::sphere);
          if (c.euler == 0) CHECK(c.kind == SurfaceKind::torus);
        } else {
          CHECK(c.euler == 2 - c.genus);
          if (c.euler == 1) CHECK(c.kind == SurfaceKind::projective_plane);
        }
      }
    }
  }
}

TEST_CASE("classification of fundamentals") {
  const auto tri = fixtures::load("one_tet.json");
  const auto fund = fixtures::fundamentals(tri);
  CHECK(fund.tori == std::vector<int>{1});
  CHECK(fund.other == std::vector<int>{0, 2});
  const auto klein = fixtures::load("one_tet_klein.json");
  const auto kf = fixtures::fundamentals(klein);
  CHECK(kf.non_tori == std::vector<int>{0, 1});
}

TEST_CASE("boundary reconstruction") {
  const auto tri = fixtures::load("one_tet.json");
  auto v = SurfaceVector::from_coords({1, 0, 0, 0, 0, 0, 0, 0, 0, 0});
  CHECK_THROWS_AS((void)CarriedSurface::build(tri, v), NotAdmissible);
  const auto s = CarriedSurface::build(tri, v, true);
  CHECK(s.boundary_arc_count() > 0);
  const auto comps = classify_components(tri, s);
  REQUIRE(comps.size() == 1);
  CHECK(comps[0].kind == SurfaceKind::disk);
}

TEST_CASE("torus curve classes") {
  const auto tri = fixtures::load("two_tet.json");
  const auto fund = fixtures::fundamentals(tri);
  const auto& t = fund.members[fund.tori[0]];
  const auto s = reconstruct(tri, t);
  const ComponentHomology h(s, 0);
  CHECK(h.rank() == 2);
  CHECK(h.orientable());
  REQUIRE(h.basis_walks().size() == 2);
  CHECK(h.classify(h.basis_walks()[0]) == std::vector<std::int64_t>{1, 0});
  CHECK(h.classify(h.basis_walks()[1]) == std::vector<std::int64_t>{0, 1});
  const auto cls = curve_class(tri, s, 0, h.basis_walks()[0]);
  CHECK(cls.essential);
  CHECK(cls.meridian == "unknown");
  for (int p = 0; p < s.num_points(); ++p) {
    const auto walk = h.vertex_link_walk(s.vertex_of_point(p));
    CHECK(h.classify(walk) == std::vector<std::int64_t>{0, 0});
  }
  const auto vl = vertex_link(tri);
  const auto sphere = reconstruct(tri, vl);
  CHECK_THROWS_AS((void)curve_class(tri, sphere, 0, {}), NotATorus);
  CHECK_THROWS_AS((void)curve_class(tri, s, 3, {}), UnknownComponent);
}

TEST_CASE("intersection complexity") {
  const auto tri = fixtures::load("two_tet.json");
  const auto fund = fixtures::fundamentals(tri);
  const auto& a = fund.members[fund.tori[0]];
  const auto& b = fund.members[fund.tori[1]];
  const auto ab = intersection_complexity(tri, {a, b});
  const auto ba = intersection_complexity(tri, {b, a});
  CHECK(ab.complexity() == ba.complexity());
  CHECK(ab.double_curves == ba.double_curves);
  CHECK(ab.reduced_double_curves == 2);
  const auto self = intersection_complexity(tri, {a, a});
  CHECK(self.complexity() == std::pair<std::int64_t, std::int64_t>{0, 0});
  CHECK_THROWS_AS((void)intersection_complexity(tri, {a, a, a, a}), Unsupported);
  CHECK_THROWS_AS((void)intersection_complexity(tri, {a}), Unsupported);
  CHECK(conservative_triple_points({a, b}) == 0);
}

TEST_CASE("triple points on the four-tet fixture") {
  const auto tri = fixtures::load("four_tet_tori.json");
  const auto fund = fixtures::fundamentals(tri);
  REQUIRE(fund.tori.size() == 3);
  std::vector<SurfaceVector> three;
  for (int i : fund.tori) three.push_back(fund.members[i]);
  const auto rep = intersection_complexity(tri, three);
  CHECK(rep.triple_points > 0);
  CHECK(rep.triple_points == conservative_triple_points(three));
  std::reverse(three.begin(), three.end());
  CHECK(intersection_complexity(tri, three).complexity() == rep.complexity());
}
