#include "doctest.h"
#include "fixtures.hpp"
#include "normsurf/errors.hpp"
#include "normsurf/json_io.hpp"

using namespace normsurf;

TEST_CASE("vector round trip") {
  const auto tri = fixtures::load("two_tet.json");
  for (const auto& m : fixtures::fundamentals(tri).members) {
    const auto text = io::dump(io::vector_json(m));
    CHECK(io::parse_vector(text) == m);
  }
  const auto many = io::parse_vectors(R"([{"coords":[[1,1,1,1,0,0,0,0,0,0]]},
                                         {"coords":[[0,0,0,0,1,0,0,0,0,0]]}])");
  CHECK(many.size() == 2);
  CHECK(io::parse_vectors(R"({"coords":[[0,0,0,0,0,0,0,0,0,0]]})").size() == 1);
}

TEST_CASE("vector parse errors") {
  CHECK_THROWS_AS((void)io::parse_vector("nope"), ParseError);
  CHECK_THROWS_AS((void)io::parse_vector(R"({"rows":[]})"), ParseError);
  CHECK_THROWS_AS((void)io::parse_vector(R"({"coords":[[1,2,3]]})"), DimensionMismatch);
  CHECK_THROWS_AS((void)io::parse_vector(R"({"coords":[[0,0,0,0,0,0,0,0,0,"a"]]})"), ParseError);
  CHECK_THROWS_AS((void)io::parse_vector(R"({"coords":[[0,0,0,0,-1,0,0,0,0,0]]})"), NotAdmissible);
}

TEST_CASE("report serializers") {
  const auto tri = fixtures::load("one_tet.json");
  const auto sk = io::skeleton_json(compute_skeleton(tri));
  CHECK(sk["vertices"] == 1);
  CHECK(sk["tets"] == 1);
  CHECK(sk["euler_characteristic"] == 0);
  const auto fund = fixtures::fundamentals(tri);
  const auto fj = io::fundamental_json(fund);
  CHECK(fj["count"] == fund.members.size());
  CHECK(fj["tori"] == std::vector<int>{1});
  const auto mj = io::matching_json(matching_system(tri));
  CHECK(mj["rows"].size() == 6);
  CHECK(mj["columns"] == 10);
}
