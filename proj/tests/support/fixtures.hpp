#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "normsurf/hilbert.hpp"
#include "normsurf/surface_topology.hpp"
#include "normsurf/triangulation.hpp"

#ifndef NORMSURF_FIXTURES_DIR
#error "NORMSURF_FIXTURES_DIR must be defined"
#endif

namespace fixtures {

inline std::string path(const std::string& name) {
  return std::string(NORMSURF_FIXTURES_DIR) + "/" + name;
}

inline std::string read(const std::string& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + file);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline normsurf::Triangulation load(const std::string& name) {
  return normsurf::parse_triangulation(read(path(name)));
}

inline normsurf::FundamentalSet fundamentals(const normsurf::Triangulation& tri) {
  auto fund = normsurf::enumerate_fundamental(tri, normsurf::matching_system(tri));
  normsurf::classify_fundamental(tri, fund);
  return fund;
}

}  // namespace fixtures
