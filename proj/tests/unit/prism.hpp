#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <vector>

#include "normsurf/triangulation.hpp"

namespace prism {

// Triangulated S^2 x I over the boundary of a tetrahedron, with the top
// glued to the bottom by the vertex map sigma. An odd sigma gives the
// nonorientable bundle.
inline normsurf::Triangulation bundle(const std::array<int, 4>& sigma) {
  using Label = std::pair<int, int>;  // (sphere vertex, level)
  std::vector<std::array<Label, 4>> tets;
  for (int skip = 0; skip < 4; ++skip) {
    std::array<int, 3> t{};
    int k = 0;
    for (int v = 0; v < 4; ++v)
      if (v != skip) t[k++] = v;
    const auto [a, b, c] = t;
    tets.push_back({Label{a, 0}, {b, 0}, {c, 0}, {c, 1}});
    tets.push_back({Label{a, 0}, {b, 0}, {b, 1}, {c, 1}});
    tets.push_back({Label{a, 0}, {a, 1}, {b, 1}, {c, 1}});
  }
  auto ident = [&](Label l) { return l.second == 1 ? Label{sigma[l.first], 0} : l; };
  // Faces keyed by their identified vertex set; top faces map through sigma.
  std::map<std::set<Label>, std::vector<std::pair<int, int>>> faces;
  for (int t = 0; t < static_cast<int>(tets.size()); ++t)
    for (int f = 0; f < 4; ++f) {
      std::set<Label> key;
      bool top = true;
      for (int i = 0; i < 4; ++i)
        if (i != f) top = top && tets[t][i].second == 1;
      for (int i = 0; i < 4; ++i)
        if (i != f) key.insert(top ? ident(tets[t][i]) : tets[t][i]);
      faces[key].push_back({t, f});
    }
  std::vector<normsurf::Gluing> gl;
  for (const auto& [key, side] : faces) {
    const auto [t, f] = side.at(0);
    const auto [u, g] = side.at(1);
    auto image = [&](int tt, int ff, int i) {
      bool top = true;
      for (int j = 0; j < 4; ++j)
        if (j != ff) top = top && tets[tt][j].second == 1;
      return top ? ident(tets[tt][i]) : tets[tt][i];
    };
    normsurf::Perm p{};
    p[f] = g;
    for (int i = 0; i < 4; ++i) {
      if (i == f) continue;
      for (int j = 0; j < 4; ++j)
        if (j != g && image(u, g, j) == image(t, f, i)) p[i] = j;
    }
    gl.push_back({t, f, u, g, p});
  }
  return normsurf::Triangulation::from_gluings(static_cast<int>(tets.size()), gl);
}

}  // namespace prism
