#include "normsurf/triangulation.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "normsurf/detail/union_find.hpp"
#include "normsurf/errors.hpp"

namespace normsurf {

using json = nlohmann::json;
using detail::UnionFind;

Perm inverse(const Perm& p) {
  Perm q{};
  for (int i = 0; i < 4; ++i) q[p[i]] = i;
  return q;
}

int parity(const Perm& p) {
  int inversions = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (p[i] > p[j]) ++inversions;
  return inversions % 2;
}

bool is_permutation(const Perm& p) {
  std::array<bool, 4> seen{};
  for (int v : p) {
    if (v < 0 || v > 3 || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

int edge_index(int a, int b) {
  if (a > b) std::swap(a, b);
  for (int k = 0; k < 6; ++k)
    if (kEdgeVertices[k][0] == a && kEdgeVertices[k][1] == b) return k;
  return -1;
}

namespace {

std::string face_name(int tet, int face) {
  return "tet " + std::to_string(tet) + " face " + std::to_string(face);
}

// Oriented edge (tet, a, b), a != b, packed into a dense index.
int oriented_edge_id(int tet, int a, int b) { return tet * 16 + a * 4 + b; }

struct EdgeClosure {
  UnionFind uf;
  explicit EdgeClosure(int num_tets) : uf(num_tets * 16) {}
};

EdgeClosure close_edges(int num_tets,
                        const std::vector<std::array<Triangulation::Adjacent, 4>>& adj) {
  EdgeClosure c(num_tets);
  for (int t = 0; t < num_tets; ++t) {
    for (int f = 0; f < 4; ++f) {
      const auto& a = adj[t][f];
      for (int x = 0; x < 4; ++x) {
        for (int y = 0; y < 4; ++y) {
          if (x == y || x == f || y == f) continue;
          c.uf.unite(oriented_edge_id(t, x, y),
                     oriented_edge_id(a.tet, a.perm[x], a.perm[y]));
        }
      }
    }
  }
  return c;
}

}  // namespace

Triangulation Triangulation::from_gluings(int num_tets, std::vector<Gluing> gluings) {
  if (num_tets <= 0) throw GluingError("number of tetrahedra must be positive");
  if (static_cast<int>(gluings.size()) != 2 * num_tets) {
    throw GluingError("expected " + std::to_string(2 * num_tets) +
                      " gluing records, found " + std::to_string(gluings.size()));
  }

  Triangulation tri;
  tri.num_tets_ = num_tets;
  tri.adj_.assign(num_tets, {});

  for (auto& g : gluings) {
    if (g.tet < 0 || g.tet >= num_tets || g.to_tet < 0 || g.to_tet >= num_tets)
      throw GluingError("tetrahedron index out of range in gluing of " +
                        face_name(g.tet, g.face));
    if (g.face < 0 || g.face > 3 || g.to_face < 0 || g.to_face > 3)
      throw GluingError("face index out of range in gluing of tet " +
                        std::to_string(g.tet));
    if (!is_permutation(g.perm))
      throw GluingError("perm is not a permutation of {0,1,2,3} in gluing of " +
                        face_name(g.tet, g.face));
    if (g.perm[g.face] != g.to_face)
      throw GluingError("perm does not map " + face_name(g.tet, g.face) + " onto " +
                        face_name(g.to_tet, g.to_face));
    if (g.tet == g.to_tet && g.face == g.to_face)
      throw GluingError(face_name(g.tet, g.face) + " is glued to itself");

    for (auto [t, f] : {std::pair{g.tet, g.face}, std::pair{g.to_tet, g.to_face}}) {
      if (tri.adj_[t][f].tet >= 0)
        throw GluingError(face_name(t, f) + " appears in more than one gluing");
    }
    tri.adj_[g.tet][g.face] = {g.to_tet, g.to_face, g.perm};
    tri.adj_[g.to_tet][g.to_face] = {g.tet, g.face, inverse(g.perm)};

    if (std::pair{g.to_tet, g.to_face} < std::pair{g.tet, g.face}) {
      g = {g.to_tet, g.to_face, g.tet, g.face, inverse(g.perm)};
    }
  }
  // With exactly 2N records and no face reused, every face is covered.
  std::sort(gluings.begin(), gluings.end(), [](const Gluing& a, const Gluing& b) {
    return std::pair{a.tet, a.face} < std::pair{b.tet, b.face};
  });
  tri.gluings_ = std::move(gluings);

  auto closure = close_edges(num_tets, tri.adj_);
  for (int t = 0; t < num_tets; ++t) {
    for (const auto& [a, b] : kEdgeVertices) {
      if (closure.uf.find(oriented_edge_id(t, a, b)) ==
          closure.uf.find(oriented_edge_id(t, b, a)))
        throw GluingError("edge " + std::to_string(a) + std::to_string(b) + " of tet " +
                          std::to_string(t) + " is identified with itself in reverse");
    }
  }
  const Skeleton sk = compute_skeleton(tri);
  if (sk.euler_characteristic() != 0) {
    throw GluingError(
        "gluing table does not describe a closed 3-manifold (V - E + F - T = " +
        std::to_string(sk.euler_characteristic()) + "; ideal or singular vertex links)");
  }
  return tri;
}

Triangulation Triangulation::relabeled(const std::vector<int>& relabel) const {
  std::vector<Gluing> out;
  out.reserve(gluings_.size());
  for (const auto& g : gluings_)
    out.push_back({relabel.at(g.tet), g.face, relabel.at(g.to_tet), g.to_face, g.perm});
  return from_gluings(num_tets_, std::move(out));
}

Skeleton compute_skeleton(const Triangulation& tri) {
  const int n = tri.num_tets();
  Skeleton sk;

  UnionFind corners(4 * n);
  for (int t = 0; t < n; ++t)
    for (int f = 0; f < 4; ++f) {
      const auto& a = tri.adjacent(t, f);
      for (int v = 0; v < 4; ++v)
        if (v != f) corners.unite(4 * t + v, 4 * a.tet + a.perm[v]);
    }
  int nv = 0;
  auto vclass = corners.dense_classes(&nv);
  sk.vertex_orbits.assign(nv, {});
  sk.vertex_of.assign(n, {});
  for (int t = 0; t < n; ++t)
    for (int v = 0; v < 4; ++v) {
      sk.vertex_of[t][v] = vclass[4 * t + v];
      sk.vertex_orbits[vclass[4 * t + v]].push_back({t, v});
    }

  std::vector<std::array<Triangulation::Adjacent, 4>> adj(n);
  for (int t = 0; t < n; ++t)
    for (int f = 0; f < 4; ++f) adj[t][f] = tri.adjacent(t, f);
  auto closure = close_edges(n, adj);

  sk.edge_of.assign(n, {});
  sk.edge_sign.assign(n, {});
  std::map<int, int> root_to_orbit;  // root of canonical oriented rep -> orbit
  std::vector<int> orbit_root;       // orbit -> root of its canonical direction
  for (int t = 0; t < n; ++t) {
    for (int e = 0; e < 6; ++e) {
      const auto [a, b] = kEdgeVertices[e];
      const int fwd = closure.uf.find(oriented_edge_id(t, a, b));
      const int bwd = closure.uf.find(oriented_edge_id(t, b, a));
      int orbit = -1;
      int sign = 1;
      if (auto it = root_to_orbit.find(fwd); it != root_to_orbit.end()) {
        orbit = it->second;
      } else if (auto it2 = root_to_orbit.find(bwd); it2 != root_to_orbit.end()) {
        orbit = it2->second;
        sign = -1;
      } else {
        orbit = static_cast<int>(orbit_root.size());
        orbit_root.push_back(fwd);
        root_to_orbit[fwd] = orbit;
        sk.edge_orbits.emplace_back();
      }
      sk.edge_of[t][e] = orbit;
      sk.edge_sign[t][e] = sign;
      sk.edge_orbits[orbit].push_back({t, e, sign});
    }
  }

  for (const auto& g : tri.gluings()) sk.face_pairs.push_back({g.tet, g.face, g.to_tet, g.to_face});
  return sk;
}

bool is_orientable(const Triangulation& tri) {
  const int n = tri.num_tets();
  std::vector<int> color(n, -1);
  for (int start = 0; start < n; ++start) {
    if (color[start] >= 0) continue;
    color[start] = 0;
    std::vector<int> stack{start};
    while (!stack.empty()) {
      const int t = stack.back();
      stack.pop_back();
      for (int f = 0; f < 4; ++f) {
        const auto& a = tri.adjacent(t, f);
        // Coherently oriented tetrahedra meet along odd gluing permutations.
        const int want = parity(a.perm) == 1 ? color[t] : 1 - color[t];
        if (color[a.tet] < 0) {
          color[a.tet] = want;
          stack.push_back(a.tet);
        } else if (color[a.tet] != want) {
          return false;
        }
      }
    }
  }
  return true;
}

bool is_one_vertex(const Triangulation& tri) {
  return compute_skeleton(tri).num_vertices() == 1;
}

Triangulation parse_triangulation(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  try {
    if (!doc.is_object()) throw ParseError("document must be a JSON object");
    if (!doc.contains("tets") || !doc["tets"].is_number_integer())
      throw ParseError("missing integer field \"tets\"");
    if (!doc.contains("gluings") || !doc["gluings"].is_array())
      throw ParseError("missing array field \"gluings\"");
    const int n = doc["tets"].get<int>();
    std::vector<Gluing> gluings;
    for (const auto& rec : doc["gluings"]) {
      if (!rec.is_object()) throw ParseError("gluing record must be an object");
      Gluing g;
      for (auto [key, field] : {std::pair{"tet", &g.tet}, std::pair{"face", &g.face},
                                std::pair{"to_tet", &g.to_tet},
                                std::pair{"to_face", &g.to_face}}) {
        if (!rec.contains(key) || !rec[key].is_number_integer())
          throw ParseError(std::string("gluing record missing integer field \"") + key + "\"");
        *field = rec[key].get<int>();
      }
      if (!rec.contains("perm") || !rec["perm"].is_array() || rec["perm"].size() != 4)
        throw ParseError("gluing record needs a 4-element \"perm\" array");
      for (int i = 0; i < 4; ++i) {
        if (!rec["perm"][i].is_number_integer()) throw ParseError("perm entries must be integers");
        g.perm[i] = rec["perm"][i].get<int>();
      }
      gluings.push_back(g);
    }
    return Triangulation::from_gluings(n, std::move(gluings));
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed triangulation document: ") + e.what());
  }
}

std::string serialize_triangulation(const Triangulation& tri) {
  json gl = json::array();
  for (const auto& g : tri.gluings()) {
    gl.push_back({{"tet", g.tet},
                  {"face", g.face},
                  {"to_tet", g.to_tet},
                  {"to_face", g.to_face},
                  {"perm", g.perm}});
  }
  json doc{{"tets", tri.num_tets()}, {"gluings", gl}};
  return doc.dump();
}

}  // namespace normsurf
