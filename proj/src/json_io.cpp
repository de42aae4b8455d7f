#include "normsurf/json_io.hpp"

#include "normsurf/errors.hpp"

namespace normsurf::io {

json vector_json(const SurfaceVector& v) {
  json rows = json::array();
  for (int t = 0; t < v.num_tets(); ++t) {
    json row = json::array();
    for (int i = 0; i < kCoordsPerTet; ++i) row.push_back(v[t * kCoordsPerTet + i]);
    rows.push_back(std::move(row));
  }
  return json{{"coords", std::move(rows)}};
}

SurfaceVector vector_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("coords") || !doc["coords"].is_array())
    throw ParseError("surface vector needs an array field \"coords\"");
  std::vector<std::int64_t> flat;
  for (const auto& row : doc["coords"]) {
    if (!row.is_array() || row.size() != kCoordsPerTet)
      throw DimensionMismatch("each coords row must have " + std::to_string(kCoordsPerTet) +
                              " entries");
    for (const auto& x : row) {
      if (!x.is_number_integer()) throw ParseError("coordinates must be integers");
      flat.push_back(x.get<std::int64_t>());
    }
  }
  return SurfaceVector::from_coords(std::move(flat));
}

namespace {

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

SurfaceVector parse_vector(std::string_view text) { return vector_from_json(parse_json(text)); }

std::vector<SurfaceVector> parse_vectors(std::string_view text) {
  const json doc = parse_json(text);
  std::vector<SurfaceVector> out;
  if (doc.is_array()) {
    for (const auto& d : doc) out.push_back(vector_from_json(d));
  } else {
    out.push_back(vector_from_json(doc));
  }
  return out;
}

json skeleton_json(const Skeleton& sk) {
  json verts = json::array();
  for (const auto& orbit : sk.vertex_orbits) {
    json o = json::array();
    for (const auto& c : orbit) o.push_back({{"tet", c.tet}, {"vertex", c.vertex}});
    verts.push_back(std::move(o));
  }
  json edges = json::array();
  for (const auto& orbit : sk.edge_orbits) {
    json o = json::array();
    for (const auto& e : orbit) o.push_back({{"tet", e.tet}, {"edge", e.edge}, {"sign", e.sign}});
    edges.push_back(std::move(o));
  }
  json faces = json::array();
  for (const auto& f : sk.face_pairs)
    faces.push_back({{"tet", f.tet}, {"face", f.face}, {"to_tet", f.to_tet}, {"to_face", f.to_face}});
  return json{{"vertices", sk.num_vertices()},
              {"edges", sk.num_edges()},
              {"faces", sk.num_faces()},
              {"tets", sk.num_tets()},
              {"euler_characteristic", sk.euler_characteristic()},
              {"vertex_orbits", std::move(verts)},
              {"edge_orbits", std::move(edges)},
              {"face_pairs", std::move(faces)}};
}

json matching_json(const MatchingSystem& sys) {
  json rows = json::array();
  for (const auto& r : sys.rows)
    rows.push_back({{"tet", r.tet},
                    {"face", r.face},
                    {"corner", r.corner},
                    {"to_tet", r.to_tet},
                    {"to_face", r.to_face},
                    {"to_corner", r.to_corner},
                    {"coeffs", r.coeffs}});
  return json{{"num_tets", sys.num_tets}, {"columns", sys.num_columns()}, {"rows", std::move(rows)}};
}

json admissibility_json(const AdmissibilityReport& rep) {
  json j{{"admissible", rep.admissible}, {"violated_rows", rep.violated_rows}};
  j["type_conflict_tet"] = rep.type_conflict_tet ? json(*rep.type_conflict_tet) : json(nullptr);
  j["octagon_excess"] = rep.octagon_excess;
  j["message"] = rep.describe();
  return j;
}

json fundamental_json(const FundamentalSet& fund) {
  json members = json::array();
  for (const auto& m : fund.members) members.push_back(vector_json(m));
  json j{{"count", fund.members.size()}, {"members", std::move(members)}};
  if (fund.classified) {
    j["tori"] = fund.tori;
    j["non_tori"] = fund.non_tori;
    j["other"] = fund.other;
  }
  return j;
}

json decomposition_terms_json(const std::vector<DecompositionTerm>& terms) {
  json out = json::array();
  for (const auto& t : terms) out.push_back({{"member", t.member}, {"coefficient", t.coefficient}});
  return out;
}

json component_json(const ComponentReport& c) {
  return json{{"component", c.component},
              {"euler", c.euler},
              {"orientable", c.orientable},
              {"genus", c.genus},
              {"kind", to_string(c.kind)},
              {"is_vertex_linking", c.is_vertex_linking},
              {"boundary_components", c.boundary_components},
              {"coords", vector_json(c.coords)["coords"]}};
}

json curve_class_json(const CurveClass& c) {
  return json{{"coords", c.coords},
              {"essential", c.essential},
              {"meridian", c.meridian},
              {"torsion_ambiguous", c.torsion_ambiguous}};
}

json double_curve_json(const DoubleCurve& c) {
  json j{{"surface_a", c.surface_a},
         {"surface_b", c.surface_b},
         {"component_a", c.component_a},
         {"component_b", c.component_b},
         {"length", c.walk_a.size()}};
  j["class_a"] = c.class_a ? curve_class_json(*c.class_a) : json(nullptr);
  j["class_b"] = c.class_b ? curve_class_json(*c.class_b) : json(nullptr);
  return j;
}

json intersection_json(const IntersectionReport& rep) {
  json curves = json::array();
  for (const auto& c : rep.curves) curves.push_back(double_curve_json(c));
  return json{{"triple_points", rep.triple_points},
              {"double_curves", rep.double_curves},
              {"reduced_double_curves", rep.reduced_double_curves},
              {"complexity", {rep.triple_points, rep.reduced_double_curves}},
              {"conservative", rep.conservative},
              {"curves", std::move(curves)}};
}

json carrier_json(const BranchedCarrier& car) {
  json sectors = json::array();
  for (const auto& s : car.sectors()) {
    json j{{"id", s.id}, {"columns", s.columns}};
    j["junction_row"] = s.junction_row >= 0 ? json(s.junction_row) : json(nullptr);
    sectors.push_back(std::move(j));
  }
  json arcs = json::array();
  json equations = json::array();
  for (const auto& a : car.branch_arcs()) {
    arcs.push_back({{"id", a.id},
                    {"row", a.row},
                    {"single", a.single},
                    {"pair", a.pair},
                    {"toward", a.toward == 0 ? "source" : "target"},
                    {"nodes", a.nodes}});
    equations.push_back({a.single, a.pair[0], a.pair[1]});
  }
  json nodes = json::array();
  for (const auto& n : car.nodes()) nodes.push_back({{"edge_orbit", n.edge_orbit}, {"end", n.end}});
  json circuits = json::array();
  for (const auto& c : car.circuits()) circuits.push_back({{"arcs", c.arcs}, {"closed", c.closed}});
  const auto cone = carried_cone(car);
  return json{{"support", car.support()},
              {"sectors", std::move(sectors)},
              {"branch_arcs", std::move(arcs)},
              {"branch_equations", std::move(equations)},
              {"zero_rows", car.zero_rows()},
              {"nodes", std::move(nodes)},
              {"circuits", std::move(circuits)},
              {"carried_cone", {{"columns", cone.columns}, {"equations", cone.equations}}}};
}

json disk_result_json(const DiskSearchResult& r) {
  json j{{"status", to_string(r.status)},
         {"direction", to_string(r.direction)},
         {"component", r.component},
         {"bound", r.bound}};
  j["disk"] = r.disk ? vector_json(*r.disk) : json(nullptr);
  j["reason"] = r.reason.empty() ? json(nullptr) : json(r.reason);
  return j;
}

json decomposition_json(const Decomposition& d) {
  json audit = json::array();
  for (const auto& a : d.audit)
    audit.push_back({{"member", a.member},
                     {"from", a.from},
                     {"to", a.to},
                     {"twists", a.twists},
                     {"cap", a.cap},
                     {"note", a.note}});
  return json{{"euler", d.euler},
              {"genus", d.genus},
              {"base", vector_json(d.base)},
              {"base_terms", decomposition_terms_json(d.base_terms)},
              {"torus_terms", decomposition_terms_json(d.torus_terms)},
              {"audit", std::move(audit)},
              {"arc_budget", d.arc_budget ? json(*d.arc_budget) : json(nullptr)}};
}

json regular_json(const RegularSetReport& r) {
  json pairs = json::array();
  for (const auto& p : r.pairs) {
    json curves = json::array();
    for (const auto& c : p.curves) curves.push_back(double_curve_json(c));
    pairs.push_back({{"a", p.a}, {"b", p.b}, {"curves", std::move(curves)}});
  }
  return json{{"triple_points", r.triple_points},
              {"pairs", std::move(pairs)},
              {"verdict", to_string(r.verdict)},
              {"conservative", r.conservative},
              {"engulfing_verified", r.engulfing_verified}};
}

std::string dump(const json& j) { return j.dump(); }

}  // namespace normsurf::io
