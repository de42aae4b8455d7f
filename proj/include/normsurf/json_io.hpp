#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "normsurf/branched.hpp"
#include "normsurf/genus.hpp"
#include "normsurf/hilbert.hpp"
#include "normsurf/normal_coords.hpp"
#include "normsurf/surface_topology.hpp"
#include "normsurf/triangulation.hpp"

namespace normsurf::io {

using json = nlohmann::ordered_json;

/// {"coords": [[10 entries] per tetrahedron]}
json vector_json(const SurfaceVector& v);
/// Throws ParseError / DimensionMismatch / NotAdmissible (negative entry).
SurfaceVector parse_vector(std::string_view text);
SurfaceVector vector_from_json(const json& doc);
/// Accepts a single vector document or a JSON array of them.
std::vector<SurfaceVector> parse_vectors(std::string_view text);

json skeleton_json(const Skeleton& sk);
json matching_json(const MatchingSystem& sys);
json admissibility_json(const AdmissibilityReport& rep);
json fundamental_json(const FundamentalSet& fund);
json decomposition_terms_json(const std::vector<DecompositionTerm>& terms);
json component_json(const ComponentReport& c);
json curve_class_json(const CurveClass& c);
json double_curve_json(const DoubleCurve& c);
json intersection_json(const IntersectionReport& rep);
json carrier_json(const BranchedCarrier& car);
json disk_result_json(const DiskSearchResult& r);
json decomposition_json(const Decomposition& d);
json regular_json(const RegularSetReport& r);

/// Compact single-line dump with stable key order.
std::string dump(const json& j);

}  // namespace normsurf::io
