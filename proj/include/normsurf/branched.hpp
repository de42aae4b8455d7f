#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "normsurf/hilbert.hpp"
#include "normsurf/normal_coords.hpp"
#include "normsurf/triangulation.hpp"

namespace normsurf {

/// A class of disk types forced to carry equal weight. Junction sectors are
/// auxiliary: they stand for the merged sheet at a face where two stacks meet
/// two stacks.
struct Sector {
  int id = 0;
  std::vector<int> columns;  // global coordinate indices; empty for a junction
  int junction_row = -1;     // matching row for a junction sector
};

/// One arc of the branch locus: the arc type (face, corner) on a glued face
/// where sheets merge. Carries the branch equation single = pair[0] + pair[1]
/// and points toward the side of the face where the single sheet continues.
struct BranchArc {
  int id = 0;
  int row = 0;  // matching-system row
  int single = 0;
  std::array<int, 2> pair{};
  /// 0: toward the row's source tetrahedron, 1: toward its target.
  int toward = 0;
  /// Locus nodes at the two ends (see LocusNode).
  std::array<int, 2> nodes{};
};

/// An end of an edge orbit: the branch locus meets edges only near vertices.
struct LocusNode {
  int edge_orbit = 0;
  int end = 0;  // 0 = orbit start, 1 = orbit end
};

/// A trail of branch arcs joined end to end at locus nodes. Closed trails
/// model the annuli of the vertical boundary.
struct Circuit {
  std::vector<int> arcs;
  bool closed = true;
};

class BranchedCarrier {
 public:
  const Triangulation& triangulation() const { return tri_; }
  /// Supported global columns, increasing.
  const std::vector<int>& support() const { return support_; }
  bool supports(int column) const { return sector_of_column_[column] >= 0; }
  int sector_of_column(int column) const { return sector_of_column_[column]; }
  const std::vector<Sector>& sectors() const { return sectors_; }
  const std::vector<BranchArc>& branch_arcs() const { return arcs_; }
  const std::vector<LocusNode>& nodes() const { return nodes_; }
  /// Matching rows restricted to the support that force their columns to 0.
  const std::vector<int>& zero_rows() const { return zero_rows_; }
  const std::vector<Circuit>& circuits() const { return circuits_; }
  const MatchingSystem& system() const { return sys_; }

  /// Sector values of a vector (junction sectors get their merged sum).
  std::vector<std::int64_t> sector_values(const SurfaceVector& v) const;

 private:
  friend BranchedCarrier build_carrier(const Triangulation& tri, std::vector<int> columns);
  explicit BranchedCarrier(const Triangulation& tri) : tri_(tri) {}

  Triangulation tri_;
  MatchingSystem sys_;
  std::vector<int> support_;
  std::vector<int> sector_of_column_;
  std::vector<Sector> sectors_;
  std::vector<BranchArc> arcs_;
  std::vector<LocusNode> nodes_;
  std::vector<int> zero_rows_;
  std::vector<Circuit> circuits_;
};

/// Throws EmptySupport for an empty support, two quad/octagon types in one
/// tetrahedron, or octagons in more than one place.
BranchedCarrier build_carrier(const Triangulation& tri, std::vector<int> columns);
BranchedCarrier build_carrier(const Triangulation& tri, const SupportFace& face);
/// Nonzero columns of a vector.
std::vector<int> support_of(const SurfaceVector& v);

/// The matching system restricted to the carrier's columns.
struct CarriedCone {
  std::vector<int> columns;
  std::vector<std::vector<int>> equations;  // one row per nonzero restricted matching row
};
CarriedCone carried_cone(const BranchedCarrier& carrier);

/// Admissible with support inside the carrier.
bool carries(const BranchedCarrier& carrier, const SurfaceVector& v);
/// Carried and positive on every sector.
bool fully_carries(const BranchedCarrier& carrier, const SurfaceVector& v);
/// Carrier on the vector's own support. Throws NotCarried.
BranchedCarrier sub_branched(const BranchedCarrier& carrier, const SurfaceVector& v);

std::vector<Circuit> vertical_boundary_components(const BranchedCarrier& carrier);

enum class DiskDirection { inward, outward };
std::string to_string(DiskDirection d);

enum class DiskStatus { found, not_found, inconclusive };
std::string to_string(DiskStatus s);

struct DiskSearchResult {
  DiskStatus status = DiskStatus::not_found;
  DiskDirection direction = DiskDirection::inward;
  int component = 0;
  std::optional<SurfaceVector> disk;
  std::int64_t bound = 0;
  /// Why a NotFound is certain: "no boundary circles", "empty polytope" or
  /// "bounded polytope".
  std::string reason;
};

/// Per matching row, the required (source side minus target side) arc count
/// for a disk bounded by the given circuit.
std::vector<std::int64_t> circuit_deficits(const BranchedCarrier& carrier, int component,
                                           DiskDirection direction);

/// Bounded search for a carried disk whose boundary runs once along the
/// circuit. Throws UnknownComponent.
DiskSearchResult disk_search(const BranchedCarrier& carrier, int component,
                             DiskDirection direction, std::int64_t max_weight, int workers = 1);

/// Independent check of a claimed disk: support, deficits recomputed from the
/// full matching system, and a reconstructed complex that is one disk with one
/// boundary circle.
bool verify_disk(const BranchedCarrier& carrier, int component, DiskDirection direction,
                 const SurfaceVector& v, std::int64_t max_weight, std::string* why = nullptr);

/// Some Hilbert basis member of the carried cone has a sphere component.
bool carries_sphere(const BranchedCarrier& carrier, const EnumerationLimits& limits = {});

}  // namespace normsurf
