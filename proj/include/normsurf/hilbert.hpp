#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "normsurf/normal_coords.hpp"

namespace normsurf {

using BigInt = boost::multiprecision::cpp_int;
using BigVector = std::vector<BigInt>;

/// A maximal region of the admissible set: every triangle type plus at most
/// one quad/octagon type per tetrahedron, and octagons in at most one
/// tetrahedron.
struct SupportFace {
  /// Per tetrahedron: -1 for none, otherwise the coordinate offset 4..9.
  std::vector<int> middle;

  bool allows(int coord) const;
  /// Allowed global coordinate indices in increasing order.
  std::vector<int> columns() const;
  bool valid() const;
};

/// All maximal support faces in canonical order: quad-only faces first,
/// then octagon faces ordered by octagon tetrahedron and type.
std::vector<SupportFace> maximal_support_faces(int num_tets);

struct EnumerationLimits {
  /// Cap on intermediate rays / generators held per cone.
  std::size_t max_rays = 500000;
  /// Any Hilbert basis member heavier than this is a hard failure.
  std::int64_t max_basis_weight = 1 << 20;
  int workers = 1;
};

/// Orders by weight, then lexicographically by coordinates.
bool canonical_less(const SurfaceVector& a, const SurfaceVector& b);
void canonical_sort(std::vector<SurfaceVector>& v);

/// Primitive generators of the extreme rays of {x >= 0 : Ax = 0}, computed by
/// the double description method. `equations` rows have length `num_vars`.
std::vector<BigVector> extreme_rays(const std::vector<BigVector>& equations, int num_vars,
                                    std::size_t max_rays);

/// Hilbert basis of the monoid {x in N^n : Ax = 0}, one equation at a time by
/// completion over the previous basis.
std::vector<BigVector> hilbert_basis(const std::vector<BigVector>& equations, int num_vars,
                                     std::size_t max_rays);

/// Matching system restricted to the given global columns, with zero and
/// linearly dependent rows removed.
std::vector<BigVector> restricted_equations(const MatchingSystem& sys,
                                            const std::vector<int>& columns);

/// Hilbert basis of the carried cone on an arbitrary column support
/// (canonical order; octagon totals > 1 are kept).
std::vector<SurfaceVector> hilbert_basis_on(const MatchingSystem& sys,
                                            const std::vector<int>& columns,
                                            const EnumerationLimits& limits = {});

std::vector<SurfaceVector> enumerate_vertex_solutions(const Triangulation& tri,
                                                      const MatchingSystem& sys,
                                                      const EnumerationLimits& limits = {});

struct FundamentalSet {
  /// Canonical order.
  std::vector<SurfaceVector> members;
  /// Indices into members; filled by classify_fundamental().
  std::vector<int> tori;
  std::vector<int> non_tori;
  std::vector<int> other;
  bool classified = false;
};

FundamentalSet enumerate_fundamental(const Triangulation& tri, const MatchingSystem& sys,
                                     const EnumerationLimits& limits = {});

struct DecompositionTerm {
  std::int64_t coefficient;
  int member;  // index into FundamentalSet::members
  friend bool operator==(const DecompositionTerm&, const DecompositionTerm&) = default;
};

/// Expresses v as a non-negative combination of members. Among all
/// decompositions returns the lexicographically greatest coefficient tuple
/// over the canonical member order. Throws NotDecomposable.
std::vector<DecompositionTerm> decompose(const SurfaceVector& v, const FundamentalSet& fund);

}  // namespace normsurf
