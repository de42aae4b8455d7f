#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "normsurf/hilbert.hpp"
#include "normsurf/surface_topology.hpp"
#include "normsurf/triangulation.hpp"

namespace normsurf {

/// Torus members (octagon-free, connected, chi = 0) and everything else,
/// each in canonical member order. Requires a classified set.
std::pair<std::vector<int>, std::vector<int>> split_fundamentals(const FundamentalSet& fund);

struct AuditEvent {
  int member = 0;
  std::int64_t from = 0;
  std::int64_t to = 0;
  std::int64_t twists = 0;  // m of the m-fold Dehn twist
  std::int64_t cap = 0;
  std::string note;
};

/// S = base + sum c_i T_i. The base is the non-torus part and holds the
/// octagon, if any.
struct Decomposition {
  SurfaceVector base;
  std::vector<DecompositionTerm> base_terms;
  std::vector<DecompositionTerm> torus_terms;
  std::vector<AuditEvent> audit;
  std::int64_t euler = 0;
  std::int64_t genus = 0;
  /// Caller-supplied bound on associated arc length, carried through reports
  /// unchanged; nothing here derives it.
  std::optional<std::int64_t> arc_budget;

  SurfaceVector resum(const FundamentalSet& fund) const;
};

/// Lazily enumerates coefficient tuples over the fundamental members in
/// lexicographic order (first member slowest). Non-torus members with
/// chi < 0 are bounded by floor((2g - 2) / |chi|); all other members by
/// `coeff_bound`. Emits tuples whose sum is nonzero and admissible with even
/// chi in [2 - 2g, 2].
class CandidateStream {
 public:
  CandidateStream(const Triangulation& tri, const FundamentalSet& fund, std::int64_t genus_bound,
                  std::int64_t coeff_bound);

  std::optional<Decomposition> next();
  const std::vector<std::int64_t>& bounds() const { return bounds_; }

 private:
  bool advance(int from);
  /// First prefix position whose partial sum cannot be completed, or -1.
  int dead_prefix() const;

  const FundamentalSet* fund_;
  MatchingSystem sys_;
  std::vector<std::int64_t> euler_;
  std::vector<char> is_torus_;
  std::vector<std::int64_t> bounds_;
  std::vector<std::int64_t> coeffs_;
  std::int64_t genus_bound_;
  bool started_ = false;
  bool done_ = false;
};

CandidateStream candidate_stream(const Triangulation& tri, const FundamentalSet& fund,
                                 std::int64_t genus_bound, std::int64_t coeff_bound);

/// Cyclic sign sequence: +1 / -1 per arc crossing.
struct BalancedSequence {
  std::vector<int> signs;

  /// Parses a string over {+, -}; throws ParseError on anything else.
  static BalancedSequence parse(const std::string& text);
  std::string str() const;
  bool balanced() const;
};

/// Number of rounds of simultaneous (+,-) adjacent-pair removal needed to
/// empty the cyclic sequence. Throws NotBalanced.
std::int64_t balanced_reduce(const BalancedSequence& seq);

struct TrivialCurveCount {
  std::int64_t k = 0;
  /// Curves counted trivial through homology only (nonorientable F, where
  /// torsion is invisible).
  std::int64_t ambiguous = 0;
  std::int64_t curves = 0;
  std::int64_t double_arcs = 0;
};

/// Double curves of F and lambda that are null-homologous in F.
TrivialCurveCount trivial_curve_bound(const Triangulation& tri, const SurfaceVector& f,
                                      const SurfaceVector& lambda);

/// cap(T, H) = max(1, trivial(T, H) + ceil(double arcs / 2) + 2g).
std::int64_t twist_cap(const Triangulation& tri, const SurfaceVector& torus,
                       const SurfaceVector& base, std::int64_t genus);

/// Lowers the coefficient of each isolated torus term above its cap to the
/// cap, recording the twist. Throws NotIsolated when an isolated torus meets
/// another torus term of the decomposition.
Decomposition twist_normalize(const Triangulation& tri, const FundamentalSet& fund,
                              const Decomposition& decomp, const std::set<int>& isolated);

enum class RegularVerdict { regular, not_regular, regular_modulo_meridian };
std::string to_string(RegularVerdict v);

struct PairCurves {
  int a = 0;
  int b = 0;
  std::vector<DoubleCurve> curves;
};

struct RegularSetReport {
  std::int64_t triple_points = 0;
  std::vector<PairCurves> pairs;
  RegularVerdict verdict = RegularVerdict::regular_modulo_meridian;
  bool conservative = false;
  /// The solid-torus property of the engulfing frontier is never checked.
  bool engulfing_verified = false;
};

/// Input order does not matter: tori are processed canonically and indices in
/// the report refer to that canonical order.
RegularSetReport regular_set_check(const Triangulation& tri, std::vector<SurfaceVector> tori);

}  // namespace normsurf
