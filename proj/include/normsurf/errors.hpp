#pragma once

#include <stdexcept>
#include <string>

namespace normsurf {

/// Base class for every domain error raised by the library. `code()` is the
/// stable machine-readable name used in CLI error objects.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

#define NORMSURF_DEFINE_ERROR(Name)                                       \
  class Name : public Error {                                             \
   public:                                                                \
    explicit Name(const std::string& what) : Error(#Name, what) {}        \
  };

NORMSURF_DEFINE_ERROR(ParseError)
NORMSURF_DEFINE_ERROR(GluingError)
NORMSURF_DEFINE_ERROR(DimensionMismatch)
NORMSURF_DEFINE_ERROR(NotOneVertex)
NORMSURF_DEFINE_ERROR(NotAdmissible)
NORMSURF_DEFINE_ERROR(ResourceLimit)
NORMSURF_DEFINE_ERROR(NotDecomposable)
NORMSURF_DEFINE_ERROR(Unsupported)
NORMSURF_DEFINE_ERROR(NotATorus)
NORMSURF_DEFINE_ERROR(EmptySupport)
NORMSURF_DEFINE_ERROR(NotCarried)
NORMSURF_DEFINE_ERROR(UnknownComponent)
NORMSURF_DEFINE_ERROR(NotBalanced)
NORMSURF_DEFINE_ERROR(OpenArcs)
NORMSURF_DEFINE_ERROR(NotIsolated)

#undef NORMSURF_DEFINE_ERROR

/// Raised by haken_sum; carries the first offending tetrahedron.
class IncompatibleSummands : public Error {
 public:
  IncompatibleSummands(int tet, std::string constraint)
      : Error("IncompatibleSummands",
              "incompatible summands in tetrahedron " + std::to_string(tet) +
                  ": " + constraint),
        tet_(tet),
        constraint_(std::move(constraint)) {}
  int tet() const noexcept { return tet_; }
  const std::string& constraint() const noexcept { return constraint_; }

 private:
  int tet_;
  std::string constraint_;
};

}  // namespace normsurf
