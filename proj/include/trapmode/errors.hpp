#pragma once

#include <stdexcept>
#include <string>

namespace trapmode {

// Every failure raised by the library derives from Error; the CLI maps the
// type to a process exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define TRAPMODE_DEFINE_ERROR(Name)          \
  class Name : public Error {                \
   public:                                   \
    explicit Name(const std::string& what)   \
        : Error(#Name ": " + what) {}        \
  }

TRAPMODE_DEFINE_ERROR(InvalidArgument);
TRAPMODE_DEFINE_ERROR(DimensionMismatch);
TRAPMODE_DEFINE_ERROR(NoBoundState);
TRAPMODE_DEFINE_ERROR(MultipleBoundStates);
TRAPMODE_DEFINE_ERROR(ParameterOverflow);
TRAPMODE_DEFINE_ERROR(TruncationTooSmall);
TRAPMODE_DEFINE_ERROR(NonConvergent);
TRAPMODE_DEFINE_ERROR(NoUniqueFixedPoint);
TRAPMODE_DEFINE_ERROR(InvalidState);
TRAPMODE_DEFINE_ERROR(StepSizeTooLarge);
TRAPMODE_DEFINE_ERROR(NonFiniteState);
TRAPMODE_DEFINE_ERROR(PositivityLost);
TRAPMODE_DEFINE_ERROR(CoherenceTooSmall);

#undef TRAPMODE_DEFINE_ERROR

}  // namespace trapmode
