#pragma once

#include <stdexcept>
#include <string>

namespace fpslab {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
  virtual const char* kind() const noexcept { return "Error"; }
};

#define FPSLAB_DEFINE_ERROR(Name)                                   \
  struct Name : Error {                                             \
    explicit Name(const std::string& msg) : Error(msg) {}           \
    const char* kind() const noexcept override { return #Name; }    \
  };

FPSLAB_DEFINE_ERROR(InvalidParams)
FPSLAB_DEFINE_ERROR(EmptySpectrum)
FPSLAB_DEFINE_ERROR(MassGapViolation)
FPSLAB_DEFINE_ERROR(NotSorted)
FPSLAB_DEFINE_ERROR(SpectrumMismatch)
FPSLAB_DEFINE_ERROR(IndexOutOfRange)
FPSLAB_DEFINE_ERROR(InvalidInterval)
FPSLAB_DEFINE_ERROR(QuadratureFailure)
FPSLAB_DEFINE_ERROR(BelowMassGap)
FPSLAB_DEFINE_ERROR(CutoffMismatch)
FPSLAB_DEFINE_ERROR(InvalidSubslab)
FPSLAB_DEFINE_ERROR(InsufficientModes)
FPSLAB_DEFINE_ERROR(PointOutsideSlab)
FPSLAB_DEFINE_ERROR(TooManyModes)
FPSLAB_DEFINE_ERROR(ModeMismatch)
FPSLAB_DEFINE_ERROR(UnknownPreset)
FPSLAB_DEFINE_ERROR(ConfigError)

#undef FPSLAB_DEFINE_ERROR

}  // namespace fpslab
